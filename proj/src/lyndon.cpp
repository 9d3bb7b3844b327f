#include "sigvol/lyndon.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigvol {

LyndonOrder::LyndonOrder(int alphabet_dim, LyndonConvention convention)
    : alphabet_dim_(alphabet_dim), convention_(convention) {
  if (alphabet_dim < 1) throw std::invalid_argument("alphabet_dim must be >= 1");
  rank_.resize(alphabet_dim);
  letter_of_rank_.resize(alphabet_dim);
  for (int i = 1; i <= alphabet_dim; ++i) {
    int r = convention == LyndonConvention::paper ? alphabet_dim - i : i - 1;
    rank_[i - 1] = r;
    letter_of_rank_[r] = i;
  }
}

LyndonOrder LyndonOrder::paper_with_greatest(int alphabet_dim, Letter greatest) {
  LyndonOrder order(alphabet_dim, LyndonConvention::paper);
  if (greatest < 1 || greatest > alphabet_dim)
    throw std::invalid_argument("avoid letter outside alphabet");
  // Pull `greatest` to rank 0, keeping the relative order of the rest.
  std::vector<Letter> by_rank;
  by_rank.push_back(greatest);
  for (Letter l : order.letter_of_rank_)
    if (l != greatest) by_rank.push_back(l);
  order.letter_of_rank_ = by_rank;
  for (int r = 0; r < alphabet_dim; ++r) order.rank_[by_rank[r] - 1] = r;
  return order;
}

int LyndonOrder::rank(Letter letter) const {
  if (letter < 1 || letter > alphabet_dim_)
    throw std::invalid_argument("letter outside alphabet");
  return rank_[letter - 1];
}

bool LyndonOrder::word_less(const Word& a, const Word& b) const {
  std::size_t n = std::min(a.length(), b.length());
  for (std::size_t i = 0; i < n; ++i) {
    int ra = rank(a.letter(i)), rb = rank(b.letter(i));
    if (ra != rb) return ra < rb;
  }
  return a.length() < b.length();
}

bool is_lyndon(const Word& w, const LyndonOrder& order) {
  if (w.empty()) throw std::invalid_argument("the empty word is not eligible for the Lyndon test");
  for (std::size_t k = 1; k < w.length(); ++k) {
    if (!order.word_less(w, w.rotated(k))) return false;
  }
  return true;
}

std::vector<Word> lyndon_words(int alphabet_dim, int max_len, const LyndonOrder& order) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  // Duval's generation: visits all Lyndon words of length <= max_len in
  // lexicographic order of the rank sequence.
  std::vector<Word> out;
  std::vector<int> t{0};
  while (!t.empty()) {
    std::vector<std::uint8_t> letters(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      letters[i] = static_cast<std::uint8_t>(order.letter_of_rank(t[i]));
    out.emplace_back(std::move(letters));
    std::size_t m = t.size();
    while (t.size() < static_cast<std::size_t>(max_len)) t.push_back(t[t.size() % m]);
    while (!t.empty() && t.back() == alphabet_dim - 1) t.pop_back();
    if (!t.empty()) ++t.back();
  }
  std::stable_sort(out.begin(), out.end(), [&](const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return order.word_less(a, b);
  });
  return out;
}

std::vector<Word> lyndon_words(int alphabet_dim, int max_len) {
  return lyndon_words(alphabet_dim, max_len, LyndonOrder(alphabet_dim));
}

std::vector<Word> lyndon_factorization(const Word& w, const LyndonOrder& order) {
  if (w.empty()) throw std::invalid_argument("cannot factorize the empty word");
  // Duval's factorization over the rank sequence.
  std::vector<Word> factors;
  const std::size_t n = w.length();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1, k = i;
    while (j < n && order.rank(w.letter(k)) <= order.rank(w.letter(j))) {
      if (order.rank(w.letter(k)) < order.rank(w.letter(j)))
        k = i;
      else
        ++k;
      ++j;
    }
    std::size_t len = j - k;
    while (i <= k) {
      std::vector<std::uint8_t> piece(w.letters().begin() + i, w.letters().begin() + i + len);
      factors.emplace_back(std::move(piece));
      i += len;
    }
  }
  return factors;
}

ShufflePolynomial ShufflePolynomial::unit(int alphabet_dim) {
  return monomial(alphabet_dim, {}, 1);
}

ShufflePolynomial ShufflePolynomial::monomial(int alphabet_dim, FactorPowers factors,
                                              const Rational& c) {
  ShufflePolynomial sp(alphabet_dim);
  sp.add_term(std::move(factors), c);
  return sp;
}

void ShufflePolynomial::add_term(FactorPowers factors, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(factors), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ShufflePolynomial& ShufflePolynomial::operator+=(const ShufflePolynomial& other) {
  if (alphabet_dim_ != other.alphabet_dim_)
    throw std::invalid_argument("alphabet mismatch in shuffle polynomial sum");
  for (const auto& [f, c] : other.terms_) add_term(f, c);
  return *this;
}

ShufflePolynomial& ShufflePolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [f, coeff] : terms_) coeff *= c;
  return *this;
}

std::string ShufflePolynomial::str(const LyndonOrder& order) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [factors, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "−";
      first = false;
    } else {
      out += c < 0 ? " − " : " + ";
    }
    std::vector<std::pair<Word, int>> ordered(factors.begin(), factors.end());
    std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
      return order.word_less(b.first, a.first);
    });
    std::string mono;
    for (const auto& [v, p] : ordered) {
      if (!mono.empty()) mono += " ⧢ ";
      mono += v.str();
      if (p > 1) mono += "^⧢" + std::to_string(p);
    }
    if (mono.empty()) mono = "ø";
    if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "·" + mono;
  }
  return out;
}

std::string ShufflePolynomial::str() const { return str(LyndonOrder(alphabet_dim_)); }

TensorPoly expand(const ShufflePolynomial& sp) {
  TensorPoly out(sp.alphabet_dim());
  for (const auto& [factors, c] : sp.terms()) {
    TensorPoly mono = TensorPoly::unit(sp.alphabet_dim());
    for (const auto& [v, p] : factors)
      mono = shuffle(mono, shuffle_pow(TensorPoly::monomial(sp.alphabet_dim(), v), p));
    mono *= c;
    out += mono;
  }
  return out;
}

namespace {

using Memo = std::map<Word, ShufflePolynomial, GradedLexLess>;

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Triangular elimination: shuffle the word's Lyndon factors, divide by the
// multinomial of repeated factors, subtract, recurse on the remainder. The
// remainder words are strictly smaller under the order, so this terminates.
const ShufflePolynomial& radford_rec(const Word& w, const LyndonOrder& order, int alphabet_dim,
                                     Memo& memo) {
  if (auto it = memo.find(w); it != memo.end()) return it->second;

  ShufflePolynomial result(alphabet_dim);
  if (w.empty()) {
    result = ShufflePolynomial::unit(alphabet_dim);
  } else if (is_lyndon(w, order)) {
    result = ShufflePolynomial::monomial(alphabet_dim, {{w, 1}});
  } else {
    std::vector<Word> factors = lyndon_factorization(w, order);
    ShufflePolynomial::FactorPowers powers;
    for (const Word& f : factors) ++powers[f];

    TensorPoly product = TensorPoly::unit(alphabet_dim);
    Rational multiplicity = 1;
    for (const auto& [v, p] : powers) {
      product = shuffle(product, shuffle_pow(TensorPoly::monomial(alphabet_dim, v), p));
      multiplicity *= factorial(p);
    }
    if (product.coeff(w) != multiplicity)
      throw std::logic_error("Lyndon factorization lost triangularity for word " + w.str());

    result = ShufflePolynomial::monomial(alphabet_dim, powers, Rational(1) / multiplicity);
    for (const auto& [v, c] : product.terms()) {
      if (v == w) continue;
      ShufflePolynomial part = radford_rec(v, order, alphabet_dim, memo);
      part *= -c / multiplicity;
      result += part;
    }
  }
  return memo.emplace(w, std::move(result)).first->second;
}

}  // namespace

ShufflePolynomial radford_decompose(const Word& w, const LyndonOrder& order) {
  Memo memo;
  return radford_rec(w, order, order.alphabet_dim(), memo);
}

ShufflePolynomial radford_decompose(const Word& w, int alphabet_dim) {
  return radford_decompose(w, LyndonOrder(alphabet_dim));
}

ShufflePolynomial avoid_letter_decompose(const Word& w, Letter avoid, int alphabet_dim) {
  return radford_decompose(w, LyndonOrder::paper_with_greatest(alphabet_dim, avoid));
}

}  // namespace sigvol
