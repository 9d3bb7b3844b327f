#include "sigvol/tensor_poly.hpp"

#include <stdexcept>

namespace sigvol {

std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

TensorPoly::TensorPoly(int alphabet_dim) : alphabet_dim_(alphabet_dim) {
  if (alphabet_dim < 1) throw std::invalid_argument("alphabet_dim must be >= 1");
}

TensorPoly::TensorPoly(int alphabet_dim, TermMap terms) : TensorPoly(alphabet_dim) {
  for (auto it = terms.begin(); it != terms.end();) {
    check_word(it->first);
    if (it->second == 0)
      it = terms.erase(it);
    else
      ++it;
  }
  terms_ = std::move(terms);
  recompute_max_order();
}

TensorPoly TensorPoly::unit(int alphabet_dim) {
  return monomial(alphabet_dim, Word{}, 1);
}

TensorPoly TensorPoly::monomial(int alphabet_dim, const Word& w, const Rational& c) {
  TensorPoly p(alphabet_dim);
  p.add_term(w, c);
  return p;
}

void TensorPoly::check_word(const Word& w) const {
  if (w.max_letter() > alphabet_dim_)
    throw std::invalid_argument("word \"" + w.str() + "\" uses letters outside alphabet of size " +
                                std::to_string(alphabet_dim_));
}

void TensorPoly::recompute_max_order() {
  max_order_ = terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.length());
}

Rational TensorPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

void TensorPoly::add_term(const Word& w, const Rational& c) {
  if (c == 0) return;
  check_word(w);
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  recompute_max_order();
}

TensorPoly& TensorPoly::operator+=(const TensorPoly& other) {
  if (alphabet_dim_ != other.alphabet_dim_)
    throw std::invalid_argument("alphabet mismatch in tensor polynomial sum");
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

TensorPoly& TensorPoly::operator-=(const TensorPoly& other) {
  if (alphabet_dim_ != other.alphabet_dim_)
    throw std::invalid_argument("alphabet mismatch in tensor polynomial sum");
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

TensorPoly& TensorPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [w, coeff] : terms_) coeff *= c;
  }
  recompute_max_order();
  return *this;
}

TensorPoly TensorPoly::operator-() const {
  TensorPoly out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

std::string TensorPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "−";
      first = false;
    } else {
      out += c < 0 ? " − " : " + ";
    }
    std::string word_text = w.empty() ? "ø" : w.str();
    if (mag == 1)
      out += word_text;
    else
      out += to_string(mag) + "·" + word_text;
  }
  return out;
}

namespace {

// Recursive definition: (v i) sh (w j) = (v sh (w j)) i + ((v i) sh w) j.
void shuffle_words_rec(const Word& v, std::size_t nv, const Word& w, std::size_t nw,
                       std::vector<std::uint8_t>& tail, TensorPoly& out) {
  if (nv == 0 && nw == 0) {
    std::vector<std::uint8_t> letters(tail.rbegin(), tail.rend());
    out.add_term(Word(std::move(letters)), 1);
    return;
  }
  if (nv > 0) {
    tail.push_back(static_cast<std::uint8_t>(v.letter(nv - 1)));
    shuffle_words_rec(v, nv - 1, w, nw, tail, out);
    tail.pop_back();
  }
  if (nw > 0) {
    tail.push_back(static_cast<std::uint8_t>(w.letter(nw - 1)));
    shuffle_words_rec(v, nv, w, nw - 1, tail, out);
    tail.pop_back();
  }
}

}  // namespace

TensorPoly shuffle_words(const Word& v, const Word& w, int alphabet_dim) {
  TensorPoly out(alphabet_dim);
  std::vector<std::uint8_t> tail;
  tail.reserve(v.length() + w.length());
  shuffle_words_rec(v, v.length(), w, w.length(), tail, out);
  return out;
}

TensorPoly shuffle(const TensorPoly& p, const TensorPoly& q) {
  if (p.alphabet_dim() != q.alphabet_dim())
    throw std::invalid_argument("alphabet mismatch in shuffle product");
  TensorPoly out(p.alphabet_dim());
  for (const auto& [v, a] : p.terms())
    for (const auto& [w, b] : q.terms()) {
      TensorPoly part = shuffle_words(v, w, p.alphabet_dim());
      part *= a * b;
      out += part;
    }
  return out;
}

TensorPoly shuffle_pow(const TensorPoly& p, int k) {
  if (k < 0) throw std::invalid_argument("shuffle power must be >= 0");
  TensorPoly out = TensorPoly::unit(p.alphabet_dim());
  for (int i = 0; i < k; ++i) out = shuffle(out, p);
  return out;
}

TensorPoly concat_word(const TensorPoly& p, const Word& v) {
  TensorPoly out(p.alphabet_dim());
  for (const auto& [w, c] : p.terms()) out.add_term(w.concat(v), c);
  return out;
}

TensorPoly right_deconcat_by_letter(const TensorPoly& p, Letter letter) {
  TensorPoly out(p.alphabet_dim());
  for (const auto& [w, c] : p.terms()) {
    if (w.empty() || w.letter(w.length() - 1) != letter) continue;
    out.add_term(w.prefix(w.length() - 1), c);
  }
  return out;
}

}  // namespace sigvol
