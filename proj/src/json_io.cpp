#include "sigvol/json_io.hpp"

#include <limits>
#include <stdexcept>

namespace sigvol {

namespace {

std::int64_t to_int64_checked(const BigInt& v) {
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max())
    throw std::range_error("rational coefficient does not fit in a 64-bit JSON integer");
  return v.convert_to<std::int64_t>();
}

}  // namespace

nlohmann::json tensor_poly_to_json(const TensorPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : p.terms()) {
    terms.push_back({{"word", w.str()},
                     {"num", to_int64_checked(numerator(c))},
                     {"den", to_int64_checked(denominator(c))}});
  }
  return {{"alphabet_dim", p.alphabet_dim()}, {"terms", std::move(terms)}};
}

TensorPoly tensor_poly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("alphabet_dim") || !j.contains("terms"))
    throw std::invalid_argument("tensor polynomial JSON must have alphabet_dim and terms");
  TensorPoly p(j.at("alphabet_dim").get<int>());
  for (const auto& t : j.at("terms")) {
    Word w = Word::parse(t.at("word").get<std::string>());
    Rational num = t.at("num").get<std::int64_t>();
    Rational den = t.contains("den") ? Rational(t.at("den").get<std::int64_t>()) : Rational(1);
    if (den == 0) throw std::invalid_argument("zero denominator in tensor polynomial JSON");
    p.add_term(w, num / den);
  }
  return p;
}

nlohmann::json trunc_sig_to_json(const TruncSig& s) {
  nlohmann::json entries = nlohmann::json::array();
  std::vector<std::uint8_t> letters;
  for (int n = 0; n <= s.level(); ++n) {
    auto data = s.level_data(n);
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
      if (data[idx] == 0.0) continue;
      letters.assign(n, 1);
      std::size_t rem = idx;
      for (int pos = n - 1; pos >= 0; --pos) {
        letters[pos] = static_cast<std::uint8_t>(rem % s.dim() + 1);
        rem /= s.dim();
      }
      entries.push_back({{"word", Word(letters).str()}, {"value", data[idx]}});
    }
  }
  return {{"alphabet_dim", s.dim()}, {"level", s.level()}, {"entries", std::move(entries)}};
}

}  // namespace sigvol
