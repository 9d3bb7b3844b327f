#ifndef SIGVOL_TENSOR_POLY_HPP
#define SIGVOL_TENSOR_POLY_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>

#include "sigvol/word.hpp"

namespace sigvol {

// Exact coefficient field for all algebra operations. Conversion to floating
// point happens only when pairing against a numeric signature.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& r);
double to_double(const Rational& r);

// A finite tensor sequence: sparse association Word -> exact rational
// coefficient. Zero coefficients are never stored; terms are kept in graded
// lexicographic order so serialization is deterministic.
class TensorPoly {
 public:
  using TermMap = std::map<Word, Rational, GradedLexLess>;

  explicit TensorPoly(int alphabet_dim);
  TensorPoly(int alphabet_dim, TermMap terms);

  static TensorPoly zero(int alphabet_dim) { return TensorPoly(alphabet_dim); }
  static TensorPoly unit(int alphabet_dim);
  static TensorPoly monomial(int alphabet_dim, const Word& w, const Rational& c = 1);

  int alphabet_dim() const { return alphabet_dim_; }
  // Largest stored word length (0 for the zero polynomial and for multiples
  // of the empty word).
  int max_order() const { return max_order_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Rational coeff(const Word& w) const;
  void add_term(const Word& w, const Rational& c);

  TensorPoly& operator+=(const TensorPoly& other);
  TensorPoly& operator-=(const TensorPoly& other);
  TensorPoly& operator*=(const Rational& c);
  friend TensorPoly operator+(TensorPoly a, const TensorPoly& b) { return a += b; }
  friend TensorPoly operator-(TensorPoly a, const TensorPoly& b) { return a -= b; }
  friend TensorPoly operator*(TensorPoly p, const Rational& c) { return p *= c; }
  friend TensorPoly operator*(const Rational& c, TensorPoly p) { return p *= c; }
  TensorPoly operator-() const;

  friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
    return a.alphabet_dim_ == b.alphabet_dim_ && a.terms_ == b.terms_;
  }

  // "123 + 132 + 312", "2·22", "1/2·11 − 3·2"; "0" for the zero polynomial,
  // "ø" for the empty word.
  std::string str() const;

 private:
  void check_word(const Word& w) const;
  void recompute_max_order();

  int alphabet_dim_ = 1;
  int max_order_ = 0;
  TermMap terms_;
};

// Shuffle product of two words (Def. of the recursive riffle product); all
// coefficients are nonnegative integers summing to binomial(|v|+|w|, |v|).
TensorPoly shuffle_words(const Word& v, const Word& w, int alphabet_dim);

// Bilinear extension to tensor polynomials.
TensorPoly shuffle(const TensorPoly& p, const TensorPoly& q);

// k-fold shuffle power; k = 0 gives the empty-word unit.
TensorPoly shuffle_pow(const TensorPoly& p, int k);

// Appends the word v to every term (right concatenation).
TensorPoly concat_word(const TensorPoly& p, const Word& v);

// Sum over terms ending in `letter` of coefficient x word-with-last-letter
// dropped; all other terms are discarded.
TensorPoly right_deconcat_by_letter(const TensorPoly& p, Letter letter);

}  // namespace sigvol

#endif
