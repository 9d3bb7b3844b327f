#ifndef SIGVOL_LYNDON_HPP
#define SIGVOL_LYNDON_HPP

#include <string>
#include <vector>

#include "sigvol/tensor_poly.hpp"
#include "sigvol/word.hpp"

namespace sigvol {

enum class LyndonConvention {
  // A word is Lyndon when it is strictly lexicographically greater than all
  // of its nontrivial cyclic rotations. This matches the worked examples
  // (21, 221, 211 are Lyndon; 12 is not), which are treated as normative.
  paper,
  // The textbook convention: strictly smaller than all nontrivial rotations.
  classical,
};

// Comparison order used by all Lyndon machinery: a convention plus a
// permutation of the alphabet. Internally everything is reduced to "strictly
// smallest among rotations" under a rank function, so both conventions share
// one code path.
class LyndonOrder {
 public:
  LyndonOrder(int alphabet_dim, LyndonConvention convention = LyndonConvention::paper);

  // Paper convention reordered so that `greatest` plays the role of the
  // greatest letter; Lyndon words under this order never end with `greatest`
  // except the singleton. Remaining letters keep their relative paper order.
  static LyndonOrder paper_with_greatest(int alphabet_dim, Letter greatest);

  int alphabet_dim() const { return alphabet_dim_; }
  LyndonConvention convention() const { return convention_; }

  // Rank 0 sorts first; for the paper convention that is the paper-greatest
  // letter.
  int rank(Letter letter) const;
  Letter letter_of_rank(int r) const { return letter_of_rank_[r]; }

  bool word_less(const Word& a, const Word& b) const;

 private:
  int alphabet_dim_;
  LyndonConvention convention_;
  std::vector<int> rank_;            // rank_[letter - 1]
  std::vector<Letter> letter_of_rank_;
};

// True iff w beats all its nontrivial cyclic rotations under the order.
// Words equal to one of their rotations (e.g. 22) are never Lyndon.
bool is_lyndon(const Word& w, const LyndonOrder& order);

// All Lyndon words of length <= max_len, graded-lexicographically sorted
// under the order. Generated by Duval's algorithm.
std::vector<Word> lyndon_words(int alphabet_dim, int max_len, const LyndonOrder& order);
std::vector<Word> lyndon_words(int alphabet_dim, int max_len);

// Chen-Fox-Lyndon factorization: w as a concatenation of a non-increasing
// sequence of Lyndon factors.
std::vector<Word> lyndon_factorization(const Word& w, const LyndonOrder& order);

// A polynomial, under shuffle, in Lyndon words: sparse association from a
// multiset of (factor word, power) to a rational coefficient.
class ShufflePolynomial {
 public:
  using FactorPowers = std::map<Word, int, GradedLexLess>;
  using TermMap = std::map<FactorPowers, Rational>;

  explicit ShufflePolynomial(int alphabet_dim) : alphabet_dim_(alphabet_dim) {}

  static ShufflePolynomial unit(int alphabet_dim);
  static ShufflePolynomial monomial(int alphabet_dim, FactorPowers factors, const Rational& c = 1);

  int alphabet_dim() const { return alphabet_dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(FactorPowers factors, const Rational& c);

  ShufflePolynomial& operator+=(const ShufflePolynomial& other);
  ShufflePolynomial& operator*=(const Rational& c);

  friend bool operator==(const ShufflePolynomial& a, const ShufflePolynomial& b) {
    return a.alphabet_dim_ == b.alphabet_dim_ && a.terms_ == b.terms_;
  }

  // "21 ⧢ 2 − 2·221", "1/2·1 ⧢ 2^⧢2 − 21 ⧢ 2 + 221"; "ø" for the unit.
  // Factors print in non-increasing order under `order` (the factorization
  // order), so output matches the worked examples.
  std::string str(const LyndonOrder& order) const;
  std::string str() const;

 private:
  int alphabet_dim_;
  TermMap terms_;
};

// Expresses w as a shuffle polynomial in Lyndon words (Radford): expanding
// the result reproduces w exactly over the rationals.
ShufflePolynomial radford_decompose(const Word& w, const LyndonOrder& order);
ShufflePolynomial radford_decompose(const Word& w, int alphabet_dim);

// Radford decomposition under an order that makes `avoid` the greatest
// letter, so no factor other than the singleton `avoid` ends with it.
ShufflePolynomial avoid_letter_decompose(const Word& w, Letter avoid, int alphabet_dim);

// Evaluates all shuffle powers and products over the rationals.
TensorPoly expand(const ShufflePolynomial& sp);

}  // namespace sigvol

#endif
