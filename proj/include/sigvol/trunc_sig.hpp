#ifndef SIGVOL_TRUNC_SIG_HPP
#define SIGVOL_TRUNC_SIG_HPP

#include <span>
#include <vector>

#include "sigvol/tensor_poly.hpp"
#include "sigvol/word.hpp"

namespace sigvol {

// Dense truncated tensor sequence: one row-major array per level 0..N,
// level n holding d^n entries indexed by words. Signatures always carry 1 at
// level 0; the zeros() factory exists for internal accumulators only.
class TruncSig {
 public:
  TruncSig(int dim, int level);
  static TruncSig zeros(int dim, int level);
  static TruncSig identity(int dim, int level) { return TruncSig(dim, level); }

  int dim() const { return dim_; }
  int level() const { return level_; }

  std::span<double> level_data(int n) { return {data_.data() + offsets_[n], size_of_level(n)}; }
  std::span<const double> level_data(int n) const {
    return {data_.data() + offsets_[n], size_of_level(n)};
  }
  std::size_t size_of_level(int n) const { return offsets_[n + 1] - offsets_[n]; }

  double entry(const Word& w) const;
  std::size_t flat_index(const Word& w) const;  // index within the word's level

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  friend bool operator==(const TruncSig& a, const TruncSig& b) {
    return a.dim_ == b.dim_ && a.level_ == b.level_ && a.data_ == b.data_;
  }

 private:
  int dim_;
  int level_;
  std::vector<std::size_t> offsets_;  // level n occupies [offsets_[n], offsets_[n+1])
  std::vector<double> data_;
};

// Group-like truncated signature of a straight-line segment: level-n term is
// increment^(x)n / n!.
TruncSig segment_sig(std::span<const double> increment, int level);
void segment_sig_into(TruncSig& out, std::span<const double> increment);

// Chen's identity: truncated concatenation product, level-n entry is
// sum_k a_k (x) b_{n-k}. The identity element is the zero-increment segment.
TruncSig chen_mul(const TruncSig& a, const TruncSig& b);
// out must not alias a or b.
void chen_mul_into(TruncSig& out, const TruncSig& a, const TruncSig& b);

// E[signature of (t, W^1..W^bm_dim) at T]: the truncated concatenation
// exponential of T (e_1 + 1/2 sum_i e_i (x) e_i) over the Brownian letters.
TruncSig expected_sig_time_bm(double T, int bm_dim, int level);

// <p, s> = sum_w p^w s^w as a floating value. Throws "insufficient signature
// depth" when s is truncated below p.max_order().
double bracket(const TensorPoly& p, const TruncSig& s);

// Sparse polynomial pre-resolved to (level, flat index, double coefficient)
// triples for repeated bracket evaluation against equally-shaped signatures.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  CompiledPoly(const TensorPoly& p, int dim, int level);
  double eval(const TruncSig& s) const;
  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    int level;
    std::size_t index;
    double coeff;
  };
  std::vector<Entry> entries_;
};

}  // namespace sigvol

#endif
