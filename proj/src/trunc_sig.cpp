#include "sigvol/trunc_sig.hpp"

#include <cmath>
#include <stdexcept>

namespace sigvol {

TruncSig::TruncSig(int dim, int level) : dim_(dim), level_(level) {
  if (dim < 1) throw std::invalid_argument("signature dimension must be >= 1");
  if (level < 0) throw std::invalid_argument("signature level must be >= 0");
  offsets_.resize(level + 2);
  std::size_t total = 0, level_size = 1;
  for (int n = 0; n <= level; ++n) {
    offsets_[n] = total;
    total += level_size;
    level_size *= static_cast<std::size_t>(dim);
  }
  offsets_[level + 1] = total;
  data_.assign(total, 0.0);
  data_[0] = 1.0;
}

TruncSig TruncSig::zeros(int dim, int level) {
  TruncSig s(dim, level);
  s.data_[0] = 0.0;
  return s;
}

std::size_t TruncSig::flat_index(const Word& w) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < w.length(); ++i) {
    Letter l = w.letter(i);
    if (l < 1 || l > dim_)
      throw std::invalid_argument("word \"" + w.str() + "\" uses letters outside dimension " +
                                  std::to_string(dim_));
    idx = idx * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(l - 1);
  }
  return idx;
}

double TruncSig::entry(const Word& w) const {
  if (static_cast<int>(w.length()) > level_)
    throw std::invalid_argument("insufficient signature depth for word \"" + w.str() + "\"");
  return data_[offsets_[w.length()] + flat_index(w)];
}

void segment_sig_into(TruncSig& out, std::span<const double> increment) {
  const int d = out.dim();
  if (static_cast<int>(increment.size()) != d)
    throw std::invalid_argument("increment dimension mismatch");
  out.level_data(0)[0] = 1.0;
  for (int n = 1; n <= out.level(); ++n) {
    auto prev = out.level_data(n - 1);
    auto cur = out.level_data(n);
    const double inv_n = 1.0 / n;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const double base = prev[i] * inv_n;
      for (int j = 0; j < d; ++j) cur[pos++] = base * increment[j];
    }
  }
}

TruncSig segment_sig(std::span<const double> increment, int level) {
  TruncSig out(static_cast<int>(increment.size()), level);
  segment_sig_into(out, increment);
  return out;
}

void chen_mul_into(TruncSig& out, const TruncSig& a, const TruncSig& b) {
  if (a.dim() != b.dim() || a.level() != b.level())
    throw std::invalid_argument("dimension/level mismatch in Chen product");
  if (out.dim() != a.dim() || out.level() != a.level())
    throw std::invalid_argument("dimension/level mismatch in Chen product output");
  for (int n = out.level(); n >= 0; --n) {
    auto dst = out.level_data(n);
    std::fill(dst.begin(), dst.end(), 0.0);
    for (int k = 0; k <= n; ++k) {
      auto left = a.level_data(k);
      auto right = b.level_data(n - k);
      std::size_t pos = 0;
      for (std::size_t i = 0; i < left.size(); ++i) {
        const double ai = left[i];
        if (ai == 0.0) {
          pos += right.size();
          continue;
        }
        for (std::size_t j = 0; j < right.size(); ++j) dst[pos++] += ai * right[j];
      }
    }
  }
}

TruncSig chen_mul(const TruncSig& a, const TruncSig& b) {
  TruncSig out(a.dim(), a.level());
  chen_mul_into(out, a, b);
  return out;
}

TruncSig expected_sig_time_bm(double T, int bm_dim, int level) {
  if (T < 0) throw std::invalid_argument("horizon must be >= 0");
  if (bm_dim < 0) throw std::invalid_argument("bm_dim must be >= 0");
  const int d = bm_dim + 1;
  TruncSig gen = TruncSig::zeros(d, level);
  if (level >= 1) gen.level_data(1)[0] = T;  // letter 1: the time coordinate
  if (level >= 2) {
    auto l2 = gen.level_data(2);
    for (int i = 2; i <= d; ++i) l2[(i - 1) * d + (i - 1)] = 0.5 * T;
  }
  // exp(gen) = sum_k gen^(x)k / k!; gen has no level-0 part, so k <= level.
  TruncSig result(d, level);
  TruncSig term = TruncSig::zeros(d, level);
  term.level_data(0)[0] = 1.0;
  TruncSig scratch = TruncSig::zeros(d, level);
  for (int k = 1; k <= level; ++k) {
    chen_mul_into(scratch, term, gen);
    const double inv_k = 1.0 / k;
    for (std::size_t i = 0; i < scratch.raw().size(); ++i) {
      term.raw()[i] = scratch.raw()[i] * inv_k;
      result.raw()[i] += term.raw()[i];
    }
  }
  return result;
}

double bracket(const TensorPoly& p, const TruncSig& s) {
  if (p.max_order() > s.level())
    throw std::invalid_argument("insufficient signature depth: polynomial has order " +
                                std::to_string(p.max_order()) + " but signature level is " +
                                std::to_string(s.level()));
  double acc = 0.0;
  for (const auto& [w, c] : p.terms()) acc += to_double(c) * s.entry(w);
  return acc;
}

CompiledPoly::CompiledPoly(const TensorPoly& p, int dim, int level) {
  if (p.alphabet_dim() > dim)
    throw std::invalid_argument("polynomial alphabet exceeds signature dimension");
  if (p.max_order() > level)
    throw std::invalid_argument("insufficient signature depth: polynomial has order " +
                                std::to_string(p.max_order()) + " but signature level is " +
                                std::to_string(level));
  TruncSig shape(dim, level);
  entries_.reserve(p.terms().size());
  for (const auto& [w, c] : p.terms())
    entries_.push_back({static_cast<int>(w.length()), shape.flat_index(w), to_double(c)});
}

double CompiledPoly::eval(const TruncSig& s) const {
  double acc = 0.0;
  for (const Entry& e : entries_) acc += e.coeff * s.level_data(e.level)[e.index];
  return acc;
}

}  // namespace sigvol
