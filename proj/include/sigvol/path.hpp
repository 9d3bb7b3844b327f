#ifndef SIGVOL_PATH_HPP
#define SIGVOL_PATH_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sigvol/trunc_sig.hpp"

namespace sigvol {

// A sampled path in R^d: strictly increasing times with aligned points.
// Signatures are taken of its piecewise-linear interpolation.
struct PathSample {
  int dim = 0;
  std::vector<double> times;
  std::vector<double> coords;  // row-major, `dim` values per sample

  std::size_t size() const { return times.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, static_cast<std::size_t>(dim)}; }
  void append(double t, std::span<const double> x);
  void validate() const;

  // CSV with header `t,x1,...,xd`, one row per sample.
  static PathSample read_csv(std::istream& in);
  static PathSample read_csv_file(const std::string& filename);
  void write_csv(std::ostream& out) const;
};

// Multiplies the chosen coordinate (1-based) by c everywhere.
PathSample scale_coordinate(const PathSample& path, int coord, double c);

// Exact truncated signature of the piecewise-linear path: fold of Chen
// products over segment exponentials.
TruncSig path_signature(const PathSample& path, int level);

}  // namespace sigvol

#endif
