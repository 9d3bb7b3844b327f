#include "sigvol/path.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigvol {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric field \"" + s + "\" on CSV line " +
                                std::to_string(line_no));
  }
}

void format_double(std::ostream& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void PathSample::append(double t, std::span<const double> x) {
  if (dim == 0) dim = static_cast<int>(x.size());
  if (static_cast<int>(x.size()) != dim)
    throw std::invalid_argument("point dimension mismatch in path sample");
  times.push_back(t);
  coords.insert(coords.end(), x.begin(), x.end());
}

void PathSample::validate() const {
  if (dim < 1) throw std::invalid_argument("path dimension must be >= 1");
  if (times.empty()) throw std::invalid_argument("path must contain at least one sample point");
  if (coords.size() != times.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("path times/points length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("path times must be strictly increasing");
}

PathSample PathSample::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty path CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t")
    throw std::invalid_argument("path CSV header must be t,x1,...,xd");
  PathSample path;
  path.dim = static_cast<int>(header.size()) - 1;
  std::size_t line_no = 1;
  std::vector<double> point(path.dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("wrong field count on CSV line " + std::to_string(line_no));
    double t = parse_double(fields[0], line_no);
    for (int j = 0; j < path.dim; ++j) point[j] = parse_double(fields[j + 1], line_no);
    path.times.push_back(t);
    path.coords.insert(path.coords.end(), point.begin(), point.end());
  }
  path.validate();
  return path;
}

PathSample PathSample::read_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::invalid_argument("cannot open path CSV: " + filename);
  return read_csv(in);
}

void PathSample::write_csv(std::ostream& out) const {
  out << "t";
  for (int j = 1; j <= dim; ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t i = 0; i < size(); ++i) {
    format_double(out, times[i]);
    for (double x : point(i)) {
      out << ",";
      format_double(out, x);
    }
    out << "\n";
  }
}

PathSample scale_coordinate(const PathSample& path, int coord, double c) {
  if (coord < 1 || coord > path.dim)
    throw std::invalid_argument("coordinate index outside path dimension");
  PathSample out = path;
  for (std::size_t i = 0; i < out.size(); ++i) out.coords[i * out.dim + (coord - 1)] *= c;
  return out;
}

TruncSig path_signature(const PathSample& path, int level) {
  path.validate();
  TruncSig sig(path.dim, level);
  TruncSig seg = TruncSig::zeros(path.dim, level);
  TruncSig scratch = TruncSig::zeros(path.dim, level);
  std::vector<double> increment(path.dim);
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto prev = path.point(i - 1);
    auto cur = path.point(i);
    for (int j = 0; j < path.dim; ++j) increment[j] = cur[j] - prev[j];
    segment_sig_into(seg, increment);
    chen_mul_into(scratch, sig, seg);
    std::swap(sig, scratch);
  }
  return sig;
}

}  // namespace sigvol
