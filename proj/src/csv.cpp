#include "lpvss/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lpvss/gain_approx.hpp"
#include "lpvss/simulate.hpp"

namespace lpvss {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw StructuralError("csv: cannot parse number '" + field + "' in " + context);
  if (!std::isfinite(value))
    throw StructuralError("csv: non-finite number '" + field + "' in " + context);
  return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw StructuralError("csv: cannot open for writing: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw StructuralError("csv: cannot open: " + path.string());
  return f;
}

void append_header(std::ostream& os, const char* prefix, int n) {
  for (int j = 1; j <= n; ++j) os << ',' << prefix << '_' << j;
}

void append_vector(std::ostream& os, const Vector& v) {
  for (int j = 0; j < v.size(); ++j) os << ',' << format_double(v(j));
}

void append_matrix_header(std::ostream& os, const char* prefix, Eigen::Index rows,
                          Eigen::Index cols) {
  for (Eigen::Index c = 1; c <= cols; ++c)
    for (Eigen::Index r = 1; r <= rows; ++r) os << ',' << prefix << '_' << r << '_' << c;
}

void append_matrix_colmajor(std::ostream& os, const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) os << ',' << format_double(m(r, c));
}

}  // namespace

void write_signals_csv(const std::filesystem::path& path, const SimRecord& record) {
  std::ofstream f = open_out(path);
  const int np = record.p.empty() ? 0 : static_cast<int>(record.p.front().size());
  const int nu = record.u.empty() ? 0 : static_cast<int>(record.u.front().size());
  const int ny = record.y.empty() ? 0 : static_cast<int>(record.y.front().size());
  f << 't';
  append_header(f, "p", np);
  append_header(f, "u", nu);
  append_header(f, "y", ny);
  f << '\n';
  for (int k = 0; k < record.length(); ++k) {
    f << record.t0 + k;
    append_vector(f, record.p[static_cast<size_t>(k)]);
    append_vector(f, record.u[static_cast<size_t>(k)]);
    append_vector(f, record.y[static_cast<size_t>(k)]);
    f << '\n';
  }
}

SignalsData read_signals_csv(const std::filesystem::path& path, int np, int nu, int ny) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw StructuralError("csv: empty file: " + path.string());
  const size_t expected = 1u + static_cast<size_t>(np + nu + ny);
  if (split(line).size() != expected)
    throw StructuralError("csv: header of " + path.string() + " has wrong column count");

  SignalsData data;
  bool first = true;
  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != expected)
      throw StructuralError("csv: row " + std::to_string(row + 2) + " of " + path.string() +
                            " has wrong column count");
    const std::string ctx = path.string() + " row " + std::to_string(row + 2);
    const int t = static_cast<int>(parse_double(fields[0], ctx));
    if (first) {
      data.t0 = t;
      first = false;
    } else if (t != data.t0 + row) {
      throw StructuralError("csv: non-contiguous time index in " + path.string());
    }
    size_t col = 1;
    Vector p(np), u(nu), y(ny);
    for (int j = 0; j < np; ++j) p(j) = parse_double(fields[col++], ctx);
    for (int j = 0; j < nu; ++j) u(j) = parse_double(fields[col++], ctx);
    for (int j = 0; j < ny; ++j) y(j) = parse_double(fields[col++], ctx);
    data.p.push_back(std::move(p));
    data.u.push_back(std::move(u));
    data.y.push_back(std::move(y));
    ++row;
  }
  if (data.p.empty()) throw StructuralError("csv: no data rows in " + path.string());
  return data;
}

SchedulingTrajectory read_scheduling_csv(const std::filesystem::path& path, int np) {
  // Accepts the signals layout (leading t plus at least np further columns)
  // and uses the first np value columns.
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw StructuralError("csv: empty file: " + path.string());
  SchedulingTrajectory traj;
  bool first = true;
  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() < 1u + static_cast<size_t>(np))
      throw StructuralError("csv: row in " + path.string() + " has fewer than 1+np columns");
    const std::string ctx = path.string() + " row " + std::to_string(row + 2);
    const int t = static_cast<int>(parse_double(fields[0], ctx));
    if (first) {
      traj.t0 = t;
      first = false;
    }
    Vector p(np);
    for (int j = 0; j < np; ++j) p(j) = parse_double(fields[1 + static_cast<size_t>(j)], ctx);
    traj.samples.push_back(std::move(p));
    ++row;
  }
  if (traj.samples.empty()) throw StructuralError("csv: no data rows in " + path.string());
  return traj;
}

std::vector<Vector> read_input_csv(const std::filesystem::path& path, int nu) {
  SchedulingTrajectory raw = read_scheduling_csv(path, nu);
  return std::move(raw.samples);
}

void write_trace_csv(const std::filesystem::path& path, const FilterTrace& trace) {
  std::ofstream f = open_out(path);
  if (trace.length() == 0) throw StructuralError("csv: empty filter trace");
  const Eigen::Index nx = trace.gain.front().rows();
  const Eigen::Index ny = trace.gain.front().cols();
  f << 't';
  append_matrix_header(f, "K", nx, ny);
  append_matrix_header(f, "P", nx, nx);
  append_matrix_header(f, "Om", ny, ny);
  f << '\n';
  for (int k = 0; k < trace.length(); ++k) {
    f << trace.t0 + k;
    append_matrix_colmajor(f, trace.gain[static_cast<size_t>(k)]);
    append_matrix_colmajor(f, trace.prior[static_cast<size_t>(k)]);
    append_matrix_colmajor(f, trace.innov_cov[static_cast<size_t>(k)]);
    f << '\n';
  }
}

void write_decay_csv(const std::filesystem::path& path, const DecayCurve& curve) {
  std::ofstream f = open_out(path);
  f << "tau,stat,remainder_norm,cov_norm,decay_fraction\n";
  for (size_t i = 0; i < curve.taus.size(); ++i) {
    const std::string frac =
        i == 0 ? std::string() : format_double(curve.decay_fraction[i - 1]);
    f << curve.taus[i] << ",max," << format_double(curve.remainder_max[i]) << ','
      << format_double(curve.cov_max[i]) << ',' << frac << '\n';
    f << curve.taus[i] << ",median," << format_double(curve.remainder_median[i]) << ','
      << format_double(curve.cov_median[i]) << ',' << frac << '\n';
  }
}

}  // namespace lpvss
