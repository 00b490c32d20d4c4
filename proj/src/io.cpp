#include "holofisher/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace holofisher {
namespace {

// Locale-free double parsing; commas and whitespace both separate fields.
std::vector<double> parse_values(const std::string& line, std::size_t lineno) {
  std::vector<double> vals;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == ',' || *p == '\r')) ++p;
    if (p >= end) break;
    double v = 0.0;
    const auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc())
      throw ParseError("line " + std::to_string(lineno) + ": bad number near '" +
                       std::string(p, std::min<std::size_t>(8, end - p)) + "'");
    vals.push_back(v);
    p = next;
  }
  return vals;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

void print_values(std::ostream& out, const double* v, int n) {
  char buf[32];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << (i ? "," : "") << buf;
  }
  out << "\n";
}

Rotation row_to_rotation(const std::vector<double>& v, DatasetFormat format,
                         std::size_t lineno) {
  switch (format) {
    case DatasetFormat::matrix_csv: {
      if (v.size() != 9)
        throw ParseError("line " + std::to_string(lineno) + ": expected 9 values, got " +
                         std::to_string(v.size()));
      Mat3 m;
      m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
      try {
        return Rotation::from_matrix(m);
      } catch (const Error& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    case DatasetFormat::quaternion_csv: {
      if (v.size() != 4)
        throw ParseError("line " + std::to_string(lineno) + ": expected 4 values, got " +
                         std::to_string(v.size()));
      const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
      if (std::abs(n - 1.0) > 1e-6)
        throw ParseError("line " + std::to_string(lineno) + ": quaternion norm " +
                         std::to_string(n) + " outside 1 +- 1e-6");
      return rotation_from_quaternion(v[0], v[1], v[2], v[3]);
    }
    default: {
      if (v.size() != 6)
        throw ParseError("line " + std::to_string(lineno) + ": expected 6 values, got " +
                         std::to_string(v.size()));
      try {
        return rotation_from_vector_pair(Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]));
      } catch (const Error& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
}

}  // namespace

DatasetFormat dataset_format_from_string(const std::string& s) {
  if (s == "matrix_csv") return DatasetFormat::matrix_csv;
  if (s == "quaternion_csv") return DatasetFormat::quaternion_csv;
  if (s == "vector_pair_csv") return DatasetFormat::vector_pair_csv;
  throw ParseError("unknown dataset format: " + s);
}

const char* to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::matrix_csv: return "matrix_csv";
    case DatasetFormat::quaternion_csv: return "quaternion_csv";
    default: return "vector_pair_csv";
  }
}

std::vector<Rotation> read_dataset(std::istream& in, DatasetFormat format) {
  std::vector<Rotation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto vals = parse_values(strip_comment(line), lineno);
    if (vals.empty()) continue;
    out.push_back(row_to_rotation(vals, format, lineno));
  }
  return out;
}

void write_dataset(std::ostream& out, const std::vector<Rotation>& samples,
                   DatasetFormat format, const std::string& header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  if (format == DatasetFormat::matrix_csv) {
    for (const Rotation& r : samples) {
      double v[9];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[3 * i + j] = r.matrix()(i, j);
      print_values(out, v, 9);
    }
    return;
  }
  if (format == DatasetFormat::quaternion_csv) {
    for (const Rotation& r : samples) {
      // Shepperd-style extraction, w >= 0 canonical branch.
      const Mat3& m = r.matrix();
      const double tr = m.trace();
      double w, x, y, z;
      if (tr > 0.0) {
        const double s = std::sqrt(tr + 1.0) * 2.0;
        w = 0.25 * s;
        x = (m(2, 1) - m(1, 2)) / s;
        y = (m(0, 2) - m(2, 0)) / s;
        z = (m(1, 0) - m(0, 1)) / s;
      } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        const double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
        w = (m(2, 1) - m(1, 2)) / s;
        x = 0.25 * s;
        y = (m(0, 1) + m(1, 0)) / s;
        z = (m(0, 2) + m(2, 0)) / s;
      } else if (m(1, 1) > m(2, 2)) {
        const double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
        w = (m(0, 2) - m(2, 0)) / s;
        x = (m(0, 1) + m(1, 0)) / s;
        y = 0.25 * s;
        z = (m(1, 2) + m(2, 1)) / s;
      } else {
        const double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
        w = (m(1, 0) - m(0, 1)) / s;
        x = (m(0, 2) + m(2, 0)) / s;
        y = (m(1, 2) + m(2, 1)) / s;
        z = 0.25 * s;
      }
      if (w < 0.0) { w = -w; x = -x; y = -y; z = -z; }
      double v[4] = {w, x, y, z};
      print_values(out, v, 4);
    }
    return;
  }
  for (const Rotation& r : samples) {
    double v[6] = {r.matrix()(0, 0), r.matrix()(1, 0), r.matrix()(2, 0),
                   r.matrix()(0, 1), r.matrix()(1, 1), r.matrix()(2, 1)};
    print_values(out, v, 6);
  }
}

Mat3 parse_matrix_literal(const std::string& nine_values) {
  const auto vals = parse_values(nine_values, 1);
  if (vals.size() != 9)
    throw ParseError("matrix literal: expected 9 comma-separated values, got " +
                     std::to_string(vals.size()));
  Mat3 m;
  m << vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8];
  return m;
}

Mat3 read_mean_file(std::istream& in) {
  std::vector<double> vals;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (double v : parse_values(strip_comment(line), lineno)) vals.push_back(v);
  }
  if (vals.size() != 9)
    throw ParseError("mean file: expected 9 values, got " + std::to_string(vals.size()));
  Mat3 m;
  m << vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8];
  return m;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

nlohmann::json result_document(const MLEResult& result, const SufficientStats& stats,
                               const OptimConfig& cfg, std::uint64_t input_digest,
                               double wall_time_s) {
  nlohmann::json j;
  j["schema"] = "holofisher/1";
  char digest[20];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(input_digest));
  j["input_digest"] = digest;
  j["config"] = {
      {"method", to_string(result.method)},
      {"gamma", cfg.gamma},
      {"delta", cfg.delta},
      {"max_iter", cfg.max_iter},
      {"force_gauge", cfg.force_gauge},
      {"multistart", cfg.start == StartRule::multistart_chambers},
  };
  j["stats"] = {
      {"n", stats.n},
      {"g", {stats.g(0), stats.g(1), stats.g(2)}},
      {"q", nlohmann::json::array()},
      {"r", nlohmann::json::array()},
  };
  for (int i = 0; i < 3; ++i) {
    j["stats"]["q"].push_back({stats.q.matrix()(i, 0), stats.q.matrix()(i, 1), stats.q.matrix()(i, 2)});
    j["stats"]["r"].push_back({stats.r.matrix()(i, 0), stats.r.matrix()(i, 1), stats.r.matrix()(i, 2)});
  }
  j["result"] = {
      {"x_hat", {result.x_hat(0), result.x_hat(1), result.x_hat(2)}},
      {"loglik", result.loglik},
      {"grad_norm", result.grad_norm},
      {"iterations", result.iterations},
      {"converged", result.converged()},
      {"warnings", result.warnings},
  };
  j["result"]["theta_hat"] = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    j["result"]["theta_hat"].push_back(
        {result.theta_hat.t(i, 0), result.theta_hat.t(i, 1), result.theta_hat.t(i, 2)});
  j["versions"] = {{"holofisher", "1.0.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  j["wall_time_s"] = wall_time_s;
  return j;
}

}  // namespace holofisher
