#include "rkhs_sgd/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rkhs_sgd/errors.hpp"
#include "rkhs_sgd/rng.hpp"

namespace rkhs::io {

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Counts the leading run of columns named prefix0, prefix1, ...
std::size_t count_columns(const std::vector<std::string>& header, std::size_t from, std::string_view prefix) {
  std::size_t count = 0;
  while (from + count < header.size() && trim(header[from + count]) == std::string(prefix) + std::to_string(count)) {
    ++count;
  }
  return count;
}

struct Table {
  std::size_t left;
  std::size_t right;
  std::vector<std::vector<double>> rows;
};

Table read_table(const std::filesystem::path& path, std::string_view left_prefix, std::string_view right_prefix) {
  const auto lines = lines_of(read_text(path));
  if (lines.empty()) throw InputError(path.string() + ": missing CSV header");
  const auto header = split(lines.front(), ',');
  Table t{count_columns(header, 0, left_prefix), 0, {}};
  t.right = count_columns(header, t.left, right_prefix);
  if (t.left < 1 || t.right < 1 || t.left + t.right != header.size()) {
    throw InputError(path.string() + ": header must be " + std::string(left_prefix) + "0.." +
                     std::string(right_prefix) + "0.. columns, got '" + lines.front() + "'");
  }
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size()) {
      throw InputError(path.string() + ": row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(trim(c), path.string()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void append_row(std::string& out, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(a[i]);
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    out += ',';
    out += format_double(b[i]);
  }
  out += '\n';
}

std::string header(std::string_view left, int d, std::string_view right, int m) {
  std::string out;
  for (int i = 0; i < d; ++i) {
    if (i > 0) out += ',';
    out += std::string(left) + std::to_string(i);
  }
  for (int i = 0; i < m; ++i) out += ',' + std::string(right) + std::to_string(i);
  out += '\n';
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError(std::string(what) + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dataset_csv(const Dataset& data) {
  std::string out = header("x_", data.dim(), "y_", data.out_dim());
  for (std::size_t i = 0; i < data.size(); ++i) append_row(out, data.points()[i], data.labels()[i]);
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) { write_text(path, dataset_csv(data)); }

Dataset read_dataset(const std::filesystem::path& path) {
  const Table t = read_table(path, "x_", "y_");
  if (t.rows.empty()) throw InputError(path.string() + ": dataset has no rows");
  std::vector<Point> points;
  std::vector<OutputVector> labels;
  for (const auto& row : t.rows) {
    points.push_back(Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(t.left)));
    labels.push_back(Eigen::Map<const Eigen::VectorXd>(row.data() + t.left, static_cast<Eigen::Index>(t.right)));
  }
  return Dataset(std::move(points), std::move(labels));
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta");
}

void write_expansion(const std::filesystem::path& path, const KernelExpansion& f, const Metadata& extra) {
  std::string csv = header("center_", f.spec().dim, "coeff_", f.out_dim());
  for (std::size_t j = 0; j < f.size(); ++j) {
    append_row(csv, f.centers()[j], f.coeffs().row(static_cast<Eigen::Index>(j)).transpose());
  }
  write_text(path, csv);
  std::string meta;
  meta += "family=" + std::string(to_string(f.spec().family)) + '\n';
  meta += "bandwidth=" + format_double(f.spec().bandwidth) + '\n';
  meta += "d=" + std::to_string(f.spec().dim) + '\n';
  meta += "m=" + std::to_string(f.out_dim()) + '\n';
  for (const auto& [k, v] : extra) meta += k + '=' + v + '\n';
  write_text(meta_path(path), meta);
}

std::map<std::string, std::string> read_metadata(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  for (const auto& line : lines_of(read_text(path))) {
    if (line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(path.string() + ": malformed metadata line '" + line + "'");
    out[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

KernelExpansion read_expansion(const std::filesystem::path& path) {
  const auto meta = read_metadata(meta_path(path));
  auto get = [&](const std::string& key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw InputError(meta_path(path).string() + ": missing key '" + key + "'");
    return it->second;
  };
  auto get_dim = [&](const std::string& key) {
    const double v = parse_double(get(key), key);
    if (!(v >= 1.0 && v <= 1e6 && v == static_cast<int>(v))) {
      throw InputError(meta_path(path).string() + ": " + key + " must be a positive integer");
    }
    return static_cast<int>(v);
  };
  const int d = get_dim("d");
  const int m = get_dim("m");
  const KernelSpec spec(parse_kernel_family(get("family")), parse_double(get("bandwidth"), "bandwidth"), d);

  const auto lines = lines_of(read_text(path));
  if (lines.empty() || lines.front() + '\n' != header("center_", d, "coeff_", m)) {
    throw InputError(path.string() + ": header does not match d = " + std::to_string(d) + ", m = " + std::to_string(m));
  }
  const Table t = read_table(path, "center_", "coeff_");
  std::vector<Point> centers;
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(t.rows.size()), m);
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    centers.push_back(Eigen::Map<const Eigen::VectorXd>(t.rows[j].data(), d));
    coeffs.row(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::RowVectorXd>(t.rows[j].data() + d, m);
  }
  if (centers.empty()) return KernelExpansion(spec, m);
  return KernelExpansion(spec, std::move(centers), std::move(coeffs));
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = traj.has_oracle ? "k,err_sq\n" : "k,norm_sq\n";
  for (std::size_t i = 0; i < traj.ks.size(); ++i) {
    out += std::to_string(traj.ks[i]) + ',' + format_double(traj.values[i]) + '\n';
  }
  return out;
}

std::string convergence_csv(const ConvergenceRecord& record) {
  std::string out = "k,mean_err_sq,stderr\n";
  for (std::size_t i = 0; i < record.ks.size(); ++i) {
    out += std::to_string(record.ks[i]) + ',' + format_double(record.mean_err_sq[i]) + ',' +
           format_double(record.std_error[i]) + '\n';
  }
  return out;
}

Dataset generate_dataset(std::size_t n, int d, int m, double noise_sd, std::uint64_t seed) {
  if (n < 1 || d < 1 || m < 1) throw InputError("gen-data: n, d and m must all be >= 1");
  if (!(noise_sd >= 0.0)) throw InputError("gen-data: noise_sd must be >= 0");
  constexpr int kBumps = 3;
  constexpr double kBumpWidth = 0.5;
  const KernelSpec bump_kernel(KernelFamily::gaussian, kBumpWidth, d);

  PhiloxStream bump_rng(seed, 0);
  std::vector<Point> bump_centers;
  std::vector<OutputVector> bump_amps;
  for (int b = 0; b < kBumps; ++b) {
    Point c(d);
    for (int i = 0; i < d; ++i) c[i] = 2.0 * bump_rng.uniform() - 1.0;
    OutputVector a(m);
    for (int i = 0; i < m; ++i) a[i] = 2.0 * bump_rng.uniform() - 1.0;
    bump_centers.push_back(std::move(c));
    bump_amps.push_back(std::move(a));
  }

  PhiloxStream point_rng(seed, 1);
  PhiloxStream noise_rng(seed, 2);
  std::vector<Point> points;
  std::vector<OutputVector> labels;
  for (std::size_t r = 0; r < n; ++r) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = 2.0 * point_rng.uniform() - 1.0;
    OutputVector y = OutputVector::Zero(m);
    for (int b = 0; b < kBumps; ++b) y += eval(bump_kernel, bump_centers[b], x) * bump_amps[b];
    if (noise_sd > 0.0) {
      for (int i = 0; i < m; ++i) y[i] += noise_sd * noise_rng.normal();
    }
    points.push_back(std::move(x));
    labels.push_back(std::move(y));
  }
  return Dataset(std::move(points), std::move(labels));
}

}  // namespace rkhs::io
