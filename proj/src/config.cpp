#include "rkhs_sgd/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "rkhs_sgd/errors.hpp"
#include "rkhs_sgd/io.hpp"

namespace rkhs {

namespace pt = boost::property_tree;

namespace {

using Setter = std::function<void(const std::string&)>;

double to_double(const std::string& key, const std::string& value) {
  try {
    return io::parse_double(value, key);
  } catch (const InputError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError("config: " + key + ": expected a nonnegative integer, got '" + value + "'");
  }
  return out;
}

OperatorKind parse_operator_kind(const std::string& value) {
  if (value == "identity") return OperatorKind::identity;
  if (value == "two_point_scalar") return OperatorKind::two_point_scalar;
  throw ConfigError("config: sgd.operator.kind must be identity or two_point_scalar, got '" + value + "'");
}

std::map<std::string, std::map<std::string, Setter>> setters(RunConfig& c) {
  return {
      {"kernel",
       {{"family",
         [&](const std::string& v) {
           try {
             c.kernel.family = parse_kernel_family(v);
           } catch (const InputError& e) {
             throw ConfigError(std::string("config: kernel.family: ") + e.what());
           }
         }},
        {"bandwidth", [&](const std::string& v) { c.kernel.bandwidth = to_double("kernel.bandwidth", v); }}}},
      {"problem",
       {{"q", [&](const std::string& v) { c.problem.q = to_double("problem.q", v); }},
        {"radius",
         [&](const std::string& v) {
           c.problem.radius = v == "inf" ? std::numeric_limits<double>::infinity() : to_double("problem.radius", v);
         }},
        {"s", [&](const std::string& v) { c.problem.s = to_double("problem.s", v); }}}},
      {"sgd",
       {{"steps", [&](const std::string& v) { c.sgd.steps = to_uint("sgd.steps", v); }},
        {"seed", [&](const std::string& v) { c.sgd.seed = to_uint("sgd.seed", v); }},
        {"record_every", [&](const std::string& v) { c.sgd.record_every = to_uint("sgd.record_every", v); }}}},
      {"sgd.operator",
       {{"kind", [&](const std::string& v) { c.sgd.op.kind = parse_operator_kind(v); }},
        {"c_lo", [&](const std::string& v) { c.sgd.op.c_lo = to_double("sgd.operator.c_lo", v); }},
        {"c_hi", [&](const std::string& v) { c.sgd.op.c_hi = to_double("sgd.operator.c_hi", v); }},
        {"p_hi", [&](const std::string& v) { c.sgd.op.p_hi = to_double("sgd.operator.p_hi", v); }}}},
      {"study",
       {{"trials", [&](const std::string& v) { c.study.trials = to_uint("study.trials", v); }},
        {"tail_fraction", [&](const std::string& v) { c.study.tail_fraction = to_double("study.tail_fraction", v); }},
        {"slope_min", [&](const std::string& v) { c.study.slope_min = to_double("study.slope_min", v); }},
        {"slope_max", [&](const std::string& v) { c.study.slope_max = to_double("study.slope_max", v); }}}},
      {"io",
       {{"data_path", [&](const std::string& v) { c.io.data_path = v; }},
        {"out_dir", [&](const std::string& v) { c.io.out_dir = v; }}}},
  };
}

std::string num(double v) { return std::isinf(v) && v > 0 ? "inf" : io::format_double(v); }

}  // namespace

std::string_view to_string(OperatorKind kind) {
  return kind == OperatorKind::identity ? "identity" : "two_point_scalar";
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  auto table = setters(cfg);
  for (const auto& [section, body] : tree) {
    auto sec = table.find(section);
    if (sec == table.end()) {
      throw ConfigError(!body.data().empty() ? "config: key '" + section + "' outside of any section"
                                     : "config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      auto setter = sec->second.find(key);
      if (setter == sec->second.end()) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      std::string v = value.data();
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      setter->second(v);
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(io::read_text(path)); }

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[kernel]\nfamily = " << to_string(c.kernel.family) << "\nbandwidth = " << num(c.kernel.bandwidth) << "\n\n";
  out << "[problem]\nq = " << num(c.problem.q) << "\nradius = " << num(c.problem.radius)
      << "\ns = " << num(c.problem.s) << "\n\n";
  out << "[sgd]\nsteps = " << c.sgd.steps << "\nseed = " << c.sgd.seed << "\nrecord_every = " << c.sgd.record_every
      << "\n\n";
  out << "[sgd.operator]\nkind = " << to_string(c.sgd.op.kind) << "\nc_lo = " << num(c.sgd.op.c_lo)
      << "\nc_hi = " << num(c.sgd.op.c_hi) << "\np_hi = " << num(c.sgd.op.p_hi) << "\n\n";
  out << "[study]\ntrials = " << c.study.trials << "\ntail_fraction = " << num(c.study.tail_fraction)
      << "\nslope_min = " << num(c.study.slope_min) << "\nslope_max = " << num(c.study.slope_max) << "\n\n";
  out << "[io]\ndata_path = " << c.io.data_path << "\nout_dir = " << c.io.out_dir << "\n";
  return out.str();
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(c.kernel.bandwidth > 0.0 && std::isfinite(c.kernel.bandwidth), "kernel.bandwidth must be positive");
  require(c.problem.q > 0.0 && c.problem.q < 1.0, "problem.q must lie in (0, 1)");
  require(c.problem.radius > 0.0, "problem.radius must be positive or inf");
  require(c.problem.s > 1.0, "problem.s must exceed 1");
  require(c.sgd.steps >= 1, "sgd.steps must be >= 1");
  require(c.sgd.record_every >= 1, "sgd.record_every must be >= 1");
  require(c.study.trials >= 1, "study.trials must be >= 1");
  require(c.study.tail_fraction > 0.0 && c.study.tail_fraction < 1.0, "study.tail_fraction must lie in (0, 1)");
  require(c.study.slope_min <= c.study.slope_max, "study.slope_min must not exceed study.slope_max");
  if (c.sgd.op.kind == OperatorKind::two_point_scalar) {
    try {
      (void)OperatorMode::two_point(c.sgd.op.c_lo, c.sgd.op.c_hi, c.sgd.op.p_hi);
    } catch (const InputError& e) {
      throw ConfigError(std::string("config: sgd.operator: ") + e.what());
    }
  }
}

KernelSpec kernel_spec(const RunConfig& cfg, int dim) { return KernelSpec(cfg.kernel.family, cfg.kernel.bandwidth, dim); }

OperatorMode operator_mode(const RunConfig& cfg) {
  if (cfg.sgd.op.kind == OperatorKind::identity) return OperatorMode::identity();
  return OperatorMode::two_point(cfg.sgd.op.c_lo, cfg.sgd.op.c_hi, cfg.sgd.op.p_hi);
}

SgdConfig sgd_config(const RunConfig& cfg, std::size_t n) {
  return SgdConfig{.weights = MixtureWeights(cfg.problem.q, n),
                   .radius = Radius(cfg.problem.radius),
                   .s = cfg.problem.s,
                   .steps = cfg.sgd.steps,
                   .seed = cfg.sgd.seed,
                   .op = operator_mode(cfg),
                   .record_every = cfg.sgd.record_every};
}

StudyConfig study_config(const RunConfig& cfg, std::size_t n, unsigned threads) {
  return StudyConfig{.sgd = sgd_config(cfg, n),
                     .trials = cfg.study.trials,
                     .tail_fraction = cfg.study.tail_fraction,
                     .threads = threads};
}

}  // namespace rkhs
