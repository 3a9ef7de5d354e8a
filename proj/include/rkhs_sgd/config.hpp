#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>

#include "rkhs_sgd/experiment.hpp"
#include "rkhs_sgd/kernel.hpp"
#include "rkhs_sgd/sgd_solver.hpp"

namespace rkhs {

// Sectioned key=value run configuration:
//
//   [kernel]        family, bandwidth
//   [problem]       q, radius ("inf" or a positive number), s
//   [sgd]           steps, seed, record_every
//   [sgd.operator]  kind (identity | two_point_scalar), c_lo, c_hi, p_hi
//   [study]         trials, tail_fraction, slope_min, slope_max
//   [io]            data_path, out_dir
//
// Missing keys take the defaults below; unknown sections or keys are rejected.
struct RunConfig {
  struct Kernel {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;
    bool operator==(const Kernel&) const = default;
  } kernel;
  struct Problem {
    double q = 0.3;
    double radius = std::numeric_limits<double>::infinity();
    double s = 2.0;
    bool operator==(const Problem&) const = default;
  } problem;
  struct Operator {
    OperatorKind kind = OperatorKind::identity;
    double c_lo = 0.5;
    double c_hi = 1.5;
    double p_hi = 0.5;
    bool operator==(const Operator&) const = default;
  };
  struct Sgd {
    std::uint64_t steps = 20000;
    std::uint64_t seed = 1;
    std::uint64_t record_every = 100;
    Operator op;
    bool operator==(const Sgd&) const = default;
  } sgd;
  struct Study {
    std::uint64_t trials = 200;
    double tail_fraction = 0.5;
    double slope_min = -1.25;
    double slope_max = -0.75;
    bool operator==(const Study&) const = default;
  } study;
  struct Io {
    std::string data_path = "data.csv";
    std::string out_dir = "out";
    bool operator==(const Io&) const = default;
  } io;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

// Throws ConfigError on any violated component invariant.
void validate(const RunConfig& cfg);

KernelSpec kernel_spec(const RunConfig& cfg, int dim);
OperatorMode operator_mode(const RunConfig& cfg);
SgdConfig sgd_config(const RunConfig& cfg, std::size_t n);
StudyConfig study_config(const RunConfig& cfg, std::size_t n, unsigned threads);

std::string_view to_string(OperatorKind kind);

}  // namespace rkhs
