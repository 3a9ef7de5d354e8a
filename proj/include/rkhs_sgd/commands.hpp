#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace rkhs::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct GenDataOptions {
  std::size_t n = 20;
  int d = 2;
  int m = 1;
  double noise_sd = 0.1;
  std::uint64_t seed = 1;
  std::filesystem::path out = "data.csv";
};

// Config file plus flag overrides shared by exact, sgd and study.
struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> data;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> trials;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> oracle;
  unsigned threads = 0;
};

int cmd_gen_data(const GenDataOptions& opts, std::ostream& out, std::ostream& err);
int cmd_exact(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sgd(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_study(const RunOptions& opts, std::ostream& out, std::ostream& err);

// --threads, then RKHS_SGD_THREADS, then 0 (machine parallelism).
unsigned threads_from_env(std::optional<unsigned> flag);

}  // namespace rkhs::cli
