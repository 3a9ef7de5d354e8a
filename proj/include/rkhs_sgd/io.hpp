#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rkhs_sgd/experiment.hpp"
#include "rkhs_sgd/function_space.hpp"
#include "rkhs_sgd/objective.hpp"
#include "rkhs_sgd/sgd_solver.hpp"

namespace rkhs::io {

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view what);

// Dataset CSV: header x_0..x_{d-1},y_0..y_{m-1}; LF line endings.
std::string dataset_csv(const Dataset& data);
void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);

// Expansion CSV: header center_0..center_{d-1},coeff_0..coeff_{m-1}, one
// row per center; kernel and dimensions go to the key=value sidecar
// `<path>.meta`. Extra keys are appended after the required ones.
using Metadata = std::vector<std::pair<std::string, std::string>>;
std::filesystem::path meta_path(const std::filesystem::path& csv_path);
void write_expansion(const std::filesystem::path& path, const KernelExpansion& f, const Metadata& extra = {});
KernelExpansion read_expansion(const std::filesystem::path& path);
// Reads a key=value file such as meta_path(csv).
std::map<std::string, std::string> read_metadata(const std::filesystem::path& path);

// `k,err_sq` with an oracle, `k,norm_sq` without.
std::string trajectory_csv(const Trajectory& traj);
// `k,mean_err_sq,stderr`
std::string convergence_csv(const ConvergenceRecord& record);

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

// Points uniform in [-1, 1]^d; labels are a sum of three Gaussian bumps with
// seeded centers and amplitudes, plus N(0, noise_sd^2) noise per component.
Dataset generate_dataset(std::size_t n, int d, int m, double noise_sd, std::uint64_t seed);

}  // namespace rkhs::io
