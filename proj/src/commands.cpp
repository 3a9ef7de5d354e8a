#include "rkhs_sgd/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "rkhs_sgd/config.hpp"
#include "rkhs_sgd/errors.hpp"
#include "rkhs_sgd/exact_solver.hpp"
#include "rkhs_sgd/experiment.hpp"
#include "rkhs_sgd/io.hpp"

namespace rkhs::cli {

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  }
}

RunConfig resolve(const RunOptions& opts) {
  RunConfig cfg = opts.config ? load_config(*opts.config) : RunConfig{};
  if (opts.data) cfg.io.data_path = *opts.data;
  if (opts.seed) cfg.sgd.seed = *opts.seed;
  if (opts.steps) cfg.sgd.steps = *opts.steps;
  if (opts.trials) cfg.study.trials = *opts.trials;
  if (opts.out) cfg.io.out_dir = opts.out->string();
  validate(cfg);
  return cfg;
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

unsigned threads_from_env(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RKHS_SGD_THREADS")) {
    unsigned value = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size()) return value;
  }
  return 0;
}

int cmd_gen_data(const GenDataOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Dataset data = io::generate_dataset(opts.n, opts.d, opts.m, opts.noise_sd, opts.seed);
    io::write_dataset(opts.out, data);
    out << "wrote " << data.size() << " rows to " << opts.out.string() << '\n';
    return kOk;
  });
}

int cmd_exact(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const Dataset data = io::read_dataset(cfg.io.data_path);
    const KernelSpec spec = kernel_spec(cfg, data.dim());
    const MixtureWeights w(cfg.problem.q, data.size());
    const OracleSolution sol = solve(spec, data, w, Radius(cfg.problem.radius));

    const double fnorm = norm(sol.fstar);
    const double tol = residual_tolerance(data);
    const std::filesystem::path path = std::filesystem::path(cfg.io.out_dir) / "fstar.csv";
    io::write_expansion(path, sol.fstar,
                        {{"residual_norm", fmt(sol.residual_norm)},
                         {"constrained_ok", sol.constrained_ok ? "true" : "false"},
                         {"q", fmt(cfg.problem.q)}});

    out << "n=" << data.size() << " d=" << data.dim() << " m=" << data.out_dim() << " q=" << fmt(cfg.problem.q)
        << '\n';
    out << "residual_norm=" << fmt(sol.residual_norm) << '\n';
    out << "fstar_norm=" << fmt(fnorm) << '\n';
    out << "loss_total=" << fmt(loss_total(sol.fstar, data, w)) << '\n';
    out << "bound_term=" << fmt(bound_term(sol.fstar, data, w)) << '\n';
    out << "constrained_ok=" << (sol.constrained_ok ? "true" : "false") << '\n';
    const OutputVector at_x1 = evaluate(sol.fstar, data.x(1));
    out << "fstar_at_x1=";
    for (Eigen::Index i = 0; i < at_x1.size(); ++i) out << (i ? "," : "") << fmt(at_x1[i]);
    out << '\n';
    out << "wrote " << path.string() << '\n';
    if (!(sol.residual_norm <= tol)) {
      err << "residual " << fmt(sol.residual_norm) << " exceeds tolerance " << fmt(tol) << '\n';
      return kNumerical;
    }
    return kOk;
  });
}

int cmd_sgd(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const Dataset data = io::read_dataset(cfg.io.data_path);
    const KernelSpec spec = kernel_spec(cfg, data.dim());
    std::optional<KernelExpansion> oracle;
    if (opts.oracle) {
      oracle = io::read_expansion(*opts.oracle);
      if (!(oracle->spec() == spec)) throw ConfigError("oracle kernel does not match the configured kernel");
    }
    const SgdConfig sgd = sgd_config(cfg, data.size());
    const Trajectory traj = run(sgd, SgdProblem(data, spec, oracle), 0);

    const std::filesystem::path path = std::filesystem::path(cfg.io.out_dir) / "trajectory.csv";
    io::write_text(path, io::trajectory_csv(traj));
    out << "b=" << fmt(traj.schedule.b) << '\n';
    out << "eta_1=" << fmt(traj.schedule.eta(1)) << '\n';
    out << "rho=" << fmt(traj.schedule.rho) << '\n';
    if (traj.max_norm) out << "max_norm=" << fmt(*traj.max_norm) << '\n';
    out << "final_" << (traj.has_oracle ? "err_sq=" : "norm_sq=") << fmt(traj.values.back()) << '\n';
    out << "wrote " << path.string() << '\n';
    return kOk;
  });
}

int cmd_study(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const Dataset data = io::read_dataset(cfg.io.data_path);
    const KernelSpec spec = kernel_spec(cfg, data.dim());
    const StudyConfig study = study_config(cfg, data.size(), opts.threads);
    const StudyResult result = run_study(study, data, spec);
    const ConvergenceRecord& rec = result.record;

    const std::filesystem::path dir(cfg.io.out_dir);
    io::write_text(dir / "convergence.csv", io::convergence_csv(rec));

    const bool accepted = rec.fit && rec.fit->slope >= cfg.study.slope_min && rec.fit->slope <= cfg.study.slope_max;
    std::ostringstream summary;
    if (rec.fit) {
      summary << "slope=" << fmt(rec.fit->slope) << '\n';
      summary << "slope_ci=" << fmt(rec.fit->ci) << '\n';
      summary << "intercept=" << fmt(rec.fit->intercept) << '\n';
      summary << "tail_points=" << rec.fit->points << '\n';
    } else {
      summary << "slope=nan\n# fewer than 10 recorded points in the tail; no rate fit\n";
    }
    summary << "bound_scale=" << fmt(rec.bound_scale) << '\n';
    summary << "fstar_norm=" << fmt(norm(result.oracle.fstar)) << '\n';
    summary << "residual_norm=" << fmt(result.oracle.residual_norm) << '\n';
    summary << "slope_window=" << fmt(cfg.study.slope_min) << ',' << fmt(cfg.study.slope_max) << '\n';
    summary << "accepted=" << (accepted ? "true" : "false") << '\n';
    summary << "\n# run\nseed=" << cfg.sgd.seed << "\ntrials=" << cfg.study.trials << "\nsteps=" << cfg.sgd.steps
            << "\nrecord_every=" << cfg.sgd.record_every << "\nn=" << data.size() << "\nd=" << data.dim()
            << "\nm=" << data.out_dim() << "\n\n# config\n"
            << serialize_config(cfg);
    io::write_text(dir / "summary.txt", summary.str());
    out << summary.str();
    out << "wrote " << (dir / "convergence.csv").string() << " and " << (dir / "summary.txt").string() << '\n';
    return accepted ? kOk : kNumerical;
  });
}

}  // namespace rkhs::cli
