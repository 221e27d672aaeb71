// Command-line front end. Talks to the library only through the C API.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cranest/cranest.h"

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(cranest_status s, const char* what) {
  if (s != CRANEST_OK)
    throw CliError(std::string(what) + ": " + cranest_status_string(s) + ": " + cranest_last_error());
}

struct MatrixDeleter {
  void operator()(cranest_matrix* m) const { cranest_matrix_free(m); }
};
struct InstanceDeleter {
  void operator()(cranest_instance* i) const { cranest_instance_free(i); }
};
struct ReportDeleter {
  void operator()(cranest_report* r) const { cranest_report_free(r); }
};
using Matrix = std::unique_ptr<cranest_matrix, MatrixDeleter>;
using Instance = std::unique_ptr<cranest_instance, InstanceDeleter>;
using Report = std::unique_ptr<cranest_report, ReportDeleter>;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Matrix load_matrix(const std::string& path) {
  cranest_matrix* m = nullptr;
  check(cranest_matrix_load(path.c_str(), &m), ("loading " + path).c_str());
  return Matrix(m);
}

void save_matrix(const std::string& path, const cranest_matrix* m) {
  check(cranest_matrix_save(path.c_str(), m), ("writing " + path).c_str());
}

Instance load_instance(const std::string& dir) {
  cranest_instance* inst = nullptr;
  check(cranest_instance_load(dir.c_str(), &inst), ("loading instance " + dir).c_str());
  return Instance(inst);
}

Matrix instance_matrix(const cranest_instance* inst, cranest_status (*getter)(const cranest_instance*,
                                                                                cranest_matrix**)) {
  cranest_matrix* m = nullptr;
  check(getter(inst, &m), "reading instance");
  return Matrix(m);
}

cranest_layout instance_layout(const cranest_instance* inst) {
  cranest_layout l{};
  check(cranest_instance_layout(inst, &l), "reading instance layout");
  return l;
}

cranest_preset parse_preset(const std::string& name) {
  if (name == "full") return CRANEST_PRESET_FULL;
  if (name == "row" || name == "row_lasso") return CRANEST_PRESET_ROW_LASSO;
  if (name == "element" || name == "element_lasso") return CRANEST_PRESET_ELEMENT_LASSO;
  throw CliError("unknown preset '" + name + "'");
}

const char* preset_label(cranest_preset p) {
  switch (p) {
    case CRANEST_PRESET_FULL: return "full";
    case CRANEST_PRESET_ROW_LASSO: return "row_lasso";
    case CRANEST_PRESET_ELEMENT_LASSO: return "element_lasso";
  }
  return "full";
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw CliError("cannot create directory '" + dir + "'");
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  cranest_scenario spec{};
  std::string out;
};

void run_gen(const GenArgs& args) {
  cranest_instance* raw = nullptr;
  check(cranest_instance_generate(&args.spec, &raw), "generating instance");
  Instance inst(raw);
  make_dir(args.out);
  check(cranest_instance_save(args.out.c_str(), inst.get()), "saving instance");
  double sigma = 0.0;
  check(cranest_instance_noise_sigma(inst.get(), &sigma), "reading noise level");
  std::cout << "wrote " << args.out << " (noise_sigma = " << num(sigma) << ")\n";
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string instance, a, b, weights;
  int64_t k = 0, g = 0, m = 0, n = 0;
  double fraction = 0.03;
};

void run_bounds(const BoundsArgs& args) {
  Matrix a, b;
  cranest_layout layout{};
  if (!args.instance.empty()) {
    Instance inst = load_instance(args.instance);
    a = instance_matrix(inst.get(), cranest_instance_a);
    b = instance_matrix(inst.get(), cranest_instance_b);
    layout = instance_layout(inst.get());
  } else {
    if (args.a.empty() || args.b.empty() || args.k < 1 || args.g < 1 || args.m < 1 || args.n < 1)
      throw CliError("bounds: give --instance, or --a --b with --K --G --M --N");
    a = load_matrix(args.a);
    b = load_matrix(args.b);
    layout = cranest_layout{args.k, args.g, args.m, args.n, cranest_matrix_rows(a.get())};
  }
  Matrix w;
  if (!args.weights.empty()) w = load_matrix(args.weights);

  double a1s = 0.0, a2s = 0.0;
  check(cranest_tuning_bounds(a.get(), b.get(), w.get(), &layout, &a1s, &a2s), "computing bounds");
  std::cout << "alpha1_star = " << num(a1s) << "\n"
            << "alpha2_star = " << num(a2s) << "\n"
            << "fraction = " << num(args.fraction) << "\n";
  for (cranest_preset p : {CRANEST_PRESET_FULL, CRANEST_PRESET_ROW_LASSO, CRANEST_PRESET_ELEMENT_LASSO}) {
    cranest_regularization reg{};
    check(cranest_preset_regularization(p, a1s, a2s, args.fraction, &reg), "computing preset");
    std::cout << preset_label(p) << ".alpha1 = " << num(reg.alpha1) << "\n"
              << preset_label(p) << ".alpha2 = " << num(reg.alpha2) << "\n";
  }
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance, out;
  std::optional<double> alpha1, alpha2, beta;
  std::string preset = "full";
  double fraction = 0.03;
  std::optional<int> max_count, max_inner;
  std::optional<double> tol_primal, tol_change, epsilon;
};

void run_solve(const SolveArgs& args) {
  Instance inst = load_instance(args.instance);
  Matrix a = instance_matrix(inst.get(), cranest_instance_a);
  Matrix b = instance_matrix(inst.get(), cranest_instance_b);
  cranest_layout layout = instance_layout(inst.get());

  cranest_solver_config cfg{};
  cranest_solver_config_defaults(&cfg);
  std::string source;
  if (args.alpha1 || args.alpha2) {
    if (!args.alpha1 || !args.alpha2) throw CliError("solve: --alpha1 and --alpha2 go together");
    cfg.reg = cranest_regularization{*args.alpha1, *args.alpha2};
    source = "explicit";
  } else {
    double a1s = 0.0, a2s = 0.0;
    check(cranest_tuning_bounds(a.get(), b.get(), nullptr, &layout, &a1s, &a2s), "computing bounds");
    const cranest_preset p = parse_preset(args.preset);
    check(cranest_preset_regularization(p, a1s, a2s, args.fraction, &cfg.reg), "computing preset");
    source = std::string(preset_label(p)) + "@" + num(args.fraction);
  }
  if (args.beta) cfg.beta = *args.beta;
  if (args.max_count) cfg.max_count = *args.max_count;
  if (args.max_inner) cfg.max_inner_iters = *args.max_inner;
  if (args.tol_primal) cfg.tol_primal = *args.tol_primal;
  if (args.tol_change) cfg.tol_change = *args.tol_change;
  if (args.epsilon) cfg.epsilon = *args.epsilon;

  cranest_report* raw = nullptr;
  check(cranest_solve(a.get(), b.get(), &layout, &cfg, &raw), "solving");
  Report report(raw);

  make_dir(args.out);
  const fs::path root(args.out);
  cranest_matrix* xr = nullptr;
  check(cranest_report_x_hat(report.get(), &xr), "reading estimate");
  Matrix x_hat(xr);
  save_matrix((root / "x_hat.mat").string(), x_hat.get());
  cranest_matrix* wr = nullptr;
  check(cranest_report_weights(report.get(), &wr), "reading weights");
  Matrix weights(wr);
  save_matrix((root / "weights.mat").string(), weights.get());

  {
    std::ofstream csv((root / "report.csv").string());
    csv << "outer_pass,inner_iter,objective,primal_residual_z,primal_residual_q,dx_rel\n";
    const size_t n = cranest_report_history_length(report.get());
    for (size_t k = 0; k < n; ++k) {
      cranest_iteration it{};
      check(cranest_report_history(report.get(), k, &it), "reading history");
      csv << it.outer_pass << ',' << it.inner_iter << ',' << num(it.objective) << ',' << num(it.primal_residual_z)
          << ',' << num(it.primal_residual_q) << ',' << num(it.dx_rel) << '\n';
    }
    if (!csv) throw CliError("writing report.csv failed");
  }

  const int passes = cranest_report_pass_count(report.get());
  std::string iters, converged;
  for (int p = 1; p <= passes; ++p) {
    int it = 0, conv = 0;
    check(cranest_report_pass(report.get(), p, &it, &conv), "reading pass summary");
    iters += (p > 1 ? "," : "") + std::to_string(it);
    converged += (p > 1 ? "," : "") + std::to_string(conv);
  }
  const double beta = cfg.beta > 0.0 ? cfg.beta : 4.0 * (cfg.reg.alpha1 + cfg.reg.alpha2);
  {
    std::ofstream meta((root / "solve.meta").string());
    meta << "instance = " << args.instance << '\n'
         << "regularization = " << source << '\n'
         << "alpha1 = " << num(cfg.reg.alpha1) << '\n'
         << "alpha2 = " << num(cfg.reg.alpha2) << '\n'
         << "beta = " << num(beta) << '\n'
         << "epsilon = " << num(cfg.epsilon) << '\n'
         << "max_count = " << cfg.max_count << '\n'
         << "max_inner_iters = " << cfg.max_inner_iters << '\n'
         << "tol_primal = " << num(cfg.tol_primal) << '\n'
         << "tol_change = " << num(cfg.tol_change) << '\n'
         << "pass_iterations = " << iters << '\n'
         << "pass_converged = " << converged << '\n'
         << "wall_time_s = " << num(cranest_report_wall_time(report.get())) << '\n';
    if (!meta) throw CliError("writing solve.meta failed");
  }

  for (size_t k = 0; k < cranest_report_warning_count(report.get()); ++k)
    std::cerr << "warning: " << cranest_report_warning(report.get(), k) << '\n';

  std::cout << "alpha1 = " << num(cfg.reg.alpha1) << "\nalpha2 = " << num(cfg.reg.alpha2) << "\nbeta = " << num(beta)
            << "\npass_iterations = " << iters << "\npass_converged = " << converged << '\n';
  cranest_matrix* tr = nullptr;
  if (cranest_instance_truth(inst.get(), &tr) == CRANEST_OK) {
    Matrix truth(tr);
    double nmse = 0.0;
    check(cranest_nmse_db(x_hat.get(), truth.get(), &nmse), "computing nmse");
    std::vector<int64_t> est(static_cast<size_t>(layout.users)), act(static_cast<size_t>(layout.users));
    size_t n_est = 0, n_act = 0;
    check(cranest_detect_active(x_hat.get(), &layout, 0.1, est.data(), est.size(), &n_est), "detecting users");
    check(cranest_instance_active_set(inst.get(), act.data(), act.size(), &n_act), "reading active set");
    int64_t errors = 0;
    check(cranest_detection_errors(est.data(), n_est, act.data(), n_act, &errors), "counting errors");
    std::cout << "nmse_db = " << num(nmse) << "\ndetection_errors = " << errors << '\n';
  }
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string instance, solution, weights;
  double alpha1 = 0.0, alpha2 = 0.0;
};

constexpr int64_t kOracleSizeLimit = 4096;

void run_verify(const VerifyArgs& args) {
  Instance inst = load_instance(args.instance);
  Matrix a = instance_matrix(inst.get(), cranest_instance_a);
  Matrix b = instance_matrix(inst.get(), cranest_instance_b);
  cranest_layout layout = instance_layout(inst.get());
  Matrix x = load_matrix(args.solution);
  Matrix w;
  if (!args.weights.empty()) w = load_matrix(args.weights);
  const cranest_regularization reg{args.alpha1, args.alpha2};

  double stat = 0.0, dual = 0.0, kkt = 0.0, f = 0.0;
  check(cranest_kkt_residual(x.get(), a.get(), b.get(), w.get(), &layout, &reg, &stat, &dual, &kkt), "kkt check");
  check(cranest_objective(x.get(), a.get(), b.get(), w.get(), &layout, &reg, &f), "objective");
  std::cout << "kkt_residual = " << num(kkt) << "\nkkt_stationarity = " << num(stat)
            << "\nkkt_dual_feasibility = " << num(dual) << "\nobjective = " << num(f) << '\n';

  const int64_t size = layout.users * layout.user_antennas * layout.rrhs * layout.rrh_antennas;
  if (size <= kOracleSizeLimit) {
    double fo = 0.0;
    int iters = 0;
    check(cranest_oracle_solve(a.get(), b.get(), w.get(), &layout, &reg, 0, 0.0, nullptr, &fo, &iters), "oracle");
    const double gap = fo != 0.0 ? (f - fo) / fo : f - fo;
    std::cout << "oracle_objective = " << num(fo) << "\noracle_iterations = " << iters
              << "\nrelative_gap = " << num(gap) << '\n';
  } else {
    std::cout << "oracle = skipped (KN*GM = " << size << " > " << kOracleSizeLimit << ")\n";
  }
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config, out;
  int jobs = 1;
};

int run_sweep(const SweepArgs& args) {
  int64_t diverged = 0;
  check(cranest_sweep_run(args.config.c_str(), args.out.c_str(), args.jobs, &diverged), "sweep");
  std::cout << "wrote " << args.out << " (" << diverged << " diverged cells)\n";
  return diverged == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint activity detection and channel estimation for cloud radio access networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cranest_version()));

  GenArgs gen;
  cranest_scenario_defaults(&gen.spec);
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--K", gen.spec.layout.users, "Users")->required();
  gen_cmd->add_option("--G", gen.spec.layout.rrhs, "RRHs")->required();
  gen_cmd->add_option("--M", gen.spec.layout.rrh_antennas, "Antennas per RRH")->required();
  gen_cmd->add_option("--N", gen.spec.layout.user_antennas, "Antennas per user")->required();
  gen_cmd->add_option("--L", gen.spec.layout.pilot_length, "Pilot length")->required();
  gen_cmd->add_option("--active", gen.spec.active_count, "Number of active users")->required();
  gen_cmd->add_option("--snr-db", gen.spec.snr_db, "Receive SNR in dB")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "Seed")->capture_default_str();
  bool path_loss = false, noiseless = false;
  gen_cmd->add_flag("--path-loss", path_loss, "Enable the distance path-loss model");
  gen_cmd->add_option("--area", gen.spec.area, "Side of the deployment square")->capture_default_str();
  gen_cmd->add_option("--exponent", gen.spec.exponent, "Path-loss exponent")->capture_default_str();
  gen_cmd->add_flag("--noiseless", noiseless, "B = A X exactly");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Zero-solution bounds and preset penalties");
  bounds_cmd->add_option("--instance", bounds.instance, "Instance directory");
  bounds_cmd->add_option("--a", bounds.a, "Sensing matrix file");
  bounds_cmd->add_option("--b", bounds.b, "Observation file");
  bounds_cmd->add_option("--K", bounds.k, "Users (with --a/--b)");
  bounds_cmd->add_option("--G", bounds.g, "RRHs (with --a/--b)");
  bounds_cmd->add_option("--M", bounds.m, "Antennas per RRH (with --a/--b)");
  bounds_cmd->add_option("--N", bounds.n, "Antennas per user (with --a/--b)");
  bounds_cmd->add_option("--weights", bounds.weights, "Weight matrix file");
  bounds_cmd->add_option("--fraction", bounds.fraction, "Preset fraction")->capture_default_str();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Re-weighted ADMM estimate");
  solve_cmd->add_option("--instance", solve.instance, "Instance directory")->required();
  auto* a1 = solve_cmd->add_option("--alpha1", solve.alpha1, "Row-chunk penalty");
  auto* a2 = solve_cmd->add_option("--alpha2", solve.alpha2, "Element-chunk penalty");
  auto* pr = solve_cmd->add_option("--preset", solve.preset, "full, row or element")->capture_default_str();
  auto* fr = solve_cmd->add_option("--fraction", solve.fraction, "Preset fraction")->capture_default_str();
  pr->excludes(a1)->excludes(a2);
  fr->excludes(a1)->excludes(a2);
  solve_cmd->add_option("--beta", solve.beta, "ADMM penalty (default 4 (alpha1 + alpha2))");
  solve_cmd->add_option("--max-count", solve.max_count, "Re-weighting passes");
  solve_cmd->add_option("--max-inner", solve.max_inner, "Inner iteration cap");
  solve_cmd->add_option("--tol-primal", solve.tol_primal, "Primal residual tolerance");
  solve_cmd->add_option("--tol-change", solve.tol_change, "Relative X change tolerance");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Re-weighting floor");
  solve_cmd->add_option("--out", solve.out, "Output directory")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "KKT residual and oracle cross-check");
  verify_cmd->add_option("--instance", verify.instance, "Instance directory")->required();
  verify_cmd->add_option("--solution", verify.solution, "Estimate file")->required();
  verify_cmd->add_option("--alpha1", verify.alpha1, "Row-chunk penalty")->required();
  verify_cmd->add_option("--alpha2", verify.alpha2, "Element-chunk penalty")->required();
  verify_cmd->add_option("--weights", verify.weights, "Weight matrix file (default all ones)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Pilot-length sweep over seeded trials");
  sweep_cmd->add_option("--config", sweep.config, "Sweep configuration")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) {
      gen.spec.path_loss = path_loss ? 1 : 0;
      gen.spec.noiseless = noiseless ? 1 : 0;
      run_gen(gen);
    } else if (*bounds_cmd) {
      run_bounds(bounds);
    } else if (*solve_cmd) {
      run_solve(solve);
    } else if (*verify_cmd) {
      run_verify(verify);
    } else if (*sweep_cmd) {
      return run_sweep(sweep);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
