#include "cranest/cranest.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "cranest/admm.hpp"
#include "cranest/harness.hpp"
#include "cranest/metrics.hpp"
#include "cranest/oracle.hpp"
#include "cranest/scenario.hpp"
#include "cranest/shrinkage.hpp"

struct cranest_matrix {
  cranest::ComplexMatrix m;
};

struct cranest_instance {
  cranest::ProblemInstance inst;
  std::optional<cranest::ScenarioSpec> spec;
};

struct cranest_report {
  cranest::SolveReport report;
};

namespace {

using cranest::ErrorKind;
using cranest::Index;

thread_local std::string g_last_error;

struct NullArgument {
  const char* name;
};

cranest_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return CRANEST_ERR_DIMENSION;
    case ErrorKind::index: return CRANEST_ERR_INDEX;
    case ErrorKind::domain: return CRANEST_ERR_DOMAIN;
    case ErrorKind::degenerate_signal: return CRANEST_ERR_DEGENERATE_SIGNAL;
    case ErrorKind::divergence: return CRANEST_ERR_DIVERGENCE;
    case ErrorKind::io: return CRANEST_ERR_IO;
    case ErrorKind::parse: return CRANEST_ERR_PARSE;
  }
  return CRANEST_ERR_INTERNAL;
}

template <class F>
cranest_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return CRANEST_OK;
  } catch (const NullArgument& e) {
    g_last_error = std::string("null argument: ") + e.name;
    return CRANEST_ERR_NULL_ARGUMENT;
  } catch (const cranest::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CRANEST_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CRANEST_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CRANEST_ERR_INTERNAL;
  }
}

template <class T>
T& deref(T* p, const char* name) {
  if (!p) throw NullArgument{name};
  return *p;
}

cranest::ChunkLayout to_layout(const cranest_layout* l) {
  const cranest_layout& in = deref(l, "layout");
  cranest::ChunkLayout out{in.users, in.rrhs, in.rrh_antennas, in.user_antennas, in.pilot_length};
  out.validate();
  return out;
}

cranest_layout from_layout(const cranest::ChunkLayout& l) {
  return cranest_layout{l.users, l.rrhs, l.rrh_antennas, l.user_antennas, l.pilot_length};
}

cranest::Weights to_weights(const cranest_matrix* w, const cranest::ChunkLayout& layout) {
  if (!w) return cranest::Weights::ones(layout);
  layout.require_x(w->m, "weights");
  cranest::Weights out;
  out.w = w->m.real();
  cranest::require(w->m.imag().isZero(0.0), ErrorKind::domain, "weights must be real");
  out.validate();
  return out;
}

cranest::Regularization to_reg(const cranest_regularization* r) {
  const cranest_regularization& in = deref(r, "reg");
  cranest::Regularization out{in.alpha1, in.alpha2};
  out.validate();
  return out;
}

cranest::SolverConfig to_config(const cranest_solver_config* c) {
  const cranest_solver_config& in = deref(c, "config");
  cranest::SolverConfig out;
  out.reg = cranest::Regularization{in.reg.alpha1, in.reg.alpha2};
  if (in.beta > 0.0) out.beta = in.beta;
  out.epsilon = in.epsilon;
  out.max_count = in.max_count;
  out.max_inner_iters = in.max_inner_iters;
  out.tol_primal = in.tol_primal;
  out.tol_change = in.tol_change;
  out.validate();
  return out;
}

void emit_matrix(cranest::ComplexMatrix m, cranest_matrix** out) {
  deref(out, "out");
  *out = new cranest_matrix{std::move(m)};
}

std::optional<Index> rrh_arg(int64_t rrh, const cranest::ChunkLayout& layout) {
  cranest::require(rrh >= 0 && rrh <= layout.rrhs, ErrorKind::index,
                   "rrh index " + std::to_string(rrh) + " outside 0.." + std::to_string(layout.rrhs));
  if (rrh == 0) return std::nullopt;
  return static_cast<Index>(rrh - 1);
}

Index user_arg(int64_t user, const cranest::ChunkLayout& layout) {
  cranest::require(user >= 1 && user <= layout.users, ErrorKind::index,
                   "user index " + std::to_string(user) + " outside 1.." + std::to_string(layout.users));
  return static_cast<Index>(user - 1);
}

void emit_indices(const std::vector<Index>& zero_based, int64_t* out, size_t capacity, size_t* count) {
  deref(count, "count");
  *count = zero_based.size();
  cranest::require(capacity >= zero_based.size(), ErrorKind::dimension,
                   "output buffer holds " + std::to_string(capacity) + " entries, " +
                       std::to_string(zero_based.size()) + " needed");
  if (!zero_based.empty()) deref(out, "out");
  for (std::size_t k = 0; k < zero_based.size(); ++k) out[k] = static_cast<int64_t>(zero_based[k] + 1);
}

std::vector<Index> take_indices(const int64_t* in, size_t n, const char* name) {
  std::vector<Index> out;
  if (n > 0) deref(in, name);
  for (size_t k = 0; k < n; ++k) {
    cranest::require(in[k] >= 1, ErrorKind::index, std::string(name) + ": indices are 1-based");
    out.push_back(static_cast<Index>(in[k] - 1));
  }
  return out;
}

}  // namespace

extern "C" {

const char* cranest_last_error(void) { return g_last_error.c_str(); }

const char* cranest_status_string(cranest_status status) {
  switch (status) {
    case CRANEST_OK: return "ok";
    case CRANEST_ERR_DIMENSION: return "dimension error";
    case CRANEST_ERR_INDEX: return "index error";
    case CRANEST_ERR_DOMAIN: return "domain error";
    case CRANEST_ERR_DEGENERATE_SIGNAL: return "degenerate signal";
    case CRANEST_ERR_DIVERGENCE: return "divergence";
    case CRANEST_ERR_IO: return "i/o error";
    case CRANEST_ERR_PARSE: return "parse error";
    case CRANEST_ERR_NULL_ARGUMENT: return "null argument";
    case CRANEST_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cranest_version(void) { return "0.1.0"; }

cranest_status cranest_matrix_zeros(int64_t rows, int64_t cols, cranest_matrix** out) {
  return guarded([&] {
    cranest::require(rows >= 1 && cols >= 1, ErrorKind::dimension, "matrix dimensions must be positive");
    emit_matrix(cranest::ComplexMatrix::Zero(rows, cols), out);
  });
}

cranest_status cranest_matrix_from_data(int64_t rows, int64_t cols, const double* interleaved,
                                        cranest_matrix** out) {
  return guarded([&] {
    cranest::require(rows >= 1 && cols >= 1, ErrorKind::dimension, "matrix dimensions must be positive");
    deref(interleaved, "interleaved");
    cranest::ComplexMatrix m(rows, cols);
    for (Index k = 0; k < m.size(); ++k) {
      const double re = interleaved[2 * k], im = interleaved[2 * k + 1];
      cranest::require(std::isfinite(re) && std::isfinite(im), ErrorKind::domain, "matrix data must be finite");
      m.data()[k] = cranest::Complex(re, im);
    }
    emit_matrix(std::move(m), out);
  });
}

cranest_status cranest_matrix_clone(const cranest_matrix* m, cranest_matrix** out) {
  return guarded([&] { emit_matrix(deref(m, "m").m, out); });
}

void cranest_matrix_free(cranest_matrix* m) { delete m; }

int64_t cranest_matrix_rows(const cranest_matrix* m) { return m ? m->m.rows() : 0; }
int64_t cranest_matrix_cols(const cranest_matrix* m) { return m ? m->m.cols() : 0; }

cranest_status cranest_matrix_get(const cranest_matrix* m, int64_t row, int64_t col, double* re, double* im) {
  return guarded([&] {
    const auto& mm = deref(m, "m").m;
    cranest::require(row >= 1 && row <= mm.rows() && col >= 1 && col <= mm.cols(), ErrorKind::index,
                     "entry (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                         cranest::ChunkLayout::shape_string(mm.rows(), mm.cols()));
    const cranest::Complex v = mm(row - 1, col - 1);
    deref(re, "re") = v.real();
    deref(im, "im") = v.imag();
  });
}

cranest_status cranest_matrix_set(cranest_matrix* m, int64_t row, int64_t col, double re, double im) {
  return guarded([&] {
    auto& mm = deref(m, "m").m;
    cranest::require(row >= 1 && row <= mm.rows() && col >= 1 && col <= mm.cols(), ErrorKind::index,
                     "entry (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                         cranest::ChunkLayout::shape_string(mm.rows(), mm.cols()));
    cranest::require(std::isfinite(re) && std::isfinite(im), ErrorKind::domain, "entry must be finite");
    mm(row - 1, col - 1) = cranest::Complex(re, im);
  });
}

cranest_status cranest_matrix_copy_data(const cranest_matrix* m, double* out, size_t capacity) {
  return guarded([&] {
    const auto& mm = deref(m, "m").m;
    const size_t need = 2 * static_cast<size_t>(mm.size());
    cranest::require(capacity >= need, ErrorKind::dimension,
                     "output buffer holds " + std::to_string(capacity) + " doubles, " + std::to_string(need) +
                         " needed");
    deref(out, "out");
    for (Index k = 0; k < mm.size(); ++k) {
      out[2 * k] = mm.data()[k].real();
      out[2 * k + 1] = mm.data()[k].imag();
    }
  });
}

cranest_status cranest_matrix_load(const char* path, cranest_matrix** out) {
  return guarded([&] {
    deref(path, "path");
    emit_matrix(cranest::load_matrix(path), out);
  });
}

cranest_status cranest_matrix_save(const char* path, const cranest_matrix* m) {
  return guarded([&] {
    deref(path, "path");
    cranest::save_matrix(path, deref(m, "m").m);
  });
}

cranest_status cranest_frobenius_norm(const cranest_matrix* m, double* out) {
  return guarded([&] { deref(out, "out") = cranest::frobenius_norm(deref(m, "m").m); });
}

cranest_status cranest_hadamard(const cranest_matrix* a, const cranest_matrix* b, cranest_matrix** out) {
  return guarded([&] { emit_matrix(cranest::hadamard(deref(a, "a").m, deref(b, "b").m), out); });
}

cranest_status cranest_chunk_extract(const cranest_matrix* x, const cranest_layout* layout, int64_t user,
                                     int64_t rrh, cranest_matrix** out) {
  return guarded([&] {
    const auto l = to_layout(layout);
    emit_matrix(cranest::chunk_extract(deref(x, "x").m, l, user_arg(user, l), rrh_arg(rrh, l)), out);
  });
}

cranest_status cranest_chunk_norm(const cranest_matrix* x, const cranest_matrix* weights,
                                  const cranest_layout* layout, int64_t user, int64_t rrh, double* out) {
  return guarded([&] {
    const auto l = to_layout(layout);
    const auto& xm = deref(x, "x").m;
    l.require_x(xm, "x");
    const auto w = to_weights(weights, l);
    const Index i = user_arg(user, l);
    const auto j = rrh_arg(rrh, l);
    const auto norms = cranest::chunk_norm_map(xm, w.w, l);
    deref(out, "out") = j ? norms.element(i, *j) : norms.row[static_cast<std::size_t>(i)];
  });
}

cranest_status cranest_matrix_shrink(const cranest_matrix* b, double tau, cranest_matrix** out) {
  return guarded([&] { emit_matrix(cranest::matrix_shrink(deref(b, "b").m, tau), out); });
}

cranest_status cranest_chunk_shrink(const cranest_matrix* x, const cranest_layout* layout,
                                    cranest_granularity granularity, double tau, cranest_matrix** out) {
  return guarded([&] {
    const auto l = to_layout(layout);
    cranest::require(granularity == CRANEST_ROW_CHUNK || granularity == CRANEST_ELEMENT_CHUNK, ErrorKind::domain,
                     "unknown granularity");
    const auto g = granularity == CRANEST_ROW_CHUNK ? cranest::Granularity::row_chunk
                                                    : cranest::Granularity::element_chunk;
    emit_matrix(cranest::chunk_shrink(deref(x, "x").m, l, g, tau), out);
  });
}

void cranest_scenario_defaults(cranest_scenario* spec) {
  if (!spec) return;
  const cranest::ScenarioSpec d;
  const cranest::PathLossModel pl;
  spec->layout = cranest_layout{100, 10, 3, 2, 40};
  spec->active_count = 10;
  spec->snr_db = d.snr_db;
  spec->noiseless = 0;
  spec->path_loss = 0;
  spec->area = pl.area;
  spec->exponent = pl.exponent;
  spec->seed = 0;
}

cranest_status cranest_instance_generate(const cranest_scenario* spec, cranest_instance** out) {
  return guarded([&] {
    const cranest_scenario& in = deref(spec, "spec");
    deref(out, "out");
    cranest::ScenarioSpec s;
    s.layout = to_layout(&in.layout);
    s.active_count = in.active_count;
    s.snr_db = in.snr_db;
    s.noiseless = in.noiseless != 0;
    if (in.path_loss) {
      cranest::PathLossModel pl;
      pl.area = in.area;
      pl.exponent = in.exponent;
      s.path_loss = pl;
    }
    s.seed = in.seed;
    auto inst = cranest::generate_instance(s);
    *out = new cranest_instance{std::move(inst), s};
  });
}

cranest_status cranest_instance_from_matrices(const cranest_matrix* a, const cranest_matrix* b,
                                              const cranest_layout* layout, cranest_instance** out) {
  return guarded([&] {
    deref(out, "out");
    cranest::ProblemInstance inst;
    inst.layout = to_layout(layout);
    inst.a = deref(a, "a").m;
    inst.b = deref(b, "b").m;
    inst.layout.require_a(inst.a);
    inst.layout.require_b(inst.b);
    *out = new cranest_instance{std::move(inst), std::nullopt};
  });
}

cranest_status cranest_instance_load(const char* dir, cranest_instance** out) {
  return guarded([&] {
    deref(dir, "dir");
    deref(out, "out");
    auto inst = cranest::load_instance(dir);
    auto spec = cranest::load_scenario_spec(dir);
    *out = new cranest_instance{std::move(inst), std::move(spec)};
  });
}

cranest_status cranest_instance_save(const char* dir, const cranest_instance* inst) {
  return guarded([&] {
    deref(dir, "dir");
    const auto& in = deref(inst, "inst");
    cranest::require(in.spec.has_value(), ErrorKind::domain, "instance has no scenario record to save");
    cranest::save_instance(dir, in.inst, *in.spec);
  });
}

void cranest_instance_free(cranest_instance* inst) { delete inst; }

cranest_status cranest_instance_layout(const cranest_instance* inst, cranest_layout* out) {
  return guarded([&] { deref(out, "out") = from_layout(deref(inst, "inst").inst.layout); });
}

cranest_status cranest_instance_a(const cranest_instance* inst, cranest_matrix** out) {
  return guarded([&] { emit_matrix(deref(inst, "inst").inst.a, out); });
}

cranest_status cranest_instance_b(const cranest_instance* inst, cranest_matrix** out) {
  return guarded([&] { emit_matrix(deref(inst, "inst").inst.b, out); });
}

cranest_status cranest_instance_truth(const cranest_instance* inst, cranest_matrix** out) {
  return guarded([&] {
    const auto& in = deref(inst, "inst").inst;
    cranest::require(in.truth_x.has_value(), ErrorKind::domain, "instance has no ground truth");
    emit_matrix(*in.truth_x, out);
  });
}

cranest_status cranest_instance_active_set(const cranest_instance* inst, int64_t* out, size_t capacity,
                                           size_t* count) {
  return guarded([&] {
    const auto& in = deref(inst, "inst").inst;
    cranest::require(in.active_set.has_value(), ErrorKind::domain, "instance has no ground truth");
    emit_indices(*in.active_set, out, capacity, count);
  });
}

cranest_status cranest_instance_noise_sigma(const cranest_instance* inst, double* out) {
  return guarded([&] { deref(out, "out") = deref(inst, "inst").inst.noise_sigma; });
}

cranest_status cranest_tuning_bounds(const cranest_matrix* a, const cranest_matrix* b, const cranest_matrix* weights,
                                     const cranest_layout* layout, double* alpha1_star, double* alpha2_star) {
  return guarded([&] {
    const auto l = to_layout(layout);
    const auto t = cranest::tuning_bounds(deref(a, "a").m, deref(b, "b").m, to_weights(weights, l), l);
    deref(alpha1_star, "alpha1_star") = t.alpha1_star;
    deref(alpha2_star, "alpha2_star") = t.alpha2_star;
  });
}

cranest_status cranest_preset_regularization(cranest_preset kind, double alpha1_star, double alpha2_star,
                                             double fraction, cranest_regularization* out) {
  return guarded([&] {
    cranest::Preset p;
    switch (kind) {
      case CRANEST_PRESET_FULL: p = cranest::Preset::full; break;
      case CRANEST_PRESET_ROW_LASSO: p = cranest::Preset::row_lasso; break;
      case CRANEST_PRESET_ELEMENT_LASSO: p = cranest::Preset::element_lasso; break;
      default: cranest::fail(ErrorKind::domain, "unknown preset");
    }
    const auto r = cranest::preset(p, cranest::TuningBounds{alpha1_star, alpha2_star}, fraction);
    deref(out, "out") = cranest_regularization{r.alpha1, r.alpha2};
  });
}

cranest_status cranest_objective(const cranest_matrix* x, const cranest_matrix* a, const cranest_matrix* b,
                                 const cranest_matrix* weights, const cranest_layout* layout,
                                 const cranest_regularization* reg, double* out) {
  return guarded([&] {
    const auto l = to_layout(layout);
    deref(out, "out") = cranest::objective(deref(x, "x").m, deref(a, "a").m, deref(b, "b").m,
                                           to_weights(weights, l), to_reg(reg), l);
  });
}

cranest_status cranest_weight_update(const cranest_matrix* x_prev, double epsilon, cranest_matrix** out) {
  return guarded([&] {
    const auto w = cranest::weight_update(deref(x_prev, "x_prev").m, epsilon);
    emit_matrix(w.w.cast<cranest::Complex>(), out);
  });
}

void cranest_solver_config_defaults(cranest_solver_config* config) {
  if (!config) return;
  const cranest::SolverConfig d;
  config->reg = cranest_regularization{0.0, 0.0};
  config->beta = 0.0;
  config->epsilon = d.epsilon;
  config->max_count = d.max_count;
  config->max_inner_iters = d.max_inner_iters;
  config->tol_primal = d.tol_primal;
  config->tol_change = d.tol_change;
}

cranest_status cranest_solve(const cranest_matrix* a, const cranest_matrix* b, const cranest_layout* layout,
                             const cranest_solver_config* config, cranest_report** out) {
  return guarded([&] {
    deref(out, "out");
    const auto l = to_layout(layout);
    auto report = cranest::solve(deref(a, "a").m, deref(b, "b").m, to_config(config), l);
    *out = new cranest_report{std::move(report)};
  });
}

void cranest_report_free(cranest_report* report) { delete report; }

cranest_status cranest_report_x_hat(const cranest_report* report, cranest_matrix** out) {
  return guarded([&] { emit_matrix(deref(report, "report").report.x_hat, out); });
}

cranest_status cranest_report_weights(const cranest_report* report, cranest_matrix** out) {
  return guarded([&] {
    emit_matrix(deref(report, "report").report.final_state.weights.w.cast<cranest::Complex>(), out);
  });
}

size_t cranest_report_history_length(const cranest_report* report) {
  return report ? report->report.history.size() : 0;
}

cranest_status cranest_report_history(const cranest_report* report, size_t position, cranest_iteration* out) {
  return guarded([&] {
    const auto& h = deref(report, "report").report.history;
    cranest::require(position < h.size(), ErrorKind::index, "history position out of range");
    const auto& r = h[position];
    deref(out, "out") = cranest_iteration{r.outer_pass,        r.inner_iter,        r.objective,
                                          r.primal_residual_z, r.primal_residual_q, r.dx_rel};
  });
}

int cranest_report_pass_count(const cranest_report* report) {
  return report ? static_cast<int>(report->report.inner_iterations_used.size()) : 0;
}

cranest_status cranest_report_pass(const cranest_report* report, int pass, int* inner_iterations, int* converged) {
  return guarded([&] {
    const auto& r = deref(report, "report").report;
    cranest::require(pass >= 1 && pass <= static_cast<int>(r.inner_iterations_used.size()), ErrorKind::index,
                     "pass " + std::to_string(pass) + " out of range");
    const auto k = static_cast<std::size_t>(pass - 1);
    deref(inner_iterations, "inner_iterations") = r.inner_iterations_used[k];
    deref(converged, "converged") = r.pass_converged[k] ? 1 : 0;
  });
}

double cranest_report_wall_time(const cranest_report* report) { return report ? report->report.wall_time_s : 0.0; }

size_t cranest_report_warning_count(const cranest_report* report) {
  return report ? report->report.warnings.size() : 0;
}

const char* cranest_report_warning(const cranest_report* report, size_t position) {
  if (!report || position >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[position].c_str();
}

cranest_status cranest_kkt_residual(const cranest_matrix* x, const cranest_matrix* a, const cranest_matrix* b,
                                    const cranest_matrix* weights, const cranest_layout* layout,
                                    const cranest_regularization* reg, double* stationarity,
                                    double* dual_feasibility, double* residual) {
  return guarded([&] {
    const auto l = to_layout(layout);
    const auto k = cranest::kkt_breakdown(deref(x, "x").m, deref(a, "a").m, deref(b, "b").m,
                                          to_weights(weights, l), to_reg(reg), l);
    if (stationarity) *stationarity = k.stationarity;
    if (dual_feasibility) *dual_feasibility = k.dual_feasibility;
    if (residual) *residual = k.residual();
  });
}

cranest_status cranest_oracle_solve(const cranest_matrix* a, const cranest_matrix* b, const cranest_matrix* weights,
                                    const cranest_layout* layout, const cranest_regularization* reg, int max_iters,
                                    double tol_grad, cranest_matrix** x_out, double* objective, int* iterations) {
  return guarded([&] {
    const auto l = to_layout(layout);
    cranest::OracleConfig cfg;
    if (max_iters > 0) cfg.max_iters = max_iters;
    if (tol_grad > 0.0) cfg.tol_grad = tol_grad;
    auto r = cranest::prox_grad_solve(deref(a, "a").m, deref(b, "b").m, to_weights(weights, l), to_reg(reg), l, cfg);
    if (objective) *objective = r.objective;
    if (iterations) *iterations = r.iterations;
    if (x_out) emit_matrix(std::move(r.x), x_out);
  });
}

cranest_status cranest_nmse_db(const cranest_matrix* x_hat, const cranest_matrix* truth, double* out) {
  return guarded([&] { deref(out, "out") = cranest::nmse_db(deref(x_hat, "x_hat").m, deref(truth, "truth").m); });
}

cranest_status cranest_detect_active(const cranest_matrix* x_hat, const cranest_layout* layout, double rel_threshold,
                                     int64_t* out, size_t capacity, size_t* count) {
  return guarded([&] {
    const auto l = to_layout(layout);
    const auto d = cranest::detect_active(deref(x_hat, "x_hat").m, l, rel_threshold);
    emit_indices(d.estimated_active, out, capacity, count);
  });
}

cranest_status cranest_detection_errors(const int64_t* estimated, size_t n_estimated, const int64_t* truth,
                                        size_t n_truth, int64_t* out) {
  return guarded([&] {
    deref(out, "out") = static_cast<int64_t>(cranest::detection_errors(take_indices(estimated, n_estimated, "estimated"),
                                                                       take_indices(truth, n_truth, "truth")));
  });
}

cranest_status cranest_sweep_run(const char* config_path, const char* out_dir, int jobs, int64_t* diverged) {
  return guarded([&] {
    deref(config_path, "config_path");
    deref(out_dir, "out_dir");
    const auto spec = cranest::SweepSpec::load(config_path);
    const auto rows = cranest::run_sweep_to_directory(spec, out_dir, jobs);
    int64_t n = 0;
    for (const auto& r : rows) n += r.diverged ? 1 : 0;
    if (diverged) *diverged = n;
  });
}

}  // extern "C"
