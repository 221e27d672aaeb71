#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <vector>

#include "cranest/cranest.h"

namespace {

struct MatrixGuard {
  cranest_matrix* m = nullptr;
  ~MatrixGuard() { cranest_matrix_free(m); }
};

cranest_scenario small_scenario(uint64_t seed) {
  cranest_scenario s;
  cranest_scenario_defaults(&s);
  s.layout = {20, 4, 2, 1, 12};
  s.active_count = 3;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("status strings and errors") {
  CHECK(std::strlen(cranest_version()) > 0);
  CHECK(std::strcmp(cranest_status_string(CRANEST_OK), "ok") == 0);
  MatrixGuard m;
  CHECK(cranest_matrix_zeros(-1, 2, &m.m) == CRANEST_ERR_DIMENSION);
  CHECK(std::strlen(cranest_last_error()) > 0);
  CHECK(cranest_matrix_zeros(2, 2, nullptr) == CRANEST_ERR_NULL_ARGUMENT);
  CHECK(cranest_frobenius_norm(nullptr, nullptr) == CRANEST_ERR_NULL_ARGUMENT);
}

TEST_CASE("matrices through the C API") {
  const double data[] = {3, 0, 0, 4};
  MatrixGuard m;
  REQUIRE(cranest_matrix_from_data(1, 2, data, &m.m) == CRANEST_OK);
  double n = 0;
  REQUIRE(cranest_frobenius_norm(m.m, &n) == CRANEST_OK);
  CHECK(n == doctest::Approx(5.0));
  CHECK(cranest_matrix_rows(m.m) == 1);
  CHECK(cranest_matrix_cols(m.m) == 2);

  double re = 0, im = 0;
  REQUIRE(cranest_matrix_get(m.m, 1, 2, &re, &im) == CRANEST_OK);
  CHECK(re == 0.0);
  CHECK(im == 4.0);
  CHECK(cranest_matrix_get(m.m, 0, 1, &re, &im) == CRANEST_ERR_INDEX);
  CHECK(cranest_matrix_set(m.m, 1, 3, 1, 1) == CRANEST_ERR_INDEX);

  MatrixGuard s;
  REQUIRE(cranest_matrix_shrink(m.m, 2.0, &s.m) == CRANEST_OK);
  double out[4];
  REQUIRE(cranest_matrix_copy_data(s.m, out, 4) == CRANEST_OK);
  CHECK(out[0] == doctest::Approx(1.8));
  CHECK(out[3] == doctest::Approx(2.4));
  CHECK(cranest_matrix_copy_data(s.m, out, 3) == CRANEST_ERR_DIMENSION);
  CHECK(cranest_matrix_shrink(m.m, -1.0, &s.m) == CRANEST_ERR_DOMAIN);

  const auto path = (std::filesystem::temp_directory_path() / "cranest_test_capi.mat").string();
  REQUIRE(cranest_matrix_save(path.c_str(), m.m) == CRANEST_OK);
  MatrixGuard back;
  REQUIRE(cranest_matrix_load(path.c_str(), &back.m) == CRANEST_OK);
  double a[4], b[4];
  cranest_matrix_copy_data(m.m, a, 4);
  cranest_matrix_copy_data(back.m, b, 4);
  CHECK(std::memcmp(a, b, sizeof a) == 0);
  std::filesystem::remove(path);
  CHECK(cranest_matrix_load("/nonexistent/x.mat", &back.m) == CRANEST_ERR_IO);
}

TEST_CASE("chunks through the C API use 1-based indices") {
  const cranest_layout lay{2, 2, 1, 1, 1};
  const double data[] = {1, 0, 2, 0, 3, 0, 4, 0};
  MatrixGuard x, e;
  REQUIRE(cranest_matrix_from_data(2, 2, data, &x.m) == CRANEST_OK);
  REQUIRE(cranest_chunk_extract(x.m, &lay, 2, 1, &e.m) == CRANEST_OK);
  double re = 0, im = 0;
  cranest_matrix_get(e.m, 1, 1, &re, &im);
  CHECK(re == 3.0);
  double n = 0;
  REQUIRE(cranest_chunk_norm(x.m, nullptr, &lay, 2, 0, &n) == CRANEST_OK);
  CHECK(n == doctest::Approx(5.0));
  CHECK(cranest_chunk_extract(x.m, &lay, 3, 0, &e.m) == CRANEST_ERR_INDEX);
  MatrixGuard sh;
  REQUIRE(cranest_chunk_shrink(x.m, &lay, CRANEST_ROW_CHUNK, 3.5, &sh.m) == CRANEST_OK);
  cranest_matrix_get(sh.m, 1, 1, &re, &im);
  CHECK(re == 0.0);
}

TEST_CASE("generate, solve, verify through the C API") {
  const cranest_scenario spec = small_scenario(7);
  cranest_instance* inst = nullptr;
  REQUIRE(cranest_instance_generate(&spec, &inst) == CRANEST_OK);
  MatrixGuard a, b, truth;
  REQUIRE(cranest_instance_a(inst, &a.m) == CRANEST_OK);
  REQUIRE(cranest_instance_b(inst, &b.m) == CRANEST_OK);
  REQUIRE(cranest_instance_truth(inst, &truth.m) == CRANEST_OK);
  int64_t active[20];
  size_t count = 0;
  REQUIRE(cranest_instance_active_set(inst, active, 20, &count) == CRANEST_OK);
  CHECK(count == 3);
  CHECK(active[0] >= 1);

  cranest_layout lay;
  cranest_instance_layout(inst, &lay);
  double a1 = 0, a2 = 0;
  REQUIRE(cranest_tuning_bounds(a.m, b.m, nullptr, &lay, &a1, &a2) == CRANEST_OK);
  CHECK(a2 <= a1);
  cranest_solver_config cfg;
  cranest_solver_config_defaults(&cfg);
  REQUIRE(cranest_preset_regularization(CRANEST_PRESET_FULL, a1, a2, 0.03, &cfg.reg) == CRANEST_OK);
  cfg.max_count = 1;

  cranest_report* rep = nullptr;
  REQUIRE(cranest_solve(a.m, b.m, &lay, &cfg, &rep) == CRANEST_OK);
  CHECK(cranest_report_pass_count(rep) == 1);
  int iters = 0, converged = 0;
  REQUIRE(cranest_report_pass(rep, 1, &iters, &converged) == CRANEST_OK);
  CHECK(converged == 1);
  CHECK(cranest_report_history_length(rep) == static_cast<size_t>(iters));
  cranest_iteration it;
  REQUIRE(cranest_report_history(rep, 0, &it) == CRANEST_OK);
  CHECK(it.outer_pass == 1);
  CHECK(cranest_report_history(rep, static_cast<size_t>(iters), &it) == CRANEST_ERR_INDEX);
  CHECK(cranest_report_warning(rep, 1000) == nullptr);

  MatrixGuard x;
  REQUIRE(cranest_report_x_hat(rep, &x.m) == CRANEST_OK);
  double stat = 0, dual = 0, kkt = 0;
  REQUIRE(cranest_kkt_residual(x.m, a.m, b.m, nullptr, &lay, &cfg.reg, &stat, &dual, &kkt) == CRANEST_OK);
  CHECK(kkt <= 1e-4);

  MatrixGuard ox;
  double f_oracle = 0;
  int oiters = 0;
  REQUIRE(cranest_oracle_solve(a.m, b.m, nullptr, &lay, &cfg.reg, 0, 0, &ox.m, &f_oracle, &oiters) == CRANEST_OK);
  double f_admm = 0;
  REQUIRE(cranest_objective(x.m, a.m, b.m, nullptr, &lay, &cfg.reg, &f_admm) == CRANEST_OK);
  CHECK(std::abs(f_admm - f_oracle) / f_oracle <= 1e-4);

  double nmse = 0;
  REQUIRE(cranest_nmse_db(x.m, truth.m, &nmse) == CRANEST_OK);
  CHECK(nmse < 0.0);
  int64_t est[20];
  size_t n_est = 0;
  REQUIRE(cranest_detect_active(x.m, &lay, 0.1, est, 20, &n_est) == CRANEST_OK);
  int64_t errs = -1;
  REQUIRE(cranest_detection_errors(est, n_est, active, count, &errs) == CRANEST_OK);
  CHECK(errs >= 0);
  CHECK(cranest_detect_active(x.m, &lay, 0.1, est, 0, &n_est) == CRANEST_ERR_DIMENSION);

  const auto dir = (std::filesystem::temp_directory_path() / "cranest_test_capi_inst").string();
  std::filesystem::remove_all(dir);
  REQUIRE(cranest_instance_save(dir.c_str(), inst) == CRANEST_OK);
  cranest_instance* loaded = nullptr;
  REQUIRE(cranest_instance_load(dir.c_str(), &loaded) == CRANEST_OK);
  double sigma1 = 0, sigma2 = 0;
  cranest_instance_noise_sigma(inst, &sigma1);
  cranest_instance_noise_sigma(loaded, &sigma2);
  CHECK(sigma1 == sigma2);
  cranest_instance_free(loaded);
  std::filesystem::remove_all(dir);

  cranest_instance* bare = nullptr;
  REQUIRE(cranest_instance_from_matrices(a.m, b.m, &lay, &bare) == CRANEST_OK);
  MatrixGuard none;
  CHECK(cranest_instance_truth(bare, &none.m) == CRANEST_ERR_DOMAIN);
  CHECK(cranest_instance_save(dir.c_str(), bare) == CRANEST_ERR_DOMAIN);
  cranest_instance_free(bare);

  cranest_report_free(rep);
  cranest_instance_free(inst);
}

TEST_CASE("weights through the C API must be real and positive") {
  MatrixGuard x, w, bad;
  const double xd[] = {3, 4};
  REQUIRE(cranest_matrix_from_data(1, 1, xd, &x.m) == CRANEST_OK);
  REQUIRE(cranest_weight_update(x.m, 1e-300, &w.m) == CRANEST_OK);
  double re = 0, im = 0;
  cranest_matrix_get(w.m, 1, 1, &re, &im);
  CHECK(re == doctest::Approx(0.2));
  CHECK(im == 0.0);
  CHECK(cranest_weight_update(x.m, 0.0, &w.m) == CRANEST_ERR_DOMAIN);

  const cranest_layout unit{1, 1, 1, 1, 1};
  const double bd[] = {1, 1};
  REQUIRE(cranest_matrix_from_data(1, 1, bd, &bad.m) == CRANEST_OK);
  double n = 0;
  CHECK(cranest_chunk_norm(x.m, bad.m, &unit, 1, 0, &n) == CRANEST_ERR_DOMAIN);
}
