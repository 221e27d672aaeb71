#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cranest/matcore.hpp"
#include "cranest/rng.hpp"

namespace cranest {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Optional geometric attenuation. RRHs and users sit on a square of side
/// `area`; explicit positions override the uniform placement. Amplitudes of
/// the (user, rrh) channel are scaled by (d / d_nearest)^(-exponent / 2), so
/// each user's nearest RRH keeps unit average gain.
struct PathLossModel {
  double area = 1000.0;
  double exponent = 3.5;
  std::vector<Point> rrh_positions;
  std::vector<Point> user_positions;
};

struct ScenarioSpec {
  ChunkLayout layout;
  Index active_count = 1;
  double snr_db = 10.0;
  bool noiseless = false;
  std::optional<PathLossModel> path_loss;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ProblemInstance {
  ChunkLayout layout;
  ComplexMatrix a;                          // L x KN pilots (P^H)
  ComplexMatrix b;                          // L x GM observation (R^H)
  std::optional<ComplexMatrix> truth_x;     // KN x GM
  std::optional<std::vector<Index>> active_set;  // sorted, 0-based
  double noise_sigma = 0.0;
};

struct Observation {
  ComplexMatrix b;
  double noise_sigma = 0.0;
};

/// L x KN matrix of i.i.d. unit-variance complex Gaussians.
ComplexMatrix generate_pilots(const ChunkLayout& layout, RngStream& rng);

/// Uniform random subset of {0..K-1} of exactly `active_count` users, sorted.
std::vector<Index> sample_activity(const ChunkLayout& layout, Index active_count, RngStream& rng);

/// Ground-truth unknown: Rayleigh channels on active row chunks, zero elsewhere.
ComplexMatrix generate_channels(const ChunkLayout& layout, const std::vector<Index>& active_set,
                                const PathLossModel* path_loss, RngStream& rng);

/// Per-(user, rrh) amplitude factors (K x G) of the path-loss model.
RealMatrix path_loss_gains(const ChunkLayout& layout, const PathLossModel& model);

/// Adds complex Gaussian noise with per-entry variance ||A X||_F^2 / (L G M 10^(snr/10)).
/// `snr_db` empty means noiseless.
Observation synthesize_observation(const ComplexMatrix& a, const ComplexMatrix& truth_x,
                                   std::optional<double> snr_db, RngStream& rng);

/// Full instance. Channels, activity and positions depend only on the seed;
/// pilots and noise additionally depend on the pilot length.
ProblemInstance generate_instance(const ScenarioSpec& spec);

/// Writes a.mat, b.mat, truth_x.mat and instance.meta into `dir` (created if missing).
void save_instance(const std::string& dir, const ProblemInstance& instance, const ScenarioSpec& spec);
ProblemInstance load_instance(const std::string& dir);
/// Scenario parameters recorded in `dir/instance.meta` (positions included when path loss is on).
ScenarioSpec load_scenario_spec(const std::string& dir);

}  // namespace cranest
