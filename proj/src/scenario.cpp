#include "cranest/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "cranest/keyvalue.hpp"

namespace cranest {

namespace {

// Stream tags under the instance seed.
constexpr std::uint64_t kActivityTag = 1;
constexpr std::uint64_t kChannelTag = 2;
constexpr std::uint64_t kPilotTag = 3;
constexpr std::uint64_t kNoiseTag = 4;
constexpr std::uint64_t kPlacementTag = 5;

std::vector<Point> place_uniform(Index count, double area, RngStream& rng) {
  std::vector<Point> pts(static_cast<std::size_t>(count));
  for (auto& p : pts) {
    p.x = area * rng.uniform();
    p.y = area * rng.uniform();
  }
  return pts;
}

PathLossModel with_positions(const ChunkLayout& layout, PathLossModel model, RngStream& rng) {
  RngStream placement = rng.substream(kPlacementTag);
  if (model.rrh_positions.empty()) model.rrh_positions = place_uniform(layout.rrhs, model.area, placement);
  if (model.user_positions.empty()) model.user_positions = place_uniform(layout.users, model.area, placement);
  return model;
}

std::string format_points(const std::vector<Point>& pts) {
  std::string out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out += ',';
    out += format_double(pts[k].x) + ':' + format_double(pts[k].y);
  }
  return out;
}

std::vector<Point> parse_points(const std::string& text) {
  std::vector<Point> pts;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    require(colon != std::string::npos, ErrorKind::parse, "position '" + item + "': expected x:y");
    pts.push_back({parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))});
  }
  return pts;
}

}  // namespace

void ScenarioSpec::validate() const {
  layout.validate();
  require(active_count >= 1 && active_count <= layout.users, ErrorKind::domain,
          "active_count must lie in [1, K]");
  require(noiseless || std::isfinite(snr_db), ErrorKind::domain, "snr_db must be finite");
  if (path_loss) {
    require(path_loss->area > 0.0 && std::isfinite(path_loss->area), ErrorKind::domain,
            "path loss area must be positive");
    require(path_loss->exponent >= 0.0 && std::isfinite(path_loss->exponent), ErrorKind::domain,
            "path loss exponent must be nonnegative");
    require(path_loss->rrh_positions.empty() ||
                static_cast<Index>(path_loss->rrh_positions.size()) == layout.rrhs,
            ErrorKind::dimension, "path loss: need one position per RRH");
    require(path_loss->user_positions.empty() ||
                static_cast<Index>(path_loss->user_positions.size()) == layout.users,
            ErrorKind::dimension, "path loss: need one position per user");
  }
}

ComplexMatrix generate_pilots(const ChunkLayout& layout, RngStream& rng) {
  layout.validate();
  ComplexMatrix a(layout.pilot_length, layout.x_rows());
  for (Index k = 0; k < a.size(); ++k) a.data()[k] = rng.complex_normal(1.0);
  return a;
}

std::vector<Index> sample_activity(const ChunkLayout& layout, Index active_count, RngStream& rng) {
  layout.validate();
  require(active_count >= 1 && active_count <= layout.users, ErrorKind::domain,
          "sample_activity: active_count " + std::to_string(active_count) + " outside [1, " +
              std::to_string(layout.users) + "]");
  std::vector<Index> users(static_cast<std::size_t>(layout.users));
  std::iota(users.begin(), users.end(), Index{0});
  // Partial Fisher-Yates: the first active_count slots end up a uniform subset.
  for (Index k = 0; k < active_count; ++k) {
    const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(layout.users - k)));
    std::swap(users[static_cast<std::size_t>(k)], users[static_cast<std::size_t>(pick)]);
  }
  users.resize(static_cast<std::size_t>(active_count));
  std::sort(users.begin(), users.end());
  return users;
}

RealMatrix path_loss_gains(const ChunkLayout& layout, const PathLossModel& model) {
  require(static_cast<Index>(model.rrh_positions.size()) == layout.rrhs &&
              static_cast<Index>(model.user_positions.size()) == layout.users,
          ErrorKind::dimension, "path_loss_gains: positions do not match layout");
  const double floor = 1e-3 * model.area;
  RealMatrix gains(layout.users, layout.rrhs);
  for (Index i = 0; i < layout.users; ++i) {
    const Point& u = model.user_positions[static_cast<std::size_t>(i)];
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < layout.rrhs; ++j) {
      const Point& r = model.rrh_positions[static_cast<std::size_t>(j)];
      gains(i, j) = std::max(std::hypot(u.x - r.x, u.y - r.y), floor);
      nearest = std::min(nearest, gains(i, j));
    }
    for (Index j = 0; j < layout.rrhs; ++j)
      gains(i, j) = std::pow(gains(i, j) / nearest, -0.5 * model.exponent);
  }
  return gains;
}

ComplexMatrix generate_channels(const ChunkLayout& layout, const std::vector<Index>& active_set,
                                const PathLossModel* path_loss, RngStream& rng) {
  layout.validate();
  ComplexMatrix x = ComplexMatrix::Zero(layout.x_rows(), layout.x_cols());
  RealMatrix gains;
  if (path_loss) gains = path_loss_gains(layout, with_positions(layout, *path_loss, rng));
  const Index n = layout.user_antennas;
  const Index m = layout.rrh_antennas;
  for (Index user : active_set) {
    require(user >= 0 && user < layout.users, ErrorKind::index, "generate_channels: user out of range");
    for (Index r = user * n; r < (user + 1) * n; ++r) {
      for (Index c = 0; c < layout.x_cols(); ++c) {
        const Complex h = rng.complex_normal(1.0);
        x(r, c) = path_loss ? h * gains(user, c / m) : h;
      }
    }
  }
  return x;
}

Observation synthesize_observation(const ComplexMatrix& a, const ComplexMatrix& truth_x,
                                   std::optional<double> snr_db, RngStream& rng) {
  require(a.cols() == truth_x.rows(), ErrorKind::dimension,
          "synthesize_observation: A is " + ChunkLayout::shape_string(a.rows(), a.cols()) + " but X is " +
              ChunkLayout::shape_string(truth_x.rows(), truth_x.cols()));
  Observation obs;
  obs.b = a * truth_x;
  if (!snr_db) return obs;
  require(std::isfinite(*snr_db), ErrorKind::domain, "synthesize_observation: snr_db must be finite");
  const double signal = frobenius_norm(obs.b);
  require(signal > 0.0, ErrorKind::degenerate_signal,
          "synthesize_observation: zero signal, noise level undefined at finite SNR");
  const double variance =
      signal * signal / (static_cast<double>(obs.b.size()) * std::pow(10.0, *snr_db / 10.0));
  obs.noise_sigma = std::sqrt(variance);
  for (Index k = 0; k < obs.b.size(); ++k) obs.b.data()[k] += rng.complex_normal(variance);
  return obs;
}

ProblemInstance generate_instance(const ScenarioSpec& spec) {
  spec.validate();
  const RngStream root(spec.seed);
  const auto pilot_len = static_cast<std::uint64_t>(spec.layout.pilot_length);

  RngStream activity_rng = root.substream(kActivityTag);
  RngStream channel_rng = root.substream(kChannelTag);
  RngStream pilot_rng = root.substream(derive_key(kPilotTag, pilot_len));
  RngStream noise_rng = root.substream(derive_key(kNoiseTag, pilot_len));

  ProblemInstance inst;
  inst.layout = spec.layout;
  inst.active_set = sample_activity(spec.layout, spec.active_count, activity_rng);
  inst.truth_x = generate_channels(spec.layout, *inst.active_set,
                                   spec.path_loss ? &*spec.path_loss : nullptr, channel_rng);
  inst.a = generate_pilots(spec.layout, pilot_rng);
  auto obs = synthesize_observation(inst.a, *inst.truth_x,
                                    spec.noiseless ? std::nullopt : std::optional<double>(spec.snr_db),
                                    noise_rng);
  inst.b = std::move(obs.b);
  inst.noise_sigma = obs.noise_sigma;
  return inst;
}

void save_instance(const std::string& dir, const ProblemInstance& instance, const ScenarioSpec& spec) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorKind::io, "cannot create directory '" + dir + "': " + ec.message());
  const fs::path root(dir);
  save_matrix((root / "a.mat").string(), instance.a);
  save_matrix((root / "b.mat").string(), instance.b);
  if (instance.truth_x) save_matrix((root / "truth_x.mat").string(), *instance.truth_x);

  const std::string meta_path = (root / "instance.meta").string();
  std::ofstream os(meta_path);
  require(static_cast<bool>(os), ErrorKind::io, "cannot open '" + meta_path + "' for writing");
  const ChunkLayout& l = instance.layout;
  os << "K = " << l.users << '\n'
     << "G = " << l.rrhs << '\n'
     << "M = " << l.rrh_antennas << '\n'
     << "N = " << l.user_antennas << '\n'
     << "L = " << l.pilot_length << '\n'
     << "active = " << spec.active_count << '\n'
     << "snr_db = " << format_double(spec.snr_db) << '\n'
     << "noiseless = " << (spec.noiseless ? "true" : "false") << '\n'
     << "seed = " << spec.seed << '\n'
     << "path_loss = " << (spec.path_loss ? "true" : "false") << '\n';
  if (spec.path_loss) {
    RngStream channel_rng = RngStream(spec.seed).substream(kChannelTag);
    const PathLossModel placed = with_positions(l, *spec.path_loss, channel_rng);
    os << "area = " << format_double(placed.area) << '\n'
       << "exponent = " << format_double(placed.exponent) << '\n'
       << "rrh_positions = " << format_points(placed.rrh_positions) << '\n'
       << "user_positions = " << format_points(placed.user_positions) << '\n';
  }
  if (instance.active_set) {
    os << "active_set = ";
    for (std::size_t k = 0; k < instance.active_set->size(); ++k)
      os << (k ? "," : "") << (*instance.active_set)[k] + 1;
    os << '\n';
  }
  os << "noise_sigma = " << format_double(instance.noise_sigma) << '\n';
  require(static_cast<bool>(os), ErrorKind::io, "write to '" + meta_path + "' failed");
}

ProblemInstance load_instance(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const KeyValues meta = KeyValues::load((root / "instance.meta").string());
  ProblemInstance inst;
  inst.layout.users = meta.get_int("K");
  inst.layout.rrhs = meta.get_int("G");
  inst.layout.rrh_antennas = meta.get_int("M");
  inst.layout.user_antennas = meta.get_int("N");
  inst.layout.pilot_length = meta.get_int("L");
  inst.layout.validate();
  inst.a = load_matrix((root / "a.mat").string());
  inst.b = load_matrix((root / "b.mat").string());
  inst.layout.require_a(inst.a);
  inst.layout.require_b(inst.b);
  if (fs::exists(root / "truth_x.mat")) {
    inst.truth_x = load_matrix((root / "truth_x.mat").string());
    inst.layout.require_x(*inst.truth_x, "truth_x.mat");
  }
  if (meta.has("active_set")) {
    std::vector<Index> active;
    for (const auto& item : split_list(meta.get("active_set"))) {
      const double parsed = parse_double(item);
      const auto one_based = static_cast<Index>(parsed);
      require(static_cast<double>(one_based) == parsed, ErrorKind::parse,
              "active_set: '" + item + "' is not an integer");
      require(one_based >= 1 && one_based <= inst.layout.users, ErrorKind::parse,
              "active_set: index " + item + " out of range");
      active.push_back(one_based - 1);
    }
    inst.active_set = std::move(active);
  }
  inst.noise_sigma = meta.get_double_or("noise_sigma", 0.0);
  return inst;
}

ScenarioSpec load_scenario_spec(const std::string& dir) {
  const KeyValues meta = KeyValues::load((std::filesystem::path(dir) / "instance.meta").string());
  ScenarioSpec spec;
  spec.layout.users = meta.get_int("K");
  spec.layout.rrhs = meta.get_int("G");
  spec.layout.rrh_antennas = meta.get_int("M");
  spec.layout.user_antennas = meta.get_int("N");
  spec.layout.pilot_length = meta.get_int("L");
  spec.active_count = meta.get_int("active");
  spec.snr_db = meta.get_double("snr_db");
  spec.noiseless = meta.get_bool_or("noiseless", false);
  spec.seed = meta.get_u64("seed");
  if (meta.get_bool_or("path_loss", false)) {
    PathLossModel model;
    model.area = meta.get_double("area");
    model.exponent = meta.get_double("exponent");
    model.rrh_positions = parse_points(meta.get_or("rrh_positions", ""));
    model.user_positions = parse_points(meta.get_or("user_positions", ""));
    spec.path_loss = std::move(model);
  }
  spec.validate();
  return spec;
}

}  // namespace cranest
