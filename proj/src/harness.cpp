#include "cranest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cranest/metrics.hpp"

namespace cranest {

namespace fs = std::filesystem;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario.K", "scenario.G", "scenario.M", "scenario.N", "scenario.active",
      "scenario.snr_db", "scenario.noiseless", "scenario.path_loss.enabled",
      "scenario.path_loss.area", "scenario.path_loss.exponent",
      "pilot_lengths", "trials", "solvers", "fractions", "base_seed", "rel_threshold",
      "solver.max_count", "solver.epsilon", "solver.max_inner_iters", "solver.tol_primal",
      "solver.tol_change", "solver.beta_scale", "linear_average"};
  return keys;
}

Index positive_index(const std::string& text, const std::string& what) {
  const double v = parse_double(text);
  require(v >= 1.0 && v == std::floor(v) && v < 1e9, ErrorKind::parse,
          what + ": expected a positive integer, got '" + text + "'");
  return static_cast<Index>(v);
}

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) {
    m.mean = m.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  const double n = static_cast<double>(v.size());
  m.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::io, "cannot write '" + path + "'");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  require(static_cast<bool>(os), ErrorKind::io, "write failed for '" + path + "'");
}

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << (std::abs(v) < 1e-12 ? 0.0 : v);
  return os.str();
}

}  // namespace

void SweepSpec::validate() const {
  require(!pilot_lengths.empty(), ErrorKind::domain, "sweep: pilot_lengths is empty");
  for (std::size_t k = 0; k < pilot_lengths.size(); ++k) {
    require(pilot_lengths[k] >= 1, ErrorKind::domain, "sweep: pilot lengths must be positive");
    require(k == 0 || pilot_lengths[k] > pilot_lengths[k - 1], ErrorKind::domain,
            "sweep: pilot_lengths must be strictly ascending");
  }
  require(trials >= 1, ErrorKind::domain, "sweep: trials must be >= 1");
  require(!solvers.empty(), ErrorKind::domain, "sweep: no solvers");
  std::set<std::string> labels;
  for (const auto& s : solvers) {
    require(s.fraction > 0.0 && s.fraction < 1.0, ErrorKind::domain, "sweep: fractions must lie in (0, 1)");
    require(labels.insert(s.label()).second, ErrorKind::domain, "sweep: solver '" + s.label() + "' listed twice");
  }
  require(rel_threshold > 0.0 && rel_threshold < 1.0, ErrorKind::domain,
          "sweep: rel_threshold must lie in (0, 1)");
  require(!beta_scale || *beta_scale > 0.0, ErrorKind::domain, "sweep: solver.beta_scale must be > 0");
  ScenarioSpec probe = scenario;
  probe.layout.pilot_length = pilot_lengths.front();
  probe.validate();
  SolverConfig cfg = solver;
  cfg.reg = Regularization{1.0, 1.0};
  cfg.validate();
}

SweepSpec SweepSpec::from_keyvalues(const KeyValues& kv) {
  for (const auto& [key, value] : kv.entries())
    require(known_keys().count(key) != 0, ErrorKind::parse, "sweep config: unknown key '" + key + "'");

  SweepSpec spec;
  ScenarioSpec& sc = spec.scenario;
  sc.layout.users = kv.get_int_or("scenario.K", 100);
  sc.layout.rrhs = kv.get_int_or("scenario.G", 10);
  sc.layout.rrh_antennas = kv.get_int_or("scenario.M", 3);
  sc.layout.user_antennas = kv.get_int_or("scenario.N", 2);
  sc.active_count = kv.get_int_or("scenario.active", 10);
  sc.noiseless = kv.get_bool_or("scenario.noiseless", false);
  sc.snr_db = kv.get_double_or("scenario.snr_db", 10.0);
  const bool path_loss = kv.get_bool_or("scenario.path_loss.enabled", false);
  if (path_loss) {
    PathLossModel model;
    model.area = kv.get_double_or("scenario.path_loss.area", model.area);
    model.exponent = kv.get_double_or("scenario.path_loss.exponent", model.exponent);
    sc.path_loss = model;
  } else {
    require(!kv.has("scenario.path_loss.area") && !kv.has("scenario.path_loss.exponent"), ErrorKind::parse,
            "sweep config: path-loss parameters given but scenario.path_loss.enabled is not true");
  }

  for (const auto& item : split_list(kv.get("pilot_lengths")))
    spec.pilot_lengths.push_back(positive_index(item, "pilot_lengths"));
  spec.trials = static_cast<int>(kv.get_int_or("trials", 1));

  std::vector<std::string> names = split_list(kv.get_or("solvers", "full"));
  std::vector<std::string> fractions = split_list(kv.get_or("fractions", format_double(kDefaultPresetFraction)));
  require(fractions.size() == 1 || fractions.size() == names.size(), ErrorKind::parse,
          "sweep config: give one fraction or one per solver");
  for (std::size_t k = 0; k < names.size(); ++k) {
    SolverEntry e;
    e.kind = parse_preset(names[k]);
    e.fraction = parse_double(fractions.size() == 1 ? fractions[0] : fractions[k]);
    spec.solvers.push_back(e);
  }
  spec.base_seed = kv.has("base_seed") ? kv.get_u64("base_seed") : 0;
  spec.rel_threshold = kv.get_double_or("rel_threshold", kDefaultDetectionThreshold);

  SolverConfig& cfg = spec.solver;
  cfg.max_count = static_cast<int>(kv.get_int_or("solver.max_count", cfg.max_count));
  cfg.epsilon = kv.get_double_or("solver.epsilon", cfg.epsilon);
  cfg.max_inner_iters = static_cast<int>(kv.get_int_or("solver.max_inner_iters", cfg.max_inner_iters));
  cfg.tol_primal = kv.get_double_or("solver.tol_primal", cfg.tol_primal);
  cfg.tol_change = kv.get_double_or("solver.tol_change", cfg.tol_change);
  if (kv.has("solver.beta_scale")) spec.beta_scale = kv.get_double("solver.beta_scale");
  spec.linear_average = kv.get_bool_or("linear_average", false);

  spec.validate();
  return spec;
}

SweepSpec SweepSpec::load(const std::string& path) { return from_keyvalues(KeyValues::load(path)); }

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return derive_key(base_seed, static_cast<std::uint64_t>(trial));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  require(jobs >= 1, ErrorKind::domain, "sweep: jobs must be >= 1");

  const std::size_t n_l = spec.pilot_lengths.size();
  const std::size_t n_t = static_cast<std::size_t>(spec.trials);
  const std::size_t cells_per_solver = n_l * n_t;
  std::vector<SweepRow> rows(spec.solvers.size() * cells_per_solver);

  // A task is one (L, trial) instance shared by all solvers.
  auto run_task = [&](std::size_t task) {
    const std::size_t li = task / n_t;
    const int trial = static_cast<int>(task % n_t);
    ScenarioSpec sc = spec.scenario;
    sc.layout.pilot_length = spec.pilot_lengths[li];
    sc.seed = trial_seed(spec.base_seed, trial);
    const ProblemInstance inst = generate_instance(sc);
    const TuningBounds bounds = tuning_bounds(inst.a, inst.b, Weights::ones(inst.layout), inst.layout);

    for (std::size_t k = 0; k < spec.solvers.size(); ++k) {
      SweepRow& row = rows[k * cells_per_solver + task];
      row.solver = spec.solvers[k].label();
      row.pilot_length = sc.layout.pilot_length;
      row.trial = trial;

      SolverConfig cfg = spec.solver;
      cfg.reg = preset(spec.solvers[k].kind, bounds, spec.solvers[k].fraction);
      if (spec.beta_scale) cfg.beta = *spec.beta_scale * (cfg.reg.alpha1 + cfg.reg.alpha2);
      const auto start = std::chrono::steady_clock::now();
      try {
        const SolveReport report = solve(inst.a, inst.b, cfg, inst.layout);
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.inner_iterations = report.total_inner_iterations();
        row.nmse_db = nmse_db(report.x_hat, *inst.truth_x);
        row.detection_errors = detection_errors(
            detect_active(report.x_hat, inst.layout, spec.rel_threshold).estimated_active, *inst.active_set);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::divergence) throw;
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.diverged = true;
        row.nmse_db = std::numeric_limits<double>::quiet_NaN();
        row.detection_errors = -1;
        row.inner_iterations = 0;
      }
    }
  };

  const std::size_t tasks = cells_per_solver;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!stop.load()) {
        const std::size_t t = next.fetch_add(1);
        if (t >= tasks) break;
        try {
          run_task(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows, bool linear_average) {
  std::vector<std::pair<std::string, Index>> order;
  std::map<std::pair<std::string, Index>, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.solver, r.pilot_length);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<AggregateRow> out;
  for (const auto& key : order) {
    AggregateRow a;
    a.solver = key.first;
    a.pilot_length = key.second;
    std::vector<double> nmse, det, time, iters;
    for (const SweepRow* r : groups[key]) {
      if (r->diverged) {
        ++a.diverged;
        continue;
      }
      nmse.push_back(linear_average ? std::pow(10.0, r->nmse_db / 10.0) : r->nmse_db);
      det.push_back(static_cast<double>(r->detection_errors));
      time.push_back(r->wall_time_s);
      iters.push_back(static_cast<double>(r->inner_iterations));
    }
    a.count = static_cast<int>(nmse.size());
    const Moments m = moments(nmse);
    if (linear_average && a.count > 0) {
      a.nmse_mean = 10.0 * std::log10(m.mean);
      a.nmse_stderr = 10.0 / std::log(10.0) * m.stderr_ / m.mean;
    } else {
      a.nmse_mean = m.mean;
      a.nmse_stderr = m.stderr_;
    }
    const Moments d = moments(det), t = moments(time);
    a.detection_mean = d.mean;
    a.detection_stderr = d.stderr_;
    a.time_mean = t.mean;
    a.time_stderr = t.stderr_;
    a.iterations_mean = moments(iters).mean;
    out.push_back(a);
  }
  return out;
}

bool any_diverged(const std::vector<SweepRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.diverged; });
}

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "solver,L,trial,nmse_db,detection_errors,inner_iterations,diverged\n";
  for (const auto& r : rows)
    os << r.solver << ',' << r.pilot_length << ',' << r.trial << ',' << format_double(r.nmse_db) << ','
       << r.detection_errors << ',' << r.inner_iterations << ',' << (r.diverged ? 1 : 0) << '\n';
}

void write_timings_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "solver,L,trial,wall_time_s\n";
  for (const auto& r : rows)
    os << r.solver << ',' << r.pilot_length << ',' << r.trial << ',' << format_double(r.wall_time_s) << '\n';
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& agg) {
  os << "solver,L,count,diverged,nmse_db_mean,nmse_db_stderr,detection_mean,detection_stderr,"
        "inner_iterations_mean\n";
  for (const auto& a : agg)
    os << a.solver << ',' << a.pilot_length << ',' << a.count << ',' << a.diverged << ','
       << format_double(a.nmse_mean) << ',' << format_double(a.nmse_stderr) << ','
       << format_double(a.detection_mean) << ',' << format_double(a.detection_stderr) << ','
       << format_double(a.iterations_mean) << '\n';
}

PlotMetric parse_plot_metric(const std::string& name) {
  if (name == "nmse") return PlotMetric::nmse;
  if (name == "detection") return PlotMetric::detection;
  if (name == "runtime") return PlotMetric::runtime;
  fail(ErrorKind::parse, "unknown plot metric '" + name + "' (expected nmse, detection or runtime)");
}

std::string plot_metric_name(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::nmse: return "nmse";
    case PlotMetric::detection: return "detection";
    case PlotMetric::runtime: return "runtime";
  }
  return "nmse";
}

void emit_plot(const std::vector<AggregateRow>& agg, PlotMetric metric, const std::string& out_path) {
  struct Point2 {
    double x, y, err;
  };
  std::vector<std::string> series;
  std::map<std::string, std::vector<Point2>> points;
  for (const auto& a : agg) {
    double y = 0.0, err = 0.0;
    switch (metric) {
      case PlotMetric::nmse: y = a.nmse_mean; err = a.nmse_stderr; break;
      case PlotMetric::detection: y = a.detection_mean; err = a.detection_stderr; break;
      case PlotMetric::runtime: y = a.time_mean; err = a.time_stderr; break;
    }
    if (!std::isfinite(y)) continue;
    if (!points.count(a.solver)) series.push_back(a.solver);
    points[a.solver].push_back({static_cast<double>(a.pilot_length), y, err});
  }
  require(!series.empty(), ErrorKind::domain,
          "emit_plot: no finite values for metric '" + plot_metric_name(metric) + "'");

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& [name, pts] : points)
    for (const auto& p : pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  if (x1 == x0) {
    x0 -= 1.0;
    x1 += 1.0;
  }
  if (y1 == y0) {
    y0 -= 1.0;
    y1 += 1.0;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }

  const double width = 640, height = 420, left = 70, right = 160, top = 30, bottom = 55;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::string y_label;
  switch (metric) {
    case PlotMetric::nmse: y_label = "NMSE (dB)"; break;
    case PlotMetric::detection: y_label = "detection errors"; break;
    case PlotMetric::runtime: y_label = "wall time (s)"; break;
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(xv) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << tick_label(xv) << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << tick_label(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">pilot length L</text>\n";
  svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % (sizeof(colors) / sizeof(colors[0]))];
    const auto& pts = points[series[s]];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) svg << (k ? " " : "") << sx(pts[k].x) << ',' << sy(pts[k].y);
    svg << "\"/>\n";
    for (const auto& p : pts)
      svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << svg_escape(series[s]) << "</text>\n";
  }
  svg << "</svg>\n";

  std::ostringstream csv;
  csv << "solver,L," << plot_metric_name(metric) << "_mean," << plot_metric_name(metric) << "_stderr\n";
  for (const auto& name : series)
    for (const auto& p : points[name])
      csv << name << ',' << static_cast<Index>(p.x) << ',' << format_double(p.y) << ',' << format_double(p.err)
          << '\n';

  const std::string csv_path = fs::path(out_path).replace_extension(".csv").string();
  std::ofstream svg_os = open_out(out_path);
  svg_os << svg.str();
  finish(svg_os, out_path);
  std::ofstream csv_os = open_out(csv_path);
  csv_os << csv.str();
  finish(csv_os, csv_path);
}

std::vector<SweepRow> run_sweep_to_directory(const SweepSpec& spec, const std::string& out_dir, int jobs) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec && fs::is_directory(out_dir), ErrorKind::io, "cannot create directory '" + out_dir + "'");

  const std::vector<SweepRow> rows = run_sweep(spec, jobs);
  const fs::path root(out_dir);
  auto write = [&](const std::string& name, auto&& writer) {
    const std::string path = (root / name).string();
    std::ofstream os = open_out(path);
    writer(os);
    finish(os, path);
  };
  const auto agg = aggregate(rows, spec.linear_average);
  write("rows.csv", [&](std::ostream& os) { write_rows_csv(os, rows); });
  write("timings.csv", [&](std::ostream& os) { write_timings_csv(os, rows); });
  write("aggregate.csv", [&](std::ostream& os) { write_aggregate_csv(os, agg); });
  const bool any_ok = std::any_of(agg.begin(), agg.end(), [](const AggregateRow& a) { return a.count > 0; });
  if (any_ok) {
    emit_plot(agg, PlotMetric::nmse, (root / "nmse.svg").string());
    emit_plot(agg, PlotMetric::detection, (root / "detection.svg").string());
    emit_plot(agg, PlotMetric::runtime, (root / "runtime.svg").string());
  }
  return rows;
}

}  // namespace cranest
