// Copyright 2026 The rivuq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rivuq/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rivuq/quadrature.hpp"
#include "rivuq/sobol.hpp"
#include "rivuq/stats.hpp"

namespace fs = std::filesystem;

namespace rivuq {

namespace {

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_if(const Json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(where + "." + key + ": wrong type");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

Json interval_json(const Interval& i) { return Json::array({i.lower, i.upper}); }

Interval interval_from(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw std::invalid_argument(where + ": expected [lower, upper]");
  Interval i{v[0].get<double>(), v[1].get<double>()};
  require(i.lower > 0.0 && i.upper > i.lower, where + ": need 0 < lower < upper");
  return i;
}

std::string budget_tag(int budget) {
  std::ostringstream out;
  out << std::setw(3) << std::setfill('0') << budget;
  return out.str();
}

std::string station_tag(Eigen::Index s) {
  std::ostringstream out;
  out << 's' << std::setw(2) << std::setfill('0') << (s + 1);
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json versions() {
  Json v;
  v["rivuq"] = kVersion;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["compiler"] = __VERSION__;
  return v;
}

Json metadata(const ExperimentConfig& config, const std::string& stage, double wall_seconds) {
  Json m;
  m["stage"] = stage;
  m["seed"] = config.seed;
  m["sobol_seed"] = config.sobol_seed();
  m["config_hash"] = config_hash(config);
  m["workers"] = config.workers;
  m["wall_time_s"] = wall_seconds;
  m["versions"] = versions();
  m["config"] = config_to_json(config);
  return m;
}

void check_stage(const ExperimentConfig& config, const fs::path& dir, const std::string& stage) {
  const fs::path meta = dir / "metadata.json";
  if (!fs::exists(meta))
    throw std::runtime_error("missing " + meta.string() + "; run the '" + stage + "' step first");
  const Json m = read_json(meta);
  if (m.value("config_hash", std::string()) != config_hash(config))
    throw std::runtime_error(meta.string() + " was produced with a different configuration; rerun '" + stage + "'");
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

Json ks_json(const KsResult& ks) {
  Json j;
  j["D"] = ks.statistic;
  j["threshold"] = ks.threshold;
  j["p_value"] = ks.p_value;
  j["reject"] = ks.reject;
  return j;
}

Json sobol_json(const SobolIndices& s) {
  Json j;
  j["first"] = to_json(s.first);
  j["total"] = to_json(s.total);
  j["interaction"] = to_json_vector(s.interaction);
  j["defined"] = s.defined;
  return j;
}

struct Shape {
  double skewness;
  double excess_kurtosis;
  int modes;
};

// Sample skewness, excess kurtosis and the number of local maxima of the KDE
// that reach at least 5% of the highest peak.
Shape pdf_shape(const std::vector<double>& x, const DensityCurve& kde) {
  const auto n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Shape s{m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0, m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0, 0};
  const double peak = kde.density.maxCoeff();
  for (Eigen::Index g = 1; g + 1 < kde.density.size(); ++g) {
    if (kde.density(g) > kde.density(g - 1) && kde.density(g) >= kde.density(g + 1) && kde.density(g) >= 0.05 * peak)
      ++s.modes;
  }
  return s;
}

Json shape_json(const Shape& s) {
  Json j;
  j["skewness"] = s.skewness;
  j["excess_kurtosis"] = s.excess_kurtosis;
  j["kde_modes"] = s.modes;
  return j;
}

void append_pdf(std::ostringstream& out, const std::string& series, const DensityCurve& kde) {
  for (Eigen::Index g = 0; g < kde.grid.size(); ++g)
    out << series << ',' << format_double(kde.grid(g)) << ',' << format_double(kde.density(g)) << '\n';
}

}  // namespace

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["n_reference"] = c.n_reference;
  j["budgets"] = c.budgets;
  j["sobol_samples"] = c.sobol_samples;
  j["alpha"] = c.alpha;
  j["station_of_interest_km"] = c.station_of_interest_km;
  j["kde_points"] = c.kde_points;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir;
  j["inputs"] = to_json(c.inputs);
  j["design_box"] = to_json(c.design_box);

  const auto& s = c.channel.synthetic;
  Json ch;
  ch["upstream_km"] = s.upstream_km;
  ch["downstream_km"] = s.downstream_km;
  ch["width_m"] = s.width_m;
  ch["mean_slope_m_per_km"] = s.mean_slope_m_per_km;
  ch["outlet_bed_m"] = s.outlet_bed_m;
  ch["section_spacing_km"] = s.section_spacing_km;
  Json bumps = Json::array();
  for (const auto& b : s.bumps) {
    Json bj;
    bj["center_km"] = b.center_km;
    bj["amplitude_m"] = b.amplitude_m;
    bj["width_km"] = b.width_km;
    bumps.push_back(bj);
  }
  ch["bumps"] = bumps;
  ch["zone_bounds_km"] = s.zone_bounds_km;
  ch["strickler"] = s.strickler;
  ch["random_zone"] = s.random_zone;
  ch["rating_discharge"] = s.rating_discharge;
  ch["rating_strickler"] = s.rating_strickler;
  ch["grid_step_m"] = s.options.grid_step_m;
  ch["station_count"] = s.options.station_count;
  ch["gravity"] = s.options.gravity;
  ch["critical_margin"] = s.options.critical_margin;
  ch["geometry_file"] = c.channel.geometry_file;
  if (c.channel.rating) {
    ch["rating"] = {{"coefficient", c.channel.rating->coefficient}, {"exponent", c.channel.rating->exponent}};
  } else {
    ch["rating"] = nullptr;
  }
  j["channel"] = ch;

  Json gp;
  gp["restarts"] = c.gp.restarts;
  gp["max_iterations"] = c.gp.max_iterations;
  gp["max_jitter"] = c.gp.max_jitter;
  gp["length_scale"] = interval_json(c.gp.bounds.length_scale);
  gp["signal_variance"] = interval_json(c.gp.bounds.signal_variance);
  gp["nugget"] = interval_json(c.gp.bounds.nugget);
  j["gp"] = gp;
  return j;
}

ExperimentConfig config_from_json(const Json& doc) {
  ExperimentConfig c;
  check_keys(doc,
             {"seed", "n_reference", "budgets", "sobol_samples", "alpha", "station_of_interest_km", "kde_points",
              "workers", "out_dir", "inputs", "design_box", "channel", "gp"},
             "config");
  read_if(doc, "seed", c.seed, "config");
  read_if(doc, "n_reference", c.n_reference, "config");
  read_if(doc, "budgets", c.budgets, "config");
  read_if(doc, "sobol_samples", c.sobol_samples, "config");
  read_if(doc, "alpha", c.alpha, "config");
  read_if(doc, "station_of_interest_km", c.station_of_interest_km, "config");
  read_if(doc, "kde_points", c.kde_points, "config");
  read_if(doc, "workers", c.workers, "config");
  read_if(doc, "out_dir", c.out_dir, "config");
  if (doc.contains("inputs")) {
    try {
      c.inputs = input_space_from_json(doc.at("inputs"));
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("config.inputs: ") + e.what());
    }
  }
  if (doc.contains("design_box")) {
    try {
      c.design_box = design_box_from_json(doc.at("design_box"));
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("config.design_box: ") + e.what());
    }
  }
  if (doc.contains("channel")) {
    const Json& ch = doc.at("channel");
    const std::string w = "config.channel";
    check_keys(ch,
               {"upstream_km", "downstream_km", "width_m", "mean_slope_m_per_km", "outlet_bed_m",
                "section_spacing_km", "bumps", "zone_bounds_km", "strickler", "random_zone", "rating_discharge",
                "rating_strickler", "grid_step_m", "station_count", "gravity", "critical_margin", "geometry_file",
                "rating"},
               w);
    auto& s = c.channel.synthetic;
    read_if(ch, "upstream_km", s.upstream_km, w);
    read_if(ch, "downstream_km", s.downstream_km, w);
    read_if(ch, "width_m", s.width_m, w);
    read_if(ch, "mean_slope_m_per_km", s.mean_slope_m_per_km, w);
    read_if(ch, "outlet_bed_m", s.outlet_bed_m, w);
    read_if(ch, "section_spacing_km", s.section_spacing_km, w);
    if (ch.contains("bumps")) {
      s.bumps.clear();
      for (const auto& b : ch.at("bumps")) {
        check_keys(b, {"center_km", "amplitude_m", "width_km"}, w + ".bumps[]");
        BedBump bump;
        read_if(b, "center_km", bump.center_km, w + ".bumps[]");
        read_if(b, "amplitude_m", bump.amplitude_m, w + ".bumps[]");
        read_if(b, "width_km", bump.width_km, w + ".bumps[]");
        require(bump.width_km > 0.0, w + ".bumps[].width_km must be positive");
        s.bumps.push_back(bump);
      }
    }
    read_if(ch, "zone_bounds_km", s.zone_bounds_km, w);
    read_if(ch, "strickler", s.strickler, w);
    read_if(ch, "random_zone", s.random_zone, w);
    read_if(ch, "rating_discharge", s.rating_discharge, w);
    read_if(ch, "rating_strickler", s.rating_strickler, w);
    read_if(ch, "grid_step_m", s.options.grid_step_m, w);
    read_if(ch, "station_count", s.options.station_count, w);
    read_if(ch, "gravity", s.options.gravity, w);
    read_if(ch, "critical_margin", s.options.critical_margin, w);
    read_if(ch, "geometry_file", c.channel.geometry_file, w);
    if (ch.contains("rating") && !ch.at("rating").is_null()) {
      const Json& r = ch.at("rating");
      check_keys(r, {"coefficient", "exponent"}, w + ".rating");
      RatingCurve rc;
      read_if(r, "coefficient", rc.coefficient, w + ".rating");
      read_if(r, "exponent", rc.exponent, w + ".rating");
      require(rc.coefficient > 0.0 && rc.exponent > 0.0, w + ".rating: coefficient and exponent must be positive");
      c.channel.rating = rc;
    }
    require(s.width_m > 0.0, w + ".width_m must be positive");
    require(s.downstream_km > s.upstream_km, w + ": downstream_km must exceed upstream_km");
    require(s.section_spacing_km > 0.0, w + ".section_spacing_km must be positive");
    require(s.rating_discharge > 0.0 && s.rating_strickler > 0.0, w + ": rating reference values must be positive");
  }
  if (doc.contains("gp")) {
    const Json& g = doc.at("gp");
    const std::string w = "config.gp";
    check_keys(g, {"restarts", "max_iterations", "max_jitter", "length_scale", "signal_variance", "nugget"}, w);
    read_if(g, "restarts", c.gp.restarts, w);
    read_if(g, "max_iterations", c.gp.max_iterations, w);
    read_if(g, "max_jitter", c.gp.max_jitter, w);
    if (g.contains("length_scale")) c.gp.bounds.length_scale = interval_from(g.at("length_scale"), w + ".length_scale");
    if (g.contains("signal_variance"))
      c.gp.bounds.signal_variance = interval_from(g.at("signal_variance"), w + ".signal_variance");
    if (g.contains("nugget")) c.gp.bounds.nugget = interval_from(g.at("nugget"), w + ".nugget");
    require(c.gp.restarts >= 1, w + ".restarts must be >= 1");
    require(c.gp.max_iterations >= 1, w + ".max_iterations must be >= 1");
    require(c.gp.max_jitter > 0.0, w + ".max_jitter must be positive");
  }

  require(c.inputs.dim() == 2, "config.inputs: the channel model takes exactly two inputs (discharge, Strickler)");
  require(c.design_box.dim() == 2, "config.design_box: two dimensions required");
  require(!c.budgets.empty(), "config.budgets must not be empty");
  int max_budget = 0;
  for (int b : c.budgets) {
    pc_order_for_budget(b, 2);
    max_budget = std::max(max_budget, b);
  }
  require(c.n_reference >= 2, "config.n_reference must be >= 2");
  require(c.n_reference >= max_budget, "config.n_reference must be at least the largest budget");
  require(c.sobol_samples >= 100, "config.sobol_samples must be >= 100");
  require(c.alpha > 0.0 && c.alpha < 1.0, "config.alpha must lie in (0, 1)");
  require(c.kde_points >= 2, "config.kde_points must be >= 2");
  require(c.workers >= 1, "config.workers must be >= 1");
  require(!c.out_dir.empty(), "config.out_dir must not be empty");
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

std::string config_hash(const ExperimentConfig& config) {
  Json j = config_to_json(config);
  j.erase("workers");
  j.erase("out_dir");
  return hex64(fnv1a64(j.dump()));
}

int pc_order_for_budget(int budget, int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  auto power = [dim](int base) {
    long v = 1;
    for (int i = 0; i < dim; ++i) v *= base;
    return v;
  };
  int p = 0;
  while (power(p + 2) <= budget) ++p;
  if (power(p + 1) == budget) return p;
  std::ostringstream msg;
  msg << "budget " << budget << " is not of the form (P+1)^" << dim << "; nearest valid budgets are "
      << power(p + 1) << " (P = " << p << ") and " << power(p + 2) << " (P = " << p + 1 << ")";
  throw std::invalid_argument(msg.str());
}

ChannelModel build_channel(const ExperimentConfig& config) {
  const auto& spec = config.channel.synthetic;
  if (config.channel.geometry_file.empty()) {
    ChannelModel model = synthetic_channel(spec);
    if (!config.channel.rating) return model;
    return ChannelModel(model.sections(), model.friction(), *config.channel.rating, model.options());
  }
  auto sections = read_geometry_csv(config.channel.geometry_file);
  if (sections.size() < 2) throw std::invalid_argument("geometry file needs at least two cross-sections");
  RatingCurve rc;
  if (config.channel.rating) {
    rc = *config.channel.rating;
  } else {
    const auto& first = sections.front();
    const auto& last = sections.back();
    const double slope =
        (first.bed_elevation_m - last.bed_elevation_m) / (1000.0 * (last.abscissa_km - first.abscissa_km));
    if (!(slope > 0.0)) throw std::invalid_argument("geometry file: rating curve calibration needs a falling bed");
    rc = calibrate_rating_curve(spec.rating_discharge, spec.rating_strickler, last.width_m, slope);
  }
  return ChannelModel(std::move(sections), FrictionZones{spec.zone_bounds_km, spec.strickler, spec.random_zone}, rc,
                      spec.options);
}

ReferenceRun run_reference(const ExperimentConfig& config, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ChannelModel channel = build_channel(config);
  const fs::path dir = fs::path(config.out_dir) / "reference";
  fs::create_directories(dir);

  ReferenceRun run;
  run.inputs = mc_sample(config.inputs, config.n_reference, config.seed);
  if (log) *log << "reference: " << config.n_reference << " forward solves on " << config.workers << " worker(s)\n";
  run.outputs = channel.evaluate(run.inputs, config.workers);
  run.forward_solves = run.inputs.rows();

  const auto& s = config.channel.synthetic;
  write_points_csv(dir / "inputs.csv", run.inputs, config.inputs.names());
  write_outputs_csv(dir / "outputs.csv", run.outputs);
  write_geometry_csv(dir / "geometry.csv", channel, s.rating_strickler);
  Json meta = metadata(config, "reference", seconds_since(t0));
  meta["forward_solves"] = run.forward_solves;
  meta["stations_km"] = to_json_vector(channel.stations_km());
  write_json(dir / "metadata.json", meta);
  if (log) *log << "reference: wrote " << dir.string() << "\n";
  return run;
}

FitRun run_fit(const ExperimentConfig& config, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ChannelModel channel = build_channel(config);
  const fs::path dir = fs::path(config.out_dir) / "fit";
  fs::create_directories(dir);

  FitRun run;
  Json solves_pc, solves_pgp;
  for (int budget : config.budgets) {
    const int order = pc_order_for_budget(budget, static_cast<int>(config.inputs.dim()));
    const std::string tag = budget_tag(budget);

    const QuadratureRule rule = tensor_quadrature(order, config.inputs);
    const Eigen::MatrixXd node_outputs = channel.evaluate(rule.nodes, config.workers);
    PcSurrogate pc = fit_pc(node_outputs, rule, MultiIndexBasis::for_space(config.inputs, order), config.inputs);
    write_points_csv(dir / ("pc_" + tag + "_nodes.csv"), rule.nodes, config.inputs.names());
    write_json(dir / ("pc_" + tag + ".json"), to_json(pc));
    write_pc_coefficients_csv(dir / ("pc_" + tag + "_coefficients.csv"), pc);
    if (log) *log << "fit: PC order " << order << " from " << rule.size() << " solves\n";

    SnapshotSet snapshots;
    snapshots.inputs = halton_design(config.design_box, budget);
    snapshots.outputs = channel.evaluate(snapshots.inputs, config.workers);
    PgpSurrogate pgp = fit_pgp(snapshots, config.design_box, config.gp, config.workers);
    write_points_csv(dir / ("pgp_" + tag + "_design.csv"), snapshots.inputs, config.inputs.names());
    write_json(dir / ("pgp_" + tag + ".json"), to_json(pgp));
    write_spectrum_csv(dir / ("pgp_" + tag + "_spectrum.csv"), pgp.basis);
    if (log) *log << "fit: pGP with " << pgp.basis.rank() << " modes from " << snapshots.size() << " solves\n";

    run.budgets.push_back(budget);
    run.pc_solves.push_back(rule.size());
    run.pgp_solves.push_back(snapshots.size());
    solves_pc[std::to_string(budget)] = rule.size();
    solves_pgp[std::to_string(budget)] = snapshots.size();
    run.pc.push_back(std::move(pc));
    run.pgp.push_back(std::move(pgp));
  }
  Json meta = metadata(config, "fit", seconds_since(t0));
  meta["forward_solves"] = {{"pc", solves_pc}, {"pgp", solves_pgp}};
  write_json(dir / "metadata.json", meta);
  return run;
}

Json run_comparison(const ExperimentConfig& config, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root(config.out_dir);
  check_stage(config, root / "reference", "reference");
  check_stage(config, root / "fit", "fit");
  const fs::path dir = root / "compare";
  fs::create_directories(dir);

  const ChannelModel channel = build_channel(config);
  const Eigen::MatrixXd x_ref = read_indexed_csv(root / "reference" / "inputs.csv");
  const Eigen::MatrixXd y_ref = read_indexed_csv(root / "reference" / "outputs.csv");
  if (x_ref.rows() != config.n_reference || y_ref.rows() != config.n_reference ||
      y_ref.cols() != channel.station_count())
    throw std::runtime_error("stored reference ensemble does not match the configuration");
  const Json fit_meta = read_json(root / "fit" / "metadata.json");

  const Eigen::Index m = y_ref.cols();
  const Eigen::Index d = config.inputs.dim();
  const Eigen::Index upstream = 0;
  const Eigen::Index interest = channel.nearest_station(config.station_of_interest_km);
  const std::vector<Eigen::Index> pdf_stations = {upstream, interest};

  // Reference statistics.
  const Moments ref_moments = ensemble_moments(y_ref);
  const CovarianceMatrices ref_cov = correlation_from_covariance(ensemble_covariance(y_ref));
  std::atomic<Eigen::Index> sobol_solves{0};
  if (log) *log << "compare: Martinez reference with n = " << config.sobol_samples << "\n";
  const MartinezEstimate ref_sobol = martinez_sobol(
      [&](const Eigen::MatrixXd& x) {
        Eigen::MatrixXd y = channel.evaluate(x, config.workers);
        sobol_solves += x.rows();
        return y;
      },
      config.inputs, config.sobol_samples, config.sobol_seed());

  Json summary;
  summary["config_hash"] = config_hash(config);
  summary["seed"] = config.seed;
  summary["sobol_seed"] = config.sobol_seed();
  summary["n_reference"] = config.n_reference;
  summary["sobol_samples"] = config.sobol_samples;
  summary["alpha"] = config.alpha;
  summary["input_names"] = config.inputs.names();
  summary["stations_km"] = to_json_vector(channel.stations_km());
  summary["upstream_station"] = {{"index", upstream + 1}, {"abscissa_km", channel.stations_km()(upstream)}};
  summary["interest_station"] = {{"index", interest + 1}, {"abscissa_km", channel.stations_km()(interest)}};

  Json ref;
  ref["mean"] = to_json_vector(ref_moments.mean);
  ref["stddev"] = to_json_vector(ref_moments.stddev);
  ref["sobol"] = sobol_json(ref_sobol.indices);
  ref["sobol"]["first_lower"] = to_json(ref_sobol.first_lower);
  ref["sobol"]["first_upper"] = to_json(ref_sobol.first_upper);
  ref["sobol"]["total_lower"] = to_json(ref_sobol.total_lower);
  ref["sobol"]["total_upper"] = to_json(ref_sobol.total_upper);
  ref["sobol"]["confidence"] = ref_sobol.confidence;
  Json dominant = Json::array();
  for (Eigen::Index s = 0; s < m; ++s) {
    Eigen::Index arg = 0;
    ref_sobol.indices.first.row(s).maxCoeff(&arg);
    dominant.push_back(config.inputs.names()[static_cast<std::size_t>(arg)]);
  }
  ref["dominant_input"] = dominant;

  std::vector<DensityCurve> ref_pdf;
  Json shapes;
  for (Eigen::Index s : pdf_stations) {
    const auto sample = column(y_ref, s);
    ref_pdf.push_back(kde_pdf(sample, config.kde_points));
    shapes[station_tag(s)] = shape_json(pdf_shape(sample, ref_pdf.back()));
  }
  ref["pdf_shape"] = shapes;
  summary["reference"] = ref;

  std::vector<std::ostringstream> pdf_out(pdf_stations.size());
  for (std::size_t k = 0; k < pdf_stations.size(); ++k) {
    pdf_out[k] << "series,level_m,density\n";
    append_pdf(pdf_out[k], "reference", ref_pdf[k]);
  }
  std::ostringstream corr_out, sobol_out;
  corr_out << "surrogate,budget,i,j,squared_error\n";
  sobol_out << "surrogate,budget,station,abscissa_km,input,kind,value,reference,squared_error\n";

  Json q2_rows = Json::array(), ks_rows = Json::array(), corr_rmse = Json::array(), sobol_rmse = Json::array(),
       within_ci = Json::array();
  Json solves_pc = fit_meta.at("forward_solves").at("pc");
  Json solves_pgp = fit_meta.at("forward_solves").at("pgp");

  for (int budget : config.budgets) {
    const std::string tag = budget_tag(budget);
    Json row1{{"budget", budget}}, rowc{{"budget", budget}}, rows{{"budget", budget}};
    for (const std::string kind : {"pc", "pgp"}) {
      if (log) *log << "compare: " << kind << " N = " << budget << "\n";
      const Json doc = read_json(root / "fit" / (kind + "_" + tag + ".json"));
      Eigen::MatrixXd y_hat;
      Moments moments;
      CovarianceMatrices cov;
      SobolIndices sobol;
      Json report;
      if (kind == "pc") {
        const PcSurrogate pc = pc_from_json(doc);
        y_hat = eval_pc_rows(pc, x_ref);
        moments = pc_moments(pc);
        cov = pc_covariance(pc);
        sobol = pc_sobol(pc);
        report["order"] = pc.basis.order();
        report["moments_source"] = "analytic";
        report["sobol_source"] = "analytic";
      } else {
        const PgpSurrogate pgp = pgp_from_json(doc);
        y_hat = eval_pgp_rows(pgp, x_ref);
        moments = ensemble_moments(y_hat);
        cov = correlation_from_covariance(ensemble_covariance(y_hat));
        const MartinezEstimate est = martinez_sobol(
            [&](const Eigen::MatrixXd& x) { return eval_pgp_rows(pgp, x); }, config.inputs, config.sobol_samples,
            config.sobol_seed());
        sobol = est.indices;
        report["moments_source"] = "ensemble";
        report["sobol_source"] = "martinez";
        report["sobol_first_lower"] = to_json(est.first_lower);
        report["sobol_first_upper"] = to_json(est.first_upper);
      }

      const Q2Result q = q2(y_ref, y_hat);
      const double corr_err = rmse(cov.correlation, ref_cov.correlation);
      const double first_err = rmse(sobol.first, ref_sobol.indices.first);
      const double total_err = rmse(sobol.total, ref_sobol.indices.total);

      Json ks;
      for (std::size_t k = 0; k < pdf_stations.size(); ++k) {
        const Eigen::Index s = pdf_stations[k];
        const auto sample = column(y_hat, s);
        ks[station_tag(s)] = ks_json(ks_two_sample(column(y_ref, s), sample, config.alpha));
        const DensityCurve kde = kde_pdf(sample, config.kde_points);
        append_pdf(pdf_out[k], kind + "_" + tag, kde);
      }
      const KsResult ks_m = ks_two_sample(column(y_ref, interest), column(y_hat, interest), config.alpha);
      Json row2 = ks_json(ks_m);
      row2["budget"] = budget;
      row2["surrogate"] = kind;
      ks_rows.push_back(row2);

      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
          const double e = cov.correlation(i, j) - ref_cov.correlation(i, j);
          corr_out << kind << ',' << budget << ',' << i + 1 << ',' << j + 1 << ',' << format_double(e * e) << '\n';
        }
      for (Eigen::Index s = 0; s < m; ++s)
        for (Eigen::Index i = 0; i < d; ++i)
          for (int k = 0; k < 2; ++k) {
            const double v = k == 0 ? sobol.first(s, i) : sobol.total(s, i);
            const double r = k == 0 ? ref_sobol.indices.first(s, i) : ref_sobol.indices.total(s, i);
            sobol_out << kind << ',' << budget << ',' << s + 1 << ',' << format_double(channel.stations_km()(s)) << ','
                      << config.inputs.names()[static_cast<std::size_t>(i)] << ',' << (k == 0 ? "first" : "total")
                      << ',' << format_double(v) << ',' << format_double(r) << ',' << format_double((v - r) * (v - r))
                      << '\n';
          }

      if (kind == "pc") {
        Json outside = Json::array();
        Eigen::Index checked = 0;
        for (Eigen::Index s = 0; s < m; ++s)
          for (Eigen::Index i = 0; i < d; ++i) {
            ++checked;
            const double v = sobol.first(s, i);
            if (v < ref_sobol.first_lower(s, i) || v > ref_sobol.first_upper(s, i))
              outside.push_back({{"station", s + 1},
                                 {"input", config.inputs.names()[static_cast<std::size_t>(i)]},
                                 {"value", v},
                                 {"lower", ref_sobol.first_lower(s, i)},
                                 {"upper", ref_sobol.first_upper(s, i)}});
          }
        within_ci.push_back({{"budget", budget},
                             {"checked", checked},
                             {"inside", checked - static_cast<Eigen::Index>(outside.size())},
                             {"outside", outside}});
      }

      report["surrogate"] = kind;
      report["budget"] = budget;
      report["forward_solves"] = (kind == "pc" ? solves_pc : solves_pgp).at(std::to_string(budget));
      report["config_hash"] = config_hash(config);
      report["seed"] = config.seed;
      report["moments"] = {{"mean", to_json_vector(moments.mean)}, {"stddev", to_json_vector(moments.stddev)}};
      report["covariance"] = to_json(cov.covariance);
      report["correlation"] = to_json(cov.correlation);
      report["sobol"] = sobol_json(sobol);
      report["q2"] = {{"per_station", to_json_vector(q.per_station)}, {"mean", q.mean}};
      report["ks"] = ks;
      report["rmse"] = {{"mean", rmse(moments.mean, ref_moments.mean)},
                        {"stddev", rmse(moments.stddev, ref_moments.stddev)},
                        {"correlation", corr_err},
                        {"sobol_first", first_err},
                        {"sobol_total", total_err}};
      write_json(dir / ("report_" + kind + "_" + tag + ".json"), report);

      row1[kind] = q.mean;
      rowc[kind] = corr_err;
      rows[kind + "_first"] = first_err;
      rows[kind + "_total"] = total_err;
    }
    q2_rows.push_back(row1);
    corr_rmse.push_back(rowc);
    sobol_rmse.push_back(rows);
  }

  summary["forward_solves"] = {{"reference", config.n_reference},
                               {"sobol_reference", sobol_solves.load()},
                               {"pc", solves_pc},
                               {"pgp", solves_pgp},
                               {"pc_sobol_extra", 0},
                               {"pgp_sobol_extra", 0}};
  summary["q2_by_budget"] = q2_rows;
  summary["ks_station_of_interest"] = ks_rows;
  summary["correlation_rmse"] = corr_rmse;
  summary["sobol_rmse"] = sobol_rmse;
  summary["pc_sobol_within_reference_ci"] = within_ci;

  write_json(dir / "summary.json", summary);
  write_text(dir / "corr_mse.csv", corr_out.str());
  write_text(dir / "sobol_error.csv", sobol_out.str());
  for (std::size_t k = 0; k < pdf_stations.size(); ++k)
    write_text(dir / ("pdf_" + station_tag(pdf_stations[k]) + ".csv"), pdf_out[k].str());
  write_json(dir / "metadata.json", metadata(config, "compare", seconds_since(t0)));
  if (log) *log << "compare: wrote " << dir.string() << "\n";
  return summary;
}

std::string format_report(const Json& summary) {
  std::ostringstream out;
  out << std::setprecision(6);
  const Json& mar = summary.at("interest_station");
  out << "Reference: N_ref = " << summary.at("n_reference").get<long>() << ", seed " << summary.at("seed").get<std::uint64_t>()
      << ", config " << summary.at("config_hash").get<std::string>() << "\n\n";

  out << "Mean Q2 over stations\n";
  out << std::left << std::setw(8) << "N" << std::setw(14) << "PC" << "pGP\n";
  for (const auto& r : summary.at("q2_by_budget"))
    out << std::setw(8) << r.at("budget").get<int>() << std::setw(14) << r.at("pc").get<double>()
        << r.at("pgp").get<double>() << "\n";

  out << "\nKolmogorov-Smirnov at station " << mar.at("index").get<int>() << " ("
      << mar.at("abscissa_km").get<double>() << " km)\n";
  out << std::setw(10) << "surrogate" << std::setw(8) << "N" << std::setw(14) << "D" << std::setw(14) << "p-value"
      << std::setw(14) << "threshold" << "reject\n";
  for (const auto& r : summary.at("ks_station_of_interest"))
    out << std::setw(10) << r.at("surrogate").get<std::string>() << std::setw(8) << r.at("budget").get<int>()
        << std::setw(14) << r.at("D").get<double>() << std::setw(14) << r.at("p_value").get<double>()
        << std::setw(14) << r.at("threshold").get<double>() << (r.at("reject").get<bool>() ? "yes" : "no") << "\n";

  out << "\nCorrelation-matrix RMSE\n";
  out << std::setw(8) << "N" << std::setw(14) << "PC" << "pGP\n";
  for (const auto& r : summary.at("correlation_rmse"))
    out << std::setw(8) << r.at("budget").get<int>() << std::setw(14) << r.at("pc").get<double>()
        << r.at("pgp").get<double>() << "\n";

  out << "\nSobol' index RMSE (first-order / total)\n";
  out << std::setw(8) << "N" << std::setw(28) << "PC" << "pGP\n";
  for (const auto& r : summary.at("sobol_rmse")) {
    std::ostringstream pc, pgp;
    pc << std::setprecision(4) << r.at("pc_first").get<double>() << " / " << r.at("pc_total").get<double>();
    pgp << std::setprecision(4) << r.at("pgp_first").get<double>() << " / " << r.at("pgp_total").get<double>();
    out << std::setw(8) << r.at("budget").get<int>() << std::setw(28) << pc.str() << pgp.str() << "\n";
  }

  const Json& fs_ = summary.at("forward_solves");
  out << "\nForward solves: reference " << fs_.at("reference").get<long>() << ", Sobol' reference "
      << fs_.at("sobol_reference").get<long>() << "\n";
  return out.str();
}

}  // namespace rivuq
