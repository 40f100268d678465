#include "core/runner.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include "core/decay.hpp"
#include "core/errors.hpp"
#include "core/report.hpp"

namespace nsprofile {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "n", "alpha", "beta", "gamma", "P0", "Q0", "width",
      "t_min", "t_max", "points", "spacing",
      "r_max", "base_panels", "osc_factor", "angular_nodes", "rel_tol", "max_refinements", "threads",
      "slope_tol", "rate_tol", "sandwich_ratio", "lemma_ratio", "r_squared_min", "oracle_tol",
      "oracle_r_min", "oracle_r_max", "oracle_radii", "oracle_t_min", "oracle_t_max", "oracle_times",
      "oracle_step", "seed", "highfreq_t_max", "highfreq_points",
      "plot_x_scale", "plot_y_scale", "plot_reference_slope", "svg", "output_dir"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const json& j) : j_(j) {}

  void number(const char* key, double& out) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(std::string("config key '") + key + "' must be finite");
  }

  template <class Int>
  void integer(const char* key, Int& out) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
    if (v.is_number_unsigned()) {
      out = static_cast<Int>(v.get<std::uint64_t>());
    } else {
      const auto x = v.get<std::int64_t>();
      if (x < 0 && std::is_unsigned_v<Int>)
        throw ConfigError(std::string("config key '") + key + "' must be nonnegative");
      out = static_cast<Int>(x);
    }
  }

  void boolean(const char* key, bool& out) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(std::string("config key '") + key + "' must be a boolean");
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
    out = v.get<std::string>();
  }

  bool vector(const char* key, RealVec& out) const {
    if (!j_.contains(key)) return false;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(std::string("config key '") + key + "' must be an array of numbers");
    out.clear();
    for (const json& x : v) {
      if (!x.is_number()) throw ConfigError(std::string("config key '") + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return true;
  }

 private:
  const json& j_;
};

const char* spacing_name(Spacing s) { return s == Spacing::Geometric ? "geometric" : "linear"; }

AxisScale parse_scale(const std::string& s) {
  if (s == "log") return AxisScale::Log;
  if (s == "linear") return AxisScale::Linear;
  throw ConfigError("plot scale must be 'log' or 'linear', got '" + s + "'");
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

bool is_asymptotic(const std::string& sub) {
  return sub == "profile-error" || sub == "density-profile-error" || sub == "rate" || sub == "sandwich" ||
         sub == "lemma31" || sub == "bounds";
}

json fit_json(const DecayFit& fit, const RealVec& times) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"window_t_min", times[fit.window.begin]},
          {"window_t_max", times[fit.window.end - 1]},
          {"window_points", fit.window.size()}};
}

json two_sided_json(const TwoSidedReport& r) {
  return {{"plateau_min", r.plateau_min}, {"plateau_max", r.plateau_max}, {"ratio", r.ratio}, {"pass", r.pass}};
}

struct Outputs {
  Table table;
  json results;
  json thresholds;
  bool pass = false;
  std::vector<PlotSeries> series;
  PlotSpec plot;
  bool has_plot = false;
};

std::vector<PlotSeries> columns_as_series(const Table& t, std::initializer_list<std::size_t> cols) {
  std::vector<PlotSeries> all = series_from_table(t);
  std::vector<PlotSeries> out;
  for (std::size_t c : cols) out.push_back(all[c - 1]);
  return out;
}

Outputs run_oracle(const RunConfig& c) {
  const OracleGrid& g = c.oracle;
  const RealVec radii = oracle_radii(c.params, g.r_min, g.r_max, g.radii);
  const RealVec times = geometric_grid(g.t_min, g.t_max, g.times);
  const OracleReport rep = oracle_check(c.params, c.data, radii, times, g.step, g.seed, c.thresholds.oracle_tol);
  Outputs o;
  o.table.columns = {"r", "t", "rel_err"};
  for (const OraclePoint& p : rep.points) o.table.rows.push_back({p.r, p.t, p.rel_err});
  o.thresholds = {{"max_rel_err", c.thresholds.oracle_tol}};
  o.results = {{"max_rel_err", rep.max_rel_err},
               {"points", rep.points.size()},
               {"radii", radii},
               {"times", times},
               {"rk4_step", g.step}};
  o.pass = rep.pass;
  return o;
}

Outputs run_profile_error(const RunConfig& c, const RealVec& times) {
  const ProfileErrorReport rep = verify_profile_error(c.params, c.data, times, c.quadrature, c.thresholds.slope_tol);
  Outputs o;
  o.table.columns = {"t", "residual_sq", "reduced_sq"};
  for (std::size_t i = 0; i < times.size(); ++i) o.table.rows.push_back({times[i], rep.residual_sq[i], rep.reduced_sq[i]});
  o.thresholds = {{"slope_max", rep.threshold}, {"slope_tol", c.thresholds.slope_tol}};
  o.results = {{"fit", fit_json(rep.fit, times)}, {"reduced_tighter", rep.reduced_tighter}};
  o.pass = rep.pass;
  o.series = series_from_table(o.table);
  o.plot.title = "low-zone velocity profile error";
  o.plot.y_label = "squared L2 norm";
  o.plot.reference_slope = -(0.5 * c.params.n + 1.0);
  o.has_plot = true;
  return o;
}

Outputs run_density_error(const RunConfig& c, const RealVec& times) {
  const DensityErrorReport rep =
      verify_density_profile_error(c.params, c.data, times, c.quadrature, c.thresholds.slope_tol);
  Outputs o;
  o.table.columns = {"t", "residual_sq"};
  for (std::size_t i = 0; i < times.size(); ++i) o.table.rows.push_back({times[i], rep.residual_sq[i]});
  o.thresholds = {{"slope_max", rep.threshold}, {"slope_tol", c.thresholds.slope_tol}};
  o.results = {{"fit", fit_json(rep.fit, times)}};
  o.pass = rep.pass;
  o.series = series_from_table(o.table);
  o.plot.title = "low-zone density profile error";
  o.plot.y_label = "squared L2 norm";
  o.plot.reference_slope = -(0.5 * c.params.n + 1.0);
  o.has_plot = true;
  return o;
}

Outputs run_rate(const RunConfig& c, const RealVec& times) {
  const RateReport rep = verify_velocity_rate(c.params, c.data, times, c.quadrature, c.thresholds.rate_tol);
  Outputs o;
  o.table.columns = {"t", "velocity_norm"};
  for (std::size_t i = 0; i < times.size(); ++i) o.table.rows.push_back({times[i], rep.series.values[i]});
  o.thresholds = {{"expected_slope", rep.expected}, {"tolerance", rep.tolerance}};
  o.results = {{"fit", fit_json(rep.fit, times)}, {"slope", rep.fit.slope}};
  o.pass = rep.pass;
  o.series = series_from_table(o.table);
  o.plot.title = "velocity norm";
  o.plot.y_label = "||v(t)||";
  o.plot.reference_slope = rep.expected;
  o.has_plot = true;
  return o;
}

Outputs run_sandwich(const RunConfig& c, const RealVec& times) {
  const SandwichReport rep = verify_sandwich(c.params, c.data, times, c.quadrature, c.thresholds.sandwich_ratio);
  Outputs o;
  o.table.columns = {"t", "scaled_velocity_norm"};
  for (std::size_t i = 0; i < times.size(); ++i) o.table.rows.push_back({times[i], rep.normalized_values[i]});
  o.thresholds = {{"ratio_max", rep.ratio_max}};
  o.results = {{"plateau_min", rep.plateau_min},
               {"plateau_max", rep.plateau_max},
               {"ratio", rep.ratio},
               {"window_t_min", times[rep.window.begin]},
               {"zero_momentum_limit", std::abs(c.data.amplitude_rho) * std::sqrt(i_integral_limit(c.params))}};
  o.pass = rep.pass;
  o.series = series_from_table(o.table);
  o.plot.title = "scaled velocity norm";
  o.plot.y_label = "||v(t)|| t^(n/4)";
  o.has_plot = true;
  return o;
}

Outputs run_lemma31(const RunConfig& c, const RealVec& times) {
  const Lemma31Report rep = verify_lemma31(c.params, c.data.amplitude_v, times, c.quadrature, c.thresholds.lemma_ratio);
  Outputs o;
  o.table.columns = {"t", "item1", "item2", "item3", "cone"};
  for (std::size_t i = 0; i < times.size(); ++i)
    o.table.rows.push_back({times[i], rep.item1.normalized[i], rep.item2.normalized[i], rep.item3.normalized[i],
                            rep.cone_normalized[i]});
  o.thresholds = {{"ratio_max", c.thresholds.lemma_ratio}};
  o.results = {{"item1", two_sided_json(rep.item1)},
               {"item2", two_sided_json(rep.item2)},
               {"item3", two_sided_json(rep.item3)},
               {"item2_limit", i_integral_limit(c.params)},
               {"cone_cap", rep.cone_cap},
               {"witness_floor", rep.witness_floor},
               {"witness_pass", rep.witness_pass}};
  o.pass = rep.pass;
  o.series = series_from_table(o.table);
  o.plot.title = "scaled frequency integrals";
  o.plot.y_label = "t^(n/2) x integral";
  o.has_plot = true;
  return o;
}

Outputs run_highfreq(const RunConfig& c) {
  const RealVec times = linear_grid(0.0, c.highfreq.t_max, c.highfreq.points);
  const HighFreqReport rep = highfreq_energy(c.params, c.data, times, c.quadrature, c.thresholds.r_squared_min);
  Outputs o;
  o.table.columns = {"t", "high_energy", "low_energy"};
  for (std::size_t i = 0; i < times.size(); ++i)
    o.table.rows.push_back({times[i], rep.series.values[i], rep.low_energy[i]});
  o.thresholds = {{"r_squared_min", c.thresholds.r_squared_min}};
  o.results = {{"fit", fit_json(rep.exp_fit, times)},
               {"eta", rep.eta},
               {"T0", rep.komornik_T0},
               {"non_increasing", rep.non_increasing},
               {"komornik_hypothesis", rep.komornik_hypothesis},
               {"komornik_conclusion", rep.komornik_conclusion}};
  o.pass = rep.pass;
  o.series = columns_as_series(o.table, {1});
  o.plot.x_scale = AxisScale::Linear;
  o.plot.title = "high-frequency energy";
  o.plot.y_label = "E_h(t)";
  o.has_plot = true;
  return o;
}

Outputs run_bounds(const RunConfig& c, const RealVec& times) {
  const std::vector<BoundsRow> rows = compare_bounds(c.params, c.data, times, c.quadrature);
  Outputs o;
  o.table.columns = {"t", "e0_sq", "e0_bound", "e6_sq", "e6_bound", "rest_sq", "rest_bound",
                     "b1", "b2", "b3", "b4", "b5"};
  o.pass = true;
  json failed = json::array();
  for (const BoundsRow& r : rows) {
    const auto& b = r.bounds.terms;
    o.table.rows.push_back({r.t, r.e0_sq, b[0], r.e6_sq, b[6], r.rest_sq, r.rest_bound, b[1], b[2], b[3], b[4], b[5]});
    if (!r.pass) failed.push_back(r.t);
    o.pass = o.pass && r.pass;
  }
  o.thresholds = {{"cushion", 1.05}, {"rest_factor", 5.0}};
  o.results = {{"failed_times", failed}};
  o.series = columns_as_series(o.table, {1, 2, 3, 4, 5, 6});
  o.plot.title = "remainder norms and bounds";
  o.plot.y_label = "squared L2 norm";
  o.has_plot = true;
  return o;
}

Outputs run_plot(const RunConfig& c, const std::string& input) {
  if (input.empty()) throw ConfigError("plot needs an input CSV");
  Outputs o;
  o.table = read_csv(input);
  o.series = series_from_table(o.table);
  if (o.series.empty()) throw ConfigError("plot input needs at least two columns");
  o.plot.x_scale = parse_scale(c.plot.x_scale);
  o.plot.y_scale = parse_scale(c.plot.y_scale);
  if (c.plot.has_reference_slope) o.plot.reference_slope = c.plot.reference_slope;
  o.plot.x_label = o.table.columns[0];
  o.plot.title = std::filesystem::path(input).filename().string();
  o.has_plot = true;
  o.thresholds = json::object();
  o.results = {{"input", input}, {"series", o.series.size()}, {"rows", o.table.rows.size()}};
  // Rendering errors (e.g. nonpositive data on a log axis) surface here.
  (void)to_svg(o.series, o.plot);
  o.pass = true;
  return o;
}

}  // namespace

RealVec TimeGrid::values() const {
  return spacing == Spacing::Geometric ? geometric_grid(t_min, t_max, points) : linear_grid(t_min, t_max, points);
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  const Reader r(j);
  RunConfig c;
  r.integer("n", c.params.n);
  r.number("alpha", c.params.alpha);
  r.number("beta", c.params.beta);
  r.number("gamma", c.params.gamma);
  if (c.params.n < 1) throw ConfigError("n must be at least 1");
  c.data.amplitude_v.assign(static_cast<std::size_t>(c.params.n), 0.0);
  c.data.amplitude_v[0] = 0.1;
  c.data.amplitude_rho = 1.0;
  r.vector("P0", c.data.amplitude_v);
  r.number("Q0", c.data.amplitude_rho);
  r.number("width", c.data.width);

  r.number("t_min", c.grid.t_min);
  r.number("t_max", c.grid.t_max);
  r.integer("points", c.grid.points);
  std::string spacing = spacing_name(c.grid.spacing);
  r.string("spacing", spacing);
  if (spacing == "geometric") c.grid.spacing = Spacing::Geometric;
  else if (spacing == "linear") c.grid.spacing = Spacing::Linear;
  else throw ConfigError("spacing must be 'geometric' or 'linear'");

  r.number("r_max", c.quadrature.r_max);
  r.integer("base_panels", c.quadrature.base_panels);
  r.integer("osc_factor", c.quadrature.osc_factor);
  r.integer("angular_nodes", c.quadrature.angular_nodes);
  r.number("rel_tol", c.quadrature.rel_tol);
  r.integer("max_refinements", c.quadrature.max_refinements);
  r.integer("threads", c.quadrature.threads);

  r.number("slope_tol", c.thresholds.slope_tol);
  r.number("rate_tol", c.thresholds.rate_tol);
  r.number("sandwich_ratio", c.thresholds.sandwich_ratio);
  r.number("lemma_ratio", c.thresholds.lemma_ratio);
  r.number("r_squared_min", c.thresholds.r_squared_min);
  r.number("oracle_tol", c.thresholds.oracle_tol);

  r.number("oracle_r_min", c.oracle.r_min);
  r.number("oracle_r_max", c.oracle.r_max);
  r.integer("oracle_radii", c.oracle.radii);
  r.number("oracle_t_min", c.oracle.t_min);
  r.number("oracle_t_max", c.oracle.t_max);
  r.integer("oracle_times", c.oracle.times);
  r.number("oracle_step", c.oracle.step);
  r.integer("seed", c.oracle.seed);

  r.number("highfreq_t_max", c.highfreq.t_max);
  r.integer("highfreq_points", c.highfreq.points);

  r.string("plot_x_scale", c.plot.x_scale);
  r.string("plot_y_scale", c.plot.y_scale);
  if (j.contains("plot_reference_slope")) {
    r.number("plot_reference_slope", c.plot.reference_slope);
    c.plot.has_reference_slope = true;
  }
  r.boolean("svg", c.svg);
  r.string("output_dir", c.output_dir);
  c.validate();
  return c;
}

void RunConfig::validate() const {
  try {
    params.validate();
    data.validate(params.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(grid.t_min > 0.0) || !(grid.t_max > grid.t_min)) throw ConfigError("time grid needs 0 < t_min < t_max");
  if (grid.points < 8) throw ConfigError("time grid needs at least 8 points");
  if (quadrature.r_max < 0.0) throw ConfigError("r_max must be nonnegative");
  if (quadrature.base_panels < 1 || quadrature.osc_factor < 1 || quadrature.angular_nodes < 2)
    throw ConfigError("quadrature panel and node counts must be positive");
  if (!(quadrature.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
  if (quadrature.max_refinements < 0) throw ConfigError("max_refinements must be nonnegative");
  if (quadrature.threads < 1) throw ConfigError("threads must be at least 1");
  const Thresholds& t = thresholds;
  if (!(t.slope_tol > 0.0) || !(t.rate_tol > 0.0) || !(t.sandwich_ratio >= 1.0) || !(t.lemma_ratio >= 1.0) ||
      !(t.r_squared_min > 0.0 && t.r_squared_min <= 1.0) || !(t.oracle_tol > 0.0))
    throw ConfigError("thresholds out of range");
  if (!(oracle.r_min > 0.0) || !(oracle.r_max > oracle.r_min) || oracle.radii < 2 || !(oracle.t_min > 0.0) ||
      !(oracle.t_max > oracle.t_min) || oracle.times < 2 || !(oracle.step > 0.0))
    throw ConfigError("oracle grid out of range");
  if (!(highfreq.t_max > 0.0) || highfreq.points < 8) throw ConfigError("highfreq grid out of range");
  parse_scale(plot.x_scale);
  parse_scale(plot.y_scale);
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

json RunConfig::to_json() const {
  json j = {{"n", params.n},
            {"alpha", params.alpha},
            {"beta", params.beta},
            {"gamma", params.gamma},
            {"P0", data.amplitude_v},
            {"Q0", data.amplitude_rho},
            {"width", data.width},
            {"t_min", grid.t_min},
            {"t_max", grid.t_max},
            {"points", grid.points},
            {"spacing", spacing_name(grid.spacing)},
            {"r_max", quadrature.r_max},
            {"base_panels", quadrature.base_panels},
            {"osc_factor", quadrature.osc_factor},
            {"angular_nodes", quadrature.angular_nodes},
            {"rel_tol", quadrature.rel_tol},
            {"max_refinements", quadrature.max_refinements},
            {"threads", quadrature.threads},
            {"slope_tol", thresholds.slope_tol},
            {"rate_tol", thresholds.rate_tol},
            {"sandwich_ratio", thresholds.sandwich_ratio},
            {"lemma_ratio", thresholds.lemma_ratio},
            {"r_squared_min", thresholds.r_squared_min},
            {"oracle_tol", thresholds.oracle_tol},
            {"oracle_r_min", oracle.r_min},
            {"oracle_r_max", oracle.r_max},
            {"oracle_radii", oracle.radii},
            {"oracle_t_min", oracle.t_min},
            {"oracle_t_max", oracle.t_max},
            {"oracle_times", oracle.times},
            {"oracle_step", oracle.step},
            {"seed", oracle.seed},
            {"highfreq_t_max", highfreq.t_max},
            {"highfreq_points", highfreq.points},
            {"plot_x_scale", plot.x_scale},
            {"plot_y_scale", plot.y_scale},
            {"svg", svg},
            {"output_dir", output_dir}};
  if (plot.has_reference_slope) j["plot_reference_slope"] = plot.reference_slope;
  return j;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  return hex64(fnv1a64(j.dump()));
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return RunConfig::from_json(j);
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"oracle-check", "profile-error", "density-profile-error",
                                                 "rate", "sandwich", "lemma31", "highfreq", "bounds", "plot"};
  return names;
}

RunResult run(const std::string& subcommand, const RunConfig& config, const std::string& plot_input) {
  bool known = false;
  for (const std::string& s : subcommand_names()) known = known || s == subcommand;
  if (!known) throw UsageError("unknown subcommand '" + subcommand + "'");
  config.validate();
  if (is_asymptotic(subcommand) && config.grid.t_min < 1.0)
    throw ConfigError("asymptotic runs need t_min >= 1");

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.output_dir + "': " + ec.message());

  const std::string hash = config.hash();
  const std::string json_path = join(config.output_dir, subcommand + ".json");
  Outputs o;
  try {
    const RealVec times = config.grid.values();
    if (subcommand == "oracle-check") o = run_oracle(config);
    else if (subcommand == "profile-error") o = run_profile_error(config, times);
    else if (subcommand == "density-profile-error") o = run_density_error(config, times);
    else if (subcommand == "rate") o = run_rate(config, times);
    else if (subcommand == "sandwich") o = run_sandwich(config, times);
    else if (subcommand == "lemma31") o = run_lemma31(config, times);
    else if (subcommand == "highfreq") o = run_highfreq(config);
    else if (subcommand == "bounds") o = run_bounds(config, times);
    else o = run_plot(config, plot_input);
  } catch (const NumericalError& e) {
    const json diag = {{"subcommand", subcommand},
                       {"pass", false},
                       {"config_hash", hash},
                       {"error", {{"kind", "numerical"}, {"message", e.what()}}}};
    write_text_file(json_path, diag.dump(2) + "\n");
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  RunResult result;
  result.pass = o.pass;
  result.verdict = {{"subcommand", subcommand},
                    {"pass", o.pass},
                    {"config_hash", hash},
                    {"thresholds", o.thresholds},
                    {"results", o.results}};

  const std::string csv_path = join(config.output_dir, subcommand + ".csv");
  write_csv(o.table, csv_path);
  result.files.push_back(csv_path);
  if (o.has_plot && (config.svg || subcommand == "plot")) {
    const std::string svg_path = join(config.output_dir, subcommand + ".svg");
    write_svg(o.series, o.plot, svg_path);
    result.files.push_back(svg_path);
  }
  write_text_file(json_path, result.verdict.dump(2) + "\n");
  result.files.push_back(json_path);
  return result;
}

}  // namespace nsprofile
