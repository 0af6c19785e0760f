#include "qwalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qwalk/errors.hpp"

namespace qwalk {

using nlohmann::json;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Reads one JSON object, tracking the field path for error messages.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, _] : node_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) throw ConfigError(child(key), "unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }
  const json& at(const char* key) const { return node_.at(key); }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void read(const char* key, double& out) const {
    if (has(key)) out = as_double(at(key), child(key));
  }
  void read(const char* key, int& out) const {
    if (has(key)) out = as_int(at(key), child(key));
  }
  void read(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(child(key), "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }
  void read(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) throw ConfigError(child(key), "expected a string");
    out = at(key).get<std::string>();
  }
  void read(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const auto& arr = array(key);
    out.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(as_double(arr[i], child(key) + "[" + std::to_string(i) + "]"));
  }
  void read(const char* key, std::vector<int>& out) const {
    if (!has(key)) return;
    const auto& arr = array(key);
    out.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(as_int(arr[i], child(key) + "[" + std::to_string(i) + "]"));
  }

  const json& array(const char* key) const {
    if (!at(key).is_array()) throw ConfigError(child(key), "expected an array");
    return at(key);
  }

  static double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
  }
  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
  }

 private:
  const json& node_;
  std::string path_;
};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& text, const std::string& path,
                const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (text == name) return value;
  std::string options;
  for (const auto& [name, _] : table) options += std::string(options.empty() ? "" : ", ") + name;
  throw ConfigError(path, "unknown value '" + text + "' (expected one of: " + options + ")");
}

constexpr std::pair<const char*, PositionAxis> kAxes[] = {
    {"site", PositionAxis::site},
    {"scaled_n", PositionAxis::scaled_n},
    {"scaled_ballistic", PositionAxis::scaled_ballistic}};
constexpr std::pair<const char*, HeatmapStatistic> kStatistics[] = {
    {"skewness", HeatmapStatistic::skewness},
    {"variance_over_n2", HeatmapStatistic::variance_over_n2}};
constexpr std::pair<const char*, OutputFormat> kFormats[] = {
    {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
constexpr std::pair<const char*, DecoherenceSpec::Mode> kDecoherenceModes[] = {
    {"none", DecoherenceSpec::Mode::none},
    {"broken_links", DecoherenceSpec::Mode::broken_links},
    {"random_phase", DecoherenceSpec::Mode::random_phase}};
constexpr std::pair<const char*, DiffusionScaler::Mode> kScalerModes[] = {
    {"unit", DiffusionScaler::Mode::unit},
    {"inverse_sqrt", DiffusionScaler::Mode::inverse_sqrt},
    {"table", DiffusionScaler::Mode::table}};

// JSON <-> domain pieces ---------------------------------------------------

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [re, im]");
  return {Reader::as_double(v[0], path + "[0]"), Reader::as_double(v[1], path + "[1]")};
}

json state_to_json(const NamedInitialState& s) {
  return {{"name", s.name}, {"a0", complex_to_json(s.state.a0)}, {"b0", complex_to_json(s.state.b0)}};
}

NamedInitialState state_from_json(const json& v, const std::string& path) {
  Reader r(v, path);
  r.allow({"name", "a0", "b0"});
  NamedInitialState s;
  r.read("name", s.name);
  if (!r.has("a0") || !r.has("b0")) throw ConfigError(path, "initial state needs a0 and b0");
  s.state.a0 = complex_from_json(r.at("a0"), r.child("a0"));
  s.state.b0 = complex_from_json(r.at("b0"), r.child("b0"));
  if (std::abs(s.state.norm() - 1.0) > 1e-9)
    throw ConfigError(path, "initial state must satisfy |a0|^2 + |b0|^2 = 1");
  return s;
}

json coin_to_json(const CoinAngles& c) {
  return {{"xi", c.xi()}, {"theta", c.theta()}, {"zeta", c.zeta()}};
}

CoinAngles coin_from_json(const json& v, const std::string& path) {
  Reader r(v, path);
  r.allow({"xi", "theta", "zeta"});
  double xi = 0, theta = 0, zeta = 0;
  r.read("xi", xi);
  r.read("theta", theta);
  r.read("zeta", zeta);
  return {xi, theta, zeta};
}

json axis_to_json(const GridAxis& a) { return {{"min", a.min}, {"max", a.max}, {"count", a.count}}; }

void axis_from_json(const json& v, const std::string& path, GridAxis& a) {
  Reader r(v, path);
  r.allow({"min", "max", "count"});
  r.read("min", a.min);
  r.read("max", a.max);
  r.read("count", a.count);
}

json model_to_json(const QwPriceModel& m) {
  json scaler = {{"mode", to_string(m.scaler.mode())}};
  if (m.scaler.mode() == DiffusionScaler::Mode::table) {
    json pts = json::array();
    for (const auto& [t, f] : m.scaler.points()) pts.push_back({t, f});
    scaler["table"] = pts;
  }
  return {{"mu", m.mu},
          {"sigma", m.sigma},
          {"s0", m.s0},
          {"dt_per_step", m.dt_per_step},
          {"steps_per_horizon", m.steps_per_horizon},
          {"initial_state", state_to_json({"model", m.ic})},
          {"coin", coin_to_json(m.angles)},
          {"decoherence",
           {{"mode", to_string(m.decoherence.mode)}, {"probability", m.decoherence.probability}}},
          {"scaler", scaler},
          {"lattice_scale", m.lattice_scale ? json(*m.lattice_scale) : json(nullptr)}};
}

void model_from_json(const json& v, const std::string& path, QwPriceModel& m) {
  Reader r(v, path);
  r.allow({"mu", "sigma", "s0", "dt_per_step", "steps_per_horizon", "initial_state", "coin",
           "decoherence", "scaler", "lattice_scale"});
  r.read("mu", m.mu);
  r.read("sigma", m.sigma);
  r.read("s0", m.s0);
  r.read("dt_per_step", m.dt_per_step);
  r.read("steps_per_horizon", m.steps_per_horizon);
  if (r.has("initial_state"))
    m.ic = state_from_json(r.at("initial_state"), r.child("initial_state")).state;
  if (r.has("coin")) m.angles = coin_from_json(r.at("coin"), r.child("coin"));
  if (r.has("decoherence")) {
    const std::string dpath = r.child("decoherence");
    Reader d(r.at("decoherence"), dpath);
    d.allow({"mode", "probability"});
    std::string mode = to_string(m.decoherence.mode);
    double p = m.decoherence.probability;
    d.read("mode", mode);
    d.read("probability", p);
    if (!(p >= 0 && p <= 1)) throw ConfigError(d.child("probability"), "must lie in [0, 1]");
    m.decoherence = {parse_enum(mode, d.child("mode"), kDecoherenceModes), p};
  }
  if (r.has("scaler")) {
    const std::string spath = r.child("scaler");
    Reader s(r.at("scaler"), spath);
    s.allow({"mode", "table"});
    std::string mode = to_string(m.scaler.mode());
    s.read("mode", mode);
    switch (parse_enum(mode, s.child("mode"), kScalerModes)) {
      case DiffusionScaler::Mode::unit: m.scaler = DiffusionScaler::unit(); break;
      case DiffusionScaler::Mode::inverse_sqrt: m.scaler = DiffusionScaler::inverse_sqrt(); break;
      case DiffusionScaler::Mode::table: {
        if (!s.has("table")) throw ConfigError(s.child("table"), "required for mode 'table'");
        std::vector<std::pair<double, double>> pts;
        const auto& arr = s.array("table");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const std::string p = s.child("table") + "[" + std::to_string(i) + "]";
          if (!arr[i].is_array() || arr[i].size() != 2) throw ConfigError(p, "expected [t, f]");
          pts.emplace_back(Reader::as_double(arr[i][0], p), Reader::as_double(arr[i][1], p));
        }
        try {
          m.scaler = DiffusionScaler::table(std::move(pts));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(s.child("table"), e.what());
        }
        break;
      }
    }
  }
  if (r.has("lattice_scale")) {
    double dx = 0;
    r.read("lattice_scale", dx);
    m.lattice_scale = dx;
  } else if (v.contains("lattice_scale")) {
    m.lattice_scale.reset();
  }
}

void check_probabilities(const std::vector<double>& ps, const std::string& path) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!(ps[i] >= 0 && ps[i] <= 1))
      throw ConfigError(path + "[" + std::to_string(i) + "]", "must lie in [0, 1]");
}

void check_axis(const GridAxis& a, const std::string& path, double lo, double hi) {
  if (a.count < 2) throw ConfigError(path + ".count", "must be at least 2");
  if (!(a.min <= a.max)) throw ConfigError(path, "min must not exceed max");
  if (a.min < lo) throw ConfigError(path + ".min", "must be >= " + std::to_string(lo));
  if (a.max > hi) throw ConfigError(path + ".max", "must be <= " + std::to_string(hi));
}

}  // namespace

std::vector<double> GridAxis::values() const {
  std::vector<double> v(std::size_t(std::max(count, 0)));
  for (int i = 0; i < count; ++i)
    v[std::size_t(i)] = count == 1 ? min : min + (max - min) * double(i) / double(count - 1);
  return v;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"distribution", "heatmap",         "entropy",
                                                 "decoherence",  "compare-returns", "price-path"};
  return names;
}

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");

  const NamedInitialState psi1{"psi1", InitialCoinState::symmetric()};

  ExperimentConfig c;
  c.experiment = experiment;
  c.initial_states = {psi1};
  c.coins = {CoinAngles::hadamard()};
  c.grid.eta = {0.01, kHalfPi - 0.01, 64};
  c.grid.theta = {0.01, kHalfPi - 0.01, 64};

  if (experiment == "distribution") {
    c.steps = {50, 100, 200};
  } else if (experiment == "heatmap") {
    c.steps = {100};
  } else if (experiment == "entropy") {
    c.steps = {50, 100, 200};
    c.grid.theta = {0.0, kHalfPi - 0.01, 64};
    c.phase_probabilities = {0.0};
  } else if (experiment == "decoherence") {
    c.steps = {100};
    c.link_probabilities = {0.01, 0.1, 0.3, 0.5};
  } else if (experiment == "compare-returns") {
    c.model.ic = InitialCoinState::up();
    c.model.angles = CoinAngles::hadamard();
    c.model.decoherence = DecoherenceSpec::broken_links(0.3);
    c.model.steps_per_horizon = 100;
  } else if (experiment == "price-path") {
    c.model.ic = InitialCoinState::symmetric();
    c.model.decoherence = DecoherenceSpec::none();
    c.model.steps_per_horizon = 100;
    c.total_steps = 10000;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  if (realizations < 1) throw ConfigError("realizations", "must be at least 1");
  if (steps.empty()) throw ConfigError("steps", "must not be empty");
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i] < 0 || steps[i] > 100000)
      throw ConfigError("steps[" + std::to_string(i) + "]", "must lie in [0, 100000]");
  if (initial_states.empty()) throw ConfigError("initial_states", "must not be empty");
  for (std::size_t i = 0; i < initial_states.size(); ++i)
    if (std::abs(initial_states[i].state.norm() - 1.0) > 1e-9)
      throw ConfigError("initial_states[" + std::to_string(i) + "]", "not normalized");
  if (coins.empty()) throw ConfigError("coins", "must not be empty");
  if (bin_width < 1) throw ConfigError("bin_width", "must be at least 1");
  check_probabilities(link_probabilities, "link_probabilities");
  check_probabilities(phase_probabilities, "phase_probabilities");

  if (experiment == "heatmap") {
    check_axis(grid.eta, "grid.eta", 0.0, kHalfPi);
    check_axis(grid.theta, "grid.theta", 0.0, kHalfPi);
    for (double t : grid.theta.values())
      if (std::abs(t - kHalfPi) < 1e-12)
        throw ConfigError("grid.theta.max", "theta = pi/2 is excluded (numerical instability)");
  }
  if (experiment == "entropy") {
    check_axis(grid.theta, "grid.theta", 0.0, kHalfPi);
    for (double t : grid.theta.values())
      if (std::abs(t - kHalfPi) < 1e-12)
        throw ConfigError("grid.theta.max", "theta = pi/2 is excluded (numerical instability)");
    if (phase_probabilities.empty())
      throw ConfigError("phase_probabilities", "must not be empty");
  }
  if (experiment == "decoherence" && link_probabilities.empty())
    throw ConfigError("link_probabilities", "must not be empty");
  if (experiment == "compare-returns") {
    if (!(returns.g_min < returns.g_max)) throw ConfigError("returns.g_min", "must be below g_max");
    if (returns.bins < 2) throw ConfigError("returns.bins", "must be at least 2");
    if (!(returns.gaussian_sigma > 0)) throw ConfigError("returns.gaussian.sigma", "must be > 0");
    try {
      returns.stable.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("returns.stable", e.what());
    }
  }
  if (experiment == "compare-returns" || experiment == "price-path") {
    try {
      model.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("model", e.what());
    }
    if (model.decoherence.mode != DecoherenceSpec::Mode::none &&
        (model.angles.xi() != 0 || model.angles.zeta() != 0))
      throw ConfigError("model.coin", "decoherence requires xi = zeta = 0");
  }
  if (experiment == "price-path" && total_steps < 1)
    throw ConfigError("total_steps", "must be at least 1");
}

const char* to_string(PositionAxis axis) {
  for (const auto& [name, value] : kAxes)
    if (value == axis) return name;
  return "?";
}
const char* to_string(HeatmapStatistic statistic) {
  for (const auto& [name, value] : kStatistics)
    if (value == statistic) return name;
  return "?";
}
const char* to_string(OutputFormat format) {
  for (const auto& [name, value] : kFormats)
    if (value == format) return name;
  return "?";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r(doc, "");
  r.allow({"experiment", "seed", "realizations", "steps", "initial_states", "coins", "axis",
           "bin_width", "grid", "statistic", "link_probabilities", "phase_probabilities",
           "returns", "model", "total_steps", "output"});
  if (!r.has("experiment")) throw ConfigError("experiment", "required");
  std::string experiment;
  r.read("experiment", experiment);

  ExperimentConfig c = ExperimentConfig::defaults(experiment);
  r.read("seed", c.seed);
  r.read("realizations", c.realizations);
  r.read("steps", c.steps);
  if (r.has("initial_states")) {
    const auto& arr = r.array("initial_states");
    c.initial_states.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.initial_states.push_back(state_from_json(arr[i], "initial_states[" + std::to_string(i) + "]"));
  }
  if (r.has("coins")) {
    const auto& arr = r.array("coins");
    c.coins.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.coins.push_back(coin_from_json(arr[i], "coins[" + std::to_string(i) + "]"));
  }
  if (r.has("axis")) {
    std::string s;
    r.read("axis", s);
    c.axis = parse_enum(s, "axis", kAxes);
  }
  r.read("bin_width", c.bin_width);
  if (r.has("grid")) {
    Reader g(r.at("grid"), "grid");
    g.allow({"eta", "theta"});
    if (g.has("eta")) axis_from_json(g.at("eta"), "grid.eta", c.grid.eta);
    if (g.has("theta")) axis_from_json(g.at("theta"), "grid.theta", c.grid.theta);
  }
  if (r.has("statistic")) {
    std::string s;
    r.read("statistic", s);
    c.statistic = parse_enum(s, "statistic", kStatistics);
  }
  r.read("link_probabilities", c.link_probabilities);
  r.read("phase_probabilities", c.phase_probabilities);
  if (r.has("returns")) {
    Reader ret(r.at("returns"), "returns");
    ret.allow({"g_min", "g_max", "bins", "gaussian", "stable"});
    ret.read("g_min", c.returns.g_min);
    ret.read("g_max", c.returns.g_max);
    ret.read("bins", c.returns.bins);
    if (ret.has("gaussian")) {
      Reader gs(ret.at("gaussian"), "returns.gaussian");
      gs.allow({"mu", "sigma"});
      gs.read("mu", c.returns.gaussian_mu);
      gs.read("sigma", c.returns.gaussian_sigma);
    }
    if (ret.has("stable")) {
      Reader st(ret.at("stable"), "returns.stable");
      st.allow({"alpha", "beta", "c", "mu"});
      st.read("alpha", c.returns.stable.alpha);
      st.read("beta", c.returns.stable.beta);
      st.read("c", c.returns.stable.c);
      st.read("mu", c.returns.stable.mu);
    }
  }
  if (r.has("model")) model_from_json(r.at("model"), "model", c.model);
  r.read("total_steps", c.total_steps);
  if (r.has("output")) {
    Reader o(r.at("output"), "output");
    o.allow({"dir", "format"});
    o.read("dir", c.output_dir);
    if (o.has("format")) {
      std::string s;
      o.read("format", s);
      c.format = parse_enum(s, "output.format", kFormats);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c, int indent) {
  json states = json::array();
  for (const auto& s : c.initial_states) states.push_back(state_to_json(s));
  json coins = json::array();
  for (const auto& a : c.coins) coins.push_back(coin_to_json(a));
  json doc = {
      {"experiment", c.experiment},
      {"seed", c.seed},
      {"realizations", c.realizations},
      {"steps", c.steps},
      {"initial_states", states},
      {"coins", coins},
      {"axis", to_string(c.axis)},
      {"bin_width", c.bin_width},
      {"grid", {{"eta", axis_to_json(c.grid.eta)}, {"theta", axis_to_json(c.grid.theta)}}},
      {"statistic", to_string(c.statistic)},
      {"link_probabilities", c.link_probabilities},
      {"phase_probabilities", c.phase_probabilities},
      {"returns",
       {{"g_min", c.returns.g_min},
        {"g_max", c.returns.g_max},
        {"bins", c.returns.bins},
        {"gaussian", {{"mu", c.returns.gaussian_mu}, {"sigma", c.returns.gaussian_sigma}}},
        {"stable",
         {{"alpha", c.returns.stable.alpha},
          {"beta", c.returns.stable.beta},
          {"c", c.returns.stable.c},
          {"mu", c.returns.stable.mu}}}}},
      {"model", model_to_json(c.model)},
      {"total_steps", c.total_steps},
      {"output", {{"dir", c.output_dir}, {"format", to_string(c.format)}}}};
  return doc.dump(indent);
}

}  // namespace qwalk
