#include "hpdob/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hpdob {

using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key) + ": value must be finite");
    return d;
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + key_path(item.key()) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ServoParams read_servo(const json& j, const std::string& path, const ServoParams& fallback) {
  ObjectReader r(j, path);
  ServoParams p;
  p.inertia = r.number("inertia", fallback.inertia);
  p.viscous = r.number("viscous", fallback.viscous);
  p.damping_sign = static_cast<int>(r.integer("damping_sign", fallback.damping_sign));
  r.finish();
  return p;
}

DisturbanceSpec read_disturbance(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type", "");
  DisturbanceSpec spec;
  if (type == "constant") {
    spec = disturbance::Constant{r.number("level", 0.0)};
  } else if (type == "ramp") {
    spec = disturbance::Ramp{r.number("offset", 0.0), r.number("slope", 0.0)};
  } else if (type == "poly") {
    if (!r.has("coefficients") || !r.raw("coefficients").is_array()) {
      throw ConfigError(r.key_path("coefficients") + ": expected an array of numbers");
    }
    disturbance::Poly poly;
    for (const auto& c : r.raw("coefficients")) {
      if (!c.is_number() || !std::isfinite(c.get<double>())) {
        throw ConfigError(r.key_path("coefficients") + ": expected finite numbers");
      }
      poly.coefficients.push_back(c.get<double>());
    }
    spec = poly;
  } else if (type == "sine_sum") {
    if (!r.has("terms") || !r.raw("terms").is_array()) {
      throw ConfigError(r.key_path("terms") + ": expected an array");
    }
    disturbance::SineSum sum;
    std::size_t i = 0;
    for (const auto& t : r.raw("terms")) {
      ObjectReader tr(t, r.key_path("terms") + "[" + std::to_string(i++) + "]");
      sum.terms.push_back({tr.number("amplitude", 0.0), tr.number("frequency", 0.0),
                           tr.number("phase", 0.0)});
      tr.finish();
    }
    spec = sum;
  } else if (type == "state_dependent") {
    spec = disturbance::StateDependent{r.number("extra_viscous", 0.0), r.number("coulomb", 0.0),
                                       r.number("quadratic_drag", 0.0)};
  } else if (type == "sum") {
    if (!r.has("terms") || !r.raw("terms").is_array()) {
      throw ConfigError(r.key_path("terms") + ": expected an array");
    }
    disturbance::Sum sum;
    std::size_t i = 0;
    for (const auto& t : r.raw("terms")) {
      sum.terms.push_back(read_disturbance(t, r.key_path("terms") + "[" + std::to_string(i++) + "]"));
    }
    spec = sum;
  } else {
    throw ConfigError(r.key_path("type") + ": unknown disturbance type '" + type + "'");
  }
  r.finish();
  return spec;
}

ReferenceSpec read_reference(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type", "");
  ReferenceSpec spec;
  if (type == "step") {
    spec = reference::Step{r.number("amplitude", 1.0), r.number("start", 0.0)};
  } else if (type == "sine") {
    spec = reference::Sine{r.number("amplitude", 1.0), r.number("frequency", 0.5)};
  } else if (type == "hold") {
    spec = reference::Hold{r.number("value", 0.0)};
  } else {
    throw ConfigError(r.key_path("type") + ": unknown reference type '" + type + "'");
  }
  r.finish();
  return spec;
}

CoeffMode parse_coeff_mode(const std::string& s, const std::string& path) {
  if (s == "derived") return CoeffMode::Derived;
  if (s == "paper-literal") return CoeffMode::PaperLiteral;
  throw ConfigError(path + ": expected 'derived' or 'paper-literal', got '" + s + "'");
}

json servo_to_json(const ServoParams& p) {
  return {{"inertia", p.inertia}, {"viscous", p.viscous}, {"damping_sign", p.damping_sign}};
}

json disturbance_to_json(const DisturbanceSpec& spec) {
  json out;
  std::visit(
      [&out](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, disturbance::Constant>) {
          out = {{"type", "constant"}, {"level", d.level}};
        } else if constexpr (std::is_same_v<T, disturbance::Ramp>) {
          out = {{"type", "ramp"}, {"offset", d.offset}, {"slope", d.slope}};
        } else if constexpr (std::is_same_v<T, disturbance::Poly>) {
          out = {{"type", "poly"}, {"coefficients", d.coefficients}};
        } else if constexpr (std::is_same_v<T, disturbance::SineSum>) {
          json terms = json::array();
          for (const auto& t : d.terms) {
            terms.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
          }
          out = {{"type", "sine_sum"}, {"terms", terms}};
        } else if constexpr (std::is_same_v<T, disturbance::StateDependent>) {
          out = {{"type", "state_dependent"},
                 {"extra_viscous", d.extra_viscous},
                 {"coulomb", d.coulomb},
                 {"quadratic_drag", d.quadratic_drag}};
        } else {
          json terms = json::array();
          for (const auto& t : d.terms) terms.push_back(disturbance_to_json(t));
          out = {{"type", "sum"}, {"terms", terms}};
        }
      },
      spec.value);
  return out;
}

json reference_to_json(const ReferenceSpec& spec) {
  json out;
  std::visit(
      [&out](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, reference::Step>) {
          out = {{"type", "step"}, {"amplitude", r.amplitude}, {"start", r.start}};
        } else if constexpr (std::is_same_v<T, reference::Sine>) {
          out = {{"type", "sine"}, {"amplitude", r.amplitude}, {"frequency", r.frequency}};
        } else {
          out = {{"type", "hold"}, {"value", r.value}};
        }
      },
      spec.value);
  return out;
}

}  // namespace

std::string plant_model_name(PlantModel m) {
  return m == PlantModel::ContinuousTruth ? "continuous-truth" : "pure-discrete";
}

PlantModel parse_plant_model(const std::string& name) {
  if (name == "continuous-truth") return PlantModel::ContinuousTruth;
  if (name == "pure-discrete") return PlantModel::PureDiscrete;
  throw ConfigError("plant model must be 'continuous-truth' or 'pure-discrete', got '" + name + "'");
}

ConfigFile config_from_json(const json& doc) {
  ConfigFile out;
  ScenarioConfig& s = out.scenario;
  ObjectReader root(doc, "");

  if (root.has("plant")) {
    ObjectReader plant(root.raw("plant"), "plant");
    if (plant.has("true")) s.pair.true_params = read_servo(plant.raw("true"), "plant.true", s.pair.true_params);
    s.pair.nominal_params = s.pair.true_params;
    if (plant.has("nominal")) {
      s.pair.nominal_params = read_servo(plant.raw("nominal"), "plant.nominal", s.pair.true_params);
    }
    plant.finish();
  }

  if (root.has("sampling")) {
    ObjectReader r(root.raw("sampling"), "sampling");
    s.Ts = r.number("Ts", s.Ts);
    s.duration = r.number("duration", s.duration);
    s.substeps = static_cast<int>(r.integer("substeps", s.substeps));
    try {
      s.plant_model = parse_plant_model(r.string("plant_model", plant_model_name(s.plant_model)));
    } catch (const ConfigError& e) {
      throw ConfigError("sampling.plant_model: " + std::string(e.what()));
    }
    r.finish();
  }

  if (root.has("controller")) {
    ObjectReader r(root.raw("controller"), "controller");
    s.pd.Kp = r.number("Kp", s.pd.Kp);
    s.pd.Kd = r.number("Kd", s.pd.Kd);
    const std::string m = r.string("mode", "cdob");
    const double g = r.number("g", 0.15);
    const double g_p = r.number("g_p", 0.15);
    const double g_o = r.number("g_o", 0.15);
    const int order = static_cast<int>(r.integer("order", 1));
    const CoeffMode coeff = parse_coeff_mode(r.string("coeff_mode", "derived"), "controller.coeff_mode");
    if (m == "pd") {
      s.mode = mode::PdOnly{};
    } else if (m == "cdob") {
      s.mode = mode::PdPlusCdob{g};
    } else if (m == "hpdob") {
      s.mode = mode::PdPlusHpdob{order, g_p, g_o, coeff};
    } else {
      throw ConfigError("controller.mode: expected 'pd', 'cdob' or 'hpdob', got '" + m + "'");
    }
    if (r.has("torque_limit") && !r.raw("torque_limit").is_null()) {
      s.torque_limit = r.number("torque_limit", 0.0);
    }
    r.finish();
  }

  if (root.has("disturbance")) s.disturbance = read_disturbance(root.raw("disturbance"), "disturbance");
  if (root.has("reference")) s.reference = read_reference(root.raw("reference"), "reference");

  if (root.has("initial_state")) {
    ObjectReader r(root.raw("initial_state"), "initial_state");
    s.initial_state.q = r.number("q", 0.0);
    s.initial_state.qdot = r.number("qdot", 0.0);
    r.finish();
  }

  if (root.has("noise")) {
    ObjectReader r(root.raw("noise"), "noise");
    s.noise_std.q = r.number("q_std", 0.0);
    s.noise_std.qdot = r.number("qdot_std", 0.0);
    const long long seed = r.integer("seed", 0);
    if (seed < 0) throw ConfigError("noise.seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
    r.finish();
  }

  if (root.has("metrics")) {
    ObjectReader r(root.raw("metrics"), "metrics");
    s.settle_fraction = r.number("settle_fraction", s.settle_fraction);
    r.finish();
  }

  if (root.has("output")) {
    ObjectReader r(root.raw("output"), "output");
    if (r.has("dir")) out.output_dir = r.string("dir", "");
    r.finish();
  }

  root.finish();
  s.validate();
  return out;
}

ConfigFile parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> line/column for the diagnostic.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  return config_from_json(doc);
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json config_to_json(const ConfigFile& cfg) {
  const ScenarioConfig& s = cfg.scenario;
  json controller = {{"Kp", s.pd.Kp}, {"Kd", s.pd.Kd}};
  std::visit(
      [&controller](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, mode::PdOnly>) {
          controller["mode"] = "pd";
        } else if constexpr (std::is_same_v<T, mode::PdPlusCdob>) {
          controller["mode"] = "cdob";
          controller["g"] = m.g;
        } else {
          controller["mode"] = "hpdob";
          controller["order"] = m.order;
          controller["g_p"] = m.g_p;
          controller["g_o"] = m.g_o;
          controller["coeff_mode"] = m.coeff_mode == CoeffMode::Derived ? "derived" : "paper-literal";
        }
      },
      s.mode);
  controller["torque_limit"] = s.torque_limit ? json(*s.torque_limit) : json(nullptr);

  json doc = {
      {"plant", {{"true", servo_to_json(s.pair.true_params)}, {"nominal", servo_to_json(s.pair.nominal_params)}}},
      {"sampling",
       {{"Ts", s.Ts}, {"duration", s.duration}, {"substeps", s.substeps},
        {"plant_model", plant_model_name(s.plant_model)}}},
      {"controller", controller},
      {"disturbance", disturbance_to_json(s.disturbance)},
      {"reference", reference_to_json(s.reference)},
      {"initial_state", {{"q", s.initial_state.q}, {"qdot", s.initial_state.qdot}}},
      {"noise", {{"q_std", s.noise_std.q}, {"qdot_std", s.noise_std.qdot}, {"seed", s.seed}}},
      {"metrics", {{"settle_fraction", s.settle_fraction}}},
  };
  if (cfg.output_dir) doc["output"] = {{"dir", cfg.output_dir->string()}};
  return doc;
}

}  // namespace hpdob
