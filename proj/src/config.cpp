#include "optomech/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "optomech/core.hpp"

namespace optomech::config {

namespace {

KeySpec num(std::string key, double v, std::string unit, std::string help, Bound b = Bound::None) {
  return {std::move(key), Kind::Number, v, std::move(unit), std::move(help), b, {}};
}

KeySpec integer(std::string key, long long v, std::string help, Bound b = Bound::NonNegative) {
  return {std::move(key), Kind::Integer, v, "1", std::move(help), b, {}};
}

KeySpec text(std::string key, std::string v, std::string help, std::vector<std::string> choices) {
  return {std::move(key), Kind::Text, std::move(v), "", std::move(help), Bound::None, std::move(choices)};
}

std::vector<KeySpec> build_schema() {
  const MaterialParams sin = MaterialParams::silicon_nitride();
  const Bound P = Bound::Positive, NN = Bound::NonNegative;
  return {
      text("scenario", "modes-disk", "what to compute",
           {"modes-disk", "thermo", "tether", "spring", "coupling", "cavity", "budget", "figure"}),
      text("figure", "none", "figure preset when scenario is figure",
           {"none", "fig2a", "fig2b", "fig3a", "fig3a-inset", "fig3b", "fig3c", "fig3c-composed",
            "fig4a", "fig4b", "fig5a", "fig5b", "fig5c"}),
      text("output.directory", "optomech-out", "directory for CSV and meta.json", {}),
      integer("run.threads", 0, "sweep workers, 0 uses every core"),

      text("material.preset", "SiN", "base material; the fields below override it", {"SiN"}),
      num("material.youngs_modulus", sin.youngs_modulus, "Pa", "Young's modulus E", P),
      num("material.poisson_ratio", sin.poisson_ratio, "1", "Poisson ratio, below 0.5", P),
      num("material.density", sin.density, "kg/m^3", "mass density", P),
      num("material.dielectric_constant", sin.dielectric_constant, "1", "relative permittivity, above 1", P),
      num("material.heat_capacity", sin.heat_capacity_vol, "J/(m^3 K)", "heat capacity per volume", P),
      num("material.thermal_conductivity", sin.thermal_conductivity, "W/(m K)", "thermal conductivity", P),
      num("material.thermal_expansion", sin.thermal_expansion_vol, "1/K", "volumetric expansion coefficient", NN),

      num("disk.radius", 10e-6, "m", "disk radius a", P),
      num("disk.thickness", 50e-9, "m", "uniform thickness d, or peak d0 when apodized", P),
      text("disk.profile", "uniform", "thickness law", {"uniform", "apodized"}),

      num("optics.wavelength", 1e-6, "m", "trap and cavity wavelength", P),
      text("trap.kind", "plane", "transverse trap profile", {"plane", "gaussian"}),
      num("trap.intensity", 0.0, "W/m^2", "peak standing-wave intensity", NN),
      num("trap.waist", 35e-6, "m", "Gaussian trap waist w", P),
      num("tune.frequency", 1e6, "Hz", "CM frequency the trap is tuned to (coupling, budget, fig3a)", P),
      num("bath.temperature", 300.0, "K", "bath temperature", P),

      integer("grid.quadrature", 96, "radial quadrature nodes, at least 8", P),
      integer("grid.basis", 0, "Ritz functions, 0 selects quadrature/3"),
      integer("grid.modes", 8, "plate modes reported", P),
      integer("grid.max_m", 4, "highest azimuthal index searched"),

      num("tether.length", 50e-6, "m", "tether length L", P),
      num("tether.width", 50e-9, "m", "square tether width b", P),
      num("tether.optical_frequency", 1e6, "Hz", "optical restoring frequency on the membrane", NN),
      num("tether.max_frequency", 20e6, "Hz", "upper end of the tether spectrum", P),

      num("spring.cavity_length", 1e-2, "m", "driven cavity length", P),
      num("spring.finesse", 1e5, "1", "cavity finesse", P),
      num("spring.detuning", 0.0, "Hz", "drive detuning, 0 selects pi kappa N for the target", Bound::None),
      num("spring.input_power", 0.0, "W", "input power, 0 solves for the target", NN),
      num("spring.natural_frequency", 1e3, "Hz", "bare mechanical frequency", P),
      num("spring.effective_mass", 0.0, "kg", "motional mass, 0 uses the disk mass", NN),
      num("spring.coupling", 0.0, "1/(s m)", "frequency pull per displacement, 0 selects omega_L/L", NN),
      num("spring.target_n_osc", 1e3, "1", "coherent oscillations to reach", P),
      num("spring.target_frequency", 1e6, "Hz", "effective frequency to reach", P),
      num("spring.spot_radius", 10e-6, "m", "spot radius for the intensity figure", P),

      num("coupling.waist", 15e-6, "m", "readout beam waist", P),

      num("cavity.length", 1.99e-2, "m", "mirror separation", P),
      num("cavity.mirror_roc", 1e-2, "m", "mirror radius of curvature", P),
      num("cavity.reflectance", 1.0, "1", "mirror power reflectance", Bound::Fraction),
      num("cavity.mirror_radius", 0.95e-3, "m", "mirror aperture radius", P),
      integer("cavity.points", 1024, "Hankel samples", P),
      num("cavity.aperture", 0.0, "m", "Hankel grid radius, 0 selects 1.5 mirror radii", NN),
      text("cavity.membrane", "disk", "disk at the cavity centre or empty cavity", {"disk", "none"}),
      integer("cavity.max_iterations", 2000, "solver iteration cap", P),
      num("cavity.tolerance", 1e-8, "1", "eigenvalue convergence threshold", P),
      integer("cavity.export_fields", 0, "1 writes the disk-plane field of every point"),

      text("sweep.key", "", "numeric key to sweep, empty for a single point", {}),
      num("sweep.start", 0.0, "", "first sweep value"),
      num("sweep.stop", 0.0, "", "last sweep value"),
      integer("sweep.points", 1, "sweep points", P),
      text("sweep.spacing", "linear", "point spacing", {"linear", "log"}),
  };
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string leaf(const std::string& key) {
  const auto dot = key.rfind('.');
  return dot == std::string::npos ? key : key.substr(dot + 1);
}

std::string unknown_key_message(const std::string& key) {
  std::string msg = "unknown key '" + key + "'";
  const std::string near = nearest_key(key);
  if (!near.empty()) msg += "; did you mean '" + near + "'?";
  return msg;
}

void flatten(const YAML::Node& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out, std::vector<std::string>& errors) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const std::string k = kv.first.as<std::string>();
      flatten(kv.second, prefix.empty() ? k : prefix + "." + k, out, errors);
    }
  } else if (node.IsScalar()) {
    out.emplace_back(prefix, node.Scalar());
  } else if (node.IsNull()) {
    errors.push_back(prefix + ": value is missing");
  } else {
    errors.push_back(prefix + ": lists are not accepted, use sweep.* for ranges");
  }
}

std::string describe_choices(const std::vector<std::string>& c) {
  std::string s;
  for (const auto& x : c) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = build_schema();
  return s;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& s : schema())
    if (s.key == key) return &s;
  return nullptr;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_d = 0;
  for (const auto& s : schema()) {
    const std::size_t d = std::min(levenshtein(key, s.key), levenshtein(leaf(key), leaf(s.key)));
    if (best.empty() || d < best_d) {
      best = s.key;
      best_d = d;
    }
  }
  return best_d <= std::max<std::size_t>(3, key.size() / 3) ? best : std::string();
}

std::string format_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

std::string help_text() {
  std::ostringstream os;
  os << "Configuration keys (YAML or JSON, nested maps or dotted names; --set key=value overrides):\n";
  for (const auto& s : schema()) {
    std::string def = format_value(s.fallback);
    if (s.kind == Kind::Text) def = def.empty() ? "\"\"" : def;
    os << "  " << s.key << " = " << def;
    if (!s.unit.empty() && s.unit != "1") os << " [" << s.unit << "]";
    os << "\n      " << s.help;
    if (!s.choices.empty()) os << " {" << describe_choices(s.choices) << "}";
    os << "\n";
  }
  return os.str();
}

std::optional<Value> parse_value(const KeySpec& spec, const std::string& raw, std::string& error) {
  if (spec.kind == Kind::Text) {
    if (!spec.choices.empty() &&
        std::find(spec.choices.begin(), spec.choices.end(), raw) == spec.choices.end()) {
      error = spec.key + ": '" + raw + "' is not one of {" + describe_choices(spec.choices) + "}";
      return std::nullopt;
    }
    return Value(raw);
  }
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(raw.c_str(), &end);
  if (raw.empty() || end != raw.c_str() + raw.size() || errno == ERANGE || !std::isfinite(d)) {
    error = spec.key + ": '" + raw + "' is not a finite number";
    return std::nullopt;
  }
  if (spec.kind == Kind::Integer) {
    if (d != std::floor(d) || std::abs(d) > 1e15) {
      error = spec.key + ": '" + raw + "' is not an integer";
      return std::nullopt;
    }
    return Value(static_cast<long long>(d));
  }
  return Value(d);
}

RunConfig::RunConfig() {
  for (const auto& s : schema()) values_[s.key] = s.fallback;
}

const Value& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<long long>(&v)) return static_cast<double>(*i);
  throw ConfigError(key + " is not numeric");
}

long long RunConfig::integer(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* i = std::get_if<long long>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return std::llround(*d);
  throw ConfigError(key + " is not numeric");
}

const std::string& RunConfig::text(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(key + " is not text");
}

void RunConfig::set(const std::string& key, Value v, bool explicit_value) {
  values_[key] = std::move(v);
  if (explicit_value) explicit_.insert(key);
}

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errors;
  for (const auto& s : schema()) {
    if (s.kind == Kind::Text) continue;
    const double v = number(s.key);
    switch (s.bound) {
      case Bound::Positive:
        if (!(v > 0.0)) errors.push_back(s.key + ": must be positive (got " + format_value(get(s.key)) + ")");
        break;
      case Bound::NonNegative:
        if (!(v >= 0.0)) errors.push_back(s.key + ": must be nonnegative (got " + format_value(get(s.key)) + ")");
        break;
      case Bound::Fraction:
        if (!(v > 0.0 && v <= 1.0)) errors.push_back(s.key + ": must lie in (0, 1] (got " + format_value(get(s.key)) + ")");
        break;
      case Bound::None:
        break;
    }
  }

  if (number("material.poisson_ratio") >= 0.5) errors.push_back("material.poisson_ratio: must be below 0.5");
  if (number("material.dielectric_constant") <= 1.0)
    errors.push_back("material.dielectric_constant: must exceed 1");
  if (integer("grid.quadrature") < 8) errors.push_back("grid.quadrature: needs at least 8 nodes");
  if (integer("grid.basis") > integer("grid.quadrature"))
    errors.push_back("grid.basis: cannot exceed grid.quadrature");
  if (integer("cavity.points") < 8) errors.push_back("cavity.points: needs at least 8 samples");
  if (number("cavity.aperture") > 0.0 && number("cavity.aperture") < number("cavity.mirror_radius"))
    errors.push_back("cavity.aperture: must cover cavity.mirror_radius");
  if (number("cavity.mirror_roc") <= 0.5 * number("cavity.length"))
    errors.push_back("cavity.mirror_roc: must exceed half of cavity.length for a stable resonator");

  const std::string& scen = text("scenario");
  const std::string& fig = text("figure");
  if (scen == "figure" && fig == "none") errors.push_back("figure: required when scenario is figure");
  if (scen != "figure" && fig != "none") errors.push_back("figure: only used when scenario is figure");

  const std::string& key = text("sweep.key");
  const long long points = integer("sweep.points");
  if (key.empty()) {
    if (points > 1 && text("scenario") != "figure") errors.push_back("sweep.points: set sweep.key to sweep");
  } else {
    const KeySpec* spec = find_key(key);
    if (!spec) {
      errors.push_back("sweep.key: " + unknown_key_message(key));
    } else if (spec->kind == Kind::Text || key.rfind("sweep.", 0) == 0) {
      errors.push_back("sweep.key: '" + key + "' is not a sweepable number");
    }
    const double a = number("sweep.start"), b = number("sweep.stop");
    if (points > 1 && a == b) errors.push_back("sweep.stop: sweep range is empty (start equals stop)");
    if (text("sweep.spacing") == "log" && !(a > 0.0 && b > 0.0))
      errors.push_back("sweep.start: log spacing needs positive start and stop");
  }
  return errors;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) {
    if (const auto* d = std::get_if<double>(&v)) j[k] = *d;
    else if (const auto* i = std::get_if<long long>(&v)) j[k] = *i;
    else j[k] = std::get<std::string>(v);
  }
  return j;
}

Validation validate_config(const std::string& text_in, const std::vector<std::string>& overrides) {
  Validation out;
  std::vector<std::pair<std::string, std::string>> entries;

  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::Exception& e) {
    out.errors.push_back(std::string("config does not parse: ") + e.what());
    return out;
  }
  if (root.IsMap()) flatten(root, "", entries, out.errors);
  else if (!root.IsNull()) out.errors.push_back("config must be a map of keys");

  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      out.errors.push_back("override '" + o + "' is not key=value");
      continue;
    }
    entries.emplace_back(o.substr(0, eq), o.substr(eq + 1));
  }

  RunConfig cfg;
  for (const auto& [key, raw] : entries) {
    const KeySpec* spec = find_key(key);
    if (!spec) {
      out.errors.push_back(unknown_key_message(key));
      continue;
    }
    std::string err;
    if (auto v = parse_value(*spec, raw, err)) cfg.set(key, *v);
    else out.errors.push_back(err);
  }
  if (cfg.is_explicit("figure") && !cfg.is_explicit("scenario")) cfg.set("scenario", std::string("figure"));
  for (auto& e : cfg.validate()) out.errors.push_back(std::move(e));
  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

}  // namespace optomech::config
