#include "optomech/optomech.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "optomech/cavity.hpp"
#include "optomech/config.hpp"
#include "optomech/plate.hpp"
#include "optomech/scenario.hpp"
#include "optomech/tether.hpp"
#include "optomech/thermo.hpp"

using namespace optomech;

struct om_config {
  config::RunConfig cfg;
  std::string json;
};

struct om_result {
  scenario::RunResult run;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_error_count = 0;

om_status fail(om_status s, std::string msg) {
  g_error = std::move(msg);
  g_error_count = 1;
  return s;
}

om_status ok() {
  g_error.clear();
  g_error_count = 0;
  return OM_OK;
}

template <class F>
om_status guarded(F&& f) {
  try {
    f();
    return ok();
  } catch (const ConfigError& e) {
    return fail(OM_ERR_CONFIG, e.what());
  } catch (const InvalidInput& e) {
    return fail(OM_ERR_INVALID_INPUT, e.what());
  } catch (const NumericalFailure& e) {
    return fail(OM_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OM_ERR_INTERNAL, "unknown failure");
  }
}

const scenario::ResultTable* table_at(const om_result* r, std::size_t t) {
  if (!r || t >= r->run.tables.size()) return nullptr;
  return &r->run.tables[t];
}

}  // namespace

extern "C" {

const char* om_version(void) { return scenario::version(); }

const char* om_status_name(om_status status) {
  switch (status) {
    case OM_OK: return "ok";
    case OM_ERR_INVALID_INPUT: return "invalid input";
    case OM_ERR_CONFIG: return "configuration error";
    case OM_ERR_NUMERICAL: return "numerical failure";
    case OM_ERR_IO: return "i/o error";
    case OM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* om_last_error(void) { return g_error.c_str(); }

size_t om_config_error_count(void) { return g_error_count; }

const char* om_config_help(void) {
  static const std::string text = config::help_text();
  return text.c_str();
}

om_status om_config_parse(const char* text, const char* const* overrides, size_t n_overrides,
                          om_config** out) {
  if (!out) return fail(OM_ERR_INVALID_INPUT, "output handle pointer is null");
  *out = nullptr;
  if (n_overrides > 0 && !overrides) return fail(OM_ERR_INVALID_INPUT, "overrides pointer is null");
  std::vector<std::string> ov;
  for (size_t i = 0; i < n_overrides; ++i) {
    if (!overrides[i]) return fail(OM_ERR_INVALID_INPUT, "override entry is null");
    ov.emplace_back(overrides[i]);
  }
  om_config* handle = nullptr;
  const om_status s = guarded([&] {
    config::Validation v = config::validate_config(text ? text : "", ov);
    if (!v.ok()) {
      std::string msg;
      for (const auto& e : v.errors) msg += (msg.empty() ? "" : "\n") + e;
      throw ConfigError(msg.empty() ? "invalid configuration" : msg);
    }
    handle = new om_config{std::move(*v.config), {}};
  });
  if (s != OM_OK) {
    if (s == OM_ERR_CONFIG) {
      std::size_t lines = 1;
      for (char c : g_error) lines += c == '\n';
      g_error_count = lines;
    }
    return s;
  }
  *out = handle;
  return OM_OK;
}

om_status om_config_set(om_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(OM_ERR_INVALID_INPUT, "null argument");
  return guarded([&] {
    const config::KeySpec* spec = config::find_key(key);
    if (!spec) {
      std::string msg = std::string("unknown key '") + key + "'";
      const std::string near = config::nearest_key(key);
      if (!near.empty()) msg += "; did you mean '" + near + "'?";
      throw ConfigError(msg);
    }
    std::string err;
    auto v = config::parse_value(*spec, value, err);
    if (!v) throw ConfigError(err);
    config::RunConfig trial = config->cfg;
    trial.set(key, *v);
    const auto errors = trial.validate();
    if (!errors.empty()) throw ConfigError(errors.front());
    config->cfg = std::move(trial);
  });
}

const char* om_config_value(om_config* config, const char* key) {
  if (!config || !key) return nullptr;
  const auto it = config->cfg.values().find(key);
  if (it == config->cfg.values().end()) return nullptr;
  config->json = config::format_value(it->second);
  return config->json.c_str();
}

const char* om_config_json(om_config* config) {
  if (!config) return "";
  config->json = config->cfg.to_json().dump(2);
  return config->json.c_str();
}

void om_config_free(om_config* config) { delete config; }

om_status om_run(const om_config* config, om_result** out) {
  if (!config || !out) return fail(OM_ERR_INVALID_INPUT, "null argument");
  *out = nullptr;
  om_result* r = nullptr;
  const om_status s = guarded([&] { r = new om_result{scenario::run_scenario(config->cfg)}; });
  if (s == OM_OK) *out = r;
  return s;
}

om_status om_result_write(const om_result* result, const char* dir) {
  if (!result || !dir) return fail(OM_ERR_INVALID_INPUT, "null argument");
  try {
    scenario::write_outputs(result->run, dir);
  } catch (const std::exception& e) {
    return fail(OM_ERR_IO, e.what());
  }
  return ok();
}

size_t om_result_table_count(const om_result* result) {
  return result ? result->run.tables.size() : 0;
}

const char* om_result_table_name(const om_result* result, size_t table) {
  const auto* t = table_at(result, table);
  return t ? t->name.c_str() : nullptr;
}

size_t om_result_rows(const om_result* result, size_t table) {
  const auto* t = table_at(result, table);
  return t ? t->rows.size() : 0;
}

size_t om_result_columns(const om_result* result, size_t table) {
  const auto* t = table_at(result, table);
  return t ? t->columns.size() : 0;
}

const char* om_result_column_name(const om_result* result, size_t table, size_t column) {
  const auto* t = table_at(result, table);
  return t && column < t->columns.size() ? t->columns[column].c_str() : nullptr;
}

double om_result_value(const om_result* result, size_t table, size_t row, size_t column) {
  const auto* t = table_at(result, table);
  if (!t || row >= t->rows.size() || column >= t->columns.size())
    return std::numeric_limits<double>::quiet_NaN();
  return t->rows[row][column];
}

size_t om_result_warning_count(const om_result* result) {
  return result ? result->run.warnings.size() : 0;
}

const char* om_result_warning(const om_result* result, size_t index) {
  if (!result || index >= result->run.warnings.size()) return nullptr;
  return result->run.warnings[index].c_str();
}

void om_result_free(om_result* result) { delete result; }

om_status om_disk_frequencies(double radius, double thickness, int apodized, double i0, int m,
                              int n_modes, double* frequencies_hz) {
  if (!frequencies_hz) return fail(OM_ERR_INVALID_INPUT, "null output array");
  if (n_modes < 1) return fail(OM_ERR_INVALID_INPUT, "n_modes must be at least 1");
  if (m < 0) return fail(OM_ERR_INVALID_INPUT, "m must be nonnegative");
  return guarded([&] {
    const DiskGeometry disk{radius, apodized ? ThicknessProfile::apodized(thickness)
                                             : ThicknessProfile::uniform(thickness)};
    plate::RadialGrid grid;
    grid.m = m;
    const auto op = plate::assemble_plate_operator(disk, MaterialParams::silicon_nitride(),
                                                   OpticalParams{}, IntensityProfile::plane_wave(i0),
                                                   grid);
    const auto modes = plate::solve_modes(op, n_modes);
    if (static_cast<int>(modes.size()) < n_modes)
      throw InvalidInput("basis holds fewer modes than requested");
    for (int i = 0; i < n_modes; ++i) frequencies_hz[i] = modes[i].frequency_hz();
  });
}

om_status om_qf_limit(double thickness, double temperature, double energy_ratio, double* qf_hz) {
  if (!qf_hz) return fail(OM_ERR_INVALID_INPUT, "null output");
  return guarded([&] {
    BathParams bath{temperature};
    bath.validate();
    *qf_hz = thermo::qf_product_limit(MaterialParams::silicon_nitride(), thickness, bath, energy_ratio);
  });
}

om_status om_tether_frequencies(double disk_radius, double disk_thickness, double tether_length,
                                double tether_width, double optical_frequency_hz,
                                double max_frequency_hz, double* frequencies_hz, size_t capacity,
                                size_t* count) {
  if (!count || (capacity > 0 && !frequencies_hz)) return fail(OM_ERR_INVALID_INPUT, "null output");
  return guarded([&] {
    tether::RigidTetherSystem sys;
    sys.material = MaterialParams::silicon_nitride();
    const DiskGeometry disk{disk_radius, ThicknessProfile::uniform(disk_thickness)};
    disk.validate();
    sys.membrane_mass = disk.mass(sys.material);
    sys.tether = {tether_length, tether_width};
    sys.omega_opt = hz_to_rad(optical_frequency_hz);
    const auto modes = tether::solve_tether_spectrum(sys, hz_to_rad(max_frequency_hz));
    *count = modes.size();
    for (size_t i = 0; i < modes.size() && i < capacity; ++i)
      frequencies_hz[i] = rad_to_hz(modes[i].omega);
  });
}

om_status om_empty_cavity_waist(double length, double mirror_roc, double wavelength, double* waist) {
  if (!waist) return fail(OM_ERR_INVALID_INPUT, "null output");
  return guarded([&] {
    cavity::CavitySetup s;
    s.length = length;
    s.mirror_roc = mirror_roc;
    s.wavelength = wavelength;
    s.validate();
    *waist = cavity::empty_cavity_waist(s);
  });
}

}  // extern "C"
