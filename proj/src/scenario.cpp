#include "optomech/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "optomech/cavity.hpp"
#include "optomech/coupling.hpp"
#include "optomech/plate.hpp"
#include "optomech/spring.hpp"
#include "optomech/tether.hpp"
#include "optomech/thermo.hpp"

namespace optomech::scenario {

namespace {

using config::RunConfig;
using Rows = std::vector<std::vector<double>>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- config to domain objects ----------------------------------------------

MaterialParams material_of(const RunConfig& c) {
  MaterialParams m = MaterialParams::silicon_nitride();
  m.youngs_modulus = c.number("material.youngs_modulus");
  m.poisson_ratio = c.number("material.poisson_ratio");
  m.density = c.number("material.density");
  m.dielectric_constant = c.number("material.dielectric_constant");
  m.heat_capacity_vol = c.number("material.heat_capacity");
  m.thermal_conductivity = c.number("material.thermal_conductivity");
  m.thermal_expansion_vol = c.number("material.thermal_expansion");
  return m;
}

DiskGeometry disk_of(const RunConfig& c, std::optional<bool> apodized = std::nullopt) {
  const double d = c.number("disk.thickness");
  const bool apo = apodized.value_or(c.text("disk.profile") == "apodized");
  return {c.number("disk.radius"), apo ? ThicknessProfile::apodized(d) : ThicknessProfile::uniform(d)};
}

OpticalParams optics_of(const RunConfig& c) { return {c.number("optics.wavelength")}; }
BathParams bath_of(const RunConfig& c) { return {c.number("bath.temperature")}; }

IntensityProfile intensity_of(const RunConfig& c) {
  const double i0 = c.number("trap.intensity");
  if (c.text("trap.kind") == "gaussian") return IntensityProfile::gaussian(i0, c.number("trap.waist"));
  return IntensityProfile::plane_wave(i0);
}

plate::RadialGrid grid_of(const RunConfig& c, int m) {
  plate::RadialGrid g;
  g.m = m;
  g.n_points = static_cast<int>(c.integer("grid.quadrature"));
  g.n_basis = static_cast<int>(c.integer("grid.basis"));
  return g;
}

tether::RigidTetherSystem tether_of(const RunConfig& c) {
  tether::RigidTetherSystem s;
  s.material = material_of(c);
  s.membrane_mass = disk_of(c).mass(s.material);
  s.tether = {c.number("tether.length"), c.number("tether.width")};
  s.omega_opt = hz_to_rad(c.number("tether.optical_frequency"));
  return s;
}

cavity::CavitySetup cavity_of(const RunConfig& c) {
  cavity::CavitySetup s;
  s.length = c.number("cavity.length");
  s.mirror_roc = c.number("cavity.mirror_roc");
  s.reflectance = c.number("cavity.reflectance");
  s.mirror_radius = c.number("cavity.mirror_radius");
  s.wavelength = c.number("optics.wavelength");
  s.material = material_of(c);
  s.n_points = static_cast<int>(c.integer("cavity.points"));
  s.aperture = c.number("cavity.aperture");
  return s;
}

cavity::SolverOptions solver_of(const RunConfig& c) {
  cavity::SolverOptions o;
  o.max_iterations = static_cast<int>(c.integer("cavity.max_iterations"));
  o.tolerance = c.number("cavity.tolerance");
  return o;
}

// ---- per-run shared state ---------------------------------------------------

struct Context {
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const cavity::CavityOperator>> operators;
  std::set<std::string> warnings;

  void warn(const std::string& w) {
    std::lock_guard<std::mutex> lock(mutex);
    warnings.insert(w);
  }

  std::shared_ptr<const cavity::CavityOperator> op(const RunConfig& c) {
    const cavity::CavitySetup s = cavity_of(c);
    s.validate();
    char key[256];
    std::snprintf(key, sizeof key, "%.17g/%.17g/%.17g/%.17g/%.17g/%.17g/%d/%.17g", s.length,
                  s.mirror_roc, s.reflectance, s.mirror_radius, s.wavelength,
                  s.material.dielectric_constant, s.n_points, s.aperture);
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = operators[key];
    if (!slot) slot = std::make_shared<const cavity::CavityOperator>(s);
    return slot;
  }
};

struct PointOut {
  Rows rows;
  std::vector<ResultTable> extra;
};

using PointFn = std::function<PointOut(const RunConfig&, Context&, std::size_t index)>;

struct Layout {
  std::vector<std::string> columns;
  PointFn point;
};

double kind_code(tether::ModeKind k) {
  switch (k) {
    case tether::ModeKind::CM: return 0.0;
    case tether::ModeKind::Tether: return 1.0;
    case tether::ModeKind::Mixed: return 2.0;
  }
  return kNaN;
}

void check_thin(const DiskGeometry& disk, Context& ctx) {
  if (disk.thin_plate_warning())
    ctx.warn("thickness above 5% of the radius; thin-plate theory is stretched");
}

std::vector<plate::ModeSolution> lowest_disk_modes(const RunConfig& c, Context& ctx) {
  const DiskGeometry disk = disk_of(c);
  check_thin(disk, ctx);
  const MaterialParams mat = material_of(c);
  const int n = static_cast<int>(c.integer("grid.modes"));
  std::vector<plate::ModeSolution> all;
  for (int m = 0; m <= c.integer("grid.max_m"); ++m) {
    const auto op = plate::assemble_plate_operator(disk, mat, optics_of(c), intensity_of(c), grid_of(c, m));
    for (auto& mode : plate::solve_modes(op, n)) all.push_back(std::move(mode));
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.omega < b.omega; });
  if (static_cast<int>(all.size()) > n) all.resize(n);
  return all;
}

plate::TunedMode tuned_cm(const RunConfig& c, const DiskGeometry& disk, double waist,
                          double frequency_hz) {
  return plate::tune_lowest_mode(disk, material_of(c), optics_of(c),
                                 IntensityProfile::gaussian(1.0, waist), grid_of(c, 0),
                                 hz_to_rad(frequency_hz));
}

// ---- scenarios --------------------------------------------------------------

Layout modes_disk() {
  return {{"m[1]", "n[1]", "frequency[Hz]", "energy_ratio[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            PointOut out;
            for (const auto& mode : lowest_disk_modes(c, ctx))
              out.rows.push_back({double(mode.m), double(mode.n), mode.frequency_hz(),
                                  plate::energy_ratio(mode)});
            return out;
          }};
}

Layout thermo_modes() {
  return {{"m[1]", "n[1]", "frequency[Hz]", "delta_w[J]", "q_factor[1]", "qf_product[Hz]",
           "qf_closed_form[Hz]", "n_osc_th[1]", "energy_ratio[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            PointOut out;
            const DiskGeometry disk = disk_of(c);
            const MaterialParams mat = material_of(c);
            const BathParams bath = bath_of(c);
            for (const auto& mode : lowest_disk_modes(c, ctx)) {
              const thermo::ThermoResult t = thermo::analyze(mode, disk, mat, bath);
              const double ratio = plate::energy_ratio(mode);
              const double closed =
                  thermo::qf_product_limit(mat, disk.thickness.max_thickness(), bath, ratio);
              out.rows.push_back({double(mode.m), double(mode.n), mode.frequency_hz(), t.delta_w,
                                  t.q_factor, t.qf_product, closed, t.n_osc_th, ratio});
            }
            return out;
          }};
}

Layout tether_spectrum() {
  return {{"mode[1]", "frequency[Hz]", "kind[1]", "tether_index[1]", "energy_ratio[1]"},
          [](const RunConfig& c, Context&, std::size_t) {
            PointOut out;
            const auto sys = tether_of(c);
            const auto modes =
                tether::solve_tether_spectrum(sys, hz_to_rad(c.number("tether.max_frequency")));
            for (std::size_t i = 0; i < modes.size(); ++i)
              out.rows.push_back({double(i), rad_to_hz(modes[i].omega), kind_code(modes[i].kind),
                                  double(modes[i].tether_index),
                                  tether::tether_energy_ratio(modes[i], sys)});
            return out;
          }};
}

Layout optical_spring() {
  return {{"kappa[Hz]", "detuning[Hz]", "input_power[W]", "omega_eff[Hz]", "gamma_eff[1/s]",
           "spring_dominated[1]", "decoherence_ratio[1]", "decoherence_asymptote[1]", "n_osc[1]",
           "input_intensity[W/m^2]", "static_intensity[W/m^2]"},
          [](const RunConfig& c, Context&, std::size_t) {
            const MaterialParams mat = material_of(c);
            spring::SpringConfig s;
            s.cavity_length = c.number("spring.cavity_length");
            s.finesse = c.number("spring.finesse");
            s.wavelength = c.number("optics.wavelength");
            s.natural_omega = hz_to_rad(c.number("spring.natural_frequency"));
            s.effective_mass = c.number("spring.effective_mass");
            if (s.effective_mass == 0.0) s.effective_mass = disk_of(c).mass(mat);
            s.coupling = c.number("spring.coupling");
            const double spot = c.number("spring.spot_radius");

            double static_i = intensity_for_trap_frequency(mat, optics_of(c),
                                                           hz_to_rad(c.number("spring.target_frequency")));
            if (c.number("spring.input_power") == 0.0) {
              const auto req = spring::required_input_power(
                  c.number("spring.target_n_osc"), hz_to_rad(c.number("spring.target_frequency")), s,
                  spot, mat);
              s.input_power = req.input_power;
              s.detuning = req.detuning;
              static_i = req.static_intensity;
            } else {
              s.input_power = c.number("spring.input_power");
              s.detuning = hz_to_rad(c.number("spring.detuning"));
              if (s.detuning == 0.0)
                s.detuning = std::numbers::pi * s.kappa() * c.number("spring.target_n_osc");
            }
            s.validate();
            const auto eff = spring::effective_frequency_and_damping(s);
            const auto dec = spring::decoherence_ratio(s);
            const double area = std::numbers::pi * spot * spot;
            PointOut out;
            out.rows.push_back({rad_to_hz(s.kappa()), rad_to_hz(s.detuning), s.input_power,
                                rad_to_hz(eff.omega_eff), eff.gamma_eff,
                                eff.spring_dominated ? 1.0 : 0.0, dec.exact, dec.asymptote,
                                dec.n_osc, s.input_power / area, static_i});
            return out;
          }};
}

Layout coupling_point() {
  return {{"frequency[Hz]", "peak_intensity[W/m^2]", "g_ratio[1]", "rim_to_center[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const DiskGeometry disk = disk_of(c);
            check_thin(disk, ctx);
            const auto pts = coupling::coupling_sweep(disk, material_of(c), optics_of(c),
                                                      c.number("coupling.waist"),
                                                      {hz_to_rad(c.number("tune.frequency"))},
                                                      grid_of(c, 0));
            PointOut out;
            for (const auto& p : pts)
              out.rows.push_back({rad_to_hz(p.omega), p.peak_intensity, p.ratio, p.rim_to_center});
            return out;
          }};
}

ResultTable field_table(const cavity::CavityModeResult& r, const std::string& name) {
  ResultTable t{name, {"r[m]", "re_e[1]", "im_e[1]", "intensity[1]"}, {}};
  const auto& radii = r.field.grid->r();
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const auto e = r.field.values[i];
    t.rows.push_back({radii[i], e.real(), e.imag(), std::norm(e)});
  }
  return t;
}

Layout cavity_mode() {
  return {{"radius[m]", "waist_ratio[1]", "finesse[1]", "round_trip_loss[1]", "kappa[Hz]",
           "resonance_offset[Hz]", "waist[m]", "mode_volume[m^3]", "i_max_radius[m]",
           "iterations[1]", "residual[1]", "degenerate[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t index) {
            const auto op = ctx.op(c);
            std::optional<DiskGeometry> disk;
            if (c.text("cavity.membrane") == "disk") disk = disk_of(c);
            const auto r = op->solve(disk, cavity::default_trial(*op), solver_of(c));
            if (r.degenerate) ctx.warn("slow cavity convergence; a competing transverse mode is close");
            const double w0 = cavity::empty_cavity_waist(op->setup());
            PointOut out;
            out.rows.push_back({c.number("disk.radius"), w0 / c.number("disk.radius"), r.finesse,
                                r.round_trip_loss, rad_to_hz(r.kappa), rad_to_hz(r.resonance_offset),
                                r.waist, r.mode_volume, r.i_max_radius, double(r.iterations),
                                r.residual, r.degenerate ? 1.0 : 0.0});
            if (c.integer("cavity.export_fields") != 0) {
              char name[32];
              std::snprintf(name, sizeof name, "field_%03zu", index);
              out.extra.push_back(field_table(r, name));
            }
            return out;
          }};
}

Layout budget() {
  return {{"radius[m]", "waist_ratio[1]", "finesse[1]", "n_th[1]", "n_sc[1]", "n_tot[1]",
           "i_max[W/m^2]", "scaling_estimate[1]", "iterations[1]", "degenerate[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const auto op = ctx.op(c);
            const auto p = cavity::coherence_budget(*op, disk_of(c), hz_to_rad(c.number("tune.frequency")),
                                                    bath_of(c), solver_of(c), grid_of(c, 0));
            if (p.degenerate) ctx.warn("slow cavity convergence; a competing transverse mode is close");
            PointOut out;
            out.rows.push_back({p.radius, p.waist_ratio, p.finesse, p.n_th, p.n_sc, p.n_tot, p.i_max,
                                p.scaling_estimate, double(p.iterations), p.degenerate ? 1.0 : 0.0});
            return out;
          }};
}

// ---- figures ----------------------------------------------------------------

struct Figure {
  std::vector<std::pair<std::string, config::Value>> preset;
  Layout layout;
};

Layout cm_ratio_vs_frequency() {
  return {{"frequency[Hz]", "peak_intensity[W/m^2]", "energy_ratio[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const DiskGeometry disk = disk_of(c);
            check_thin(disk, ctx);
            const auto t = tuned_cm(c, disk, c.number("trap.waist"), c.number("tune.frequency"));
            PointOut out;
            out.rows.push_back({t.mode.frequency_hz(), t.intensity_scale, plate::energy_ratio(t.mode)});
            return out;
          }};
}

Layout cm_ratio_vs_waist() {
  return {{"waist_ratio[1]", "frequency[Hz]", "energy_ratio[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const DiskGeometry disk = disk_of(c);
            check_thin(disk, ctx);
            double i0 = c.number("trap.intensity");
            if (!c.is_explicit("trap.intensity"))
              i0 = intensity_for_trap_frequency(material_of(c), optics_of(c),
                                                hz_to_rad(c.number("tune.frequency")));
            const double w = c.number("trap.waist");
            const auto op = plate::assemble_plate_operator(
                disk, material_of(c), optics_of(c), IntensityProfile::gaussian(i0, w), grid_of(c, 0));
            const auto modes = plate::solve_modes(op, 1);
            PointOut out;
            out.rows.push_back({w / disk.radius, modes[0].frequency_hz(), plate::energy_ratio(modes[0])});
            return out;
          }};
}

Layout tether_cm() {
  return {{"frequency[Hz]", "energy_ratio[1]", "kind[1]"},
          [](const RunConfig& c, Context&, std::size_t) {
            const auto sys = tether_of(c);
            const auto modes =
                tether::solve_tether_spectrum(sys, hz_to_rad(c.number("tether.max_frequency")));
            const auto& cm = tether::cm_branch(modes, sys);
            PointOut out;
            out.rows.push_back({rad_to_hz(cm.omega), tether::tether_energy_ratio(cm, sys), kind_code(cm.kind)});
            return out;
          }};
}

Layout composed() {
  return {{"frequency[Hz]", "tether_ratio[1]", "disk_ratio[1]", "composed_ratio[1]"},
          [](const RunConfig& c, Context&, std::size_t) {
            const auto sys = tether_of(c);
            const auto modes =
                tether::solve_tether_spectrum(sys, hz_to_rad(c.number("tether.max_frequency")));
            const auto& cm = tether::cm_branch(modes, sys);
            const double rt = tether::tether_energy_ratio(cm, sys);
            const auto t = tuned_cm(c, disk_of(c), c.number("trap.waist"), rad_to_hz(cm.omega));
            const double rd = plate::energy_ratio(t.mode);
            PointOut out;
            out.rows.push_back({rad_to_hz(cm.omega), rt, rd, tether::composed_energy_ratio(rd, rt)});
            return out;
          }};
}

Layout pinning() {
  return {{"radius[m]", "displacement[1]"},
          [](const RunConfig& c, Context&, std::size_t) {
            const double w = c.number("coupling.waist");
            const auto t = tuned_cm(c, disk_of(c), w, c.number("tune.frequency"));
            const auto p = coupling::pinning_profile(t.mode, w);
            PointOut out;
            for (std::size_t i = 0; i < p.radii.size(); ++i) out.rows.push_back({p.radii[i], p.profile[i]});
            return out;
          }};
}

Layout finesse_gap() {
  return {{"radius[m]", "waist_ratio[1]", "finesse_flat[1]", "finesse_apodized[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const auto op = ctx.op(c);
            const auto trial = cavity::default_trial(*op);
            const auto flat = op->solve(disk_of(c, false), trial, solver_of(c));
            const auto apo = op->solve(disk_of(c, true), trial, solver_of(c));
            if (flat.degenerate || apo.degenerate)
              ctx.warn("slow cavity convergence; a competing transverse mode is close");
            const double a = c.number("disk.radius");
            PointOut out;
            out.rows.push_back({a, cavity::empty_cavity_waist(op->setup()) / a, flat.finesse, apo.finesse});
            return out;
          }};
}

Layout midplane_profiles() {
  return {{"radius[m]", "intensity_a1[1]", "intensity_a2p5[1]", "intensity_empty[1]"},
          [](const RunConfig& c, Context& ctx, std::size_t) {
            const auto op = ctx.op(c);
            const auto trial = cavity::default_trial(*op);
            const double w0 = cavity::empty_cavity_waist(op->setup());
            const double d0 = c.number("disk.thickness");
            const auto solve = [&](std::optional<double> a) {
              std::optional<DiskGeometry> disk;
              if (a) disk = DiskGeometry{*a, ThicknessProfile::apodized(d0)};
              auto r = op->solve(disk, trial, solver_of(c));
              return Eigen::VectorXd(r.field.values.cwiseAbs2() / r.field.power());
            };
            const Eigen::VectorXd i1 = solve(w0), i25 = solve(2.5 * w0), ie = solve(std::nullopt);
            const double peak = ie.maxCoeff();
            const auto& r = op->grid()->r();
            PointOut out;
            for (Eigen::Index i = 0; i < r.size() && r[i] <= 4.0 * w0; ++i)
              out.rows.push_back({r[i], i1[i] / peak, i25[i] / peak, ie[i] / peak});
            return out;
          }};
}

using P = std::vector<std::pair<std::string, config::Value>>;

P sweep(const std::string& key, double a, double b, long long n, const std::string& spacing) {
  return {{"sweep.key", key}, {"sweep.start", a}, {"sweep.stop", b}, {"sweep.points", n},
          {"sweep.spacing", spacing}};
}

P join(P a, const P& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Figure figure(const std::string& id) {
  const P fig3_disk = {{"disk.radius", 10e-6}, {"disk.thickness", 50e-9}, {"disk.profile", std::string("uniform")}};
  const P fig4_disk = {{"disk.radius", 25e-6}, {"disk.thickness", 30e-9}, {"disk.profile", std::string("uniform")},
                       {"coupling.waist", 15e-6}};
  const P fig5_disk = {{"disk.thickness", 30e-9}, {"disk.profile", std::string("apodized")}};
  const P gauss = {{"trap.kind", std::string("gaussian")}, {"trap.waist", 35e-6}};

  if (id == "fig2a")
    return {join(join(fig3_disk, {{"trap.kind", std::string("plane")}, {"grid.modes", 8LL}}),
                 sweep("trap.intensity", 0.0, 5e11, 26, "linear")),
            modes_disk()};
  if (id == "fig2b")
    return {join(fig3_disk, join({{"tether.max_frequency", 5e6}},
                                 sweep("tether.optical_frequency", 0.0, 3e6, 61, "linear"))),
            tether_spectrum()};
  if (id == "fig3a")
    return {join(join(fig3_disk, gauss), sweep("tune.frequency", 1e5, 1e7, 31, "log")),
            cm_ratio_vs_frequency()};
  if (id == "fig3a-inset")
    return {join(join(join(fig3_disk, gauss), {{"tune.frequency", 1e6}}),
                 sweep("trap.waist", 2e-6, 200e-6, 31, "log")),
            cm_ratio_vs_waist()};
  if (id == "fig3b")
    return {join(fig3_disk, sweep("tether.optical_frequency", 1e4, 1e7, 61, "log")), tether_cm()};
  if (id == "fig3c" || id == "fig3c-composed")
    return {join(join(fig3_disk, gauss), sweep("tether.optical_frequency", 1e4, 1e7, 61, "log")),
            composed()};
  if (id == "fig4a")
    return {join(fig4_disk, sweep("tune.frequency", 30e3, 300e3, 10, "linear")), coupling_point()};
  if (id == "fig4b") return {join(fig4_disk, {{"tune.frequency", 300e3}}), pinning()};
  if (id == "fig5a")
    return {join(fig5_disk, sweep("disk.radius", 7.5e-6, 45e-6, 12, "log")), finesse_gap()};
  if (id == "fig5b") return {fig5_disk, midplane_profiles()};
  if (id == "fig5c")
    return {join(join(fig5_disk, {{"tune.frequency", 0.5e6}}), sweep("disk.radius", 4e-6, 25e-6, 15, "linear")),
            budget()};
  throw ConfigError("figure: unknown id '" + id + "'");
}

Layout layout_for(const std::string& scenario) {
  if (scenario == "modes-disk") return modes_disk();
  if (scenario == "thermo") return thermo_modes();
  if (scenario == "tether") return tether_spectrum();
  if (scenario == "spring") return optical_spring();
  if (scenario == "coupling") return coupling_point();
  if (scenario == "cavity") return cavity_mode();
  if (scenario == "budget") return budget();
  throw ConfigError("scenario: unknown '" + scenario + "'");
}

// ---- sweep engine -----------------------------------------------------------

[[noreturn]] void rethrow_with_context(const std::string& ctx, std::exception_ptr p) {
  try {
    std::rethrow_exception(p);
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(ctx + ": " + e.detail(), e.residual());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(ctx + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ctx + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ctx + ": " + e.what());
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* version() { return "0.1.0"; }

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw Error("row width does not match the header of " + name);
  rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_number(row[i]);
    s += "\n";
  }
  return s;
}

std::vector<double> sweep_values(const RunConfig& cfg) {
  if (cfg.text("sweep.key").empty()) return {kNaN};
  const long long n = cfg.integer("sweep.points");
  const double a = cfg.number("sweep.start"), b = cfg.number("sweep.stop");
  const bool log = cfg.text("sweep.spacing") == "log";
  std::vector<double> v;
  for (long long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    v.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
  }
  if (n > 1) v.back() = b;
  return v;
}

RunResult run_scenario(const RunConfig& input) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg = input;
  if (auto errors = cfg.validate(); !errors.empty()) throw ConfigError(errors.front());

  const std::string scen = cfg.text("scenario");
  std::string fig = cfg.text("figure");
  Layout layout;
  std::string name = scen;
  if (scen == "figure") {
    if (fig == "fig3c-composed") fig = "fig3c";
    Figure f = figure(fig);
    for (const auto& [k, v] : f.preset)
      if (!cfg.is_explicit(k)) cfg.set(k, v, false);
    if (auto errors = cfg.validate(); !errors.empty()) throw ConfigError(errors.front());
    layout = std::move(f.layout);
    name = fig;
  } else {
    layout = layout_for(scen);
  }

  const std::string key = cfg.text("sweep.key");
  const std::vector<double> values = sweep_values(cfg);
  const config::KeySpec* spec = key.empty() ? nullptr : config::find_key(key);

  std::vector<PointOut> outs(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  Context ctx;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        RunConfig local = cfg;
        if (spec) {
          if (spec->kind == config::Kind::Integer) local.set(key, std::llround(values[i]));
          else local.set(key, values[i]);
        }
        outs[i] = layout.point(local, ctx, i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = static_cast<std::size_t>(cfg.integer("run.threads"));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, values.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!failures[i]) continue;
    std::string where = "scenario " + name;
    if (spec) where += ", point " + std::to_string(i) + " (" + key + "=" + format_number(values[i]) + ")";
    rethrow_with_context(where, failures[i]);
  }

  // A layout column named after the swept key's last segment already carries the value.
  bool prepend = spec != nullptr;
  if (spec) {
    const std::string own = key.substr(key.rfind('.') + 1) + "[" + spec->unit + "]";
    prepend = std::find(layout.columns.begin(), layout.columns.end(), own) == layout.columns.end();
  }

  RunResult result;
  ResultTable main{name, {}, {}};
  if (prepend) main.columns.push_back(key + "[" + (spec->unit.empty() ? "1" : spec->unit) + "]");
  main.columns.insert(main.columns.end(), layout.columns.begin(), layout.columns.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (auto& row : outs[i].rows) {
      if (prepend) row.insert(row.begin(), values[i]);
      main.add_row(std::move(row));
    }
  }
  result.tables.push_back(std::move(main));
  for (auto& o : outs)
    for (auto& t : o.extra) result.tables.push_back(std::move(t));
  result.warnings.assign(ctx.warnings.begin(), ctx.warnings.end());

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json& m = result.meta;
  m["version"] = version();
  m["scenario"] = scen;
  m["figure"] = fig;
  m["config"] = cfg.to_json();
  m["wall_time_s"] = wall;
  m["timestamp"] = static_cast<long long>(std::time(nullptr));
  m["warnings"] = result.warnings;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : result.tables)
    tables.push_back({{"file", t.name + ".csv"}, {"columns", t.columns}, {"rows", t.rows.size()}});
  m["tables"] = tables;
  return result;
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto write = [&](const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    f << body;
    if (!f) throw Error("cannot write " + p.string());
  };
  for (const auto& t : result.tables) write(dir / (t.name + ".csv"), t.to_csv());
  write(dir / "meta.json", result.meta.dump(2) + "\n");
}

}  // namespace optomech::scenario
