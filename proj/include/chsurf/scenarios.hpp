#pragma once

// Experiment drivers: general simulation runs with per-step recording,
// the stability demonstration, isotherm sweeps, adsorption-dynamics
// runs with regime fits, and the traveling-wave convergence study.

#include "chsurf/analysis.hpp"
#include "chsurf/assembly.hpp"
#include "chsurf/config.hpp"
#include "chsurf/csv.hpp"
#include "chsurf/models.hpp"
#include "chsurf/stepper.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace chsurf {

inline SemidiscreteSystem make_system(const ScenarioConfig& cfg) {
  const ModelParams params =
      make_params(variant_from_int(cfg.variant), cfg.cn, cfg.ex, cfg.pi,
                  cfg.pe_phi, cfg.pe_psi, cfg.sigma);
  SpectralFilter filter;
  filter.cutoff = cfg.filter_cutoff;
  filter.order = cfg.filter_order;
  filter.strength = cfg.filter_strength;
  return SemidiscreteSystem(params, cfg.order, cfg.quadrature_points(), filter,
                            cfg.u);
}

namespace detail {

inline std::vector<double> parse_coeff_list(const std::string& spec,
                                            int modes) {
  std::vector<double> c;
  std::string body = spec.substr(spec.find(':') + 1);
  for (char& ch : body)
    if (ch == ',') ch = ' ';
  std::istringstream ss(body);
  double v;
  while (ss >> v) c.push_back(v);
  if (static_cast<int>(c.size()) > modes)
    throw ConfigError("initial coefficient list longer than basis");
  c.resize(modes, 0.0);
  return c;
}

}  // namespace detail

// Initial state from the config's [initial] section. "tanh" produces
// tanh((x - u t_start)/Cn); "isotherm:psi_b" the closed-form steady
// profile along tanh(x/Cn) with phi_b frozen to 1 (model 1 borrows the
// model-0 relation, the only closed expression available).
inline SpectralState initial_state(const ScenarioConfig& cfg,
                                   const SemidiscreteSystem& sys) {
  const auto& basis = sys.basis();
  const auto& nodes = sys.rule().nodes;
  SpectralState s;
  s.time = cfg.t_start;

  if (cfg.phi_init == "tanh") {
    VectorXd phi_n(nodes.size());
    const double shift = cfg.u * cfg.t_start;
    for (int q = 0; q < nodes.size(); ++q)
      phi_n[q] = std::tanh((nodes[q] - shift) / cfg.cn);
    s.phi_hat = basis.analyze(phi_n);
  } else {
    const auto c = detail::parse_coeff_list(cfg.phi_init, sys.modes());
    s.phi_hat = Eigen::Map<const VectorXd>(c.data(), c.size());
  }

  if (cfg.psi_init.rfind("uniform:", 0) == 0) {
    const double v = std::stod(cfg.psi_init.substr(8));
    s.psi_hat = VectorXd::Zero(sys.modes());
    s.psi_hat[0] = v;
  } else if (cfg.psi_init.rfind("isotherm:", 0) == 0) {
    const double psi_b = std::stod(cfg.psi_init.substr(9));
    ModelParams p = sys.params();
    if (p.variant == ModelVariant::model1) p.variant = ModelVariant::model0;
    EquilibriumProfile prof;
    prof.variant = p.variant;
    prof.phi_b = 1.0;
    prof.width = p.cn;
    VectorXd psi_n(nodes.size());
    for (int q = 0; q < nodes.size(); ++q)
      psi_n[q] = steady_psi_profile(nodes[q], p, prof, psi_b);
    s.psi_hat = basis.analyze(psi_n);
  } else {
    const auto c = detail::parse_coeff_list(cfg.psi_init, sys.modes());
    s.psi_hat = Eigen::Map<const VectorXd>(c.data(), c.size());
  }
  return s;
}

// Spec-level adapters around the flat-vector stepper core.
inline SpectralState backward_euler_solve(
    const SemidiscreteSystem& sys, const SpectralState& s, double dt,
    BackwardEulerWorkspace<SemidiscreteSystem>& ws) {
  return sys.unpack(ws.solve(sys.pack(s), dt), s.time + dt);
}

struct SeriesEntry {
  double t = 0, dt = 0;
  int accepted = 0;
  double energy = 0, mass_phi = 0, mass_psi = 0, psi0 = 0, cerr = 0;
  int newton_iters = 0;
};

struct ProfileSnapshot {
  double t = 0;
  SpectralState state;
};

struct RunRecord {
  std::vector<SeriesEntry> series;
  std::vector<ProfileSnapshot> snapshots;
  Termination termination = Termination::completed;
  bool steady = false;          // stopped on the steady-state criterion
  bool energy_clamped = false;  // psi left (0,1) somewhere during energy eval
  long accepted = 0, rejected = 0, newton_failures = 0, jacobian_builds = 0;
  SpectralState final_state;
  std::string message;
};

struct RunOptions {
  bool detect_steady = false;
  double steady_rate_tol = 1e-8;   // on the inf-norm of d/dt coefficients
  int steady_consecutive = 10;     // accepted steps in a row below tol
  std::vector<double> extra_barriers;
};

inline RunRecord run_simulation(const ScenarioConfig& cfg,
                                const RunOptions& opt = {}) {
  const SemidiscreteSystem sys = make_system(cfg);
  const SpectralState s0 = initial_state(cfg, sys);

  const Tolerances tol = Tolerances::standard(cfg.order, cfg.rtol, cfg.atol);
  NewtonConfig ncfg;
  ncfg.tolerance = cfg.atol / 20.0;
  BackwardEulerWorkspace<SemidiscreteSystem> ws(sys, ncfg);

  ControllerState ctrl;
  ctrl.dt = cfg.dt_initial;
  ctrl.dt_min = cfg.dt_min;
  ctrl.dt_max = cfg.dt_max_effective();

  std::vector<double> barriers = cfg.snapshot_times;
  barriers.insert(barriers.end(), opt.extra_barriers.begin(),
                  opt.extra_barriers.end());
  std::sort(barriers.begin(), barriers.end());
  barriers.erase(std::unique(barriers.begin(), barriers.end()),
                 barriers.end());

  const VectorXd p_origin = legendre_values(cfg.order, 0.0);
  const int m = sys.modes();

  RunRecord rec;
  VectorXd y = sys.pack(s0);
  double t = s0.time;
  long accepted_count = 0;
  int steady_run = 0;
  size_t snap_idx = 0;

  auto record_entry = [&](const StepOutcome& out) {
    SeriesEntry e;
    e.t = out.t;
    e.dt = out.dt;
    e.accepted = out.accepted ? 1 : 0;
    e.cerr = out.cerr;
    e.newton_iters = out.newton_iters;
    const SpectralState s = sys.unpack(*out.state, out.t);
    try {
      bool clamped = false;
      e.energy = sys.total_energy(s, &clamped);
      rec.energy_clamped |= clamped;
    } catch (const DomainViolation&) {
      e.energy = std::numeric_limits<double>::quiet_NaN();
    }
    const auto mass = sys.total_mass(s);
    e.mass_phi = mass[0];
    e.mass_psi = mass[1];
    e.psi0 = p_origin.dot(out.state->tail(m));
    rec.series.push_back(e);
  };

  auto observer = [&](const StepOutcome& out) -> bool {
    if (!out.accepted) {
      record_entry(out);
      return true;
    }
    ++accepted_count;
    if (accepted_count % cfg.cadence == 0 || out.t >= cfg.t_end) {
      record_entry(out);
    }
    if (snap_idx < barriers.size() &&
        std::abs(out.t - barriers[snap_idx]) <=
            1e-12 * std::max(1.0, std::abs(out.t))) {
      rec.snapshots.push_back({out.t, sys.unpack(*out.state, out.t)});
      ++snap_idx;
    }
    if (opt.detect_steady) {
      const double rate_norm =
          sys.rate_flat(*out.state).lpNorm<Eigen::Infinity>();
      steady_run = rate_norm < opt.steady_rate_tol ? steady_run + 1 : 0;
      if (steady_run >= opt.steady_consecutive) {
        rec.steady = true;
        return false;
      }
    }
    return true;
  };

  const RunStats stats = advance(sys, y, t, ctrl, cfg.t_end, tol, ws, observer,
                                 barriers.empty() ? nullptr : &barriers);
  rec.termination = stats.termination;
  rec.accepted = stats.accepted;
  rec.rejected = stats.rejected;
  rec.newton_failures = stats.newton_failures;
  rec.jacobian_builds = ws.jacobian_builds();
  rec.final_state = sys.unpack(y, t);
  rec.message = stats.message;
  // make sure the last accepted state is in the series even off-cadence
  if (stats.accepted > 0 &&
      (rec.series.empty() || rec.series.back().t < t || cfg.cadence > 1)) {
    StepOutcome out;
    out.accepted = true;
    out.t = t;
    out.dt = ctrl.dt;
    out.cerr = ctrl.cerr_prev;
    out.state = &y;
    if (rec.series.empty() || rec.series.back().t < t) record_entry(out);
  }
  return rec;
}

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::blow_up: return "blow-up";
    case Termination::solver_failure: return "solver failure";
  }
  return "unknown";
}

inline void write_series_csv(std::ostream& os, const RunRecord& rec) {
  os << "t,dt,accepted,energy,mass_phi,mass_psi,psi0,cerr,newton_iters\n";
  std::string line;
  for (const auto& e : rec.series) {
    line.clear();
    detail::csv_number(line, e.t);
    line += ',';
    detail::csv_number(line, e.dt);
    line += ',';
    line += std::to_string(e.accepted);
    line += ',';
    detail::csv_number(line, e.energy);
    line += ',';
    detail::csv_number(line, e.mass_phi);
    line += ',';
    detail::csv_number(line, e.mass_psi);
    line += ',';
    detail::csv_number(line, e.psi0);
    line += ',';
    detail::csv_number(line, e.cerr);
    line += ',';
    line += std::to_string(e.newton_iters);
    line += '\n';
    os << line;
  }
}

inline void write_profile_csv(std::ostream& os, const SemidiscreteSystem& sys,
                              const SpectralState& s) {
  write_profile_csv(os, sys.rule().nodes, sys.basis().synthesize(s.phi_hat),
                    sys.basis().synthesize(s.psi_hat));
}

// ---------------------------------------------------------------------------
// Stability demonstration: same parameters, two surfactant loadings.

struct StabilityDemo {
  RunRecord unstable;  // psi_b = 0.012: blows up
  RunRecord stable;    // psi_b = 0.006: reaches t_end with decaying energy
};

inline ScenarioConfig stability_demo_config() {
  ScenarioConfig cfg;
  cfg.variant = 0;
  cfg.cn = 1.0 / 6.0;
  cfg.ex = 1.0;
  cfg.pi = 0.1227;
  cfg.order = 128;
  cfg.t_end = 20.0;
  cfg.phi_init = "tanh";
  cfg.psi_init = "uniform:0.012";
  return cfg;
}

inline StabilityDemo run_stability_demo(ScenarioConfig base,
                                        double psi_b_unstable = 0.012,
                                        double psi_b_stable = 0.006) {
  StabilityDemo demo;
  base.psi_init = "uniform:" + detail::format_double(psi_b_unstable);
  demo.unstable = run_simulation(base);
  base.psi_init = "uniform:" + detail::format_double(psi_b_stable);
  demo.stable = run_simulation(base);
  return demo;
}

// Geometric bisection of the numerical stability boundary in psi_b.
struct StabilityBisection {
  double psi_b_stable = 0;    // largest loading seen to run stably
  double psi_b_unstable = 0;  // smallest loading seen to blow up
  std::vector<std::pair<double, bool>> trials;  // (psi_b, blew_up)
};

inline StabilityBisection bisect_stability_threshold(const ScenarioConfig& base,
                                                     double lo_stable,
                                                     double hi_unstable,
                                                     double target_ratio = 1.3,
                                                     int max_trials = 6) {
  StabilityBisection b;
  b.psi_b_stable = lo_stable;
  b.psi_b_unstable = hi_unstable;
  for (int i = 0; i < max_trials && b.psi_b_unstable / b.psi_b_stable >
                                        target_ratio; ++i) {
    const double mid = std::sqrt(b.psi_b_stable * b.psi_b_unstable);
    ScenarioConfig cfg = base;
    cfg.psi_init = "uniform:" + detail::format_double(mid);
    const RunRecord rec = run_simulation(cfg);
    const bool blew = rec.termination != Termination::completed;
    b.trials.emplace_back(mid, blew);
    (blew ? b.psi_b_unstable : b.psi_b_stable) = mid;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Isotherm sweep.

struct IsothermRow {
  int variant = 0;
  double psi_c = 0, psi_b = 0;
  double psi0_measured = std::numeric_limits<double>::quiet_NaN();
  double psi0_langmuir = 0;
  double drift_rate = 0;  // d(psi0)/dt over the tail of the run
  std::string status;     // ok | blowup | nonconverged
};

// Runs one grid point to numerical steady state and measures psi(0).
inline IsothermRow isotherm_point(int variant, double psi_c, double psi_b,
                                  ScenarioConfig cfg) {
  IsothermRow row;
  row.variant = variant;
  row.psi_c = psi_c;
  row.psi_b = psi_b;
  row.psi0_langmuir = langmuir_isotherm(psi_b, psi_c);
  cfg.variant = variant;
  cfg.pi = pi_from_adsorption_constant(psi_c, cfg.ex);
  cfg.sigma = std::numeric_limits<double>::quiet_NaN();  // model 1: 8 Pi
  cfg.phi_init = "tanh";
  cfg.psi_init = "isotherm:" + detail::format_double(psi_b);
  RunOptions opt;
  opt.detect_steady = true;
  try {
    const RunRecord rec = run_simulation(cfg, opt);
    switch (rec.termination) {
      case Termination::completed:
        row.status = "ok";
        break;
      case Termination::blow_up:
        row.status = "blowup";
        break;
      case Termination::solver_failure:
        row.status = "nonconverged";
        break;
    }
    if (row.status == "ok") {
      const auto& series = rec.series;
      row.psi0_measured = series.back().psi0;
      // drift of the measured value over the second half of the run
      std::vector<double> ts, ys;
      for (const auto& e : series)
        if (e.accepted && e.t >= 0.5 * series.back().t) {
          ts.push_back(e.t);
          ys.push_back(e.psi0);
        }
      if (ts.size() >= 3) row.drift_rate = detail::fit_line(ts, ys).slope;
    }
  } catch (const std::exception&) {
    row.status = "nonconverged";
  }
  return row;
}

// Full grid; points run independently (optionally on `jobs` threads),
// a failure at one point never affects another.
inline std::vector<IsothermRow> run_isotherm_sweep(
    int variant, const std::vector<double>& psi_cs,
    const std::vector<double>& psi_bs, const ScenarioConfig& base,
    int jobs = 1) {
  std::vector<std::pair<double, double>> grid;
  for (double pc : psi_cs)
    for (double pb : psi_bs) grid.emplace_back(pc, pb);
  std::vector<IsothermRow> rows(grid.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < grid.size(); ++i)
      rows[i] = isotherm_point(variant, grid[i].first, grid[i].second, base);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        rows[i] = isotherm_point(variant, grid[i].first, grid[i].second, base);
      }
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline void write_isotherm_csv(std::ostream& os,
                               const std::vector<IsothermRow>& rows) {
  os << "model,psi_c,psi_b,psi0_measured,psi0_langmuir,status\n";
  std::string line;
  for (const auto& r : rows) {
    line.clear();
    line += std::to_string(r.variant);
    line += ',';
    detail::csv_number(line, r.psi_c);
    line += ',';
    detail::csv_number(line, r.psi_b);
    line += ',';
    detail::csv_number(line, r.psi0_measured);
    line += ',';
    detail::csv_number(line, r.psi0_langmuir);
    line += ',';
    line += r.status;
    line += '\n';
    os << line;
  }
}

// ---------------------------------------------------------------------------
// Adsorption dynamics.

struct AdsorptionResult {
  RunRecord record;
  AdsorptionFit fit;
  double psi0_eq = 0;
  bool saturated = false;  // psi0 varied < 0.1% over the last time decade
};

// Uniform initial surfactant; records psi0(t) and fits the three
// regimes against the final saturation value.
inline AdsorptionResult run_adsorption(const ScenarioConfig& cfg) {
  AdsorptionResult res;
  res.record = run_simulation(cfg);
  if (res.record.termination != Termination::completed)
    throw NoConvergence(std::string("adsorption run ended in ") +
                        termination_name(res.record.termination));
  std::vector<double> t, psi0;
  for (const auto& e : res.record.series) {
    if (!e.accepted || e.t <= cfg.t_start) continue;
    t.push_back(e.t - cfg.t_start);
    psi0.push_back(e.psi0);
  }
  if (t.empty()) throw InsufficientData("no accepted samples");
  res.psi0_eq = psi0.back();
  double lo = res.psi0_eq, hi = res.psi0_eq;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= 0.1 * t.back()) {
      lo = std::min(lo, psi0[i]);
      hi = std::max(hi, psi0[i]);
    }
  }
  res.saturated = (hi - lo) < 1e-3 * res.psi0_eq;
  res.fit = fit_adsorption(t, psi0, res.psi0_eq);
  return res;
}

// ---------------------------------------------------------------------------
// Convergence study (traveling wave and coupled reference ladder).

struct ConvergenceRow {
  int order = 0;
  double eps = 0;
  double max_rel_l2_error = 0;
};

inline ScenarioConfig traveling_wave_config() {
  ScenarioConfig cfg;
  cfg.variant = 0;
  cfg.cn = 0.1;
  cfg.ex = 1.0;
  cfg.pi = 0.1;  // inert: psi stays identically zero
  cfg.pe_phi = 1.0;
  cfg.pe_psi = 1.0;
  cfg.u = 0.25;
  cfg.t_start = -0.5;
  cfg.t_end = 0.5;
  cfg.phi_init = "tanh";
  cfg.psi_init = "uniform:0";
  return cfg;
}

// Max-over-time relative L2 error against the exact traveling wave
// tanh((x - u t)/Cn) for one (order, eps) cell.
inline double traveling_wave_error(ScenarioConfig cfg, int order, double eps) {
  cfg.order = order;
  cfg.quadrature = 0;
  cfg.rtol = eps;
  cfg.atol = eps * 1e-2;
  const SemidiscreteSystem sys = make_system(cfg);
  const SpectralState s0 = initial_state(cfg, sys);
  const Tolerances tol = Tolerances::standard(cfg.order, cfg.rtol, cfg.atol);
  NewtonConfig ncfg;
  ncfg.tolerance = cfg.atol / 20.0;
  BackwardEulerWorkspace<SemidiscreteSystem> ws(sys, ncfg);
  ControllerState ctrl;
  ctrl.dt = cfg.dt_initial;
  ctrl.dt_min = cfg.dt_min;
  ctrl.dt_max = cfg.dt_max_effective();

  const auto& nodes = sys.rule().nodes;
  const auto& weights = sys.rule().weights;
  auto rel_error = [&](const VectorXd& y, double t) {
    const VectorXd phi_n = sys.basis().synthesize(y.head(sys.modes()));
    double num = 0, den = 0;
    for (int q = 0; q < nodes.size(); ++q) {
      const double exact = std::tanh((nodes[q] - cfg.u * t) / cfg.cn);
      num += weights[q] * (phi_n[q] - exact) * (phi_n[q] - exact);
      den += weights[q] * exact * exact;
    }
    return std::sqrt(num / den);
  };

  VectorXd y = sys.pack(s0);
  double t = s0.time;
  double worst = rel_error(y, t);
  auto observer = [&](const StepOutcome& out) {
    if (out.accepted) worst = std::max(worst, rel_error(*out.state, out.t));
    return true;
  };
  const RunStats stats =
      advance(sys, y, t, ctrl, cfg.t_end, tol, ws, observer);
  if (stats.termination != Termination::completed)
    throw NoConvergence("traveling wave run failed");
  return worst;
}

inline std::vector<ConvergenceRow> run_convergence(
    const std::vector<int>& orders, const std::vector<double>& epsilons,
    const ScenarioConfig& base) {
  std::vector<ConvergenceRow> rows;
  for (double eps : epsilons)
    for (int n : orders)
      rows.push_back({n, eps, traveling_wave_error(base, n, eps)});
  return rows;
}

// Coupled variant: compares against a self-computed high-resolution
// reference at fixed comparison instants, all solutions evaluated on a
// common dense Gauss grid.
inline std::vector<ConvergenceRow> run_convergence_coupled(
    const std::vector<int>& orders, const std::vector<double>& epsilons,
    ScenarioConfig base, int reference_order, double reference_eps,
    int comparison_points = 10) {
  base.variant = 3;
  base.pi = 0.1;
  base.ex = 1.0;
  base.pe_psi = 1.0;
  base.psi_init = "uniform:0.001";

  std::vector<double> instants;
  for (int k = 1; k <= comparison_points; ++k)
    instants.push_back(base.t_start +
                       k * (base.t_end - base.t_start) / comparison_points);

  const QuadratureRule dense = gauss_legendre_rule(512);
  auto on_dense = [&](const SpectralState& s, int order) {
    MatrixXd vals(2, dense.size());
    for (int q = 0; q < dense.size(); ++q) {
      const VectorXd p = legendre_values(order, dense.nodes[q]);
      vals(0, q) = p.dot(s.phi_hat);
      vals(1, q) = p.dot(s.psi_hat);
    }
    return vals;
  };

  auto snapshots_of = [&](ScenarioConfig cfg, int order, double eps) {
    cfg.order = order;
    cfg.quadrature = 0;
    cfg.rtol = eps;
    cfg.atol = eps * 1e-2;
    cfg.snapshot_times = instants;
    const RunRecord rec = run_simulation(cfg);
    if (rec.termination != Termination::completed ||
        rec.snapshots.size() != instants.size())
      throw NoConvergence("coupled convergence run failed");
    std::vector<MatrixXd> out;
    for (const auto& snap : rec.snapshots)
      out.push_back(on_dense(snap.state, order));
    return out;
  };

  const auto ref = snapshots_of(base, reference_order, reference_eps);
  std::vector<ConvergenceRow> rows;
  for (double eps : epsilons) {
    for (int n : orders) {
      const auto sol = snapshots_of(base, n, eps);
      double worst = 0;
      for (size_t k = 0; k < ref.size(); ++k) {
        double num = 0, den = 0;
        for (int q = 0; q < dense.size(); ++q) {
          const double w = dense.weights[q];
          for (int c = 0; c < 2; ++c) {
            const double d = sol[k](c, q) - ref[k](c, q);
            num += w * d * d;
            den += w * ref[k](c, q) * ref[k](c, q);
          }
        }
        worst = std::max(worst, std::sqrt(num / den));
      }
      rows.push_back({n, eps, worst});
    }
  }
  return rows;
}

inline void write_convergence_csv(std::ostream& os,
                                  const std::vector<ConvergenceRow>& rows) {
  os << "order,eps,max_rel_l2_error\n";
  std::string line;
  for (const auto& r : rows) {
    line.clear();
    line += std::to_string(r.order);
    line += ',';
    detail::csv_number(line, r.eps);
    line += ',';
    detail::csv_number(line, r.max_rel_l2_error);
    line += '\n';
    os << line;
  }
}

// --psib lo:hi:count[:log] sweep grids
inline std::vector<double> sweep_grid(double lo, double hi, int count,
                                      bool logarithmic) {
  if (count < 1 || !(hi > lo) || (logarithmic && !(lo > 0)))
    throw ConfigError("bad sweep grid");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    g[i] = logarithmic ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
  }
  return g;
}

inline std::vector<double> parse_sweep_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else
      cur += ch;
  }
  parts.push_back(cur);
  if (parts.size() < 3 || parts.size() > 4)
    throw ConfigError("sweep grid must be lo:hi:count[:log|lin]");
  bool logarithmic = false;
  if (parts.size() == 4) {
    if (parts[3] == "log") logarithmic = true;
    else if (parts[3] == "lin") logarithmic = false;
    else throw ConfigError("sweep grid scale must be 'log' or 'lin'");
  }
  try {
    return sweep_grid(std::stod(parts[0]), std::stod(parts[1]),
                      std::stoi(parts[2]), logarithmic);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad sweep grid '" + spec + "'");
  }
}

}  // namespace chsurf
