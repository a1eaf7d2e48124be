#pragma once

// Backward Euler time discretization with simplified Newton iterations
// (numerical Jacobian, reused across steps), Richardson half-step error
// estimation, and H211b digital-filter step-size control with arctan
// limiters. Backward Euler is used deliberately: it is unconditionally
// gradient stable, which matters more than formal order for flows that
// sit next to ill-posed parameter regimes.
//
// The System type must provide:
//   int      flat_size() const;
//   VectorXd rate_flat(const VectorXd& y) const;
//   bool     state_ok_flat(const VectorXd& y) const;

#include "chsurf/basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chsurf {

struct NewtonDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-mode relative tolerance (scaled by diag(M^{-1/2}) so that all
// modes are measured in the same norm) plus a scalar absolute floor.
struct Tolerances {
  VectorXd rtol;
  double atol = 1e-8;

  // rtol = eps * diag(M^{-1/2}) repeated over the (phi, psi) blocks
  static Tolerances standard(int order, double eps = 1e-6,
                             double atol = 1e-8) {
    const int m = order + 1;
    Tolerances t;
    t.rtol.resize(2 * m);
    for (int i = 0; i < m; ++i) {
      const double v = eps * std::sqrt((2.0 * i + 1.0) / 2.0);
      t.rtol[i] = v;
      t.rtol[m + i] = v;
    }
    t.atol = atol;
    return t;
  }
};

struct NewtonConfig {
  int max_iterations = 12;
  double tolerance = 1e-10;        // keep < Atol/10
  int max_jacobian_reuse = 20;     // solves between forced refreshes
  double slow_contraction = 0.5;   // refresh when contraction exceeds this
  double refactor_drift = 0.2;     // refactor when dt drifts this much
};

// L(alpha) = 1 + kappa arctan((alpha-1)/kappa): smooth saturation of
// control signals around the set point 1.
inline double arctan_limiter(double alpha, double kappa) {
  return 1.0 + kappa * std::atan((alpha - 1.0) / kappa);
}

// cerr = L(||err/TOL||_inf^{-1/2}) with TOL = max(Rtol |u2|, Atol),
// kappa = 2. err = 0 maps to the limiter cap 1 + pi.
inline double control_error(const VectorXd& err, const VectorXd& u2,
                            const Tolerances& tol) {
  double worst = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double t = std::max(tol.rtol[i] * std::abs(u2[i]), tol.atol);
    worst = std::max(worst, err[i] / t);
  }
  const double pi = 3.14159265358979323846;
  if (worst <= 0.0) return 1.0 + pi;  // kappa * pi/2 with kappa = 2
  return arctan_limiter(1.0 / std::sqrt(worst), 2.0);
}

struct ControllerState {
  double cerr_prev = 1.0;  // neutral fixed point of the filter
  double rho_prev = 1.0;
  double dt = 1e-8;
  double dt_min = 1e-12;
  double dt_max = 1.0;
};

// H211b digital filter with b = 1/4 and arctan limiter (kappa = 1):
// rho = L(cerr^{1/4} cerr'^{1/4} rho'^{-1/4}).
inline double propose_ratio(double cerr, const ControllerState& ctrl) {
  const double inner = std::pow(cerr, 0.25) * std::pow(ctrl.cerr_prev, 0.25) *
                       std::pow(ctrl.rho_prev, -0.25);
  return arctan_limiter(inner, 1.0);
}

// Rejection threshold rho_min = L(F(L(M^{-1/2}), 1, 1)), computed from
// the safety factor M, the limiter constants and the controller rather
// than hardcoded. M = 2 gives =~ 0.9179.
inline double rejection_threshold(double safety_factor = 2.0) {
  const double cerr = arctan_limiter(1.0 / std::sqrt(safety_factor), 2.0);
  return arctan_limiter(std::pow(cerr, 0.25), 1.0);
}

enum class StepDecision { accept, reject };

inline StepDecision accept_or_reject(double rho, double safety_factor = 2.0) {
  return rho < rejection_threshold(safety_factor) ? StepDecision::reject
                                                  : StepDecision::accept;
}

// Solves the implicit backward Euler system G(x) = x - x0 - dt r(x) = 0
// by simplified Newton with a forward-difference Jacobian. The Jacobian
// is reused across solves and refreshed on slow or diverging iterations;
// the LU factorization of I - dt J is cached per dt (two slots, so the
// full step and the Richardson half steps do not evict each other).
template <class System>
class BackwardEulerWorkspace {
 public:
  BackwardEulerWorkspace(const System& sys, NewtonConfig cfg = {})
      : sys_(&sys), cfg_(cfg) {}

  // Throws NewtonDivergence when the iteration fails even with a fresh
  // Jacobian; the caller treats that as a step rejection.
  VectorXd solve(const VectorXd& from, double dt, int* iters_out = nullptr) {
    if (!have_jacobian_ || reuse_count_ >= cfg_.max_jacobian_reuse ||
        stale_) {
      build_jacobian(from);
    }
    ++reuse_count_;
    for (int attempt = 0;; ++attempt) {
      try {
        return iterate(from, dt, iters_out);
      } catch (const NewtonDivergence&) {
        if (attempt > 0 || jacobian_age_ == 0) throw;
        build_jacobian(from);  // retry once with a fresh Jacobian
      }
    }
  }

  void invalidate() { stale_ = true; }
  long jacobian_builds() const { return jacobian_builds_; }

 private:
  VectorXd iterate(const VectorXd& from, double dt, int* iters_out) {
    auto& lu = factorization(dt);
    VectorXd x = from;
    double prev_norm = 0.0;
    for (int k = 0; k < cfg_.max_iterations; ++k) {
      const VectorXd g = x - from - dt * sys_->rate_flat(x);
      if (!g.allFinite()) break;
      const VectorXd delta = lu.solve(-g);
      if (!delta.allFinite()) break;
      x += delta;
      const double nd = delta.template lpNorm<Eigen::Infinity>();
      if (nd <= cfg_.tolerance) {
        if (iters_out) *iters_out += k + 1;
        if (k + 1 >= 6) stale_ = true;  // converged but slowly
        return x;
      }
      if (k > 0) {
        const double theta = nd / prev_norm;
        if (theta >= 1.0) break;  // diverging (Hairer-Wanner test)
        // estimated remaining error theta/(1-theta) ||delta||
        if (theta / (1.0 - theta) * nd <= cfg_.tolerance) {
          if (iters_out) *iters_out += k + 1;
          if (theta > cfg_.slow_contraction) stale_ = true;
          return x;
        }
      }
      prev_norm = nd;
    }
    throw NewtonDivergence("Newton iteration failed at dt = " +
                           std::to_string(dt));
  }

  void build_jacobian(const VectorXd& at) {
    const int m = sys_->flat_size();
    if (jac_.rows() != m) jac_.resize(m, m);
    const VectorXd r0 = sys_->rate_flat(at);
    if (!r0.allFinite())
      throw NewtonDivergence("rate not finite at Jacobian base point");
    VectorXd x = at;
    const double sqrt_eps = std::sqrt(2.220446049250313e-16);
    for (int j = 0; j < m; ++j) {
      const double h = sqrt_eps * (1.0 + std::abs(at[j]));
      x[j] = at[j] + h;
      jac_.col(j) = (sys_->rate_flat(x) - r0) / h;
      x[j] = at[j];
    }
    have_jacobian_ = true;
    stale_ = false;
    reuse_count_ = 0;
    ++jacobian_age_;
    ++jacobian_builds_;
    slots_[0].valid = slots_[1].valid = false;
  }

  struct Slot {
    Eigen::PartialPivLU<MatrixXd> lu;
    double dt = -1.0;
    bool valid = false;
    long last_used = 0;
  };

  Eigen::PartialPivLU<MatrixXd>& factorization(double dt) {
    ++clock_;
    for (Slot& s : slots_) {
      if (s.valid && std::abs(dt / s.dt - 1.0) <= cfg_.refactor_drift) {
        s.last_used = clock_;
        return s.lu;
      }
    }
    Slot& victim =
        (!slots_[0].valid || slots_[0].last_used <= slots_[1].last_used)
            ? slots_[0]
            : slots_[1];
    const int m = sys_->flat_size();
    MatrixXd iteration_matrix = -dt * jac_;
    iteration_matrix.diagonal().array() += 1.0;
    victim.lu.compute(iteration_matrix);
    victim.dt = dt;
    victim.valid = true;
    victim.last_used = clock_;
    return victim.lu;
  }

  const System* sys_;
  NewtonConfig cfg_;
  MatrixXd jac_;
  bool have_jacobian_ = false;
  bool stale_ = false;
  int reuse_count_ = 0;
  long jacobian_age_ = 0;
  long jacobian_builds_ = 0;
  long clock_ = 0;
  Slot slots_[2];
};

struct RichardsonEstimate {
  VectorXd u1;   // one step of dt
  VectorXd u2;   // two steps of dt/2
  VectorXd err;  // |u1 - u2| / 3 componentwise
  int newton_iters = 0;
};

// u1 = T_dt y, u2 = T_{dt/2}^2 y, err = |u1 - u2|/3. The workspace
// carries the system whose backward Euler map is being applied.
template <class System>
RichardsonEstimate error_estimate(const VectorXd& y, double dt,
                                  BackwardEulerWorkspace<System>& ws) {
  RichardsonEstimate est;
  est.u1 = ws.solve(y, dt, &est.newton_iters);
  const VectorXd half = ws.solve(y, dt / 2.0, &est.newton_iters);
  est.u2 = ws.solve(half, dt / 2.0, &est.newton_iters);
  if (!est.u1.allFinite() || !est.u2.allFinite())
    throw NewtonDivergence("non-finite step result");
  est.err = (est.u1 - est.u2).cwiseAbs() / 3.0;
  return est;
}

enum class Termination {
  completed,       // reached t_end (or an observer asked to stop)
  blow_up,         // state left the admissible set or dt collapsed
  solver_failure,  // Newton kept failing at dt_min
};

struct StepOutcome {
  bool accepted = false;
  bool blew_up = false;
  double t = 0.0;   // end time of the attempted step
  double dt = 0.0;  // step size attempted
  double cerr = 1.0;
  double rho = 1.0;
  int newton_iters = 0;
  const VectorXd* state = nullptr;  // candidate state (accepted with u2)
};

struct RunStats {
  long accepted = 0;
  long rejected = 0;
  long newton_failures = 0;
  Termination termination = Termination::completed;
  bool stopped_by_observer = false;
  std::string message;
};

// Main loop: advances y from t to t_end. The observer is called on
// every attempted step (accepted or rho-rejected); returning false
// stops the run early (termination still reads `completed`). Accepted
// steps advance with u2, the more accurate of the Richardson pair.
// `barriers`, when given, is a sorted list of times the integrator must
// hit exactly (snapshot and comparison instants).
template <class System, class Observer>
RunStats advance(const System& sys, VectorXd& y, double& t,
                 ControllerState& ctrl, double t_end, const Tolerances& tol,
                 BackwardEulerWorkspace<System>& ws, Observer&& observer,
                 const std::vector<double>* barriers = nullptr) {
  RunStats stats;
  const double rho_min = rejection_threshold();
  int consecutive_failures = 0;
  size_t next_barrier = 0;
  while (t < t_end) {
    double horizon = t_end;
    if (barriers) {
      const double slack = 1e-13 * std::max(1.0, std::abs(t));
      while (next_barrier < barriers->size() &&
             (*barriers)[next_barrier] <= t + slack)
        ++next_barrier;
      if (next_barrier < barriers->size())
        horizon = std::min(horizon, (*barriers)[next_barrier]);
    }
    const double dt = std::min(ctrl.dt, horizon - t);
    RichardsonEstimate est;
    try {
      est = error_estimate(y, dt, ws);
    } catch (const NewtonDivergence& e) {
      ++stats.newton_failures;
      if (ctrl.dt <= ctrl.dt_min * 1.000001 && ++consecutive_failures > 3) {
        stats.termination = Termination::solver_failure;
        stats.message = e.what();
        return stats;
      }
      ctrl.dt = std::max(ctrl.dt / 2.0, ctrl.dt_min);
      continue;
    }
    consecutive_failures = 0;

    const double cerr = control_error(est.err, est.u2, tol);
    const double rho = propose_ratio(cerr, ctrl);
    ctrl.cerr_prev = cerr;
    ctrl.rho_prev = rho;
    const bool accepted = rho >= rho_min;

    StepOutcome out;
    out.accepted = accepted;
    out.t = t + dt;
    out.dt = dt;
    out.cerr = cerr;
    out.rho = rho;
    out.newton_iters = est.newton_iters;
    out.state = &est.u2;

    if (accepted) {
      if (!sys.state_ok_flat(est.u2)) {
        out.accepted = false;
        out.blew_up = true;
        observer(static_cast<const StepOutcome&>(out));
        stats.termination = Termination::blow_up;
        stats.message = "state left the admissible set";
        return stats;
      }
      y = est.u2;
      t += dt;
      ++stats.accepted;
    } else {
      ++stats.rejected;
      if (dt <= ctrl.dt_min * 1.000001) {
        out.blew_up = true;
        observer(static_cast<const StepOutcome&>(out));
        stats.termination = Termination::blow_up;
        stats.message = "time step driven below dt_min";
        return stats;
      }
    }
    ctrl.dt = std::min(std::max(rho * dt, ctrl.dt_min), ctrl.dt_max);
    if (!observer(static_cast<const StepOutcome&>(out))) {
      stats.stopped_by_observer = true;
      return stats;
    }
  }
  return stats;
}

}  // namespace chsurf
