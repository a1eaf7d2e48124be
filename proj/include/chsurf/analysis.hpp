#pragma once

// Closed-form theory: planar equilibrium profiles, Langmuir/Frumkin
// adsorption isotherms, the frozen-coefficient ill-posedness predicate,
// and least-squares fits of the three adsorption-dynamics regimes
// (linear transient, sqrt(t) diffusion-controlled rise, t^{-1/2}
// approach to saturation).

#include "chsurf/models.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chsurf {

struct SupersaturatedBulk : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Planar equilibrium phi(x) = phi_b tanh(x / width) at constant bulk
// surfactant fraction psi_b.
struct EquilibriumProfile {
  ModelVariant variant = ModelVariant::model0;
  double phi_b = 1.0;
  double width = 1.0;

  double operator()(double x) const { return phi_b * std::tanh(x / width); }
  double derivative(double x) const {
    const double c = std::cosh(x / width);
    return phi_b / (width * c * c);
  }
};

// phi_b^2 and the effective width per variant:
//   models 0/1: phi_b^2 = 1 - psi_b/(2 Ex),        width = Cn sqrt(1-psi_b)/phi_b
//   model 2:    phi_b^2 = 1 - (1+1/Ex) psi_b/2,    width = Cn/phi_b
//   model 3:    phi_b^2 = (1-(1+1/(2Ex)) psi_b)/(1-psi_b), width as models 0/1
inline EquilibriumProfile equilibrium_profile(const ModelParams& p,
                                              double psi_b) {
  if (psi_b < 0.0 || psi_b >= 1.0)
    throw std::invalid_argument("psi_b must lie in [0,1)");
  double phi_b2 = 0.0;
  switch (p.variant) {
    case ModelVariant::model0:
    case ModelVariant::model1:
      phi_b2 = 1.0 - psi_b / (2.0 * p.ex);
      break;
    case ModelVariant::model2:
      phi_b2 = 1.0 - (1.0 + 1.0 / p.ex) * psi_b / 2.0;
      break;
    case ModelVariant::model3:
      phi_b2 = (1.0 - (1.0 + 1.0 / (2.0 * p.ex)) * psi_b) / (1.0 - psi_b);
      break;
  }
  if (!(phi_b2 > 0.0))
    throw SupersaturatedBulk("no planar equilibrium: phi_b^2 <= 0");
  EquilibriumProfile prof;
  prof.variant = p.variant;
  prof.phi_b = std::sqrt(phi_b2);
  prof.width = (p.variant == ModelVariant::model2)
                   ? p.cn / prof.phi_b
                   : p.cn * std::sqrt(1.0 - psi_b) / prof.phi_b;
  return prof;
}

// Cn * dphi/dx(0); equals phi_b^2 for model 2 and phi_b^2/sqrt(1-psi_b)
// otherwise. At Ex = 1 this deviates from 1 only at O(psi_b^2): the
// interface sharpness is independent of the surfactant loading.
inline double interface_slope(const ModelParams& p, double psi_b) {
  const EquilibriumProfile prof = equilibrium_profile(p, psi_b);
  return p.cn * prof.phi_b / prof.width;
}

// Langmuir adsorption constant: Pi log psi_c = -(1 + 1/Ex)/4.
inline double adsorption_constant(double pi, double ex) {
  return std::exp(-(1.0 + 1.0 / ex) / (4.0 * pi));
}

// Inverse relation, used to select Pi for a target psi_c.
inline double pi_from_adsorption_constant(double psi_c, double ex) {
  if (!(psi_c > 0.0) || psi_c >= 1.0)
    throw std::invalid_argument("psi_c must lie in (0,1)");
  return (1.0 + 1.0 / ex) / (-4.0 * std::log(psi_c));
}

// Interface loading psi_0 = psi_b / (psi_b + psi_c (1 - psi_b)).
inline double langmuir_isotherm(double psi_b, double psi_c) {
  return psi_b / (psi_b + psi_c * (1.0 - psi_b));
}

// Steady-state surfactant profile psi(x) = psi_b/(psi_b + psi_c(x)(1-psi_b))
// with Pi log psi_c(x) = (B - B_b) - (phi_b^2 - phi^2)/(4 Ex); the
// difference B - B_b is the variant's non-logarithmic, non-Fex part of
// mu_psi evaluated along the frozen phi profile. Model 1 has no closed
// form (the relation would involve lap(psi) itself).
inline double steady_psi_profile(double x, const ModelParams& p,
                                 const EquilibriumProfile& prof,
                                 double psi_b) {
  if (p.variant == ModelVariant::model1)
    throw UnsupportedVariant("model 1 has no closed-form steady profile");
  const double phi = prof(x);
  const double phi2 = phi * phi;
  const double phib2 = prof.phi_b * prof.phi_b;
  double b_diff = 0.0;
  switch (p.variant) {
    case ModelVariant::model0: {
      const double dphi = prof.derivative(x);
      b_diff = -p.cn * p.cn / 4.0 * dphi * dphi;
      break;
    }
    case ModelVariant::model2:
      b_diff = -(phib2 - phi2) / 4.0;
      break;
    case ModelVariant::model3:
      b_diff = -(phib2 - phi2) * (2.0 - phib2 - phi2) / 4.0;
      break;
    case ModelVariant::model1:
      break;  // unreachable
  }
  const double log_psic = (b_diff - (phib2 - phi2) / (4.0 * p.ex)) / p.pi;
  const double psi_c_x = std::exp(log_psic);
  return psi_b / (psi_b + psi_c_x * (1.0 - psi_b));
}

// Frumkin isotherm (model 1, R = 1): the fixed point of
// psi_0 = psi_b / (psi_b + psi_c exp(-alpha psi_0)(1 - psi_b)),
// alpha = sigma/(2 Pi). Solved by bisection to 1e-12; alpha = 0
// reduces exactly to the Langmuir relation.
inline double frumkin_solve(double psi_b, double psi_c, double alpha) {
  if (!(psi_b > 0.0) || psi_b >= 1.0)
    throw std::invalid_argument("psi_b must lie in (0,1)");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  auto residual = [&](double psi) {
    return psi -
           psi_b / (psi_b + psi_c * std::exp(-alpha * psi) * (1.0 - psi_b));
  };
  double lo = 0.0, hi = 1.0;
  // residual(0) < 0 and residual(1) > 0 always
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  if (std::abs(residual(root)) > 1e-10)
    throw NoConvergence("Frumkin fixed point iteration failed");
  return root;
}

// Leading coefficient (of omega^2) of the unstable eigenvalue of the
// frozen-coefficient linearization:
//   lambda_2 = (1/Pe_psi) [ (Cn^2/2) psi_eq (D phi_eq)^2 - Pi ] omega^2 + O(1).
inline double lambda2_coefficient(double psi_eq0, double dphi_eq0, double cn,
                                  double pi, double pe_psi) {
  return (cn * cn / 2.0 * psi_eq0 * dphi_eq0 * dphi_eq0 - pi) / pe_psi;
}

// Sufficient condition for ill-posedness: psi_b > 2 Pi/(1-2 Pi) psi_c,
// available only for Pi < 1/2.
inline std::optional<double> instability_threshold(double pi, double ex) {
  if (pi >= 0.5) return std::nullopt;
  return 2.0 * pi / (1.0 - 2.0 * pi) * adsorption_constant(pi, ex);
}

struct StabilityReport {
  double lambda2 = 0.0;  // coefficient of omega^2
  std::optional<double> psi_b_threshold;
  bool ill_posed = false;
  // inputs echoed
  double pi = 0.0, ex = 0.0, cn = 0.0, pe_psi = 0.0;
  double psi_eq0 = 0.0, dphi_eq0 = 0.0;
};

inline StabilityReport assess_stability(const ModelParams& p, double psi_eq0,
                                        double dphi_eq0) {
  StabilityReport r;
  r.lambda2 = lambda2_coefficient(psi_eq0, dphi_eq0, p.cn, p.pi, p.pe_psi);
  r.psi_b_threshold = instability_threshold(p.pi, p.ex);
  r.ill_posed = r.lambda2 > 0.0;
  r.pi = p.pi;
  r.ex = p.ex;
  r.cn = p.cn;
  r.pe_psi = p.pe_psi;
  r.psi_eq0 = psi_eq0;
  r.dphi_eq0 = dphi_eq0;
  return r;
}

namespace detail {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 1.0;
  double rms_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double sse = 0, sst = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
    sst += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
  f.rms_residual = std::sqrt(sse / n);
  return f;
}

// best-fit exponent p for y = c + A t^p, linear solve in (c,A) per p
inline double fit_power_exponent(const std::vector<double>& t,
                                 const std::vector<double>& y) {
  auto sse_at = [&](double p) {
    std::vector<double> tp(t.size());
    for (size_t i = 0; i < t.size(); ++i) tp[i] = std::pow(t[i], p);
    const LineFit f = fit_line(tp, y);
    double sse = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - (f.intercept + f.slope * tp[i]);
      sse += r * r;
    }
    return sse;
  };
  // coarse scan then golden-section refinement
  double best_p = 0.5, best = sse_at(0.5);
  for (double p = 0.1; p <= 1.21; p += 0.05) {
    const double s = sse_at(p);
    if (s < best) {
      best = s;
      best_p = p;
    }
  }
  double a = std::max(0.05, best_p - 0.05), b = best_p + 0.05;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = sse_at(c), fd = sse_at(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = sse_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = sse_at(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Fit windows and recovered scales of the three adsorption regimes.
struct AdsorptionFit {
  // ultra-short linear transient psi0 ~ psi_b (1 + const t)
  double ultrashort_slope = 0.0;
  double ultrashort_intercept = 0.0;
  double r2_ultrashort = 0.0;
  // mid window sqrt(t) rise psi0 ~ const + (t/tau1)^{1/2}
  double tau1 = 0.0;
  double r2_mid = 0.0;
  double power_exponent = 0.0;  // free exponent fitted on the same window
  // late window psi0/psi0_eq ~ 1 - (tau0/t)^{1/2}
  double tau0 = 0.0;
  double r2_late = 0.0;
  double late_intercept = 0.0;  // should be close to 1
  // windows used ([lo, hi] in time; counts)
  double t_ultrashort_end = 0.0;
  double t_mid_lo = 0.0, t_mid_hi = 0.0;
  double t_late_lo = 0.0;
  int n_ultrashort = 0, n_mid = 0, n_late = 0;
  double psi0_eq = 0.0;
};

// series must be monotone in t with psi0(t0) =~ psi_b (uniform start).
// Windows: ultra-short = first 2% of the samples preceding the 1.5
// psi_b crossing; mid = from twice the crossing time until psi0 reaches
// half of psi0_eq; late = psi0 above 80% of psi0_eq.
inline AdsorptionFit fit_adsorption(const std::vector<double>& t,
                                    const std::vector<double>& psi0,
                                    double psi0_eq) {
  if (t.size() != psi0.size() || t.size() < 20)
    throw InsufficientData("need at least 20 (t, psi0) samples");
  if (!(psi0_eq > 0.0)) throw InsufficientData("psi0_eq must be positive");
  const size_t n = t.size();
  const double psi_b = psi0.front();

  AdsorptionFit fit;
  fit.psi0_eq = psi0_eq;

  // locate the end of the linear transient
  size_t cross = n;
  for (size_t i = 0; i < n; ++i) {
    if (psi0[i] > 1.5 * psi_b) {
      cross = i;
      break;
    }
  }
  if (cross == n || cross < 5)
    throw InsufficientData("no resolved linear transient before 1.5 psi_b");
  const double t_cross = t[cross];

  {
    const size_t count = std::max<size_t>(5, n / 50);  // first 2% of samples
    const size_t us_n = std::min(cross, count);
    std::vector<double> tx(t.begin(), t.begin() + us_n);
    std::vector<double> yx(psi0.begin(), psi0.begin() + us_n);
    const auto f = detail::fit_line(tx, yx);
    fit.ultrashort_slope = f.slope;
    fit.ultrashort_intercept = f.intercept;
    fit.r2_ultrashort = f.r2;
    fit.t_ultrashort_end = tx.back();
    fit.n_ultrashort = static_cast<int>(us_n);
  }

  {
    std::vector<double> ts, ys;
    for (size_t i = 0; i < n; ++i) {
      if (t[i] >= 2.0 * t_cross && psi0[i] <= 0.5 * psi0_eq) {
        ts.push_back(t[i]);
        ys.push_back(psi0[i]);
      }
    }
    if (ts.size() < 5) throw InsufficientData("mid (sqrt t) window too small");
    std::vector<double> sqrt_t(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) sqrt_t[i] = std::sqrt(ts[i]);
    const auto f = detail::fit_line(sqrt_t, ys);
    if (!(f.slope > 0.0))
      throw NoConvergence("sqrt(t) fit produced nonpositive slope");
    fit.tau1 = 1.0 / (f.slope * f.slope);
    fit.r2_mid = f.r2;
    fit.power_exponent = detail::fit_power_exponent(ts, ys);
    fit.t_mid_lo = ts.front();
    fit.t_mid_hi = ts.back();
    fit.n_mid = static_cast<int>(ts.size());
  }

  {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < n; ++i) {
      if (psi0[i] >= 0.8 * psi0_eq && t[i] > 0.0) {
        xs.push_back(1.0 / std::sqrt(t[i]));
        ys.push_back(psi0[i] / psi0_eq);
      }
    }
    if (xs.size() < 5) throw InsufficientData("late window too small");
    const auto f = detail::fit_line(xs, ys);
    fit.tau0 = f.slope * f.slope;  // slope is -sqrt(tau0)
    fit.r2_late = f.r2;
    fit.late_intercept = f.intercept;
    fit.t_late_lo = 1.0 / (xs.front() * xs.front());
    fit.n_late = static_cast<int>(xs.size());
  }
  return fit;
}

}  // namespace chsurf
