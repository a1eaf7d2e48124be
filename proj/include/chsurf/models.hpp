#pragma once

// Pointwise thermodynamics of the diffuse-interface surfactant models:
// free-energy densities, chemical potentials, the strong-form drift
// potential entering the psi flux, and parameter construction.
//
// Model 0 is the baseline; the variants differ in the adsorption energy
// F_1 and (for model 1) in the psi free energy:
//   model 0/1:  F_1 = -(Cn^2/4) psi (grad phi)^2
//   model 2:    F_1 = -(1/4) psi (1 - phi^2)
//   model 3:    F_1 = -(1/4) psi (1 - phi^2)^2
//   model 1 adds (sigma/4) psi (1-psi) + (Cn^2/4) (grad psi)^2 to F_psi.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chsurf {

enum class ModelVariant { model0 = 0, model1 = 1, model2 = 2, model3 = 3 };

inline ModelVariant variant_from_int(int v) {
  if (v < 0 || v > 3)
    throw std::invalid_argument("model variant must be 0..3");
  return static_cast<ModelVariant>(v);
}

struct UnsupportedVariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nondimensional parameter set. sigma (lateral interaction) is only
// meaningful for model 1; make_params rejects sigma != 0 elsewhere and
// defaults it to the convexity bound 8 Pi for model 1.
struct ModelParams {
  ModelVariant variant = ModelVariant::model0;
  double cn = 0.1;     // interface width / length scale
  double ex = 1.0;     // bulk solubility
  double pi = 0.1;     // temperature parameter
  double sigma = 0.0;  // lateral interaction strength (model 1)
  double pe_phi = 1.0;
  double pe_psi = 1.0;

  // convexity of the non-gradient model-1 psi energy requires sigma <= 8 Pi
  bool sigma_convexity_violated() const {
    return variant == ModelVariant::model1 && sigma > 8.0 * pi;
  }
};

inline ModelParams make_params(ModelVariant variant, double cn, double ex,
                               double pi, double pe_phi, double pe_psi,
                               double sigma =
                                   std::numeric_limits<double>::quiet_NaN()) {
  if (!(cn > 0) || !(ex > 0) || !(pi > 0) || !(pe_phi > 0) || !(pe_psi > 0))
    throw std::invalid_argument("model parameters must be strictly positive");
  ModelParams p;
  p.variant = variant;
  p.cn = cn;
  p.ex = ex;
  p.pi = pi;
  p.pe_phi = pe_phi;
  p.pe_psi = pe_psi;
  if (variant == ModelVariant::model1)
    p.sigma = std::isnan(sigma) ? 8.0 * pi : sigma;
  else {
    if (!std::isnan(sigma) && sigma != 0.0)
      throw UnsupportedVariant("sigma is only meaningful for model 1");
    p.sigma = 0.0;
  }
  if (p.sigma < 0) throw std::invalid_argument("sigma must be nonnegative");
  return p;
}

// Pointwise field values and derivatives (1D).
struct FieldSample {
  double phi = 0;
  double psi = 0;
  double grad_phi = 0;
  double grad_psi = 0;
  double lap_phi = 0;
  double lap_psi = 0;
};

namespace detail {

// psi log psi + (1-psi) log(1-psi), evaluated with psi clamped to
// [1e-14, 1-1e-14]. The evolution equations never evaluate this
// logarithm (the log term acts through Pi*Delta(psi)), so clamping
// affects energy reporting only. Violations beyond `slack` outside
// (0,1) signal DomainViolation.
inline double mixing_entropy(double psi, bool* clamped, double slack = 0.1) {
  if (psi < -slack || psi > 1.0 + slack)
    throw DomainViolation("psi = " + std::to_string(psi) +
                          " outside (0,1) beyond clamp threshold");
  constexpr double floor = 1e-14;
  double s = psi;
  if (s < floor) {
    s = floor;
    if (clamped && psi < 0.0) *clamped = true;
  } else if (s > 1.0 - floor) {
    s = 1.0 - floor;
    if (clamped && psi > 1.0) *clamped = true;
  }
  return s * std::log(s) + (1.0 - s) * std::log(1.0 - s);
}

}  // namespace detail

// F = F_phi + F_psi + F_1 + F_ex per variant. `clamped`, when given,
// is set if psi had to be clamped into (0,1) for the log terms.
inline double free_energy_density(const ModelParams& p, const FieldSample& s,
                                  bool* clamped = nullptr) {
  const double phi2 = s.phi * s.phi;
  const double f_phi = -phi2 / 2.0 + phi2 * phi2 / 4.0 +
                       p.cn * p.cn / 4.0 * s.grad_phi * s.grad_phi;
  double f_psi = p.pi * detail::mixing_entropy(s.psi, clamped);
  double f_one = 0.0;
  switch (p.variant) {
    case ModelVariant::model0:
      f_one = -p.cn * p.cn / 4.0 * s.psi * s.grad_phi * s.grad_phi;
      break;
    case ModelVariant::model1:
      f_one = -p.cn * p.cn / 4.0 * s.psi * s.grad_phi * s.grad_phi;
      f_psi += p.sigma / 4.0 * s.psi * (1.0 - s.psi) +
               p.cn * p.cn / 4.0 * s.grad_psi * s.grad_psi;
      break;
    case ModelVariant::model2:
      f_one = -(1.0 - phi2) * s.psi / 4.0;
      break;
    case ModelVariant::model3:
      f_one = -(1.0 - phi2) * (1.0 - phi2) * s.psi / 4.0;
      break;
  }
  const double f_ex = s.psi * phi2 / (4.0 * p.ex);
  return f_phi + f_psi + f_one + f_ex;
}

// Chemical potential mu_phi = dF/dphi per variant.
inline double mu_phi(const ModelParams& p, const FieldSample& s) {
  const double cn2 = p.cn * p.cn;
  const double common = -s.phi + s.phi * s.phi * s.phi - cn2 / 2.0 * s.lap_phi +
                        s.psi * s.phi / (2.0 * p.ex);
  switch (p.variant) {
    case ModelVariant::model0:
    case ModelVariant::model1:
      return common + cn2 / 2.0 * s.psi * s.lap_phi +
             cn2 / 2.0 * s.grad_psi * s.grad_phi;
    case ModelVariant::model2:
      return common + 0.5 * s.psi * s.phi;
    case ModelVariant::model3:
      return common + (1.0 - s.phi * s.phi) * s.psi * s.phi;
  }
  return 0;  // unreachable
}

// The non-logarithmic part of mu_psi: the potential whose gradient
// drives the degenerate-mobility flux. For model 1 it includes the
// fourth-order -(Cn^2/2) lap(psi) and the lateral term -(sigma/2) psi.
inline double psi_drift_potential(const ModelParams& p, const FieldSample& s) {
  const double cn2 = p.cn * p.cn;
  const double f_ex = s.phi * s.phi / (4.0 * p.ex);
  switch (p.variant) {
    case ModelVariant::model0:
      return -cn2 / 4.0 * s.grad_phi * s.grad_phi + f_ex;
    case ModelVariant::model1:
      return -cn2 / 4.0 * s.grad_phi * s.grad_phi - cn2 / 2.0 * s.lap_psi -
             p.sigma / 2.0 * s.psi + f_ex;
    case ModelVariant::model2:
      return s.phi * s.phi / 4.0 + f_ex;
    case ModelVariant::model3: {
      const double w = 1.0 - s.phi * s.phi;
      return -w * w / 4.0 + f_ex;
    }
  }
  return 0;  // unreachable
}

// mu_psi = Pi log(psi/(1-psi)) + drift potential. The log is evaluated
// under the same clamp policy as the energy.
inline double mu_psi(const ModelParams& p, const FieldSample& s,
                     bool* clamped = nullptr) {
  bool dummy = false;
  detail::mixing_entropy(s.psi, &dummy);  // range check + clamp flag
  if (clamped) *clamped = dummy;
  constexpr double floor = 1e-14;
  const double psi = std::min(std::max(s.psi, floor), 1.0 - floor);
  return p.pi * std::log(psi / (1.0 - psi)) + psi_drift_potential(p, s);
}

// Dimensional parameters of the original model; the nondimensional set
// follows from phi0 = sqrt(A/B), zeta = sqrt(2 kappa / A).
struct PhysicalParams {
  double a = 1.0;      // quadratic well coefficient
  double b = 1.0;      // quartic well coefficient
  double kappa = 1.0;  // phi gradient energy
  double eps = 1.0;    // adsorption strength (must equal kappa)
  double w = 1.0;      // bulk penalty
  double kt = 0.1;     // thermal energy
  double length = 1.0;
  double u0 = 1.0;     // velocity scale
  double mob_phi = 1.0;
  double mob_psi = 1.0;

  double phi0() const { return std::sqrt(a / b); }
  double zeta() const { return std::sqrt(2.0 * kappa / a); }
};

// Cn = zeta/L, Ex = eps/(W zeta^2), Pi = kT/(A phi0^2),
// Pe_phi = L u0/(M_phi A), Pe_psi = L u0/(m_psi A phi0^2).
inline ModelParams nondimensionalize(const PhysicalParams& pp,
                                     ModelVariant variant) {
  if (!(pp.a > 0) || !(pp.b > 0) || !(pp.kappa > 0) || !(pp.eps > 0) ||
      !(pp.w > 0) || !(pp.kt > 0) || !(pp.length > 0) || !(pp.u0 > 0) ||
      !(pp.mob_phi > 0) || !(pp.mob_psi > 0))
    throw std::invalid_argument("physical parameters must be positive");
  if (std::abs(pp.eps - pp.kappa) > 1e-12 * std::abs(pp.kappa))
    throw std::invalid_argument(
        "nondimensionalize assumes eps = kappa (adsorption and gradient "
        "coefficients equal)");
  const double zeta = pp.zeta();
  const double phi0 = pp.phi0();
  return make_params(variant, zeta / pp.length,
                     pp.eps / (pp.w * zeta * zeta),
                     pp.kt / (pp.a * phi0 * phi0),
                     pp.length * pp.u0 / (pp.mob_phi * pp.a),
                     pp.length * pp.u0 / (pp.mob_psi * pp.a * phi0 * phi0));
}

}  // namespace chsurf
