#pragma once

// Semi-discrete Legendre-Galerkin system for the coupled (phi, psi)
// gradient flow on [-1,1] with natural boundary conditions:
//
//   Mtilde Phi_hat   = a,      a_i = (P_i, f_bulk) + (Cn^2/2)(P_i', g)
//   Mtilde phi_hat'  = alpha,  alpha_i = -(1/Pe_phi)(P_i', Phi') - u (P_i, phi')
//   Mtilde psi_hat'  = beta,   beta_i  = -(1/Pe_psi)(P_i', Pi psi' + psi(1-psi) Psi')
//
// The exponential filter enters only through the replacement of the
// mass matrix M by Mtilde in these three solves, never by damping the
// state directly.

#include "chsurf/basis.hpp"
#include "chsurf/models.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace chsurf {

// Modal coefficients of (phi, psi) plus simulation time; the sole
// evolving state. NaN/Inf entries mark a blow-up witness.
struct SpectralState {
  VectorXd phi_hat;
  VectorXd psi_hat;
  double time = 0.0;
};

class SemidiscreteSystem {
 public:
  SemidiscreteSystem(const ModelParams& params, int order, int quad_points,
                     SpectralFilter filter = {}, double advection = 0.0)
      : params_(params),
        basis_(order, gauss_legendre_rule(quad_points)),
        filter_(filter),
        filtered_mass_(filtered_mass_matrix(basis_, filter)),
        advection_(advection) {
    if (quad_points < order + 1)
      throw std::invalid_argument("quadrature size must be >= order+1");
  }

  const ModelParams& params() const { return params_; }
  const LegendreBasis& basis() const { return basis_; }
  const QuadratureRule& rule() const { return basis_.rule(); }
  const SpectralFilter& filter() const { return filter_; }
  double advection() const { return advection_; }
  int order() const { return basis_.order(); }
  int modes() const { return basis_.order() + 1; }
  int flat_size() const { return 2 * modes(); }

  void check_state(const SpectralState& s) const {
    if (s.phi_hat.size() != modes() || s.psi_hat.size() != modes())
      throw std::invalid_argument("state size does not match basis order");
  }

  // Phi_hat = Mtilde^{-1} a, the filtered Galerkin chemical potential.
  VectorXd potential_solve(const SpectralState& s) const {
    check_state(s);
    return weak_potential(basis_.synthesize(s.phi_hat),
                          basis_.synthesize_derivative(s.phi_hat),
                          basis_.synthesize(s.psi_hat))
        .cwiseQuotient(filtered_mass_);
  }

  // d(phi_hat)/dt. Mode 0 vanishes identically when u = 0 (P_0' = 0);
  // with advection it carries the boundary flux -u [phi]/2.
  VectorXd phi_rate(const SpectralState& s) const {
    check_state(s);
    const VectorXd phi_n = basis_.synthesize(s.phi_hat);
    const VectorXd dphi_n = basis_.synthesize_derivative(s.phi_hat);
    const VectorXd psi_n = basis_.synthesize(s.psi_hat);
    return phi_rate_impl(phi_n, dphi_n, psi_n).cwiseQuotient(filtered_mass_);
  }

  // d(psi_hat)/dt; mode 0 vanishes identically (exact surfactant mass
  // conservation).
  VectorXd psi_rate(const SpectralState& s) const {
    check_state(s);
    const VectorXd phi_n = basis_.synthesize(s.phi_hat);
    const VectorXd dphi_n = basis_.synthesize_derivative(s.phi_hat);
    return psi_rate_impl(phi_n, dphi_n, s.psi_hat)
        .cwiseQuotient(filtered_mass_);
  }

  // Concatenated (phi, psi) rate used by the time stepper.
  VectorXd rate_flat(const VectorXd& y) const {
    const int m = modes();
    const VectorXd phi_hat = y.head(m);
    const VectorXd psi_hat = y.tail(m);
    const VectorXd phi_n = basis_.synthesize(phi_hat);
    const VectorXd dphi_n = basis_.synthesize_derivative(phi_hat);
    VectorXd out(flat_size());
    out.head(m) = phi_rate_impl(phi_n, dphi_n, basis_.synthesize(psi_hat))
                      .cwiseQuotient(filtered_mass_);
    out.tail(m) =
        psi_rate_impl(phi_n, dphi_n, psi_hat).cwiseQuotient(filtered_mass_);
    return out;
  }

  VectorXd pack(const SpectralState& s) const {
    check_state(s);
    VectorXd y(flat_size());
    y.head(modes()) = s.phi_hat;
    y.tail(modes()) = s.psi_hat;
    return y;
  }

  SpectralState unpack(const VectorXd& y, double time) const {
    SpectralState s;
    s.phi_hat = y.head(modes());
    s.psi_hat = y.tail(modes());
    s.time = time;
    return s;
  }

  // integral of phi and psi over [-1,1]; P_0 = 1 has mass 2
  std::array<double, 2> total_mass(const SpectralState& s) const {
    check_state(s);
    return {2.0 * s.phi_hat[0], 2.0 * s.psi_hat[0]};
  }

  // quadrature of the free-energy density; psi is clamped into (0,1)
  // for the log terms and `clamped` reports whether that happened
  double total_energy(const SpectralState& s, bool* clamped = nullptr) const {
    check_state(s);
    const VectorXd phi_n = basis_.synthesize(s.phi_hat);
    const VectorXd dphi_n = basis_.synthesize_derivative(s.phi_hat);
    const VectorXd psi_n = basis_.synthesize(s.psi_hat);
    const VectorXd dpsi_n = basis_.synthesize_derivative(s.psi_hat);
    const VectorXd& w = rule().weights;
    double e = 0.0;
    bool any_clamped = false;
    for (int q = 0; q < rule().size(); ++q) {
      FieldSample f;
      f.phi = phi_n[q];
      f.psi = psi_n[q];
      f.grad_phi = dphi_n[q];
      f.grad_psi = dpsi_n[q];
      bool c = false;
      e += w[q] * free_energy_density(params_, f, &c);
      any_clamped |= c;
    }
    if (clamped) *clamped = any_clamped;
    return e;
  }

  double phi_at(const SpectralState& s, double x) const {
    return basis_.evaluate(s.phi_hat, x);
  }
  double psi_at(const SpectralState& s, double x) const {
    return basis_.evaluate(s.psi_hat, x);
  }

  // Blow-up witness check: finite coefficients and nodal psi within
  // [-0.1, 1.1] (matching the clamp slack of the energy evaluation).
  bool state_ok_flat(const VectorXd& y) const {
    if (!y.allFinite()) return false;
    const VectorXd psi_n = basis_.synthesize(y.tail(modes()));
    return (psi_n.array() >= -0.1).all() && (psi_n.array() <= 1.1).all();
  }

  bool state_ok(const SpectralState& s) const { return state_ok_flat(pack(s)); }

 private:
  // a_i for the potential solve; bulk and gradient integrands per variant
  VectorXd weak_potential(const VectorXd& phi_n, const VectorXd& dphi_n,
                          const VectorXd& psi_n) const {
    const auto phi = phi_n.array();
    const auto psi = psi_n.array();
    const double cn2 = params_.cn * params_.cn;
    VectorXd bulk, grad;
    switch (params_.variant) {
      case ModelVariant::model0:
      case ModelVariant::model1:
        bulk = (-phi + phi.cube() + psi * phi / (2.0 * params_.ex)).matrix();
        grad = ((1.0 - psi) * dphi_n.array()).matrix();
        break;
      case ModelVariant::model2:
        bulk = (-phi + phi.cube() + 0.5 * psi * phi +
                psi * phi / (2.0 * params_.ex))
                   .matrix();
        grad = dphi_n;
        break;
      case ModelVariant::model3:
        bulk = (-phi + phi.cube() + (1.0 - phi.square()) * psi * phi +
                psi * phi / (2.0 * params_.ex))
                   .matrix();
        grad = dphi_n;
        break;
    }
    return basis_.project(bulk) + cn2 / 2.0 * basis_.project_derivative(grad);
  }

  VectorXd phi_rate_impl(const VectorXd& phi_n, const VectorXd& dphi_n,
                         const VectorXd& psi_n) const {
    const VectorXd a = weak_potential(phi_n, dphi_n, psi_n);
    const VectorXd dPhi_n =
        basis_.synthesize_derivative(a.cwiseQuotient(filtered_mass_));
    VectorXd alpha = -basis_.project_derivative(dPhi_n) / params_.pe_phi;
    if (advection_ != 0.0) alpha -= advection_ * basis_.project(dphi_n);
    return alpha;
  }

  VectorXd psi_rate_impl(const VectorXd& phi_n, const VectorXd& dphi_n,
                         const VectorXd& psi_hat) const {
    const VectorXd psi_n = basis_.synthesize(psi_hat);
    const VectorXd dpsi_n = basis_.synthesize_derivative(psi_hat);
    // strong-form drift potential at the nodes
    VectorXd drift(psi_n.size());
    if (params_.variant == ModelVariant::model1) {
      const VectorXd lap_psi_n =
          basis_.synthesize(differentiate(differentiate(psi_hat)));
      for (int q = 0; q < psi_n.size(); ++q) {
        FieldSample f;
        f.phi = phi_n[q];
        f.psi = psi_n[q];
        f.grad_phi = dphi_n[q];
        f.lap_psi = lap_psi_n[q];
        drift[q] = psi_drift_potential(params_, f);
      }
    } else {
      for (int q = 0; q < psi_n.size(); ++q) {
        FieldSample f;
        f.phi = phi_n[q];
        f.grad_phi = dphi_n[q];
        drift[q] = psi_drift_potential(params_, f);
      }
    }
    // Psi' consistent with the Galerkin ansatz: project to modal space,
    // differentiate modally, synthesize back
    const VectorXd dPsi_n =
        basis_.synthesize_derivative(basis_.analyze(drift));
    const VectorXd flux =
        (params_.pi * dpsi_n.array() +
         psi_n.array() * (1.0 - psi_n.array()) * dPsi_n.array())
            .matrix();
    return -basis_.project_derivative(flux) / params_.pe_psi;
  }

  ModelParams params_;
  LegendreBasis basis_;
  SpectralFilter filter_;
  VectorXd filtered_mass_;
  double advection_;
};

}  // namespace chsurf
