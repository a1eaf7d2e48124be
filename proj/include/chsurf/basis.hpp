#pragma once

// Legendre polynomial infrastructure on [-1,1]: evaluation tables,
// Gauss-Legendre quadrature, modal differentiation and exponential
// filtering. Everything here is immutable after construction.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace chsurf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// P_0..P_N evaluated at a single point x by the three-term recurrence
// (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
inline VectorXd legendre_values(int order, double x) {
  VectorXd p(order + 1);
  p[0] = 1.0;
  if (order >= 1) p[1] = x;
  for (int k = 1; k < order; ++k)
    p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1);
  return p;
}

// P_0'..P_N' at x via P'_{k+1} = P'_{k-1} + (2k+1) P_k.
inline VectorXd legendre_derivatives(int order, double x) {
  const VectorXd p = legendre_values(order, x);
  VectorXd dp(order + 1);
  dp[0] = 0.0;
  if (order >= 1) dp[1] = 1.0;
  for (int k = 1; k < order; ++k) dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k];
  return dp;
}

struct QuadratureRule {
  VectorXd nodes;    // strictly increasing abscissae in (-1,1)
  VectorXd weights;  // positive, sum to 2
  int size() const { return static_cast<int>(nodes.size()); }
};

// n-point Gauss-Legendre rule, exact for polynomials of degree <= 2n-1.
// Nodes are the roots of P_n, found by Newton iteration from Chebyshev
// initial guesses; weights w = 2 / ((1-x^2) P_n'(x)^2).
inline QuadratureRule gauss_legendre_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: need n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and P_n' together; derivative from the stable
      // identity (1-x^2) P_n' = n (P_{n-1} - x P_n)
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (p0 - x * p1) / (1.0 - x * x);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (p0 - x * p1) / (1.0 - x * x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x computed here is the i-th root counted from +1 downwards
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
    VectorXd dp = legendre_derivatives(n, 0.0);
    rule.weights[n / 2] = 2.0 / (dp[n] * dp[n]);
  }
  return rule;
}

// Modal coefficients of d/dx of a Legendre expansion. Degree drops by
// one; c_k = (2k+1) b_{k+1} + (2k+1)/(2k+5) c_{k+2}.
inline VectorXd differentiate(const VectorXd& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  VectorXd d = VectorXd::Zero(n + 1);
  for (int k = n - 1; k >= 0; --k) {
    d[k] = (2 * k + 1) * coeffs[k + 1];
    if (k + 2 <= n) d[k] += (2.0 * k + 1.0) / (2.0 * k + 5.0) * d[k + 2];
  }
  return d;
}

// Exponential modal filter: 1 on [0, cutoff], exp(-strength
// ((eta-cutoff)/(1-cutoff))^order) above. strength = -log(eps) =~ 36
// drives the last mode to machine epsilon.
struct SpectralFilter {
  double cutoff = 0.25;
  int order = 12;
  double strength = 36.0;
};

inline double filter_factor(double eta, const SpectralFilter& f) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("filter_factor: eta outside [0,1]");
  if (eta <= f.cutoff) return 1.0;
  const double s = (eta - f.cutoff) / (1.0 - f.cutoff);
  return std::exp(-f.strength * std::pow(s, f.order));
}

// Precomputed node tables for P_0..P_N and their derivatives at the
// quadrature nodes; carries the rule it was built from.
class LegendreBasis {
 public:
  LegendreBasis(int order, QuadratureRule rule)
      : order_(order), rule_(std::move(rule)) {
    if (order < 0) throw std::invalid_argument("LegendreBasis: order < 0");
    const int q = rule_.size();
    values_.resize(order + 1, q);
    derivs_.resize(order + 1, q);
    for (int j = 0; j < q; ++j) {
      values_.col(j) = legendre_values(order, rule_.nodes[j]);
      derivs_.col(j) = legendre_derivatives(order, rule_.nodes[j]);
    }
    mass_.resize(order + 1);
    for (int i = 0; i <= order; ++i) mass_[i] = 2.0 / (2.0 * i + 1.0);
  }

  int order() const { return order_; }
  const QuadratureRule& rule() const { return rule_; }
  const MatrixXd& values() const { return values_; }
  const MatrixXd& derivs() const { return derivs_; }
  const VectorXd& mass() const { return mass_; }  // M_ii = ||P_i||^2 = 2/(2i+1)

  // nodal values sum_n c_n P_n(x_q)
  VectorXd synthesize(const VectorXd& coeffs) const {
    return values_.transpose() * coeffs;
  }

  // nodal values of the exact derivative of the expansion
  VectorXd synthesize_derivative(const VectorXd& coeffs) const {
    return values_.transpose() * differentiate(coeffs);
  }

  // modal projection by quadrature: c_i = (sum_q w_q P_i(x_q) f_q) / M_ii;
  // exact inverse of synthesize whenever the rule has >= N+1 points
  VectorXd analyze(const VectorXd& nodal) const {
    return (values_ * nodal.cwiseProduct(rule_.weights)).cwiseQuotient(mass_);
  }

  // (P_i, f) for all i, by quadrature
  VectorXd project(const VectorXd& nodal) const {
    return values_ * nodal.cwiseProduct(rule_.weights);
  }

  // (P_i', f) for all i, by quadrature
  VectorXd project_derivative(const VectorXd& nodal) const {
    return derivs_ * nodal.cwiseProduct(rule_.weights);
  }

  // pointwise evaluation away from the node set
  double evaluate(const VectorXd& coeffs, double x) const {
    return legendre_values(order_, x).dot(coeffs);
  }

 private:
  int order_;
  QuadratureRule rule_;
  MatrixXd values_, derivs_;
  VectorXd mass_;
};

// Diagonal of the filtered mass matrix, Mtilde_ii = theta(i/N)^{-1} M_ii.
inline VectorXd filtered_mass_matrix(const LegendreBasis& basis,
                                     const SpectralFilter& f) {
  const int n = basis.order();
  VectorXd m(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double eta = (n == 0) ? 0.0 : static_cast<double>(i) / n;
    m[i] = basis.mass()[i] / filter_factor(eta, f);
  }
  return m;
}

}  // namespace chsurf
