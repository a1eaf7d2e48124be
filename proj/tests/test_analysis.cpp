#include "chsurf/analysis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace chsurf;

namespace {
ModelParams params_for(ModelVariant v, double pi = 0.1227, double ex = 1.0,
                       double cn = 1.0 / 6.0) {
  return make_params(v, cn, ex, pi, 1.0, 1.0);
}
}  // namespace

TEST_CASE("Langmuir adsorption constant and its inverse", "[analysis]") {
  REQUIRE(adsorption_constant(0.1227, 1.0) ==
          Catch::Approx(0.016992560895139109).epsilon(1e-12));
  // limiting form as Ex -> infinity
  REQUIRE(adsorption_constant(0.1227, 1e14) ==
          Catch::Approx(std::exp(-1.0 / (4 * 0.1227))).epsilon(1e-10));
  REQUIRE(pi_from_adsorption_constant(0.016, 1.0) ==
          Catch::Approx(0.12091411389095175).epsilon(1e-12));
  // round trip
  const double pi_v = pi_from_adsorption_constant(0.016, 1.0);
  REQUIRE(adsorption_constant(pi_v, 1.0) == Catch::Approx(0.016).epsilon(1e-13));
}

TEST_CASE("Langmuir isotherm values and monotonicity", "[analysis]") {
  REQUIRE(langmuir_isotherm(0.01, 0.016) ==
          Catch::Approx(0.38699690402476780).epsilon(1e-12));
  REQUIRE(langmuir_isotherm(1e-12, 0.016) < 1e-9);
  double prev = 0;
  for (double psi_b : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9}) {
    const double v = langmuir_isotherm(psi_b, 0.016);
    REQUIRE(v > prev);
    REQUIRE(v < 1.0);
    prev = v;
  }
  // decreasing in psi_c
  REQUIRE(langmuir_isotherm(0.01, 0.002) > langmuir_isotherm(0.01, 0.075));
}

TEST_CASE("Frumkin fixed point", "[analysis]") {
  // alpha = 0 reduces exactly to the Langmuir relation
  for (double psi_b : {1e-3, 0.01, 0.2}) {
    REQUIRE(frumkin_solve(psi_b, 0.016, 0.0) ==
            Catch::Approx(langmuir_isotherm(psi_b, 0.016)).margin(1e-12));
  }
  // frozen bisection oracle value at sigma = 8 Pi (alpha = 4)
  REQUIRE(frumkin_solve(0.01, 0.016, 4.0) ==
          Catch::Approx(0.96809003837482231).margin(1e-9));
  // lateral attraction enhances adsorption
  REQUIRE(frumkin_solve(0.01, 0.016, 4.0) > frumkin_solve(0.01, 0.016, 2.0));
  REQUIRE(frumkin_solve(0.01, 0.016, 2.0) > frumkin_solve(0.01, 0.016, 0.0));

  // independent damped fixed-point oracle
  auto damped = [](double psi_b, double psi_c, double alpha) {
    double psi = 0.5;
    for (int it = 0; it < 20000; ++it) {
      const double next =
          psi_b / (psi_b + psi_c * std::exp(-alpha * psi) * (1 - psi_b));
      psi += 0.5 * (next - psi);
    }
    return psi;
  };
  REQUIRE(frumkin_solve(0.02, 0.035, 3.0) ==
          Catch::Approx(damped(0.02, 0.035, 3.0)).margin(1e-10));
}

TEST_CASE("planar equilibrium profiles", "[analysis]") {
  for (auto v : {ModelVariant::model0, ModelVariant::model1,
                 ModelVariant::model2, ModelVariant::model3}) {
    const auto prof = equilibrium_profile(params_for(v), 0.0);
    REQUIRE(prof.phi_b == Catch::Approx(1.0));
    REQUIRE(prof.width == Catch::Approx(1.0 / 6.0));
    REQUIRE(prof(0.0) == 0.0);
    REQUIRE(prof(0.3) == Catch::Approx(-prof(-0.3)));  // odd
  }
  REQUIRE(equilibrium_profile(params_for(ModelVariant::model2), 0.01).phi_b ==
          Catch::Approx(0.99498743710661995).epsilon(1e-12));
  REQUIRE(equilibrium_profile(params_for(ModelVariant::model3), 0.01).phi_b ==
          Catch::Approx(0.99747155094744178).epsilon(1e-12));
  // supersaturated bulk has no planar equilibrium
  REQUIRE_THROWS_AS(
      equilibrium_profile(params_for(ModelVariant::model0, 0.1, 0.4), 0.9),
      SupersaturatedBulk);
}

TEST_CASE("interface slope at the origin", "[analysis]") {
  for (auto v : {ModelVariant::model0, ModelVariant::model2,
                 ModelVariant::model3}) {
    REQUIRE(interface_slope(params_for(v), 0.0) == Catch::Approx(1.0));
  }
  REQUIRE(interface_slope(params_for(ModelVariant::model2), 0.01) ==
          Catch::Approx(0.99).epsilon(1e-14));
  // at Ex = 1 the sharpness is loading-independent to O(psi_b^2)
  REQUIRE(std::abs(interface_slope(params_for(ModelVariant::model0), 0.01) -
                   1.0) < 1e-4);
  REQUIRE(std::abs(interface_slope(params_for(ModelVariant::model3), 0.01) -
                   1.0) < 1e-4);
}

TEST_CASE("steady surfactant profile", "[analysis]") {
  const auto p = params_for(ModelVariant::model3, 0.12091411389095175);
  EquilibriumProfile prof;
  prof.variant = p.variant;
  prof.phi_b = 1.0;
  prof.width = p.cn;
  const double psi_b = 0.01;
  // far field recovers the bulk value; the centre is the Langmuir value
  REQUIRE(steady_psi_profile(40.0, p, prof, psi_b) ==
          Catch::Approx(psi_b).margin(1e-12));
  REQUIRE(steady_psi_profile(0.0, p, prof, psi_b) ==
          Catch::Approx(langmuir_isotherm(psi_b, 0.016)).epsilon(1e-10));
  REQUIRE_THROWS_AS(
      steady_psi_profile(0.0, params_for(ModelVariant::model1), prof, psi_b),
      UnsupportedVariant);
}

TEST_CASE("instability threshold", "[analysis]") {
  const auto thr = instability_threshold(0.1227, 1.0);
  REQUIRE(thr.has_value());
  REQUIRE(*thr == Catch::Approx(5.5260726791242211e-3).epsilon(1e-10));
  REQUIRE_FALSE(instability_threshold(0.5, 1.0).has_value());
  REQUIRE_FALSE(instability_threshold(0.75, 1.0).has_value());
  const auto quarter = instability_threshold(0.25, 1.0);
  REQUIRE(*quarter == Catch::Approx(0.13533528323661269).epsilon(1e-12));
}

TEST_CASE("lambda_2 coefficient and stability report", "[analysis]") {
  REQUIRE(lambda2_coefficient(0.0, 3.0, 0.2, 0.1227, 2.0) ==
          Catch::Approx(-0.1227 / 2.0).epsilon(1e-14));
  // marginal case: psi_eq = 2 Pi with Cn-independent sharpness
  const double cn = 1.0 / 6.0;
  REQUIRE(lambda2_coefficient(2 * 0.1227, 1.0 / cn, cn, 0.1227, 1.0) ==
          Catch::Approx(0.0).margin(1e-15));

  const auto p = params_for(ModelVariant::model0);
  const auto stable = assess_stability(p, 0.1, 1.0 / p.cn);
  REQUIRE_FALSE(stable.ill_posed);
  const auto unstable = assess_stability(p, 0.4, 1.0 / p.cn);
  REQUIRE(unstable.ill_posed);
  REQUIRE(unstable.lambda2 > 0.0);
}

TEST_CASE("threshold is the zero of lambda_2 under the Langmuir closure",
          "[analysis]") {
  // substituting psi_eq(0) = psi_b/(psi_c + psi_b) and D(phi_eq)(0) = 1/Cn
  // into lambda_2 must vanish exactly at the predicted threshold
  for (double pi_v : {0.05, 0.1227, 0.2, 0.3, 0.45}) {
    for (double ex : {0.25, 1.0, 4.0}) {
      const double psi_c = adsorption_constant(pi_v, ex);
      const auto thr = instability_threshold(pi_v, ex);
      REQUIRE(thr.has_value());
      const double psi0 = *thr / (psi_c + *thr);
      const double cn = 0.05;
      REQUIRE(std::abs(lambda2_coefficient(psi0, 1.0 / cn, cn, pi_v, 1.0)) <
              1e-12);
    }
  }
}

TEST_CASE("adsorption fits recover synthetic scales", "[analysis]") {
  // sqrt(t) series: psi0 = c + sqrt(t/tau1)
  {
    const double tau1 = 7.0, c = 0.01;
    std::vector<double> t, y;
    for (int i = 0; i < 3000; ++i) {
      const double ti = 1e-4 * std::pow(10.0 / 1e-4, i / 2999.0);
      t.push_back(ti);
      y.push_back(c + std::sqrt(ti / tau1));
    }
    // psi0_eq = 1 keeps all three windows populated; the mid window
    // carries the exact sqrt(t) model so tau1 is recovered exactly
    const auto fit = fit_adsorption(t, y, 1.0);
    REQUIRE(fit.tau1 == Catch::Approx(tau1).epsilon(1e-10));
    REQUIRE(fit.power_exponent == Catch::Approx(0.5).margin(2e-3));
  }
  // late-time series: psi0 = psi_eq (1 - sqrt(tau0/t))
  {
    const double tau0 = 0.3, psi_eq = 0.4;
    std::vector<double> t, y;
    for (int i = 0; i < 4000; ++i) {
      const double ti = 0.4 * std::pow(1000.0 / 0.4, i / 3999.0);
      t.push_back(ti);
      y.push_back(psi_eq * (1.0 - std::sqrt(tau0 / ti)));
    }
    const auto fit = fit_adsorption(t, y, psi_eq);
    REQUIRE(fit.tau0 == Catch::Approx(tau0).epsilon(1e-10));
    REQUIRE(fit.late_intercept == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(fit.r2_late == Catch::Approx(1.0).margin(1e-12));
  }
  // no adsorption at all reports InsufficientData
  {
    std::vector<double> t, y;
    for (int i = 0; i < 100; ++i) {
      t.push_back(0.01 * (i + 1));
      y.push_back(0.0);
    }
    REQUIRE_THROWS_AS(fit_adsorption(t, y, 0.4), InsufficientData);
  }
}
