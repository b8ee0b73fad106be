#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aeromix/constitutive.hpp"

namespace aeromix {
namespace {

TEST(Strain, SymmetrizesDisplacementGradient) {
  Eigen::Matrix2d g;
  g << 1.0, 2.0, 4.0, -3.0;
  const Eigen::Matrix2d e = strain(g);
  EXPECT_DOUBLE_EQ(e(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(e(1, 1), -3.0);
  EXPECT_DOUBLE_EQ(e(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(e(1, 0), 3.0);
}

TEST(ElasticStress, HydrostaticOracle) {
  // E = I, lambda = 0.7e6, mu = 0.27e6:
  // sigma = 2*mu*I + lambda*tr(I)*I = (0.54e6 + 1.4e6) I = 1.94e6 I
  const Eigen::Matrix2d sigma =
      elastic_stress(Eigen::Matrix2d::Identity(), 0.7e6, 0.27e6);
  EXPECT_DOUBLE_EQ(sigma(0, 0), 1.94e6);
  EXPECT_DOUBLE_EQ(sigma(1, 1), 1.94e6);
  EXPECT_DOUBLE_EQ(sigma(0, 1), 0.0);
}

TEST(ElasticStress, PureShearHasNoVolumetricPart) {
  Eigen::Matrix2d e;
  e << 0.0, 0.5, 0.5, 0.0;
  const Eigen::Matrix2d sigma = elastic_stress(e, 123.0, 10.0);
  EXPECT_DOUBLE_EQ(sigma(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(sigma(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(sigma(0, 1), 10.0);  // 2 mu e12
}

TEST(ElasticStress, LinearInStrain) {
  Eigen::Matrix2d e1, e2;
  e1 << 0.3, 0.1, 0.1, -0.2;
  e2 << -0.5, 0.4, 0.4, 0.9;
  const double lambda = 2.0, mu = 0.7;
  const Eigen::Matrix2d lhs = elastic_stress(e1 + 2.0 * e2, lambda, mu);
  const Eigen::Matrix2d rhs =
      elastic_stress(e1, lambda, mu) + 2.0 * elastic_stress(e2, lambda, mu);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ChiCoefficient, StrictThresholdSwitch) {
  Eigen::Matrix2d es = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d ef = Eigen::Matrix2d::Zero();
  const double chi0 = 0.1e6;
  const double eps = 0.05;

  // coincident strains: bonded
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, chi0, eps), chi0);

  // mismatch below threshold: bonded
  ef(0, 0) = 0.04;
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, chi0, eps), chi0);

  // mismatch exactly at threshold: condition is strict <, so debonded
  ef(0, 0) = eps;
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, chi0, eps), 0.0);

  // beyond threshold: debonded
  ef(0, 0) = 0.2;
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, chi0, eps), 0.0);
}

TEST(ChiCoefficient, FrobeniusNormUsesAllComponents) {
  Eigen::Matrix2d es = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d ef;
  // off-diagonal mismatch 0.03 each => Frobenius norm sqrt(2)*0.03 ~ 0.0424
  ef << 0.0, 0.03, 0.03, 0.0;
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, 1.0, 0.05), 1.0);
  EXPECT_DOUBLE_EQ(chi_coefficient(es, ef, 1.0, 0.04), 0.0);
}

TEST(ChiCoefficient, NonPositiveThresholdRejected) {
  const Eigen::Matrix2d z = Eigen::Matrix2d::Zero();
  EXPECT_THROW(chi_coefficient(z, z, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(chi_coefficient(z, z, 1.0, -1.0), std::invalid_argument);
}

TEST(Darcy, FluxOpposesPressureGradient) {
  // k = 1e-13, grad p = (1e6, 0) => q = (-1e-7, 0)
  const Eigen::Vector2d q = darcy_flux(Eigen::Vector2d(1e6, 0.0), 1e-13);
  EXPECT_DOUBLE_EQ(q.x(), -1e-7);
  EXPECT_DOUBLE_EQ(q.y(), 0.0);
  EXPECT_THROW(darcy_flux(Eigen::Vector2d(1.0, 0.0), 0.0),
               std::invalid_argument);
}

TEST(Knudsen, HalvesAtPoreSizeEqualToFreePath) {
  // omega = l_g, beta = 1: kappa = kappa_bg / 2
  EXPECT_DOUBLE_EQ(knudsen_conductivity(1e-3, 1e-3, 1.0, 0.08), 0.04);
}

TEST(Knudsen, LimitsAndMonotonicity) {
  const double kappa_bg = 0.08, l_g = 1e-3, beta = 1.0;
  // large pores recover the bulk value
  EXPECT_NEAR(knudsen_conductivity(1e3, l_g, beta, kappa_bg), kappa_bg,
              1e-6 * kappa_bg);
  // conductivity grows with pore size and never exceeds the bulk value
  double prev = 0.0;
  for (double omega = 1e-6; omega < 1.0; omega *= 10.0) {
    const double k = knudsen_conductivity(omega, l_g, beta, kappa_bg);
    EXPECT_GT(k, prev);
    EXPECT_LT(k, kappa_bg);
    prev = k;
  }
  EXPECT_THROW(knudsen_conductivity(0.0, l_g, beta, kappa_bg),
               std::invalid_argument);
  EXPECT_THROW(knudsen_conductivity(1.0, l_g, beta, -1.0),
               std::invalid_argument);
}

TEST(Exchange, CubicLawAndAntisymmetry) {
  // gain of a phase at 1 K from a neighbor at 3 K with h = 1: (3-1)^3 = 8
  EXPECT_DOUBLE_EQ(exchange_source(1.0, 3.0, 1.0), 8.0);
  // antisymmetric under swapping the two temperatures (exact in floating point)
  for (double a : {250.0, 300.0, 417.3}) {
    for (double b : {260.0, 300.0, 350.9}) {
      EXPECT_EQ(exchange_source(a, b, 0.7), -exchange_source(b, a, 0.7));
    }
  }
  // cubic in the difference, linear in h
  EXPECT_DOUBLE_EQ(exchange_source(0.0, 3.0, 2.0), 2.0 * 27.0);
  EXPECT_DOUBLE_EQ(exchange_source(3.0, 0.0, 2.0), -2.0 * 27.0);
}

TEST(Storage, ReferenceValue) {
  // storage_rate(dp_dt, C0, rho_g, phi_g) = C0 * (rho_g / phi_g) * dp_dt
  EXPECT_DOUBLE_EQ(storage_rate(1000.0, 8.5e-9, 1.836, 0.5),
                   8.5e-9 * (1.836 / 0.5) * 1000.0);
  EXPECT_THROW(storage_rate(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(PoreSize, AffineProfileAndPositivityCheck) {
  PoreSizeProfile prof{2e-3, 0.0, -0.325};
  EXPECT_DOUBLE_EQ(prof(0.0, 0.0), 2e-3);
  EXPECT_DOUBLE_EQ(prof(0.5, 4e-3), 2e-3 - 0.325 * 4e-3);
  EXPECT_TRUE(prof.positive_on(0.012, 0.006));
  // steeper slope drives the pore size negative at the far corner
  PoreSizeProfile bad{2e-3, 0.0, -0.5};
  EXPECT_FALSE(bad.positive_on(0.012, 0.006));
}

MechParams valid_mech_params() {
  MechParams p;
  p.phi_s = 0.45;
  p.phi_g = 0.5;
  p.phi_f = 0.05;
  p.lambda_s = 0.7e6;
  p.mu_s = 0.27e6;
  p.lambda_f = 5.77e6;
  p.mu_f = 3.84e6;
  p.chi0 = 0.1e6;
  p.eps_strain = 0.05;
  p.C0 = 8.5e-9;
  p.k = 1e-13;
  p.gamma_s = 0.0;
  p.gamma_f = 0.0;
  return p;
}

TEST(MechParams, ValidSetPasses) {
  EXPECT_TRUE(check(valid_mech_params()).empty());
  EXPECT_NO_THROW(validate(valid_mech_params()));
}

TEST(MechParams, ViolationsAreAllReported) {
  MechParams p = valid_mech_params();
  p.phi_s = 0.9;        // fractions no longer sum to one
  p.mu_s = 0.0;         // shear modulus must be positive
  p.C0 = -1.0;          // compressibility must be positive
  const auto issues = check(p);
  EXPECT_GE(issues.size(), 3u);
  EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(MechParams, FractionSumToleranceIsTight) {
  MechParams p = valid_mech_params();
  p.phi_f = 0.05 + 1e-6;
  EXPECT_FALSE(check(p).empty());
}

ThermalParams valid_thermal_params() {
  ThermalParams p;
  p.phi_s = 0.45;
  p.phi_g = 0.5;
  p.phi_f = 0.05;
  p.rho_s = 2650.0;
  p.rho_g = 1.836;
  p.rho_f = 1000.0;
  p.c_s = 750.0;
  p.c_g = 1005.0;
  p.c_f = 1200.0;
  p.kappa_s = 0.5;
  p.kappa_f = 0.066;
  p.kappa_bg = 0.08;
  p.l_g = 1e-3;
  p.beta = 1.0;
  p.pore_size = {2e-3, 0.0, -0.325};
  p.h_sg = 20.0;
  p.h_sf = 10.0;
  p.h_gf = 15.0;
  p.h_air = 20.0;
  p.theta_hot = 400.0;
  p.theta_cold = 300.0;
  return p;
}

TEST(ThermalParams, ValidSetPasses) {
  EXPECT_TRUE(check(valid_thermal_params()).empty());
}

TEST(ThermalParams, ViolationsAreReported) {
  ThermalParams p = valid_thermal_params();
  p.rho_g = 0.0;
  p.h_sg = -1.0;
  p.theta_hot = p.theta_cold - 1.0;
  const auto issues = check(p);
  EXPECT_GE(issues.size(), 3u);
  EXPECT_THROW(validate(p), std::invalid_argument);
}

}  // namespace
}  // namespace aeromix
