#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <array>

#include "aeromix/diagnostics.hpp"

namespace aeromix {
namespace {

TEST(Mixture, SinglePhaseIsTheIdentity) {
  PhaseSample ph;
  ph.rho = 2.5;
  ph.phi = 1.0;
  ph.v = Eigen::Vector2d(1.0, -2.0);
  ph.T << 3.0, 1.0, 1.0, -2.0;
  ph.q = Eigen::Vector2d(0.5, 0.25);
  ph.eps = 7.0;

  const MixtureSummary m = mixture_aggregates<1>({ph});
  EXPECT_DOUBLE_EQ(m.rho, 2.5);
  EXPECT_EQ(m.v, ph.v);
  EXPECT_DOUBLE_EQ(m.eps, 7.0);
  EXPECT_EQ(m.T, ph.T);
  EXPECT_EQ(m.q, ph.q);
  EXPECT_DOUBLE_EQ(m.diffusion_defect, 0.0);
}

TEST(Mixture, EqualVelocitiesCollapseTheDiffusionTerms) {
  std::array<PhaseSample, 3> phases;
  const Eigen::Vector2d v0(0.3, -0.7);
  const double rhos[3] = {2650.0, 1.8, 950.0};
  const double phis[3] = {0.45, 0.5, 0.05};
  Eigen::Matrix2d t_sum = Eigen::Matrix2d::Zero();
  for (int a = 0; a < 3; ++a) {
    phases[static_cast<std::size_t>(a)].rho = rhos[a];
    phases[static_cast<std::size_t>(a)].phi = phis[a];
    phases[static_cast<std::size_t>(a)].v = v0;
    phases[static_cast<std::size_t>(a)].T << 1.0 + a, 0.2, 0.2, 2.0 - a;
    phases[static_cast<std::size_t>(a)].eps = 10.0 * (a + 1);
    t_sum += phases[static_cast<std::size_t>(a)].T;
  }
  const MixtureSummary m = mixture_aggregates<3>(phases);
  EXPECT_NEAR((m.v - v0).norm(), 0.0, 1e-12 * v0.norm());
  EXPECT_NEAR(m.diffusion_defect, 0.0, 1e-9);  // absolute, rho is ~1e3
  // no diffusion velocities: stress is the plain sum of partial stresses
  EXPECT_NEAR((m.T - t_sum).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

// Two phases with partial densities 3 and 10 moving only along x.
// v = (3*2 + 10*0)/13 = 6/13; p1 = 20/13, p2 = -6/13 (x components).
TEST(Mixture, HandWorkedTwoPhaseExample) {
  std::array<PhaseSample, 2> phases;
  phases[0].rho = 6.0;
  phases[0].phi = 0.5;  // partial density 3
  phases[0].v = Eigen::Vector2d(2.0, 0.0);
  phases[0].T = Eigen::Matrix2d::Identity();
  phases[0].eps = 5.0;
  phases[0].q = Eigen::Vector2d(1.0, 0.0);

  phases[1].rho = 20.0;
  phases[1].phi = 0.5;  // partial density 10
  phases[1].v = Eigen::Vector2d::Zero();
  phases[1].T = 2.0 * Eigen::Matrix2d::Identity();
  phases[1].eps = 2.0;
  phases[1].q = Eigen::Vector2d::Zero();

  const MixtureSummary m = mixture_aggregates<2>(phases);
  EXPECT_DOUBLE_EQ(m.rho, 13.0);
  EXPECT_NEAR(m.v.x(), 6.0 / 13.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.v.y(), 0.0);
  // diffusion momenta cancel: 3*(20/13) + 10*(-6/13) = 0
  EXPECT_NEAR(m.diffusion_defect, 0.0, 1e-14);
  // T_xx = (1 + 2) - 3*(20/13)^2 - 10*(6/13)^2 = 3 - 1560/169
  EXPECT_NEAR(m.T(0, 0), 3.0 - 1560.0 / 169.0, 1e-12);
  EXPECT_NEAR(m.T(1, 1), 3.0, 1e-12);  // no y motion
  // eps = [3*(5 + 0.5*(20/13)^2) + 10*(2 + 0.5*(6/13)^2)] / 13
  const double eps_expected =
      (3.0 * (5.0 + 0.5 * (20.0 / 13.0) * (20.0 / 13.0)) +
       10.0 * (2.0 + 0.5 * (6.0 / 13.0) * (6.0 / 13.0))) /
      13.0;
  EXPECT_NEAR(m.eps, eps_expected, 1e-13);
}

TEST(Mixture, PhaseOrderDoesNotMatter) {
  std::array<PhaseSample, 3> phases;
  for (int a = 0; a < 3; ++a) {
    auto& ph = phases[static_cast<std::size_t>(a)];
    ph.rho = 1.0 + a;
    ph.phi = (a == 0 ? 0.2 : a == 1 ? 0.3 : 0.5);
    ph.v = Eigen::Vector2d(0.1 * a, 1.0 - 0.4 * a);
    ph.T << a, 0.1, 0.1, -a;
    ph.q = Eigen::Vector2d(a, a * a);
    ph.eps = 2.0 * a + 1.0;
  }
  const MixtureSummary m1 = mixture_aggregates<3>(phases);
  std::swap(phases[0], phases[2]);
  const MixtureSummary m2 = mixture_aggregates<3>(phases);
  EXPECT_NEAR(m1.rho, m2.rho, 1e-15);
  EXPECT_NEAR((m1.v - m2.v).norm(), 0.0, 1e-15);
  EXPECT_NEAR(m1.eps, m2.eps, 1e-13);
  EXPECT_NEAR((m1.T - m2.T).cwiseAbs().maxCoeff(), 0.0, 1e-13);
  EXPECT_NEAR((m1.q - m2.q).norm(), 0.0, 1e-13);
}

TEST(Mixture, NonPositiveDensityRejected) {
  std::array<PhaseSample, 1> phases;
  phases[0].rho = 0.0;
  phases[0].phi = 1.0;
  EXPECT_THROW(mixture_aggregates<1>(phases), std::invalid_argument);
}

TEST(MassBalance, StaticStateHasZeroResidual) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 3, 3);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(mesh.n_nodes(), 4.2);
  const Eigen::VectorXd flux = Eigen::VectorXd::Zero(2 * mesh.n_nodes());
  for (double r : mass_balance_residual(mesh, a, a, flux, 0.1))
    EXPECT_EQ(r, 0.0);
}

// Uniform rate r0 plus a linear flux with constant divergence d0: the
// element residual must be exactly r0 + d0.
TEST(MassBalance, LinearFieldsAreExact) {
  const Mesh mesh = generate_rect_mesh(2.0, 1.0, 4, 3);
  const double r0 = 0.75, d0 = -0.35, dt = 0.2;
  Eigen::VectorXd a_old(mesh.n_nodes()), a_new(mesh.n_nodes());
  Eigen::VectorXd flux(2 * mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Vec2 xy = mesh.nodes[static_cast<std::size_t>(n)];
    a_old[n] = 1.0 + 0.3 * xy.x - 0.2 * xy.y;
    a_new[n] = a_old[n] + dt * r0;
    flux[2 * n] = d0 * xy.x + 0.4 * xy.y;  // div = d0
    flux[2 * n + 1] = 0.9 * xy.x;
  }
  for (double r : mass_balance_residual(mesh, a_old, a_new, flux, dt))
    EXPECT_NEAR(r, r0 + d0, 1e-12);

  EXPECT_THROW(mass_balance_residual(mesh, a_old, a_new, flux, 0.0),
               std::invalid_argument);
  EXPECT_THROW(mass_balance_residual(mesh, a_old.head(3), a_new, flux, dt),
               std::invalid_argument);
}

ThermalParams energy_params() {
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
  p.pore_size = {2e-3, 0.0, 0.0};
  p.h_air = 20.0;
  p.theta_hot = 400.0;
  p.theta_cold = 300.0;
  return p;
}

TEST(ThermalEnergy, UniformAndLinearFieldsIntegrateExactly) {
  const double lx = 0.012, ly = 0.006;
  const Mesh mesh = generate_rect_mesh(lx, ly, 5, 4);
  const ThermalParams params = energy_params();
  const double rho_c_total = params.rho_s * params.phi_s * params.c_s +
                             params.rho_g * params.phi_g * params.c_g +
                             params.rho_f * params.phi_f * params.c_f;

  const ThermalState uniform = initial_thermal_state(mesh, 350.0);
  EXPECT_NEAR(thermal_energy(mesh, uniform, params),
              rho_c_total * 350.0 * lx * ly, 1e-12 * rho_c_total * 350.0 * lx * ly);

  // theta(y) = 300 + (100/ly) y in every phase: integral of y is lx*ly^2/2
  ThermalState linear = initial_thermal_state(mesh, 0.0);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const double y = mesh.nodes[static_cast<std::size_t>(n)].y;
    const double value = 300.0 + (100.0 / ly) * y;
    linear.theta_s[n] = value;
    linear.theta_g[n] = value;
    linear.theta_f[n] = value;
  }
  const double exact =
      rho_c_total * (300.0 * lx * ly + (100.0 / ly) * lx * ly * ly / 2.0);
  EXPECT_NEAR(thermal_energy(mesh, linear, params), exact, 1e-10 * exact);
}

TEST(RobinInflow, UniformStateOracle) {
  const double lx = 0.012, ly = 0.006;
  const Mesh mesh = generate_rect_mesh(lx, ly, 6, 3);
  const ThermalParams params = energy_params();
  const ThermalBCs bcs;  // hot top, cold bottom

  const double theta0 = 320.0;
  const ThermalState state = initial_thermal_state(mesh, theta0);
  // fractions sum to one, so the film sees the full boundary length once
  const double expected = params.h_air * lx *
                          ((params.theta_hot - theta0) +
                           (params.theta_cold - theta0));
  const double lumped = robin_net_inflow(mesh, state, params, bcs, true);
  const double consistent = robin_net_inflow(mesh, state, params, bcs, false);
  EXPECT_NEAR(lumped, expected, 1e-12 * std::abs(expected));
  EXPECT_NEAR(consistent, expected, 1e-12 * std::abs(expected));
}

TEST(RangeViolation, ReportsWorstExcursion) {
  const Mesh mesh = generate_rect_mesh(1.0, 1.0, 2, 2);
  ThermalState state = initial_thermal_state(mesh, 350.0);
  EXPECT_DOUBLE_EQ(range_violation(state, 300.0, 400.0), 0.0);
  state.theta_g[3] = 298.0;  // 2 below the floor
  EXPECT_DOUBLE_EQ(range_violation(state, 300.0, 400.0), 2.0);
  state.theta_f[1] = 403.0;  // 3 above the ceiling wins
  EXPECT_DOUBLE_EQ(range_violation(state, 300.0, 400.0), 3.0);
}

}  // namespace
}  // namespace aeromix
