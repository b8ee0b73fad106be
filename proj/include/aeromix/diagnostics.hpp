#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "aeromix/mesh.hpp"
#include "aeromix/p1.hpp"
#include "aeromix/quadrature.hpp"
#include "aeromix/thermal.hpp"

namespace aeromix {

// Pointwise description of one phase for mixture bookkeeping.  rho is the
// true (material) density; the partial density is phi * rho.
struct PhaseSample {
  double rho = 0.0;
  double phi = 0.0;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();   // phase velocity
  Eigen::Matrix2d T = Eigen::Matrix2d::Zero();   // partial stress
  Eigen::Vector2d q = Eigen::Vector2d::Zero();   // partial heat flux
  double eps = 0.0;                              // specific internal energy
};

// Mixture fields built from the phases: mass-weighted velocity, stress and
// heat flux corrected by the diffusion velocities p_a = v_a - v.  The
// diffusion momenta sum to zero by construction; their numerical defect is
// reported for auditing.
struct MixtureSummary {
  double rho = 0.0;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double eps = 0.0;
  Eigen::Matrix2d T = Eigen::Matrix2d::Zero();
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  double diffusion_defect = 0.0;  // |sum of phi rho p_a|
};

template <std::size_t N>
inline MixtureSummary mixture_aggregates(
    const std::array<PhaseSample, N>& phases) {
  static_assert(N >= 1);
  MixtureSummary m;
  for (const PhaseSample& ph : phases) m.rho += ph.phi * ph.rho;
  if (!(m.rho > 0.0))
    throw std::invalid_argument("mixture_aggregates: total density must be > 0");

  for (const PhaseSample& ph : phases) m.v += (ph.phi * ph.rho / m.rho) * ph.v;

  Eigen::Vector2d defect = Eigen::Vector2d::Zero();
  for (const PhaseSample& ph : phases) {
    const double partial = ph.phi * ph.rho;
    const Eigen::Vector2d p = ph.v - m.v;
    defect += partial * p;
    m.eps += partial * (ph.eps + 0.5 * p.squaredNorm());
    m.T += ph.T - partial * p * p.transpose();
    m.q += ph.q - ph.T.transpose() * p + partial * ph.eps * p +
           0.5 * partial * p.squaredNorm() * p;
  }
  m.eps /= m.rho;
  m.diffusion_defect = defect.norm();
  return m;
}

// Element-wise residual of  d(a)/dt + div(F)  for a nodal scalar a (e.g. a
// partial density) and a nodal flux F, both linear per element: the time
// term is the element mean, the divergence is constant.
inline std::vector<double> mass_balance_residual(const Mesh& mesh,
                                                 const Eigen::VectorXd& a_old,
                                                 const Eigen::VectorXd& a_new,
                                                 const Eigen::VectorXd& flux,
                                                 double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("mass_balance_residual: dt must be > 0");
  if (a_old.size() != mesh.n_nodes() || a_new.size() != mesh.n_nodes() ||
      flux.size() != 2 * mesh.n_nodes())
    throw std::invalid_argument("mass_balance_residual: field sizes mismatch");

  std::vector<double> r(static_cast<std::size_t>(mesh.n_elements()), 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    double rate = 0.0, div = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int n = el.nodes[static_cast<std::size_t>(k)];
      rate += (a_new[n] - a_old[n]) / (3.0 * dt);
      const Vec2 gk = g.shape_grad[static_cast<std::size_t>(k)];
      div += flux[2 * n] * gk.x + flux[2 * n + 1] * gk.y;
    }
    r[static_cast<std::size_t>(e)] = rate + div;
  }
  return r;
}

// Total heat content  sum_a integral(rho_a phi_a c_a theta_a).  For linear
// elements the integral is (A/3) * sum of nodal values, which also equals
// the row-sum-lumped mass action, so discrete energy statements close to
// solver tolerance under either time-term variant.
inline double thermal_energy(const Mesh& mesh, const ThermalState& state,
                             const ThermalParams& params) {
  check_state(mesh, state);
  const auto coeffs = detail::phase_coeffs(params);
  const std::array<const Eigen::VectorXd*, 3> th = {&state.theta_s,
                                                    &state.theta_g,
                                                    &state.theta_f};
  double energy = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int a = 0; a < 3; ++a) {
      const double rho_c = coeffs[static_cast<std::size_t>(a)].rho_c;
      for (int i = 0; i < 3; ++i)
        energy += rho_c * (g.area / 3.0) *
                  (*th[a])[el.nodes[static_cast<std::size_t>(i)]];
    }
  }
  return energy;
}

// Net film heat flow into the domain through the hot and cold edges,
// evaluated at the given state [W per unit depth].
inline double robin_net_inflow(const Mesh& mesh, const ThermalState& state,
                               const ThermalParams& params,
                               const ThermalBCs& bcs, bool lumped = true) {
  check_state(mesh, state);
  const auto coeffs = detail::phase_coeffs(params);
  const std::array<const Eigen::VectorXd*, 3> th = {&state.theta_s,
                                                    &state.theta_g,
                                                    &state.theta_f};
  double inflow = 0.0;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    double data;
    if (f.tag == bcs.hot)
      data = params.theta_hot;
    else if (f.tag == bcs.cold)
      data = params.theta_cold;
    else
      continue;
    const Vec2 x0 = mesh.nodes[static_cast<std::size_t>(f.nodes[0])];
    const Vec2 x1 = mesh.nodes[static_cast<std::size_t>(f.nodes[1])];
    const double len = norm(x1 - x0);
    for (int a = 0; a < 3; ++a) {
      const double w = coeffs[static_cast<std::size_t>(a)].phi * params.h_air;
      if (lumped) {
        for (int i = 0; i < 2; ++i) {
          const int n = f.nodes[static_cast<std::size_t>(i)];
          inflow += w * (len / 2.0) * (data - (*th[a])[n]);
        }
      } else {
        for (const EdgeQuadPoint& q : edge_gauss2()) {
          const double tq = (1.0 - q.t) * (*th[a])[f.nodes[0]] +
                            q.t * (*th[a])[f.nodes[1]];
          inflow += w * q.weight * len * (data - tq);
        }
      }
    }
  }
  return inflow;
}

// Largest excursion of any phase temperature outside [lo, hi]; zero when the
// state respects the bounds.
inline double range_violation(const ThermalState& state, double lo, double hi) {
  double worst = 0.0;
  for (const Eigen::VectorXd* th :
       {&state.theta_s, &state.theta_g, &state.theta_f}) {
    worst = std::max(worst, lo - th->minCoeff());
    worst = std::max(worst, th->maxCoeff() - hi);
  }
  return std::max(worst, 0.0);
}

}  // namespace aeromix
