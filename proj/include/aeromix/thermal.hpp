#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "aeromix/assembly.hpp"
#include "aeromix/constitutive.hpp"
#include "aeromix/dofmap.hpp"
#include "aeromix/mesh.hpp"
#include "aeromix/p1.hpp"
#include "aeromix/quadrature.hpp"

namespace aeromix {

// Nodal temperatures of the three phases.
struct ThermalState {
  Eigen::VectorXd theta_s;
  Eigen::VectorXd theta_g;
  Eigen::VectorXd theta_f;
  double time = 0.0;
};

inline ThermalState initial_thermal_state(const Mesh& mesh, double value) {
  ThermalState s;
  s.theta_s = Eigen::VectorXd::Constant(mesh.n_nodes(), value);
  s.theta_g = s.theta_s;
  s.theta_f = s.theta_s;
  s.time = 0.0;
  return s;
}

inline void check_state(const Mesh& mesh, const ThermalState& s) {
  const int nn = mesh.n_nodes();
  if (s.theta_s.size() != nn || s.theta_g.size() != nn ||
      s.theta_f.size() != nn)
    throw InvalidState("ThermalState: field sizes do not match the mesh");
  if (!s.theta_s.allFinite() || !s.theta_g.allFinite() ||
      !s.theta_f.allFinite())
    throw InvalidState("ThermalState: non-finite entries");
}

struct ThermalBCs {
  BoundaryTag hot = BoundaryTag::top;     // film condition against theta_hot
  BoundaryTag cold = BoundaryTag::bottom; // film condition against theta_cold
  // Verification hooks: when set, every boundary node is pinned to these
  // fields (x, y, t) and no film condition is applied.
  std::function<double(double, double, double)> ts_exact;
  std::function<double(double, double, double)> tg_exact;
  std::function<double(double, double, double)> tf_exact;

  bool has_exact() const {
    return static_cast<bool>(ts_exact) || static_cast<bool>(tg_exact) ||
           static_cast<bool>(tf_exact);
  }
};

struct ThermalOptions {
  // Row-sum lumping of the time and film terms; keeps short-time solutions
  // inside the boundary-data range on structured meshes.
  bool mass_lumping = true;
};

struct NewtonSettings {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
  int max_iter = 25;
  double damping = 1.0;  // initial step fraction
  int max_halvings = 5;
};

inline void validate(const NewtonSettings& s) {
  if (!(s.abs_tol > 0.0) || !(s.rel_tol >= 0.0))
    throw std::invalid_argument("NewtonSettings: tolerances must be positive");
  if (s.max_iter < 1)
    throw std::invalid_argument("NewtonSettings: max_iter must be >= 1");
  if (!(s.damping > 0.0 && s.damping <= 1.0))
    throw std::invalid_argument("NewtonSettings: damping must be in (0,1]");
  if (s.max_halvings < 0)
    throw std::invalid_argument("NewtonSettings: max_halvings must be >= 0");
}

// Optional volumetric heat sources (x, y, t) for verification runs.
struct ThermalSources {
  std::function<double(double, double, double)> f_s;
  std::function<double(double, double, double)> f_g;
  std::function<double(double, double, double)> f_f;
};

namespace detail {

struct PhaseCoeffs {
  double rho_c;    // rho * phi * c
  double phi;
  bool knudsen;    // conductivity varies with the pore-size field
  double kappa;    // used when !knudsen
};

inline std::array<PhaseCoeffs, 3> phase_coeffs(const ThermalParams& p) {
  return {PhaseCoeffs{p.rho_s * p.phi_s * p.c_s, p.phi_s, false, p.kappa_s},
          PhaseCoeffs{p.rho_g * p.phi_g * p.c_g, p.phi_g, true, 0.0},
          PhaseCoeffs{p.rho_f * p.phi_f * p.c_f, p.phi_f, false, p.kappa_f}};
}

// Pairwise exchange coefficients indexed by phase (s=0, g=1, f=2).
inline double h_between(const ThermalParams& p, int a, int b) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  if (lo == 0 && hi == 1) return p.h_sg;
  if (lo == 0 && hi == 2) return p.h_sf;
  return p.h_gf;
}

// Integral of the gas conductivity over one element (exact for the affine
// pore-size field to the quadrature degree).
inline double gas_conductivity_integral(const ElementGeometry& g,
                                        const ThermalParams& p) {
  double acc = 0.0;
  for (const QuadPoint& q : triangle_quadrature(2).points) {
    const Vec2 x = bary_to_xy(g, q.bary);
    acc += q.weight * 2.0 * g.area *
           knudsen_conductivity(p.pore_size(x.x, x.y), p.l_g, p.beta,
                                p.kappa_bg);
  }
  return acc;
}

template <typename CellOp, typename FacetOp>
inline void for_thermal_terms(const Mesh& mesh, const ThermalParams& params,
                              const ThermalBCs& bcs, CellOp&& cell,
                              FacetOp&& facet) {
  for (int e = 0; e < mesh.n_elements(); ++e) cell(e);
  if (bcs.has_exact()) return;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    if (f.tag == bcs.hot)
      facet(f, params.theta_hot);
    else if (f.tag == bcs.cold)
      facet(f, params.theta_cold);
  }
}

inline std::vector<DirichletBC> thermal_dirichlet(const Mesh& mesh,
                                                  const DofMap& dm,
                                                  const ThermalBCs& bcs,
                                                  double t_new) {
  std::vector<DirichletBC> out;
  if (!bcs.has_exact()) return out;
  if (!bcs.ts_exact || !bcs.tg_exact || !bcs.tf_exact)
    throw std::invalid_argument(
        "thermal_step: verification BCs need all three phase fields set");
  for (int node : all_boundary_nodes(mesh)) {
    const Vec2 x = mesh.nodes[static_cast<std::size_t>(node)];
    out.push_back({dm.index(0, node), bcs.ts_exact(x.x, x.y, t_new)});
    out.push_back({dm.index(1, node), bcs.tg_exact(x.x, x.y, t_new)});
    out.push_back({dm.index(2, node), bcs.tf_exact(x.x, x.y, t_new)});
  }
  return out;
}

}  // namespace detail

// Weak-form residual of the backward-Euler step at a trial state: time term,
// conduction, cubic interphase exchange, film boundary terms, and sources,
// with everything but the time term scaled by dt.  The three phase blocks
// are stacked [theta_s | theta_g | theta_f].
inline Eigen::VectorXd thermal_residual(const Mesh& mesh,
                                        const ThermalState& guess,
                                        const ThermalState& state_n,
                                        const ThermalParams& params,
                                        const ThermalBCs& bcs, double dt,
                                        const ThermalOptions& options = {},
                                        const ThermalSources* sources = nullptr) {
  if (!(dt > 0.0))
    throw std::invalid_argument("thermal_residual: dt must be > 0");
  check_state(mesh, guess);
  check_state(mesh, state_n);

  const int nn = mesh.n_nodes();
  const auto coeffs = detail::phase_coeffs(params);
  const std::array<const Eigen::VectorXd*, 3> th = {&guess.theta_s,
                                                    &guess.theta_g,
                                                    &guess.theta_f};
  const std::array<const Eigen::VectorXd*, 3> th_n = {&state_n.theta_s,
                                                      &state_n.theta_g,
                                                      &state_n.theta_f};
  const std::array<std::function<double(double, double, double)>, 3> f = {
      sources ? sources->f_s : nullptr, sources ? sources->f_g : nullptr,
      sources ? sources->f_f : nullptr};
  const double t_new = state_n.time + dt;

  Eigen::VectorXd r = Eigen::VectorXd::Zero(3 * nn);
  const QuadratureRule& exch_rule = triangle_quadrature(4);

  detail::for_thermal_terms(
      mesh, params, bcs,
      [&](int e) {
        const ElementGeometry g = element_geometry(mesh, e);
        const auto& el = mesh.elements[static_cast<std::size_t>(e)];
        const double area = g.area;
        const double kappa_g_int = detail::gas_conductivity_integral(g, params);

        for (int a = 0; a < 3; ++a) {
          const double cond_int =
              coeffs[static_cast<std::size_t>(a)].knudsen
                  ? kappa_g_int
                  : coeffs[static_cast<std::size_t>(a)].kappa * area;
          const double phi = coeffs[static_cast<std::size_t>(a)].phi;
          const double rho_c = coeffs[static_cast<std::size_t>(a)].rho_c;

          // time term
          if (options.mass_lumping) {
            for (int i = 0; i < 3; ++i) {
              const int n = el.nodes[static_cast<std::size_t>(i)];
              r[a * nn + n] +=
                  rho_c * (area / 3.0) * ((*th[a])[n] - (*th_n[a])[n]);
            }
          } else {
            for (int i = 0; i < 3; ++i) {
              const int ni = el.nodes[static_cast<std::size_t>(i)];
              for (int j = 0; j < 3; ++j) {
                const int nj = el.nodes[static_cast<std::size_t>(j)];
                const double mij = (area / 12.0) * (i == j ? 2.0 : 1.0);
                r[a * nn + ni] +=
                    rho_c * mij * ((*th[a])[nj] - (*th_n[a])[nj]);
              }
            }
          }

          // conduction (gradients constant per element)
          Vec2 grad_th{0.0, 0.0};
          for (int j = 0; j < 3; ++j) {
            const int nj = el.nodes[static_cast<std::size_t>(j)];
            grad_th = grad_th + (*th[a])[nj] * g.shape_grad[static_cast<std::size_t>(j)];
          }
          for (int i = 0; i < 3; ++i) {
            const int ni = el.nodes[static_cast<std::size_t>(i)];
            r[a * nn + ni] += dt * phi * cond_int *
                              dot(grad_th, g.shape_grad[static_cast<std::size_t>(i)]);
          }
        }

        // interphase exchange and sources
        for (const QuadPoint& q : exch_rule.points) {
          const double scale = dt * q.weight * 2.0 * area;
          std::array<double, 3> tq = {0.0, 0.0, 0.0};
          for (int a = 0; a < 3; ++a)
            for (int i = 0; i < 3; ++i)
              tq[static_cast<std::size_t>(a)] +=
                  q.bary[static_cast<std::size_t>(i)] *
                  (*th[a])[el.nodes[static_cast<std::size_t>(i)]];
          const Vec2 x = bary_to_xy(g, q.bary);
          for (int a = 0; a < 3; ++a) {
            double gain = 0.0;
            for (int b = 0; b < 3; ++b) {
              if (b == a) continue;
              gain += exchange_source(tq[static_cast<std::size_t>(a)],
                                      tq[static_cast<std::size_t>(b)],
                                      detail::h_between(params, a, b));
            }
            double fx = 0.0;
            if (f[static_cast<std::size_t>(a)])
              fx = f[static_cast<std::size_t>(a)](x.x, x.y, t_new);
            for (int i = 0; i < 3; ++i) {
              const int ni = el.nodes[static_cast<std::size_t>(i)];
              r[a * nn + ni] -= scale * (gain + fx) *
                                q.bary[static_cast<std::size_t>(i)];
            }
          }
        }
      },
      [&](const BoundaryFacet& fct, double data) {
        const Vec2 x0 = mesh.nodes[static_cast<std::size_t>(fct.nodes[0])];
        const Vec2 x1 = mesh.nodes[static_cast<std::size_t>(fct.nodes[1])];
        const double len = norm(x1 - x0);
        for (int a = 0; a < 3; ++a) {
          const double w =
              dt * coeffs[static_cast<std::size_t>(a)].phi * params.h_air;
          if (options.mass_lumping) {
            for (int i = 0; i < 2; ++i) {
              const int n = fct.nodes[static_cast<std::size_t>(i)];
              r[a * nn + n] += w * (len / 2.0) * ((*th[a])[n] - data);
            }
          } else {
            for (const EdgeQuadPoint& q : edge_gauss2()) {
              const double psi[2] = {1.0 - q.t, q.t};
              const double tq = psi[0] * (*th[a])[fct.nodes[0]] +
                                psi[1] * (*th[a])[fct.nodes[1]];
              for (int i = 0; i < 2; ++i)
                r[a * nn + fct.nodes[static_cast<std::size_t>(i)]] +=
                    w * q.weight * len * (tq - data) * psi[i];
            }
          }
        }
      });
  return r;
}

// Exact Jacobian of thermal_residual with respect to the trial state.
inline SparseSystem thermal_jacobian(const Mesh& mesh,
                                     const ThermalState& guess,
                                     const ThermalParams& params,
                                     const ThermalBCs& bcs, double dt,
                                     const ThermalOptions& options = {}) {
  if (!(dt > 0.0))
    throw std::invalid_argument("thermal_jacobian: dt must be > 0");
  check_state(mesh, guess);

  const int nn = mesh.n_nodes();
  const auto coeffs = detail::phase_coeffs(params);
  const std::array<const Eigen::VectorXd*, 3> th = {&guess.theta_s,
                                                    &guess.theta_g,
                                                    &guess.theta_f};
  const QuadratureRule& exch_rule = triangle_quadrature(4);

  const ElementKernel kernel = [&](int e, ElementContribution& c) {
    c.resize(9);
    const ElementGeometry g = element_geometry(mesh, e);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    const double area = g.area;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 3; ++i)
        c.dofs[static_cast<std::size_t>(3 * a + i)] =
            a * nn + el.nodes[static_cast<std::size_t>(i)];

    const double kappa_g_int = detail::gas_conductivity_integral(g, params);
    for (int a = 0; a < 3; ++a) {
      const double cond_int = coeffs[static_cast<std::size_t>(a)].knudsen
                                  ? kappa_g_int
                                  : coeffs[static_cast<std::size_t>(a)].kappa * area;
      const double phi = coeffs[static_cast<std::size_t>(a)].phi;
      const double rho_c = coeffs[static_cast<std::size_t>(a)].rho_c;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double mij;
          if (options.mass_lumping)
            mij = (i == j) ? area / 3.0 : 0.0;
          else
            mij = (area / 12.0) * (i == j ? 2.0 : 1.0);
          c.matrix(3 * a + i, 3 * a + j) +=
              rho_c * mij +
              dt * phi * cond_int *
                  dot(g.shape_grad[static_cast<std::size_t>(i)],
                      g.shape_grad[static_cast<std::size_t>(j)]);
        }
      }
    }

    for (const QuadPoint& q : exch_rule.points) {
      const double scale = dt * q.weight * 2.0 * area;
      std::array<double, 3> tq = {0.0, 0.0, 0.0};
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
          tq[static_cast<std::size_t>(a)] +=
              q.bary[static_cast<std::size_t>(i)] *
              (*th[a])[el.nodes[static_cast<std::size_t>(i)]];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          if (b == a) continue;
          const double d = tq[static_cast<std::size_t>(b)] -
                           tq[static_cast<std::size_t>(a)];
          const double slope = 3.0 * detail::h_between(params, a, b) * d * d;
          // d(gain_a)/d(theta_a) = -slope, d(gain_a)/d(theta_b) = +slope;
          // the residual carries -gain, so signs flip once more here.
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              const double lij = q.bary[static_cast<std::size_t>(i)] *
                                 q.bary[static_cast<std::size_t>(j)];
              c.matrix(3 * a + i, 3 * a + j) += scale * slope * lij;
              c.matrix(3 * a + i, 3 * b + j) -= scale * slope * lij;
            }
          }
        }
      }
    }
  };

  const FacetKernel facet_kernel = [&](const BoundaryFacet& fct,
                                       ElementContribution& c) {
    if (fct.tag != bcs.hot && fct.tag != bcs.cold) return;
    c.resize(6);
    const Vec2 x0 = mesh.nodes[static_cast<std::size_t>(fct.nodes[0])];
    const Vec2 x1 = mesh.nodes[static_cast<std::size_t>(fct.nodes[1])];
    const double len = norm(x1 - x0);
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < 2; ++i)
        c.dofs[static_cast<std::size_t>(2 * a + i)] =
            a * nn + fct.nodes[static_cast<std::size_t>(i)];
      const double w = dt * coeffs[static_cast<std::size_t>(a)].phi * params.h_air;
      if (options.mass_lumping) {
        for (int i = 0; i < 2; ++i)
          c.matrix(2 * a + i, 2 * a + i) += w * (len / 2.0);
      } else {
        for (const EdgeQuadPoint& q : edge_gauss2()) {
          const double psi[2] = {1.0 - q.t, q.t};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              c.matrix(2 * a + i, 2 * a + j) += w * q.weight * len * psi[i] * psi[j];
        }
      }
    }
  };

  if (bcs.has_exact()) return assemble(mesh, 3 * nn, kernel);
  return assemble(mesh, 3 * nn, kernel, facet_kernel);
}

struct ThermalStepReport {
  int newton_iterations = 0;
  double final_residual = 0.0;
  int halvings = 0;
};

// One backward-Euler step solved by damped Newton with the exact Jacobian.
// Convergence means ||R|| <= abs_tol or ||R|| <= rel_tol * ||R_initial||;
// a state already in balance converges in zero iterations.
inline ThermalState thermal_step(const Mesh& mesh, const ThermalState& state_n,
                                 const ThermalParams& params,
                                 const ThermalBCs& bcs,
                                 const NewtonSettings& settings, double dt,
                                 const ThermalOptions& options = {},
                                 const ThermalSources* sources = nullptr,
                                 ThermalStepReport* report = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("thermal_step: dt must be > 0");
  validate(params);
  validate(settings);
  check_state(mesh, state_n);

  const int nn = mesh.n_nodes();
  DofMap dm(nn);
  dm.add_field("theta_s", 1);
  dm.add_field("theta_g", 1);
  dm.add_field("theta_f", 1);

  const double t_new = state_n.time + dt;
  const std::vector<DirichletBC> pins =
      detail::thermal_dirichlet(mesh, dm, bcs, t_new);

  ThermalState guess = state_n;
  guess.time = t_new;
  for (const DirichletBC& bc : pins) {
    const int a = bc.dof / nn, n = bc.dof % nn;
    (a == 0 ? guess.theta_s : a == 1 ? guess.theta_g : guess.theta_f)[n] =
        bc.value;
  }

  const auto masked_residual = [&](const ThermalState& trial) {
    Eigen::VectorXd r = thermal_residual(mesh, trial, state_n, params, bcs, dt,
                                         options, sources);
    for (const DirichletBC& bc : pins) r[bc.dof] = 0.0;
    return r;
  };

  const auto add_update = [&](const ThermalState& base,
                              const Eigen::VectorXd& delta, double alpha) {
    ThermalState out = base;
    out.theta_s += alpha * delta.segment(0, nn);
    out.theta_g += alpha * delta.segment(nn, nn);
    out.theta_f += alpha * delta.segment(2 * nn, nn);
    return out;
  };

  Eigen::VectorXd r = masked_residual(guess);
  double rnorm = r.norm();
  const double rnorm0 = rnorm;
  int iters = 0;
  int halvings_total = 0;

  while (!(rnorm <= settings.abs_tol ||
           (rnorm0 > 0.0 && rnorm <= settings.rel_tol * rnorm0))) {
    if (iters >= settings.max_iter)
      throw NewtonFailure("thermal_step: no convergence after " +
                          std::to_string(iters) + " iterations at t=" +
                          std::to_string(t_new) + " (residual " +
                          std::to_string(rnorm) + ")");
    SparseSystem jac = thermal_jacobian(mesh, guess, params, bcs, dt, options);
    jac.rhs = -r;
    std::vector<DirichletBC> zero_pins;
    zero_pins.reserve(pins.size());
    for (const DirichletBC& bc : pins) zero_pins.push_back({bc.dof, 0.0});
    apply_dirichlet(jac, zero_pins);
    const Eigen::VectorXd delta = solve_linear(jac);

    double alpha = settings.damping;
    ThermalState trial = add_update(guess, delta, alpha);
    Eigen::VectorXd r_trial = masked_residual(trial);
    int halvings = 0;
    while (r_trial.norm() > rnorm && halvings < settings.max_halvings) {
      alpha *= 0.5;
      trial = add_update(guess, delta, alpha);
      r_trial = masked_residual(trial);
      ++halvings;
    }
    halvings_total += halvings;
    guess = std::move(trial);
    r = std::move(r_trial);
    rnorm = r.norm();
    ++iters;
  }

  if (report) {
    report->newton_iterations = iters;
    report->final_residual = rnorm;
    report->halvings = halvings_total;
  }
  guess.time = t_new;
  return guess;
}

// Temperatures of all three phases sampled along the vertical line
// x = x_frac * lx at the structured mesh's row heights.
struct CenterlineSample {
  double y;
  double theta_s, theta_g, theta_f;
};

inline std::vector<CenterlineSample> centerline_profile(
    const Mesh& mesh, const ThermalState& state, double x_frac) {
  if (!(x_frac >= 0.0 && x_frac <= 1.0))
    throw std::invalid_argument("centerline_profile: x_frac must be in [0,1]");
  if (mesh.nx < 1 || mesh.ny < 1)
    throw std::invalid_argument(
        "centerline_profile: needs a structured mesh");
  check_state(mesh, state);

  const double x = x_frac * mesh.lx;
  std::vector<CenterlineSample> rows;
  rows.reserve(static_cast<std::size_t>(mesh.ny + 1));
  for (int j = 0; j <= mesh.ny; ++j) {
    const double y = mesh.ly * j / mesh.ny;
    const PointLocation loc = locate_point(mesh, x, y);
    const auto& el = mesh.elements[static_cast<std::size_t>(loc.element)];
    CenterlineSample row{y, 0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const int n = el.nodes[static_cast<std::size_t>(k)];
      const double l = loc.bary[static_cast<std::size_t>(k)];
      row.theta_s += l * state.theta_s[n];
      row.theta_g += l * state.theta_g[n];
      row.theta_f += l * state.theta_f[n];
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aeromix
