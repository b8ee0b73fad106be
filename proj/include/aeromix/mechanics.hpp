#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "aeromix/assembly.hpp"
#include "aeromix/constitutive.hpp"
#include "aeromix/dofmap.hpp"
#include "aeromix/mesh.hpp"
#include "aeromix/p1.hpp"
#include "aeromix/quadrature.hpp"

namespace aeromix {

// Nodal pore pressure and the two solid displacement fields, plus the
// element-wise seepage flux recovered from the discrete pressure.
struct MechState {
  Eigen::VectorXd p;    // [Pa], one per node
  Eigen::VectorXd u_s;  // [m], interleaved (x,y) per node
  Eigen::VectorXd u_f;
  std::vector<Eigen::Vector2d> G;  // [m/s], one per element
  double time = 0.0;
};

inline MechState initial_mech_state(const Mesh& mesh) {
  MechState s;
  s.p = Eigen::VectorXd::Zero(mesh.n_nodes());
  s.u_s = Eigen::VectorXd::Zero(2 * mesh.n_nodes());
  s.u_f = Eigen::VectorXd::Zero(2 * mesh.n_nodes());
  s.G.assign(static_cast<std::size_t>(mesh.n_elements()),
             Eigen::Vector2d::Zero());
  s.time = 0.0;
  return s;
}

inline void check_state(const Mesh& mesh, const MechState& s) {
  if (s.p.size() != mesh.n_nodes() || s.u_s.size() != 2 * mesh.n_nodes() ||
      s.u_f.size() != 2 * mesh.n_nodes())
    throw InvalidState("MechState: field sizes do not match the mesh");
  if (!s.p.allFinite() || !s.u_s.allFinite() || !s.u_f.allFinite())
    throw InvalidState("MechState: non-finite entries");
}

// How the fiber displacement is anchored: pinned at the bottom only, or
// driven like the skeleton (pinned bottom, prescribed top).
enum class FiberBcMode { bottom_fixed, mirror_skeleton };

// How the debonding switch is evaluated within a step: frozen at the last
// accepted state, or iterated until the element on/off pattern stabilizes.
enum class ChiMode { lagged, fixed_point };

struct MechBCs {
  Eigen::Vector2d top_displacement = Eigen::Vector2d::Zero();  // [m]
  double ramp_time = 0.0;  // [s]; <= 0 applies the full value immediately
  bool fix_bottom = true;
  std::set<BoundaryTag> drained = {BoundaryTag::bottom, BoundaryTag::right,
                                   BoundaryTag::top, BoundaryTag::left};
  FiberBcMode fiber_mode = FiberBcMode::bottom_fixed;

  // Verification hooks: when set, every boundary node is pinned to these
  // fields (x, y, t) instead of the engineering constraints above.
  std::function<double(double, double, double)> p_exact;
  std::function<Eigen::Vector2d(double, double, double)> us_exact;
  std::function<Eigen::Vector2d(double, double, double)> uf_exact;

  bool has_exact() const {
    return static_cast<bool>(p_exact) || static_cast<bool>(us_exact) ||
           static_cast<bool>(uf_exact);
  }
};

struct MechOptions {
  bool pressure_coupling = true;  // keep the phi_a grad(p) momentum term
  ChiMode chi_mode = ChiMode::lagged;
  int chi_max_sweeps = 10;
};

// Optional volumetric forcing (x, y, t) for verification runs.
struct MechSources {
  std::function<double(double, double, double)> f_p;
  std::function<Eigen::Vector2d(double, double, double)> f_s;
  std::function<Eigen::Vector2d(double, double, double)> f_f;
};

struct MechStepReport {
  int chi_sweeps = 0;
  bool chi_converged = true;
};

namespace detail {

// Element strain of an interleaved displacement field (constant per element).
inline Eigen::Matrix2d element_strain(const Mesh& mesh,
                                      const ElementGeometry& g, int e,
                                      const Eigen::VectorXd& u) {
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  for (int k = 0; k < 3; ++k) {
    const int n = el.nodes[static_cast<std::size_t>(k)];
    const Vec2 gk = g.shape_grad[static_cast<std::size_t>(k)];
    grad(0, 0) += u[2 * n] * gk.x;
    grad(0, 1) += u[2 * n] * gk.y;
    grad(1, 0) += u[2 * n + 1] * gk.x;
    grad(1, 1) += u[2 * n + 1] * gk.y;
  }
  return strain(grad);
}

// Voigt strain-displacement matrix (exx, eyy, gxy) x (6 nodal dofs).
inline Eigen::Matrix<double, 3, 6> b_matrix(const ElementGeometry& g) {
  Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    const Vec2 gk = g.shape_grad[static_cast<std::size_t>(k)];
    b(0, 2 * k) = gk.x;
    b(1, 2 * k + 1) = gk.y;
    b(2, 2 * k) = gk.y;
    b(2, 2 * k + 1) = gk.x;
  }
  return b;
}

inline Eigen::Matrix3d voigt_elastic(double lambda, double mu) {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d(0, 0) = d(1, 1) = lambda + 2.0 * mu;
  d(0, 1) = d(1, 0) = lambda;
  d(2, 2) = mu;
  return d;
}

inline Eigen::Matrix3d voigt_identity() {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d(0, 0) = d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  return d;
}

// P1 mass matrix  (A/12) [[2,1,1],[1,2,1],[1,1,2]].
inline Eigen::Matrix3d p1_mass(double area) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return (area / 12.0) * m;
}

}  // namespace detail

// Coupling stiffness per element for a given state: chi0 where the solids
// still strain together, zero where the mismatch crossed the threshold.
inline std::vector<double> chi_field(const Mesh& mesh, const MechState& state,
                                     const MechParams& params) {
  std::vector<double> chi(static_cast<std::size_t>(mesh.n_elements()), 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const Eigen::Matrix2d es = detail::element_strain(mesh, g, e, state.u_s);
    const Eigen::Matrix2d ef = detail::element_strain(mesh, g, e, state.u_f);
    chi[static_cast<std::size_t>(e)] =
        chi_coefficient(es, ef, params.chi0, params.eps_strain);
  }
  return chi;
}

// Seepage flux from a nodal pressure field: G = -k grad(p), constant per
// element for linear pressure.
inline std::vector<Eigen::Vector2d> postprocess_darcy(
    const Mesh& mesh, const Eigen::VectorXd& p, double k) {
  std::vector<Eigen::Vector2d> flux(
      static_cast<std::size_t>(mesh.n_elements()));
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    Eigen::Vector2d grad_p = Eigen::Vector2d::Zero();
    for (int j = 0; j < 3; ++j) {
      const int n = el.nodes[static_cast<std::size_t>(j)];
      grad_p.x() += p[n] * g.shape_grad[static_cast<std::size_t>(j)].x;
      grad_p.y() += p[n] * g.shape_grad[static_cast<std::size_t>(j)].y;
    }
    flux[static_cast<std::size_t>(e)] = darcy_flux(grad_p, k);
  }
  return flux;
}

namespace detail {

inline std::vector<DirichletBC> mech_dirichlet(const Mesh& mesh,
                                               const DofMap& dm, int fp,
                                               int fs, int ff,
                                               const MechBCs& bcs,
                                               double t_new) {
  std::vector<DirichletBC> out;
  if (bcs.has_exact()) {
    if (!bcs.p_exact || !bcs.us_exact || !bcs.uf_exact)
      throw std::invalid_argument(
          "mech_step: verification BCs need all of p/u_s/u_f set");
    for (int node : all_boundary_nodes(mesh)) {
      const Vec2 x = mesh.nodes[static_cast<std::size_t>(node)];
      const Eigen::Vector2d us = bcs.us_exact(x.x, x.y, t_new);
      const Eigen::Vector2d uf = bcs.uf_exact(x.x, x.y, t_new);
      out.push_back({dm.index(fp, node), bcs.p_exact(x.x, x.y, t_new)});
      out.push_back({dm.index(fs, node, 0), us.x()});
      out.push_back({dm.index(fs, node, 1), us.y()});
      out.push_back({dm.index(ff, node, 0), uf.x()});
      out.push_back({dm.index(ff, node, 1), uf.y()});
    }
    return out;
  }

  const double factor =
      bcs.ramp_time > 0.0 ? std::min(t_new / bcs.ramp_time, 1.0) : 1.0;
  const Eigen::Vector2d ubar = factor * bcs.top_displacement;

  for (int node : boundary_nodes(mesh, BoundaryTag::top)) {
    out.push_back({dm.index(fs, node, 0), ubar.x()});
    out.push_back({dm.index(fs, node, 1), ubar.y()});
    if (bcs.fiber_mode == FiberBcMode::mirror_skeleton) {
      out.push_back({dm.index(ff, node, 0), ubar.x()});
      out.push_back({dm.index(ff, node, 1), ubar.y()});
    }
  }
  if (bcs.fix_bottom) {
    for (int node : boundary_nodes(mesh, BoundaryTag::bottom)) {
      out.push_back({dm.index(fs, node, 0), 0.0});
      out.push_back({dm.index(fs, node, 1), 0.0});
    }
  }
  for (int node : boundary_nodes(mesh, BoundaryTag::bottom)) {
    out.push_back({dm.index(ff, node, 0), 0.0});
    out.push_back({dm.index(ff, node, 1), 0.0});
  }
  for (BoundaryTag tag : bcs.drained)
    for (int node : boundary_nodes(mesh, tag))
      out.push_back({dm.index(fp, node), 0.0});
  return out;
}

inline MechState mech_solve_once(const Mesh& mesh, const MechState& state_n,
                                 const MechParams& params, const MechBCs& bcs,
                                 double dt, const MechOptions& options,
                                 const MechSources* sources,
                                 const std::vector<double>& chi) {
  const int nn = mesh.n_nodes();
  DofMap dm(nn);
  const int fp = dm.add_field("p", 1);
  const int fs = dm.add_field("u_s", 2);
  const int ff = dm.add_field("u_f", 2);

  const double t_new = state_n.time + dt;
  const QuadratureRule& load_rule = triangle_quadrature(4);

  const ElementKernel kernel = [&](int e, ElementContribution& c) {
    c.resize(15);
    const ElementGeometry g = element_geometry(mesh, e);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    // Local layout: [p0 p1 p2 | us0x usy ... | uf0x ...]
    for (int k = 0; k < 3; ++k) {
      const int n = el.nodes[static_cast<std::size_t>(k)];
      c.dofs[static_cast<std::size_t>(k)] = dm.index(fp, n);
      for (int d = 0; d < 2; ++d) {
        c.dofs[static_cast<std::size_t>(3 + 2 * k + d)] = dm.index(fs, n, d);
        c.dofs[static_cast<std::size_t>(9 + 2 * k + d)] = dm.index(ff, n, d);
      }
    }

    const double area = g.area;
    const Eigen::Matrix3d mass = detail::p1_mass(area);
    Eigen::Matrix3d stiff;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        stiff(i, j) = area * dot(g.shape_grad[static_cast<std::size_t>(i)],
                                 g.shape_grad[static_cast<std::size_t>(j)]);

    const auto b = detail::b_matrix(g);
    const double chi_e = chi[static_cast<std::size_t>(e)];
    const Eigen::Matrix<double, 6, 6> k_s =
        area * b.transpose() * detail::voigt_elastic(params.lambda_s, params.mu_s) * b;
    const Eigen::Matrix<double, 6, 6> k_f =
        area * b.transpose() * detail::voigt_elastic(params.lambda_f, params.mu_f) * b;
    const Eigen::Matrix<double, 6, 6> k_chi =
        chi_e * area * b.transpose() * detail::voigt_identity() * b;

    // Mass-balance row: storage + solid dilation rates + seepage, scaled by dt.
    c.matrix.block<3, 3>(0, 0) = params.C0 * mass + dt * params.k * stiff;
    // Momentum rows: partial stress + coupling stress + pressure gradient.
    c.matrix.block<6, 6>(3, 3) = k_s + k_chi;
    c.matrix.block<6, 6>(9, 9) = k_f + k_chi;
    c.matrix.block<6, 6>(3, 9) = -k_chi;
    c.matrix.block<6, 6>(9, 3) = -k_chi;

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Vec2 gj = g.shape_grad[static_cast<std::size_t>(j)];
        const double wx = (area / 3.0) * gj.x;
        const double wy = (area / 3.0) * gj.y;
        // div(u) against the pressure test function
        c.matrix(i, 3 + 2 * j) += params.phi_s * wx;
        c.matrix(i, 3 + 2 * j + 1) += params.phi_s * wy;
        c.matrix(i, 9 + 2 * j) += params.phi_f * wx;
        c.matrix(i, 9 + 2 * j + 1) += params.phi_f * wy;
        if (options.pressure_coupling) {
          // grad(p) against the displacement test functions
          c.matrix(3 + 2 * i, j) += params.phi_s * (area / 3.0) * gj.x;
          c.matrix(3 + 2 * i + 1, j) += params.phi_s * (area / 3.0) * gj.y;
          c.matrix(9 + 2 * i, j) += params.phi_f * (area / 3.0) * gj.x;
          c.matrix(9 + 2 * i + 1, j) += params.phi_f * (area / 3.0) * gj.y;
        }
      }
    }

    // History side of the mass balance: same storage and dilation operators
    // applied to the previous time level.
    Eigen::Vector3d p_n;
    double div_s_n = 0.0, div_f_n = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int n = el.nodes[static_cast<std::size_t>(k)];
      p_n[k] = state_n.p[n];
      const Vec2 gk = g.shape_grad[static_cast<std::size_t>(k)];
      div_s_n += state_n.u_s[2 * n] * gk.x + state_n.u_s[2 * n + 1] * gk.y;
      div_f_n += state_n.u_f[2 * n] * gk.x + state_n.u_f[2 * n + 1] * gk.y;
    }
    const Eigen::Vector3d mass_p_n = params.C0 * (mass * p_n);
    for (int i = 0; i < 3; ++i)
      c.rhs[i] = mass_p_n[i] + (area / 3.0) * (params.phi_s * div_s_n +
                                               params.phi_f * div_f_n);

    if (sources) {
      for (const QuadPoint& q : load_rule.points) {
        const Vec2 x = bary_to_xy(g, q.bary);
        const double scale = q.weight * 2.0 * area;
        if (sources->f_p) {
          const double fp_q = sources->f_p(x.x, x.y, t_new);
          for (int i = 0; i < 3; ++i)
            c.rhs[i] += dt * scale * fp_q * q.bary[static_cast<std::size_t>(i)];
        }
        if (sources->f_s) {
          const Eigen::Vector2d fs_q = sources->f_s(x.x, x.y, t_new);
          for (int i = 0; i < 3; ++i) {
            c.rhs[3 + 2 * i] += scale * fs_q.x() * q.bary[static_cast<std::size_t>(i)];
            c.rhs[3 + 2 * i + 1] += scale * fs_q.y() * q.bary[static_cast<std::size_t>(i)];
          }
        }
        if (sources->f_f) {
          const Eigen::Vector2d ff_q = sources->f_f(x.x, x.y, t_new);
          for (int i = 0; i < 3; ++i) {
            c.rhs[9 + 2 * i] += scale * ff_q.x() * q.bary[static_cast<std::size_t>(i)];
            c.rhs[9 + 2 * i + 1] += scale * ff_q.y() * q.bary[static_cast<std::size_t>(i)];
          }
        }
      }
    }
  };

  SparseSystem sys = assemble(mesh, dm.size(), kernel);
  apply_dirichlet(sys, detail::mech_dirichlet(mesh, dm, fp, fs, ff, bcs, t_new));
  const Eigen::VectorXd x = solve_linear(sys);

  MechState next;
  next.p = x.segment(dm.offset(fp), nn);
  next.u_s = x.segment(dm.offset(fs), 2 * nn);
  next.u_f = x.segment(dm.offset(ff), 2 * nn);
  next.G = postprocess_darcy(mesh, next.p, params.k);
  next.time = t_new;
  return next;
}

}  // namespace detail

// One backward-Euler step of the coupled pressure/displacement system.  The
// debonding switch is evaluated from the last accepted state; in fixed_point
// mode the step re-assembles until the element on/off pattern repeats
// (at most chi_max_sweeps solves).
inline MechState mech_step(const Mesh& mesh, const MechState& state_n,
                           const MechParams& params, const MechBCs& bcs,
                           double dt, const MechOptions& options = {},
                           const MechSources* sources = nullptr,
                           MechStepReport* report = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("mech_step: dt must be > 0");
  validate(params);
  check_state(mesh, state_n);
  if (options.chi_max_sweeps < 1)
    throw std::invalid_argument("mech_step: chi_max_sweeps must be >= 1");

  std::vector<double> chi = chi_field(mesh, state_n, params);
  MechState next =
      detail::mech_solve_once(mesh, state_n, params, bcs, dt, options, sources, chi);
  int sweeps = 1;
  bool converged = true;
  if (options.chi_mode == ChiMode::fixed_point) {
    while (true) {
      std::vector<double> chi_next = chi_field(mesh, next, params);
      if (chi_next == chi) break;
      if (sweeps == options.chi_max_sweeps) {
        converged = false;
        break;
      }
      chi = std::move(chi_next);
      next = detail::mech_solve_once(mesh, state_n, params, bcs, dt, options,
                                     sources, chi);
      ++sweeps;
    }
  }
  if (report) {
    report->chi_sweeps = sweeps;
    report->chi_converged = converged;
  }
  return next;
}

}  // namespace aeromix
