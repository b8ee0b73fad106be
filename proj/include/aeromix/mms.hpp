#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "aeromix/constitutive.hpp"
#include "aeromix/mechanics.hpp"
#include "aeromix/mesh.hpp"
#include "aeromix/p1.hpp"
#include "aeromix/quadrature.hpp"
#include "aeromix/thermal.hpp"

namespace aeromix {

// Separable trigonometric profile  amp * tx(kx x + px) * ty(ky y + py)
// with tx, ty in {sin, cos}; all derivatives through second order are
// closed-form.
struct TrigTerm {
  enum class Fn { sin, cos };
  double amp = 0.0;
  Fn fx = Fn::sin;
  double kx = 0.0, px = 0.0;
  Fn fy = Fn::sin;
  double ky = 0.0, py = 0.0;

  static double eval(Fn f, double u) {
    return f == Fn::sin ? std::sin(u) : std::cos(u);
  }
  static double deriv(Fn f, double u) {
    return f == Fn::sin ? std::cos(u) : -std::sin(u);
  }

  double value(double x, double y) const {
    return amp * eval(fx, kx * x + px) * eval(fy, ky * y + py);
  }
  double dx(double x, double y) const {
    return amp * kx * deriv(fx, kx * x + px) * eval(fy, ky * y + py);
  }
  double dy(double x, double y) const {
    return amp * ky * eval(fx, kx * x + px) * deriv(fy, ky * y + py);
  }
  double dxx(double x, double y) const {
    return -kx * kx * value(x, y);
  }
  double dyy(double x, double y) const {
    return -ky * ky * value(x, y);
  }
  double dxy(double x, double y) const {
    return amp * kx * ky * deriv(fx, kx * x + px) * deriv(fy, ky * y + py);
  }
};

// Scalar manufactured field  base + (1 + t/tau) * F(x,y).  Linear growth in
// time makes one backward-Euler step reproduce the time derivative exactly,
// so convergence studies see the spatial error alone.
struct MmsScalar {
  double base = 0.0;
  TrigTerm space;
  double tau = 1.0;

  double tf(double t) const { return 1.0 + t / tau; }

  double value(double x, double y, double t) const {
    return base + tf(t) * space.value(x, y);
  }
  double ddt(double x, double y) const { return space.value(x, y) / tau; }
  Eigen::Vector2d grad(double x, double y, double t) const {
    return tf(t) * Eigen::Vector2d(space.dx(x, y), space.dy(x, y));
  }
  double laplacian(double x, double y, double t) const {
    return tf(t) * (space.dxx(x, y) + space.dyy(x, y));
  }
};

// Vector manufactured field built from two scalar components.
struct MmsVector {
  MmsScalar x, y;

  Eigen::Vector2d value(double px, double py, double t) const {
    return {x.value(px, py, t), y.value(px, py, t)};
  }
  Eigen::Matrix2d grad(double px, double py, double t) const {
    Eigen::Matrix2d g;
    g << x.space.dx(px, py), x.space.dy(px, py),
         y.space.dx(px, py), y.space.dy(px, py);
    return x.tf(t) * g;
  }
  double div(double px, double py, double t) const {
    return x.tf(t) * (x.space.dx(px, py) + y.space.dy(px, py));
  }
  double div_ddt(double px, double py) const {
    return (x.space.dx(px, py) + y.space.dy(px, py)) / x.tau;
  }
  Eigen::Vector2d laplacian(double px, double py, double t) const {
    return x.tf(t) * Eigen::Vector2d(x.space.dxx(px, py) + x.space.dyy(px, py),
                                     y.space.dxx(px, py) + y.space.dyy(px, py));
  }
  // grad(div u) = (u1_xx + u2_xy, u1_xy + u2_yy)
  Eigen::Vector2d grad_div(double px, double py, double t) const {
    return x.tf(t) *
           Eigen::Vector2d(x.space.dxx(px, py) + y.space.dxy(px, py),
                           x.space.dxy(px, py) + y.space.dyy(px, py));
  }
};

// Manufactured solution for the coupled pressure/displacement system.  The
// forcing terms are what the strong-form equations require for the chosen
// fields, so the discrete solution must converge to them at the Galerkin
// rate.  The coupling stress is taken at full stiffness chi0 (pick
// eps_strain large enough that the switch never trips).
struct MechMms {
  MechParams params;
  MmsScalar p;
  MmsVector us, uf;

  double f_p(double x, double y, double t) const {
    return params.C0 * p.ddt(x, y) + params.phi_s * us.div_ddt(x, y) +
           params.phi_f * uf.div_ddt(x, y) -
           params.k * p.laplacian(x, y, t);
  }

  // div of the elastic partial stress: mu lap(u) + (mu + lambda) grad(div u).
  Eigen::Vector2d div_elastic(const MmsVector& u, double lambda, double mu,
                              double x, double y, double t) const {
    return mu * u.laplacian(x, y, t) +
           (mu + lambda) * u.grad_div(x, y, t);
  }
  // div of the coupling stress chi0 (E_a - E_b):
  // div(E(u)) = (lap(u) + grad(div u)) / 2.
  Eigen::Vector2d div_coupling(const MmsVector& ua, const MmsVector& ub,
                               double x, double y, double t) const {
    const Eigen::Vector2d da = ua.laplacian(x, y, t) + ua.grad_div(x, y, t);
    const Eigen::Vector2d db = ub.laplacian(x, y, t) + ub.grad_div(x, y, t);
    return 0.5 * params.chi0 * (da - db);
  }

  Eigen::Vector2d f_s(double x, double y, double t) const {
    return params.phi_s * p.grad(x, y, t) -
           div_elastic(us, params.lambda_s, params.mu_s, x, y, t) -
           div_coupling(us, uf, x, y, t);
  }
  Eigen::Vector2d f_f(double x, double y, double t) const {
    return params.phi_f * p.grad(x, y, t) -
           div_elastic(uf, params.lambda_f, params.mu_f, x, y, t) -
           div_coupling(uf, us, x, y, t);
  }

  MechBCs bcs() const {
    MechBCs b;
    b.p_exact = [this](double x, double y, double t) { return p.value(x, y, t); };
    b.us_exact = [this](double x, double y, double t) { return us.value(x, y, t); };
    b.uf_exact = [this](double x, double y, double t) { return uf.value(x, y, t); };
    return b;
  }
  MechSources sources() const {
    MechSources s;
    s.f_p = [this](double x, double y, double t) { return f_p(x, y, t); };
    s.f_s = [this](double x, double y, double t) { return f_s(x, y, t); };
    s.f_f = [this](double x, double y, double t) { return f_f(x, y, t); };
    return s;
  }

  // Nodal interpolant of the exact fields (initial condition for MMS runs).
  MechState interpolate(const Mesh& mesh, double t) const {
    MechState s = initial_mech_state(mesh);
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Vec2 x = mesh.nodes[static_cast<std::size_t>(n)];
      s.p[n] = p.value(x.x, x.y, t);
      const Eigen::Vector2d vs = us.value(x.x, x.y, t);
      const Eigen::Vector2d vf = uf.value(x.x, x.y, t);
      s.u_s[2 * n] = vs.x();
      s.u_s[2 * n + 1] = vs.y();
      s.u_f[2 * n] = vf.x();
      s.u_f[2 * n + 1] = vf.y();
    }
    s.G = postprocess_darcy(mesh, s.p, params.k);
    s.time = t;
    return s;
  }

  struct Errors {
    double p = 0.0, us = 0.0, uf = 0.0;
  };

  // L2 errors of a discrete state against the exact fields (degree-4
  // quadrature of the squared difference).
  Errors l2_error(const Mesh& mesh, const MechState& state, double t) const {
    Errors err;
    const QuadratureRule& rule = triangle_quadrature(4);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const ElementGeometry g = element_geometry(mesh, e);
      const auto& el = mesh.elements[static_cast<std::size_t>(e)];
      for (const QuadPoint& q : rule.points) {
        const Vec2 x = bary_to_xy(g, q.bary);
        double ph = 0.0;
        Eigen::Vector2d ush = Eigen::Vector2d::Zero(), ufh = Eigen::Vector2d::Zero();
        for (int k = 0; k < 3; ++k) {
          const int n = el.nodes[static_cast<std::size_t>(k)];
          const double l = q.bary[static_cast<std::size_t>(k)];
          ph += l * state.p[n];
          ush += l * Eigen::Vector2d(state.u_s[2 * n], state.u_s[2 * n + 1]);
          ufh += l * Eigen::Vector2d(state.u_f[2 * n], state.u_f[2 * n + 1]);
        }
        const double scale = q.weight * 2.0 * g.area;
        err.p += scale * std::pow(ph - p.value(x.x, x.y, t), 2);
        err.us += scale * (ush - us.value(x.x, x.y, t)).squaredNorm();
        err.uf += scale * (ufh - uf.value(x.x, x.y, t)).squaredNorm();
      }
    }
    err.p = std::sqrt(err.p);
    err.us = std::sqrt(err.us);
    err.uf = std::sqrt(err.uf);
    return err;
  }
};

// Manufactured solution for the three-temperature system.
struct ThermalMms {
  ThermalParams params;
  MmsScalar ts, tg, tf_;

  double gas_kappa(double x, double y) const {
    return knudsen_conductivity(params.pore_size(x, y), params.l_g,
                                params.beta, params.kappa_bg);
  }
  Eigen::Vector2d gas_kappa_grad(double x, double y) const {
    // d(kappa)/d(omega) = kappa_bg * beta * l_g / (beta l_g + omega)^2
    const double om = params.pore_size(x, y);
    const double denom = params.beta * params.l_g + om;
    const double dk = params.kappa_bg * params.beta * params.l_g / (denom * denom);
    return dk * Eigen::Vector2d(params.pore_size.domega_dx,
                                params.pore_size.domega_dy);
  }

  const MmsScalar& field(int a) const { return a == 0 ? ts : a == 1 ? tg : tf_; }

  double exchange_gain(int a, double x, double y, double t) const {
    double gain = 0.0;
    for (int b = 0; b < 3; ++b) {
      if (b == a) continue;
      gain += exchange_source(field(a).value(x, y, t), field(b).value(x, y, t),
                              detail::h_between(params, a, b));
    }
    return gain;
  }

  double source(int a, double x, double y, double t) const {
    const MmsScalar& th = field(a);
    const double rho_c = (a == 0   ? params.rho_s * params.phi_s * params.c_s
                          : a == 1 ? params.rho_g * params.phi_g * params.c_g
                                   : params.rho_f * params.phi_f * params.c_f);
    double conduction;
    if (a == 1) {
      conduction = params.phi_g * (gas_kappa(x, y) * th.laplacian(x, y, t) +
                                   gas_kappa_grad(x, y).dot(th.grad(x, y, t)));
    } else {
      const double kappa = (a == 0 ? params.kappa_s : params.kappa_f);
      const double phi = (a == 0 ? params.phi_s : params.phi_f);
      conduction = phi * kappa * th.laplacian(x, y, t);
    }
    return rho_c * th.ddt(x, y) - conduction - exchange_gain(a, x, y, t);
  }

  ThermalBCs bcs() const {
    ThermalBCs b;
    b.ts_exact = [this](double x, double y, double t) { return ts.value(x, y, t); };
    b.tg_exact = [this](double x, double y, double t) { return tg.value(x, y, t); };
    b.tf_exact = [this](double x, double y, double t) { return tf_.value(x, y, t); };
    return b;
  }
  ThermalSources sources() const {
    ThermalSources s;
    s.f_s = [this](double x, double y, double t) { return source(0, x, y, t); };
    s.f_g = [this](double x, double y, double t) { return source(1, x, y, t); };
    s.f_f = [this](double x, double y, double t) { return source(2, x, y, t); };
    return s;
  }

  ThermalState interpolate(const Mesh& mesh, double t) const {
    ThermalState s = initial_thermal_state(mesh, 0.0);
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Vec2 x = mesh.nodes[static_cast<std::size_t>(n)];
      s.theta_s[n] = ts.value(x.x, x.y, t);
      s.theta_g[n] = tg.value(x.x, x.y, t);
      s.theta_f[n] = tf_.value(x.x, x.y, t);
    }
    s.time = t;
    return s;
  }

  struct Errors {
    double ts = 0.0, tg = 0.0, tf = 0.0;
  };

  Errors l2_error(const Mesh& mesh, const ThermalState& state, double t) const {
    Errors err;
    const QuadratureRule& rule = triangle_quadrature(4);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const ElementGeometry g = element_geometry(mesh, e);
      const auto& el = mesh.elements[static_cast<std::size_t>(e)];
      for (const QuadPoint& q : rule.points) {
        const Vec2 x = bary_to_xy(g, q.bary);
        double hs = 0.0, hg = 0.0, hf = 0.0;
        for (int k = 0; k < 3; ++k) {
          const int n = el.nodes[static_cast<std::size_t>(k)];
          const double l = q.bary[static_cast<std::size_t>(k)];
          hs += l * state.theta_s[n];
          hg += l * state.theta_g[n];
          hf += l * state.theta_f[n];
        }
        const double scale = q.weight * 2.0 * g.area;
        err.ts += scale * std::pow(hs - ts.value(x.x, x.y, t), 2);
        err.tg += scale * std::pow(hg - tg.value(x.x, x.y, t), 2);
        err.tf += scale * std::pow(hf - tf_.value(x.x, x.y, t), 2);
      }
    }
    err.ts = std::sqrt(err.ts);
    err.tg = std::sqrt(err.tg);
    err.tf = std::sqrt(err.tf);
    return err;
  }
};

// Stock manufactured problems used by the verification runs.  Parameters are
// order-one so no physical scale dominates the error.
inline MechMms make_mech_mms(double lx, double ly, double tau) {
  MechMms m;
  m.params.phi_s = 0.4;
  m.params.phi_g = 0.35;
  m.params.phi_f = 0.25;
  m.params.lambda_s = 1.0;
  m.params.mu_s = 0.8;
  m.params.lambda_f = 1.5;
  m.params.mu_f = 1.1;
  m.params.chi0 = 0.3;
  m.params.eps_strain = 1e9;  // keep the switch on everywhere
  m.params.C0 = 1.0;
  m.params.k = 1.0;

  const double ax = std::numbers::pi / lx;
  const double ay = std::numbers::pi / ly;
  using Fn = TrigTerm::Fn;
  m.p.space = {0.7, Fn::cos, ax, 0.3, Fn::cos, ay, 0.2};
  m.p.base = 0.5;
  m.p.tau = tau;
  m.us.x.space = {0.05, Fn::sin, ax, 0.1, Fn::cos, ay, 0.4};
  m.us.y.space = {0.04, Fn::cos, ax, 0.5, Fn::sin, ay, 0.2};
  m.us.x.tau = m.us.y.tau = tau;
  m.uf.x.space = {0.03, Fn::cos, ax, 0.2, Fn::sin, ay, 0.6};
  m.uf.y.space = {0.06, Fn::sin, ax, 0.7, Fn::cos, ay, 0.1};
  m.uf.x.tau = m.uf.y.tau = tau;
  return m;
}

inline ThermalMms make_thermal_mms(double lx, double ly, double tau) {
  ThermalMms m;
  m.params.phi_s = 0.4;
  m.params.phi_g = 0.35;
  m.params.phi_f = 0.25;
  m.params.rho_s = 1.3;
  m.params.rho_g = 0.9;
  m.params.rho_f = 1.1;
  m.params.c_s = 1.0;
  m.params.c_g = 1.2;
  m.params.c_f = 0.8;
  m.params.kappa_s = 1.0;
  m.params.kappa_f = 0.7;
  m.params.kappa_bg = 0.9;
  m.params.l_g = 0.5;
  m.params.beta = 1.0;
  m.params.pore_size = {2.0, 0.1 / lx, -0.4 / ly};
  m.params.h_sg = 0.6;
  m.params.h_sf = 0.4;
  m.params.h_gf = 0.5;
  m.params.h_air = 0.0;
  m.params.theta_hot = 2.0;
  m.params.theta_cold = 1.0;

  const double ax = std::numbers::pi / lx;
  const double ay = std::numbers::pi / ly;
  using Fn = TrigTerm::Fn;
  m.ts.base = 1.5;
  m.ts.space = {0.4, Fn::cos, ax, 0.2, Fn::cos, ay, 0.5};
  m.ts.tau = tau;
  m.tg.base = 1.2;
  m.tg.space = {0.5, Fn::sin, ax, 0.4, Fn::cos, ay, 0.1};
  m.tg.tau = tau;
  m.tf_.base = 1.8;
  m.tf_.space = {0.3, Fn::cos, ax, 0.6, Fn::sin, ay, 0.3};
  m.tf_.tau = tau;
  return m;
}

}  // namespace aeromix
