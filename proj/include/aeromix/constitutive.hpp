#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace aeromix {

// Infinitesimal strain from a displacement gradient.
inline Eigen::Matrix2d strain(const Eigen::Matrix2d& grad_u) {
  return 0.5 * (grad_u + grad_u.transpose());
}

// Linear elastic partial stress  T' = 2 mu E + lambda tr(E) I.
inline Eigen::Matrix2d elastic_stress(const Eigen::Matrix2d& E, double lambda,
                                      double mu) {
  return 2.0 * mu * E + lambda * E.trace() * Eigen::Matrix2d::Identity();
}

// Interphase coupling stiffness with the debonding switch: full stiffness
// chi0 while the solids strain together, zero once the strain mismatch
// reaches eps_strain (Frobenius norm).
inline double chi_coefficient(const Eigen::Matrix2d& E_s,
                              const Eigen::Matrix2d& E_f, double chi0,
                              double eps_strain) {
  if (!(eps_strain > 0.0))
    throw std::invalid_argument("chi_coefficient: eps_strain must be > 0");
  return (E_s - E_f).norm() < eps_strain ? chi0 : 0.0;
}

// Gas seepage flux  G = -k grad p.
inline Eigen::Vector2d darcy_flux(const Eigen::Vector2d& grad_p, double k) {
  if (!(k > 0.0))
    throw std::invalid_argument("darcy_flux: permeability must be > 0");
  return -k * grad_p;
}

// Pore-size-limited gas conductivity  kappa_g = kappa_bg / (beta l_g/omega + 1).
// Shrinking pores (omega -> 0) choke conduction; wide pores recover the bulk
// value kappa_bg.
inline double knudsen_conductivity(double omega, double l_g, double beta,
                                   double kappa_bg) {
  if (!(omega > 0.0))
    throw std::invalid_argument("knudsen_conductivity: pore size must be > 0");
  if (!(l_g > 0.0))
    throw std::invalid_argument("knudsen_conductivity: mean free path must be > 0");
  if (beta < 0.0 || !(kappa_bg > 0.0))
    throw std::invalid_argument(
        "knudsen_conductivity: beta must be >= 0 and kappa_bg > 0");
  return kappa_bg / (beta * l_g / omega + 1.0);
}

// Cubic interphase heat gain of phase a from phase b.
inline double exchange_source(double theta_a, double theta_b, double h_ab) {
  const double d = theta_b - theta_a;
  return h_ab * d * d * d;
}

// Gas mass production rate from pressure change at fixed fractions:
// compressibility C0 converts dp/dt to a density rate, scaled to the pore
// density rho_g/phi_g.
inline double storage_rate(double dp_dt, double C0, double rho_g,
                           double phi_g) {
  if (!(phi_g > 0.0))
    throw std::invalid_argument("storage_rate: phi_g must be > 0");
  return C0 * (rho_g / phi_g) * dp_dt;
}

// Affine pore-size field  omega(x,y) = omega0 + domega_dx x + domega_dy y.
struct PoreSizeProfile {
  double omega0 = 1.0;
  double domega_dx = 0.0;
  double domega_dy = 0.0;

  double operator()(double x, double y) const {
    return omega0 + domega_dx * x + domega_dy * y;
  }
  // Affine fields attain extrema at corners, so positivity on the rectangle
  // reduces to four evaluations.
  bool positive_on(double lx, double ly) const {
    return (*this)(0, 0) > 0 && (*this)(lx, 0) > 0 && (*this)(0, ly) > 0 &&
           (*this)(lx, ly) > 0;
  }
};

struct MechParams {
  double phi_s = 0.0, phi_g = 0.0, phi_f = 0.0;  // volume fractions, sum 1
  double lambda_s = 0.0, mu_s = 0.0;             // aerogel moduli [Pa]
  double lambda_f = 0.0, mu_f = 0.0;             // fiber moduli [Pa]
  double chi0 = 0.0;                             // coupling stiffness [Pa]
  double eps_strain = 1.0;     // debonding threshold on |E_s - E_f|_F
  double C0 = 0.0;             // gas compressibility [1/Pa]
  double k = 0.0;              // permeability [m^2]
  double gamma_s = 0.0, gamma_f = 0.0;  // seepage drag [Pa s/m^2], diagnostics
};

inline std::vector<std::string> check(const MechParams& p) {
  std::vector<std::string> bad;
  const auto frac = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      bad.push_back(std::string(name) + " must lie in [0,1]");
  };
  frac(p.phi_s, "phi_s");
  frac(p.phi_g, "phi_g");
  frac(p.phi_f, "phi_f");
  if (std::abs(p.phi_s + p.phi_g + p.phi_f - 1.0) > 1e-12)
    bad.push_back("volume fractions must sum to 1");
  if (!(p.mu_s > 0.0)) bad.push_back("mu_s must be > 0");
  if (!(p.mu_f > 0.0)) bad.push_back("mu_f must be > 0");
  if (p.lambda_s < 0.0) bad.push_back("lambda_s must be >= 0");
  if (p.lambda_f < 0.0) bad.push_back("lambda_f must be >= 0");
  if (p.chi0 < 0.0) bad.push_back("chi0 must be >= 0");
  if (!(p.eps_strain > 0.0)) bad.push_back("eps_strain must be > 0");
  if (!(p.C0 > 0.0)) bad.push_back("C0 must be > 0");
  if (!(p.k > 0.0)) bad.push_back("k must be > 0");
  if (p.gamma_s < 0.0 || p.gamma_f < 0.0)
    bad.push_back("seepage drags must be >= 0");
  return bad;
}

namespace detail {

inline std::string join_issues(const std::vector<std::string>& bad) {
  std::string msg;
  for (const std::string& b : bad) {
    if (!msg.empty()) msg += "; ";
    msg += b;
  }
  return msg;
}

}  // namespace detail

inline void validate(const MechParams& p) {
  const auto bad = check(p);
  if (!bad.empty())
    throw std::invalid_argument("MechParams: " + detail::join_issues(bad));
}

struct ThermalParams {
  double phi_s = 0.0, phi_g = 0.0, phi_f = 0.0;   // volume fractions, sum 1
  double rho_s = 0.0, rho_g = 0.0, rho_f = 0.0;   // densities [kg/m^3]
  double c_s = 0.0, c_g = 0.0, c_f = 0.0;         // heat capacities [J/kg/K]
  double kappa_s = 0.0, kappa_f = 0.0;            // conductivities [W/m/K]
  double kappa_bg = 0.0;       // bulk gas conductivity [W/m/K]
  double l_g = 0.0;            // gas mean free path [m]
  double beta = 1.0;           // pore confinement coefficient
  PoreSizeProfile pore_size;   // omega(x,y) [m]
  double h_sg = 0.0, h_sf = 0.0, h_gf = 0.0;  // exchange [W/m^3/K^3]
  double h_air = 0.0;          // surface film coefficient [W/m^2/K]
  double theta_hot = 0.0, theta_cold = 0.0;   // boundary data [K]
};

inline std::vector<std::string> check(const ThermalParams& p) {
  std::vector<std::string> bad;
  const auto frac = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      bad.push_back(std::string(name) + " must lie in [0,1]");
  };
  frac(p.phi_s, "phi_s");
  frac(p.phi_g, "phi_g");
  frac(p.phi_f, "phi_f");
  if (std::abs(p.phi_s + p.phi_g + p.phi_f - 1.0) > 1e-12)
    bad.push_back("volume fractions must sum to 1");
  const auto pos = [&](double v, const char* name) {
    if (!(v > 0.0)) bad.push_back(std::string(name) + " must be > 0");
  };
  pos(p.rho_s, "rho_s");
  pos(p.rho_g, "rho_g");
  pos(p.rho_f, "rho_f");
  pos(p.c_s, "c_s");
  pos(p.c_g, "c_g");
  pos(p.c_f, "c_f");
  pos(p.kappa_s, "kappa_s");
  pos(p.kappa_f, "kappa_f");
  pos(p.kappa_bg, "kappa_bg");
  pos(p.l_g, "l_g");
  if (p.beta < 0.0) bad.push_back("beta must be >= 0");
  if (p.h_sg < 0.0 || p.h_sf < 0.0 || p.h_gf < 0.0)
    bad.push_back("exchange coefficients must be >= 0");
  if (p.h_air < 0.0) bad.push_back("h_air must be >= 0");
  if (!(p.theta_hot >= p.theta_cold))
    bad.push_back("theta_hot must be >= theta_cold");
  return bad;
}

inline void validate(const ThermalParams& p) {
  const auto bad = check(p);
  if (!bad.empty())
    throw std::invalid_argument("ThermalParams: " + detail::join_issues(bad));
}

}  // namespace aeromix
