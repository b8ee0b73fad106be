#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aeromix/errors.hpp"
#include "aeromix/mesh.hpp"

namespace aeromix {

// Row-compressed square system A x = b plus a flag recording whether
// Dirichlet rows have already been eliminated.
struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
  bool constraints_applied = false;

  int size() const { return static_cast<int>(rhs.size()); }
};

// Scratch block a kernel fills for one element or facet: global dof ids, the
// local matrix (dofs x dofs), and the local load.
struct ElementContribution {
  std::vector<int> dofs;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;

  void resize(int n) {
    dofs.assign(static_cast<std::size_t>(n), 0);
    matrix = Eigen::MatrixXd::Zero(n, n);
    rhs = Eigen::VectorXd::Zero(n);
  }
};

using ElementKernel = std::function<void(int element, ElementContribution&)>;
using FacetKernel =
    std::function<void(const BoundaryFacet& facet, ElementContribution&)>;

// Runs the cell kernel over every element (and the facet kernel over every
// boundary facet, if given) in stored order and sums the contributions into
// one sparse system.  The traversal order is fixed, so repeated assembly of
// the same problem is bitwise reproducible.
inline SparseSystem assemble(const Mesh& mesh, int n_dofs,
                             const ElementKernel& cell_kernel,
                             const FacetKernel& facet_kernel = nullptr) {
  if (n_dofs < 1)
    throw std::invalid_argument("assemble: system must have at least one dof");

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_dofs);
  ElementContribution local;

  const auto scatter = [&](const ElementContribution& c,
                           const std::string& where) {
    const int n = static_cast<int>(c.dofs.size());
    for (int i = 0; i < n; ++i) {
      const int gi = c.dofs[static_cast<std::size_t>(i)];
      if (gi < 0 || gi >= n_dofs)
        throw AssemblyError("assemble: " + where + " references dof " +
                            std::to_string(gi) + " outside [0," +
                            std::to_string(n_dofs) + ")");
      rhs[gi] += c.rhs[i];
      for (int j = 0; j < n; ++j)
        triplets.emplace_back(gi, c.dofs[static_cast<std::size_t>(j)],
                              c.matrix(i, j));
    }
  };

  for (int e = 0; e < mesh.n_elements(); ++e) {
    local.resize(0);
    cell_kernel(e, local);
    scatter(local, "element " + std::to_string(e));
  }
  if (facet_kernel) {
    for (const BoundaryFacet& f : mesh.boundary_facets) {
      local.resize(0);
      facet_kernel(f, local);
      scatter(local, "boundary facet");
    }
  }
  // Structural diagonal so constrained dofs can always be pinned later.
  for (int i = 0; i < n_dofs; ++i) triplets.emplace_back(i, i, 0.0);

  SparseSystem sys;
  sys.matrix.resize(n_dofs, n_dofs);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = std::move(rhs);
  return sys;
}

struct DirichletBC {
  int dof;
  double value;
};

// Symmetric elimination: moves A(:,c)*x_c to the right-hand side, zeroes the
// constrained rows and columns, and pins x_c with a unit diagonal.  Two
// constraints on the same dof must agree exactly.
inline void apply_dirichlet(SparseSystem& sys,
                            const std::vector<DirichletBC>& bcs) {
  const int n = sys.size();
  std::map<int, double> merged;
  for (const DirichletBC& bc : bcs) {
    if (bc.dof < 0 || bc.dof >= n)
      throw std::invalid_argument("apply_dirichlet: dof " +
                                  std::to_string(bc.dof) + " out of range");
    auto [it, inserted] = merged.insert({bc.dof, bc.value});
    if (!inserted && it->second != bc.value)
      throw ConstraintConflict(
          "apply_dirichlet: dof " + std::to_string(bc.dof) +
          " constrained to both " + std::to_string(it->second) + " and " +
          std::to_string(bc.value));
  }
  if (merged.empty()) return;

  std::vector<char> constrained(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd xc = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, value] : merged) {
    constrained[static_cast<std::size_t>(dof)] = 1;
    xc[dof] = value;
  }

  sys.rhs -= sys.matrix * xc;
  for (int r = 0; r < n; ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator
             it(sys.matrix, r);
         it; ++it) {
      if (constrained[static_cast<std::size_t>(it.row())] ||
          constrained[static_cast<std::size_t>(it.col())])
        it.valueRef() = 0.0;
    }
  }
  for (const auto& [dof, value] : merged) {
    sys.matrix.coeffRef(dof, dof) = 1.0;
    sys.rhs[dof] = value;
  }
  sys.constraints_applied = true;
}

namespace detail {

// One row/column equilibration sweep in the style of Ruiz scaling: divide
// each row and column by the square root of its max magnitude.  Brings the
// wildly different physical scales of the coupled blocks (moduli in Pa,
// permeabilities in m^2) to a range sparse LU pivoting handles well.
inline void equilibrate(Eigen::SparseMatrix<double>& a, Eigen::VectorXd& dr,
                        Eigen::VectorXd& dc) {
  const int n = static_cast<int>(a.rows());
  dr = Eigen::VectorXd::Ones(n);
  dc = Eigen::VectorXd::Ones(n);
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd rmax = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
        const double v =
            std::abs(dr[it.row()] * it.value() * dc[it.col()]);
        rmax[it.row()] = std::max(rmax[it.row()], v);
        cmax[it.col()] = std::max(cmax[it.col()], v);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (rmax[i] > 0.0) dr[i] /= std::sqrt(rmax[i]);
      if (cmax[i] > 0.0) dc[i] /= std::sqrt(cmax[i]);
    }
  }
}

}  // namespace detail

// Sparse LU with equilibration.  The residual of the returned solution is
// checked against the original (unscaled) system; failure to factor or an
// out-of-contract residual raises SolverFailure.
inline Eigen::VectorXd solve_linear(const SparseSystem& sys) {
  const int n = sys.size();
  if (n == 0) return Eigen::VectorXd();
  if (sys.matrix.rows() != n || sys.matrix.cols() != n)
    throw std::invalid_argument("solve_linear: matrix/rhs size mismatch");

  Eigen::SparseMatrix<double> a = sys.matrix;  // column-major copy for LU
  Eigen::VectorXd dr, dc;
  detail::equilibrate(a, dr, dc);

  Eigen::SparseMatrix<double> a_scaled =
      dr.asDiagonal() * a * dc.asDiagonal();
  a_scaled.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a_scaled);
  if (lu.info() != Eigen::Success)
    throw SolverFailure("solve_linear: LU factorization failed (" +
                        lu.lastErrorMessage() + ")");

  const Eigen::VectorXd y = lu.solve((dr.array() * sys.rhs.array()).matrix());
  const Eigen::VectorXd x = (dc.array() * y.array()).matrix();
  if (!x.allFinite())
    throw SolverFailure("solve_linear: solution contains NaN/Inf");

  const double residual = (sys.matrix * x - sys.rhs).norm();
  const double a_frob = Eigen::Map<const Eigen::VectorXd>(
                            sys.matrix.valuePtr(), sys.matrix.nonZeros())
                            .norm();
  const double bound = 1e-10 * (a_frob * x.norm() + sys.rhs.norm());
  if (!(residual <= bound) && residual != 0.0)
    throw SolverFailure("solve_linear: residual " + std::to_string(residual) +
                        " exceeds contract bound " + std::to_string(bound));
  return x;
}

}  // namespace aeromix
