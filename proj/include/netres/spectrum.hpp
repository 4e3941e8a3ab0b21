#pragma once

#include "netres/symmetrize.hpp"
#include "netres/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace netres {

// Modal basis of the scaled Laplacian: eigenvalues ascending, orthonormal
// eigenvectors as columns, eigenfrequencies omega_mu = sqrt(lambda_mu).
template <typename Scalar = double>
struct Spectrum {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;  // column mu pairs with eigenvalues(mu)
  VectorX<Scalar> frequencies;

  Index size() const { return eigenvalues.size(); }
};

using Spectrumd = Spectrum<double>;

// Dense self-adjoint eigensolve of the scaled Laplacian. Eigenvalues within
// zero_tol of 0 are clamped to exactly 0 before the square root so the zero
// mode's frequency is exact; each eigenvector's first nonzero component is
// made positive for reproducible output (the physics is sign-invariant).
template <typename Scalar>
Spectrum<Scalar> eigendecompose(const MatrixX<Scalar>& scaled,
                                Scalar zero_tol = Scalar(defaults::eigen_zero_tol)) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(scaled);
  if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");

  Spectrum<Scalar> sp;
  sp.eigenvalues = solver.eigenvalues();
  sp.eigenvectors = solver.eigenvectors();

  const Scalar scale = std::max(Scalar(1), scaled.template lpNorm<Eigen::Infinity>());
  for (Index mu = 0; mu < sp.size(); ++mu) {
    Scalar& lam = sp.eigenvalues(mu);
    if (std::abs(lam) < zero_tol * scale) lam = Scalar(0);
    if (lam < Scalar(0)) throw NumericError("negative eigenvalue beyond tolerance");
  }
  if (sp.eigenvalues(0) != Scalar(0))
    throw NumericError("smallest eigenvalue is not zero; input is not a scaled Laplacian");

  for (Index mu = 0; mu < sp.size(); ++mu) {
    for (Index i = 0; i < sp.size(); ++i) {
      const Scalar v = sp.eigenvectors(i, mu);
      if (std::abs(v) > Scalar(1e-9)) {
        if (v < Scalar(0)) sp.eigenvectors.col(mu) = -sp.eigenvectors.col(mu);
        break;
      }
    }
  }

  sp.frequencies = sp.eigenvalues.cwiseSqrt();
  return sp;
}

template <typename Scalar>
Spectrum<Scalar> eigendecompose(const Symmetrization<Scalar>& sym,
                                Scalar zero_tol = Scalar(defaults::eigen_zero_tol)) {
  return eigendecompose(sym.scaled, zero_tol);
}

// Expansion coefficients of the unit vector at `node` in the modal basis:
// b_mu = v_mu(node).
template <typename Scalar>
VectorX<Scalar> mode_coefficients(const Spectrum<Scalar>& spectrum, Index node) {
  if (node < 0 || node >= spectrum.size()) throw std::invalid_argument("node index out of range");
  return spectrum.eigenvectors.row(node).transpose();
}

}  // namespace netres
