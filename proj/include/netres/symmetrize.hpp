#pragma once

#include "netres/graph.hpp"
#include "netres/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace netres {

// Left null vector m of the Laplacian, normalized to sum(m) = n so that an
// undirected graph gets unit masses. Requires the underlying digraph to be
// strongly connected; otherwise the null space is not one-dimensional with a
// positive representative and the oscillation model does not apply.
template <typename Scalar>
VectorX<Scalar> left_null_vector(const MatrixX<Scalar>& laplacian,
                                 Scalar residual_tol = Scalar(defaults::null_residual_tol)) {
  const Index n = laplacian.rows();
  if (n <= 0 || laplacian.cols() != n) throw std::invalid_argument("Laplacian must be square");

  // Connectivity from the off-diagonal pattern (L_ij = -w_ij on edges).
  std::vector<std::vector<Index>> fwd(n), rev(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && laplacian(i, j) != Scalar(0)) {
        fwd[static_cast<std::size_t>(i)].push_back(j);
        rev[static_cast<std::size_t>(j)].push_back(i);
      }
  if (n > 1 && (detail::bfs_reach(fwd, 0) != n || detail::bfs_reach(rev, 0) != n))
    throw ModelError("graph is not strongly connected; left null vector is not unique and positive");

  Eigen::FullPivLU<MatrixX<Scalar>> lu(laplacian.transpose());
  MatrixX<Scalar> kernel = lu.kernel();
  if (kernel.cols() != 1)
    throw ModelError("left null space is not one-dimensional (null dimension " +
                     std::to_string(kernel.cols()) + ")");

  VectorX<Scalar> m = kernel.col(0);
  if (m.sum() < Scalar(0)) m = -m;
  if (m.minCoeff() <= Scalar(0))
    throw ModelError("left null vector has non-positive components");
  m *= Scalar(n) / m.sum();

  const Scalar scale = laplacian.template lpNorm<Eigen::Infinity>();
  const Scalar residual = (m.transpose() * laplacian).template lpNorm<Eigen::Infinity>();
  if (residual > residual_tol * scale)
    throw NumericError("left null vector residual " + std::to_string(residual) +
                       " exceeds tolerance");
  return m;
}

template <typename Scalar>
struct SymmetryCheck {
  bool symmetrizable = false;
  // Unordered node pairs (i < j) where m_i w_ij != m_j w_ji or a reverse edge is missing.
  std::vector<std::pair<Index, Index>> violations;
};

// A digraph is symmetrizable when m_i w_ij = m_j w_ji for every linked pair,
// m being the left null vector of its Laplacian.
template <typename Scalar>
SymmetryCheck<Scalar> check_symmetrizable(const WeightedDigraph<Scalar>& g, const VectorX<Scalar>& masses,
                                          Scalar rel_tol = Scalar(defaults::pair_check_tol)) {
  if (masses.size() != g.node_count) throw std::invalid_argument("mass vector size mismatch");
  MatrixX<Scalar> w = adjacency_matrix(g);
  SymmetryCheck<Scalar> result;
  std::set<std::pair<Index, Index>> bad;
  for (const auto& e : g.edges) {
    const Index i = std::min(e.from, e.to), j = std::max(e.from, e.to);
    const Scalar a = masses(i) * w(i, j);
    const Scalar b = masses(j) * w(j, i);
    using std::abs;
    if (abs(a - b) > rel_tol * std::max(abs(a), abs(b))) bad.insert({i, j});
  }
  result.violations.assign(bad.begin(), bad.end());
  result.symmetrizable = result.violations.empty();
  return result;
}

// S0 = M^{1/2} L M^{-1/2}; symmetric for symmetrizable graphs and sharing the
// Laplacian's eigenvalues. Invariant under rescaling all masses by a common
// positive factor.
template <typename Scalar>
MatrixX<Scalar> scaled_laplacian(const MatrixX<Scalar>& laplacian, const VectorX<Scalar>& masses,
                                 Scalar symmetry_tol = Scalar(defaults::symmetry_tol)) {
  if (masses.size() != laplacian.rows()) throw std::invalid_argument("mass vector size mismatch");
  if (masses.minCoeff() <= Scalar(0)) throw std::invalid_argument("masses must be strictly positive");
  VectorX<Scalar> root = masses.cwiseSqrt();
  MatrixX<Scalar> s = root.asDiagonal() * laplacian * root.cwiseInverse().asDiagonal();
  const Scalar asym = (s - s.transpose()).template lpNorm<Eigen::Infinity>();
  const Scalar scale = s.template lpNorm<Eigen::Infinity>();
  if (asym > symmetry_tol * scale)
    throw ModelError("scaled Laplacian is not symmetric (graph not symmetrizable)");
  return s;
}

template <typename Scalar>
struct Symmetrization {
  VectorX<Scalar> masses;        // left null vector, sum = n
  MatrixX<Scalar> scaled;        // S0
};

using Symmetrizationd = Symmetrization<double>;

// Full pipeline: left null vector, pair check, scaled Laplacian. Throws
// ModelError naming the violating pairs for non-symmetrizable graphs.
template <typename Scalar>
Symmetrization<Scalar> symmetrize(const WeightedDigraph<Scalar>& g) {
  MatrixX<Scalar> l = laplacian_matrix(g);
  VectorX<Scalar> m = left_null_vector(l);
  auto check = check_symmetrizable(g, m);
  if (!check.symmetrizable) {
    std::string pairs;
    for (std::size_t k = 0; k < check.violations.size() && k < 8; ++k) {
      if (k) pairs += ", ";
      pairs += "(" + std::to_string(check.violations[k].first) + "," +
               std::to_string(check.violations[k].second) + ")";
    }
    if (check.violations.size() > 8) pairs += ", ...";
    throw ModelError("graph is not symmetrizable; violating pairs: " + pairs);
  }
  MatrixX<Scalar> s = scaled_laplacian(l, m);
  return {std::move(m), std::move(s)};
}

}  // namespace netres
