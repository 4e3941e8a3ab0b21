#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netres {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Default tolerances. Matrix-level checks are relative to the max-norm of the
// matrix they test; the row-sum check is absolute (rows of a Laplacian built
// from finite weights cancel to roundoff).
namespace defaults {
inline constexpr double row_sum_tol = 1e-12;
inline constexpr double null_residual_tol = 1e-9;
inline constexpr double symmetry_tol = 1e-9;
inline constexpr double pair_check_tol = 1e-9;
inline constexpr double eigen_zero_tol = 1e-9;
inline constexpr double resonance_guard = 1e-12;
}  // namespace defaults

// Malformed input document (edge-list text, CSV); carries a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A model assumption does not hold (not strongly connected, not symmetrizable,
// no valid target mode). CLI exit code 3.
class ModelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: divergent amplitude, eigensolver failure, simulation
// blow-up. CLI exit code 4.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace netres
