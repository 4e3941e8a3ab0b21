#pragma once

#include "netres/spectrum.hpp"
#include "netres/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>
#include <vector>

namespace netres {

// Periodic external stimulus F*cos(omega*t) injected at one node, with
// uniform damping gamma on every node.
template <typename Scalar = double>
struct Stimulus {
  Index node = 0;
  Scalar amplitude = Scalar(1);  // F > 0
  Scalar omega = Scalar(0);      // driving angular frequency, >= 0
  Scalar gamma = Scalar(0);      // damping coefficient, >= 0
};

using Stimulusd = Stimulus<double>;

template <typename Scalar>
void validate(const Stimulus<Scalar>& s, Index node_count) {
  if (s.node < 0 || s.node >= node_count) throw std::invalid_argument("stimulus node out of range");
  if (!(s.amplitude > Scalar(0))) throw std::invalid_argument("stimulus amplitude must be positive");
  if (s.omega < Scalar(0)) throw std::invalid_argument("stimulus frequency must be nonnegative");
  if (s.gamma < Scalar(0)) throw std::invalid_argument("damping must be nonnegative");
}

namespace detail {

// Squared resonance denominator (lambda - w^2)^2 + (gamma*w)^2 of one mode.
template <typename Scalar>
Scalar denom_sq(Scalar lambda, Scalar omega, Scalar gamma) {
  const Scalar detune = lambda - omega * omega;
  return detune * detune + gamma * gamma * omega * omega;
}

}  // namespace detail

// Stationary amplitude of mode mu, sqrt(m_j) F v_mu(j) / sqrt((w_mu^2-w^2)^2 + (gamma w)^2).
// Carries the sign of v_mu(j). Driving an undamped system at an eigenfrequency
// (and the zero mode at omega = 0) has no stationary amplitude and throws.
template <typename Scalar>
Scalar modal_amplitude(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                       const Stimulus<Scalar>& stim, Index mu) {
  if (mu < 0 || mu >= spectrum.size()) throw std::invalid_argument("mode index out of range");
  validate(stim, spectrum.size());
  const Scalar omega_mu = spectrum.frequencies(mu);
  if (stim.gamma == Scalar(0) &&
      std::abs(stim.omega - omega_mu) < Scalar(defaults::resonance_guard))
    throw NumericError("undamped resonance: amplitude diverges at omega = omega_mu");
  const Scalar d2 = detail::denom_sq(spectrum.eigenvalues(mu), stim.omega, stim.gamma);
  if (d2 == Scalar(0)) throw NumericError("amplitude diverges (zero resonance denominator)");
  return std::sqrt(masses(stim.node)) * stim.amplitude * spectrum.eigenvectors(stim.node, mu) /
         std::sqrt(d2);
}

// Stationary phase of mode mu via the two-argument arctangent of
// (-gamma*omega, w_mu^2 - w^2); continuous across resonance, in [-pi, 0].
template <typename Scalar>
Scalar modal_phase(const Spectrum<Scalar>& spectrum, const Stimulus<Scalar>& stim, Index mu) {
  if (mu < 0 || mu >= spectrum.size()) throw std::invalid_argument("mode index out of range");
  return std::atan2(-(stim.gamma * stim.omega), spectrum.eigenvalues(mu) - stim.omega * stim.omega);
}

template <typename Scalar>
struct ModalResponse {
  VectorX<Scalar> amplitudes;
  VectorX<Scalar> phases;
};

template <typename Scalar>
ModalResponse<Scalar> modal_response(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                     const Stimulus<Scalar>& stim) {
  const Index n = spectrum.size();
  ModalResponse<Scalar> r{VectorX<Scalar>(n), VectorX<Scalar>(n)};
  for (Index mu = 0; mu < n; ++mu) {
    r.amplitudes(mu) = modal_amplitude(spectrum, masses, stim, mu);
    r.phases(mu) = modal_phase(spectrum, stim, mu);
  }
  return r;
}

// Stationary node states x(t) = M^{-1/2} sum_mu A_mu cos(w t + theta_mu) v_mu.
template <typename Scalar>
VectorX<Scalar> stationary_solution(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                    const Stimulus<Scalar>& stim, Scalar t) {
  const ModalResponse<Scalar> r = modal_response(spectrum, masses, stim);
  VectorX<Scalar> coeff =
      r.amplitudes.array() * (stim.omega * t + r.phases.array()).cos();
  return masses.cwiseSqrt().cwiseInverse().asDiagonal() * (spectrum.eigenvectors * coeff);
}

// Time derivative of the stationary solution (needed for stationary initial
// conditions and energy cross-checks).
template <typename Scalar>
VectorX<Scalar> stationary_velocity(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                    const Stimulus<Scalar>& stim, Scalar t) {
  const ModalResponse<Scalar> r = modal_response(spectrum, masses, stim);
  VectorX<Scalar> coeff =
      -stim.omega * r.amplitudes.array() * (stim.omega * t + r.phases.array()).sin();
  return masses.cwiseSqrt().cwiseInverse().asDiagonal() * (spectrum.eigenvectors * coeff);
}

namespace detail {

// Energy gain of one mode: w^2 / ((lambda-w^2)^2 + (gamma w)^2), with the
// zero mode reduced algebraically to 1/(w^2 + gamma^2) so the expression is
// exact for all w >= 0 including w = 0.
template <typename Scalar>
Scalar energy_gain(Scalar lambda, Scalar omega, Scalar gamma) {
  if (lambda == Scalar(0)) {
    const Scalar d = omega * omega + gamma * gamma;
    if (d == Scalar(0)) throw NumericError("oscillation energy diverges (undamped zero mode at omega = 0)");
    return Scalar(1) / d;
  }
  const Scalar d2 = denom_sq(lambda, omega, gamma);
  if (d2 == Scalar(0)) throw NumericError("oscillation energy diverges (undamped resonance)");
  return omega * omega / d2;
}

}  // namespace detail

// Stationary oscillation energy of every node,
// E_i = (1/2) w^2 sum_mu A_mu^2 v_mu(i)^2, a generalized node centrality.
// Modes sharing an eigenvalue oscillate in phase, so their contribution is
// summed coherently: grouping makes the energy invariant under
// re-orthonormalization of a degenerate eigenspace and reduces to the plain
// per-mode sum on simple spectra.
template <typename Scalar>
VectorX<Scalar> oscillation_energies(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                     const Stimulus<Scalar>& stim) {
  validate(stim, spectrum.size());
  const Index n = spectrum.size();
  const Scalar f2m = masses(stim.node) * stim.amplitude * stim.amplitude;
  const Scalar group_tol =
      Scalar(defaults::eigen_zero_tol) *
      std::max(Scalar(1), spectrum.eigenvalues.template lpNorm<Eigen::Infinity>());

  VectorX<Scalar> energies = VectorX<Scalar>::Zero(n);
  Index begin = 0;
  while (begin < n) {
    Index end = begin + 1;
    while (end < n && spectrum.eigenvalues(end) - spectrum.eigenvalues(end - 1) <= group_tol) ++end;
    // coherent coefficient of the eigenvalue group: sum_mu v_mu(j) v_mu(i)
    VectorX<Scalar> coeff = VectorX<Scalar>::Zero(n);
    for (Index mu = begin; mu < end; ++mu)
      coeff += spectrum.eigenvectors(stim.node, mu) * spectrum.eigenvectors.col(mu);
    const Scalar gain =
        f2m * detail::energy_gain(spectrum.eigenvalues(begin), stim.omega, stim.gamma);
    energies += gain * coeff.cwiseAbs2();
    begin = end;
  }
  return Scalar(0.5) * energies;
}

template <typename Scalar>
Scalar oscillation_energy(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                          const Stimulus<Scalar>& stim, Index node) {
  if (node < 0 || node >= spectrum.size()) throw std::invalid_argument("node index out of range");
  return oscillation_energies(spectrum, masses, stim)(node);
}

// Frequency where the modal amplitude peaks: sqrt(w_mu^2 - gamma^2/2).
// Empty for overdamped modes (w_mu^2 <= gamma^2/2), which have no peak.
template <typename Scalar>
std::optional<Scalar> resonance_peak(Scalar omega_mu, Scalar gamma) {
  const Scalar arg = omega_mu * omega_mu - gamma * gamma / Scalar(2);
  if (arg <= Scalar(0)) return std::nullopt;
  return std::sqrt(arg);
}

template <typename Scalar>
struct SweepResult {
  VectorX<Scalar> omegas;
  MatrixX<Scalar> energies;  // row per grid frequency, column per node
};

using SweepResultd = SweepResult<double>;

// Uniform grid over [0, headroom * w_max]; the default resolution comfortably
// resolves gamma ~ 0.02 resonance peaks.
template <typename Scalar>
VectorX<Scalar> default_sweep_grid(const Spectrum<Scalar>& spectrum, Index steps = 2000,
                                   Scalar headroom = Scalar(1.2)) {
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 grid points");
  const Scalar hi = headroom * spectrum.frequencies(spectrum.size() - 1);
  return VectorX<Scalar>::LinSpaced(steps, Scalar(0), hi);
}

// Oscillation energy of every node across a frequency grid. stim.omega is
// ignored; each grid row uses its own frequency. Rows are independent and are
// evaluated on `threads` threads into disjoint slices, so the result does not
// depend on the thread count.
template <typename Scalar>
SweepResult<Scalar> energy_sweep(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                 const Stimulus<Scalar>& stim, const VectorX<Scalar>& grid,
                                 unsigned threads = 1) {
  validate(stim, spectrum.size());
  if (!(stim.gamma > Scalar(0))) throw std::invalid_argument("energy sweep requires gamma > 0");
  const Index rows = grid.size();
  SweepResult<Scalar> result{grid, MatrixX<Scalar>(rows, spectrum.size())};

  auto worker = [&](Index begin, Index end) {
    Stimulus<Scalar> s = stim;
    for (Index r = begin; r < end; ++r) {
      s.omega = grid(r);
      result.energies.row(r) = oscillation_energies(spectrum, masses, s).transpose();
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1 || rows < 64) {
    worker(0, rows);
  } else {
    std::vector<std::thread> pool;
    const Index chunk = (rows + static_cast<Index>(threads) - 1) / static_cast<Index>(threads);
    for (unsigned k = 0; k < threads; ++k) {
      const Index begin = static_cast<Index>(k) * chunk;
      if (begin >= rows) break;
      pool.emplace_back(worker, begin, std::min(rows, begin + chunk));
    }
    for (auto& th : pool) th.join();
  }
  return result;
}

}  // namespace netres
