#pragma once

#include "netres/analytic.hpp"
#include "netres/graph.hpp"
#include "netres/types.hpp"

#include <cmath>
#include <string>

namespace netres {

template <typename Scalar = double>
struct SimConfig {
  Scalar dt = Scalar(1e-3);
  Scalar t_end = Scalar(0);
  Stimulus<Scalar> stimulus;
  VectorX<Scalar> initial_positions;   // empty = all zero
  VectorX<Scalar> initial_velocities;  // empty = all zero
  Index sample_stride = 10;            // record every k-th step
  Scalar max_frequency = Scalar(0);    // largest eigenfrequency; 0 skips the stability check
};

using SimConfigd = SimConfig<double>;

template <typename Scalar = double>
struct SimState {
  Scalar t = Scalar(0);
  VectorX<Scalar> positions;
  VectorX<Scalar> velocities;
};

template <typename Scalar = double>
struct SimulationRun {
  VectorX<Scalar> times;
  MatrixX<Scalar> positions;         // row per sample, column per node
  MatrixX<Scalar> velocities;
  MatrixX<Scalar> kinetic_energies;  // K_i(t) = (1/2) m_i v_i(t)^2
  bool stability_warning = false;
};

using SimulationRund = SimulationRun<double>;

// One explicit-Euler step. Positions advance with the pre-update velocities,
// then velocities with the pre-update positions:
//   x <- x + v dt
//   v <- v - (gamma v + L x) dt + F cos(w t) 1_{j} dt
template <typename Scalar>
void step(SimState<Scalar>& state, const MatrixX<Scalar>& laplacian, const Stimulus<Scalar>& stim,
          Scalar dt) {
  VectorX<Scalar> coupling = laplacian * state.positions;
  state.positions.noalias() += dt * state.velocities;
  state.velocities *= (Scalar(1) - stim.gamma * dt);
  state.velocities.noalias() -= dt * coupling;
  state.velocities(stim.node) += stim.amplitude * std::cos(stim.omega * state.t) * dt;
  state.t += dt;
}

// Integrate from t = 0 to t_end, recording every sample_stride-th step plus
// the final state. Aborts with NumericError if the state stops being finite.
// If max_frequency is provided and dt * w_max >= 2 the run still proceeds but
// the result carries a stability warning.
template <typename Scalar>
SimulationRun<Scalar> run(const WeightedDigraph<Scalar>& g, const VectorX<Scalar>& masses,
                          const SimConfig<Scalar>& config) {
  const Index n = g.node_count;
  if (masses.size() != n) throw std::invalid_argument("mass vector size mismatch");
  if (!(config.dt > Scalar(0))) throw std::invalid_argument("dt must be positive");
  if (!(config.t_end > Scalar(0))) throw std::invalid_argument("t_end must be positive");
  validate(config.stimulus, n);

  const MatrixX<Scalar> laplacian = laplacian_matrix(g);
  const Index stride = std::max<Index>(1, config.sample_stride);
  const long long steps = std::llround(static_cast<double>(config.t_end / config.dt));
  if (steps < 1) throw std::invalid_argument("t_end shorter than one step");

  SimState<Scalar> state;
  state.positions = config.initial_positions.size()
                        ? config.initial_positions
                        : VectorX<Scalar>::Zero(n);
  state.velocities = config.initial_velocities.size()
                         ? config.initial_velocities
                         : VectorX<Scalar>::Zero(n);
  if (state.positions.size() != n || state.velocities.size() != n)
    throw std::invalid_argument("initial condition size mismatch");

  const Index samples =
      static_cast<Index>(steps / stride) + 1 + (steps % stride != 0 ? 1 : 0);
  SimulationRun<Scalar> out;
  out.times.resize(samples);
  out.positions.resize(samples, n);
  out.velocities.resize(samples, n);
  out.kinetic_energies.resize(samples, n);
  out.stability_warning =
      config.max_frequency > Scalar(0) && config.dt * config.max_frequency >= Scalar(2);

  Index row = 0;
  auto record = [&] {
    if (!state.positions.allFinite() || !state.velocities.allFinite())
      throw NumericError("simulation diverged (non-finite state at t = " +
                         std::to_string(static_cast<double>(state.t)) + ")");
    out.times(row) = state.t;
    out.positions.row(row) = state.positions.transpose();
    out.velocities.row(row) = state.velocities.transpose();
    out.kinetic_energies.row(row) =
        (Scalar(0.5) * masses.array() * state.velocities.array().square()).transpose();
    ++row;
  };

  for (long long k = 0; k < steps; ++k) {
    state.t = static_cast<Scalar>(k) * config.dt;  // avoids additive drift over long runs
    if (k % stride == 0) record();
    step(state, laplacian, config.stimulus, config.dt);
  }
  state.t = static_cast<Scalar>(steps) * config.dt;
  record();
  return out;
}

// Centered simple moving average; output length = input length - window + 1.
// Element k averages series[k .. k+window-1] and is aligned with input index
// k + (window-1)/2.
template <typename Scalar>
VectorX<Scalar> moving_average(const VectorX<Scalar>& series, Index window) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  if (window > series.size()) throw std::invalid_argument("window larger than series");
  const Index out_len = series.size() - window + 1;
  VectorX<Scalar> out(out_len);
  Scalar acc = series.head(window).sum();
  out(0) = acc / Scalar(window);
  for (Index k = 1; k < out_len; ++k) {
    acc += series(k + window - 1) - series(k - 1);
    out(k) = acc / Scalar(window);
  }
  return out;
}

inline Index moving_average_offset(Index window) { return (window - 1) / 2; }

}  // namespace netres
