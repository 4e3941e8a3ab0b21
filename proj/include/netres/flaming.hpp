#pragma once

#include "netres/analytic.hpp"
#include "netres/graph.hpp"
#include "netres/spectrum.hpp"

namespace netres {

// Resonance-alignment plan: the selected mode's eigenfrequency is pulled up to
// the stimulus frequency by multiplying every link weight by factor^2.
template <typename Scalar = double>
struct RescalePlan {
  Index mode = 0;                  // nu, the targeted mode
  Scalar mode_frequency = Scalar(0);  // omega_nu before rescaling
  Scalar factor = Scalar(1);          // c = omega / omega_nu, >= 1
  Scalar weight_factor = Scalar(1);   // c^2, applied to every weight
};

using RescalePland = RescalePlan<double>;

// Largest mode with 0 < omega_mu <= omega. Zero-frequency modes cannot be
// moved to a positive frequency by uniform rescaling and are excluded; if
// omega is below every nonzero eigenfrequency there is no valid target.
template <typename Scalar>
Index select_target_mode(const Spectrum<Scalar>& spectrum, Scalar omega) {
  if (!(omega > Scalar(0))) throw std::invalid_argument("stimulus frequency must be positive");
  for (Index mu = spectrum.size() - 1; mu >= 0; --mu) {
    const Scalar f = spectrum.frequencies(mu);
    if (f > Scalar(0) && f <= omega) return mu;
  }
  throw ModelError("no target mode: stimulus frequency is below every nonzero eigenfrequency");
}

template <typename Scalar>
RescalePlan<Scalar> make_rescale_plan(const Spectrum<Scalar>& spectrum, Scalar omega) {
  RescalePlan<Scalar> plan;
  plan.mode = select_target_mode(spectrum, omega);
  plan.mode_frequency = spectrum.frequencies(plan.mode);
  plan.factor = omega / plan.mode_frequency;
  plan.weight_factor = plan.factor * plan.factor;
  return plan;
}

// New graph with every weight multiplied by the plan's c^2. Eigenvalues scale
// by c^2, eigenfrequencies by c, the left null vector is unchanged, and the
// targeted mode lands exactly on the stimulus frequency.
template <typename Scalar>
WeightedDigraph<Scalar> rescale_network(const WeightedDigraph<Scalar>& g,
                                        const RescalePlan<Scalar>& plan) {
  WeightedDigraph<Scalar> out = g;
  for (auto& e : out.edges) e.weight *= plan.weight_factor;
  return out;
}

}  // namespace netres
