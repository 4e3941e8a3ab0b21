#pragma once

#include "netres/analytic.hpp"
#include "netres/simulate.hpp"
#include "netres/spectrum.hpp"
#include "netres/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace netres {

// Damped eigenfrequency w'_mu = sqrt(w_mu^2 - (gamma/2)^2); empty when the
// mode is overdamped (w_mu <= gamma/2).
template <typename Scalar>
std::optional<Scalar> damped_frequency(Scalar omega_mu, Scalar gamma) {
  const Scalar half = gamma / Scalar(2);
  const Scalar arg = omega_mu * omega_mu - half * half;
  if (arg <= Scalar(0)) return std::nullopt;
  return std::sqrt(arg);
}

// Transient-plus-stationary mode trajectory under zero initial conditions in
// the near-resonant, lightly damped regime:
//   a_mu(t) = A_mu e^{-gamma t/2} sin(w'_mu t) - A_mu sin(w t).
template <typename Scalar>
Scalar transient_modal_solution(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                                const Stimulus<Scalar>& stim, Index mu, Scalar t) {
  if (mu < 0 || mu >= spectrum.size()) throw std::invalid_argument("mode index out of range");
  const auto omega_prime = damped_frequency(spectrum.frequencies(mu), stim.gamma);
  if (!omega_prime) throw ModelError("mode is overdamped; no oscillatory transient");
  const Scalar a = modal_amplitude(spectrum, masses, stim, mu);
  return a * std::exp(-stim.gamma * t / Scalar(2)) * std::sin(*omega_prime * t) -
         a * std::sin(stim.omega * t);
}

// Small-t sum-to-product form of the same trajectory:
//   a_mu(t) ~ 2 A_mu cos((w + w'_mu) t / 2) sin((w'_mu - w) t / 2).
// The modulation factor vanishes at t = 2 pi k / |w - w'_mu|, which sets the
// beat envelope; the energy envelope repeats at |w - w'_mu| (twice the
// amplitude-envelope rate, energy being quadratic).
template <typename Scalar>
Scalar beat_approximation(const Spectrum<Scalar>& spectrum, const VectorX<Scalar>& masses,
                          const Stimulus<Scalar>& stim, Index mu, Scalar t) {
  if (mu < 0 || mu >= spectrum.size()) throw std::invalid_argument("mode index out of range");
  const auto omega_prime = damped_frequency(spectrum.frequencies(mu), stim.gamma);
  if (!omega_prime) throw ModelError("mode is overdamped; no oscillatory transient");
  const Scalar a = modal_amplitude(spectrum, masses, stim, mu);
  return Scalar(2) * a * std::cos((stim.omega + *omega_prime) * t / Scalar(2)) *
         std::sin((*omega_prime - stim.omega) * t / Scalar(2));
}

// Underdamped mode minimizing |omega - omega_mu|; the mode a near-resonant
// stimulus beats against.
template <typename Scalar>
Index nearest_mode(const Spectrum<Scalar>& spectrum, const Stimulus<Scalar>& stim) {
  Index best = -1;
  Scalar best_dist = std::numeric_limits<Scalar>::infinity();
  for (Index mu = 0; mu < spectrum.size(); ++mu) {
    if (!damped_frequency(spectrum.frequencies(mu), stim.gamma)) continue;
    const Scalar dist = std::abs(stim.omega - spectrum.frequencies(mu));
    if (dist < best_dist) {
      best_dist = dist;
      best = mu;
    }
  }
  if (best < 0) throw ModelError("no underdamped mode to beat against");
  return best;
}

// Predicted energy-envelope frequency |w - w'_nu| for the nearest mode.
template <typename Scalar>
Scalar predicted_envelope_frequency(const Spectrum<Scalar>& spectrum, const Stimulus<Scalar>& stim) {
  const Index nu = nearest_mode(spectrum, stim);
  return std::abs(stim.omega - *damped_frequency(spectrum.frequencies(nu), stim.gamma));
}

// All frequencies below are in the energy domain: kinetic-energy envelopes
// repeat at |w - w'_mu|.
template <typename Scalar = double>
struct BeatReport {
  bool detected = false;
  Scalar envelope_frequency = std::numeric_limits<Scalar>::quiet_NaN();   // measured, rad/time
  Scalar predicted_frequency = std::numeric_limits<Scalar>::quiet_NaN();  // |w - w'_nu|, if known
  std::vector<Scalar> envelope_minima_times;
  Scalar amplitude_growth = std::numeric_limits<Scalar>::quiet_NaN();  // late/early envelope peak
  Scalar converged_energy = std::numeric_limits<Scalar>::quiet_NaN();  // tail mean of the series
  Scalar spacing_cv = std::numeric_limits<Scalar>::quiet_NaN();        // interval consistency
};

using BeatReportd = BeatReport<double>;

template <typename Scalar = double>
struct DetectOptions {
  // A minimum qualifies when its value is below this fraction of the running
  // series maximum. Late beat minima of a damped transient only dip to
  // (1 - e^{-gamma t/2})^2 of the stationary level, so this sits well above
  // the naive near-zero threshold.
  Scalar minimum_fraction = Scalar(0.7);
  // Consecutive envelope minima must be evenly spaced (coefficient of
  // variation of the folded intervals).
  Scalar max_spacing_cv = Scalar(0.3);
  // Extrema must rise/fall by this fraction of the series maximum to count
  // (rejects residual moving-average ripple).
  Scalar prominence_fraction = Scalar(0.01);
  // Stimulus angular frequency, when known. Enables ripple re-smoothing and
  // the low-frequency gate; 0 disables both.
  Scalar carrier_omega = Scalar(0);
  // Beats qualify as a flaming omen only while slow relative to the carrier.
  Scalar max_relative_frequency = Scalar(0.1);
  // Width of the internal second-stage moving average, in carrier periods.
  Scalar smooth_periods = Scalar(3);
  // Fraction of the series tail averaged into converged_energy.
  Scalar tail_fraction = Scalar(0.1);
};

using DetectOptionsd = DetectOptions<double>;

namespace detail {

// Interior extrema with plateau centering. Returns indices of minima/maxima.
template <typename Scalar>
void local_extrema(const VectorX<Scalar>& s, std::vector<Index>& minima, std::vector<Index>& maxima) {
  const Index n = s.size();
  Index k = 1;
  while (k < n - 1) {
    if (s(k) == s(k - 1)) {
      ++k;
      continue;
    }
    Index k2 = k;
    while (k2 + 1 < n && s(k2 + 1) == s(k)) ++k2;
    if (k2 + 1 < n) {
      const bool falling = s(k) < s(k - 1);
      if (falling && s(k2 + 1) > s(k)) minima.push_back((k + k2) / 2);
      if (!falling && s(k2 + 1) < s(k)) maxima.push_back((k + k2) / 2);
    }
    k = k2 + 1;
  }
}

// Topographic prominence of a minimum: walk outward while the series stays
// above the minimum; the lower of the two walls reached bounds the dip depth.
template <typename Scalar>
Scalar prominence_of_minimum(const VectorX<Scalar>& s, Index k) {
  const Scalar lo = s(k);
  Scalar left = Scalar(0);
  for (Index i = k - 1; i >= 0 && s(i) >= lo; --i) left = std::max(left, s(i) - lo);
  Scalar right = Scalar(0);
  for (Index i = k + 1; i < s.size() && s(i) >= lo; ++i) right = std::max(right, s(i) - lo);
  return std::min(left, right);
}

template <typename Scalar>
Scalar prominence_of_maximum(const VectorX<Scalar>& s, Index k) {
  const Scalar hi = s(k);
  Scalar left = Scalar(0);
  for (Index i = k - 1; i >= 0 && s(i) <= hi; --i) left = std::max(left, hi - s(i));
  Scalar right = Scalar(0);
  for (Index i = k + 1; i < s.size() && s(i) <= hi; ++i) right = std::max(right, hi - s(i));
  return std::min(left, right);
}

// Fold each interval down by the integer multiple of the median it spans, so
// one skipped shallow extremum does not double an interval.
template <typename Scalar>
std::vector<Scalar> fold_intervals(std::vector<Scalar> intervals) {
  if (intervals.empty()) return intervals;
  std::vector<Scalar> sorted = intervals;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const Scalar median = sorted[sorted.size() / 2];
  if (!(median > Scalar(0))) return intervals;
  for (Scalar& iv : intervals) {
    const Scalar q = std::max(Scalar(1), std::round(iv / median));
    iv /= q;
  }
  return intervals;
}

}  // namespace detail

// Beat detector for a smoothed kinetic-energy series. Finds prominent local
// minima below minimum_fraction of the running maximum; beats are detected
// when at least two envelope minima (counting a near-zero series start) recur
// with consistent spacing. The envelope frequency is estimated from intervals
// between consecutive same-type extrema, which is insensitive to the damping
// bias of the start-to-first-minimum distance.
template <typename Scalar>
BeatReport<Scalar> detect_beats(const VectorX<Scalar>& series, const VectorX<Scalar>& times,
                                const DetectOptions<Scalar>& options = {}) {
  if (series.size() != times.size()) throw std::invalid_argument("series/times size mismatch");
  if (series.size() < 8) throw std::invalid_argument("series too short for beat detection");

  const Scalar h = times(1) - times(0);
  if (!(h > Scalar(0))) throw std::invalid_argument("times must be strictly increasing");

  // Second-stage smoothing to remove residual ripple near twice the carrier.
  VectorX<Scalar> s = series;
  VectorX<Scalar> t = times;
  if (options.carrier_omega > Scalar(0) && options.smooth_periods > Scalar(0)) {
    const Index w2 = static_cast<Index>(
        std::lround(options.smooth_periods * (Scalar(2) * std::numbers::pi_v<Scalar> / options.carrier_omega) / h));
    if (w2 > 1 && w2 < series.size() / 4) {
      s = moving_average(series, w2);
      t = times.segment(moving_average_offset(w2), s.size());
    }
  }

  BeatReport<Scalar> report;
  const Index tail = std::max<Index>(1, static_cast<Index>(options.tail_fraction * s.size()));
  report.converged_energy = s.tail(tail).mean();

  const Scalar global_max = s.maxCoeff();
  if (!(global_max > Scalar(0))) return report;  // flat or empty signal: no beats

  std::vector<Index> minima, maxima;
  detail::local_extrema(s, minima, maxima);

  const Scalar prom_tol = options.prominence_fraction * global_max;
  std::vector<Index> good_maxima;
  for (Index k : maxima)
    if (detail::prominence_of_maximum(s, k) >= prom_tol) good_maxima.push_back(k);

  std::vector<Index> good_minima;
  Scalar running_max = s(0);
  Index scan = 0;
  for (Index k : minima) {
    while (scan <= k) running_max = std::max(running_max, s(scan++));
    if (detail::prominence_of_minimum(s, k) >= prom_tol &&
        s(k) <= options.minimum_fraction * running_max)
      good_minima.push_back(k);
  }

  const bool starts_low = s(0) <= options.minimum_fraction * global_max;
  if (starts_low) report.envelope_minima_times.push_back(t(0));
  for (Index k : good_minima) report.envelope_minima_times.push_back(t(k));

  std::vector<Scalar> intervals;
  for (std::size_t i = 1; i < good_minima.size(); ++i)
    intervals.push_back(t(good_minima[i]) - t(good_minima[i - 1]));
  for (std::size_t i = 1; i < good_maxima.size(); ++i)
    intervals.push_back(t(good_maxima[i]) - t(good_maxima[i - 1]));
  if (intervals.empty() && starts_low && !good_minima.empty())
    intervals.push_back(t(good_minima[0]) - t(0));

  if (good_maxima.size() >= 2 && s(good_maxima.front()) > Scalar(0))
    report.amplitude_growth = s(good_maxima.back()) / s(good_maxima.front());

  const std::size_t minima_count = good_minima.size() + (starts_low ? 1 : 0);
  if (minima_count < 2 || intervals.empty()) return report;

  const std::vector<Scalar> folded = detail::fold_intervals(intervals);
  Scalar mean = Scalar(0);
  for (Scalar iv : folded) mean += iv;
  mean /= static_cast<Scalar>(folded.size());
  Scalar var = Scalar(0);
  for (Scalar iv : folded) var += (iv - mean) * (iv - mean);
  var /= static_cast<Scalar>(folded.size());

  report.envelope_frequency = Scalar(2) * std::numbers::pi_v<Scalar> / mean;
  report.spacing_cv = std::sqrt(var) / mean;

  report.detected = report.spacing_cv <= options.max_spacing_cv;
  if (options.carrier_omega > Scalar(0) &&
      report.envelope_frequency > options.max_relative_frequency * options.carrier_omega)
    report.detected = false;
  return report;
}

// detect_beats plus the analytic prediction for the nearest mode.
template <typename Scalar>
BeatReport<Scalar> analyze_beats(const VectorX<Scalar>& series, const VectorX<Scalar>& times,
                                 const Spectrum<Scalar>& spectrum, const Stimulus<Scalar>& stim,
                                 DetectOptions<Scalar> options = {}) {
  options.carrier_omega = stim.omega;
  BeatReport<Scalar> report = detect_beats(series, times, options);
  report.predicted_frequency = predicted_envelope_frequency(spectrum, stim);
  return report;
}

// Reference scales for the omen score: the analytic peak oscillation energy of
// the monitored node at the nearest resonance, and the stimulus frequency.
template <typename Scalar = double>
struct OmenReference {
  Scalar peak_energy = Scalar(1);
  Scalar carrier_omega = Scalar(1);
};

using OmenReferenced = OmenReference<double>;

// Flaming-omen score in [0, 1]:
//   score = [w/(w + f_env)] * [K/(K + E_peak)]      when beats are detected,
//   score = 0                                        otherwise,
// where f_env is the measured energy-envelope frequency, K the converged
// moving-average kinetic energy and E_peak the analytic resonance-peak energy.
// Slower beats and higher converged energy both push the score up, matching
// the behavior of a network drifting into resonance.
template <typename Scalar>
Scalar omen_score(const BeatReport<Scalar>& report, const OmenReference<Scalar>& ref) {
  if (!(ref.peak_energy > Scalar(0)) || !(ref.carrier_omega > Scalar(0)))
    throw std::invalid_argument("omen reference scales must be positive");
  if (!report.detected || !std::isfinite(report.envelope_frequency) ||
      report.envelope_frequency <= Scalar(0))
    return Scalar(0);
  const Scalar k = std::isfinite(report.converged_energy) && report.converged_energy > Scalar(0)
                       ? report.converged_energy
                       : Scalar(0);
  const Scalar freq_factor = ref.carrier_omega / (ref.carrier_omega + report.envelope_frequency);
  const Scalar energy_factor = k / (k + ref.peak_energy);
  return std::clamp(freq_factor * energy_factor, Scalar(0), Scalar(1));
}

}  // namespace netres
