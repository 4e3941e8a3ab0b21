// Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
// Run with no arguments for the full suite or with criterion numbers (1-9).

#include "netres/netres.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace netres;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Random symmetrizable digraphs with every weight inside [0.5, 3]: powers-of-
// two masses and a symmetric base chosen per pair so that both b/m_i and b/m_j
// stay in range. Ring topology plus random chords keeps them strongly
// connected. Graphs with nearly degenerate nonzero modes are re-drawn: the
// peak-location criterion tests the isolated-peak formula.
std::vector<WeightedDigraphd> random_graphs(int count, unsigned seed) {
  std::mt19937 rng(seed);
  const double mass_options[3] = {0.5, 1.0, 2.0};
  std::vector<WeightedDigraphd> out;
  while (static_cast<int>(out.size()) < count) {
    const Index n = 3 + static_cast<Index>(rng() % 6);  // 3..8
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m(i) = mass_options[rng() % 3];

    WeightedDigraphd g;
    g.node_count = n;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const bool ring = (j == i + 1) || (i == 0 && j == n - 1);
        if (!ring && coin(rng) > 0.4) continue;
        const double lo = 0.5 * std::max(m(i), m(j));
        const double hi = 3.0 * std::min(m(i), m(j));
        const double b = std::uniform_real_distribution<double>(lo, hi)(rng);
        g.edges.push_back({i, j, b / m(i)});
        g.edges.push_back({j, i, b / m(j)});
      }

    auto sp = eigendecompose(symmetrize(g));
    bool separated = sp.frequencies(1) > 0.5;
    for (Index mu = 2; mu < sp.size(); ++mu)
      separated = separated && (sp.frequencies(mu) - sp.frequencies(mu - 1) > 0.25);
    if (separated) out.push_back(std::move(g));
  }
  return out;
}

struct BundledRun {
  WeightedDigraphd graph;
  Symmetrizationd sym;
  Spectrumd spectrum;
};

BundledRun load_bundled(std::string_view text) {
  BundledRun b;
  b.graph = parse_graph(text);
  b.sym = symmetrize(b.graph);
  b.spectrum = eigendecompose(b.sym);
  return b;
}

// Simulate, smooth each node's kinetic energy over one stimulus period and
// run the detector; mirrors the CLI simulate+beats pipeline.
std::vector<BeatReportd> beat_reports(const BundledRun& b, double omega, double gamma,
                                      double t_end) {
  Stimulusd stim{1, 1.0, omega, gamma};
  SimConfigd config;
  config.dt = 1e-3;
  config.t_end = t_end;
  config.stimulus = stim;
  config.sample_stride = 10;
  auto out = run(b.graph, b.sym.masses, config);

  const double h = out.times(1) - out.times(0);
  const Index window = static_cast<Index>(std::ceil(2 * std::numbers::pi / (omega * h)));
  std::vector<BeatReportd> reports;
  for (Index node = 0; node < b.graph.node_count; ++node) {
    Eigen::VectorXd smoothed = moving_average(out.kinetic_energies.col(node).eval(), window);
    Eigen::VectorXd times = out.times.segment(moving_average_offset(window), smoothed.size());
    reports.push_back(analyze_beats(smoothed, times, b.spectrum, stim));
  }
  return reports;
}

// --------------------------------------------------------------------------

Check criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& g : random_graphs(100, 20250808)) {
    auto l = laplacian_matrix(g);
    auto sym = symmetrize(g);
    auto sp = eigendecompose(sym);

    c.require(sp.eigenvalues(0) <= 1e-9, "lambda_0 not within 1e-9 of zero");

    Eigen::EigenSolver<Eigen::MatrixXd> direct(l);
    c.require(direct.info() == Eigen::Success, "direct eigensolve failed");
    c.require(direct.eigenvalues().imag().lpNorm<Eigen::Infinity>() <= 1e-7,
              "directed Laplacian eigenvalues are not real");
    Eigen::VectorXd direct_real = direct.eigenvalues().real();
    std::sort(direct_real.data(), direct_real.data() + direct_real.size());
    c.require((direct_real - sp.eigenvalues).lpNorm<Eigen::Infinity>() <= 1e-7,
              "scaled and directed spectra disagree beyond 1e-7");
  }
  c.require(seconds_since(start) < 10.0, "runtime exceeded 10 s");
  return c;
}

Check criterion_2() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const double gamma = 0.02;
  for (const auto& g : random_graphs(100, 20250808)) {
    auto sym = symmetrize(g);
    auto sp = eigendecompose(sym);
    Stimulusd stim{0, 1.0, 0.0, gamma};
    auto grid = default_sweep_grid(sp, 2000);
    auto sweep = energy_sweep(sp, sym.masses, stim, grid);
    const double h = grid(1) - grid(0);

    for (Index mu = 1; mu < sp.size(); ++mu) {
      const double lo = 0.5 * (sp.frequencies(mu - 1) + sp.frequencies(mu));
      const double hi = mu + 1 < sp.size()
                            ? 0.5 * (sp.frequencies(mu) + sp.frequencies(mu + 1))
                            : grid(grid.size() - 1);
      const auto peak = resonance_peak(sp.frequencies(mu), gamma);
      if (!peak) continue;
      for (Index node = 0; node < sp.size(); ++node) {
        if (std::abs(sp.eigenvectors(node, mu) * sp.eigenvectors(stim.node, mu)) <= 0.05) continue;
        double best = -1.0;
        Index best_k = 0;
        for (Index k = 0; k < grid.size(); ++k) {
          if (grid(k) < lo || grid(k) > hi) continue;
          if (sweep.energies(k, node) > best) {
            best = sweep.energies(k, node);
            best_k = k;
          }
        }
        if (std::abs(grid(best_k) - *peak) > h) {
          std::ostringstream ss;
          ss << "argmax off by " << std::abs(grid(best_k) - *peak) << " (> " << h << ") at mode "
             << mu;
          c.require(false, ss.str());
        }
      }
    }
  }
  c.require(seconds_since(start) < 60.0, "runtime exceeded 60 s");
  return c;
}

Check criterion_3() {
  Check c;
  const std::vector<double> gammas = {0.02, 0.05, 0.1, 0.2};
  for (auto text : {example_graph4, example_graph5}) {
    auto b = load_bundled(text);
    const double omega1 = b.spectrum.frequencies(1);
    std::vector<Eigen::VectorXd> energies;
    for (double gamma : gammas) {
      Stimulusd stim{1, 1.0, omega1, gamma};
      energies.push_back(oscillation_energies(b.spectrum, b.sym.masses, stim));
    }
    for (Index i = 0; i < b.graph.node_count; ++i) {
      if (std::abs(b.spectrum.eigenvectors(i, 1)) < 1e-9) continue;
      for (std::size_t k = 1; k < gammas.size(); ++k)
        c.require(energies[k](i) < energies[k - 1](i),
                  "peak energy not strictly decreasing in gamma");
    }
  }
  return c;
}

Check criterion_4() {
  Check c;
  auto b = load_bundled(example_graph5);
  Stimulusd stim{1, 1.0, 0.5, 0.02};
  const double t_lo = 10.0 / stim.gamma;
  const double t_hi = t_lo + 5 * 2 * std::numbers::pi / stim.omega;

  auto relative_error = [&](double dt) {
    SimConfigd config;
    config.dt = dt;
    config.t_end = t_hi;
    config.stimulus = stim;
    config.sample_stride = static_cast<Index>(std::lround(0.01 / dt));
    config.initial_positions = stationary_solution(b.spectrum, b.sym.masses, stim, 0.0);
    config.initial_velocities = stationary_velocity(b.spectrum, b.sym.masses, stim, 0.0);
    config.max_frequency = b.spectrum.frequencies(b.spectrum.size() - 1);
    auto out = run(b.graph, b.sym.masses, config);
    double max_err = 0.0, max_ref = 0.0;
    for (Index k = 0; k < out.times.size(); ++k) {
      if (out.times(k) < t_lo) continue;
      Eigen::VectorXd expect = stationary_solution(b.spectrum, b.sym.masses, stim, out.times(k));
      max_err =
          std::max(max_err, (expect - out.positions.row(k).transpose()).lpNorm<Eigen::Infinity>());
      max_ref = std::max(max_ref, expect.lpNorm<Eigen::Infinity>());
    }
    return max_err / max_ref;
  };

  const double coarse = relative_error(1e-3);
  const double fine = relative_error(5e-4);
  {
    std::ostringstream ss;
    ss << "relative max-norm error " << coarse << " exceeds 1e-2";
    c.require(coarse <= 1e-2, ss.str());
  }
  {
    std::ostringstream ss;
    ss << "convergence factor " << coarse / fine << " outside [1.5, 2.5]";
    c.require(coarse / fine >= 1.5 && coarse / fine <= 2.5, ss.str());
  }
  return c;
}

Check criterion_5() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  auto b = load_bundled(example_graph5);
  const double gamma = 0.02;
  const double omega1 = b.spectrum.frequencies(1);
  const double omega1p = *damped_frequency(omega1, gamma);
  const std::vector<double> detunings = {0.1, 0.05, 0.02};

  // nodes carrying mode 1 (the beat is theirs to show)
  std::vector<Index> active;
  for (Index i = 0; i < b.graph.node_count; ++i)
    if (std::abs(b.spectrum.eigenvectors(i, 1)) >= 0.25) active.push_back(i);
  c.require(active.size() >= 2, "test graph lost its mode-1 support");

  std::map<Index, std::vector<double>> measured, converged;
  for (double d : detunings) {
    const double omega = omega1 - d;
    const double predicted = std::abs(omega - omega1p);
    auto reports = beat_reports(b, omega, gamma, 700.0);
    for (Index i : active) {
      const auto& r = reports[static_cast<std::size_t>(i)];
      std::ostringstream ss;
      ss << "node " << i << " at detuning " << d;
      c.require(r.detected, "no beats detected on " + ss.str());
      c.require(std::abs(r.envelope_frequency - predicted) <= 0.1 * predicted,
                "measured envelope frequency off by more than 10% on " + ss.str());
      measured[i].push_back(r.envelope_frequency);
      converged[i].push_back(r.converged_energy);
    }
  }
  for (Index i : active) {
    for (std::size_t k = 1; k < detunings.size(); ++k) {
      c.require(measured[i][k] < measured[i][k - 1],
                "envelope frequency not strictly decreasing in detuning");
      c.require(converged[i][k] > converged[i][k - 1],
                "converged moving-average energy not strictly increasing");
    }
  }
  c.require(seconds_since(start) < 300.0, "runtime exceeded 5 min");
  return c;
}

Check criterion_6() {
  Check c;
  auto b = load_bundled(example_graph5);
  const double omega = 0.5 * (b.spectrum.frequencies(1) + b.spectrum.frequencies(2));
  c.require(omega - b.spectrum.frequencies(1) > 0.25, "midpoint detuning too small for the test");
  c.require(b.spectrum.frequencies(2) - omega > 0.25, "midpoint detuning too small for the test");
  auto reports = beat_reports(b, omega, 0.02, 700.0);
  for (std::size_t i = 0; i < reports.size(); ++i)
    c.require(!reports[i].detected, "spurious beat detection on node " + std::to_string(i));
  return c;
}

Check criterion_7() {
  Check c;
  auto b = load_bundled(example_graph5);
  const double omega = 1.1 * b.spectrum.frequencies(1);
  auto plan = make_rescale_plan(b.spectrum, omega);
  auto rescaled = rescale_network(b.graph, plan);
  auto sym2 = symmetrize(rescaled);
  auto sp2 = eigendecompose(sym2);

  c.require(std::abs(sp2.frequencies(plan.mode) - omega) <= 1e-9,
            "rescaled mode frequency does not hit the stimulus frequency");
  for (Index mu = 0; mu < sp2.size(); ++mu) {
    const double expect = plan.weight_factor * b.spectrum.eigenvalues(mu);
    c.require(std::abs(sp2.eigenvalues(mu) - expect) <= 1e-9 * std::max(1.0, expect),
              "eigenvalues not scaled by c^2 within 1e-9");
  }
  c.require((sym2.masses - b.sym.masses).lpNorm<Eigen::Infinity>() <= 1e-10,
            "left null vector changed under rescaling");

  Stimulusd stim{1, 1.0, omega, 0.02};
  Eigen::VectorXd before = oscillation_energies(b.spectrum, b.sym.masses, stim);
  Eigen::VectorXd after = oscillation_energies(sp2, sym2.masses, stim);
  bool tenfold = false;
  for (Index i = 0; i < before.size(); ++i) tenfold = tenfold || after(i) >= 10.0 * before(i);
  c.require(tenfold, "no node gained a tenfold energy increase at the stimulus frequency");
  return c;
}

Check criterion_8() {
  Check c;
  auto b = load_bundled(example_graph5);
  const double omega1 = b.spectrum.frequencies(1);
  Stimulusd tiny{1, 1.0, omega1, 1e-4};
  Stimulusd heavy{1, 1.0, omega1, 0.1};
  Eigen::VectorXd e_tiny = oscillation_energies(b.spectrum, b.sym.masses, tiny);
  Eigen::VectorXd e_heavy = oscillation_energies(b.spectrum, b.sym.masses, heavy);
  bool any_active = false;
  for (Index i = 0; i < b.graph.node_count; ++i) {
    if (std::abs(b.spectrum.eigenvectors(i, 1)) <= 0.05) continue;
    any_active = true;
    std::ostringstream ss;
    ss << "node " << i << " ratio " << e_tiny(i) / e_heavy(i) << " below 1e4";
    c.require(e_tiny(i) >= 1e4 * e_heavy(i), ss.str());
  }
  c.require(any_active, "no mode-1-active nodes in the test graph");
  return c;
}

Check criterion_9() {
  Check c;
#ifdef NETRES_CLI_PATH
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() / "netres_acceptance_demo";
  fs::remove_all(dir);
  const std::string cmd =
      std::string(NETRES_CLI_PATH) + " demo --out-dir " + dir.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  c.require(status == 0, "demo exited with a nonzero status");

  const std::vector<std::string> expected = {
      "graph4.txt",         "graph5.txt",         "analyze_graph4.json",
      "analyze_graph5.json", "sweep_graph4.csv",   "graph4_rescaled.txt",
      "sweep_graph4_rescaled.csv", "simulate_graph5.csv", "beats_graph5.json"};
  for (const auto& name : expected) {
    c.require(fs::exists(dir / name), "missing output " + name);
    c.require(fs::exists(dir / (name + ".manifest.json")), "missing manifest for " + name);
  }
  c.require(seconds_since(start) < 120.0, "runtime exceeded 2 min");
#else
  c.require(false, "CLI path not configured");
#endif
  return c;
}

const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
    {"spectral correctness: eig(S0) matches a direct eigensolve on 100 random graphs", criterion_1},
    {"resonance peaks: sweep argmax within one grid step of sqrt(w_mu^2 - gamma^2/2)", criterion_2},
    {"damping monotonicity: peak energy strictly decreases as gamma grows", criterion_3},
    {"analytic-simulation equivalence at 1e-2 with first-order convergence", criterion_4},
    {"beat frequencies within 10% of |w - w_1'|, ordered in detuning", criterion_5},
    {"no beat detection when driving midway between modes", criterion_6},
    {"rescale aligns the spectrum and boosts stimulus-frequency energy tenfold", criterion_7},
    {"energy grows by >= 1e4 when gamma drops from 0.1 to 1e-4 at resonance", criterion_8},
    {"CLI demo pipeline produces all outputs and manifests", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(static_cast<int>(k));

  int failures = 0;
  for (int number : selected) {
    if (number < 1 || number > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << number << "\n";
      return 2;
    }
    const auto& [description, fn] = criteria[static_cast<std::size_t>(number - 1)];
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    std::ostringstream line;
    line << (result.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << description << " ["
         << elapsed << " s]";
    if (!result.ok) line << " -- " << result.detail;
    std::cout << line.str() << std::endl;
    if (!result.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
