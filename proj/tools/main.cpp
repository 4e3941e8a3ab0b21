// netres: resonance analysis of forced damped oscillations on weighted
// directed graphs. Subcommands: analyze, sweep, rescale, simulate, beats, demo.

#include "netres/netres.hpp"

#include "manifest.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netres;
using namespace netres::tools;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_model = 3;
constexpr int exit_numeric = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// Shortest round-trip decimal form; keeps CSV output bit-reproducible.
std::string fmt(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NETRES_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) hw = std::min<long>(parsed, 256);
  }
  return hw;
}

struct Pipeline {
  WeightedDigraphd graph;
  Symmetrizationd sym;
  Spectrumd spectrum;
};

Pipeline load_pipeline(const std::string& graph_path) {
  Pipeline p;
  p.graph = parse_graph(read_file(graph_path));
  p.sym = symmetrize(p.graph);
  p.spectrum = eigendecompose(p.sym);
  return p;
}

void emit(const std::string& out_path, const std::string& content, const RunManifest& manifest) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
    RunManifest m = manifest;
    m.outputs.push_back(out_path);
    m.write_for(out_path);
  }
}

template <typename T>
void from_config(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
  if (opt != nullptr && opt->count() > 0) return;  // command line wins
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeParams {
  std::string graph;
  std::string format = "json";
  std::string out;
};

json to_json(const AnalyzeParams& p) {
  return {{"graph", p.graph}, {"format", p.format}, {"out", p.out}};
}

int run_analyze(const AnalyzeParams& p) {
  Pipeline pl = load_pipeline(p.graph);
  std::string content;
  if (p.format == "csv") {
    content = "mode,eigenvalue,eigenfrequency\n";
    for (Index mu = 0; mu < pl.spectrum.size(); ++mu)
      content += std::to_string(mu) + "," + fmt(pl.spectrum.eigenvalues(mu)) + "," +
                 fmt(pl.spectrum.frequencies(mu)) + "\n";
  } else {
    json j;
    j["nodes"] = pl.graph.node_count;
    j["edges"] = pl.graph.edge_count();
    j["eigenvalues"] = std::vector<double>(pl.spectrum.eigenvalues.begin(), pl.spectrum.eigenvalues.end());
    j["eigenfrequencies"] =
        std::vector<double>(pl.spectrum.frequencies.begin(), pl.spectrum.frequencies.end());
    j["masses"] = std::vector<double>(pl.sym.masses.begin(), pl.sym.masses.end());
    content = j.dump(2) + "\n";
  }
  RunManifest m;
  m.command = "analyze";
  m.parameters = to_json(p);
  m.add_input(p.graph);
  emit(p.out, content, m);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepParams {
  std::string graph;
  long long node = 0;
  double amplitude = 1.0;
  double gamma = 0.02;
  double omega_min = 0.0;
  double omega_max = -1.0;  // < 0: auto, 1.2 * largest eigenfrequency
  long long steps = 2000;
  std::string format = "csv";
  std::string out;
};

json to_json(const SweepParams& p) {
  return {{"graph", p.graph},         {"node", p.node},   {"F", p.amplitude},
          {"gamma", p.gamma},         {"omega_min", p.omega_min}, {"omega_max", p.omega_max},
          {"steps", p.steps},         {"format", p.format},       {"out", p.out}};
}

int run_sweep(const SweepParams& p) {
  Pipeline pl = load_pipeline(p.graph);
  Stimulusd stim{static_cast<Index>(p.node), p.amplitude, 0.0, p.gamma};

  const double hi = p.omega_max > 0
                        ? p.omega_max
                        : 1.2 * pl.spectrum.frequencies(pl.spectrum.size() - 1);
  if (p.steps < 2) throw std::invalid_argument("--steps must be at least 2");
  Eigen::VectorXd grid =
      Eigen::VectorXd::LinSpaced(static_cast<Index>(p.steps), p.omega_min, hi);

  auto sweep = energy_sweep(pl.spectrum, pl.sym.masses, stim, grid, thread_budget());

  std::string content;
  if (p.format == "json") {
    json rows = json::array();
    for (Index k = 0; k < grid.size(); ++k)
      rows.push_back({{"omega", grid(k)},
                      {"energies", std::vector<double>(sweep.energies.row(k).begin(),
                                                       sweep.energies.row(k).end())}});
    json j;
    j["node"] = p.node;
    j["rows"] = std::move(rows);
    content = j.dump(2) + "\n";
  } else {
    content = "omega,node,energy\n";
    for (Index k = 0; k < grid.size(); ++k)
      for (Index i = 0; i < sweep.energies.cols(); ++i)
        content += fmt(grid(k)) + "," + std::to_string(i) + "," + fmt(sweep.energies(k, i)) + "\n";
  }
  RunManifest m;
  m.command = "sweep";
  m.parameters = to_json(p);
  m.add_input(p.graph);
  emit(p.out, content, m);
  return 0;
}

// ---------------------------------------------------------------------------
// rescale

struct RescaleParams {
  std::string graph;
  double omega = 0.0;
  std::string out;
};

json to_json(const RescaleParams& p) {
  return {{"graph", p.graph}, {"omega", p.omega}, {"out", p.out}};
}

int run_rescale(const RescaleParams& p) {
  Pipeline pl = load_pipeline(p.graph);
  auto plan = make_rescale_plan(pl.spectrum, p.omega);
  auto rescaled = rescale_network(pl.graph, plan);

  RunManifest m;
  m.command = "rescale";
  m.parameters = to_json(p);
  m.add_input(p.graph);
  emit(p.out, format_graph(rescaled), m);

  json j;
  j["mode"] = plan.mode;
  j["mode_frequency"] = plan.mode_frequency;
  j["factor"] = plan.factor;
  j["weight_factor"] = plan.weight_factor;
  j["target_frequency"] = p.omega;
  j["output"] = p.out;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateParams {
  std::string graph;
  long long node = 0;
  double omega = 0.0;
  double amplitude = 1.0;
  double gamma = 0.02;
  double dt = 0.001;
  double t_end = 500.0;
  long long stride = 10;
  long long ma_window = 0;  // samples; 0: one stimulus period
  std::string format = "csv";
  std::string out;
};

json to_json(const SimulateParams& p) {
  return {{"graph", p.graph}, {"node", p.node},     {"omega", p.omega},
          {"F", p.amplitude}, {"gamma", p.gamma},   {"dt", p.dt},
          {"t_end", p.t_end}, {"stride", p.stride}, {"ma_window", p.ma_window},
          {"format", p.format}, {"out", p.out}};
}

Index resolve_ma_window(long long requested, double omega, double dt, long long stride,
                        Index samples) {
  Index window = static_cast<Index>(requested);
  if (window <= 0)
    window = omega > 0
                 ? static_cast<Index>(std::ceil(2 * std::numbers::pi / (omega * dt * stride)))
                 : 1;
  return std::clamp<Index>(window, 1, samples);
}

int run_simulate(const SimulateParams& p) {
  Pipeline pl = load_pipeline(p.graph);
  SimConfigd config;
  config.dt = p.dt;
  config.t_end = p.t_end;
  config.stimulus = {static_cast<Index>(p.node), p.amplitude, p.omega, p.gamma};
  config.sample_stride = static_cast<Index>(p.stride);
  config.max_frequency = pl.spectrum.frequencies(pl.spectrum.size() - 1);

  auto out = run(pl.graph, pl.sym.masses, config);
  if (out.stability_warning)
    std::cerr << "warning: dt * omega_max = " << config.dt * config.max_frequency
              << " >= 2; explicit Euler is unstable at this step size\n";

  const Index samples = out.times.size();
  const Index n = pl.graph.node_count;
  const Index window = resolve_ma_window(p.ma_window, p.omega, p.dt, p.stride, samples);
  const Index offset = moving_average_offset(window);

  Eigen::MatrixXd ma(samples - window + 1, n);
  for (Index i = 0; i < n; ++i) ma.col(i) = moving_average(out.kinetic_energies.col(i).eval(), window);

  std::string content;
  if (p.format == "json") {
    json j;
    j["times"] = std::vector<double>(out.times.begin(), out.times.end());
    j["ma_window"] = window;
    j["ma_offset"] = offset;
    json series = json::array();
    for (Index i = 0; i < n; ++i) {
      json s;
      s["node"] = i;
      s["x"] = std::vector<double>(out.positions.col(i).begin(), out.positions.col(i).end());
      s["v"] = std::vector<double>(out.velocities.col(i).begin(), out.velocities.col(i).end());
      s["K"] = std::vector<double>(out.kinetic_energies.col(i).begin(),
                                   out.kinetic_energies.col(i).end());
      s["K_ma"] = std::vector<double>(ma.col(i).begin(), ma.col(i).end());
      series.push_back(std::move(s));
    }
    j["series"] = std::move(series);
    content = j.dump() + "\n";
  } else {
    content = "t,node,x,v,K,K_ma\n";
    content.reserve(static_cast<std::size_t>(samples) * n * 48);
    for (Index k = 0; k < samples; ++k) {
      const bool has_ma = k >= offset && k < offset + ma.rows();
      for (Index i = 0; i < n; ++i) {
        content += fmt(out.times(k));
        content += ',';
        content += std::to_string(i);
        content += ',';
        content += fmt(out.positions(k, i));
        content += ',';
        content += fmt(out.velocities(k, i));
        content += ',';
        content += fmt(out.kinetic_energies(k, i));
        content += ',';
        content += has_ma ? fmt(ma(k - offset, i)) : "nan";
        content += '\n';
      }
    }
  }

  RunManifest m;
  m.command = "simulate";
  m.parameters = to_json(p);
  m.add_input(p.graph);
  emit(p.out, content, m);
  return 0;
}

// ---------------------------------------------------------------------------
// beats

struct BeatsParams {
  std::string input;
  long long node = -1;  // -1: all nodes
  std::string manifest;  // defaults to <input>.manifest.json when present
  std::string graph;     // optional, for predictions when no manifest exists
  double omega = 0.0;
  double gamma = -1.0;
  double min_fraction = DetectOptionsd{}.minimum_fraction;
  double max_cv = DetectOptionsd{}.max_spacing_cv;
  double prominence = DetectOptionsd{}.prominence_fraction;
  std::string format = "json";
  std::string out;
};

json to_json(const BeatsParams& p) {
  return {{"input", p.input},       {"node", p.node},
          {"manifest", p.manifest}, {"graph", p.graph},
          {"omega", p.omega},       {"gamma", p.gamma},
          {"min_fraction", p.min_fraction}, {"max_cv", p.max_cv},
          {"prominence", p.prominence},     {"format", p.format},
          {"out", p.out}};
}

struct NodeSeries {
  std::vector<double> times;
  std::vector<double> smoothed;  // finite K_ma entries only
};

std::map<Index, NodeSeries> read_simulation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty simulation file", 1);

  // column lookup from the header
  std::vector<std::string> cols;
  {
    std::stringstream header(line);
    std::string tok;
    while (std::getline(header, tok, ',')) cols.push_back(tok);
  }
  auto col_of = [&](const std::string& name) {
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (cols[c] == name) return static_cast<long>(c);
    return -1L;
  };
  const long t_col = col_of("t"), node_col = col_of("node"), ma_col = col_of("K_ma");
  if (t_col < 0 || node_col < 0 || ma_col < 0)
    throw ParseError("simulation CSV must have t, node and K_ma columns", 1);

  std::map<Index, NodeSeries> series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string tok;
    double t = 0, ma = 0;
    long long node = 0;
    long c = 0;
    bool ok = true;
    while (std::getline(row, tok, ',')) {
      if (c == t_col)
        ok = ok && detail::parse_number(tok, t);
      else if (c == node_col)
        ok = ok && detail::parse_number(tok, node);
      else if (c == ma_col) {
        if (tok == "nan" || tok == "-nan")
          ma = std::numeric_limits<double>::quiet_NaN();
        else
          ok = ok && detail::parse_number(tok, ma);
      }
      ++c;
    }
    if (!ok) throw ParseError("malformed simulation row", line_no);
    if (std::isfinite(ma)) {
      auto& s = series[static_cast<Index>(node)];
      s.times.push_back(t);
      s.smoothed.push_back(ma);
    }
  }
  if (series.empty()) throw ParseError("no usable K_ma samples", line_no);
  return series;
}

int run_beats(const BeatsParams& p) {
  // recover run context from the input's manifest when available
  std::string graph_path = p.graph;
  double omega = p.omega, gamma = p.gamma;
  std::string manifest_path = p.manifest;
  if (manifest_path.empty() && fs::exists(p.input + ".manifest.json"))
    manifest_path = p.input + ".manifest.json";
  if (!manifest_path.empty() && fs::exists(manifest_path)) {
    json cfg = load_manifest_parameters(manifest_path);
    if (graph_path.empty() && cfg.contains("graph")) graph_path = cfg["graph"].get<std::string>();
    if (omega <= 0 && cfg.contains("omega")) omega = cfg["omega"].get<double>();
    if (gamma < 0 && cfg.contains("gamma")) gamma = cfg["gamma"].get<double>();
  }

  std::optional<Pipeline> pl;
  if (!graph_path.empty()) pl = load_pipeline(graph_path);

  DetectOptionsd options;
  options.minimum_fraction = p.min_fraction;
  options.max_spacing_cv = p.max_cv;
  options.prominence_fraction = p.prominence;
  options.carrier_omega = omega > 0 ? omega : 0.0;

  auto series = read_simulation_csv(p.input);
  json reports = json::array();
  for (const auto& [node, data] : series) {
    if (p.node >= 0 && node != static_cast<Index>(p.node)) continue;
    Eigen::Map<const Eigen::VectorXd> s(data.smoothed.data(),
                                        static_cast<Index>(data.smoothed.size()));
    Eigen::Map<const Eigen::VectorXd> t(data.times.data(), static_cast<Index>(data.times.size()));
    BeatReportd report = detect_beats(Eigen::VectorXd(s), Eigen::VectorXd(t), options);

    json r;
    r["node"] = node;
    r["detected"] = report.detected;
    r["envelope_frequency"] = report.envelope_frequency;
    r["envelope_minima_times"] = report.envelope_minima_times;
    r["amplitude_growth"] = report.amplitude_growth;
    r["converged_energy"] = report.converged_energy;
    r["spacing_cv"] = report.spacing_cv;
    r["frequency_domain"] = "energy";

    if (pl && omega > 0 && gamma >= 0) {
      Stimulusd stim{0, 1.0, omega, gamma};
      report.predicted_frequency = predicted_envelope_frequency(pl->spectrum, stim);
      r["predicted_frequency"] = report.predicted_frequency;

      const Index nu = nearest_mode(pl->spectrum, stim);
      if (auto peak = resonance_peak(pl->spectrum.frequencies(nu), gamma)) {
        Stimulusd at_peak{0, 1.0, *peak, gamma};
        const double peak_energy =
            oscillation_energy(pl->spectrum, pl->sym.masses, at_peak, node);
        if (peak_energy > 0)
          r["omen_score"] = omen_score(report, OmenReferenced{peak_energy, omega});
      }
    }
    reports.push_back(std::move(r));
  }

  json j;
  j["input"] = p.input;
  j["reports"] = std::move(reports);
  const std::string content = j.dump(2) + "\n";

  RunManifest m;
  m.command = "beats";
  m.parameters = to_json(p);
  m.add_input(p.input);
  if (!graph_path.empty()) m.add_input(graph_path);
  emit(p.out, content, m);
  return 0;
}

// ---------------------------------------------------------------------------
// demo

int run_demo(const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  for (const auto& [name, text] :
       {std::pair{"graph4.txt", example_graph4}, std::pair{"graph5.txt", example_graph5}}) {
    write_file(path(name), std::string(text));
    RunManifest m;
    m.command = "demo";
    m.parameters = {{"out_dir", out_dir}};
    m.outputs = {path(name)};
    m.write_for(path(name));
  }

  AnalyzeParams a4{path("graph4.txt"), "json", path("analyze_graph4.json")};
  run_analyze(a4);
  AnalyzeParams a5{path("graph5.txt"), "json", path("analyze_graph5.json")};
  run_analyze(a5);
  std::cout << "demo: analyzed bundled graphs\n";

  Pipeline g4 = load_pipeline(path("graph4.txt"));
  Pipeline g5 = load_pipeline(path("graph5.txt"));

  SweepParams sweep4;
  sweep4.graph = path("graph4.txt");
  sweep4.node = 1;
  sweep4.out = path("sweep_graph4.csv");
  run_sweep(sweep4);

  RescaleParams rescale4{path("graph4.txt"), 1.1 * g4.spectrum.frequencies(1),
                         path("graph4_rescaled.txt")};
  run_rescale(rescale4);

  SweepParams sweep4r = sweep4;
  sweep4r.graph = path("graph4_rescaled.txt");
  sweep4r.out = path("sweep_graph4_rescaled.csv");
  run_sweep(sweep4r);
  std::cout << "demo: swept oscillation energy before/after rescale\n";

  SimulateParams sim5;
  sim5.graph = path("graph5.txt");
  sim5.node = 1;
  sim5.omega = g5.spectrum.frequencies(1) - 0.05;
  sim5.t_end = 400.0;
  sim5.out = path("simulate_graph5.csv");
  run_simulate(sim5);
  std::cout << "demo: simulated the 5-node graph near resonance\n";

  BeatsParams beats5;
  beats5.input = path("simulate_graph5.csv");
  beats5.out = path("beats_graph5.json");
  run_beats(beats5);
  std::cout << "demo: beat reports written\n";

  std::cout << "demo: outputs in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonance-driven activation analysis on weighted directed graphs"};
  app.require_subcommand(1);

  std::string config_path;

  // analyze
  AnalyzeParams ap;
  auto* analyze = app.add_subcommand("analyze", "eigenvalues and eigenfrequencies of a graph");
  auto* ap_graph = analyze->add_option("--graph", ap.graph, "edge-list file");
  auto* ap_format =
      analyze->add_option("--format", ap.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--out", ap.out, "output path (default stdout)");
  analyze->add_option("--config", config_path, "manifest/parameter JSON to replay");

  // sweep
  SweepParams sp;
  auto* sweep = app.add_subcommand("sweep", "oscillation energy across a frequency grid");
  auto* sp_graph = sweep->add_option("--graph", sp.graph, "edge-list file");
  auto* sp_node = sweep->add_option("--node", sp.node, "driven node (0-based)");
  auto* sp_f = sweep->add_option("--F", sp.amplitude, "stimulus amplitude");
  auto* sp_gamma = sweep->add_option("--gamma", sp.gamma, "damping coefficient");
  auto* sp_omin = sweep->add_option("--omega-min", sp.omega_min, "grid start");
  auto* sp_omax = sweep->add_option("--omega-max", sp.omega_max, "grid end (default 1.2 w_max)");
  auto* sp_steps = sweep->add_option("--steps", sp.steps, "grid points");
  auto* sp_format =
      sweep->add_option("--format", sp.format, "csv|json")->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", sp.out, "output path (default stdout)");
  sweep->add_option("--config", config_path, "manifest/parameter JSON to replay");

  // rescale
  RescaleParams rp;
  auto* rescale = app.add_subcommand("rescale", "align the network's resonance with a stimulus");
  auto* rp_graph = rescale->add_option("--graph", rp.graph, "edge-list file");
  auto* rp_omega = rescale->add_option("--omega", rp.omega, "stimulus angular frequency");
  auto* rp_out = rescale->add_option("--out", rp.out, "rescaled edge-list output path");
  rescale->add_option("--config", config_path, "manifest/parameter JSON to replay");

  // simulate
  SimulateParams mp;
  auto* simulate = app.add_subcommand("simulate", "explicit-Euler forced oscillation run");
  auto* mp_graph = simulate->add_option("--graph", mp.graph, "edge-list file");
  auto* mp_node = simulate->add_option("--node", mp.node, "driven node (0-based)");
  auto* mp_omega = simulate->add_option("--omega", mp.omega, "stimulus angular frequency");
  auto* mp_f = simulate->add_option("--F", mp.amplitude, "stimulus amplitude");
  auto* mp_gamma = simulate->add_option("--gamma", mp.gamma, "damping coefficient");
  auto* mp_dt = simulate->add_option("--dt", mp.dt, "time step");
  auto* mp_tend = simulate->add_option("--t-end", mp.t_end, "final time");
  auto* mp_stride = simulate->add_option("--stride", mp.stride, "record every k-th step");
  auto* mp_ma = simulate->add_option("--ma-window", mp.ma_window,
                                     "moving-average window in samples (default: one period)");
  auto* mp_format =
      simulate->add_option("--format", mp.format, "csv|json")->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--out", mp.out, "output path (default stdout)");
  simulate->add_option("--config", config_path, "manifest/parameter JSON to replay");

  // beats
  BeatsParams bp;
  auto* beats = app.add_subcommand("beats", "beat detection on simulated kinetic energy");
  auto* bp_input = beats->add_option("--input", bp.input, "simulation CSV");
  auto* bp_node = beats->add_option("--node", bp.node, "restrict to one node");
  auto* bp_manifest = beats->add_option("--manifest", bp.manifest, "manifest of the simulation run");
  auto* bp_graph = beats->add_option("--graph", bp.graph, "graph file for predictions");
  auto* bp_omega = beats->add_option("--omega", bp.omega, "stimulus frequency (if no manifest)");
  auto* bp_gamma = beats->add_option("--gamma", bp.gamma, "damping (if no manifest)");
  auto* bp_frac = beats->add_option("--min-fraction", bp.min_fraction, "envelope-minimum fraction");
  auto* bp_cv = beats->add_option("--max-cv", bp.max_cv, "max spacing CV");
  auto* bp_prom = beats->add_option("--prominence", bp.prominence, "extremum prominence fraction");
  beats->add_option("--format", bp.format, "json")->check(CLI::IsMember({"json"}));
  beats->add_option("--out", bp.out, "output path (default stdout)");
  beats->add_option("--config", config_path, "manifest/parameter JSON to replay");

  // demo
  std::string demo_dir = "netres-demo";
  auto* demo = app.add_subcommand("demo", "full pipeline on the bundled example graphs");
  demo->add_option("--out-dir", demo_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    json cfg;
    if (!config_path.empty()) cfg = load_manifest_parameters(config_path);

    if (analyze->parsed()) {
      from_config(ap_graph, cfg, "graph", ap.graph);
      from_config(ap_format, cfg, "format", ap.format);
      if (ap.graph.empty()) throw std::invalid_argument("--graph is required");
      return run_analyze(ap);
    }
    if (sweep->parsed()) {
      from_config(sp_graph, cfg, "graph", sp.graph);
      from_config(sp_node, cfg, "node", sp.node);
      from_config(sp_f, cfg, "F", sp.amplitude);
      from_config(sp_gamma, cfg, "gamma", sp.gamma);
      from_config(sp_omin, cfg, "omega_min", sp.omega_min);
      from_config(sp_omax, cfg, "omega_max", sp.omega_max);
      from_config(sp_steps, cfg, "steps", sp.steps);
      from_config(sp_format, cfg, "format", sp.format);
      if (sp.graph.empty()) throw std::invalid_argument("--graph is required");
      return run_sweep(sp);
    }
    if (rescale->parsed()) {
      from_config(rp_graph, cfg, "graph", rp.graph);
      from_config(rp_omega, cfg, "omega", rp.omega);
      from_config(rp_out, cfg, "out", rp.out);
      if (rp.graph.empty()) throw std::invalid_argument("--graph is required");
      if (rp.out.empty()) throw std::invalid_argument("--out is required");
      if (rp_omega->count() == 0 && !cfg.contains("omega"))
        throw std::invalid_argument("--omega is required");
      return run_rescale(rp);
    }
    if (simulate->parsed()) {
      from_config(mp_graph, cfg, "graph", mp.graph);
      from_config(mp_node, cfg, "node", mp.node);
      from_config(mp_omega, cfg, "omega", mp.omega);
      from_config(mp_f, cfg, "F", mp.amplitude);
      from_config(mp_gamma, cfg, "gamma", mp.gamma);
      from_config(mp_dt, cfg, "dt", mp.dt);
      from_config(mp_tend, cfg, "t_end", mp.t_end);
      from_config(mp_stride, cfg, "stride", mp.stride);
      from_config(mp_ma, cfg, "ma_window", mp.ma_window);
      from_config(mp_format, cfg, "format", mp.format);
      if (mp.graph.empty()) throw std::invalid_argument("--graph is required");
      if (mp_omega->count() == 0 && !cfg.contains("omega"))
        throw std::invalid_argument("--omega is required");
      return run_simulate(mp);
    }
    if (beats->parsed()) {
      from_config(bp_input, cfg, "input", bp.input);
      from_config(bp_node, cfg, "node", bp.node);
      from_config(bp_manifest, cfg, "manifest", bp.manifest);
      from_config(bp_graph, cfg, "graph", bp.graph);
      from_config(bp_omega, cfg, "omega", bp.omega);
      from_config(bp_gamma, cfg, "gamma", bp.gamma);
      from_config(bp_frac, cfg, "min_fraction", bp.min_fraction);
      from_config(bp_cv, cfg, "max_cv", bp.max_cv);
      from_config(bp_prom, cfg, "prominence", bp.prominence);
      if (bp.input.empty()) throw std::invalid_argument("--input is required");
      return run_beats(bp);
    }
    if (demo->parsed()) return run_demo(demo_dir);
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return exit_model;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
