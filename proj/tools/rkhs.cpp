// Command-line front end: synthetic data, fitting, convolution, training,
// evaluation and demos. Exit codes: 0 success, 1 validation error, 2 IO error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rkhs/errors.hpp"
#include "rkhs/experiment.hpp"

namespace fs = std::filesystem;
using namespace rkhs;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out_dir = "out";
};

ExperimentConfig load_config(const Globals& g) {
  ExperimentConfig cfg;
  if (!g.config.empty()) cfg = experiment_config_from_json(read_json(g.config));
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.train.seed = *g.seed;
  }
  return cfg;
}

void report(const Json& j) { std::cout << j.dump(2) << '\n'; }

bool rasterizable(const RkhsSignal& f) {
  const CenterKind k = center_kind(f.op);
  return k == CenterKind::scalar || k == CenterKind::planar || k == CenterKind::unit_interval;
}

Grid raster_for(const RkhsSignal& f, const ExperimentConfig& cfg) {
  const CenterKind k = center_kind(f.op);
  if (k == CenterKind::planar) return evaluation_grid(cfg);
  if (k == CenterKind::unit_interval) return grid1d(0.01, 1.0, 0.01);
  return grid1d(-cfg.field_halfwidth, cfg.field_halfwidth, cfg.grid_step);
}

int cmd_synth(const Globals& g) {
  const ExperimentConfig cfg = load_config(g);
  const auto flights = synthesize_flights(cfg);
  write_flights(flights, g.out_dir);
  report({{"command", "synth-data"}, {"flights", flights.size()}, {"out_dir", g.out_dir}});
  return 0;
}

int cmd_fit(const Globals& g, const std::string& data_dir, const std::string& samples) {
  const ExperimentConfig cfg = load_config(g);
  if (!samples.empty()) {
    const SampleSet s = load_samples_csv(samples);
    const RkhsSignal f = fit_ridge(s, experiment_kernel(cfg), experiment_op(), cfg.ridge_lambda);
    const fs::path out = fs::path(g.out_dir) / (fs::path(samples).stem().string() + ".json");
    save_signal(f, out);
    report({{"command", "fit"}, {"signal", out.string()}, {"terms", f.size()}});
    return 0;
  }
  const auto flights = read_flights(data_dir, cfg.n_flights());
  std::vector<FittedFlight> fitted;
  for (const auto& fl : flights) fitted.push_back(fit_flight(fl, cfg));
  write_fitted(fitted, g.out_dir);
  report({{"command", "fit"}, {"flights", fitted.size()}, {"out_dir", g.out_dir}});
  return 0;
}

int cmd_convolve(const Globals& g, const std::string& f_path, const std::string& g_path) {
  const ExperimentConfig cfg = load_config(g);
  const RkhsSignal f = load_signal(f_path);
  const RkhsSignal h = convolve(f, load_signal(g_path));
  const fs::path out = fs::path(g.out_dir);
  save_signal(h, out / "convolved.json");
  if (rasterizable(h)) write_grid_csv(evaluate_grid(h, raster_for(h, cfg)), out / "convolved_grid.csv");
  report({{"command", "convolve"}, {"terms", h.size()}, {"out_dir", g.out_dir}});
  return 0;
}

int cmd_forward(const Globals& g, const std::string& net_path, const std::string& input_path) {
  const ExperimentConfig cfg = load_config(g);
  const AlgNet net = load_net(net_path);
  const RkhsSignal y = forward(net, load_signal(input_path));
  const fs::path out = fs::path(g.out_dir);
  save_signal(y, out / "output.json");
  if (rasterizable(y)) write_grid_csv(evaluate_grid(y, raster_for(y, cfg)), out / "output_grid.csv");
  report({{"command", "forward"}, {"terms", y.size()}, {"out_dir", g.out_dir}});
  return 0;
}

int cmd_train(const Globals& g, const std::string& signals_dir, const std::string& net_path) {
  const ExperimentConfig cfg = load_config(g);
  const auto fitted = read_fitted(signals_dir, cfg.n_flights_train);
  const Dataset data = training_set(fitted, cfg);
  const AlgNet start = net_path.empty() ? initial_net(cfg) : load_net(net_path);
  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult result = train(start, data, cfg.train);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path out = fs::path(g.out_dir);
  save_net(result.net, out / "net.json");
  write_loss_csv(result.loss_trace, out / "loss.csv");
  const double initial = result.loss_trace.empty() ? result.final_loss : result.loss_trace.front();
  const Json summary{{"command", "train"},
                     {"iterations", result.loss_trace.size()},
                     {"initial_loss", initial},
                     {"final_loss", result.final_loss},
                     {"loss_reduction", initial > 0.0 ? 1.0 - result.final_loss / initial : 0.0},
                     {"stop_reason", to_string(result.reason)},
                     {"seconds", seconds}};
  write_json(summary, out / "train.json");
  report(summary);
  return 0;
}

int cmd_eval(const Globals& g, const std::string& net_path, const std::string& signals_dir,
             const std::string& split) {
  const ExperimentConfig cfg = load_config(g);
  const auto fitted = read_fitted(signals_dir, cfg.n_flights());
  const AlgNet net = load_net(net_path);
  int first = cfg.n_flights_train, last = cfg.n_flights();
  if (split == "train") {
    first = 0;
    last = cfg.n_flights_train;
  } else if (split == "all") {
    first = 0;
  }
  const EvalSummary s = evaluate_flights(net, fitted, first, last, cfg, g.out_dir);
  report({{"command", "eval"},
          {"split", split},
          {"mean_relative_mse", s.mean_relative_mse},
          {"mean_identity_relative_mse", s.mean_identity_relative_mse}});
  return 0;
}

int cmd_demo(const Globals& g, const std::string& name) {
  const ExperimentConfig cfg = load_config(g);
  const Json summary = run_demo(name, fs::path(g.out_dir) / name, cfg.seed);
  report(summary);
  return summary.value("pass", false) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolutional signal processing and networks on reproducing kernel Hilbert spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides the config)");
  app.add_option("--config", g.config, "Experiment config JSON");
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();

  auto* synth = app.add_subcommand("synth-data", "Write synthetic flight samples as CSV");

  std::string data_dir, samples;
  auto* fit = app.add_subcommand("fit", "Kernel ridge fit of flight samples to signal JSON");
  fit->add_option("--data", data_dir, "Directory written by synth-data");
  fit->add_option("--samples", samples, "A single samples CSV");

  std::string f_path, g_path;
  auto* conv = app.add_subcommand("convolve", "Convolve two signals");
  conv->add_option("f", f_path, "First signal JSON")->required();
  conv->add_option("g", g_path, "Second signal JSON")->required();

  std::string net_path, input_path;
  auto* fwd = app.add_subcommand("forward", "Run a network on one signal");
  fwd->add_option("--net", net_path, "Network JSON")->required();
  fwd->add_option("--input", input_path, "Input signal JSON")->required();

  std::string signals_dir, init_net_path;
  auto* trn = app.add_subcommand("train", "Train a network on fitted training flights");
  trn->add_option("--signals", signals_dir, "Directory written by fit")->required();
  trn->add_option("--net", init_net_path, "Initial network JSON (default: fresh init)");

  std::string eval_net, eval_signals, split = "test";
  auto* ev = app.add_subcommand("eval", "Rasterize and score network predictions");
  ev->add_option("--net", eval_net, "Network JSON")->required();
  ev->add_option("--signals", eval_signals, "Directory written by fit")->required();
  ev->add_option("--split", split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}))
      ->capture_default_str();

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Reproduce a figure's data");
  demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(demo_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) return cmd_synth(g);
    if (*fit) {
      if (data_dir.empty() == samples.empty())
        throw DomainError("fit: give exactly one of --data or --samples");
      return cmd_fit(g, data_dir, samples);
    }
    if (*conv) return cmd_convolve(g, f_path, g_path);
    if (*fwd) return cmd_forward(g, net_path, input_path);
    if (*trn) return cmd_train(g, signals_dir, init_net_path);
    if (*ev) return cmd_eval(g, eval_net, eval_signals, split);
    if (*demo) return cmd_demo(g, demo_name);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
