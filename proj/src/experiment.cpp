#include "rkhs/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "rkhs/errors.hpp"

namespace rkhs {

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& m) { throw DomainError("ExperimentConfig: " + m); };
  if (!(c.field_halfwidth > 0.0)) fail("field_halfwidth must be > 0");
  if (c.samples_per_side < 1) fail("samples_per_side must be >= 1");
  if (c.n_flights_train < 1 || c.n_flights_test < 0) fail("flight counts must be positive");
  if (!(c.kernel_sigma > 0.0)) fail("kernel_sigma must be > 0");
  if (!(c.ridge_lambda >= 0.0)) fail("ridge_lambda must be >= 0");
  if (c.n1 < 1 || c.n2 < 1 || c.terms_per_filter < 1) fail("net shape must be positive");
  if (c.field_bumps < 1) fail("field_bumps must be >= 1");
  if (!(c.grid_step > 0.0)) fail("grid_step must be > 0");
  validate(c.train);
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  return Json{{"field_halfwidth", c.field_halfwidth},
              {"samples_per_side", c.samples_per_side},
              {"n_flights_train", c.n_flights_train},
              {"n_flights_test", c.n_flights_test},
              {"kernel_sigma", c.kernel_sigma},
              {"ridge_lambda", c.ridge_lambda},
              {"n1", c.n1},
              {"n2", c.n2},
              {"terms_per_filter", c.terms_per_filter},
              {"init_amplitude", c.init_amplitude},
              {"init_jitter", c.init_jitter},
              {"shift", c.shift},
              {"field_bumps", c.field_bumps},
              {"grid_step", c.grid_step},
              {"mode", c.mode == SynthMode::translation_target ? "translation_target" : "random_smooth"},
              {"train", train_config_to_json(c.train)},
              {"seed", c.seed}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("experiment config: expected an object");
  ExperimentConfig c;
  auto num = [&](const std::string& key, auto& target) {
    using T = std::decay_t<decltype(target)>;
    try {
      target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError("experiment config: field \"" + key + "\" has the wrong type");
    }
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "field_halfwidth") num(key, c.field_halfwidth);
    else if (key == "samples_per_side") num(key, c.samples_per_side);
    else if (key == "n_flights_train") num(key, c.n_flights_train);
    else if (key == "n_flights_test") num(key, c.n_flights_test);
    else if (key == "kernel_sigma") num(key, c.kernel_sigma);
    else if (key == "ridge_lambda") num(key, c.ridge_lambda);
    else if (key == "n1") num(key, c.n1);
    else if (key == "n2") num(key, c.n2);
    else if (key == "terms_per_filter") num(key, c.terms_per_filter);
    else if (key == "init_amplitude") num(key, c.init_amplitude);
    else if (key == "init_jitter") num(key, c.init_jitter);
    else if (key == "shift") num(key, c.shift);
    else if (key == "field_bumps") num(key, c.field_bumps);
    else if (key == "grid_step") num(key, c.grid_step);
    else if (key == "seed") num(key, c.seed);
    else if (key == "train") c.train = train_config_from_json(value);
    else if (key == "mode") {
      std::string m;
      num(key, m);
      if (m == "translation_target") c.mode = SynthMode::translation_target;
      else if (m == "random_smooth") c.mode = SynthMode::random_smooth;
      else throw ParseError("experiment config: unknown mode \"" + m + "\"");
    } else {
      throw ParseError("experiment config: unknown key \"" + key + "\"");
    }
  }
  try {
    validate(c);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return c;
}

double RandomField::operator()(double x, double y) const {
  double s = 0.0;
  for (std::size_t k = 0; k < cx.size(); ++k) {
    const double dx = x - cx[k];
    const double dy = y - cy[k];
    s += amplitude[k] * std::exp(-(dx * dx + dy * dy) / (2.0 * width[k] * width[k]));
  }
  return s;
}

namespace {

std::mt19937_64 flight_rng(const ExperimentConfig& cfg, int flight, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(flight), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomField flight_field(const ExperimentConfig& cfg, int flight) {
  auto rng = flight_rng(cfg, flight, 0);
  const double h = cfg.field_halfwidth;
  const double margin = 10.0;
  // In translation mode only the left half (and its shifted copy) is ever
  // sampled, so the bumps are placed there.
  const double x_hi = cfg.mode == SynthMode::translation_target ? margin : h + margin;
  std::uniform_real_distribution<double> ux(-h - margin, x_hi), uy(-h - margin, h + margin),
      uw(8.0, 16.0), ua(1.0, 4.0);
  RandomField f;
  for (int k = 0; k < cfg.field_bumps; ++k) {
    f.cx.push_back(ux(rng));
    f.cy.push_back(uy(rng));
    f.width.push_back(uw(rng));
    f.amplitude.push_back(ua(rng));
  }
  return f;
}

std::vector<Flight> synthesize_flights(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<Flight> out;
  const double h = cfg.field_halfwidth;
  for (int l = 0; l < cfg.n_flights(); ++l) {
    const RandomField field = flight_field(cfg, l);
    auto rng = flight_rng(cfg, l, 1);
    std::uniform_real_distribution<double> left(-h, 0.0), right(0.0, h), uy(-h, h);
    Flight fl;
    for (int s = 0; s < cfg.samples_per_side; ++s) {
      const double x = left(rng), y = uy(rng);
      fl.input.points.push_back(Planar{x, y});
      fl.input.values.push_back(field(x, y));
    }
    for (int s = 0; s < cfg.samples_per_side; ++s) {
      double x = right(rng);
      if (x == 0.0) x = h;
      const double y = uy(rng);
      fl.target.points.push_back(Planar{x, y});
      const double source_x = cfg.mode == SynthMode::translation_target ? x - cfg.shift : x;
      fl.target.values.push_back(field(source_x, y));
    }
    out.push_back(std::move(fl));
  }
  return out;
}

std::filesystem::path flight_csv(const std::filesystem::path& dir, int flight, bool target) {
  char name[64];
  std::snprintf(name, sizeof name, "flight_%02d_%s.csv", flight, target ? "target" : "input");
  return dir / name;
}

void write_flights(const std::vector<Flight>& flights, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t l = 0; l < flights.size(); ++l) {
    save_samples_csv(flights[l].input, flight_csv(dir, static_cast<int>(l), false));
    save_samples_csv(flights[l].target, flight_csv(dir, static_cast<int>(l), true));
  }
}

std::vector<Flight> read_flights(const std::filesystem::path& dir, int count) {
  std::vector<Flight> out;
  for (int l = 0; l < count; ++l)
    out.push_back(Flight{load_samples_csv(flight_csv(dir, l, false)),
                         load_samples_csv(flight_csv(dir, l, true))});
  return out;
}

Kernel experiment_kernel(const ExperimentConfig& cfg) { return gaussian2d(cfg.kernel_sigma); }
DomainOp experiment_op() { return Translation2D{}; }

FittedFlight fit_flight(const Flight& flight, const ExperimentConfig& cfg) {
  const Kernel k = experiment_kernel(cfg);
  return FittedFlight{fit_ridge(flight.input, k, experiment_op(), cfg.ridge_lambda),
                      fit_ridge(flight.target, k, experiment_op(), cfg.ridge_lambda)};
}

std::filesystem::path signal_json(const std::filesystem::path& dir, int flight, bool target) {
  char name[64];
  std::snprintf(name, sizeof name, "flight_%02d_%s.json", flight, target ? "target" : "input");
  return dir / name;
}

void write_fitted(const std::vector<FittedFlight>& fitted, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t l = 0; l < fitted.size(); ++l) {
    save_signal(fitted[l].input, signal_json(dir, static_cast<int>(l), false));
    save_signal(fitted[l].target, signal_json(dir, static_cast<int>(l), true));
  }
}

std::vector<FittedFlight> read_fitted(const std::filesystem::path& dir, int count) {
  std::vector<FittedFlight> out;
  for (int l = 0; l < count; ++l)
    out.push_back(FittedFlight{load_signal(signal_json(dir, l, false)),
                               load_signal(signal_json(dir, l, true))});
  return out;
}

Dataset training_set(const std::vector<FittedFlight>& fitted, const ExperimentConfig& cfg) {
  if (static_cast<int>(fitted.size()) < cfg.n_flights_train)
    throw DomainError("training_set: fewer fitted flights than n_flights_train");
  Dataset data;
  for (int l = 0; l < cfg.n_flights_train; ++l)
    data.push_back(Sample{fitted[static_cast<std::size_t>(l)].input,
                          fitted[static_cast<std::size_t>(l)].target});
  return data;
}

AlgNet initial_net(const ExperimentConfig& cfg) {
  NetInit init;
  init.n1 = cfg.n1;
  init.n2 = cfg.n2;
  init.terms_per_filter = cfg.terms_per_filter;
  init.amplitude = cfg.init_amplitude;
  init.jitter = cfg.init_jitter;
  init.seed = cfg.seed;
  return init_net(experiment_kernel(cfg), experiment_op(), init);
}

Grid evaluation_grid(const ExperimentConfig& cfg) {
  return grid2d(-cfg.field_halfwidth, cfg.field_halfwidth, cfg.grid_step);
}

double relative_mse(const GridField& out, const GridField& target) {
  if (out.values.size() != target.values.size())
    throw DomainError("relative_mse: raster size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double d = out.values[i] - target.values[i];
    num += d * d;
    den += target.values[i] * target.values[i];
  }
  if (den == 0.0) throw DegeneracyError("relative_mse: target raster is identically zero");
  return num / den;
}

FlightEval evaluate_flight(const AlgNet& net, const FittedFlight& flight, int index,
                           const Grid& grid) {
  FlightEval e;
  e.flight = index;
  e.input = evaluate_grid(flight.input, grid);
  e.output = evaluate_grid(forward(net, flight.input), grid);
  e.target = evaluate_grid(flight.target, grid);
  e.relative_mse = relative_mse(e.output, e.target);
  e.identity_relative_mse = relative_mse(e.input, e.target);
  return e;
}

EvalSummary evaluate_flights(const AlgNet& net, const std::vector<FittedFlight>& fitted,
                             int first, int last, const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir) {
  if (first < 0 || last > static_cast<int>(fitted.size()) || first >= last)
    throw DomainError("evaluate_flights: empty or out-of-range flight range");
  std::filesystem::create_directories(out_dir);
  const Grid grid = evaluation_grid(cfg);
  EvalSummary s;
  CsvTable table{{"flight", "relative_mse", "identity_relative_mse"}, {}};
  Json per_flight = Json::array();
  for (int l = first; l < last; ++l) {
    FlightEval e = evaluate_flight(net, fitted[static_cast<std::size_t>(l)], l, grid);
    char stem[32];
    std::snprintf(stem, sizeof stem, "flight_%02d", l);
    write_grid_csv(e.input, out_dir / (std::string(stem) + "_input_grid.csv"));
    write_grid_csv(e.output, out_dir / (std::string(stem) + "_output_grid.csv"));
    write_grid_csv(e.target, out_dir / (std::string(stem) + "_target_grid.csv"));
    table.rows.push_back({static_cast<double>(l), e.relative_mse, e.identity_relative_mse});
    per_flight.push_back(
        {{"flight", l}, {"relative_mse", e.relative_mse}, {"identity_relative_mse", e.identity_relative_mse}});
    s.mean_relative_mse += e.relative_mse;
    s.mean_identity_relative_mse += e.identity_relative_mse;
    s.flights.push_back(std::move(e));
  }
  s.mean_relative_mse /= static_cast<double>(s.flights.size());
  s.mean_identity_relative_mse /= static_cast<double>(s.flights.size());
  write_numeric_csv(table, out_dir / "eval.csv");
  write_json(Json{{"flights", per_flight},
                  {"mean_relative_mse", s.mean_relative_mse},
                  {"mean_identity_relative_mse", s.mean_identity_relative_mse},
                  {"ratio_to_identity", s.mean_relative_mse / s.mean_identity_relative_mse}},
             out_dir / "eval.json");
  return s;
}

}  // namespace rkhs
