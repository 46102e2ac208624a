#include <doctest.h>

#include <filesystem>

#include "rkhs/errors.hpp"
#include "rkhs/experiment.hpp"

using namespace rkhs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rkhs_experiment_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("synthetic flights") {
  ExperimentConfig cfg;
  const auto flights = synthesize_flights(cfg);
  REQUIRE(flights.size() == 16u);
  for (int l = 0; l < 16; ++l) {
    const Flight& fl = flights[static_cast<std::size_t>(l)];
    CHECK(fl.input.size() == 9u);
    CHECK(fl.target.size() == 9u);
    const RandomField field = flight_field(cfg, l);
    for (std::size_t i = 0; i < 9; ++i) {
      const auto& p = std::get<Planar>(fl.input.points[i]);
      CHECK(p.x <= 0.0);
      CHECK(p.x >= -40.0);
      CHECK(std::abs(p.y) <= 40.0);
      CHECK(fl.input.values[i] == doctest::Approx(field(p.x, p.y)).epsilon(1e-12));
      const auto& q = std::get<Planar>(fl.target.points[i]);
      CHECK(q.x > 0.0);
      CHECK(q.x <= 40.0);
      CHECK(std::abs(fl.target.values[i] - field(q.x - cfg.shift, q.y)) <= 1e-10);
    }
  }
  const auto again = synthesize_flights(cfg);
  CHECK(again[3].target.values == flights[3].target.values);
  cfg.seed = 1;
  CHECK(synthesize_flights(cfg)[3].target.values != flights[3].target.values);
}

TEST_CASE("random smooth mode samples one field on both sides") {
  ExperimentConfig cfg;
  cfg.mode = SynthMode::random_smooth;
  const auto flights = synthesize_flights(cfg);
  const RandomField field = flight_field(cfg, 2);
  REQUIRE(field.cx.size() == 10u);
  const auto& q = std::get<Planar>(flights[2].target.points[0]);
  CHECK(flights[2].target.values[0] == doctest::Approx(field(q.x, q.y)).epsilon(1e-12));
}

TEST_CASE("flight files") {
  ExperimentConfig cfg;
  const fs::path dir = scratch("files");
  const auto flights = synthesize_flights(cfg);
  write_flights(flights, dir);
  int csv = 0;
  for (const auto& e : fs::directory_iterator(dir)) csv += e.path().extension() == ".csv";
  CHECK(csv == 32);
  const auto back = read_flights(dir, cfg.n_flights());
  CHECK(back[5].input.values == flights[5].input.values);

  std::vector<FittedFlight> fitted;
  for (const auto& fl : flights) fitted.push_back(fit_flight(fl, cfg));
  write_fitted(fitted, dir);
  const auto fback = read_fitted(dir, cfg.n_flights());
  CHECK(weights_of(fback[7].target) == weights_of(fitted[7].target));
  CHECK(training_set(fitted, cfg).size() == 12u);
  CHECK_THROWS_AS(read_flights(scratch("empty"), 1), IoError);
}

TEST_CASE("evaluation") {
  ExperimentConfig cfg;
  const Grid grid = evaluation_grid(cfg);
  CHECK(grid.nx == 81);
  CHECK(grid.ny == 81);
  const auto flights = synthesize_flights(cfg);
  const FittedFlight ff = fit_flight(flights[0], cfg);
  const AlgNet net = initial_net(cfg);
  // A target equal to the net's own output scores zero.
  const FittedFlight self{ff.input, forward(net, ff.input)};
  const FlightEval e = evaluate_flight(net, self, 0, grid);
  CHECK(e.relative_mse == 0.0);
  CHECK(e.identity_relative_mse > 0.0);

  const fs::path dir = scratch("eval");
  std::vector<FittedFlight> all{ff, self};
  const EvalSummary s = evaluate_flights(net, all, 1, 2, cfg, dir);
  CHECK(s.mean_relative_mse == 0.0);
  CHECK(fs::exists(dir / "eval.csv"));
  CHECK(fs::exists(dir / "eval.json"));
  const GridField out = read_grid_csv(dir / "flight_01_output_grid.csv");
  CHECK(out.grid.nx == 81);
  CHECK(out.values.size() == 81u * 81u);
  const CsvTable table = read_numeric_csv(dir / "eval.csv");
  CHECK(table.header == std::vector<std::string>{"flight", "relative_mse", "identity_relative_mse"});
  REQUIRE(table.rows.size() == 1u);
  CHECK(table.rows[0][1] == 0.0);
}

TEST_CASE("relative mse") {
  GridField a{grid1d(0, 2, 1), {1.0, 2.0, 2.0}}, b{grid1d(0, 2, 1), {1.0, 2.0, 0.0}};
  CHECK(relative_mse(b, a) == doctest::Approx(4.0 / 9.0));
  CHECK(relative_mse(a, a) == 0.0);
}

TEST_CASE("config json") {
  ExperimentConfig cfg;
  cfg.shift = 12.5;
  cfg.mode = SynthMode::random_smooth;
  cfg.train.iterations = 7;
  const ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(cfg));
  CHECK(back.shift == 12.5);
  CHECK(back.mode == SynthMode::random_smooth);
  CHECK(back.train.iterations == 7);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"n_flights_train": 0})")), ParseError);
  CHECK_THROWS_AS(experiment_config_from_json(Json::parse(R"({"colour": 1})")), ParseError);
}

TEST_CASE("demos are listed and unknown names rejected") {
  const auto names = demo_names();
  CHECK(names.size() == 5u);
  CHECK_THROWS_AS(run_demo("nope", scratch("demo"), 0), DomainError);
}

}
