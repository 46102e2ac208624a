#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rkhs/errors.hpp"
#include "rkhs/serialization.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rkhs_serialization_tests";
  fs::create_directories(dir);
  return dir / name;
}

bool same_terms(const RkhsSignal& a, const RkhsSignal& b) {
  if (a.size() != b.size() || !(a.kernel == b.kernel) || !(a.op == b.op)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.terms[i].weight != b.terms[i].weight || coordinates(a.terms[i].center) != coordinates(b.terms[i].center))
      return false;
  return true;
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("ops and kernels round trip") {
  for (const auto& oc : op_cases()) {
    CHECK(op_from_json(op_to_json(oc.op)) == oc.op);
    CHECK(kernel_from_json(kernel_to_json(oc.kernel)) == oc.kernel);
  }
  CHECK(op_to_json(CyclicSum{10.0}).at("sup") == 10.0);
  for (const Kernel& k : {sinc(3.14159), graphon_box(DirichletGreen{}, 128), graphon_box(ConstantGraphon{0.2}, 64)})
    CHECK(kernel_from_json(kernel_to_json(k)) == k);
  CHECK(kernel_from_json(Json::parse(R"({"type":"gaussian2d","sigma":10.0})")) == gaussian2d(10.0));
  CHECK(kernel_from_json(Json::parse(R"({"type":"graphon_box","graphon":"dirichlet_green","n_quad":2000})")) ==
        graphon_box(DirichletGreen{}, 2000));
  CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type":"laplace"})")), ParseError);
  CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type":"sinc"})")), ParseError);
  CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type":"sinc","B":-1})")), ParseError);
  CHECK_THROWS_AS(op_from_json(Json::parse(R"({"op":"nope"})")), ParseError);
}

TEST_CASE("signals and nets round trip exactly") {
  Rng rng(71);
  for (const auto& oc : op_cases()) {
    const RkhsSignal f = random_signal(oc.kernel, oc.op, 4, rng);
    CHECK(same_terms(signal_from_json(signal_to_json(f)), f));
    const fs::path p = scratch("signal.json");
    save_signal(f, p);
    CHECK(same_terms(load_signal(p), f));
  }
  const AlgNet net = init_net(gaussian2d(10.0), Translation2D{}, NetInit{2, 2, 3, 1.0, 0.1, 9});
  const fs::path p = scratch("net.json");
  save_net(net, p);
  const AlgNet back = load_net(p);
  CHECK(collect_params(back) == collect_params(net));
  CHECK(back.n1() == 2);
  CHECK(back.n2() == 2);
  CHECK(read_json(p).at("N1") == 2);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(signal_from_json(Json::parse(R"({"kernel":{"type":"gaussian1d","B":1}})")), ParseError);
  CHECK_THROWS_AS(
      signal_from_json(Json::parse(
          R"({"kernel":{"type":"gaussian1d","B":1},"op":{"op":"translation1d"},"terms":[{"center":[1,2],"weight":1}]})")),
      ParseError);
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << "{not json";
  CHECK_THROWS_AS(read_json(bad), ParseError);
  CHECK_THROWS_AS(read_json(scratch("missing.json")), IoError);
}

TEST_CASE("train config") {
  TrainConfig c;
  c.mode = TrainMode::steepest_descent;
  c.iterations = 17;
  c.learning_rate = 0.5;
  c.use_adjoint = false;
  const TrainConfig back = train_config_from_json(train_config_to_json(c));
  CHECK(back.mode == TrainMode::steepest_descent);
  CHECK(back.iterations == 17);
  CHECK(back.learning_rate == 0.5);
  CHECK_FALSE(back.use_adjoint);
  CHECK(train_config_from_json(Json::object()).iterations == 2000);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"iteratoins": 3})")), ParseError);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"mode": "sgd"})")), ParseError);
}

TEST_CASE("grid csv round trip") {
  Rng rng(72);
  const RkhsSignal f = random_signal(gaussian2d(1.0), Translation2D{}, 3, rng);
  const GridField g2 = evaluate_grid(f, grid2d(-3.0, 3.0, 0.5));
  const fs::path p = scratch("grid2.csv");
  write_grid_csv(g2, p);
  const GridField back = read_grid_csv(p);
  CHECK(back.grid.dim == 2);
  CHECK(back.grid.nx == g2.grid.nx);
  CHECK(back.grid.ny == g2.grid.ny);
  CHECK(back.values == g2.values);

  const RkhsSignal h = random_signal(gaussian1d(1.0), Translation1D{}, 3, rng);
  const GridField g1 = evaluate_grid(h, grid1d(-2.0, 2.0, 0.1));
  write_grid_csv(g1, p);
  const GridField b1 = read_grid_csv(p);
  CHECK(b1.grid.dim == 1);
  CHECK(b1.values == g1.values);

  std::ofstream(scratch("ragged.csv")) << "x,value\n0,1\n1,2\n3,4\n";
  CHECK_THROWS_AS(read_grid_csv(scratch("ragged.csv")), ParseError);
}

TEST_CASE("loss and numeric csv") {
  const std::vector<double> trace{3.0, 2.5, 1.0 / 3.0};
  const fs::path p = scratch("loss.csv");
  write_loss_csv(trace, p);
  CHECK(read_loss_csv(p) == trace);
  const CsvTable t{{"k", "a", "b"}, {{1, 2.5, -3}, {2, 1e-300, 4}}};
  write_numeric_csv(t, p);
  const CsvTable back = read_numeric_csv(p);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  std::ofstream(p) << "a,b\n1,2\n3\n";
  CHECK_THROWS_WITH_AS(read_numeric_csv(p), doctest::Contains("3"), ParseError);
}

}
