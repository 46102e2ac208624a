#include <doctest.h>

#include "rkhs/algnn.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/nonlinearity.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::test;

TEST_SUITE("algnn") {

TEST_CASE("forward layer examples") {
  const Kernel k = gaussian1d(1.0);
  const DomainOp op = Translation1D{};
  Rng rng(31);
  const RkhsSignal f = random_signal(k, op, 4, rng);
  const RkhsSignal unit = unit_signal(k, op);
  CHECK(norm(subtract(forward_layer(unit, f), f)) <= 1e-14);
  CHECK(norm(subtract(forward_layer(scale(unit, 2.0), f), scale(f, 2.0))) <= 1e-14);
  const RkhsSignal ab = forward_layer(section(k, op, Scalar{0.5}), section(k, op, Scalar{-2.0}));
  REQUIRE(ab.size() == 1);
  CHECK(std::get<Scalar>(ab.terms[0].center).x == -1.5);
}

TEST_CASE("unit filters apply eta twice") {
  const Kernel k = gaussian1d(1.0);
  const DomainOp op = Translation1D{};
  Rng rng(32);
  const RkhsSignal f = random_signal(k, op, 5, rng);
  const AlgNet net = uniform_net(unit_signal(k, op), 1, 1);
  CHECK(norm(subtract(forward(net, f), apply_eta(apply_eta(f)))) <= 1e-14);
  CHECK(forward(net, zero_signal(k, op)).empty());
}

TEST_CASE("positive homogeneity on the positive branch") {
  const Kernel k = gaussian1d(0.5);
  const DomainOp op = Translation1D{};
  Rng rng(33);
  const AlgNet net = random_net(k, op, 2, 2, 3, rng, 0.2, 1.0);
  const RkhsSignal f = random_signal(k, op, 4, rng, 0.2, 1.0);
  const RkhsSignal y = forward(net, f);
  for (double c : {0.3, 2.0, 17.0}) {
    const RkhsSignal yc = forward(net, scale(f, c));
    CHECK(norm(subtract(yc, scale(y, c))) <= 1e-12 * c * norm(y));
  }
  CHECK(y.kernel == f.kernel);
  CHECK(y.op == f.op);
}

TEST_CASE("parameter round trip") {
  const Kernel k = gaussian2d(10.0);
  const DomainOp op = Translation2D{};
  const AlgNet net = init_net(k, op, NetInit{2, 2, 3, 1.0, 0.1, 5});
  const std::vector<double> p = collect_params(net);
  CHECK(p.size() == 6u * 3u * 3u);
  CHECK(collect_params(set_params(net, p)) == p);
  std::vector<double> bumped = p;
  bumped[0] += 1.0;
  const AlgNet b = set_params(net, bumped);
  CHECK(b.layer1[0].terms[0].weight == net.layer1[0].terms[0].weight + 1.0);
  int changed = 0;
  const auto q = collect_params(b);
  for (std::size_t i = 0; i < p.size(); ++i) changed += q[i] != p[i];
  CHECK(changed == 1);
  CHECK_THROWS_AS(set_params(net, std::vector<double>(3, 0.0)), DomainError);

  const auto layout = param_layout(net);
  REQUIRE(layout.size() == p.size());
  CHECK(layout[0].component == -1);
  CHECK(layout[1].component == 0);
  CHECK(layout[2].component == 1);
  CHECK(layout.back().block == net.block_count() - 1);
}

TEST_CASE("rotation parameters are projected back onto SO(3)") {
  const AlgNet net = init_net(sphere_poly(3), SphereRotation{}, NetInit{1, 1, 2, 1.0, 0.1, 2});
  std::vector<double> p = collect_params(net);
  p[1] += 1e-3;
  const AlgNet moved = set_params(net, p);
  CHECK_NOTHROW(validate(moved.layer1[0].terms[0].center));
}

TEST_CASE("init places jittered sections near the identity") {
  const AlgNet net = init_net(gaussian2d(10.0), Translation2D{}, NetInit{2, 2, 3, 1.0, 0.1, 0});
  CHECK(net.n1() == 2);
  CHECK(net.n2() == 2);
  CHECK(net.block_count() == 6);
  for (int b = 0; b < net.block_count(); ++b) {
    REQUIRE(net.block(b).size() == 3);
    for (const auto& t : net.block(b).terms) {
      CHECK(t.weight == 1.0);
      const auto& c = std::get<Planar>(t.center);
      CHECK(std::abs(c.x) <= 0.1);
      CHECK(std::abs(c.y) <= 0.1);
    }
  }
  const AlgNet ui = init_net(gaussian1d(4.0), UnitIntervalProduct{}, NetInit{1, 1, 3, 1.0, 0.1, 0});
  for (const auto& t : ui.layer1[0].terms) CHECK_NOTHROW(validate(t.center));
}

TEST_CASE("mismatched filters are rejected") {
  const RkhsSignal a = unit_signal(gaussian1d(1.0), Translation1D{});
  const RkhsSignal b = unit_signal(gaussian1d(2.0), Translation1D{});
  CHECK_THROWS_AS(make_net(a.kernel, a.op, {a, b}, {{a, a}}), DomainError);
  CHECK_THROWS_AS(make_net(a.kernel, a.op, {a, a}, {{a}}), DomainError);
}

TEST_CASE("golden forward output") {
  const AlgNet net = init_net(gaussian2d(10.0), Translation2D{}, NetInit{2, 2, 3, 1.0, 0.1, 0});
  const RkhsSignal f = section(net.kernel, net.op, Planar{3.0, -4.0});
  const RkhsSignal y = forward(net, f);
  const std::vector<std::pair<Planar, double>> golden{
      {{0.0, 0.0}, 31.797534099487667},
      {{3.0, -4.0}, 35.997591197512783},
      {{10.0, 5.0}, 18.800208651931985},
      {{-20.0, 12.0}, 0.71446339718725493}};
  for (const auto& [x, v] : golden) CHECK(evaluate(y, x) == doctest::Approx(v).epsilon(1e-12));
}

}
