#include <doctest.h>

#include "rkhs/domain_ops.hpp"
#include "rkhs/errors.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::test;

namespace {

double scalar(const Center& c) { return coordinates(c).front(); }

}  // namespace

TEST_SUITE("domain_ops") {

TEST_CASE("cyclic sum wraps once") {
  const DomainOp op = CyclicSum{10.0};
  CHECK(scalar(compose(op, Scalar{7.0}, Scalar{5.0})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(scalar(compose(op, Scalar{3.0}, Scalar{5.0})) == doctest::Approx(8.0));
  CHECK_THROWS_AS(compose(op, Scalar{11.0}, Scalar{1.0}), DomainError);
  CHECK_THROWS_AS(compose(op, Scalar{-0.5}, Scalar{1.0}), DomainError);
}

TEST_CASE("unit interval product") {
  const Center c = compose(UnitIntervalProduct{}, UnitInterval{0.5}, UnitInterval{0.8});
  CHECK(std::get<UnitInterval>(c).t == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("modular sum keeps values in (0,1]") {
  const DomainOp op = ModularSum01{};
  CHECK(scalar(compose(op, UnitInterval{0.7}, UnitInterval{0.6})) == doctest::Approx(0.3));
  CHECK(scalar(compose(op, UnitInterval{0.5}, UnitInterval{0.5})) == 1.0);
  CHECK(scalar(identity(op)) == 1.0);
  CHECK(scalar(compose(op, identity(op), UnitInterval{0.25})) == doctest::Approx(0.25));
}

TEST_CASE("identities") {
  CHECK(scalar(identity(Translation1D{})) == 0.0);
  CHECK(scalar(identity(CyclicSum{3.0})) == 0.0);
  CHECK(coordinates(identity(ComponentwiseProduct2D{})) == std::vector<double>{1.0, 1.0});
  CHECK(coordinates(identity(Translation2D{})) == std::vector<double>{0.0, 0.0});
  CHECK(scalar(identity(UnitIntervalProduct{})) == 1.0);
  CHECK(std::get<Rotation3>(identity(SphereRotation{})).R == Eigen::Matrix3d::Identity());
  const Center v = Scalar{2.5};
  CHECK(scalar(compose(Translation1D{}, v, identity(Translation1D{}))) == 2.5);
}

TEST_CASE("componentwise product and translation") {
  const Center c = compose(ComponentwiseProduct2D{}, Planar{2.0, -3.0}, Planar{0.5, 4.0});
  CHECK(coordinates(c) == std::vector<double>{1.0, -12.0});
  const Center t = compose(Translation2D{}, Planar{2.0, -3.0}, Planar{0.5, 4.0});
  CHECK(coordinates(t) == std::vector<double>{2.5, 1.0});
}

TEST_CASE("variant mismatch is rejected") {
  CHECK_THROWS_AS(compose(Translation1D{}, Planar{0, 0}, Scalar{1}), DomainError);
  CHECK_THROWS_AS(compose(Translation2D{}, Scalar{0}, Scalar{1}), DomainError);
  CHECK_THROWS_AS(compose(SphereRotation{}, Scalar{0}, Scalar{1}), DomainError);
  CHECK_THROWS_AS(validate(UnitInterval{0.0}), DomainError);
  CHECK_THROWS_AS(validate(UnitInterval{1.5}), DomainError);
  Rotation3 bad;
  bad.R(0, 0) = 2.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
}

TEST_CASE("associativity and two-sided identity on random triples") {
  Rng rng(11);
  for (const auto& oc : op_cases()) {
    CAPTURE(name_of(oc.op));
    const Center e = identity(oc.op);
    double worst = 0.0, worst_id = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const Center u = random_center(oc.op, rng), v = random_center(oc.op, rng),
                   w = random_center(oc.op, rng);
      const Center lhs = compose(oc.op, compose(oc.op, u, v), w);
      const Center rhs = compose(oc.op, u, compose(oc.op, v, w));
      worst = std::max(worst, distance(lhs, rhs));
      worst_id = std::max({worst_id, distance(compose(oc.op, e, u), u), distance(compose(oc.op, u, e), u)});
    }
    CHECK(worst <= 1e-12);
    CHECK(worst_id <= 1e-12);
  }
}

TEST_CASE("closure of rotations and cyclic sums") {
  Rng rng(12);
  for (int n = 0; n < 200; ++n) {
    Center r = random_rotation(rng);
    for (int k = 0; k < 20; ++k) r = compose(SphereRotation{}, r, random_rotation(rng));
    CHECK_NOTHROW(validate(r));
    const double s = scalar(compose(CyclicSum{4.0}, Scalar{uniform(rng, 0, 4)}, Scalar{uniform(rng, 0, 4)}));
    CHECK(s >= 0.0);
    CHECK(s <= 4.0);
  }
}

TEST_CASE("canonicalize maps drifted centers back") {
  CHECK(scalar(canonicalize(CyclicSum{10.0}, Scalar{12.0})) == doctest::Approx(2.0));
  CHECK(scalar(canonicalize(CyclicSum{10.0}, Scalar{-1.0})) == doctest::Approx(9.0));
  CHECK(scalar(canonicalize(ModularSum01{}, UnitInterval{1.25})) == doctest::Approx(0.25));
  Rotation3 r = rotation_about_z(0.3);
  r.R(0, 1) += 1e-6;
  CHECK_NOTHROW(validate(canonicalize(SphereRotation{}, r)));
}

TEST_CASE("sphere helpers") {
  const Eigen::Vector3d p = Eigen::Vector3d(1.0, 2.0, -0.5).normalized();
  CHECK((sphere_point(rotation_to(p)) - p).norm() <= 1e-12);
  const Center c = compose(SphereRotation{}, rotation_about_z(std::numbers::pi / 2), rotation_to(Eigen::Vector3d::UnitX()));
  const Eigen::Vector3d q = sphere_point(std::get<Rotation3>(c));
  CHECK((q - Eigen::Vector3d::UnitY()).norm() <= 1e-12);
}

}
