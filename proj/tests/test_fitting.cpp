#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <Eigen/Dense>

#include "rkhs/errors.hpp"
#include "rkhs/fitting.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::test;
namespace fs = std::filesystem;

namespace {

SampleSet planar_samples(Rng& rng, int n, double spread) {
  SampleSet s;
  for (int i = 0; i < n; ++i) {
    s.points.push_back(Planar{uniform(rng, -spread, spread), uniform(rng, -spread, spread)});
    s.values.push_back(uniform(rng, -5.0, 5.0));
  }
  return s;
}

Eigen::VectorXd values_of(const SampleSet& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.values.data(), static_cast<Eigen::Index>(s.values.size()));
}

double residual(const RkhsSignal& f, const SampleSet& s) {
  return (evaluate_at(f, s.points) - values_of(s)).norm();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rkhs_fitting_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("fitting") {

TEST_CASE("one sample without regularization") {
  SampleSet s{{Scalar{0.7}}, {3.0}};
  const RkhsSignal f = fit_ridge(s, gaussian1d(1.0), Translation1D{}, 0.0);
  REQUIRE(f.size() == 1);
  CHECK(f.terms[0].weight == doctest::Approx(3.0));
  CHECK(evaluate(f, Scalar{0.7}) == doctest::Approx(3.0));
}

TEST_CASE("small lambda interpolates") {
  Rng rng(61);
  for (int n = 0; n < 5; ++n) {
    const SampleSet s = planar_samples(rng, 9, 20.0);
    const RkhsSignal f = fit_ridge(s, gaussian2d(10.0), Translation2D{}, 1e-9);
    const Eigen::VectorXd y = values_of(s);
    CHECK((evaluate_at(f, s.points) - y).cwiseAbs().maxCoeff() <= 1e-6 * y.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("coefficients solve the normal equations of the generalized objective") {
  // (KᵀK + λK) α = K f is the stationarity condition of ‖Kα − f‖² + λ αᵀKα.
  Rng rng(62);
  for (int n = 0; n < 5; ++n) {
    const SampleSet s = planar_samples(rng, 9, 30.0);
    const Kernel k = gaussian2d(10.0);
    const double lambda = 1e-3;
    const RkhsSignal f = fit_ridge(s, k, Translation2D{}, lambda);
    const Eigen::MatrixXd K = gram(k, s.points);
    const Eigen::MatrixXd A = K.transpose() * K + lambda * K;
    const Eigen::VectorXd oracle = A.fullPivLu().solve(K * values_of(s));
    CHECK((weights_of(f) - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("pseudo-inverse is an inverse on full-rank systems") {
  Rng rng(63);
  const SampleSet s = planar_samples(rng, 9, 30.0);
  const Kernel k = gaussian2d(10.0);
  const Eigen::MatrixXd K = gram(k, s.points);
  const Eigen::MatrixXd A = K.transpose() * K + 1e-3 * K;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd inv = es.eigenvalues().cwiseInverse();
  const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  CHECK((pinv * A - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-8);
  // Column j of fit_ridge on values e_j reproduces column j of pinv·K.
  SampleSet unit = s;
  std::fill(unit.values.begin(), unit.values.end(), 0.0);
  unit.values[4] = 1.0;
  const Eigen::VectorXd col = (pinv * K).col(4);
  CHECK((weights_of(fit_ridge(unit, k, Translation2D{}, 1e-3)) - col).norm() <= 1e-8 * col.norm());
}

TEST_CASE("regularization trades residual for coefficient size") {
  Rng rng(64);
  const SampleSet s = planar_samples(rng, 9, 30.0);
  const Kernel k = gaussian2d(10.0);
  const RkhsSignal tight = fit_ridge(s, k, Translation2D{}, 1e-9);
  const RkhsSignal loose = fit_ridge(s, k, Translation2D{}, 1e-3);
  CHECK(residual(loose, s) > residual(tight, s));
  CHECK(weights_of(loose).norm() < weights_of(tight).norm());
  double last = -1.0;
  for (double lambda : {1e-9, 1e-6, 1e-3, 1e-1, 1.0, 10.0}) {
    const double r = residual(fit_ridge(s, k, Translation2D{}, lambda), s);
    CHECK(r + 1e-10 >= last);
    last = r;
  }
}

TEST_CASE("sample validation") {
  SampleSet dup{{Scalar{0.0}, Scalar{1.0}, Scalar{1.0}}, {1.0, 2.0, 3.0}};
  CHECK_THROWS_WITH_AS(validate(dup), doctest::Contains("1 and 2"), DomainError);
  CHECK_THROWS_AS(validate(SampleSet{}), DomainError);
  CHECK_THROWS_AS(validate(SampleSet{{Scalar{0.0}}, {1.0, 2.0}}), DomainError);
  CHECK_THROWS_AS(validate(SampleSet{{Scalar{0.0}}, {NAN}}), DomainError);
  // W ≡ 0 gives an identically zero Gram matrix.
  SampleSet s{{UnitInterval{0.5}}, {1.0}};
  CHECK_THROWS_AS(fit_ridge(s, graphon_box(ConstantGraphon{0.0}, 64), UnitIntervalProduct{}, 1e-3),
                  DegeneracyError);
}

TEST_CASE("csv io") {
  const fs::path p1 = scratch("one_d.csv");
  write_text(p1, "x,value\n0.5,1.25\n-1,3\n");
  const SampleSet s = load_samples_csv(p1);
  REQUIRE(s.size() == 2);
  CHECK(std::get<Scalar>(s.points[1]).x == -1.0);
  CHECK(s.values[0] == 1.25);
  const fs::path p2 = scratch("round_trip.csv");
  save_samples_csv(s, p2);
  const SampleSet back = load_samples_csv(p2);
  CHECK(back.values == s.values);

  const fs::path p3 = scratch("two_d.csv");
  write_text(p3, "x,y,value\n1,2,3\n4,5,6\n");
  CHECK(std::get<Planar>(load_samples_csv(p3).points[1]).y == 5.0);

  const fs::path empty = scratch("empty.csv");
  write_text(empty, "x,value\n");
  CHECK_THROWS_WITH_AS(load_samples_csv(empty), doctest::Contains("no samples"), DomainError);

  const fs::path bad = scratch("bad.csv");
  write_text(bad, "x,value\n1,2\n3,abc\n");
  CHECK_THROWS_WITH_AS(load_samples_csv(bad), doctest::Contains(":3: malformed number"), ParseError);

  const fs::path nonfinite = scratch("nonfinite.csv");
  write_text(nonfinite, "x,value\n1,2\n3,inf\n");
  CHECK_THROWS_AS(load_samples_csv(nonfinite), ParseError);

  const fs::path dup = scratch("dup.csv");
  write_text(dup, "x,value\n1,2\n1,3\n");
  CHECK_THROWS_AS(load_samples_csv(dup), DomainError);

  const fs::path header = scratch("header.csv");
  write_text(header, "a,b\n1,2\n");
  CHECK_THROWS_AS(load_samples_csv(header), ParseError);

  CHECK_THROWS_AS(load_samples_csv(scratch("missing.csv")), IoError);
}

}
