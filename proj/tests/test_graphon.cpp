#include <doctest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "rkhs/errors.hpp"
#include "rkhs/graphon.hpp"

using namespace rkhs;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

DiscretizedKernel random_symmetric(Eigen::Index n, unsigned seed) {
  std::srand(seed);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
  return {0.5 * (a + a.transpose())};
}

Eigen::VectorXd sampled(const DiscretizedKernel& k, double (*fn)(double)) {
  Eigen::VectorXd x(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) x(i) = fn(k.node(i));
  return x;
}

}  // namespace

TEST_SUITE("graphon") {

TEST_CASE("built-in graphons") {
  CHECK(eval(DirichletGreen{}, 0.25, 0.5) == doctest::Approx(0.125));
  CHECK(eval(DirichletGreen{}, 0.5, 0.25) == eval(DirichletGreen{}, 0.25, 0.5));
  CHECK(eval(ConstantGraphon{0.3}, 0.1, 0.9) == 0.3);
  CHECK(dirichlet_green_eigenvalue(2, 2) == doctest::Approx(std::pow(2 * std::numbers::pi, -4)));
}

TEST_CASE("box product against the quadrature delta and constants") {
  const DiscretizedKernel a = random_symmetric(80, 1);
  CHECK(max_abs(box_product(a, quadrature_delta(80)).values - a.values) <= 1e-10);
  const DiscretizedKernel p = discretize(ConstantGraphon{0.3}, 64), q = discretize(ConstantGraphon{0.7}, 64);
  CHECK(max_abs(box_product(p, q).values.array() - 0.21) <= 1e-12);
  CHECK_THROWS_AS(box_product(p, discretize(ConstantGraphon{0.7}, 65)), DomainError);
}

TEST_CASE("box product is associative") {
  const DiscretizedKernel a = random_symmetric(70, 2), b = random_symmetric(70, 3), c = random_symmetric(70, 4);
  CHECK(max_abs(box_product(box_product(a, b), c).values - box_product(a, box_product(b, c)).values) <= 1e-10);
}

TEST_CASE("graphon kernels") {
  const DiscretizedKernel c = graphon_kernel(ConstantGraphon{0.4}, 64);
  CHECK(max_abs(c.values.array() - 0.16) <= 1e-12);
  const DiscretizedKernel k = graphon_kernel(DirichletGreen{}, 200);
  CHECK(k.values == k.values.transpose());
  CHECK_THROWS_AS(graphon_kernel(DirichletGreen{}, 32), DomainError);
  CHECK(max_abs(box_power(k, 1).values - k.values) == 0.0);
  const DiscretizedKernel cc = box_power(c, 3);
  CHECK(max_abs(cc.values.array() - std::pow(0.16, 3)) <= 1e-12);
}

TEST_CASE("spectrum of the Dirichlet Green's box kernel") {
  const DiscretizedKernel k = graphon_kernel(DirichletGreen{}, 2000);
  // (0.5, 0.5) lies midway between nodes 999 and 1000; ∫ W(0.5,z)² dz = 1/48.
  const double center = k.values.block(999, 999, 2, 2).mean();
  CHECK(std::abs(center - 1.0 / 48.0) <= 1e-5);

  const auto spec = spectral_decompose(k, 8);
  REQUIRE(spec.size() == 8);
  for (int m = 1; m <= 5; ++m) {
    const double analytic = dirichlet_green_eigenvalue(m, 2);
    CHECK(std::abs(spec[m - 1].value - analytic) <= 0.01 * analytic);
  }
  const double h = k.spacing();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    CHECK(h * spec[i].function.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t j = i + 1; j < spec.size(); ++j)
      CHECK(std::abs(h * spec[i].function.dot(spec[j].function)) <= 1e-8);
    if (i > 0) CHECK(spec[i].value <= spec[i - 1].value);
  }
}

TEST_CASE("box powers raise eigenvalues to the power") {
  const DiscretizedKernel k = graphon_kernel(DirichletGreen{}, 400);
  const auto base = spectral_decompose(k, 5);
  for (int r : {2, 3}) {
    const auto pw = spectral_decompose(box_power(k, r), 5);
    for (int i = 0; i < 5; ++i) {
      const double expect = std::pow(base[i].value, r);
      CHECK(std::abs(pw[i].value - expect) <= 1e-6 * expect);
    }
  }
}

TEST_CASE("constant kernel has one nonzero eigenvalue") {
  const auto spec = spectral_decompose(graphon_kernel(ConstantGraphon{0.5}, 100), 3);
  CHECK(spec[0].value == doctest::Approx(0.25));
  CHECK(std::abs(spec[1].value) <= 1e-12);
  CHECK(spec[0].function.maxCoeff() - spec[0].function.minCoeff() <= 1e-10);
}

TEST_CASE("polynomial filters") {
  const DiscretizedKernel k = graphon_kernel(DirichletGreen{}, 500);
  const auto spec = spectral_decompose(k, 50);

  // p ≡ 1 projects a smooth signal onto the leading eigenspace.
  const Eigen::VectorXd x = sampled(k, [](double t) {
    return std::sin(std::numbers::pi * t) + 0.3 * std::sin(3 * std::numbers::pi * t);
  });
  CHECK((poly_filter_apply({1.0}, spec, x) - x).cwiseAbs().maxCoeff() <= 1e-3);

  CHECK(poly_filter_apply({0.0, 0.0}, spec, x).cwiseAbs().maxCoeff() == 0.0);

  // Eigenfunctions are scaled by p(λ).
  const std::vector<double> coeffs{0.5, -2.0, 30.0};
  for (int m : {0, 3}) {
    const double lam = spec[m].value;
    const double p = coeffs[0] + coeffs[1] * lam + coeffs[2] * lam * lam;
    CHECK((poly_filter_apply(coeffs, spec, spec[m].function) - p * spec[m].function).cwiseAbs().maxCoeff() <= 1e-8);
  }

  // Linear in x and in the coefficients.
  const Eigen::VectorXd y = sampled(k, [](double t) { return t * (1 - t); });
  const Eigen::VectorXd lhs = poly_filter_apply(coeffs, spec, 2.0 * x + y);
  CHECK((lhs - 2.0 * poly_filter_apply(coeffs, spec, x) - poly_filter_apply(coeffs, spec, y)).cwiseAbs().maxCoeff() <=
        1e-10);
  const Eigen::VectorXd sum = poly_filter_apply({1.0, 2.0}, spec, x);
  CHECK((sum - poly_filter_apply({1.0}, spec, x) - poly_filter_apply({0.0, 2.0}, spec, x)).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK((poly_filter_apply({1.0}, k, x, 50) - poly_filter_apply({1.0}, spec, x)).cwiseAbs().maxCoeff() <= 1e-10);
}

}
