#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rkhs/algnn.hpp"
#include "rkhs/domain_ops.hpp"
#include "rkhs/kernels.hpp"
#include "rkhs/signal.hpp"

namespace rkhs::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Rotation3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return Rotation3{q.toRotationMatrix()};
}

/// A random center valid for `op`.
inline Center random_center(const DomainOp& op, Rng& rng) {
  if (const auto* c = std::get_if<CyclicSum>(&op)) return Scalar{uniform(rng, 0.0, c->sup)};
  switch (center_kind(op)) {
    case CenterKind::scalar: return Scalar{uniform(rng, -3.0, 3.0)};
    case CenterKind::planar: return Planar{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    case CenterKind::unit_interval: return UnitInterval{uniform(rng, 0.05, 1.0)};
    case CenterKind::rotation: return random_rotation(rng);
  }
  return Scalar{};
}

inline RkhsSignal random_signal(const Kernel& k, const DomainOp& op, int n_terms, Rng& rng,
                                double w_lo = -1.0, double w_hi = 1.0) {
  std::vector<Term> terms;
  for (int i = 0; i < n_terms; ++i) terms.push_back({random_center(op, rng), uniform(rng, w_lo, w_hi)});
  return make_signal(k, op, std::move(terms));
}

/// max |f(x) - g(x)| over the given points.
inline double max_gap(const RkhsSignal& f, const RkhsSignal& g, const std::vector<Center>& points) {
  double m = 0.0;
  for (const auto& x : points) m = std::max(m, std::abs(evaluate(f, x) - evaluate(g, x)));
  return m;
}

/// A kernel suited to each domain op for property tests.
struct OpCase {
  DomainOp op;
  Kernel kernel;
};

inline std::vector<OpCase> op_cases() {
  return {
      {Translation1D{}, gaussian1d(1.0)},
      {CyclicSum{10.0}, gaussian1d(1.0)},
      {ComponentwiseProduct2D{}, gaussian2d(1.0)},
      {Translation2D{}, gaussian2d(1.0)},
      {UnitIntervalProduct{}, gaussian1d(4.0)},
      {ModularSum01{}, gaussian1d(4.0)},
      {SphereRotation{}, sphere_poly(3)},
  };
}

/// Same net with every filter replaced by `filter`.
inline AlgNet uniform_net(const RkhsSignal& filter, int n1, int n2) {
  std::vector<RkhsSignal> l1(n1, filter);
  std::vector<std::vector<RkhsSignal>> l2(n2, std::vector<RkhsSignal>(n1, filter));
  return make_net(filter.kernel, filter.op, std::move(l1), std::move(l2));
}

/// Random net with `terms` terms per filter; centers in [-1, 1].
inline AlgNet random_net(const Kernel& k, const DomainOp& op, int n1, int n2, int terms, Rng& rng,
                         double w_lo = -1.0, double w_hi = 1.0) {
  auto filter = [&] {
    std::vector<Term> t;
    for (int i = 0; i < terms; ++i) t.push_back({Scalar{uniform(rng, -1.0, 1.0)}, uniform(rng, w_lo, w_hi)});
    return make_signal(k, op, std::move(t));
  };
  std::vector<RkhsSignal> l1;
  for (int j = 0; j < n1; ++j) l1.push_back(filter());
  std::vector<std::vector<RkhsSignal>> l2(n2);
  for (auto& row : l2)
    for (int j = 0; j < n1; ++j) row.push_back(filter());
  return make_net(k, op, std::move(l1), std::move(l2));
}

/// A signal with the same centers as f and fresh random weights.
inline RkhsSignal reweight(const RkhsSignal& f, Rng& rng) {
  RkhsSignal d = f;
  for (auto& t : d.terms) t.weight = uniform(rng, -1.0, 1.0);
  return d;
}

}  // namespace rkhs::test
