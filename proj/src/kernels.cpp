#include "rkhs/kernels.hpp"

#include <cmath>
#include <numbers>

#include "rkhs/detail/overloaded.hpp"
#include "rkhs/errors.hpp"

namespace rkhs {

using detail::overloaded;

struct GraphonBox::Table {
  std::vector<double> nodes;
  std::vector<double> weights;
  double diagonal_sup = 0.0;
};

namespace {

double scalar_coordinate(const Center& c, const char* kernel) {
  if (const auto* s = std::get_if<Scalar>(&c)) return s->x;
  if (const auto* u = std::get_if<UnitInterval>(&c)) return u->t;
  throw DomainError(std::string(kernel) + " kernel expects scalar or unit-interval centers, got " +
                    to_string(kind_of(c)));
}

double box_eval(const GraphonBox& g, double u, double v) {
  const auto& t = *g.table;
  double acc = 0.0;
  for (std::size_t k = 0; k < t.nodes.size(); ++k)
    acc += t.weights[k] * eval(g.graphon, u, t.nodes[k]) * eval(g.graphon, t.nodes[k], v);
  return acc;
}

}  // namespace

double normalized_sinc(double t) {
  if (std::abs(t) < 1e-8) {
    const double pt = std::numbers::pi * t;
    return 1.0 - pt * pt / 6.0;
  }
  return std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
}

Kernel gaussian1d(double B) {
  if (!(B > 0.0)) throw DomainError("gaussian1d: B must be positive");
  return Gaussian1D{B};
}

Kernel gaussian2d(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian2d: sigma must be positive");
  return Gaussian2D{sigma};
}

Kernel gaussian2d_from_B(double B) {
  if (!(B > 0.0)) throw DomainError("gaussian2d: B must be positive");
  return Gaussian2D{std::sqrt(1.0 / (2.0 * B))};
}

Kernel sinc(double B) {
  if (!(B > 0.0)) throw DomainError("sinc: B must be positive");
  return Sinc{B};
}

Kernel sphere_poly(int d) {
  if (d < 1) throw DomainError("sphere_poly: degree must be positive");
  return SpherePoly{d};
}

Kernel graphon_box(const Graphon& w, int n_quad) {
  if (n_quad < 64) throw DomainError("graphon_box: n_quad must be at least 64");
  auto table = std::make_shared<GraphonBox::Table>();
  const double h = 1.0 / n_quad;
  table->nodes.resize(static_cast<std::size_t>(n_quad) + 1);
  table->weights.assign(static_cast<std::size_t>(n_quad) + 1, h);
  for (int i = 0; i <= n_quad; ++i) table->nodes[static_cast<std::size_t>(i)] = i * h;
  table->weights.front() = table->weights.back() = 0.5 * h;

  GraphonBox box{w, n_quad, table};
  for (int i = 0; i <= 200; ++i) {
    const double u = i / 200.0;
    table->diagonal_sup = std::max(table->diagonal_sup, box_eval(box, u, u));
  }
  return box;
}

std::string name_of(const Kernel& k) {
  return std::visit(overloaded{[](const Gaussian1D&) { return std::string("gaussian1d"); },
                               [](const Gaussian2D&) { return std::string("gaussian2d"); },
                               [](const Sinc&) { return std::string("sinc"); },
                               [](const SpherePoly&) { return std::string("sphere_poly"); },
                               [](const GraphonBox&) { return std::string("graphon_box"); }},
                    k);
}

bool operator==(const Kernel& a, const Kernel& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{[&](const Gaussian1D& g) { return g.B == std::get<Gaussian1D>(b).B; },
                 [&](const Gaussian2D& g) { return g.sigma == std::get<Gaussian2D>(b).sigma; },
                 [&](const Sinc& s) { return s.B == std::get<Sinc>(b).B; },
                 [&](const SpherePoly& s) { return s.d == std::get<SpherePoly>(b).d; },
                 [&](const GraphonBox& g) {
                   const auto& o = std::get<GraphonBox>(b);
                   return g.graphon == o.graphon && g.n_quad == o.n_quad;
                 }},
      a);
}

bool accepts(const Kernel& k, CenterKind kind) {
  return std::visit(overloaded{[&](const Gaussian2D&) { return kind == CenterKind::planar; },
                               [&](const SpherePoly&) { return kind == CenterKind::rotation; },
                               [&](const auto&) {
                                 return kind == CenterKind::scalar || kind == CenterKind::unit_interval;
                               }},
                    k);
}

double eval(const Kernel& k, const Center& u, const Center& v) {
  return std::visit(
      overloaded{
          [&](const Gaussian1D& g) {
            const double d = scalar_coordinate(u, "gaussian1d") - scalar_coordinate(v, "gaussian1d");
            return std::exp(-g.B * d * d);
          },
          [&](const Gaussian2D& g) {
            const auto* a = std::get_if<Planar>(&u);
            const auto* b = std::get_if<Planar>(&v);
            if (!a || !b) throw DomainError("gaussian2d kernel expects planar centers");
            const double dx = a->x - b->x;
            const double dy = a->y - b->y;
            return std::exp(-(dx * dx + dy * dy) / (2.0 * g.sigma * g.sigma));
          },
          [&](const Sinc& s) {
            const double d = scalar_coordinate(u, "sinc") - scalar_coordinate(v, "sinc");
            const double c = s.B / std::numbers::pi;
            return c * normalized_sinc(c * d);
          },
          [&](const SpherePoly& s) {
            const auto* a = std::get_if<Rotation3>(&u);
            const auto* b = std::get_if<Rotation3>(&v);
            if (!a || !b) throw DomainError("sphere_poly kernel expects rotation centers");
            return std::pow(sphere_point(*a).dot(sphere_point(*b)), s.d);
          },
          [&](const GraphonBox& g) {
            const double a = scalar_coordinate(u, "graphon_box");
            const double b = scalar_coordinate(v, "graphon_box");
            if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
              throw DomainError("graphon_box kernel expects centers in [0,1]");
            // The trapezoid sum is evaluated in a fixed order; swapping the
            // arguments only swaps the factors of each product.
            return box_eval(g, a, b);
          }},
      k);
}

Eigen::MatrixXd gram(const Kernel& k, std::span<const Center> centers) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      const double value = eval(k, centers[static_cast<std::size_t>(i)], centers[static_cast<std::size_t>(j)]);
      g(i, j) = value;
      g(j, i) = value;
    }
  return g;
}

Eigen::MatrixXd cross_gram(const Kernel& k, std::span<const Center> rows,
                           std::span<const Center> cols) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(k, rows[i], cols[j]);
  return g;
}

double diagonal_sup(const Kernel& k) {
  return std::visit(overloaded{[](const Sinc& s) { return s.B / std::numbers::pi; },
                               [](const GraphonBox& g) { return g.table->diagonal_sup; },
                               [](const auto&) { return 1.0; }},
                    k);
}

}  // namespace rkhs
