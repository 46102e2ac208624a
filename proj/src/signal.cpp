#include "rkhs/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rkhs/errors.hpp"

namespace rkhs {

namespace {

void check_center(const Kernel& kernel, const DomainOp& op, const Center& c) {
  const CenterKind kind = kind_of(c);
  if (kind != center_kind(op))
    throw DomainError("center of kind " + to_string(kind) + " does not match op " + name_of(op));
  if (!accepts(kernel, kind))
    throw DomainError("center of kind " + to_string(kind) + " does not match kernel " +
                      name_of(kernel));
  validate(c);
}

double leading_coordinate(const Center& c) {
  if (const auto* s = std::get_if<Scalar>(&c)) return s->x;
  if (const auto* p = std::get_if<Planar>(&c)) return p->x;
  if (const auto* u = std::get_if<UnitInterval>(&c)) return u->t;
  return std::get<Rotation3>(c).R(0, 0);
}

}  // namespace

RkhsSignal make_signal(Kernel kernel, DomainOp op, std::vector<Term> terms) {
  for (const auto& t : terms) {
    check_center(kernel, op, t.center);
    if (!std::isfinite(t.weight)) throw DomainError("non-finite signal weight");
  }
  return RkhsSignal{std::move(kernel), std::move(op), std::move(terms)};
}

RkhsSignal zero_signal(Kernel kernel, DomainOp op) {
  if (!accepts(kernel, center_kind(op)))
    throw DomainError("kernel " + name_of(kernel) + " is incompatible with op " + name_of(op));
  return RkhsSignal{std::move(kernel), std::move(op), {}};
}

RkhsSignal section(Kernel kernel, DomainOp op, Center center, double weight) {
  return make_signal(std::move(kernel), std::move(op), {Term{std::move(center), weight}});
}

RkhsSignal unit_signal(Kernel kernel, DomainOp op) {
  Center delta = identity(op);
  return section(std::move(kernel), std::move(op), std::move(delta), 1.0);
}

void require_compatible(const RkhsSignal& f, const RkhsSignal& g, const char* what) {
  if (!(f.kernel == g.kernel)) throw DomainError(std::string(what) + ": kernel mismatch");
  if (!(f.op == g.op)) throw DomainError(std::string(what) + ": domain op mismatch");
}

std::vector<Center> centers_of(const RkhsSignal& f) {
  std::vector<Center> out;
  out.reserve(f.terms.size());
  for (const auto& t : f.terms) out.push_back(t.center);
  return out;
}

Eigen::VectorXd weights_of(const RkhsSignal& f) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(f.terms.size()));
  for (std::size_t i = 0; i < f.terms.size(); ++i) w(static_cast<Eigen::Index>(i)) = f.terms[i].weight;
  return w;
}

double evaluate(const RkhsSignal& f, const Center& x) {
  double acc = 0.0;
  for (const auto& t : f.terms) acc += t.weight * eval(f.kernel, x, t.center);
  return acc;
}

Eigen::VectorXd evaluate_at(const RkhsSignal& f, std::span<const Center> points) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = evaluate(f, points[i]);
  return out;
}

double inner(const RkhsSignal& f, const RkhsSignal& g) {
  require_compatible(f, g, "inner");
  double acc = 0.0;
  for (const auto& a : f.terms) {
    double row = 0.0;
    for (const auto& b : g.terms) row += b.weight * eval(f.kernel, b.center, a.center);
    acc += a.weight * row;
  }
  return acc;
}

double norm(const RkhsSignal& f) {
  const double sq = inner(f, f);
  return std::sqrt(std::max(sq, 0.0));
}

RkhsSignal add(const RkhsSignal& f, const RkhsSignal& g) {
  require_compatible(f, g, "add");
  RkhsSignal out{f.kernel, f.op, f.terms};
  out.terms.insert(out.terms.end(), g.terms.begin(), g.terms.end());
  return prune(out);
}

RkhsSignal subtract(const RkhsSignal& f, const RkhsSignal& g) { return add(f, scale(g, -1.0)); }

RkhsSignal scale(const RkhsSignal& f, double c) {
  RkhsSignal out = f;
  for (auto& t : out.terms) t.weight *= c;
  return prune(out);
}

RkhsSignal convolve(const RkhsSignal& f, const RkhsSignal& g, std::size_t term_cap) {
  require_compatible(f, g, "convolve");
  if (!f.terms.empty() && g.terms.size() > term_cap / f.terms.size())
    throw ResourceError("convolve: " + std::to_string(f.terms.size()) + " x " +
                        std::to_string(g.terms.size()) + " terms exceeds the cap of " +
                        std::to_string(term_cap));
  RkhsSignal out{f.kernel, f.op, {}};
  out.terms.reserve(f.terms.size() * g.terms.size());
  for (const auto& a : f.terms)
    for (const auto& b : g.terms)
      out.terms.push_back(Term{compose(f.op, a.center, b.center), a.weight * b.weight});
  return prune(out);
}

PruneResult prune_with_bound(const RkhsSignal& f, double merge_tol, double drop_tol) {
  if (merge_tol < 0.0 || drop_tol < 0.0) throw DomainError("prune: tolerances must be >= 0");
  const std::size_t n = f.terms.size();
  const double kappa = std::sqrt(diagonal_sup(f.kernel));

  std::vector<double> lead(n);
  for (std::size_t i = 0; i < n; ++i) lead[i] = leading_coordinate(f.terms[i].center);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lead[a] < lead[b]; });

  // owner[i]: original index of the representative of i's cluster.
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, unset);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    if (owner[i] != unset) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t q = p + 1; q < n && lead[order[q]] - lead[i] <= merge_tol; ++q) {
      const std::size_t j = order[q];
      if (owner[j] == unset && distance(f.terms[i].center, f.terms[j].center) <= merge_tol)
        members.push_back(j);
    }
    const std::size_t rep = *std::min_element(members.begin(), members.end());
    for (std::size_t m : members) owner[m] = rep;
  }

  double bound = 0.0;
  std::vector<double> summed(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rep = owner[i];
    summed[rep] += f.terms[i].weight;
    if (rep != i) {
      const auto& a = f.terms[i].center;
      const auto& b = f.terms[rep].center;
      const double gap = eval(f.kernel, a, a) + eval(f.kernel, b, b) - 2.0 * eval(f.kernel, a, b);
      // The difference cancels catastrophically for nearby centers; pad by its rounding error.
      const double slack =
          distance(a, b) > 0.0 ? 8.0 * std::numeric_limits<double>::epsilon() * kappa * kappa : 0.0;
      bound += std::abs(f.terms[i].weight) * std::sqrt(std::max(gap, 0.0) + slack) * kappa;
    }
  }

  PruneResult result{RkhsSignal{f.kernel, f.op, {}}, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] != i) continue;
    if (std::abs(summed[i]) < drop_tol) {
      const auto& c = f.terms[i].center;
      bound += std::abs(summed[i]) * std::sqrt(eval(f.kernel, c, c)) * kappa;
      continue;
    }
    result.signal.terms.push_back(Term{f.terms[i].center, summed[i]});
  }
  result.error_bound = bound;
  return result;
}

RkhsSignal prune(const RkhsSignal& f, double merge_tol, double drop_tol) {
  return prune_with_bound(f, merge_tol, drop_tol).signal;
}

RkhsSignal pad_to(const RkhsSignal& f, std::span<const Center> centers, double merge_tol) {
  RkhsSignal out = f;
  for (const auto& c : centers) {
    check_center(f.kernel, f.op, c);
    const bool present = std::any_of(out.terms.begin(), out.terms.end(), [&](const Term& t) {
      return distance(t.center, c) <= merge_tol;
    });
    if (!present) out.terms.push_back(Term{c, 0.0});
  }
  return out;
}

Grid grid1d(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("grid1d: invalid range or step");
  Grid g;
  g.dim = 1;
  g.x0 = lo;
  g.dx = step;
  g.nx = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  return g;
}

Grid grid2d(double lo, double hi, double step) {
  Grid g = grid1d(lo, hi, step);
  g.dim = 2;
  g.y0 = lo;
  g.dy = step;
  g.ny = g.nx;
  return g;
}

std::vector<Center> grid_points(const Grid& grid, CenterKind kind) {
  std::vector<Center> out;
  out.reserve(grid.size());
  if (grid.dim == 2) {
    if (kind != CenterKind::planar) throw DomainError("2-D grids require planar centers");
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) out.push_back(Planar{grid.x(i), grid.y(j)});
    return out;
  }
  for (int i = 0; i < grid.nx; ++i) {
    if (kind == CenterKind::scalar)
      out.push_back(Scalar{grid.x(i)});
    else if (kind == CenterKind::unit_interval)
      out.push_back(UnitInterval{grid.x(i)});
    else
      throw DomainError("1-D grids require scalar or unit-interval centers");
  }
  return out;
}

GridField evaluate_grid(const RkhsSignal& f, const Grid& grid) {
  const auto points = grid_points(grid, center_kind(f.op));
  GridField out{grid, std::vector<double>(points.size())};
  for (std::size_t i = 0; i < points.size(); ++i) out.values[i] = evaluate(f, points[i]);
  return out;
}

GridField classic_convolve_grid(const RkhsSignal& f, const RkhsSignal& g, const Grid& grid,
                                double quad_halfwidth, double quad_step) {
  require_compatible(f, g, "classic_convolve_grid");
  if (grid.dim != 1 || center_kind(f.op) != CenterKind::scalar)
    throw DomainError("classic_convolve_grid: requires a 1-D grid and scalar centers");
  if (!(quad_step > 0.0) || !(quad_halfwidth > 0.0))
    throw DomainError("classic_convolve_grid: quad_step and quad_halfwidth must be positive");

  GridField out{grid, std::vector<double>(grid.size(), 0.0)};
  if (f.terms.empty() || g.terms.empty()) return out;

  const long panels = std::lround(2.0 * quad_halfwidth / quad_step);
  const double h = 2.0 * quad_halfwidth / static_cast<double>(panels);
  auto f_at = [&](double t) { return evaluate(f, Scalar{t}); };
  auto g_at = [&](double t) { return evaluate(g, Scalar{t}); };
  auto weight = [&](long l) { return (l == 0 || l == panels) ? 0.5 * h : h; };

  // Aligned case: dx and h are integer multiples of a common step e. With
  // τ = x_i - H + l h we have x_i - τ = H - l h, so f is tabulated once on
  // the e-lattice, g once on the h-lattice, and the quadrature becomes a
  // strided correlation.
  const double e = grid.nx > 1 ? std::min(grid.dx, h) : h;
  const double rx = grid.nx > 1 ? grid.dx / e : 0.0;
  const double rh = h / e;
  const long sx = std::lround(rx);
  const long sh = std::lround(rh);
  const bool aligned = sh >= 1 && std::abs(rh - static_cast<double>(sh)) <= 1e-9 * rh &&
                       (grid.nx <= 1 || (sx >= 1 && std::abs(rx - static_cast<double>(sx)) <= 1e-9 * rx));
  if (!aligned) {
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      double acc = 0.0;
      for (long l = 0; l <= panels; ++l) {
        const double tau = x - quad_halfwidth + static_cast<double>(l) * h;
        acc += weight(l) * f_at(tau) * g_at(x - tau);
      }
      out.values[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  }

  const long span_f = static_cast<long>(grid.nx - 1) * sx + panels * sh + 1;
  std::vector<double> ft(static_cast<std::size_t>(span_f));
  for (long k = 0; k < span_f; ++k)
    ft[static_cast<std::size_t>(k)] = f_at(grid.x0 - quad_halfwidth + static_cast<double>(k) * e);
  std::vector<double> gt(static_cast<std::size_t>(panels + 1));
  for (long j = 0; j <= panels; ++j)
    gt[static_cast<std::size_t>(j)] = g_at(quad_halfwidth - static_cast<double>(j) * h);

  for (int i = 0; i < grid.nx; ++i) {
    const double* fp = ft.data() + static_cast<long>(i) * sx;
    double acc = 0.0;
    for (long l = 0; l <= panels; ++l) acc += weight(l) * fp[l * sh] * gt[static_cast<std::size_t>(l)];
    out.values[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double max_abs_difference(const GridField& a, const GridField& b) {
  if (a.values.size() != b.values.size()) throw DomainError("max_abs_difference: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace rkhs
