#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rkhs/domain_ops.hpp"
#include "rkhs/kernels.hpp"

namespace rkhs {

inline constexpr double kMergeTol = 1e-9;
inline constexpr double kDropTol = 1e-12;
inline constexpr std::size_t kTermCap = 50'000;

struct Term {
  Center center;
  double weight = 0.0;
};

/// f = Σ_v α_v k_v with k_v(x) = K(x, v). Terms are kept in insertion order;
/// zero-weight terms are legal (they matter to the coefficient-wise
/// nonlinearity, whose normalization runs over the stored center set).
struct RkhsSignal {
  Kernel kernel;
  DomainOp op;
  std::vector<Term> terms;

  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }
};

/// Validates that every center matches both the kernel and the op.
RkhsSignal make_signal(Kernel kernel, DomainOp op, std::vector<Term> terms);
RkhsSignal zero_signal(Kernel kernel, DomainOp op);
/// weight · k_center
RkhsSignal section(Kernel kernel, DomainOp op, Center center, double weight = 1.0);
/// k_δ, the unit of the convolution algebra.
RkhsSignal unit_signal(Kernel kernel, DomainOp op);

/// Throws DomainError unless f and g share kernel and op.
void require_compatible(const RkhsSignal& f, const RkhsSignal& g, const char* what);

std::vector<Center> centers_of(const RkhsSignal& f);
Eigen::VectorXd weights_of(const RkhsSignal& f);

double evaluate(const RkhsSignal& f, const Center& x);
/// f at each of the given points.
Eigen::VectorXd evaluate_at(const RkhsSignal& f, std::span<const Center> points);

/// ⟨f, g⟩_H = Σ α_v β_u K(u, v).
double inner(const RkhsSignal& f, const RkhsSignal& g);
double norm(const RkhsSignal& f);

RkhsSignal add(const RkhsSignal& f, const RkhsSignal& g);
RkhsSignal subtract(const RkhsSignal& f, const RkhsSignal& g);
RkhsSignal scale(const RkhsSignal& f, double c);

/// f ∗ g = Σ_{v,u} α_v β_u k_{v∘u}, pruned. Throws ResourceError when the
/// product term count exceeds `term_cap`.
RkhsSignal convolve(const RkhsSignal& f, const RkhsSignal& g, std::size_t term_cap = kTermCap);

struct PruneResult {
  RkhsSignal signal;
  /// sup_x |f(x) - pruned(x)| is at most this value.
  double error_bound = 0.0;
};

/// Sums terms whose centers lie within merge_tol of each other (keeping the
/// first-inserted center as representative), then drops terms with
/// |weight| < drop_tol.
PruneResult prune_with_bound(const RkhsSignal& f, double merge_tol = kMergeTol,
                             double drop_tol = kDropTol);
RkhsSignal prune(const RkhsSignal& f, double merge_tol = kMergeTol, double drop_tol = kDropTol);

/// f re-expressed on its centers plus every listed center (new ones get
/// weight 0). No merging or dropping is applied to the existing terms.
RkhsSignal pad_to(const RkhsSignal& f, std::span<const Center> centers,
                  double merge_tol = kMergeTol);

// ---------------------------------------------------------------------------
// Raster evaluation
// ---------------------------------------------------------------------------

/// Uniform lattice, 1-D (ny == 1, y ignored) or 2-D. Points are enumerated
/// row-major: y outer, x inner.
struct Grid {
  int dim = 1;
  double x0 = 0.0;
  double dx = 1.0;
  int nx = 1;
  double y0 = 0.0;
  double dy = 1.0;
  int ny = 1;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double x(int i) const { return x0 + i * dx; }
  double y(int j) const { return y0 + j * dy; }
};

/// Lattice covering [lo, hi] with the given step (hi included up to rounding).
Grid grid1d(double lo, double hi, double step);
Grid grid2d(double lo, double hi, double step);

struct GridField {
  Grid grid;
  std::vector<double> values;
};

/// Lattice points expressed as centers of the given kind (scalar,
/// unit-interval or planar).
std::vector<Center> grid_points(const Grid& grid, CenterKind kind);

GridField evaluate_grid(const RkhsSignal& f, const Grid& grid);

/// Trapezoid quadrature of the classical convolution
/// (f ⋆ g)(x) = ∫ f(τ) g(x - τ) dτ over τ ∈ [x - halfwidth, x + halfwidth].
/// Requires a 1-D grid and scalar centers.
GridField classic_convolve_grid(const RkhsSignal& f, const RkhsSignal& g, const Grid& grid,
                                double quad_halfwidth, double quad_step);

double max_abs_difference(const GridField& a, const GridField& b);

}  // namespace rkhs
