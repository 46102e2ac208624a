#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "rkhs/domain_ops.hpp"
#include "rkhs/graphon.hpp"

namespace rkhs {

/// K(u,v) = exp(-B (u-v)²).
struct Gaussian1D {
  double B = 1.0;
};

/// K(u,v) = exp(-‖u-v‖² / (2σ²)); σ is in the units of the coordinates.
struct Gaussian2D {
  double sigma = 1.0;
};

/// K(u,v) = (B/π) sinc((B/π)(u-v)) = sin(B(u-v)) / (π(u-v)), the reproducing
/// kernel of signals band-limited to [-B, B].
struct Sinc {
  double B = 1.0;
};

/// K(u,v) = ⟨p_u, p_v⟩^d with p = R·e0 on the unit sphere.
struct SpherePoly {
  int d = 1;
};

/// K(u,v) = ∫₀¹ W(u,z) W(z,v) dz, composite trapezoid on n_quad intervals.
/// Construct with graphon_box(); the quadrature table is shared and immutable.
struct GraphonBox {
  struct Table;

  Graphon graphon;
  int n_quad = 0;
  std::shared_ptr<const Table> table;
};

using Kernel = std::variant<Gaussian1D, Gaussian2D, Sinc, SpherePoly, GraphonBox>;

Kernel gaussian1d(double B);
Kernel gaussian2d(double sigma);
/// Same kernel as gaussian2d(σ) with B = 1/(2σ²).
Kernel gaussian2d_from_B(double B);
Kernel sinc(double B);
Kernel sphere_poly(int d);
Kernel graphon_box(const Graphon& w, int n_quad);

std::string name_of(const Kernel& k);
bool operator==(const Kernel& a, const Kernel& b);

bool accepts(const Kernel& k, CenterKind kind);

double eval(const Kernel& k, const Center& u, const Center& v);

/// Gram matrix [K]_ij = K(v_i, v_j); symmetric by construction.
Eigen::MatrixXd gram(const Kernel& k, std::span<const Center> centers);
Eigen::MatrixXd cross_gram(const Kernel& k, std::span<const Center> rows,
                           std::span<const Center> cols);

/// sup_x K(x,x); with |f(x)| ≤ ‖f‖_H √K(x,x) this bounds point values.
double diagonal_sup(const Kernel& k);

/// Normalized sinc sin(πt)/(πt) with the removable singularity handled by
/// its series for |t| < 1e-8.
double normalized_sinc(double t);

}  // namespace rkhs
