#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace rkhs {

/// W(u,v) = min(u,v)(1 - max(u,v)), the Green's function of -d²/dx² with
/// Dirichlet boundary conditions on [0,1]. Eigenpairs: ((kπ)^-2, √2 sin(kπx)).
struct DirichletGreen {};

/// W ≡ p.
struct ConstantGraphon {
  double p = 0.5;
};

using Graphon = std::variant<DirichletGreen, ConstantGraphon>;

double eval(const Graphon& w, double u, double v);
std::string name_of(const Graphon& w);
bool operator==(const Graphon& a, const Graphon& b);

/// A symmetric kernel on [0,1]² sampled at the midpoints (i + 1/2)/n.
/// The integral operator it represents acts as x ↦ h·values·x with h = 1/n.
struct DiscretizedKernel {
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
  double spacing() const { return 1.0 / static_cast<double>(values.rows()); }
  double node(Eigen::Index i) const { return (static_cast<double>(i) + 0.5) * spacing(); }
};

DiscretizedKernel discretize(const Graphon& w, Eigen::Index n);

/// Midpoint quadrature of (A□B)(u,v) = ∫ A(u,z) B(z,v) dz.
DiscretizedKernel box_product(const DiscretizedKernel& a, const DiscretizedKernel& b);

/// K = W□W on an n-point midpoint grid. Requires n >= 64.
DiscretizedKernel graphon_kernel(const Graphon& w, Eigen::Index n);

/// K^r = K□K^(r-1), r >= 1.
DiscretizedKernel box_power(const DiscretizedKernel& k, int r);

/// The kernel whose box product acts as the identity on the grid: (1/h)·I.
DiscretizedKernel quadrature_delta(Eigen::Index n);

struct Eigenpair {
  double value = 0.0;
  /// Grid samples normalized so that h·Σφ² = 1.
  Eigen::VectorXd function;
};

/// Top `k_max` eigenpairs of the integral operator, in descending order of
/// eigenvalue. Eigenfunction signs are fixed so that the first entry of
/// non-negligible magnitude is positive.
std::vector<Eigenpair> spectral_decompose(const DiscretizedKernel& k, Eigen::Index k_max);

/// p(t) = Σ a_r t^r applied through the kernel algebra: p_K = Σ a_r K^(r+1),
/// y = Σ_k p(λ_k) λ_k ⟨φ_k, x⟩_H φ_k with ⟨φ_k, x⟩_H = ⟨φ_k, x⟩_L2 / λ_k,
/// truncated to the given spectrum.
Eigen::VectorXd poly_filter_apply(const std::vector<double>& coeffs,
                                  const std::vector<Eigenpair>& spectrum,
                                  const Eigen::VectorXd& x);
Eigen::VectorXd poly_filter_apply(const std::vector<double>& coeffs, const DiscretizedKernel& k,
                                  const Eigen::VectorXd& x, Eigen::Index k_max = 50);

/// (kπ)^(-2r) for the Dirichlet Green's graphon raised to the box power r.
double dirichlet_green_eigenvalue(int k, int box_power = 1);

}  // namespace rkhs
