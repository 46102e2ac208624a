#include "rkhs/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "rkhs/detail/overloaded.hpp"
#include "rkhs/errors.hpp"

namespace rkhs {

using detail::overloaded;

double eval(const Graphon& w, double u, double v) {
  return std::visit(overloaded{[&](const DirichletGreen&) {
                                 return std::min(u, v) * (1.0 - std::max(u, v));
                               },
                               [&](const ConstantGraphon& c) { return c.p; }},
                    w);
}

std::string name_of(const Graphon& w) {
  return std::visit(overloaded{[](const DirichletGreen&) { return std::string("dirichlet_green"); },
                               [](const ConstantGraphon&) { return std::string("constant_p"); }},
                    w);
}

bool operator==(const Graphon& a, const Graphon& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<ConstantGraphon>(&a)) return c->p == std::get<ConstantGraphon>(b).p;
  return true;
}

DiscretizedKernel discretize(const Graphon& w, Eigen::Index n) {
  if (n < 1) throw DomainError("discretize: n must be positive");
  DiscretizedKernel out;
  out.values.resize(n, n);
  const double h = 1.0 / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      const double value = eval(w, (i + 0.5) * h, (j + 0.5) * h);
      out.values(i, j) = value;
      out.values(j, i) = value;
    }
  return out;
}

DiscretizedKernel box_product(const DiscretizedKernel& a, const DiscretizedKernel& b) {
  if (a.size() != b.size())
    throw DomainError("box_product: grid size mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  DiscretizedKernel out;
  out.values.noalias() = a.spacing() * (a.values * b.values);
  return out;
}

DiscretizedKernel graphon_kernel(const Graphon& w, Eigen::Index n) {
  if (n < 64) throw DomainError("graphon_kernel: n must be at least 64");
  const DiscretizedKernel wd = discretize(w, n);
  DiscretizedKernel k = box_product(wd, wd);
  // Symmetric by construction; remove round-off asymmetry from the product.
  k.values = 0.5 * (k.values + k.values.transpose()).eval();
  return k;
}

DiscretizedKernel box_power(const DiscretizedKernel& k, int r) {
  if (r < 1) throw DomainError("box_power: r must be >= 1");
  DiscretizedKernel out = k;
  for (int i = 1; i < r; ++i) out = box_product(k, out);
  return out;
}

DiscretizedKernel quadrature_delta(Eigen::Index n) {
  DiscretizedKernel out;
  out.values = static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
  return out;
}

namespace {

// LU factorization with partial pivoting of a symmetric tridiagonal matrix
// shifted by -mu, as used by inverse iteration. Pivots smaller than `tiny`
// are replaced by it so that a shift at an exact eigenvalue stays solvable.
struct TridiagonalLu {
  Eigen::VectorXd d, du, du2, dl;
  std::vector<bool> swapped;

  TridiagonalLu(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu, double tiny)
      : d(diag.array() - mu), du(sub), du2(Eigen::VectorXd::Zero(std::max<Eigen::Index>(diag.size() - 2, 0))),
        dl(sub), swapped(static_cast<std::size_t>(diag.size()), false) {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d(i)) >= std::abs(dl(i))) {
        const double fact = d(i) == 0.0 ? 0.0 : dl(i) / d(i);
        dl(i) = fact;
        d(i + 1) -= fact * du(i);
      } else {
        swapped[static_cast<std::size_t>(i)] = true;
        const double fact = d(i) / dl(i);
        d(i) = dl(i);
        dl(i) = fact;
        const double t = du(i);
        du(i) = d(i + 1);
        d(i + 1) = t - fact * d(i + 1);
        if (i + 2 < n) {
          du2(i) = du(i + 1);
          du(i + 1) = -fact * du(i + 1);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(d(i)) < tiny) d(i) = d(i) < 0.0 ? -tiny : tiny;
  }

  void solve(Eigen::VectorXd& b) const {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!swapped[static_cast<std::size_t>(i)]) {
        b(i + 1) -= dl(i) * b(i);
      } else {
        const double t = b(i);
        b(i) = b(i + 1);
        b(i + 1) = t - dl(i) * b(i);
      }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double v = b(i);
      if (i + 1 < n) v -= du(i) * b(i + 1);
      if (i + 2 < n) v -= du2(i) * b(i + 2);
      b(i) = v / d(i);
    }
  }
};

}  // namespace

std::vector<Eigenpair> spectral_decompose(const DiscretizedKernel& k, Eigen::Index k_max) {
  const Eigen::Index n = k.size();
  if (k_max < 1 || k_max > n) throw DomainError("spectral_decompose: k_max must be in [1, n]");
  const double h = k.spacing();

  // Householder tridiagonalization, eigenvalues of the tridiagonal form, then
  // inverse iteration for just the wanted vectors.
  const Eigen::MatrixXd op = h * k.values;
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(op);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values;
  values.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (values.info() != Eigen::Success) throw DegeneracyError("spectral_decompose: eigensolver did not converge");

  double t_norm = diag.cwiseAbs().maxCoeff();
  if (n > 1) t_norm += 2.0 * sub.cwiseAbs().maxCoeff();
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(t_norm, 1e-300);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd basis(n, k_max);
  std::vector<Eigenpair> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (Eigen::Index c = 0; c < k_max; ++c) {
    const double lambda = values.eigenvalues()(n - 1 - c);
    const TridiagonalLu lu(diag, sub, lambda, tiny);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = unif(rng);
    for (int it = 0; it < 4; ++it) {
      // Reorthogonalizing against earlier vectors separates clustered eigenvalues.
      for (int pass = 0; pass < 2; ++pass) x -= basis.leftCols(c) * (basis.leftCols(c).transpose() * x);
      x.normalize();
      lu.solve(x);
    }
    for (int pass = 0; pass < 2; ++pass) x -= basis.leftCols(c) * (basis.leftCols(c).transpose() * x);
    x.normalize();
    basis.col(c) = x;

    Eigenpair pair;
    pair.value = lambda;
    pair.function = (tri.matrixQ() * x) / std::sqrt(h);
    const double peak = pair.function.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(pair.function(i)) > 1e-6 * peak) {
        if (pair.function(i) < 0) pair.function = -pair.function;
        break;
      }
    }
    out.push_back(std::move(pair));
  }
  return out;
}

Eigen::VectorXd poly_filter_apply(const std::vector<double>& coeffs,
                                  const std::vector<Eigenpair>& spectrum,
                                  const Eigen::VectorXd& x) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  if (spectrum.empty()) return y;
  if (spectrum.front().function.size() != x.size())
    throw DomainError("poly_filter_apply: signal length does not match the grid");
  const double h = 1.0 / static_cast<double>(x.size());
  for (const auto& pair : spectrum) {
    double p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * pair.value + *it;
    if (p == 0.0) continue;
    // p(λ)·λ·⟨φ,x⟩_H with ⟨φ,x⟩_H = ⟨φ,x⟩_L2 / λ; the λ factors cancel.
    const double l2 = h * pair.function.dot(x);
    y += (p * l2) * pair.function;
  }
  return y;
}

Eigen::VectorXd poly_filter_apply(const std::vector<double>& coeffs, const DiscretizedKernel& k,
                                  const Eigen::VectorXd& x, Eigen::Index k_max) {
  if (x.size() != k.size())
    throw DomainError("poly_filter_apply: signal length does not match the grid");
  return poly_filter_apply(coeffs, spectral_decompose(k, std::min(k_max, k.size())), x);
}

double dirichlet_green_eigenvalue(int k, int box_power) {
  return std::pow(k * std::numbers::pi, -2.0 * box_power);
}

}  // namespace rkhs
