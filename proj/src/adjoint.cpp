// Reverse-mode gradient of the summed loss for flat (1-D or planar) domains.
// The forward pass mirrors forward_trace term for term, including the drop of
// products below kDropTol; configurations where pruning would merge centers
// are reported as unsupported so callers can fall back to the reference route.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rkhs/detail/overloaded.hpp"
#include "rkhs/errors.hpp"
#include "rkhs/training.hpp"

namespace rkhs {

namespace {

using Pt = std::array<double, 2>;

enum class KernelKind { gaussian, sinc };
enum class OpKind { additive, product };

struct KernelFn {
  KernelKind kind = KernelKind::gaussian;
  int dim = 1;
  double a = 1.0;  // exponent scale for Gaussians, band B for sinc

  double value(const Pt& u, const Pt& v) const {
    if (kind == KernelKind::gaussian) {
      double d2 = 0.0;
      for (int k = 0; k < dim; ++k) d2 += (u[k] - v[k]) * (u[k] - v[k]);
      return std::exp(-a * d2);
    }
    const double c = a / M_PI;
    return c * normalized_sinc(c * (u[0] - v[0]));
  }

  // ∂K(u, v)/∂u, given K(u, v).
  Pt grad(const Pt& u, const Pt& v, double k) const {
    Pt g{0.0, 0.0};
    if (kind == KernelKind::gaussian) {
      for (int i = 0; i < dim; ++i) g[i] = -2.0 * a * (u[i] - v[i]) * k;
      return g;
    }
    const double t = u[0] - v[0];
    const double bt = a * t;
    if (std::abs(bt) < 1e-3) {
      g[0] = (a / M_PI) * (-a * bt / 3.0 + a * bt * bt * bt / 30.0);
    } else {
      g[0] = (bt * std::cos(bt) - std::sin(bt)) / (M_PI * t * t);
    }
    return g;
  }
};

struct Flat {
  std::vector<Pt> c;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

struct Setup {
  KernelFn kernel;
  OpKind op_kind = OpKind::additive;
  CenterKind center_kind = CenterKind::scalar;
  DomainOp op;
};

std::optional<Setup> make_setup(const AlgNet& net) {
  Setup s;
  s.op = net.op;
  s.center_kind = center_kind(net.op);
  bool supported = true;
  std::visit(detail::overloaded{
                 [&](const Translation1D&) { s.op_kind = OpKind::additive; },
                 [&](const CyclicSum&) { s.op_kind = OpKind::additive; },
                 [&](const ModularSum01&) { s.op_kind = OpKind::additive; },
                 [&](const Translation2D&) { s.op_kind = OpKind::additive; },
                 [&](const UnitIntervalProduct&) { s.op_kind = OpKind::product; },
                 [&](const ComponentwiseProduct2D&) { s.op_kind = OpKind::product; },
                 [&](const SphereRotation&) { supported = false; },
             },
             net.op);
  std::visit(detail::overloaded{
                 [&](const Gaussian1D& k) { s.kernel = KernelFn{KernelKind::gaussian, 1, k.B}; },
                 [&](const Gaussian2D& k) {
                   s.kernel = KernelFn{KernelKind::gaussian, 2, 1.0 / (2.0 * k.sigma * k.sigma)};
                 },
                 [&](const Sinc& k) { s.kernel = KernelFn{KernelKind::sinc, 1, k.B}; },
                 [&](const SpherePoly&) { supported = false; },
                 [&](const GraphonBox&) { supported = false; },
             },
             net.kernel);
  if (!supported || s.center_kind == CenterKind::rotation) return std::nullopt;
  if ((s.kernel.dim == 2) != (s.center_kind == CenterKind::planar)) return std::nullopt;
  return s;
}

Pt to_pt(const Center& c) {
  const auto v = coordinates(c);
  return Pt{v[0], v.size() > 1 ? v[1] : 0.0};
}

Flat flatten(const RkhsSignal& f) {
  Flat out;
  for (const auto& t : f.terms) {
    out.c.push_back(to_pt(t.center));
    out.w.push_back(t.weight);
  }
  return out;
}

// Product terms of filter ∗ input that survive the drop threshold.
struct Product {
  Flat result;
  std::vector<std::pair<std::size_t, std::size_t>> index;  // (filter term, input term)
};

Product multiply(const Setup& s, const Flat& filter, const Flat& input) {
  Product out;
  const std::size_t nc = coordinate_count(s.center_kind);
  std::vector<double> a(nc), b(nc);
  for (std::size_t p = 0; p < filter.size(); ++p)
    for (std::size_t q = 0; q < input.size(); ++q) {
      const double w = filter.w[p] * input.w[q];
      if (!(std::abs(w) >= kDropTol)) continue;
      for (std::size_t k = 0; k < nc; ++k) {
        a[k] = filter.c[p][k];
        b[k] = input.c[q][k];
      }
      const Center c =
          compose(s.op, make_center(s.center_kind, a), make_center(s.center_kind, b));
      out.result.c.push_back(to_pt(c));
      out.result.w.push_back(w);
      out.index.emplace_back(p, q);
    }
  return out;
}

void multiply_backward(const Setup& s, const Flat& filter, const Flat& input, const Product& prod,
                       const std::vector<double>& wbar, const std::vector<Pt>& cbar,
                       std::vector<double>& filter_wbar, std::vector<Pt>& filter_cbar,
                       std::vector<double>* input_wbar, std::vector<Pt>* input_cbar) {
  const int dim = s.kernel.dim;
  for (std::size_t n = 0; n < prod.index.size(); ++n) {
    const auto [p, q] = prod.index[n];
    filter_wbar[p] += wbar[n] * input.w[q];
    if (input_wbar) (*input_wbar)[q] += wbar[n] * filter.w[p];
    for (int k = 0; k < dim; ++k) {
      const double ja = s.op_kind == OpKind::product ? input.c[q][k] : 1.0;
      const double jb = s.op_kind == OpKind::product ? filter.c[p][k] : 1.0;
      filter_cbar[p][k] += ja * cbar[n][k];
      if (input_cbar) (*input_cbar)[q][k] += jb * cbar[n][k];
    }
  }
}

struct EtaRecord {
  Eigen::MatrixXd G;
  Eigen::VectorXd g, S;
  Flat out;
};

// Returns false when two centers are close enough that pruning would merge them.
bool eta_forward(const Setup& s, const Flat& in, EtaRecord& rec) {
  const std::size_t n = in.size();
  rec.G.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    rec.G(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) =
        s.kernel.value(in.c[v], in.c[v]);
    for (std::size_t u = v + 1; u < n; ++u) {
      double d2 = 0.0;
      for (int k = 0; k < s.kernel.dim; ++k) d2 += (in.c[v][k] - in.c[u][k]) * (in.c[v][k] - in.c[u][k]);
      if (std::sqrt(d2) <= kMergeTol) return false;
      const double k = s.kernel.value(in.c[v], in.c[u]);
      rec.G(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = k;
      rec.G(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = k;
    }
  }
  const Eigen::Map<const Eigen::VectorXd> alpha(in.w.data(), static_cast<Eigen::Index>(n));
  rec.g = rec.G * alpha;
  rec.S = rec.G.colwise().sum().transpose();
  rec.out.c = in.c;
  rec.out.w.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    if (!(rec.S(i) > 0.0)) throw DegeneracyError("eta: non-positive normalizer");
    rec.out.w[v] = std::max(rec.g(i), 0.0) / rec.S(i);
  }
  return true;
}

// Given gradients on the output weights and centers, returns gradients on the
// input weights and adds the center gradient into cbar.
std::vector<double> eta_backward(const Setup& s, const Flat& in, const EtaRecord& rec,
                                 const std::vector<double>& obar, std::vector<Pt>& cbar) {
  const auto n = static_cast<Eigen::Index>(in.size());
  Eigen::VectorXd gbar(n), Sbar(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto uv = static_cast<std::size_t>(v);
    gbar(v) = rec.g(v) > 0.0 ? obar[uv] / rec.S(v) : 0.0;
    Sbar(v) = -obar[uv] * rec.out.w[uv] / rec.S(v);
  }
  const Eigen::VectorXd abar = rec.G * gbar;
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index u = 0; u < n; ++u) {
      if (u == v) continue;
      const auto uv = static_cast<std::size_t>(v);
      const auto uu = static_cast<std::size_t>(u);
      const double gvu = gbar(v) * in.w[uu] + Sbar(v);
      const double guv = gbar(u) * in.w[uv] + Sbar(u);
      const Pt dk = s.kernel.grad(in.c[uv], in.c[uu], rec.G(v, u));
      for (int k = 0; k < s.kernel.dim; ++k) cbar[uv][k] += (gvu + guv) * dk[k];
    }
  return std::vector<double>(abar.data(), abar.data() + n);
}

struct Accumulator {
  std::vector<std::vector<double>> wbar;
  std::vector<std::vector<Pt>> cbar;
};

double pair_backward(const Setup& s, const std::vector<Flat>& blocks, int n1, int n2,
                     const Flat& f, const Flat& r, Accumulator& acc, bool& ok) {
  const auto block_index = [n1](int i, int j) { return static_cast<std::size_t>(n1 + i * n1 + j); };

  // Forward.
  std::vector<Product> p1(static_cast<std::size_t>(n1));
  std::vector<EtaRecord> e1(static_cast<std::size_t>(n1));
  for (int j = 0; j < n1; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    p1[uj] = multiply(s, blocks[uj], f);
    if (!eta_forward(s, p1[uj].result, e1[uj])) {
      ok = false;
      return 0.0;
    }
  }
  std::vector<std::vector<Product>> p2(static_cast<std::size_t>(n2));
  std::vector<Flat> g2(static_cast<std::size_t>(n2));
  std::vector<EtaRecord> e2(static_cast<std::size_t>(n2));
  for (int i = 0; i < n2; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int j = 0; j < n1; ++j) {
      p2[ui].push_back(multiply(s, blocks[block_index(i, j)], e1[static_cast<std::size_t>(j)].out));
      const Flat& part = p2[ui].back().result;
      g2[ui].c.insert(g2[ui].c.end(), part.c.begin(), part.c.end());
      g2[ui].w.insert(g2[ui].w.end(), part.w.begin(), part.w.end());
    }
    if (!eta_forward(s, g2[ui], e2[ui])) {
      ok = false;
      return 0.0;
    }
  }
  Flat F;
  for (const auto& e : e2) {
    F.c.insert(F.c.end(), e.out.c.begin(), e.out.c.end());
    F.w.insert(F.w.end(), e.out.w.begin(), e.out.w.end());
  }

  // Loss ½‖r − F‖² and its gradient on F.
  double rr = 0.0;
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b) rr += r.w[a] * r.w[b] * s.kernel.value(r.c[a], r.c[b]);
  std::vector<double> Fbar(F.size(), 0.0);
  std::vector<Pt> Fcbar(F.size(), Pt{0.0, 0.0});
  double rF = 0.0, FF = 0.0;
  for (std::size_t v = 0; v < F.size(); ++v) {
    double res = 0.0;
    Pt dres{0.0, 0.0};
    for (std::size_t a = 0; a < r.size(); ++a) {
      const double k = s.kernel.value(F.c[v], r.c[a]);
      res += r.w[a] * k;
      const Pt dk = s.kernel.grad(F.c[v], r.c[a], k);
      for (int d = 0; d < s.kernel.dim; ++d) dres[d] += r.w[a] * dk[d];
    }
    rF += F.w[v] * res;
    for (std::size_t u = 0; u < F.size(); ++u) {
      const double k = s.kernel.value(F.c[v], F.c[u]);
      res -= F.w[u] * k;
      FF += F.w[v] * F.w[u] * k;
      if (u == v) continue;
      const Pt dk = s.kernel.grad(F.c[v], F.c[u], k);
      for (int d = 0; d < s.kernel.dim; ++d) dres[d] -= F.w[u] * dk[d];
    }
    Fbar[v] = -res;
    for (int d = 0; d < s.kernel.dim; ++d) Fcbar[v][d] = -F.w[v] * dres[d];
  }
  const double loss = 0.5 * std::max(rr - 2.0 * rF + FF, 0.0);

  // Backward through layer 2.
  std::vector<std::vector<double>> h1_wbar(static_cast<std::size_t>(n1));
  std::vector<std::vector<Pt>> h1_cbar(static_cast<std::size_t>(n1));
  for (int j = 0; j < n1; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    h1_wbar[uj].assign(e1[uj].out.size(), 0.0);
    h1_cbar[uj].assign(e1[uj].out.size(), Pt{0.0, 0.0});
  }
  std::size_t offset = 0;
  for (int i = 0; i < n2; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const std::size_t n = g2[ui].size();
    std::vector<double> obar(Fbar.begin() + static_cast<std::ptrdiff_t>(offset),
                             Fbar.begin() + static_cast<std::ptrdiff_t>(offset + n));
    std::vector<Pt> cbar(Fcbar.begin() + static_cast<std::ptrdiff_t>(offset),
                         Fcbar.begin() + static_cast<std::ptrdiff_t>(offset + n));
    offset += n;
    const std::vector<double> gbar = eta_backward(s, g2[ui], e2[ui], obar, cbar);
    std::size_t seg = 0;
    for (int j = 0; j < n1; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Product& prod = p2[ui][uj];
      const std::size_t m = prod.index.size();
      std::vector<double> wb(gbar.begin() + static_cast<std::ptrdiff_t>(seg),
                             gbar.begin() + static_cast<std::ptrdiff_t>(seg + m));
      std::vector<Pt> cb(cbar.begin() + static_cast<std::ptrdiff_t>(seg),
                         cbar.begin() + static_cast<std::ptrdiff_t>(seg + m));
      seg += m;
      const std::size_t b = block_index(i, j);
      multiply_backward(s, blocks[b], e1[uj].out, prod, wb, cb, acc.wbar[b], acc.cbar[b],
                        &h1_wbar[uj], &h1_cbar[uj]);
    }
  }

  // Backward through layer 1.
  for (int j = 0; j < n1; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    std::vector<Pt> cbar = h1_cbar[uj];
    const std::vector<double> gbar = eta_backward(s, p1[uj].result, e1[uj], h1_wbar[uj], cbar);
    multiply_backward(s, blocks[uj], f, p1[uj], gbar, cbar, acc.wbar[uj], acc.cbar[uj], nullptr,
                      nullptr);
  }
  return loss;
}

}  // namespace

std::optional<LossAndGradient> adjoint_gradient(const AlgNet& net, const Dataset& data) {
  const auto setup = make_setup(net);
  if (!setup) return std::nullopt;
  for (const auto& p : data) {
    require_compatible(net.layer1.front(), p.input, "adjoint_gradient input");
    require_compatible(net.layer1.front(), p.target, "adjoint_gradient target");
  }

  std::vector<Flat> blocks;
  Accumulator acc;
  for (int b = 0; b < net.block_count(); ++b) {
    blocks.push_back(flatten(net.block(b)));
    acc.wbar.emplace_back(blocks.back().size(), 0.0);
    acc.cbar.emplace_back(blocks.back().size(), Pt{0.0, 0.0});
  }

  LossAndGradient out;
  for (const auto& p : data) {
    bool ok = true;
    out.loss += pair_backward(*setup, blocks, net.n1(), net.n2(), flatten(p.input),
                              flatten(p.target), acc, ok);
    if (!ok) return std::nullopt;
  }

  const auto nc = static_cast<int>(coordinate_count(setup->center_kind));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t t = 0; t < blocks[b].size(); ++t) {
      out.gradient.push_back(acc.wbar[b][t]);
      for (int k = 0; k < nc; ++k) out.gradient.push_back(acc.cbar[b][t][k]);
    }
  return out;
}

}  // namespace rkhs
