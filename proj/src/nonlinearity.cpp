#include "rkhs/nonlinearity.hpp"

#include <algorithm>
#include <string>

#include "rkhs/errors.hpp"

namespace rkhs {

namespace {

Eigen::VectorXd normalizers(const RkhsSignal& g, const Eigen::MatrixXd& gram_matrix) {
  Eigen::VectorXd s = gram_matrix.colwise().sum().transpose();
  for (Eigen::Index v = 0; v < s.size(); ++v) {
    if (!(s(v) > 0.0)) {
      const auto coords = coordinates(g.terms[static_cast<std::size_t>(v)].center);
      std::string where;
      for (double c : coords) where += (where.empty() ? "" : ", ") + std::to_string(c);
      throw DegeneracyError("nonlinearity: non-positive kernel normalizer at center (" + where + ")");
    }
  }
  return s;
}

}  // namespace

RkhsSignal apply_eta(const RkhsSignal& g) {
  RkhsSignal out{g.kernel, g.op, g.terms};
  if (g.terms.empty()) return out;
  const auto centers = centers_of(g);
  const Eigen::MatrixXd k = gram(g.kernel, centers);
  const Eigen::VectorXd values = k * weights_of(g);
  const Eigen::VectorXd s = normalizers(g, k);
  for (std::size_t v = 0; v < out.terms.size(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    out.terms[v].weight = std::max(values(i), 0.0) / s(i);
  }
  return out;
}

RkhsSignal eta_frechet(const RkhsSignal& w, const RkhsSignal& d) {
  require_compatible(w, d, "eta_frechet");
  const RkhsSignal w_padded = pad_to(w, centers_of(d));
  const RkhsSignal d_padded = pad_to(d, centers_of(w_padded));

  // Evaluate both on w_padded's center order, which lists all of U.
  const auto u = centers_of(w_padded);
  RkhsSignal out{w.kernel, w.op, w_padded.terms};
  if (u.empty()) return out;
  const Eigen::MatrixXd k = gram(w.kernel, u);
  const Eigen::VectorXd w_values = k * weights_of(w_padded);
  const Eigen::VectorXd s = normalizers(w_padded, k);
  const Eigen::VectorXd d_values = evaluate_at(d_padded, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    out.terms[i].weight = w_values(j) > 0.0 ? d_values(j) / s(j) : 0.0;
  }
  return out;
}

}  // namespace rkhs
