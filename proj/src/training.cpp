#include "rkhs/training.hpp"

#include <cmath>
#include <string>

#include "rkhs/errors.hpp"
#include "rkhs/nonlinearity.hpp"

namespace rkhs {

namespace {

void require_shape(const AlgNet& net, const Direction& d) {
  if (static_cast<int>(d.blocks.size()) != net.block_count())
    throw DomainError("Direction has " + std::to_string(d.blocks.size()) +
                      " blocks; the net has " + std::to_string(net.block_count()));
}

void require_data(const Dataset& data, const char* what) {
  if (data.empty()) throw DomainError(std::string(what) + ": dataset is empty");
}

struct PairState {
  ForwardTrace trace;
  RkhsSignal residual;
};

std::vector<PairState> evaluate_pairs(const AlgNet& net, const Dataset& data) {
  std::vector<PairState> out;
  out.reserve(data.size());
  for (const auto& s : data) {
    auto tr = forward_trace(net, s.input);
    auto res = subtract(s.target, tr.output);
    out.push_back(PairState{std::move(tr), std::move(res)});
  }
  return out;
}

}  // namespace

Direction zero_direction(const AlgNet& net) {
  return Direction{std::vector<RkhsSignal>(static_cast<std::size_t>(net.block_count()),
                                           zero_signal(net.kernel, net.op))};
}

Direction one_hot(const AlgNet& net, int block, const RkhsSignal& d) {
  if (block < 0 || block >= net.block_count()) throw DomainError("one_hot: block out of range");
  require_compatible(net.layer1.front(), d, "one_hot");
  Direction out = zero_direction(net);
  out.blocks[static_cast<std::size_t>(block)] = d;
  return out;
}

Direction broadcast(const AlgNet& net, const RkhsSignal& d) {
  require_compatible(net.layer1.front(), d, "broadcast");
  return Direction{std::vector<RkhsSignal>(static_cast<std::size_t>(net.block_count()), d)};
}

Direction scale(const Direction& d, double c) {
  Direction out = d;
  for (auto& b : out.blocks) b = scale(b, c);
  return out;
}

double norm(const Direction& d) {
  double s = 0.0;
  for (const auto& b : d.blocks) s += std::max(inner(b, b), 0.0);
  return std::sqrt(s);
}

AlgNet apply_direction(const AlgNet& net, const Direction& d, double alpha) {
  require_shape(net, d);
  AlgNet out = net;
  for (int b = 0; b < out.block_count(); ++b) {
    RkhsSignal& w = out.block(b);
    for (const auto& t : d.blocks[static_cast<std::size_t>(b)].terms)
      w.terms.push_back(Term{t.center, alpha * t.weight});
    w = prune(w);
  }
  return out;
}

void validate(const TrainConfig& cfg) {
  auto fail = [](const std::string& m) { throw DomainError("TrainConfig: " + m); };
  if (cfg.iterations < 0) fail("iterations must be >= 0");
  if (!(cfg.learning_rate >= 0.0)) fail("learning_rate must be >= 0");
  if (!(cfg.cg_tol > 0.0)) fail("cg_tol must be > 0");
  if (cfg.cg_max_iter < 1) fail("cg_max_iter must be >= 1");
  if (!(cfg.wolfe_alpha_bar > 0.0)) fail("wolfe_alpha_bar must be > 0");
  if (!(cfg.wolfe_rho > 0.0 && cfg.wolfe_rho < 1.0)) fail("wolfe_rho must lie in (0, 1)");
  if (!(cfg.wolfe_c > 0.0 && cfg.wolfe_c < 1.0)) fail("wolfe_c must lie in (0, 1)");
  if (!(cfg.fd_step_centers > 0.0)) fail("fd_step_centers must be > 0");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) fail("beta1 must lie in [0, 1)");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) fail("beta2 must lie in [0, 1)");
  if (!(cfg.epsilon > 0.0)) fail("epsilon must be > 0");
}

double loss(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r) {
  const double n = norm(subtract(r, forward(net, f)));
  return 0.5 * n * n;
}

double total_loss(const AlgNet& net, const Dataset& data) {
  double s = 0.0;
  for (const auto& p : data) s += loss(net, p.input, p.target);
  return s;
}

RkhsSignal conv_frechet(const RkhsSignal& f, const RkhsSignal& d) { return convolve(d, f); }

RkhsSignal frechet_F1(const ForwardTrace& tr, const AlgNet& net, int j, const RkhsSignal& d) {
  if (j < 0 || j >= net.n1()) throw DomainError("frechet_F1: layer-1 index out of range");
  const auto uj = static_cast<std::size_t>(j);
  const RkhsSignal inner_d = eta_frechet(tr.g1[uj], conv_frechet(tr.input, d));
  RkhsSignal out = zero_signal(net.kernel, net.op);
  for (std::size_t i = 0; i < net.layer2.size(); ++i)
    out = add(out, eta_frechet(tr.g2[i], convolve(net.layer2[i][uj], inner_d)));
  return out;
}

RkhsSignal frechet_F1(const AlgNet& net, const RkhsSignal& f, int j, const RkhsSignal& d) {
  return frechet_F1(forward_trace(net, f), net, j, d);
}

RkhsSignal frechet_F2(const ForwardTrace& tr, const AlgNet& net, int i, int j,
                      const RkhsSignal& d) {
  if (i < 0 || i >= net.n2() || j < 0 || j >= net.n1())
    throw DomainError("frechet_F2: layer-2 index out of range");
  return eta_frechet(tr.g2[static_cast<std::size_t>(i)],
                     conv_frechet(tr.h1[static_cast<std::size_t>(j)], d));
}

RkhsSignal frechet_F2(const AlgNet& net, const RkhsSignal& f, int i, int j, const RkhsSignal& d) {
  return frechet_F2(forward_trace(net, f), net, i, j, d);
}

RkhsSignal frechet_full(const ForwardTrace& tr, const AlgNet& net, const Direction& d) {
  require_shape(net, d);
  RkhsSignal out = zero_signal(net.kernel, net.op);
  for (int b = 0; b < net.block_count(); ++b) {
    const RkhsSignal& db = d.blocks[static_cast<std::size_t>(b)];
    if (db.empty()) continue;
    if (b < net.n1()) {
      out = add(out, frechet_F1(tr, net, b, db));
    } else {
      const int k = b - net.n1();
      out = add(out, frechet_F2(tr, net, k / net.n1(), k % net.n1(), db));
    }
  }
  return out;
}

RkhsSignal frechet_full(const AlgNet& net, const RkhsSignal& f, const Direction& d) {
  return frechet_full(forward_trace(net, f), net, d);
}

double loss_frechet(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                    const Direction& d) {
  const auto tr = forward_trace(net, f);
  return -inner(frechet_full(tr, net, d), subtract(r, tr.output));
}

// ---------------------------------------------------------------------------

std::string to_string(CgStatus s) {
  switch (s) {
    case CgStatus::converged: return "converged";
    case CgStatus::zero_rhs: return "zero_rhs";
    case CgStatus::max_iterations: return "max_iterations";
    case CgStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

std::string to_string(StopReason s) {
  switch (s) {
    case StopReason::iterations: return "iterations";
    case StopReason::optimal: return "optimal";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

CgResult cg_solve_direction(const AlgNet& net, const Dataset& data, const TrainConfig& cfg) {
  require_data(data, "cg_solve_direction");
  if (!(cfg.cg_tol > 0.0)) throw DomainError("cg_solve_direction: cg_tol must be > 0");
  const auto pairs = evaluate_pairs(net, data);

  auto apply_op = [&](const RkhsSignal& s) {
    const Direction lifted = broadcast(net, s);
    RkhsSignal out = zero_signal(net.kernel, net.op);
    for (const auto& p : pairs) out = add(out, frechet_full(p.trace, net, lifted));
    return out;
  };
  RkhsSignal rhs = zero_signal(net.kernel, net.op);
  for (const auto& p : pairs) rhs = add(rhs, p.residual);

  RkhsSignal d = zero_signal(net.kernel, net.op);
  auto true_residual = [&](const RkhsSignal& x) { return norm(subtract(apply_op(x), rhs)); };

  if (norm(rhs) < cfg.cg_tol)
    return CgResult{broadcast(net, d), norm(rhs), 0, CgStatus::zero_rhs};

  RkhsSignal s = rhs;
  RkhsSignal p = s;
  double ss = inner(s, s);
  RkhsSignal best = d;
  double best_estimate = std::sqrt(ss);
  int k = 0;
  CgStatus status = CgStatus::max_iterations;

  while (k < cfg.cg_max_iter) {
    const RkhsSignal ap = apply_op(p);
    const double pap = inner(p, ap);
    if (pap <= 1e-14 * inner(p, p)) {
      status = CgStatus::breakdown;
      break;
    }
    const double gamma = ss / pap;
    d = add(d, scale(p, gamma));
    s = subtract(s, scale(ap, gamma));
    ++k;
    const double ss_next = inner(s, s);
    const double estimate = std::sqrt(std::max(ss_next, 0.0));
    if (estimate < best_estimate) {
      best = d;
      best_estimate = estimate;
    }
    if (estimate < cfg.cg_tol) {
      // The recursive residual drifts from the true one; restart from the
      // true residual when they disagree.
      s = subtract(rhs, apply_op(d));
      const double actual = norm(s);
      if (actual < cfg.cg_tol) {
        status = CgStatus::converged;
        best = d;
        break;
      }
      best_estimate = actual;
      p = s;
      ss = inner(s, s);
      continue;
    }
    p = add(s, scale(p, ss_next / ss));
    ss = ss_next;
  }
  // Breakdown falls back to the least-residual iterate; otherwise the last one stands.
  const RkhsSignal& out = status == CgStatus::breakdown ? best : d;
  return CgResult{broadcast(net, out), true_residual(out), k, status};
}

CgResult cg_solve_direction(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                            const TrainConfig& cfg) {
  return cg_solve_direction(net, Dataset{Sample{f, r}}, cfg);
}

double descent_slope(const AlgNet& net, const Dataset& data, const Direction& d) {
  double slope = 0.0;
  for (const auto& p : evaluate_pairs(net, data))
    slope += inner(frechet_full(p.trace, net, d), p.residual);
  return slope;
}

double wolfe_backtrack(const AlgNet& net, const Dataset& data, const Direction& d,
                       const TrainConfig& cfg) {
  require_data(data, "wolfe_backtrack");
  require_shape(net, d);
  const double loss0 = total_loss(net, data);
  const double slope = descent_slope(net, data, d);
  double alpha = cfg.wolfe_alpha_bar;
  for (int m = 0; m <= 60; ++m) {
    if (total_loss(apply_direction(net, d, alpha), data) <= loss0 - cfg.wolfe_c * alpha * slope)
      return alpha;
    alpha *= cfg.wolfe_rho;
  }
  return 0.0;
}

double wolfe_backtrack(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                       const Direction& d, const TrainConfig& cfg) {
  return wolfe_backtrack(net, Dataset{Sample{f, r}}, d, cfg);
}

TrainResult steepest_descent_train(const AlgNet& net, const Dataset& data,
                                   const TrainConfig& cfg) {
  validate(cfg);
  require_data(data, "steepest_descent_train");
  TrainResult result{net, {}, total_loss(net, data), StopReason::iterations};
  for (int it = 0; it < cfg.iterations; ++it) {
    if (result.final_loss == 0.0) {
      result.reason = StopReason::optimal;
      break;
    }
    const CgResult cg = cg_solve_direction(result.net, data, cfg);
    const double n = norm(cg.direction);
    if (cg.status == CgStatus::zero_rhs) {
      result.reason = StopReason::optimal;
      break;
    }
    if (n == 0.0) {
      result.reason = StopReason::stalled;
      break;
    }
    Direction d = scale(cg.direction, 1.0 / n);
    const double slope = descent_slope(result.net, data, d);
    if (slope == 0.0) {
      result.reason = StopReason::stalled;
      break;
    }
    if (slope < 0.0) d = scale(d, -1.0);
    const double alpha = wolfe_backtrack(result.net, data, d, cfg);
    if (alpha == 0.0) {
      result.reason = StopReason::stalled;
      break;
    }
    AlgNet next = apply_direction(result.net, d, alpha);
    const double next_loss = total_loss(next, data);
    if (!(next_loss < result.final_loss)) {
      result.reason = StopReason::stalled;
      break;
    }
    result.net = std::move(next);
    result.final_loss = next_loss;
    result.loss_trace.push_back(next_loss);
  }
  return result;
}

std::vector<double> parametric_gradient(const AlgNet& net, const Dataset& data,
                                        const TrainConfig& cfg) {
  const auto layout = param_layout(net);
  const std::vector<double> params = collect_params(net);
  std::vector<double> grad(params.size(), 0.0);
  const auto pairs = evaluate_pairs(net, data);

  for (std::size_t k = 0; k < layout.size(); ++k) {
    const ParamSlot& slot = layout[k];
    if (slot.component < 0) {
      const Term& t = net.block(slot.block).terms[slot.term];
      const Direction d = one_hot(net, slot.block, section(net.kernel, net.op, t.center, 1.0));
      double g = 0.0;
      for (const auto& p : pairs) g -= inner(frechet_full(p.trace, net, d), p.residual);
      grad[k] = g;
    } else {
      const double h = cfg.fd_step_centers;
      auto plus = params;
      auto minus = params;
      plus[k] += h;
      minus[k] -= h;
      grad[k] = (total_loss(set_params(net, plus), data) -
                 total_loss(set_params(net, minus), data)) /
                (2.0 * h);
    }
  }
  return grad;
}

TrainResult adam_train(const AlgNet& net, const Dataset& data, const TrainConfig& cfg) {
  validate(cfg);
  TrainResult result{net, {}, 0.0, StopReason::iterations};
  std::vector<double> params = collect_params(net);
  std::vector<double> m(params.size(), 0.0);
  std::vector<double> v(params.size(), 0.0);

  // Objective Σ‖r − F‖² = 2 Σℓ.
  auto objective = [&](const AlgNet& current) {
    if (cfg.use_adjoint)
      if (auto lg = adjoint_gradient(current, data)) {
        for (auto& g : lg->gradient) g *= 2.0;
        return LossAndGradient{2.0 * lg->loss, std::move(lg->gradient)};
      }
    auto g = parametric_gradient(current, data, cfg);
    for (auto& x : g) x *= 2.0;
    return LossAndGradient{2.0 * total_loss(current, data), std::move(g)};
  };

  double b1t = 1.0;
  double b2t = 1.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const LossAndGradient lg = objective(result.net);
    result.loss_trace.push_back(lg.loss);
    if (cfg.learning_rate == 0.0) continue;
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double g = lg.gradient[k];
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[k] / (1.0 - b1t);
      const double v_hat = v[k] / (1.0 - b2t);
      params[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
    result.net = set_params(result.net, params);
    params = collect_params(result.net);
  }
  result.final_loss = 2.0 * total_loss(result.net, data);
  return result;
}

TrainResult train(const AlgNet& net, const Dataset& data, const TrainConfig& cfg) {
  return cfg.mode == TrainMode::adam ? adam_train(net, data, cfg)
                                     : steepest_descent_train(net, data, cfg);
}

}  // namespace rkhs
