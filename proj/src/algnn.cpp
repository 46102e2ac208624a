#include "rkhs/algnn.hpp"

#include <random>
#include <string>

#include <Eigen/Geometry>

#include "rkhs/errors.hpp"
#include "rkhs/nonlinearity.hpp"

namespace rkhs {

const RkhsSignal& AlgNet::block(int b) const {
  if (b < 0 || b >= block_count()) throw DomainError("AlgNet: block index out of range");
  if (b < n1()) return layer1[static_cast<std::size_t>(b)];
  const int k = b - n1();
  return layer2[static_cast<std::size_t>(k / n1())][static_cast<std::size_t>(k % n1())];
}

RkhsSignal& AlgNet::block(int b) {
  return const_cast<RkhsSignal&>(static_cast<const AlgNet&>(*this).block(b));
}

AlgNet make_net(Kernel kernel, DomainOp op, std::vector<RkhsSignal> layer1,
                std::vector<std::vector<RkhsSignal>> layer2) {
  if (layer1.empty() || layer2.empty()) throw DomainError("AlgNet: N1 and N2 must be positive");
  const RkhsSignal reference = zero_signal(kernel, op);
  for (const auto& w : layer1) require_compatible(reference, w, "AlgNet layer1");
  for (const auto& row : layer2) {
    if (row.size() != layer1.size())
      throw DomainError("AlgNet: layer2 rows must have N1 = " + std::to_string(layer1.size()) +
                        " filters");
    for (const auto& w : row) require_compatible(reference, w, "AlgNet layer2");
  }
  return AlgNet{std::move(kernel), std::move(op), std::move(layer1), std::move(layer2)};
}

AlgNet init_net(const Kernel& kernel, const DomainOp& op, const NetInit& init) {
  if (init.n1 < 1 || init.n2 < 1 || init.terms_per_filter < 1)
    throw DomainError("init_net: counts must be positive");
  std::mt19937_64 rng(init.seed);
  std::uniform_real_distribution<double> jitter(-init.jitter, init.jitter);
  const Center delta = identity(op);

  auto make_filter = [&] {
    std::vector<Term> terms;
    for (int t = 0; t < init.terms_per_filter; ++t) {
      Center c = delta;
      if (auto* s = std::get_if<Scalar>(&c)) {
        s->x += jitter(rng);
      } else if (auto* p = std::get_if<Planar>(&c)) {
        p->x += jitter(rng);
        p->y += jitter(rng);
      } else if (auto* u = std::get_if<UnitInterval>(&c)) {
        // δ = 1 sits on the boundary; jitter inward.
        u->t -= std::abs(jitter(rng));
      } else if (auto* r = std::get_if<Rotation3>(&c)) {
        const Eigen::Vector3d axis(jitter(rng), jitter(rng), jitter(rng));
        if (axis.norm() > 0.0)
          r->R = Eigen::AngleAxisd(axis.norm(), axis.normalized()).toRotationMatrix() * r->R;
      }
      terms.push_back(Term{canonicalize(op, c), init.amplitude});
    }
    return make_signal(kernel, op, std::move(terms));
  };

  std::vector<RkhsSignal> layer1;
  for (int j = 0; j < init.n1; ++j) layer1.push_back(make_filter());
  std::vector<std::vector<RkhsSignal>> layer2(static_cast<std::size_t>(init.n2));
  for (auto& row : layer2)
    for (int j = 0; j < init.n1; ++j) row.push_back(make_filter());
  return make_net(kernel, op, std::move(layer1), std::move(layer2));
}

RkhsSignal forward_layer(const RkhsSignal& filter, const RkhsSignal& input) {
  return prune(convolve(filter, input));
}

ForwardTrace forward_trace(const AlgNet& net, const RkhsSignal& f) {
  require_compatible(net.layer1.front(), f, "forward");
  ForwardTrace tr{f, {}, {}, {}, {}, zero_signal(net.kernel, net.op)};
  for (const auto& w : net.layer1) {
    tr.g1.push_back(forward_layer(w, f));
    tr.h1.push_back(apply_eta(tr.g1.back()));
  }
  for (const auto& row : net.layer2) {
    RkhsSignal g = zero_signal(net.kernel, net.op);
    for (std::size_t j = 0; j < row.size(); ++j) g = add(g, forward_layer(row[j], tr.h1[j]));
    tr.g2.push_back(g);
    tr.out.push_back(apply_eta(g));
    tr.output = add(tr.output, tr.out.back());
  }
  return tr;
}

RkhsSignal forward(const AlgNet& net, const RkhsSignal& f) { return forward_trace(net, f).output; }

std::vector<double> collect_params(const AlgNet& net) {
  std::vector<double> out;
  for (int b = 0; b < net.block_count(); ++b)
    for (const auto& t : net.block(b).terms) {
      out.push_back(t.weight);
      const auto c = coordinates(t.center);
      out.insert(out.end(), c.begin(), c.end());
    }
  return out;
}

AlgNet set_params(const AlgNet& net, const std::vector<double>& params) {
  AlgNet out = net;
  const CenterKind kind = center_kind(net.op);
  const std::size_t width = 1 + coordinate_count(kind);
  std::size_t expected = 0;
  for (int b = 0; b < net.block_count(); ++b) expected += width * net.block(b).terms.size();
  if (params.size() != expected)
    throw DomainError("set_params: expected " + std::to_string(expected) + " parameters, got " +
                      std::to_string(params.size()));
  std::size_t pos = 0;
  for (int b = 0; b < out.block_count(); ++b)
    for (auto& t : out.block(b).terms) {
      t.weight = params[pos];
      std::vector<double> coords(params.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                                 params.begin() + static_cast<std::ptrdiff_t>(pos + width));
      t.center = canonicalize(net.op, make_center(kind, coords));
      pos += width;
    }
  return out;
}

std::vector<ParamSlot> param_layout(const AlgNet& net) {
  std::vector<ParamSlot> out;
  const int coords = static_cast<int>(coordinate_count(center_kind(net.op)));
  for (int b = 0; b < net.block_count(); ++b)
    for (std::size_t t = 0; t < net.block(b).terms.size(); ++t)
      for (int c = -1; c < coords; ++c) out.push_back(ParamSlot{b, t, c});
  return out;
}

}  // namespace rkhs
