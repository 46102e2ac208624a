#pragma once

#include <cstdint>
#include <vector>

#include "rkhs/signal.hpp"

namespace rkhs {

/// Two-layer convolutional network on an RKHS:
///   f_out = Σ_{i<N2} η( Σ_{j<N1} w2[i][j] ∗ η(w1[j] ∗ f) ).
/// Filters are addressed as blocks: block j < N1 is layer1[j]; block
/// N1 + i·N1 + j is layer2[i][j].
struct AlgNet {
  Kernel kernel;
  DomainOp op;
  std::vector<RkhsSignal> layer1;
  std::vector<std::vector<RkhsSignal>> layer2;

  int n1() const { return static_cast<int>(layer1.size()); }
  int n2() const { return static_cast<int>(layer2.size()); }
  int block_count() const { return n1() + n1() * n2(); }
  const RkhsSignal& block(int b) const;
  RkhsSignal& block(int b);
};

/// Checks shapes and that every filter shares the net's kernel and op.
AlgNet make_net(Kernel kernel, DomainOp op, std::vector<RkhsSignal> layer1,
                std::vector<std::vector<RkhsSignal>> layer2);

struct NetInit {
  int n1 = 2;
  int n2 = 2;
  int terms_per_filter = 3;
  double amplitude = 1.0;
  /// Uniform jitter half-width applied to each coordinate of the identity.
  double jitter = 0.1;
  std::uint64_t seed = 0;
};

/// Every filter gets `terms_per_filter` sections of the given amplitude at the
/// op identity, each displaced by a random jitter.
AlgNet init_net(const Kernel& kernel, const DomainOp& op, const NetInit& init);

/// filter ∗ input, pruned.
RkhsSignal forward_layer(const RkhsSignal& filter, const RkhsSignal& input);

/// Intermediate features of one forward pass.
struct ForwardTrace {
  RkhsSignal input;
  std::vector<RkhsSignal> g1;   ///< w1[j] ∗ f
  std::vector<RkhsSignal> h1;   ///< η(g1[j])
  std::vector<RkhsSignal> g2;   ///< Σ_j w2[i][j] ∗ h1[j]
  std::vector<RkhsSignal> out;  ///< η(g2[i])
  RkhsSignal output;            ///< Σ_i out[i]
};

ForwardTrace forward_trace(const AlgNet& net, const RkhsSignal& f);
RkhsSignal forward(const AlgNet& net, const RkhsSignal& f);

/// Flat parameter view: blocks in order, terms in stored order, each term
/// contributing its weight followed by its center coordinates.
std::vector<double> collect_params(const AlgNet& net);
/// Inverse of collect_params. Centers are canonicalized for the net's op.
/// Throws DomainError on a length mismatch.
AlgNet set_params(const AlgNet& net, const std::vector<double>& params);

struct ParamSlot {
  int block = 0;
  std::size_t term = 0;
  /// -1 for the weight, otherwise the center coordinate index.
  int component = -1;
};
std::vector<ParamSlot> param_layout(const AlgNet& net);

}  // namespace rkhs
