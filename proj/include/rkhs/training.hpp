#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkhs/algnn.hpp"

namespace rkhs {

/// One perturbation signal per filter block, in AlgNet block order.
struct Direction {
  std::vector<RkhsSignal> blocks;
};

Direction zero_direction(const AlgNet& net);
/// All blocks zero except `block`, which is set to d.
Direction one_hot(const AlgNet& net, int block, const RkhsSignal& d);
/// Every block set to d.
Direction broadcast(const AlgNet& net, const RkhsSignal& d);
Direction scale(const Direction& d, double c);
/// sqrt(Σ_b ‖d_b‖²_H)
double norm(const Direction& d);

/// w_b + α·d_b for every block: the direction's terms are appended to each
/// filter and the result pruned.
AlgNet apply_direction(const AlgNet& net, const Direction& d, double alpha);

struct Sample {
  RkhsSignal input;
  RkhsSignal target;
};
using Dataset = std::vector<Sample>;

enum class TrainMode { steepest_descent, adam };

struct TrainConfig {
  TrainMode mode = TrainMode::adam;
  int iterations = 2000;
  double learning_rate = 0.01;
  double cg_tol = 1e-6;
  int cg_max_iter = 200;
  double wolfe_alpha_bar = 1.0;
  double wolfe_rho = 0.5;
  double wolfe_c = 1e-4;
  double fd_step_centers = 1e-5;
  std::uint64_t seed = 0;
  /// Adam moment constants.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Use the reverse-mode gradient when the kernel/op pair supports it.
  bool use_adjoint = true;
};

/// Throws DomainError if a field is out of range.
void validate(const TrainConfig& cfg);

/// ℓ = ½‖r − F(w)‖²_H
double loss(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r);
double total_loss(const AlgNet& net, const Dataset& data);

// ---------------------------------------------------------------------------
// Fréchet derivatives of the network map
// ---------------------------------------------------------------------------

/// D(w ↦ w ∗ f){d} = d ∗ f.
RkhsSignal conv_frechet(const RkhsSignal& f, const RkhsSignal& d);

/// Derivative with respect to layer-1 filter j:
///   Σ_i Dη(g2_i){ w2[i][j] ∗ Dη(g1_j){ d ∗ f } }.
RkhsSignal frechet_F1(const ForwardTrace& tr, const AlgNet& net, int j, const RkhsSignal& d);
RkhsSignal frechet_F1(const AlgNet& net, const RkhsSignal& f, int j, const RkhsSignal& d);

/// Derivative with respect to layer-2 filter (i, j):  Dη(g2_i){ d ∗ h1_j }.
RkhsSignal frechet_F2(const ForwardTrace& tr, const AlgNet& net, int i, int j,
                      const RkhsSignal& d);
RkhsSignal frechet_F2(const AlgNet& net, const RkhsSignal& f, int i, int j, const RkhsSignal& d);

/// Σ over all blocks of the block derivatives.
RkhsSignal frechet_full(const ForwardTrace& tr, const AlgNet& net, const Direction& d);
RkhsSignal frechet_full(const AlgNet& net, const RkhsSignal& f, const Direction& d);

/// Dℓ(w){d} = −⟨D_F(w){d}, r − F(w)⟩_H
double loss_frechet(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                    const Direction& d);

// ---------------------------------------------------------------------------
// Steepest descent in H
// ---------------------------------------------------------------------------

enum class CgStatus { converged, zero_rhs, max_iterations, breakdown };
std::string to_string(CgStatus s);

struct CgResult {
  Direction direction;
  double residual_norm = 0.0;
  int iterations = 0;
  CgStatus status = CgStatus::converged;
};

/// Conjugate-gradient solve of D_F(w){d} = r − F(w) for a signal d ∈ H,
/// lifted to a Direction by assigning d to every filter block. Over a
/// dataset the operator and right-hand side are summed over samples. The
/// reported residual is recomputed as ‖D_F{d} − (r − F)‖ for the returned d.
CgResult cg_solve_direction(const AlgNet& net, const Dataset& data, const TrainConfig& cfg);
CgResult cg_solve_direction(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                            const TrainConfig& cfg);

/// Σ_l ⟨D_{F_l}(w){d}, r_l − F_l(w)⟩, the slope term of the sufficient-decrease test.
double descent_slope(const AlgNet& net, const Dataset& data, const Direction& d);

/// Backtracking α = ᾱ ρ^m, returning the first α with
///   ℓ(w + αd) ≤ ℓ(w) − c α ⟨D_F(w){d}, r − F(w)⟩,
/// or 0 when 60 reductions do not satisfy it. d is expected to be normalized.
double wolfe_backtrack(const AlgNet& net, const Dataset& data, const Direction& d,
                       const TrainConfig& cfg);
double wolfe_backtrack(const AlgNet& net, const RkhsSignal& f, const RkhsSignal& r,
                       const Direction& d, const TrainConfig& cfg);

enum class StopReason { iterations, optimal, stalled };
std::string to_string(StopReason s);

struct TrainResult {
  AlgNet net;
  /// One entry per iteration.
  std::vector<double> loss_trace;
  double final_loss = 0.0;
  StopReason reason = StopReason::iterations;
};

/// Iterates w ← w + α d with d from the CG solve (normalized, oriented as a
/// descent direction) and α from wolfe_backtrack. The trace holds Σℓ after
/// each accepted step; a stalled line search ends training.
TrainResult steepest_descent_train(const AlgNet& net, const Dataset& data, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Parametric training (amplitudes and centers)
// ---------------------------------------------------------------------------

/// ∇ Σ_l ℓ_l in collect_params order. Amplitude components come from
/// loss_frechet along k_v; center components from central differences with
/// step cfg.fd_step_centers.
std::vector<double> parametric_gradient(const AlgNet& net, const Dataset& data,
                                        const TrainConfig& cfg);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// Reverse-mode evaluation of Σ_l ℓ_l and its gradient in collect_params
/// order. Supports Gaussian and sinc kernels with scalar, unit-interval or
/// planar centers; returns nullopt for other configurations or when two
/// centers of an intermediate signal would be merged by pruning.
std::optional<LossAndGradient> adjoint_gradient(const AlgNet& net, const Dataset& data);

/// Adam on the flat parameter vector for the objective Σ_l ‖r_l − F_l‖²_H.
/// The trace records the objective at the start of each iteration.
TrainResult adam_train(const AlgNet& net, const Dataset& data, const TrainConfig& cfg);

/// Dispatches on cfg.mode.
TrainResult train(const AlgNet& net, const Dataset& data, const TrainConfig& cfg);

}  // namespace rkhs
