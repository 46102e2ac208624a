#pragma once

#include "rkhs/signal.hpp"

namespace rkhs {

/// Coefficient-wise ReLU on the kernel expansion of g:
///   η(g) = Σ_{v∈V} [σ(g(v)) / Σ_{r∈V} K(r,v)] k_v,  σ(x) = max(0, x),
/// where V is g's stored center set. The output keeps exactly g's centers.
/// Throws DegeneracyError if some normalizer Σ_r K(r,v) is not positive.
RkhsSignal apply_eta(const RkhsSignal& g);

/// Fréchet derivative of η at w in direction d. Both are zero-padded onto the
/// union U of their center sets; the result lives on U:
///   Dη(w){d} = Σ_{u∈U} [σ'(w(u)) d(u) / Σ_{r∈U} K(r,u)] k_u,
/// with σ'(x) = 1 for x > 0 and 0 otherwise.
RkhsSignal eta_frechet(const RkhsSignal& w, const RkhsSignal& d);

}  // namespace rkhs
