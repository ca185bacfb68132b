#pragma once

#include "ors/nn/mlp.hpp"

namespace ors::nn {

/// Slowly tracking shadow of a network (Polyak averaging).
struct TargetCopy {
  Mlp shadow;
  double rate = 0.005;

  static TargetCopy of(const Mlp& source, double rate) { return {source, rate}; }
};

/// shadow <- (1 - rate) * shadow + rate * source. Rate must lie in (0, 1];
/// rate 1 copies the source bit for bit.
void polyak_update(TargetCopy& target, const Mlp& source, double rate);
inline void polyak_update(TargetCopy& target, const Mlp& source) { polyak_update(target, source, target.rate); }

}  // namespace ors::nn
