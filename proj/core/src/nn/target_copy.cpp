#include "ors/nn/target_copy.hpp"

#include <stdexcept>

#include "ors/common/error.hpp"

namespace ors::nn {

void polyak_update(TargetCopy& target, const Mlp& source, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("polyak_update: rate must lie in (0, 1]");
  if (!target.shadow.same_shape(source)) throw ShapeError("polyak_update: target and source shapes differ");
  if (rate == 1.0) {
    target.shadow.params() = source.params();
    return;
  }
  target.shadow.params() = (1.0 - rate) * target.shadow.params() + rate * source.params();
}

}  // namespace ors::nn
