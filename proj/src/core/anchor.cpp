#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"
#include "dca/random.hpp"

namespace dca::core {

AnchorData generate_anchor(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("generate_anchor: need r >= 1 and m >= 1, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  Rng rng(seed);
  return {rng.normal_matrix(rows, cols), seed};
}

}  // namespace dca::core
