#pragma once

#include "amortize/core/types.hpp"

namespace amortize::sim {

/// Two nozzle paths that lay the same fiber.
///
/// `straight` runs along +x at uniform spacing. `toothed` follows the same
/// line but, every `period` steps, backs into the disk of radius `lag` around
/// the trailing fiber end and returns. All segments of both paths have length
/// `spacing`, so resampling leaves them unchanged. The fiber stalls during
/// every tooth, so both realizations trace the same points.
struct WitnessPair {
  Points straight;
  Points toothed;
};

WitnessPair toothed_witness(int forward_steps, double spacing, double lag, int period = 2, int depth = 4);

}  // namespace amortize::sim
