#pragma once

// The two bundled demonstration systems. Both share the state matrices
//   A1 = [[-2.1, -2], [0.5, 1]],  A2 = [[1, 2], [0.1, -2]],
// neither of which is stable on its own while their midpoint is.

#include "ici/model.h"

namespace ici::presets {

/// A1, A2 with b1 = (-2, 1), b2 = (2, -2): common equilibrium (0, -1).
SwitchedSystem example1();

/// A1, A2 with b1 = (-2, 1), b2 = (2, 2): no common equilibrium; the
/// average system settles at (0, 3).
SwitchedSystem example2();

/// By id (1 or 2). Throws InvalidArgument otherwise.
SwitchedSystem example(int id);

}  // namespace ici::presets
