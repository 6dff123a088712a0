#include "ici/presets.h"

#include "ici/errors.h"

namespace ici::presets {

namespace {

Matrix a1() { return (Matrix(2, 2) << -2.1, -2.0, 0.5, 1.0).finished(); }
Matrix a2() { return (Matrix(2, 2) << 1.0, 2.0, 0.1, -2.0).finished(); }

}  // namespace

SwitchedSystem example1() {
  return SwitchedSystem({SubSystem(a1(), Vector{{-2.0, 1.0}}),
                         SubSystem(a2(), Vector{{2.0, -2.0}})});
}

SwitchedSystem example2() {
  return SwitchedSystem({SubSystem(a1(), Vector{{-2.0, 1.0}}),
                         SubSystem(a2(), Vector{{2.0, 2.0}})});
}

SwitchedSystem example(int id) {
  switch (id) {
    case 1:
      return example1();
    case 2:
      return example2();
    default:
      throw InvalidArgument("unknown example " + std::to_string(id) + " (expected 1 or 2)");
  }
}

}  // namespace ici::presets
