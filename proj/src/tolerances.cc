#include "ici/tolerances.h"

namespace ici {

bool Tolerances::set(std::string_view name, double value) {
  if (name == "equilibrium") {
    equilibrium = value;
  } else if (name == "cycle") {
    cycle = value;
  } else if (name == "refine") {
    refine = value;
  } else if (name == "divergence_guard") {
    divergence_guard = value;
  } else if (name == "pivot") {
    pivot = value;
  } else if (name == "qr_sweeps_per_row") {
    qr_sweeps_per_row = value;
  } else {
    return false;
  }
  return true;
}

}  // namespace ici
