#pragma once

#include "ossa/model.hpp"

namespace fixtures {

// Two unit-capacity sites, p = 1, s = 3, T = 3.
inline ossa::RawInstance instance_e_raw() {
  ossa::RawInstance raw;
  raw.p = 1.0;
  raw.s = 3;
  raw.sites = {{1, 0.1, 1, 1}, {2, 0.5, 1, 1}};
  raw.demand = {{1, 1, 1}, {1, 1, 0}};
  return raw;
}

inline ossa::Instance instance_e() { return ossa::validate(instance_e_raw()); }

}  // namespace fixtures
