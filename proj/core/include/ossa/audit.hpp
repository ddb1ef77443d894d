#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ossa/engine.hpp"
#include "ossa/model.hpp"
#include "ossa/offline.hpp"

namespace ossa {

enum class InvariantKind {
  kTerminalInventory,  // s_i^end <= b_i + c_i
  kCumulativeUpper,    // L_i^t <= gamma_i D_i^t + b_i + c_i
  kCumulativeLower,    // s^end > 0  =>  L_i >= gamma_i D_i
  kPenaltyGap,         // s^end = 0  =>  penalty - penalty(OPT) <= sum p (b_i + c_i)
};

std::string to_string(InvariantKind kind);

struct Violation {
  InvariantKind kind;
  std::int64_t site_id = 0;  // 0 for the aggregate penalty-gap check
  std::size_t t = 0;         // 1-based step, 0 when not step-specific
  double lhs = 0.0;
  double rhs = 0.0;
};

// Structural bounds of a GPA-family trace under the thresholds that produced
// it. Empty when all hold. Comparisons against gamma * D allow 1e-9 relative
// slack for the floating-point product.
std::vector<Violation> audit_invariants(const Trace& trace,
                                        const Instance& instance,
                                        const GammaVector& gamma,
                                        const OfflineSolution& offline);

// sum_i 3 p (b_i + c_i), the additive term of the performance guarantees.
double additive_term(const Instance& instance);

}  // namespace ossa
