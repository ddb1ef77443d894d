#pragma once

// Offline optimum. With no holding cost every unit can be shipped at t = 1,
// so the problem reduces to splitting s across the net demands
// N_i = (D_i - b_i)_+ in ascending w/c order. The pivotal site i* is the first
// whose prefix of net demand reaches s; it receives the fraction zeta of its
// net demand, earlier sites are filled and later ones get nothing.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ossa/model.hpp"

namespace ossa {

struct OfflineSolution {
  std::vector<Units> net_demand;  // N_i
  std::size_t pivotal_index = 0;  // 0-based i*
  double pivotal_value = 1.0;     // zeta
  std::vector<Units> allocation;  // L*_i
  std::vector<double> gamma;      // gamma*_i
  // Transport priced fractionally, w L / c. A lower bound on the true optimum.
  double cost_relaxed = 0.0;
  // Transport priced per shipment, w ceil(L / c).
  double cost_rounded = 0.0;
  double penalty = 0.0;  // p * sum (N_i - L*_i), shared by both variants
  bool surplus = false;  // s >= sum N
};

OfflineSolution solve_offline(const Instance& instance);

// Shorthand for solve_offline(instance).cost_relaxed.
double relaxed_lower_bound(const Instance& instance);

// Relaxed objective sum_i w_i L_i / c_i + p (N_i - L_i) of any allocation.
double relaxed_cost(const Instance& instance, const std::vector<Units>& net,
                    const std::vector<Units>& allocation);

struct BruteForceResult {
  std::vector<Units> allocation;
  double cost_relaxed = 0.0;
  std::uint64_t candidates = 0;
};

// Exhaustive search over integer splits with L_i <= N_i and sum L <= s.
// Throws EnumerationBudgetExceeded when the candidate grid is larger than
// `max_candidates`.
BruteForceResult brute_force_offline(const Instance& instance,
                                     std::uint64_t max_candidates = 1'000'000);

void write_offline_json(std::ostream& out, const Instance& instance,
                        const OfflineSolution& solution);

}  // namespace ossa
