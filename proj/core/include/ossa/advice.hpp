#pragma once

// Learning-augmented thresholds. Predictions of the hub supply and of each
// site's total demand are turned into a threshold vector that mimics the
// offline solution's shape (ones, one pivotal fraction, zeros), clipped into
// a band [lower_i, upper_i] whose width is set by the distrust level lambda.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ossa/model.hpp"
#include "ossa/policies.hpp"

namespace ossa {

struct Predictions {
  double s_hat = 0.0;
  std::vector<double> d_hat;  // aligned with the validated site order
  double eta = 0.0;           // |s - s_hat| + sum |D_i - d_hat_i|
};

// |s - s_hat| + sum_i |D_i - d_hat_i|.
double prediction_error(const Instance& instance, double s_hat,
                        const std::vector<double>& d_hat);

// Builds Predictions with eta filled in. Throws ParameterRange on a size
// mismatch or negative values.
Predictions make_predictions_from(const Instance& instance, double s_hat,
                                  std::vector<double> d_hat);

// Exact predictions (eta = 0).
Predictions perfect_predictions(const Instance& instance);

// Random predictions whose realized error is the target. The error budget is
// split across (s, D_1, ..., D_n) by uniform random weights and each share is
// applied with a random sign; a downward share larger than the true value is
// applied upward instead, so predictions stay non-negative and the budget is
// spent exactly.
Predictions make_predictions(const Instance& instance, double target_eta,
                             std::uint64_t seed);

// tau = (sqrt(1 + lambda) - sqrt(lambda))^2 for lambda in (0, 1/3].
double tau_of_lambda(double lambda);

struct PredictedShape {
  std::vector<double> net_demand;  // N-hat
  std::size_t pivotal_index = 0;   // 0-based i-hat*
  double pivotal_value = 1.0;      // zeta-hat
  std::vector<double> gamma;       // unclipped 1 / zeta-hat / 0 pattern
};

// Offline structure computed from the predictions instead of the truth.
PredictedShape predicted_shape(const Instance& instance,
                               const Predictions& predictions);

struct AdviceBands {
  std::vector<double> lower;
  std::vector<double> upper;
};

AdviceBands advice_bands(const Instance& instance, double lambda);

// Thresholds: upper before the predicted pivot, the predicted pivotal value
// clipped into [lower, upper] at the pivot, lower after it.
GammaVector gamma_from_predictions(const Instance& instance,
                                   const Predictions& predictions,
                                   double lambda);

// GPA driven by gamma_from_predictions.
std::unique_ptr<GpaPolicy> la_gpa(const Instance& instance,
                                  const Predictions& predictions,
                                  double lambda);

// {"s_hat": x, "d_hat": [...]} with d_hat in the file's site order, i.e. the
// order of `site_ids_in_file`; reordered to the validated order on load.
Predictions load_predictions_json(const std::string& path,
                                  const Instance& instance,
                                  const std::vector<std::int64_t>& site_ids_in_file);

// {"s_hat": .., "d_hat": {"<site_id>": ..}, "eta": ..}; readable by
// load_predictions_json.
void write_predictions_json(std::ostream& out, const Instance& instance,
                            const Predictions& predictions);

}  // namespace ossa
