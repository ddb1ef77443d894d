#include "ossa/advice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ossa/error.hpp"

namespace ossa {

double prediction_error(const Instance& instance, double s_hat,
                        const std::vector<double>& d_hat) {
  double eta = std::abs(static_cast<double>(instance.supply()) - s_hat);
  for (std::size_t i = 0; i < instance.num_sites(); ++i) {
    eta += std::abs(static_cast<double>(instance.total_demand(i)) - d_hat[i]);
  }
  return eta;
}

Predictions make_predictions_from(const Instance& instance, double s_hat,
                                  std::vector<double> d_hat) {
  if (d_hat.size() != instance.num_sites()) {
    throw Error(ErrorCode::kParameterRange,
                "expected " + std::to_string(instance.num_sites()) +
                    " demand predictions, got " + std::to_string(d_hat.size()));
  }
  if (!(s_hat >= 0.0) ||
      std::any_of(d_hat.begin(), d_hat.end(), [](double v) { return !(v >= 0.0); })) {
    throw Error(ErrorCode::kParameterRange, "predictions must be non-negative");
  }
  Predictions out;
  out.s_hat = s_hat;
  out.d_hat = std::move(d_hat);
  out.eta = prediction_error(instance, out.s_hat, out.d_hat);
  return out;
}

Predictions perfect_predictions(const Instance& instance) {
  std::vector<double> d_hat;
  for (std::size_t i = 0; i < instance.num_sites(); ++i) {
    d_hat.push_back(static_cast<double>(instance.total_demand(i)));
  }
  return make_predictions_from(instance, static_cast<double>(instance.supply()),
                               std::move(d_hat));
}

Predictions make_predictions(const Instance& instance, double target_eta,
                             std::uint64_t seed) {
  if (!(target_eta >= 0.0) || !std::isfinite(target_eta)) {
    throw Error(ErrorCode::kParameterRange, "target eta must be >= 0");
  }
  const std::size_t n = instance.num_sites();
  std::vector<double> truth;
  truth.reserve(n + 1);
  truth.push_back(static_cast<double>(instance.supply()));
  for (std::size_t i = 0; i < n; ++i) {
    truth.push_back(static_cast<double>(instance.total_demand(i)));
  }
  if (target_eta == 0.0) {
    return perfect_predictions(instance);
  }

  std::mt19937_64 rng(seed);
  std::vector<double> weight(truth.size());
  std::vector<bool> downward(truth.size());
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    weight[j] = 1.0 - uniform01(rng);  // (0, 1]
    downward[j] = uniform01(rng) < 0.5;
    weight_sum += weight[j];
  }
  std::vector<double> predicted(truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const double share = target_eta * weight[j] / weight_sum;
    const bool down = downward[j] && share <= truth[j];
    predicted[j] = down ? truth[j] - share : truth[j] + share;
  }
  std::vector<double> d_hat(predicted.begin() + 1, predicted.end());
  return make_predictions_from(instance, predicted[0], std::move(d_hat));
}

double tau_of_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0 / 3.0)) {
    throw Error(ErrorCode::kLambdaOutOfRange,
                "lambda = " + std::to_string(lambda) + " outside (0, 1/3]");
  }
  const double root = std::sqrt(1.0 + lambda) - std::sqrt(lambda);
  return root * root;
}

PredictedShape predicted_shape(const Instance& instance,
                               const Predictions& predictions) {
  const std::size_t n = instance.num_sites();
  PredictedShape shape;
  shape.net_demand.resize(n);
  shape.gamma.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    shape.net_demand[i] = std::max(
        0.0, predictions.d_hat[i] - static_cast<double>(instance.site(i).b));
    total += shape.net_demand[i];
  }
  if (n == 0) return shape;

  if (predictions.s_hat >= total) {
    shape.pivotal_index = n - 1;
    shape.pivotal_value = 1.0;
  } else {
    double prefix = 0.0;
    std::size_t pivot = 0;
    while (pivot + 1 < n && prefix + shape.net_demand[pivot] < predictions.s_hat) {
      prefix += shape.net_demand[pivot];
      ++pivot;
    }
    shape.pivotal_index = pivot;
    const double pivot_net = shape.net_demand[pivot];
    // A zero pivotal net demand only happens at i = 1 with s_hat = 0.
    shape.pivotal_value =
        pivot_net > 0.0
            ? std::min(1.0, std::max(0.0, predictions.s_hat - prefix) / pivot_net)
            : 1.0;
  }
  for (std::size_t i = 0; i < shape.pivotal_index; ++i) shape.gamma[i] = 1.0;
  shape.gamma[shape.pivotal_index] = shape.pivotal_value;
  return shape;
}

AdviceBands advice_bands(const Instance& instance, double lambda) {
  const double tau = tau_of_lambda(lambda);
  AdviceBands bands;
  for (const SiteSpec& site : instance.sites()) {
    bands.lower.push_back(capped_band(lambda, instance.penalty(), site));
    bands.upper.push_back(capped_band(tau, instance.penalty(), site));
  }
  return bands;
}

GammaVector gamma_from_predictions(const Instance& instance,
                                   const Predictions& predictions,
                                   double lambda) {
  const AdviceBands bands = advice_bands(instance, lambda);
  if (predictions.d_hat.size() != instance.num_sites()) {
    throw Error(ErrorCode::kParameterRange,
                "prediction count does not match site count");
  }
  const PredictedShape shape = predicted_shape(instance, predictions);
  GammaVector out;
  out.gamma.resize(instance.num_sites());
  for (std::size_t i = 0; i < instance.num_sites(); ++i) {
    if (i < shape.pivotal_index) {
      out.gamma[i] = bands.upper[i];
    } else if (i == shape.pivotal_index) {
      out.gamma[i] = std::min(bands.upper[i],
                              std::max(shape.pivotal_value, bands.lower[i]));
    } else {
      out.gamma[i] = bands.lower[i];
    }
  }
  return out;
}

std::unique_ptr<GpaPolicy> la_gpa(const Instance& instance,
                                  const Predictions& predictions,
                                  double lambda) {
  return std::make_unique<GpaPolicy>(
      gamma_from_predictions(instance, predictions, lambda), "la-gpa");
}

Predictions load_predictions_json(
    const std::string& path, const Instance& instance,
    const std::vector<std::int64_t>& site_ids_in_file) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, path + ": " + e.what());
  }
  if (!doc.contains("s_hat") || !doc.contains("d_hat")) {
    throw Error(ErrorCode::kMalformedInput, path + ": needs s_hat and d_hat");
  }
  std::map<std::int64_t, double> by_id;
  double s_hat = 0.0;
  try {
    s_hat = doc.at("s_hat").get<double>();
    const auto& d_hat = doc.at("d_hat");
    if (d_hat.is_array()) {
      if (d_hat.size() != site_ids_in_file.size()) {
        throw Error(ErrorCode::kMalformedInput,
                    path + ": d_hat length does not match the site list");
      }
      for (std::size_t j = 0; j < d_hat.size(); ++j) {
        by_id[site_ids_in_file[j]] = d_hat[j].get<double>();
      }
    } else if (d_hat.is_object()) {
      for (const auto& [key, value] : d_hat.items()) {
        by_id[std::stoll(key)] = value.get<double>();
      }
    } else {
      throw Error(ErrorCode::kMalformedInput, path + ": d_hat must be a list");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, path + ": " + e.what());
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kMalformedInput, path + ": bad site id in d_hat");
  }
  std::vector<double> ordered;
  for (const SiteSpec& site : instance.sites()) {
    auto it = by_id.find(site.site_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMalformedInput,
                  path + ": no prediction for site " +
                      std::to_string(site.site_id));
    }
    ordered.push_back(it->second);
  }
  return make_predictions_from(instance, s_hat, std::move(ordered));
}

void write_predictions_json(std::ostream& out, const Instance& instance,
                            const Predictions& predictions) {
  nlohmann::ordered_json doc;
  doc["s_hat"] = predictions.s_hat;
  nlohmann::ordered_json d_hat = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < instance.num_sites(); ++i) {
    d_hat[std::to_string(instance.site(i).site_id)] = predictions.d_hat[i];
  }
  doc["d_hat"] = std::move(d_hat);
  doc["eta"] = predictions.eta;
  out << doc.dump(2) << '\n';
}

}  // namespace ossa
