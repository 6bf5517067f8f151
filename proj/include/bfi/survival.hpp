#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bfi/specfun.hpp"

namespace bfi {

/// One subject's follow-up: time > 0 and event = true when the event was
/// observed, false when right-censored.
class Observation {
 public:
  Observation(double time, bool event);

  double time() const noexcept { return time_; }
  bool event() const noexcept { return event_; }
  bool censored() const noexcept { return !event_; }

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  double time_;
  bool event_;
};

/// Non-empty, immutable list of observations in input order. All times share
/// one unit, carried as a label and never converted.
class SurvivalDataset {
 public:
  explicit SurvivalDataset(std::vector<Observation> observations, std::string time_unit = "months");

  std::span<const Observation> observations() const noexcept { return observations_; }
  const Observation& operator[](std::size_t i) const { return observations_.at(i); }
  std::size_t size() const noexcept { return observations_.size(); }
  const std::string& time_unit() const noexcept { return time_unit_; }

  std::size_t num_events() const noexcept { return num_events_; }
  std::size_t num_censored() const noexcept { return size() - num_events_; }
  /// Correctly rounded sum of all times; independent of observation order.
  double total_time() const noexcept { return total_time_; }

  friend bool operator==(const SurvivalDataset& a, const SurvivalDataset& b) {
    return a.observations_ == b.observations_;
  }

 private:
  std::vector<Observation> observations_;
  std::string time_unit_;
  std::size_t num_events_ = 0;
  double total_time_ = 0.0;
};

/// Gamma(shape, rate) with density rate^shape x^(shape-1) e^(-rate x) / Gamma(shape).
class GammaParams {
 public:
  GammaParams(double shape, double rate);

  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }

  /// ln of the density at lambda > 0.
  double log_density(double lambda) const;

  friend bool operator==(const GammaParams&, const GammaParams&) = default;

 private:
  double shape_;
  double rate_;
};

struct AnalysisConfig {
  GammaParams prior{0.5, 0.5};
  double t0 = 1.0;  // median-survival threshold, same unit as the data
  double p0 = 0.7;
  SpecFunConfig specfun{};

  void validate() const;
};

/// (sum of events) ln(rate) - rate * (sum of times): the censored
/// exponential log-likelihood.
double log_likelihood(const SurvivalDataset& data, double rate);

/// Conjugate update: Gamma(shape + events, rate + total time).
GammaParams posterior_update(const GammaParams& prior, const SurvivalDataset& data);

/// e^(-rate t).
double exp_survival(double rate, double t);

/// Constant hazard of the exponential model. Validates and returns rate.
double exp_hazard(double rate);

/// ln 2 / rate.
double median_from_rate(double rate);

/// P(median > t0) = P(lambda < ln 2 / t0) under the given Gamma posterior.
double posterior_prob_median_exceeds(const GammaParams& posterior, double t0,
                                     const SpecFunConfig& cfg = {});

}  // namespace bfi
