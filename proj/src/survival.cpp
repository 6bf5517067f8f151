#include "bfi/survival.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace bfi {

namespace {

void require_positive_rate(double rate, const char* where) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw DomainError(std::string(where) + ": rate must be finite and > 0");
  }
}

// Correctly rounded sum (Shewchuk's partials, as in Python's math.fsum).
// The result does not depend on summation order.
double exact_sum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t used = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  // Round-half-even correction from the top partials.
  if (partials.empty()) return 0.0;
  auto n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace

Observation::Observation(double time, bool event) : time_(time), event_(event) {
  if (!std::isfinite(time) || time <= 0.0) {
    throw DomainError("Observation: time must be finite and > 0");
  }
}

SurvivalDataset::SurvivalDataset(std::vector<Observation> observations, std::string time_unit)
    : observations_(std::move(observations)), time_unit_(std::move(time_unit)) {
  if (observations_.empty()) throw DomainError("SurvivalDataset: at least one observation required");
  std::vector<double> times;
  times.reserve(observations_.size());
  for (const auto& obs : observations_) {
    num_events_ += obs.event() ? 1 : 0;
    times.push_back(obs.time());
  }
  total_time_ = exact_sum(times);
  if (!std::isfinite(total_time_)) throw DomainError("SurvivalDataset: total time overflows");
}

GammaParams::GammaParams(double shape, double rate) : shape_(shape), rate_(rate) {
  if (!std::isfinite(shape) || shape <= 0.0 || !std::isfinite(rate) || rate <= 0.0) {
    throw DomainError("GammaParams: shape and rate must be finite and > 0");
  }
}

double GammaParams::log_density(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("GammaParams::log_density: lambda must be > 0");
  return shape_ * std::log(rate_) - log_gamma(shape_) + (shape_ - 1.0) * std::log(lambda) -
         rate_ * lambda;
}

void AnalysisConfig::validate() const {
  if (!std::isfinite(t0) || t0 <= 0.0) throw DomainError("AnalysisConfig: t0 must be > 0");
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("AnalysisConfig: p0 must lie in (0, 1)");
  specfun.validate();
}

double log_likelihood(const SurvivalDataset& data, double rate) {
  require_positive_rate(rate, "log_likelihood");
  return static_cast<double>(data.num_events()) * std::log(rate) - rate * data.total_time();
}

GammaParams posterior_update(const GammaParams& prior, const SurvivalDataset& data) {
  return {prior.shape() + static_cast<double>(data.num_events()), prior.rate() + data.total_time()};
}

double exp_survival(double rate, double t) {
  require_positive_rate(rate, "exp_survival");
  if (!(t >= 0.0)) throw DomainError("exp_survival: t must be >= 0");
  return std::exp(-rate * t);
}

double exp_hazard(double rate) {
  require_positive_rate(rate, "exp_hazard");
  return rate;
}

double median_from_rate(double rate) {
  require_positive_rate(rate, "median_from_rate");
  return std::numbers::ln2 / rate;
}

double posterior_prob_median_exceeds(const GammaParams& posterior, double t0,
                                     const SpecFunConfig& cfg) {
  if (!std::isfinite(t0) || t0 <= 0.0) {
    throw DomainError("posterior_prob_median_exceeds: t0 must be finite and > 0");
  }
  return reg_lower_inc_gamma(posterior.shape(), posterior.rate() * std::numbers::ln2 / t0, cfg);
}

}  // namespace bfi
