#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfi/survival.hpp"

namespace bfi {

/// Exact fraction in lowest terms.
struct Quotient {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const Quotient&, const Quotient&) = default;
};

struct TrajectoryPoint {
  std::size_t k = 0;  // censored observations reclassified as events
  double prob = 0.0;  // posterior P(median > t0) after k reclassifications

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// Outcome of a fragility search. `fi` is empty when every censored
/// observation was reclassified without the probability dropping below p0
/// (reported as "FI > censored_count").
struct FragilityResult {
  std::optional<std::size_t> fi;
  std::vector<TrajectoryPoint> trajectory;
  double initial_prob = 0.0;
  std::optional<Quotient> fq;
  GammaParams posterior{1.0, 1.0};  // at k = 0
  std::size_t sample_size = 0;
  std::size_t censored_count = 0;
  /// Input indices of the reclassified observations, in reclassification order.
  std::vector<std::size_t> flipped;
  AnalysisConfig config;

  bool attained() const noexcept { return fi.has_value(); }
};

/// Indices of censored observations ordered by time, ties by input position.
std::vector<std::size_t> shortest_censored_order(const SurvivalDataset& data);

/// Copy of `data` with the observations at `indices` marked as events. Times
/// are kept. Throws DomainError if an index is out of range or not censored.
SurvivalDataset reclassify_as_events(const SurvivalDataset& data,
                                     std::span<const std::size_t> indices);

/// Smallest k such that reclassifying the k shortest censored observations as
/// events drops P(median > t0) strictly below p0.
///
/// Each step rebuilds the modified dataset and reruns the conjugate update.
/// Throws NotFragileApplicable when the k = 0 probability is not strictly
/// above p0.
FragilityResult fragility_index(const SurvivalDataset& data, const AnalysisConfig& config);

/// fi / n in lowest terms. Requires 1 <= fi <= n.
Quotient fragility_quotient(std::int64_t fi, std::int64_t n);

/// Probabilities after reclassifying the k shortest censored observations,
/// k = 0..k_max. Throws std::out_of_range if k_max exceeds the censored count.
std::vector<TrajectoryPoint> fi_trajectory(const SurvivalDataset& data,
                                           const AnalysisConfig& config, std::size_t k_max);

/// Posterior rate at which P(shape, rate ln2 / t0) equals target_prob.
/// Brackets on [1e-12, B] with B doubling from 1, then bisects ln(rate) to a
/// bracket width of 1e-12.
double calibrate(double shape, double target_prob, double t0, const SpecFunConfig& cfg = {});

// ---------------------------------------------------------------------------
// Sensitivity grids

struct SensitivityAxes {
  std::vector<double> prior_shape;
  std::vector<double> prior_rate;
  std::vector<double> t0;
  std::vector<double> p0;
};

enum class CellStatus { kAttained, kNotAttained, kNotApplicable, kFailed };

std::string to_string(CellStatus status);

struct SensitivityCell {
  AnalysisConfig config;
  CellStatus status = CellStatus::kFailed;
  std::optional<FragilityResult> result;  // set for kAttained and kNotAttained
  double initial_prob = 0.0;              // NaN when the computation failed
  std::string message;                    // error text for kNotApplicable / kFailed
};

/// Grid points in row-major order over (prior_shape, prior_rate, t0, p0); an
/// empty axis takes the base value.
struct SensitivityGrid {
  SensitivityAxes axes;
  std::vector<SensitivityCell> cells;
};

/// Runs fragility_index over the Cartesian product of the axes. Per-cell
/// failures are recorded in the cell. `threads` > 1 splits cells across
/// worker threads; results are identical for every thread count.
SensitivityGrid sensitivity_scan(const SurvivalDataset& data, const AnalysisConfig& base,
                                 const SensitivityAxes& axes, unsigned threads = 1);

/// fragility_index that reports inapplicability and numerical failure in the
/// cell instead of throwing.
SensitivityCell evaluate_cell(const SurvivalDataset& data, const AnalysisConfig& config);

}  // namespace bfi
