#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <variant>

#include "bfi/fragility.hpp"
#include "bfi/survival.hpp"

namespace bfi {

struct NoCensoring {};

/// Follow-up stops at `cutoff`; later event times are censored at the cutoff.
struct AdministrativeCensoring {
  double cutoff = 1.0;
};

/// Independent Exp(rate) censoring times.
struct ExponentialCensoring {
  double rate = 1.0;
};

using CensorMechanism = std::variant<NoCensoring, AdministrativeCensoring, ExponentialCensoring>;

struct SimSpec {
  std::size_t n = 1;
  double event_rate = 1.0;
  CensorMechanism censoring = NoCensoring{};
  std::uint64_t seed = 0;

  void validate() const;
};

/// Source of uniforms on (0, 1).
using UniformSource = std::function<double()>;

/// Draws a dataset from the spec's seed (xoshiro256**). Event times are
/// -ln(U) / event_rate; exponential censoring draws its own uniform right
/// after the event-time uniform for each subject.
SurvivalDataset simulate_trial(const SimSpec& spec);

/// Same draw with an externally supplied uniform stream.
SurvivalDataset simulate_trial(const SimSpec& spec, const UniformSource& uniform);

struct FiHistogram {
  std::size_t replications = 0;
  std::size_t not_applicable = 0;
  std::size_t not_attained = 0;
  std::size_t errors = 0;
  std::map<std::size_t, std::size_t> by_fi;  // attained FI -> count

  std::size_t total() const;
  friend bool operator==(const FiHistogram&, const FiHistogram&) = default;
};

/// Runs fragility_index on `replications` simulated trials. Replication i
/// uses seed substream_seed(spec.seed, i), so the histogram does not depend
/// on `threads`.
FiHistogram fi_distribution(const SimSpec& spec, const AnalysisConfig& config,
                            std::size_t replications, unsigned threads = 1);

}  // namespace bfi
