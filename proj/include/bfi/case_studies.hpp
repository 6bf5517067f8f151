#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bfi/fragility.hpp"

namespace bfi {

/// Summary counts and reported results of a published single-arm analysis.
/// Per-patient times are not available, only the event/censor counts and the
/// reported k = 0 exceedance probability.
struct CaseStudy {
  std::string name;
  std::size_t events = 0;
  std::size_t censored = 0;
  double t0 = 0.0;
  double reported_prob = 0.0;
  std::size_t reported_fi = 0;
};

/// Lung cancer (t0 = 7), pembrolizumab HCC (t0 = 3.5), palbociclib MBC (t0 = 15).
std::vector<CaseStudy> published_case_studies();

struct CaseReproduction {
  CaseStudy study;
  AnalysisConfig config;
  double calibrated_rate = 0.0;  // posterior rate matching reported_prob
  SurvivalDataset dataset;
  FragilityResult result;

  bool matches() const noexcept { return result.fi && *result.fi == study.reported_fi; }
};

/// Dataset with the study's event/censor counts whose total time is
/// (calibrated_rate - prior rate). Events come first, then censored subjects;
/// times are proportional to 1, 2, ..., n.
SurvivalDataset reconstruct_dataset(std::size_t events, std::size_t censored, double total_time);

/// Calibrates the posterior rate to the reported probability, rebuilds a
/// dataset with the same sufficient statistics and runs fragility_index.
/// `base` supplies prior, p0 and numerics; its t0 is replaced by the study's.
CaseReproduction reproduce_case(const CaseStudy& study, const AnalysisConfig& base);

}  // namespace bfi
