#include "bfi/case_studies.hpp"

namespace bfi {

std::vector<CaseStudy> published_case_studies() {
  return {
      {"lung-cancer", 22, 8, 7.0, 0.935, 5},
      {"pembrolizumab-hcc", 20, 8, 3.5, 0.958, 6},
      {"palbociclib-mbc", 31, 20, 15.0, 0.948, 6},
  };
}

SurvivalDataset reconstruct_dataset(std::size_t events, std::size_t censored, double total_time) {
  const std::size_t n = events + censored;
  if (n == 0) throw DomainError("reconstruct_dataset: need at least one subject");
  if (!(total_time > 0.0)) throw DomainError("reconstruct_dataset: total time must be > 0");
  const double unit = total_time / (0.5 * static_cast<double>(n) * static_cast<double>(n + 1));
  std::vector<Observation> obs;
  obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs.emplace_back(unit * static_cast<double>(i + 1), i < events);
  }
  return SurvivalDataset(std::move(obs));
}

CaseReproduction reproduce_case(const CaseStudy& study, const AnalysisConfig& base) {
  AnalysisConfig config = base;
  config.t0 = study.t0;
  config.validate();

  const double shape = config.prior.shape() + static_cast<double>(study.events);
  const double rate = calibrate(shape, study.reported_prob, study.t0, config.specfun);
  auto dataset = reconstruct_dataset(study.events, study.censored, rate - config.prior.rate());
  auto result = fragility_index(dataset, config);
  return {study, config, rate, std::move(dataset), std::move(result)};
}

}  // namespace bfi
