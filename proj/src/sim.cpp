#include "bfi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

#include "bfi/rng.hpp"

namespace bfi {

namespace {

double exp_draw(double u, double rate) { return -std::log(u) / rate; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void SimSpec::validate() const {
  if (n < 1) throw DomainError("SimSpec: n must be >= 1");
  if (!std::isfinite(event_rate) || event_rate <= 0.0) {
    throw DomainError("SimSpec: event rate must be > 0");
  }
  std::visit(Overloaded{[](const NoCensoring&) {},
                        [](const AdministrativeCensoring& c) {
                          if (!std::isfinite(c.cutoff) || c.cutoff <= 0.0) {
                            throw DomainError("SimSpec: cutoff must be > 0");
                          }
                        },
                        [](const ExponentialCensoring& c) {
                          if (!std::isfinite(c.rate) || c.rate <= 0.0) {
                            throw DomainError("SimSpec: censoring rate must be > 0");
                          }
                        }},
             censoring);
}

SurvivalDataset simulate_trial(const SimSpec& spec, const UniformSource& uniform) {
  spec.validate();
  std::vector<Observation> obs;
  obs.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double event_time = exp_draw(uniform(), spec.event_rate);
    obs.push_back(std::visit(
        Overloaded{[&](const NoCensoring&) { return Observation(event_time, true); },
                   [&](const AdministrativeCensoring& c) {
                     return event_time > c.cutoff ? Observation(c.cutoff, false)
                                                  : Observation(event_time, true);
                   },
                   [&](const ExponentialCensoring& c) {
                     const double censor_time = exp_draw(uniform(), c.rate);
                     return event_time <= censor_time ? Observation(event_time, true)
                                                      : Observation(censor_time, false);
                   }},
        spec.censoring));
  }
  return SurvivalDataset(std::move(obs));
}

SurvivalDataset simulate_trial(const SimSpec& spec) {
  Xoshiro256StarStar rng(spec.seed);
  return simulate_trial(spec, [&rng] { return rng.uniform_open(); });
}

std::size_t FiHistogram::total() const {
  std::size_t sum = not_applicable + not_attained + errors;
  for (const auto& [fi, count] : by_fi) sum += count;
  return sum;
}

FiHistogram fi_distribution(const SimSpec& spec, const AnalysisConfig& config,
                            std::size_t replications, unsigned threads) {
  if (replications < 1) throw DomainError("fi_distribution: replications must be >= 1");
  spec.validate();
  config.validate();

  // Per-replication outcome: -3 error, -2 not applicable, -1 not attained, else FI.
  std::vector<long long> outcome(replications, -3);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, replications));
  auto run_stride = [&](unsigned offset) {
    for (std::size_t i = offset; i < replications; i += workers) {
      SimSpec rep = spec;
      rep.seed = substream_seed(spec.seed, i);
      const auto cell = evaluate_cell(simulate_trial(rep), config);
      switch (cell.status) {
        case CellStatus::kAttained: outcome[i] = static_cast<long long>(*cell.result->fi); break;
        case CellStatus::kNotAttained: outcome[i] = -1; break;
        case CellStatus::kNotApplicable: outcome[i] = -2; break;
        case CellStatus::kFailed: outcome[i] = -3; break;
      }
    }
  };
  if (workers == 1) {
    run_stride(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_stride, w);
  }

  FiHistogram hist;
  hist.replications = replications;
  for (long long o : outcome) {
    if (o == -3) ++hist.errors;
    else if (o == -2) ++hist.not_applicable;
    else if (o == -1) ++hist.not_attained;
    else ++hist.by_fi[static_cast<std::size_t>(o)];
  }
  return hist;
}

}  // namespace bfi
