#include "bfi/fragility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace bfi {

std::vector<std::size_t> shortest_censored_order(const SurvivalDataset& data) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].censored()) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data[a].time() < data[b].time(); });
  return order;
}

SurvivalDataset reclassify_as_events(const SurvivalDataset& data,
                                     std::span<const std::size_t> indices) {
  std::vector<Observation> obs(data.observations().begin(), data.observations().end());
  for (std::size_t i : indices) {
    if (i >= obs.size()) throw DomainError("reclassify_as_events: index out of range");
    if (!obs[i].censored()) throw DomainError("reclassify_as_events: observation is not censored");
    obs[i] = Observation(obs[i].time(), true);
  }
  return SurvivalDataset(std::move(obs), data.time_unit());
}

namespace {

// Probability after reclassifying the first k entries of `order`.
double prob_after(const SurvivalDataset& data, const AnalysisConfig& config,
                  std::span<const std::size_t> order, std::size_t k) {
  const auto modified = reclassify_as_events(data, order.first(k));
  const auto posterior = posterior_update(config.prior, modified);
  return posterior_prob_median_exceeds(posterior, config.t0, config.specfun);
}

}  // namespace

std::vector<TrajectoryPoint> fi_trajectory(const SurvivalDataset& data,
                                           const AnalysisConfig& config, std::size_t k_max) {
  config.validate();
  const auto order = shortest_censored_order(data);
  if (k_max > order.size()) {
    throw std::out_of_range("fi_trajectory: k_max " + std::to_string(k_max) +
                            " exceeds censored count " + std::to_string(order.size()));
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) out.push_back({k, prob_after(data, config, order, k)});
  return out;
}

FragilityResult fragility_index(const SurvivalDataset& data, const AnalysisConfig& config) {
  config.validate();
  const auto order = shortest_censored_order(data);

  FragilityResult result;
  result.config = config;
  result.sample_size = data.size();
  result.censored_count = order.size();
  result.posterior = posterior_update(config.prior, data);
  result.initial_prob = posterior_prob_median_exceeds(result.posterior, config.t0, config.specfun);
  if (!(result.initial_prob > config.p0)) throw NotFragileApplicable(result.initial_prob, config.p0);

  result.trajectory.push_back({0, result.initial_prob});
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const double prob = prob_after(data, config, order, k);
    result.trajectory.push_back({k, prob});
    result.flipped.push_back(order[k - 1]);
    if (prob < config.p0) {
      result.fi = k;
      result.fq = fragility_quotient(static_cast<std::int64_t>(k),
                                     static_cast<std::int64_t>(data.size()));
      break;
    }
  }
  return result;
}

Quotient fragility_quotient(std::int64_t fi, std::int64_t n) {
  if (fi < 1 || n < 1 || fi > n) throw DomainError("fragility_quotient: require 1 <= fi <= n");
  const auto g = std::gcd(fi, n);
  return {fi / g, n / g};
}

double calibrate(double shape, double target_prob, double t0, const SpecFunConfig& cfg) {
  if (!(target_prob > 0.0 && target_prob < 1.0)) {
    throw DomainError("calibrate: target probability must lie in (0, 1)");
  }
  if (!std::isfinite(t0) || t0 <= 0.0) throw DomainError("calibrate: t0 must be > 0");
  if (!std::isfinite(shape) || shape <= 0.0) throw DomainError("calibrate: shape must be > 0");

  const double scale = std::numbers::ln2 / t0;
  auto excess = [&](double rate) { return reg_lower_inc_gamma(shape, rate * scale, cfg) - target_prob; };

  constexpr double lo = 1e-12;
  constexpr int kMaxDoublings = 1024;
  if (excess(lo) >= 0.0) throw BracketError("calibrate: target below P at the lower bracket end");
  double hi = 1.0;
  int doublings = 0;
  while (excess(hi) < 0.0) {
    if (++doublings > kMaxDoublings || !std::isfinite(hi * 2.0)) {
      throw BracketError("calibrate: upper bracket did not reach the target");
    }
    hi *= 2.0;
  }
  // Bisect on ln(rate) so the 1e-12 bracket tolerance is relative to the rate.
  const double log_rate = bisect_root([&](double r) { return excess(std::exp(r)); }, std::log(lo),
                                      std::log(hi), 1e-12, 2000);
  return std::exp(log_rate);
}

std::string to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kAttained: return "attained";
    case CellStatus::kNotAttained: return "not_attained";
    case CellStatus::kNotApplicable: return "not_applicable";
    case CellStatus::kFailed: return "numerical_failure";
  }
  return "unknown";
}

SensitivityCell evaluate_cell(const SurvivalDataset& data, const AnalysisConfig& config) {
  SensitivityCell cell;
  cell.config = config;
  try {
    auto result = fragility_index(data, config);
    cell.status = result.attained() ? CellStatus::kAttained : CellStatus::kNotAttained;
    cell.initial_prob = result.initial_prob;
    cell.result = std::move(result);
  } catch (const NotFragileApplicable& e) {
    cell.status = CellStatus::kNotApplicable;
    cell.initial_prob = e.initial_prob();
    cell.message = e.what();
  } catch (const std::exception& e) {
    cell.status = CellStatus::kFailed;
    cell.initial_prob = std::numeric_limits<double>::quiet_NaN();
    cell.message = e.what();
  }
  return cell;
}

SensitivityGrid sensitivity_scan(const SurvivalDataset& data, const AnalysisConfig& base,
                                 const SensitivityAxes& axes, unsigned threads) {
  auto or_base = [](const std::vector<double>& axis, double value) {
    return axis.empty() ? std::vector<double>{value} : axis;
  };
  const auto shapes = or_base(axes.prior_shape, base.prior.shape());
  const auto rates = or_base(axes.prior_rate, base.prior.rate());
  const auto t0s = or_base(axes.t0, base.t0);
  const auto p0s = or_base(axes.p0, base.p0);

  std::vector<AnalysisConfig> configs;
  configs.reserve(shapes.size() * rates.size() * t0s.size() * p0s.size());
  for (double shape : shapes) {
    for (double rate : rates) {
      for (double t0 : t0s) {
        for (double p0 : p0s) {
          AnalysisConfig cfg = base;
          cfg.prior = GammaParams(shape, rate);
          cfg.t0 = t0;
          cfg.p0 = p0;
          cfg.validate();
          configs.push_back(cfg);
        }
      }
    }
  }

  SensitivityGrid grid{axes, std::vector<SensitivityCell>(configs.size())};
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, configs.size()));
  auto run_stride = [&](unsigned offset) {
    for (std::size_t i = offset; i < configs.size(); i += workers) {
      grid.cells[i] = evaluate_cell(data, configs[i]);
    }
  };
  if (workers == 1) {
    run_stride(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_stride, w);
  }
  return grid;
}

}  // namespace bfi
