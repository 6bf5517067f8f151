#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bfi/survival.hpp"

namespace bfi {

template <typename Scalar>
struct KMStep {
  double time = 0.0;
  Scalar survival{1};  // S(t) at and just after `time`
  std::size_t at_risk = 0;
  std::size_t events = 0;
};

/// Product-limit estimate. One step per distinct event time; censoring times
/// (one entry per censored subject, ascending) are kept as marks.
template <typename Scalar = double>
struct KMCurve {
  std::vector<KMStep<Scalar>> steps;
  std::vector<double> censor_marks;
  double last_time = 0.0;  // largest observed time, event or censored

  /// Right-continuous S(t).
  Scalar survival_at(double t) const {
    Scalar s{1};
    for (const auto& step : steps) {
      if (step.time > t) break;
      s = step.survival;
    }
    return s;
  }
};

/// S(t) = prod over event times t_i <= t of (1 - d_i / n_i). At tied times,
/// events are counted before censorings, so censored subjects at an event
/// time are still in that time's risk set.
template <typename Scalar = double>
KMCurve<Scalar> km_estimate(const SurvivalDataset& data) {
  const auto obs = data.observations();
  std::vector<std::size_t> idx(obs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (obs[a].time() != obs[b].time()) return obs[a].time() < obs[b].time();
    return obs[a].event() && !obs[b].event();
  });

  KMCurve<Scalar> curve;
  curve.last_time = obs[idx.back()].time();
  std::size_t at_risk = obs.size();
  Scalar survival{1};
  for (std::size_t i = 0; i < idx.size();) {
    const double t = obs[idx[i]].time();
    std::size_t events = 0;
    std::size_t censored = 0;
    for (; i < idx.size() && obs[idx[i]].time() == t; ++i) {
      if (obs[idx[i]].event()) {
        ++events;
      } else {
        ++censored;
        curve.censor_marks.push_back(t);
      }
    }
    if (events > 0) {
      survival = survival * (Scalar(at_risk - events) / Scalar(at_risk));
      curve.steps.push_back({t, survival, at_risk, events});
    }
    at_risk -= events + censored;
  }
  return curve;
}

template <typename Scalar>
struct PlotPoint {
  double x = 0.0;
  Scalar y{1};

  friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

template <typename Scalar>
struct KMPlot {
  std::vector<PlotPoint<Scalar>> staircase;
  std::vector<PlotPoint<Scalar>> censor_ticks;
};

/// Staircase polyline starting at (0, 1). Each drop contributes (t, S before)
/// and (t, S after); the curve is extended flat to the last observed time.
/// Censor ticks sit on the curve at their times.
template <typename Scalar>
KMPlot<Scalar> km_to_plot_points(const KMCurve<Scalar>& curve) {
  KMPlot<Scalar> plot;
  Scalar level{1};
  plot.staircase.push_back({0.0, level});
  for (const auto& step : curve.steps) {
    plot.staircase.push_back({step.time, level});
    level = step.survival;
    plot.staircase.push_back({step.time, level});
  }
  if (curve.last_time > plot.staircase.back().x) plot.staircase.push_back({curve.last_time, level});
  for (double t : curve.censor_marks) plot.censor_ticks.push_back({t, curve.survival_at(t)});
  return plot;
}

}  // namespace bfi
