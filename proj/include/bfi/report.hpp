#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfi/case_studies.hpp"
#include "bfi/fragility.hpp"
#include "bfi/km.hpp"
#include "bfi/sim.hpp"
#include "json.hpp"

namespace bfi {

inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
  std::string source;
  std::optional<std::string> input_sha256;
  std::size_t n = 0;
  std::size_t events = 0;
  std::size_t censored = 0;
  double total_time = 0.0;
  std::string time_unit;
  AnalysisConfig config;
  GammaParams posterior{1.0, 1.0};
  double initial_prob = 0.0;
  CellStatus status = CellStatus::kFailed;
  std::optional<FragilityResult> fragility;
  std::optional<KMCurve<double>> km;
};

/// Runs the posterior and fragility analysis. Inapplicability is recorded in
/// the report; numerical failures propagate.
Report make_report(const SurvivalDataset& data, const AnalysisConfig& config, std::string source,
                   std::optional<std::string> input_sha256, bool with_km);

/// "5" when attained, ">m" when every censored observation was reclassified.
std::string fi_display(const FragilityResult& result);

/// Stable machine interface: fixed key order, no timestamps.
nlohmann::ordered_json to_json(const Report& report);
nlohmann::ordered_json to_json(const KMCurve<double>& curve);
nlohmann::ordered_json to_json(const SensitivityGrid& grid);
nlohmann::ordered_json to_json(const FiHistogram& hist, const SimSpec& spec,
                               const AnalysisConfig& config);
nlohmann::ordered_json to_json(const std::vector<CaseReproduction>& cases);

/// Human-oriented rendering; numbers use the same formatting as the JSON.
std::string to_text(const Report& report);
std::string to_text(const SensitivityGrid& grid);
std::string to_text(const std::vector<CaseReproduction>& cases);

/// Affine map from (time, survival) to SVG pixel coordinates.
struct SvgFrame {
  double width = 640.0;
  double height = 400.0;
  double margin_left = 70.0;
  double margin_right = 20.0;
  double margin_top = 20.0;
  double margin_bottom = 60.0;
  double x_max = 1.0;

  double px(double t) const;
  double py(double s) const;
};

SvgFrame frame_for(const KMCurve<double>& curve);

/// SVG 1.1 document: staircase polyline (class "km-curve"), one vertical tick
/// per censored subject (class "censor"), labelled axes.
std::string km_svg(const KMCurve<double>& curve, const std::string& time_unit);

/// CSV with columns kind,x,y where kind is "step" or "censor".
std::string km_points_csv(const KMCurve<double>& curve);

}  // namespace bfi
