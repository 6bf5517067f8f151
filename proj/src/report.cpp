#include "bfi/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bfi {

using nlohmann::ordered_json;

namespace {

std::string num(double x) { return nlohmann::json(x).dump(); }

ordered_json gamma_json(const GammaParams& g) {
  return ordered_json{{"shape", g.shape()}, {"rate", g.rate()}};
}

ordered_json trajectory_json(const std::vector<TrajectoryPoint>& trajectory) {
  auto out = ordered_json::array();
  for (const auto& p : trajectory) out.push_back(ordered_json{{"k", p.k}, {"prob", p.prob}});
  return out;
}

ordered_json fragility_json(const FragilityResult& r) {
  ordered_json j;
  j["fi"] = r.fi ? ordered_json(*r.fi) : ordered_json(nullptr);
  j["fi_display"] = fi_display(r);
  if (r.fq) {
    j["fq"] = ordered_json{{"numerator", r.fq->numerator},
                           {"denominator", r.fq->denominator},
                           {"value", r.fq->value()}};
  } else {
    j["fq"] = nullptr;
  }
  j["sample_size"] = r.sample_size;
  j["censored_count"] = r.censored_count;
  j["trajectory"] = trajectory_json(r.trajectory);
  j["reclassified_indices"] = r.flipped;
  return j;
}

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Report make_report(const SurvivalDataset& data, const AnalysisConfig& config, std::string source,
                   std::optional<std::string> input_sha256, bool with_km) {
  config.validate();
  Report r;
  r.source = std::move(source);
  r.input_sha256 = std::move(input_sha256);
  r.n = data.size();
  r.events = data.num_events();
  r.censored = data.num_censored();
  r.total_time = data.total_time();
  r.time_unit = data.time_unit();
  r.config = config;
  r.posterior = posterior_update(config.prior, data);
  r.initial_prob = posterior_prob_median_exceeds(r.posterior, config.t0, config.specfun);
  try {
    r.fragility = fragility_index(data, config);
    r.status = r.fragility->attained() ? CellStatus::kAttained : CellStatus::kNotAttained;
  } catch (const NotFragileApplicable&) {
    r.status = CellStatus::kNotApplicable;
  }
  if (with_km) r.km = km_estimate(data);
  return r;
}

std::string fi_display(const FragilityResult& result) {
  if (result.fi) return std::to_string(*result.fi);
  return ">" + std::to_string(result.censored_count);
}

ordered_json to_json(const KMCurve<double>& curve) {
  auto steps = ordered_json::array();
  for (const auto& s : curve.steps) {
    steps.push_back(ordered_json{
        {"time", s.time}, {"survival", s.survival}, {"at_risk", s.at_risk}, {"events", s.events}});
  }
  return ordered_json{{"steps", steps}, {"censor_marks", curve.censor_marks}, {"last_time", curve.last_time}};
}

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["tool"] = "bfi";
  j["version"] = kToolVersion;
  j["input"] = ordered_json{{"source", r.source},
                            {"sha256", r.input_sha256 ? ordered_json(*r.input_sha256) : ordered_json(nullptr)}};
  j["dataset"] = ordered_json{{"n", r.n},
                              {"events", r.events},
                              {"censored", r.censored},
                              {"total_time", r.total_time},
                              {"time_unit", r.time_unit}};
  j["prior"] = gamma_json(r.config.prior);
  j["t0"] = r.config.t0;
  j["p0"] = r.config.p0;
  j["posterior"] = gamma_json(r.posterior);
  j["initial_prob"] = r.initial_prob;
  j["status"] = to_string(r.status);
  j["fragility"] = r.fragility ? fragility_json(*r.fragility) : ordered_json(nullptr);
  if (r.km) j["km"] = to_json(*r.km);
  return j;
}

ordered_json to_json(const SensitivityGrid& grid) {
  ordered_json j;
  j["tool"] = "bfi";
  j["version"] = kToolVersion;
  j["axes"] = ordered_json{{"prior_shape", grid.axes.prior_shape},
                           {"prior_rate", grid.axes.prior_rate},
                           {"t0", grid.axes.t0},
                           {"p0", grid.axes.p0}};
  auto cells = ordered_json::array();
  for (const auto& c : grid.cells) {
    ordered_json cell;
    cell["prior_shape"] = c.config.prior.shape();
    cell["prior_rate"] = c.config.prior.rate();
    cell["t0"] = c.config.t0;
    cell["p0"] = c.config.p0;
    cell["status"] = to_string(c.status);
    cell["initial_prob"] = c.initial_prob;
    if (c.result) {
      cell["fi"] = c.result->fi ? ordered_json(*c.result->fi) : ordered_json(nullptr);
      cell["fi_display"] = fi_display(*c.result);
    } else {
      cell["fi"] = nullptr;
      cell["fi_display"] = nullptr;
    }
    if (!c.message.empty()) cell["message"] = c.message;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

ordered_json to_json(const FiHistogram& hist, const SimSpec& spec, const AnalysisConfig& config) {
  ordered_json censoring;
  if (std::holds_alternative<AdministrativeCensoring>(spec.censoring)) {
    censoring = {{"mechanism", "administrative"},
                 {"cutoff", std::get<AdministrativeCensoring>(spec.censoring).cutoff}};
  } else if (std::holds_alternative<ExponentialCensoring>(spec.censoring)) {
    censoring = {{"mechanism", "exponential"},
                 {"rate", std::get<ExponentialCensoring>(spec.censoring).rate}};
  } else {
    censoring = {{"mechanism", "none"}};
  }
  auto by_fi = ordered_json::array();
  for (const auto& [fi, count] : hist.by_fi) by_fi.push_back(ordered_json{{"fi", fi}, {"count", count}});
  ordered_json j;
  j["tool"] = "bfi";
  j["version"] = kToolVersion;
  j["simulation"] = ordered_json{{"n", spec.n},
                                 {"event_rate", spec.event_rate},
                                 {"censoring", censoring},
                                 {"seed", spec.seed},
                                 {"replications", hist.replications}};
  j["prior"] = gamma_json(config.prior);
  j["t0"] = config.t0;
  j["p0"] = config.p0;
  j["histogram"] = ordered_json{{"not_applicable", hist.not_applicable},
                                {"not_attained", hist.not_attained},
                                {"errors", hist.errors},
                                {"by_fi", by_fi}};
  return j;
}

ordered_json to_json(const std::vector<CaseReproduction>& cases) {
  ordered_json j;
  j["tool"] = "bfi";
  j["version"] = kToolVersion;
  j["method"] =
      "posterior rate calibrated to each reported probability; per-patient times are not "
      "published, so a dataset with the same event/censor counts and total time is analysed";
  auto arr = ordered_json::array();
  bool all = true;
  for (const auto& c : cases) {
    Report r = make_report(c.dataset, c.config, c.study.name, std::nullopt, false);
    ordered_json cj;
    cj["case"] = c.study.name;
    cj["reported"] = ordered_json{{"prob", c.study.reported_prob}, {"fi", c.study.reported_fi}};
    cj["calibrated_posterior_rate"] = c.calibrated_rate;
    cj["computed_fi"] = c.result.fi ? ordered_json(*c.result.fi) : ordered_json(nullptr);
    cj["match"] = c.matches();
    cj["report"] = to_json(r);
    arr.push_back(std::move(cj));
    all = all && c.matches();
  }
  j["cases"] = std::move(arr);
  j["all_match"] = all;
  return j;
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "source:        " << r.source << '\n';
  if (r.input_sha256) os << "sha256:        " << *r.input_sha256 << '\n';
  os << "n:             " << r.n << " (" << r.events << " events, " << r.censored << " censored)\n"
     << "total time:    " << num(r.total_time) << ' ' << r.time_unit << '\n'
     << "prior:         Gamma(" << num(r.config.prior.shape()) << ", " << num(r.config.prior.rate()) << ")\n"
     << "posterior:     Gamma(" << num(r.posterior.shape()) << ", " << num(r.posterior.rate()) << ")\n"
     << "t0:            " << num(r.config.t0) << '\n'
     << "p0:            " << num(r.config.p0) << '\n'
     << "P(median>t0):  " << num(r.initial_prob) << '\n'
     << "status:        " << to_string(r.status) << '\n';
  if (r.fragility) {
    const auto& f = *r.fragility;
    os << "FI:            " << fi_display(f) << '\n';
    if (f.fq) os << "FQ:            " << f.fq->numerator << '/' << f.fq->denominator << " = " << num(f.fq->value()) << '\n';
    os << "trajectory:\n";
    for (const auto& p : f.trajectory) os << "  k=" << p.k << "  prob=" << num(p.prob) << '\n';
  }
  if (r.km) {
    os << "kaplan-meier:\n";
    for (const auto& s : r.km->steps) {
      os << "  t=" << num(s.time) << "  S=" << num(s.survival) << "  at_risk=" << s.at_risk
         << "  events=" << s.events << '\n';
    }
  }
  return os.str();
}

std::string to_text(const SensitivityGrid& grid) {
  std::ostringstream os;
  os << "prior_shape prior_rate t0 p0 status initial_prob fi\n";
  for (const auto& c : grid.cells) {
    os << num(c.config.prior.shape()) << ' ' << num(c.config.prior.rate()) << ' ' << num(c.config.t0)
       << ' ' << num(c.config.p0) << ' ' << to_string(c.status) << ' ' << num(c.initial_prob) << ' '
       << (c.result ? fi_display(*c.result) : std::string("-")) << '\n';
  }
  return os.str();
}

std::string to_text(const std::vector<CaseReproduction>& cases) {
  std::ostringstream os;
  for (const auto& c : cases) {
    os << "== " << c.study.name << " ==\n"
       << "reported:      prob " << num(c.study.reported_prob) << ", FI " << c.study.reported_fi << '\n'
       << "calibrated posterior rate: " << num(c.calibrated_rate) << '\n'
       << "computed FI:   " << fi_display(c.result) << (c.matches() ? "  (match)" : "  (MISMATCH)") << '\n';
    for (const auto& p : c.result.trajectory) os << "  k=" << p.k << "  prob=" << num(p.prob) << '\n';
  }
  return os.str();
}

double SvgFrame::px(double t) const {
  return margin_left + (width - margin_left - margin_right) * (t / x_max);
}

double SvgFrame::py(double s) const {
  return margin_top + (height - margin_top - margin_bottom) * (1.0 - s);
}

SvgFrame frame_for(const KMCurve<double>& curve) {
  SvgFrame f;
  f.x_max = curve.last_time > 0.0 ? curve.last_time : 1.0;
  return f;
}

std::string km_svg(const KMCurve<double>& curve, const std::string& time_unit) {
  const auto frame = frame_for(curve);
  const auto plot = km_to_plot_points(curve);
  const double x0 = frame.px(0.0);
  const double x1 = frame.px(frame.x_max);
  const double y0 = frame.py(0.0);
  const double y1 = frame.py(1.0);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << frame.width
     << "\" height=\"" << frame.height << "\" viewBox=\"0 0 " << frame.width << ' ' << frame.height
     << "\">\n"
     << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
     << "    <line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(y0) << "\" x2=\"" << fmt_px(x1)
     << "\" y2=\"" << fmt_px(y0) << "\"/>\n"
     << "    <line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(y0) << "\" x2=\"" << fmt_px(x0)
     << "\" y2=\"" << fmt_px(y1) << "\"/>\n"
     << "  </g>\n"
     << "  <g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double s = 0.25 * i;
    const double t = frame.x_max * 0.25 * i;
    os << "    <text x=\"" << fmt_px(x0 - 6) << "\" y=\"" << fmt_px(frame.py(s) + 4)
       << "\" text-anchor=\"end\">" << num(s) << "</text>\n";
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", t);
    os << "    <text x=\"" << fmt_px(frame.px(t)) << "\" y=\"" << fmt_px(y0 + 16)
       << "\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  os << "  </g>\n"
     << "  <text class=\"x-label\" x=\"" << fmt_px(0.5 * (x0 + x1)) << "\" y=\"" << fmt_px(frame.height - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Time (" << xml_escape(time_unit)
     << ")</text>\n"
     << "  <text class=\"y-label\" x=\"18\" y=\"" << fmt_px(0.5 * (y0 + y1))
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
     << fmt_px(0.5 * (y0 + y1)) << ")\">Survival probability</text>\n";

  os << "  <polyline class=\"km-curve\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < plot.staircase.size(); ++i) {
    if (i) os << ' ';
    os << fmt_px(frame.px(plot.staircase[i].x)) << ',' << fmt_px(frame.py(plot.staircase[i].y));
  }
  os << "\"/>\n";
  os << "  <g class=\"censor-marks\" stroke=\"black\" stroke-width=\"1\">\n";
  for (const auto& tick : plot.censor_ticks) {
    const double x = frame.px(tick.x);
    const double y = frame.py(tick.y);
    os << "    <line class=\"censor\" x1=\"" << fmt_px(x) << "\" y1=\"" << fmt_px(y - 5) << "\" x2=\""
       << fmt_px(x) << "\" y2=\"" << fmt_px(y + 5) << "\"/>\n";
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

std::string km_points_csv(const KMCurve<double>& curve) {
  const auto plot = km_to_plot_points(curve);
  std::string out = "kind,x,y\n";
  for (const auto& p : plot.staircase) out += "step," + num(p.x) + ',' + num(p.y) + '\n';
  for (const auto& p : plot.censor_ticks) out += "censor," + num(p.x) + ',' + num(p.y) + '\n';
  return out;
}

}  // namespace bfi
