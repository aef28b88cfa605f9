#include "documents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ecoop/feasibility.hpp"
#include "ecoop/kkt.hpp"
#include "ecoop/mac.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/twoway.hpp"

namespace ecoop::io {

using nlohmann::json;

namespace {

json kkt_json(const KktReport& k) {
  return {{"stationarity", round12(k.stationarity_residual)},
          {"complementary_slackness",
           round12(k.complementary_slackness_residual)},
          {"dual_feasibility", round12(k.dual_feasibility_residual)},
          {"within_tolerance", k.within(tol::kkt)}};
}

json checks_json(const std::vector<LemmaResult>& checks) {
  json a = json::array();
  for (const auto& c : checks) {
    a.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"slack", round12(c.slack)}});
  }
  return a;
}

std::pair<double, double> theta_or_default(const ScenarioInput& in) {
  return in.theta ? *in.theta : std::pair<double, double>{1.0, 1.0};
}

std::vector<LemmaResult> mac_structural_checks(const Scenario& s,
                                               std::pair<double, double> th,
                                               const PowerSchedule& p1,
                                               const PowerSchedule& p2,
                                               const TransferSchedule& d,
                                               std::pair<double, double> corner) {
  std::vector<LemmaResult> out;
  const double dtot = d.total();
  if (th.first >= th.second) {
    out.push_back({"no transfer under user-1 priority", dtot <= 1e-9, dtot});
  } else if (s.alpha > 0.0 && th.second * s.alpha >= th.first) {
    double e1tot = 0.0;
    for (double x : s.e1_snr().amounts) e1tot += x;
    const double gap = std::abs(dtot - e1tot);
    out.push_back({"full transfer past threshold", gap <= 1e-9, gap});
  }
  auto corners = pentagon_corners(p1, p2);
  auto pick = th.first >= th.second ? corners.first : corners.second;
  const double drift = std::max(std::abs(pick.first - corner.first),
                                std::abs(pick.second - corner.second));
  out.push_back({"corner rates consistent", drift <= 1e-9, drift});
  return out;
}

bool feasible(const Scenario& s, const PowerSchedule& p1,
              const PowerSchedule& p2, const TransferSchedule& d) {
  return feasibility_violations(s, p1, p2, d).empty();
}

const char* relay_method(RelayPath p) {
  switch (p) {
    case RelayPath::SingleCrossing: return "single-crossing closed form";
    case RelayPath::SourceInitial: return "source-initial fixed point";
    case RelayPath::General: return "interior-point general path";
  }
  return "interior-point general path";
}

const char* mac_method(MacRegime r) {
  switch (r) {
    case MacRegime::NoTransfer: return "NoTransfer";
    case MacRegime::General: return "General";
    case MacRegime::FullTransfer: return "FullTransfer";
  }
  return "NoTransfer";
}

}  // namespace

SolveDocument solve_document(const ScenarioInput& in) {
  const Scenario& s = in.scenario;
  SolveDocument doc;
  json& j = doc.body;
  ScenarioInput echoed = in;
  if (s.model != Model::Relay) {
    echoed.theta = theta_or_default(in);  // pin the weights used
  }
  j["scenario"] = scenario_to_json(echoed);

  if (s.model == Model::Relay) {
    RelayReport r = solve_relay(s);
    j["method"] = relay_method(r.path);
    j["p1"] = round12_array(r.p_source.power);
    j["p2"] = round12_array(r.p_relay.power);
    j["delta"] = round12_array(r.delta.delta);
    j["rate1"] = round12(total_rate(r.p_source.power));
    j["rate2"] = round12(r.throughput);
    j["objective"] = round12(r.throughput);
    j["kkt"] = kkt_json(r.kkt);
    j["checks"] = checks_json(r.lemma_results);
    bool ok = feasible(s, r.p_source, r.p_relay, r.delta) &&
              data_causality_violations(r.p_source, r.p_relay).empty() &&
              r.kkt.within(tol::kkt);
    for (const auto& lr : r.lemma_results) ok = ok && lr.pass;
    doc.verified = ok;
  } else if (s.model == Model::TwoWay) {
    const auto th = theta_or_default(in);
    SolveReport r = solve_twoway_weighted(s, th);
    RatioCheck rc = verify_transfer_ratio(r, th, s.alpha);
    std::vector<LemmaResult> checks = r.checks;
    checks.insert(checks.end(), rc.per_slot.begin(), rc.per_slot.end());
    j["method"] = r.method;
    j["p1"] = round12_array(r.p1.power);
    j["p2"] = round12_array(r.p2.power);
    j["delta"] = round12_array(r.delta.delta);
    j["rate1"] = round12(r.rate1);
    j["rate2"] = round12(r.rate2);
    j["objective"] = round12(r.objective);
    j["kkt"] = kkt_json(r.kkt);
    j["checks"] = checks_json(checks);
    bool ok = feasible(s, r.p1, r.p2, r.delta) && rc.pass &&
              r.kkt.within(tol::kkt);
    for (const auto& c : r.checks) ok = ok && c.pass;
    doc.verified = ok;
  } else {
    const auto th = theta_or_default(in);
    MacReport r = solve_mac_weighted(s, th);
    auto checks =
        mac_structural_checks(s, th, r.p1, r.p2, r.delta, r.corner_rates);
    j["method"] = mac_method(r.regime);
    j["p1"] = round12_array(r.p1.power);
    j["p2"] = round12_array(r.p2.power);
    j["delta"] = round12_array(r.delta.delta);
    j["rate1"] = round12(r.corner_rates.first);
    j["rate2"] = round12(r.corner_rates.second);
    j["sum_rate"] = round12(r.sum_rate);
    j["objective"] = round12(r.objective);
    j["kkt"] = kkt_json(r.kkt);
    j["checks"] = checks_json(checks);
    bool ok = feasible(s, r.p1, r.p2, r.delta) && r.kkt.within(tol::kkt);
    for (const auto& c : checks) ok = ok && c.pass;
    doc.verified = ok;
  }
  return doc;
}

std::vector<std::string> recheck_document(const json& doc) {
  std::vector<std::string> mismatches;
  for (const char* req :
       {"scenario", "p1", "p2", "delta", "kkt", "checks"}) {
    if (!doc.contains(req)) {
      throw std::invalid_argument(std::string("result document lacks '") +
                                  req + "'");
    }
  }
  ScenarioInput in = parse_scenario(doc.at("scenario"));
  const Scenario& s = in.scenario;
  auto vec = [&](const char* f) {
    std::vector<double> v;
    for (const auto& x : doc.at(f)) v.push_back(x.get<double>());
    return v;
  };
  PowerSchedule p1(vec("p1")), p2(vec("p2"));
  TransferSchedule d(vec("delta"));
  const auto th = theta_or_default(in);

  // Recompute the outcomes that are pure functions of scenario + schedules.
  std::vector<LemmaResult> fresh;
  if (s.model == Model::Relay) {
    RelayReport r;
    r.p_source = p1;
    r.p_relay = p2;
    r.delta = d;
    r.throughput = total_rate(p2.power);
    fresh = verify_relay_lemmas(r, s);
  } else if (s.model == Model::TwoWay) {
    SolveReport r;
    r.p1 = p1;
    r.p2 = p2;
    r.delta = d;
    RatioCheck rc = verify_transfer_ratio(r, th, s.alpha);
    fresh = rc.per_slot;
  } else {
    std::pair<double, double> corner{doc.at("rate1").get<double>(),
                                     doc.at("rate2").get<double>()};
    fresh = mac_structural_checks(s, th, p1, p2, d, corner);
  }
  KktReport kkt =
      kkt_residuals(s, s.model == Model::Relay ? std::make_pair(1.0, 1.0) : th,
                    p1, p2, d);

  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  const json& kj = doc.at("kkt");
  struct {
    const char* name;
    double fresh;
  } res[] = {{"stationarity", kkt.stationarity_residual},
             {"complementary_slackness", kkt.complementary_slackness_residual},
             {"dual_feasibility", kkt.dual_feasibility_residual}};
  for (const auto& r : res) {
    if (!kj.contains(r.name) || !close(kj.at(r.name).get<double>(), r.fresh)) {
      mismatches.push_back(std::string("kkt ") + r.name +
                           " does not reproduce");
    }
  }
  for (const auto& f : fresh) {
    bool found = false;
    for (const auto& c : doc.at("checks")) {
      if (c.at("name").get<std::string>() != f.name) continue;
      found = true;
      if (c.at("pass").get<bool>() != f.pass ||
          !close(c.at("slack").get<double>(), f.slack)) {
        mismatches.push_back("check '" + f.name + "' does not reproduce");
      }
      break;
    }
    if (!found) {
      mismatches.push_back("check '" + f.name + "' missing from document");
    }
  }
  return mismatches;
}

std::vector<RegionPoint> trace_for(const ScenarioInput& in) {
  if (!in.sweep_points) {
    throw std::invalid_argument("field 'sweep_points' required for region");
  }
  const int n = *in.sweep_points;
  if (n < 2) throw std::invalid_argument("sweep_points must be at least 2");
  switch (in.scenario.model) {
    case Model::TwoWay:
      return trace_twoway_region(in.scenario, static_cast<std::size_t>(n));
    case Model::Mac:
      return trace_mac_region(in.scenario, static_cast<std::size_t>(n));
    case Model::Relay:
      break;
  }
  throw std::invalid_argument(
      "regions defined only for two-way and mac models");
}

std::string region_csv(const std::vector<RegionPoint>& pts) {
  std::string out = "theta1,theta2,R1,R2,regime\n";
  char buf[160];
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%s\n",
                  round12(p.theta.first), round12(p.theta.second),
                  round12(p.rate1), round12(p.rate2), p.regime.c_str());
    out += buf;
  }
  return out;
}

std::string region_svg(const std::vector<RegionPoint>& region,
                       const std::vector<RegionPoint>& baseline,
                       const std::string& title) {
  const double w = 640, h = 480, ml = 70, mr = 24, mt = 44, mb = 64;
  double xmax = 1e-9, ymax = 1e-9;
  for (const auto* curve : {&region, &baseline}) {
    for (const auto& p : *curve) {
      xmax = std::max(xmax, p.rate1);
      ymax = std::max(ymax, p.rate2);
    }
  }
  xmax *= 1.06;
  ymax *= 1.06;
  auto X = [&](double r1) { return ml + (w - ml - mr) * r1 / xmax; };
  auto Y = [&](double r2) { return h - mb - (h - mt - mb) * r2 / ymax; };
  std::ostringstream svg;
  char buf[256];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"26\" font-family=\"sans-serif\" "
                "font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
                0.5 * w, title.c_str());
  svg << buf;
  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                ml, h - mb, w - mr, h - mb);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                ml, h - mb, ml, mt);
  svg << buf;
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmax * i / 5.0, fy = ymax * i / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n<text x=\"%.1f\" y=\"%.1f\" "
                  "font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%.3g</text>\n",
                  X(fx), h - mb, X(fx), h - mb + 5, X(fx), h - mb + 18, fx);
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n<text x=\"%.1f\" y=\"%.1f\" "
                  "font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%.3g</text>\n",
                  ml - 5, Y(fy), ml, Y(fy), ml - 8, Y(fy) + 4, fy);
    svg << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                "font-size=\"13\" text-anchor=\"middle\">R1 "
                "(bits/slot)</text>\n",
                0.5 * (ml + w - mr), h - 18);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"18\" y=\"%.1f\" font-family=\"sans-serif\" "
                "font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 18 %.1f)\">R2 (bits/slot)</text>\n",
                0.5 * (mt + h - mb), 0.5 * (mt + h - mb));
  svg << buf;
  auto polyline = [&](const std::vector<RegionPoint>& pts, const char* style) {
    if (pts.empty()) return;
    svg << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& p : pts) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", X(p.rate1), Y(p.rate2));
      svg << buf;
    }
    svg << "\"/>\n";
  };
  polyline(baseline,
           "stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  polyline(region, "stroke=\"#1f77b4\" stroke-width=\"2\"");
  svg << "<text x=\"" << w - mr - 200 << "\" y=\"" << mt + 16
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#1f77b4\">with energy transfer</text>\n"
      << "<text x=\"" << w - mr - 200 << "\" y=\"" << mt + 34
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#888888\">no-transfer baseline</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace ecoop::io
