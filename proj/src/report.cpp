#include "blochcert/report.hpp"

namespace blochcert {

Json Report::to_json() const {
  Json j;
  j["schema_version"] = "1";
  j["command"] = command;
  j["seed"] = seed;
  j["inputs"] = inputs;
  j["results"] = results;
  j["timings"] = timings;
  j["warnings"] = warnings;
  return j;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const DistanceResult& r) {
  Json j;
  j["value"] = r.value;
  j["bound"] = DistanceResult::bound;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["control_points"] = r.path.points().size();
  j["initial_length"] = r.history.empty() ? r.value : r.history.front();
  return j;
}

Json to_json(const BlochEstimate& e) {
  Json j;
  j["estimate"] = e.value;
  j["bound"] = "lower";
  j["argmax"] = to_json(e.argmax);
  Json shells = Json::array();
  for (const BlochShell& s : e.shells) {
    shells.push_back(Json{{"delta", s.delta}, {"value", s.value}, {"argmax", to_json(s.argmax)}});
  }
  j["shells"] = shells;
  j["evaluations"] = e.evaluations;
  return j;
}

Json to_json(const LipschitzEstimate& e) {
  Json j;
  j["estimate"] = e.value;
  j["bound"] = "lower";
  j["argmax_pair"] = Json::array({to_json(e.x), to_json(e.y)});
  Json shells = Json::array();
  for (const LipschitzShell& s : e.shells) {
    shells.push_back(
        Json{{"delta", s.delta}, {"value", s.value}, {"argmax_pair", Json::array({to_json(s.x), to_json(s.y)})}});
  }
  j["shells"] = shells;
  j["evaluations"] = e.evaluations;
  j["skipped_degenerate"] = e.skipped_degenerate;
  return j;
}

Json to_json(const ConditionReport& c) {
  Json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["one_sided"] = c.one_sided;
  j["checked"] = c.checked;
  j["worst_slack"] = c.worst_slack;
  j["threshold"] = c.threshold;
  Json w = Json::array();
  for (const Witness& x : c.witnesses) w.push_back(Json{{"x", to_json(x.x)}, {"y", to_json(x.y)}, {"slack", x.slack}});
  j["witnesses"] = w;
  return j;
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["distance_source"] = r.distance_source;
  j["budget"] = r.budget;
  Json c = Json::array();
  for (const ConditionReport& x : r.conditions) c.push_back(to_json(x));
  j["conditions"] = c;
  return j;
}

Json to_json(const EqualityCertificate& c) {
  Json j;
  j["bloch_estimate"] = c.bloch_estimate;
  j["lipschitz_estimate"] = c.lipschitz_estimate;
  j["argmax_point"] = to_json(c.argmax_point);
  j["argmax_pair"] = Json::array({to_json(c.argmax_pair_x), to_json(c.argmax_pair_y)});
  j["relative_gap"] = c.relative_gap;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["admissibility_waived"] = c.admissibility_waived;
  j["admissibility"] = c.admissibility ? to_json(*c.admissibility) : Json(nullptr);
  j["bloch"] = to_json(c.bloch);
  j["lipschitz"] = to_json(c.lipschitz);
  j["config"] = Json{{"interior_samples", c.config.interior_samples},
                     {"pair_samples", c.config.pair_samples},
                     {"refine_rounds", c.config.refine_rounds},
                     {"shell_deltas", c.config.shell_deltas},
                     {"seed", c.config.seed}};
  j["failures"] = c.failures;
  return j;
}

Json to_json(const LimRatioTable& t) {
  Json j;
  j["point"] = to_json(t.point);
  j["weight_at_point"] = t.weight_at_point;
  Json rows = Json::array();
  for (const LimRatioRow& r : t.rows) {
    rows.push_back(Json{{"radius", r.radius},
                        {"max_deviation", r.max_deviation},
                        {"min_ratio", r.min_ratio},
                        {"max_ratio", r.max_ratio},
                        {"all_converged", r.all_converged}});
  }
  j["rows"] = rows;
  j["deviations_shrinking"] = t.deviations_shrinking;
  return j;
}

Json to_json(const SlackSurvey& s) {
  return Json{{"pairs", s.pairs},
              {"min_slack", s.min_slack},
              {"median_slack", s.median_slack},
              {"max_slack", s.max_slack},
              {"violations", s.violations},
              {"threshold", s.threshold},
              {"argmin", Json::array({s.argmin.first, s.argmin.second})}};
}

Json to_json(const DerivativeMonotonicity& m) {
  Json j;
  j["increasing"] = m.increasing;
  j["witness"] = m.witness ? Json::array({m.witness->first, m.witness->second}) : Json(nullptr);
  j["atoms_nonnegative"] = m.atoms_nonnegative ? Json(*m.atoms_nonnegative) : Json(nullptr);
  return j;
}

}  // namespace blochcert
