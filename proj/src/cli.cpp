#include "blochcert/cli.hpp"

#include "blochcert/corpus.hpp"
#include "blochcert/errors.hpp"
#include "blochcert/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace blochcert {

namespace {

struct Common {
  std::uint64_t seed = 42;
  std::string out_path;
  bool timings = false;
};

using Action = std::function<int(Report&, std::ostream& summary)>;

struct MapWeights {
  CorpusEntry entry;
  Weight omega;
  Weight co_omega;
  bool recommended = false;
};

MapWeights resolve(const std::string& map, const std::string& weight, const std::string& coweight) {
  CorpusEntry entry = corpus_get(map);
  const std::string w = weight.empty() ? entry.weight : weight;
  const std::string cw = coweight.empty() ? entry.coweight : coweight;
  const bool recommended = w == entry.weight && cw == entry.coweight;
  return MapWeights{std::move(entry), Weight::parse(w), Weight::parse(cw), recommended};
}

Vector parse_user_point(const std::string& text, const Weight& w, double margin, const char* what) {
  const Vector p = parse_point(text);
  if (!contains(w.domain(), p, margin)) {
    throw InvalidArgument(std::string(what) + " lies outside the domain of weight '" + w.label() + "'");
  }
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

void add_supremum_options(CLI::App* sub, SupremumConfig& cfg) {
  sub->add_option("--interior-samples", cfg.interior_samples, "Low-discrepancy interior samples per shell")
      ->capture_default_str();
  sub->add_option("--pair-samples", cfg.pair_samples, "Pair samples per shell")->capture_default_str();
  sub->add_option("--refine-rounds", cfg.refine_rounds, "Local refinement rounds")->capture_default_str();
  sub->add_option("--shells", cfg.shell_deltas, "Boundary margins swept, comma separated")
      ->delimiter(',')
      ->capture_default_str();
}

Json supremum_inputs(const SupremumConfig& cfg) {
  return Json{{"interior_samples", cfg.interior_samples},
              {"pair_samples", cfg.pair_samples},
              {"refine_rounds", cfg.refine_rounds},
              {"shell_deltas", cfg.shell_deltas}};
}

void add_geodesic_options(CLI::App* sub, GeodesicConfig& geo) {
  sub->add_option("--control-points", geo.control_points, "Polyline control points")->capture_default_str();
  sub->add_option("--max-iters", geo.max_iters, "Descent sweeps")->capture_default_str();
  sub->add_option("--geo-tol", geo.tol, "Stop when a sweep gains less")->capture_default_str();
  sub->add_option("--integrate-tol", geo.integrate_tol, "Quadrature tolerance")->capture_default_str();
}

Json geodesic_inputs(const GeodesicConfig& geo) {
  return Json{{"control_points", geo.control_points},
              {"max_iters", geo.max_iters},
              {"step", geo.step},
              {"shrink", geo.shrink},
              {"tol", geo.tol},
              {"margin", geo.margin},
              {"integrate_tol", geo.integrate_tol}};
}

Json known_value(const MapWeights& mw, double estimate) {
  if (!mw.recommended || !mw.entry.known_bloch) return nullptr;
  return Json{{"value", mw.entry.known_bloch->value},
              {"derivation", mw.entry.known_bloch->derivation},
              {"abs_diff", std::abs(estimate - mw.entry.known_bloch->value)}};
}

// ---------------------------------------------------------------------------

Action distance_command(CLI::App& app) {
  struct Opts {
    std::string weight, from, to, export_path;
    bool oracle = false;
    int resolution = 400;
    int stencil = 3;
    GeodesicConfig geo;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("distance", "Upper bound on the omega-distance by polyline descent");
  sub->add_option("--weight", o->weight, "Weight spec")->required();
  sub->add_option("--from", o->from, "Start point, comma separated")->required();
  sub->add_option("--to", o->to, "End point, comma separated")->required();
  sub->add_flag("--oracle", o->oracle, "Compare with the grid oracle (2D only)");
  sub->add_option("--resolution", o->resolution, "Grid oracle resolution")->capture_default_str();
  sub->add_option("--stencil", o->stencil, "Grid oracle stencil radius; 1 is the 8-neighborhood")
      ->capture_default_str();
  sub->add_option("--export-path", o->export_path, "Write the optimized polyline as CSV");
  add_geodesic_options(sub, o->geo);
  return [o](Report& r, std::ostream& summary) {
    const Weight w = Weight::parse(o->weight);
    const Vector x = parse_user_point(o->from, w, o->geo.margin, "--from");
    const Vector y = parse_user_point(o->to, w, o->geo.margin, "--to");
    if (x.size() != y.size()) throw InvalidArgument("--from and --to differ in dimension");
    r.inputs = Json{{"weight", w.label()}, {"from", to_json(x)}, {"to", to_json(y)}, {"oracle", o->oracle},
                    {"geodesic", geodesic_inputs(o->geo)}};
    if (o->oracle) r.inputs["oracle_options"] = Json{{"resolution", o->resolution}, {"stencil", o->stencil}};

    const DistanceResult d = omega_distance(x, y, w, o->geo);
    r.results["distance"] = to_json(d);
    summary << "omega-distance (upper bound) " << fmt(d.value) << " after " << d.iterations << " sweeps";
    if (const auto& cf = w.closed_form_distance()) {
      const double exact = (*cf)(x, y);
      r.results["closed_form"] = Json{{"value", exact}, {"abs_diff", d.value - exact}};
      summary << ", closed form " << fmt(exact);
    }
    if (o->oracle) {
      const double g = omega_distance_grid_oracle(x, y, w, o->resolution, GridOracleOptions{o->stencil, o->geo.margin});
      r.results["oracle"] = Json{{"value", g}, {"relative_diff", std::abs(d.value - g) / g}};
      summary << ", grid oracle " << fmt(g);
    }
    summary << "\n";
    if (!o->export_path.empty()) {
      std::ofstream f(o->export_path);
      if (!f) throw InvalidArgument("cannot write '" + o->export_path + "'");
      write_polyline_csv(f, d.path);
    }
    if (!d.converged) {
      r.warnings.push_back("descent stopped at max_iters before converging");
      return kExitNumerical;
    }
    return kExitOk;
  };
}

Action bloch_command(CLI::App& app, const Common& common) {
  struct Opts {
    std::string map, weight, coweight;
    SupremumConfig cfg;
    DerivativeConfig dcfg;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bloch", "Bloch number estimate with per-shell table");
  sub->add_option("--map", o->map, "Corpus label")->required();
  sub->add_option("--weight", o->weight, "Weight spec (default: corpus recommendation)");
  sub->add_option("--coweight", o->coweight, "Co-weight spec (default: corpus recommendation)");
  sub->add_option("--fd-step", o->dcfg.fd_step, "Largest difference-quotient radius")->capture_default_str();
  add_supremum_options(sub, o->cfg);
  return [o, &common](Report& r, std::ostream& summary) {
    const MapWeights mw = resolve(o->map, o->weight, o->coweight);
    o->cfg.seed = common.seed;
    o->dcfg.seed = common.seed;
    r.inputs = Json{{"map", o->map}, {"weight", mw.omega.label()}, {"coweight", mw.co_omega.label()},
                    {"supremum", supremum_inputs(o->cfg)}, {"fd_step", o->dcfg.fd_step}};
    const BlochEstimate e = bloch_number(mw.entry.mapping, mw.omega, mw.co_omega, o->cfg, o->dcfg);
    r.results = to_json(e);
    r.results["known_bloch"] = known_value(mw, e.value);
    if (mw.entry.notes.find("unattained") != std::string::npos) {
      r.warnings.push_back("supremum is not attained; read the shell table, not a point value");
    }
    summary << o->map << ": Bloch estimate " << fmt(e.value) << " (lower bound)\n";
    for (const BlochShell& s : e.shells) summary << "  shell " << s.delta << ": " << fmt(s.value) << "\n";
    return kExitOk;
  };
}

Action lipschitz_command(CLI::App& app, const Common& common) {
  struct Opts {
    std::string map, psi, weight, coweight;
    SupremumConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lipschitz", "Lipschitz number estimate with argmax pair");
  sub->add_option("--map", o->map, "Corpus label")->required();
  sub->add_option("--psi", o->psi, "Admissible function label (default: corpus recommendation)");
  sub->add_option("--weight", o->weight, "Weight spec used by minmax/ratio");
  sub->add_option("--coweight", o->coweight, "Co-weight spec used by minmax/ratio");
  add_supremum_options(sub, o->cfg);
  return [o, &common](Report& r, std::ostream& summary) {
    const MapWeights mw = resolve(o->map, o->weight, o->coweight);
    const std::string psi_label = o->psi.empty() ? mw.entry.psi : o->psi;
    const AdmissibleFn psi = parse_admissible(psi_label, mw.omega, mw.co_omega);
    o->cfg.seed = common.seed;
    r.inputs = Json{{"map", o->map}, {"psi", psi.label()}, {"weight", mw.omega.label()},
                    {"coweight", mw.co_omega.label()}, {"supremum", supremum_inputs(o->cfg)}};
    const LipschitzEstimate e = lipschitz_number(mw.entry.mapping, psi, o->cfg);
    r.results = to_json(e);
    summary << o->map << ": Lipschitz estimate " << fmt(e.value) << " (lower bound), " << e.skipped_degenerate
            << " degenerate pairs skipped\n";
    return kExitOk;
  };
}

Action certify_command(CLI::App& app, const Common& common) {
  struct Opts {
    std::string map, weight, coweight, psi;
    SupremumConfig cfg;
    CertifyOptions copts;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("certify", "Certify that the Bloch and Lipschitz numbers agree");
  sub->add_option("--map", o->map, "Corpus label")->required();
  sub->add_option("--weight", o->weight, "Weight spec (default: corpus recommendation)");
  sub->add_option("--coweight", o->coweight, "Co-weight spec (default: corpus recommendation)");
  sub->add_option("--psi", o->psi, "Admissible function label (default: corpus recommendation)");
  sub->add_option("--tol", o->copts.tolerance, "Relative gap tolerance")->capture_default_str();
  sub->add_flag("--waive-admissibility", o->copts.waive_admissibility, "Skip the admissibility check");
  sub->add_option("--admissibility-pairs", o->copts.admissibility.pairs, "Pairs for the admissibility check")
      ->capture_default_str();
  add_supremum_options(sub, o->cfg);
  return [o, &common](Report& r, std::ostream& summary) {
    const MapWeights mw = resolve(o->map, o->weight, o->coweight);
    const std::string psi_label = o->psi.empty() ? mw.entry.psi : o->psi;
    const AdmissibleFn psi = parse_admissible(psi_label, mw.omega, mw.co_omega);
    o->cfg.seed = common.seed;
    o->copts.derivative.seed = common.seed;
    r.inputs = Json{{"map", o->map},
                    {"weight", mw.omega.label()},
                    {"coweight", mw.co_omega.label()},
                    {"psi", psi.label()},
                    {"tol", o->copts.tolerance},
                    {"waive_admissibility", o->copts.waive_admissibility},
                    {"admissibility_pairs", o->copts.admissibility.pairs},
                    {"supremum", supremum_inputs(o->cfg)}};
    const EqualityCertificate c = certify_equality(mw.entry.mapping, mw.omega, mw.co_omega, psi, o->cfg, o->copts);
    r.results = to_json(c);
    r.results["known_bloch"] = known_value(mw, c.bloch_estimate);
    summary << o->map << ": B = " << fmt(c.bloch_estimate) << ", L = " << fmt(c.lipschitz_estimate)
            << ", relative gap " << fmt(c.relative_gap) << " (tol " << c.tolerance << ") "
            << (c.pass ? "PASS" : "FAIL") << "\n";
    for (const std::string& f : c.failures) summary << "  " << f << "\n";
    if (c.numerical_failure) return kExitNumerical;
    return c.pass ? kExitOk : kExitCheckFailed;
  };
}

Action om_check_command(CLI::App& app, const Common& common) {
  struct Opts {
    std::string om;
    std::size_t pairs = 1000;
    double range = 0.95;
    std::optional<double> monotone_hi;
    int monotone_samples = 1000;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("om-check", "Square-root mean inequality survey for an operator monotone function");
  sub->add_option("--om", o->om, "om-spec: artanh | nev:phi0=..,dphi0=..,atoms=(t:w;...)")->required();
  sub->add_option("--pairs", o->pairs, "Number of (s,t) pairs")->capture_default_str();
  sub->add_option("--range", o->range, "Pairs lie in [-range, range]")->capture_default_str();
  sub->add_option("--monotone-hi", o->monotone_hi, "Also check phi' non-decreasing on [0, hi)");
  sub->add_option("--monotone-samples", o->monotone_samples, "Grid size for --monotone-hi")->capture_default_str();
  return [o, &common](Report& r, std::ostream& summary) {
    const OMFunction phi = OMFunction::parse(o->om);
    r.inputs = Json{{"om", phi.spec()}, {"pairs", o->pairs}, {"range", o->range}};
    const SlackSurvey s = sqrt_mean_slack_survey(phi, o->pairs, o->range, common.seed);
    r.results["slack"] = to_json(s);
    bool ok = s.violations == 0;
    summary << "min slack " << s.min_slack << " over " << s.pairs << " pairs, " << s.violations << " violations\n";
    if (o->monotone_hi) {
      r.inputs["monotone_hi"] = *o->monotone_hi;
      r.inputs["monotone_samples"] = o->monotone_samples;
      const DerivativeMonotonicity m = is_derivative_increasing(phi, *o->monotone_hi, o->monotone_samples);
      r.results["derivative_monotonicity"] = to_json(m);
      ok = ok && m.increasing;
      summary << "phi' " << (m.increasing ? "non-decreasing" : "not monotone") << " on [0, " << *o->monotone_hi
              << ")\n";
    }
    return ok ? kExitOk : kExitCheckFailed;
  };
}

Action admissible_command(CLI::App& app, const Common& common) {
  struct Opts {
    std::string psi, map, weight, coweight, distances = "auto";
    AdmissibilityConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("admissible-check", "Sampled check of the admissibility conditions");
  sub->add_option("--psi", o->psi, "Admissible function label")->required();
  sub->add_option("--map", o->map, "Corpus label")->required();
  sub->add_option("--weight", o->weight, "Weight spec (default: corpus recommendation)");
  sub->add_option("--coweight", o->coweight, "Co-weight spec (default: corpus recommendation)");
  sub->add_option("--pairs", o->cfg.pairs, "Sampled pairs")->capture_default_str();
  sub->add_option("--limit-points", o->cfg.limit_points, "Base points for the liminf condition")
      ->capture_default_str();
  sub->add_option("--margin", o->cfg.margin, "Sampled points keep this depth")->capture_default_str();
  sub->add_option("--distances", o->distances, "auto | closed_form | numerical")
      ->check(CLI::IsMember({"auto", "closed_form", "numerical"}))
      ->capture_default_str();
  return [o, &common](Report& r, std::ostream& summary) {
    const MapWeights mw = resolve(o->map, o->weight, o->coweight);
    const AdmissibleFn psi = parse_admissible(o->psi, mw.omega, mw.co_omega, o->cfg.geo);
    o->cfg.seed = common.seed;
    o->cfg.distances = o->distances == "closed_form" ? DistanceSource::closed_form
                       : o->distances == "numerical" ? DistanceSource::numerical
                                                     : DistanceSource::automatic;
    r.inputs = Json{{"psi", psi.label()},          {"map", o->map},
                    {"weight", mw.omega.label()},  {"coweight", mw.co_omega.label()},
                    {"pairs", o->cfg.pairs},       {"limit_points", o->cfg.limit_points},
                    {"margin", o->cfg.margin},     {"distances", o->distances},
                    {"geodesic", geodesic_inputs(o->cfg.geo)}};
    const AdmissibilityReport rep = check_admissible(psi, mw.entry.mapping, mw.omega, mw.co_omega, o->cfg);
    r.results = to_json(rep);
    for (const ConditionReport& c : rep.conditions) {
      summary << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL") << (c.one_sided ? " (one-sided)" : "")
              << ", worst slack " << c.worst_slack << "\n";
    }
    return rep.pass ? kExitOk : kExitCheckFailed;
  };
}

Action lim_command(CLI::App& app) {
  struct Opts {
    std::string weight, at;
    std::vector<double> radii{1e-1, 1e-2, 1e-3};
    std::size_t directions = 16;
    GeodesicConfig geo;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lim-check", "Ratio d_omega(x, x + r u)/r against omega(x)");
  sub->add_option("--weight", o->weight, "Weight spec")->required();
  sub->add_option("--at", o->at, "Base point, comma separated")->required();
  sub->add_option("--radii", o->radii, "Radii, comma separated")->delimiter(',')->capture_default_str();
  sub->add_option("--directions", o->directions, "Directions per radius")->capture_default_str();
  add_geodesic_options(sub, o->geo);
  return [o](Report& r, std::ostream& summary) {
    const Weight w = Weight::parse(o->weight);
    const Vector x = parse_user_point(o->at, w, o->geo.margin, "--at");
    r.inputs = Json{{"weight", w.label()}, {"at", to_json(x)}, {"radii", o->radii}, {"directions", o->directions},
                    {"geodesic", geodesic_inputs(o->geo)}};
    const LimRatioTable t = lim_ratio_check(x, w, o->radii, o->geo, o->directions);
    r.results = to_json(t);
    r.warnings.push_back("finitely many radii; the smallest usable radius is bounded by the optimizer tolerance");
    summary << "omega(x) = " << fmt(t.weight_at_point) << "\n";
    bool converged = true;
    for (const LimRatioRow& row : t.rows) {
      summary << "  r = " << row.radius << ": max deviation " << row.max_deviation << "\n";
      converged = converged && row.all_converged;
    }
    if (!converged) return kExitNumerical;
    return t.deviations_shrinking ? kExitOk : kExitCheckFailed;
  };
}

Action corpus_command(CLI::App& app) {
  auto* sub = app.add_subcommand("corpus", "Built-in mappings");
  auto* list = sub->add_subcommand("list", "List corpus entries");
  sub->require_subcommand(1);
  (void)list;
  return [](Report& r, std::ostream& summary) {
    Json labels = Json::array(), entries = Json::array();
    for (const std::string& label : corpus_list()) {
      const CorpusEntry e = corpus_get(label);
      labels.push_back(label);
      Json j{{"label", label},       {"dim", e.mapping.dim},     {"weight", e.weight},
             {"coweight", e.coweight}, {"psi", e.psi},           {"notes", e.notes}};
      j["known_bloch"] = e.known_bloch ? Json{{"value", e.known_bloch->value},
                                              {"derivation", e.known_bloch->derivation}}
                                       : Json(nullptr);
      entries.push_back(j);
      summary << label << "\n";
    }
    r.results = Json{{"labels", labels}, {"entries", entries}};
    return kExitOk;
  };
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify Bloch and Lipschitz numbers of mappings between weighted domains", "blochcert"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Seed for every randomized procedure")->capture_default_str();
  app.add_option("--out", common.out_path, "Write the JSON report here instead of stdout");
  app.add_flag("--timings", common.timings, "Include wall-clock timings (breaks byte-identical reports)");

  std::vector<std::pair<CLI::App*, Action>> commands;
  auto reg = [&](const char* name, Action a) { commands.emplace_back(app.get_subcommand(name), std::move(a)); };
  reg("distance", distance_command(app));
  reg("bloch", bloch_command(app, common));
  reg("lipschitz", lipschitz_command(app, common));
  reg("certify", certify_command(app, common));
  reg("om-check", om_check_command(app, common));
  reg("admissible-check", admissible_command(app, common));
  reg("lim-check", lim_command(app));
  reg("corpus", corpus_command(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& [sub, action] : commands) {
    if (!sub->parsed()) continue;
    Report report;
    report.command = sub->get_name();
    report.seed = common.seed;
    const auto start = std::chrono::steady_clock::now();
    int code = kExitOk;
    try {
      code = action(report, err);
    } catch (const std::invalid_argument& e) {
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "numerical failure: " << e.what() << "\n";
      report.results = Json::object();
      report.warnings.push_back(std::string("numerical failure: ") + e.what());
      code = kExitNumerical;
    }
    if (common.timings) {
      report.timings["total_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    const std::string text = report.to_json().dump(2) + "\n";
    if (common.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(common.out_path);
      if (!f) {
        err << "cannot write '" << common.out_path << "'\n";
        return kExitUsage;
      }
      f << text;
    }
    return code;
  }
  return kExitUsage;
}

}  // namespace blochcert
