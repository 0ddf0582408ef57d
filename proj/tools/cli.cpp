#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "cfsem/counterfactual.hpp"
#include "cfsem/errors.hpp"
#include "cfsem/imaging.hpp"
#include "cfsem/model_io.hpp"
#include "cfsem/report.hpp"

namespace cfsem::cli {

namespace {

struct Options {
  std::string model_path;
  std::string formula;
  std::string query;
  std::string evidence;
  std::string do_conj;
  std::string weighting = "inverse-distance";
  std::string dependence = "probabilistic";
  std::string selection;
  std::string transfer = "bayes";
  unsigned digits = 6;
};

WeightingStrategy weighting_from(const std::string& name) {
  if (name == "inverse-distance") return WeightingStrategy::InverseDistance;
  if (name == "uniform") return WeightingStrategy::Uniform;
  if (name == "nearest-only") return WeightingStrategy::NearestOnly;
  throw UsageError("unknown weighting '" + name + "'");
}

DependenceMode dependence_from(const std::string& name) {
  if (name == "probabilistic") return DependenceMode::Probabilistic;
  if (name == "structural") return DependenceMode::Structural;
  throw UsageError("unknown dependence mode '" + name + "'");
}

MassTransfer transfer_from(const std::string& name) {
  if (name == "lewis") return MassTransfer::LewisUnique;
  if (name == "bayes") return MassTransfer::Bayes;
  if (name == "equal") return MassTransfer::Equal;
  throw UsageError("unknown transfer '" + name + "'");
}

ModelSpec load_checked(const std::string& path) {
  ModelSpec spec = load_model_file(path);
  ValidationReport report = validate_model(spec);
  if (!report.ok())
    throw UsageError("invalid model '" + path + "': " + report.violations.front());
  return spec;
}

ProbabilisticModel load_probabilistic(const std::string& path) {
  ModelSpec spec = load_checked(path);
  if (!spec.is_probabilistic())
    throw UsageError("model '" + path + "' is deterministic; this command needs cpt rows");
  return to_probabilistic(spec);
}

DeterministicModel load_deterministic(const std::string& path) {
  ModelSpec spec = load_checked(path);
  if (spec.is_probabilistic())
    throw UsageError("model '" + path + "' is probabilistic; this command needs eq rows");
  return to_deterministic(spec);
}

Evidence parse_evidence(const std::string& text, const CausalGraph& graph) {
  if (text.empty()) return Evidence{};
  return evidence_from_conjunction(parse_formula(text), graph);
}

std::string evidence_echo(const std::string& text) {
  return text.empty() ? "none" : print_formula(parse_formula(text));
}

void render_cf_result(Report& report, const CausalGraph& graph, const CfProbabilityResult& r) {
  report.kv("truthmaker_count", std::to_string(r.breakdown.size()));
  report.line("truthmakers (" + std::to_string(r.breakdown.size()) + "):");
  for (std::size_t k = 0; k < r.breakdown.size(); ++k) {
    const auto& row = r.breakdown[k];
    std::string name = print_intervention(row.intervention, graph);
    report.line("  " + name + ": distance " + format_fraction(row.distance) + ", weight " +
                format_fraction(row.weight) + ", p(consequent) = " +
                report.number(row.consequent_prob));
    std::string key = "submodel_" + std::to_string(k + 1);
    report.kv(key, name);
    report.kv_number(key + "_distance", row.distance);
    report.kv_number(key + "_weight", row.weight);
    report.kv_number(key + "_prob", row.consequent_prob);
  }
  report.line("value: " + report.number(r.value));
  report.line("bounds: [" + format_decimal(r.lower_bound, report.digits()) + ", " +
              format_decimal(r.upper_bound, report.digits()) + "]");
  report.kv_number("value", r.value);
  report.kv_number("bound_min", r.lower_bound);
  report.kv_number("bound_max", r.upper_bound);
  if (r.zero_distance_rule_applied)
    report.line("warning: zero-distance truthmakers absorb all weight");
  report.kv_flag("zero_distance_rule", r.zero_distance_rule_applied);
  if (r.convexity_violated())
    report.line("warning: convexity violation: value lies outside the consequent bounds");
  report.kv_flag("convexity_violation", r.convexity_violated());
}

SelectionFunction make_selection(const std::string& spec, const ProbabilisticModel& updated,
                                 const Formula& antecedent) {
  if (spec == "generated:singletons")
    return generate_selection(updated, antecedent, SelectionMode::Singletons);
  if (spec == "generated:all")
    return generate_selection(updated, antecedent, SelectionMode::AllTruthmakers);
  std::ifstream in(spec);
  if (!in) throw UsageError("cannot open selection fixture '" + spec + "'");
  return load_selection(in, antecedent, updated.graph.assignment_count());
}

// imaging value plus the CMS convexity bounds used for the warning
void render_imaging(Report& report, const ProbabilisticModel& m, const CounterfactualQuery& q,
                    const Evidence& e, const Rational& value) {
  CfProbabilityResult cms = cf_probability(m, q, e, WeightingStrategy::InverseDistance);
  bool violated = value < cms.lower_bound || value > cms.upper_bound;
  report.line("value: " + report.number(value));
  report.line("bounds: [" + format_decimal(cms.lower_bound, report.digits()) + ", " +
              format_decimal(cms.upper_bound, report.digits()) + "]");
  report.kv_number("value", value);
  report.kv_number("bound_min", cms.lower_bound);
  report.kv_number("bound_max", cms.upper_bound);
  if (violated)
    report.line("warning: convexity violation: imaged value lies outside the consequent "
                "bounds over the truthmaking submodels");
  report.kv_flag("convexity_violation", violated);
}

int dispatch(const std::string& command, const Options& opt, std::ostream& out) {
  Report report(opt.digits);

  if (command == "validate") {
    ModelSpec spec = load_model_file(opt.model_path);
    ValidationReport result = validate_model(spec);
    report.kv_flag("ok", result.ok());
    if (result.ok()) {
      report.line("ok");
    } else {
      report.line("invalid model:");
      for (std::size_t k = 0; k < result.violations.size(); ++k) {
        report.line("  - " + result.violations[k]);
        report.kv("violation_" + std::to_string(k + 1), result.violations[k]);
      }
    }
    out << report.render();
    return 0;
  }

  if (command == "prob") {
    ProbabilisticModel m = load_probabilistic(opt.model_path);
    Formula f = parse_formula(opt.formula);
    report.line("formula: " + print_formula(f));
    report.line("evidence: " + evidence_echo(opt.evidence));
    report.kv("formula", print_formula(f));
    report.kv("evidence", evidence_echo(opt.evidence));
    Rational value = opt.evidence.empty()
                         ? prob(m, f)
                         : conditional_prob(m, f, parse_formula(opt.evidence));
    report.line("value: " + report.number(value));
    report.kv_number("value", value);
    out << report.render();
    return 0;
  }

  if (command == "truth") {
    DeterministicModel m = load_deterministic(opt.model_path);
    CounterfactualQuery q = parse_query(opt.query);
    bool result = briggs_truth(m, q);
    report.line("query: " + print_query(q));
    report.line(std::string("result: ") + (result ? "true" : "false"));
    report.kv("query", print_query(q));
    report.kv_flag("result", result);
    out << report.render();
    return 0;
  }

  if (command == "counterfactual") {
    ProbabilisticModel m = load_probabilistic(opt.model_path);
    CounterfactualQuery q = parse_query(opt.query);
    Evidence e = parse_evidence(opt.evidence, m.graph);
    CfProbabilityResult r =
        cf_probability(m, q, e, weighting_from(opt.weighting), dependence_from(opt.dependence));
    report.line("query: " + print_query(q));
    report.line("evidence: " + evidence_echo(opt.evidence));
    report.line("weighting: " + opt.weighting + "   dependence: " + opt.dependence);
    report.kv("query", print_query(q));
    report.kv("evidence", evidence_echo(opt.evidence));
    report.kv("weighting", opt.weighting);
    report.kv("dependence", opt.dependence);
    render_cf_result(report, m.graph, r);
    out << report.render();
    return 0;
  }

  if (command == "truthmakers") {
    ModelSpec spec = load_checked(opt.model_path);
    const CausalGraph graph = spec.is_probabilistic() ? to_probabilistic(spec).graph
                                                      : to_deterministic(spec).graph;
    Formula f = parse_formula(opt.formula);
    bind_check(f, graph);
    TruthmakerSet tms = truthmakers(f, graph);
    report.line("formula: " + print_formula(f));
    report.kv("formula", print_formula(f));
    report.kv("truthmaker_count", std::to_string(tms.size()));
    if (tms.empty()) {
      report.line("no truthmakers (unsatisfiable)");
    } else {
      report.line("truthmakers (" + std::to_string(tms.size()) + "):");
      for (std::size_t k = 0; k < tms.size(); ++k) {
        std::string name = print_intervention(tms.members[k], graph);
        report.line("  " + name);
        report.kv("truthmaker_" + std::to_string(k + 1), name);
      }
    }
    out << report.render();
    return 0;
  }

  if (command == "deps" || command == "distance") {
    ProbabilisticModel m = load_probabilistic(opt.model_path);
    DependenceMode mode = dependence_from(opt.dependence);
    ProbabilisticModel target = m;
    std::string intervention_echo = "none";
    if (!opt.do_conj.empty()) {
      Intervention i = intervention_from_conjunction(parse_formula(opt.do_conj), m.graph);
      target = apply_probabilistic(m, i);
      intervention_echo = print_intervention(i, m.graph);
    }
    DependencyRelation rel = dependencies(target, mode);
    report.line("intervention: " + intervention_echo);
    report.line("dependence: " + opt.dependence);
    report.kv("intervention", intervention_echo);
    report.kv("dependence", opt.dependence);
    if (command == "deps") {
      report.line("dependencies (" + std::to_string(rel.pairs.size()) + " of " +
                  std::to_string(rel.universe_size()) + "):");
      report.kv("pair_count", std::to_string(rel.pairs.size()));
      report.kv("universe_size", std::to_string(rel.universe_size()));
      std::size_t k = 0;
      for (const auto& [from, to] : rel.pairs) {
        std::string pair = m.graph.var(from).name + "->" + m.graph.var(to).name;
        report.line("  " + pair);
        report.kv("dep_" + std::to_string(++k), pair);
      }
    } else {
      if (opt.do_conj.empty()) throw UsageError("distance requires --do");
      Rational d = distance(m, target, mode);
      DependencyRelation base = dependencies(m, mode);
      report.line("distance: " + report.number(d));
      report.kv_number("distance", d);
      report.kv("pairs_model", std::to_string(base.pairs.size()));
      report.kv("pairs_submodel", std::to_string(rel.pairs.size()));
    }
    out << report.render();
    return 0;
  }

  if (command == "imaging") {
    ProbabilisticModel m = load_probabilistic(opt.model_path);
    CounterfactualQuery q = parse_query(opt.query);
    Evidence e = parse_evidence(opt.evidence, m.graph);
    ProbabilisticModel updated = update_evidence(m, e);
    SelectionFunction sel = make_selection(opt.selection, updated, q.antecedent);
    Rational value = imaging_cf_probability(m, q, e, sel, transfer_from(opt.transfer));
    report.line("query: " + print_query(q));
    report.line("evidence: " + evidence_echo(opt.evidence));
    report.line("selection: " + opt.selection + "   transfer: " + opt.transfer);
    report.kv("query", print_query(q));
    report.kv("evidence", evidence_echo(opt.evidence));
    report.kv("selection", opt.selection);
    report.kv("transfer", opt.transfer);
    render_imaging(report, m, q, e, value);
    out << report.render();
    return 0;
  }

  if (command == "compare") {
    ProbabilisticModel m = load_probabilistic(opt.model_path);
    CounterfactualQuery q = parse_query(opt.query);
    Evidence e = parse_evidence(opt.evidence, m.graph);
    report.line("query: " + print_query(q));
    report.line("evidence: " + evidence_echo(opt.evidence));
    report.kv("query", print_query(q));
    report.kv("evidence", evidence_echo(opt.evidence));

    CfProbabilityResult cms = cf_probability(m, q, e, WeightingStrategy::InverseDistance);
    report.blank();
    report.line("weighted submodels (inverse-distance):");
    report.line("  value: " + report.number(cms.value));
    report.kv_number("cms_value", cms.value);
    report.kv_flag("cms_convexity_violation", cms.convexity_violated());
    if (cms.convexity_violated()) report.line("  warning: convexity violation");

    ProbabilisticModel updated = update_evidence(m, e);
    SelectionFunction sel =
        generate_selection(updated, q.antecedent, SelectionMode::AllTruthmakers);
    Rational img = imaging_cf_probability(m, q, e, sel, MassTransfer::Bayes);
    bool violated = img < cms.lower_bound || img > cms.upper_bound;
    report.blank();
    report.line("imaging (generated:all, bayes):");
    report.line("  value: " + report.number(img));
    report.kv_number("imaging_value", img);
    report.kv_flag("imaging_convexity_violation", violated);
    if (violated)
      report.line("  warning: convexity violation: imaged value lies outside [" +
                  format_decimal(cms.lower_bound, report.digits()) + ", " +
                  format_decimal(cms.upper_bound, report.digits()) + "]");
    report.kv_number("bound_min", cms.lower_bound);
    report.kv_number("bound_max", cms.upper_bound);
    out << report.render();
    return 0;
  }

  throw UsageError("unknown command '" + command + "'");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"counterfactual probabilities over finite discrete causal models"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--digits", opt.digits, "decimal digits in reports")->capture_default_str();

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("model", opt.model_path, "model file")->required();
  };

  auto* validate = app.add_subcommand("validate", "check a model file");
  add_model(validate);

  auto* prob_cmd = app.add_subcommand("prob", "probability of a formula");
  add_model(prob_cmd);
  prob_cmd->add_option("-f,--formula", opt.formula, "formula")->required();
  prob_cmd->add_option("--evidence", opt.evidence, "conditioning conjunction");

  auto* truth = app.add_subcommand("truth", "truth of a counterfactual (deterministic model)");
  add_model(truth);
  truth->add_option("-q,--query", opt.query, "antecedent => consequent")->required();

  auto* cf = app.add_subcommand("counterfactual", "weighted probability of a counterfactual");
  add_model(cf);
  cf->add_option("-q,--query", opt.query, "antecedent => consequent")->required();
  cf->add_option("--evidence", opt.evidence, "evidence conjunction");
  cf->add_option("--weighting", opt.weighting, "inverse-distance|uniform|nearest-only")
      ->capture_default_str();
  cf->add_option("--dependence", opt.dependence, "probabilistic|structural")
      ->capture_default_str();

  auto* tm = app.add_subcommand("truthmakers", "truthmakers of a formula");
  add_model(tm);
  tm->add_option("-f,--formula", opt.formula, "formula")->required();

  auto* deps_cmd = app.add_subcommand("deps", "counterfactual dependencies");
  add_model(deps_cmd);
  deps_cmd->add_option("--do", opt.do_conj, "intervention conjunction");
  deps_cmd->add_option("--dependence", opt.dependence, "probabilistic|structural")
      ->capture_default_str();

  auto* dist = app.add_subcommand("distance", "similarity distance to a submodel");
  add_model(dist);
  dist->add_option("--do", opt.do_conj, "intervention conjunction")->required();
  dist->add_option("--dependence", opt.dependence, "probabilistic|structural")
      ->capture_default_str();

  auto* img = app.add_subcommand("imaging", "imaging probability of a counterfactual");
  add_model(img);
  img->add_option("-q,--query", opt.query, "antecedent => consequent")->required();
  img->add_option("--evidence", opt.evidence, "evidence conjunction");
  img->add_option("--selection", opt.selection,
                  "fixture path, generated:singletons or generated:all")
      ->required();
  img->add_option("--transfer", opt.transfer, "lewis|bayes|equal")->required();

  auto* cmp = app.add_subcommand("compare", "weighted submodels vs imaging, side by side");
  add_model(cmp);
  cmp->add_option("-q,--query", opt.query, "antecedent => consequent")->required();
  cmp->add_option("--evidence", opt.evidence, "evidence conjunction");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), opt, out);
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    if (e.is_line())
      err << "error: " << e.what() << "\n";
    else
      err << "error: " << e.what() << " (at position " << e.position() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cfsem::cli
