#include "exgraph/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "exgraph/errors.hpp"
#include "exgraph/sampler.hpp"

namespace exgraph {

// ------------------------------------------------------------------ reports

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json RunReport::to_json() const {
  Json check_list = Json::array();
  for (const auto& c : checks) {
    check_list.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  return Json{{"format_version", kFormatVersion},
              {"command", command},
              {"inputs", inputs},
              {"schedule", schedule ? *schedule : Json(nullptr)},
              {"seed", seed ? Json(*seed) : Json(nullptr)},
              {"results", results},
              {"tolerances", tolerances},
              {"checks", check_list},
              {"pass", passed()}};
}

RunReport RunReport::from_json(const Json& doc) {
  if (!doc.is_object()) throw ArgumentError("run report must be a JSON object");
  if (doc.value("format_version", kFormatVersion) != kFormatVersion) {
    throw ArgumentError("unsupported run report format_version");
  }
  RunReport report;
  report.command = doc.at("command").get<std::string>();
  report.inputs = doc.at("inputs");
  if (!doc.at("schedule").is_null()) report.schedule = doc.at("schedule");
  if (!doc.at("seed").is_null()) report.seed = doc.at("seed").get<std::uint64_t>();
  report.results = doc.at("results");
  report.tolerances = doc.at("tolerances");
  for (const auto& c : doc.at("checks")) {
    report.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                             c.at("tolerance").get<double>(), c.at("pass").get<bool>()});
  }
  return report;
}

// ------------------------------------------------------------ harness checks

RunReport mc_vs_exact(const RateSchedule& sampling, const RateSchedule& exact, int n,
                      std::uint64_t draws, std::uint64_t seed, double se_threshold,
                      const InferenceOptions& options) {
  if (draws == 0) throw ArgumentError("mc-vs-exact needs at least one draw");
  const std::vector<double> law = graph_law(exact, n, options);
  std::vector<std::uint64_t> hits(law.size(), 0);
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto sample = sample_pipeline(sampling, n, CounterRng::draw_seed(seed, i),
                                        SamplingMode::kFullCounts, options.limits);
    ++hits[sample.graph.code()];
  }

  RunReport report;
  report.command = "mc-vs-exact";
  report.inputs = {{"n", n},
                   {"draws", draws},
                   {"threshold_standard_errors", se_threshold},
                   {"sampling_schedule", to_json(sampling)}};
  report.schedule = to_json(exact);
  report.seed = seed;
  report.tolerances = {{"standard_errors", se_threshold}};
  Json cells = Json::array();
  const double total = static_cast<double>(draws);
  for (std::uint64_t code = 0; code < law.size(); ++code) {
    const double expected = law[code];
    const double observed = static_cast<double>(hits[code]) / total;
    const double se = std::sqrt(std::max(expected * (1.0 - expected), 0.0) / total);
    const double deviation = std::abs(observed - expected);
    CheckResult check;
    check.name = "graph " + Graph::from_code(n, code).to_string();
    if (se > 0.0) {
      check.value = deviation / se;
      check.tolerance = se_threshold;
      check.pass = check.value <= se_threshold;
    } else {
      // Degenerate cell: the exact law is 0 or 1 here.
      check.value = deviation;
      check.tolerance = 0.0;
      check.pass = hits[code] == 0 ? expected == 0.0 : deviation == 0.0;
    }
    cells.push_back({{"graph", to_json(Graph::from_code(n, code))},
                     {"expected", expected},
                     {"observed", observed},
                     {"count", hits[code]},
                     {"standard_error", se},
                     {"pass", check.pass}});
    report.checks.push_back(std::move(check));
  }
  report.results = {{"cells", cells}};
  return report;
}

double exchangeability_discrepancy(const RateSchedule& schedule, int n,
                                   const InferenceOptions& options) {
  const std::vector<double> law = graph_law(schedule, n, options);
  const std::size_t pairs = Graph::pair_count(n);
  std::vector<std::pair<int, int>> pair_list;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) pair_list.emplace_back(i, j);
  }
  auto pair_index = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    // Position of (i, j) in lexicographic order.
    return static_cast<std::size_t>((i - 1) * (2 * n - i) / 2 + (j - i - 1));
  };

  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  double worst = 0.0;
  std::vector<std::size_t> target(pairs);
  do {
    for (std::size_t k = 0; k < pairs; ++k) {
      target[k] = pair_index(images[static_cast<std::size_t>(pair_list[k].first - 1)],
                             images[static_cast<std::size_t>(pair_list[k].second - 1)]);
    }
    for (std::uint64_t code = 0; code < law.size(); ++code) {
      std::uint64_t moved = 0;
      for (std::size_t k = 0; k < pairs; ++k) {
        if ((code >> k) & 1U) moved |= std::uint64_t{1} << target[k];
      }
      worst = std::max(worst, std::abs(law[code] - law[moved]));
    }
  } while (std::next_permutation(images.begin(), images.end()));
  return worst;
}

// ---------------------------------------------------------------------- CLI

namespace {

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// "-" reads standard input, "@path" reads a file, anything else is inline JSON.
Json load_document(const std::string& source, std::istream& in) {
  if (source == "-") return parse_document(read_all(in));
  if (!source.empty() && source.front() == '@') {
    std::ifstream file(source.substr(1));
    if (!file) throw ArgumentError("cannot open " + source.substr(1));
    return parse_document(read_all(file));
  }
  return parse_document(source);
}

struct ScheduleArgs {
  std::string document;
  std::string kind;
  double alpha = std::nan("");
  double c = 1.0;
  std::string atoms;
  std::string rows;

  void attach(CLI::App* sub, const std::string& flag_prefix = "") {
    sub->add_option("--" + flag_prefix + "schedule", document,
                    "schedule document (JSON, '-' for stdin, '@file')");
    if (!flag_prefix.empty()) return;
    sub->add_option("--kind", kind, "geometric | beta_uniform | moment_atoms | table");
    sub->add_option("--alpha", alpha, "geometric mixing parameter");
    sub->add_option("--c", c, "scale constant");
    sub->add_option("--atoms", atoms, "moment atoms as JSON [[x, w], ...]");
    sub->add_option("--rows", rows, "table rows as JSON {\"n\": [rates...]}");
  }

  std::optional<RateSchedule> build(std::istream& in) const {
    if (!document.empty()) return schedule_from_json(load_document(document, in));
    if (kind.empty()) return std::nullopt;
    Json doc = {{"kind", kind}, {"c", c}};
    if (!std::isnan(alpha)) doc["alpha"] = alpha;
    if (!atoms.empty()) doc["atoms"] = parse_document(atoms);
    if (!rows.empty()) doc["rows"] = parse_document(rows);
    return schedule_from_json(doc);
  }

  RateSchedule require(std::istream& in) const {
    auto s = build(in);
    if (!s) throw ArgumentError("a schedule is required (--schedule or --kind ...)");
    return *s;
  }
};

std::string error_line(const char* kind, const std::exception& e) {
  return std::string("exgraph: ") + kind + ": " + e.what() + "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in) {
  CLI::App app{"Exact laws and simulation for Poisson-process exchangeable random graphs",
               "exgraph"};
  app.require_subcommand(1);

  ScheduleArgs sched;
  ScheduleArgs exact_sched;
  std::string graph_doc;
  std::string family_doc;
  std::string cluster_doc;
  std::string row_doc;
  int n = 0;
  int m = 0;
  int nmax = 0;
  std::uint64_t seed = 0;
  std::uint64_t draws = 1;
  double schedule_tol = kDefaultConsistencyTolerance;
  double marginal_tol = 1e-10;
  double exchange_tol = 1e-10;
  double threshold = 4.0;
  bool support_only = false;

  std::function<RunReport(const InferenceOptions&)> action;

  auto* sample = app.add_subcommand("sample", "draw X -> X* -> cover -> graph pipeline samples");
  sched.attach(sample);
  sample->add_option("--n", n, "ground-set size")->required();
  sample->add_option("--seed", seed, "64-bit seed")->required();
  sample->add_option("--draws", draws, "number of draws")->default_val(1);
  sample->add_flag("--support-only", support_only, "sample Bernoulli presence only");
  sample->callback([&] {
    action = [&](const InferenceOptions& options) {
      const auto s = sched.require(in);
      RunReport r;
      r.command = "sample";
      r.inputs = {{"n", n}, {"draws", draws},
                  {"mode", support_only ? "support_only" : "poisson_counts"}};
      r.schedule = to_json(s);
      r.seed = seed;
      Json samples = Json::array();
      for (std::uint64_t i = 0; i < draws; ++i) {
        const std::uint64_t draw_seed = CounterRng::draw_seed(seed, i);
        Json doc = to_json(sample_pipeline(
            s, n, draw_seed, support_only ? SamplingMode::kSupportOnly : SamplingMode::kFullCounts,
            options.limits));
        doc["draw"] = i;
        doc["draw_seed"] = draw_seed;
        samples.push_back(std::move(doc));
      }
      r.results = {{"samples", samples}};
      return r;
    };
  });

  auto* covers = app.add_subcommand("covers", "enumerate the monotone sets projecting to a graph");
  covers->add_option("--graph", graph_doc, "graph document")->required();
  covers->callback([&] {
    action = [&](const InferenceOptions& options) {
      const Graph g = graph_from_json(load_document(graph_doc, in));
      const auto enumeration = enumerate_monotone_covers(g, options.limits);
      RunReport r;
      r.command = "covers";
      r.inputs = {{"graph", to_json(g)}};
      Json list = Json::array();
      for (const auto& c : enumeration.covers) list.push_back(to_json(c));
      r.results = {{"count", enumeration.covers.size()}, {"covers", list}};
      return r;
    };
  });

  auto* gprob = app.add_subcommand("graph-prob", "exact probability of a graph");
  gprob->add_option("--graph", graph_doc, "graph document")->required();
  sched.attach(gprob);
  gprob->callback([&] {
    action = [&](const InferenceOptions& options) {
      const Graph g = graph_from_json(load_document(graph_doc, in));
      const auto s = sched.require(in);
      RunReport r;
      r.command = "graph-prob";
      r.inputs = {{"graph", to_json(g)}};
      r.schedule = to_json(s);
      r.results = {{"probability", graph_prob(g, s, options)}};
      return r;
    };
  });

  auto add_cluster_command = [&](const char* name, const char* help, bool coarse) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--cluster", cluster_doc, "subset as JSON array, e.g. [1,2,3]")->required();
    sub->add_option("--graph", graph_doc, "graph document")->required();
    sched.attach(sub);
    sub->callback([&, name, coarse] {
      action = [&, name, coarse](const InferenceOptions& options) {
        const Graph g = graph_from_json(load_document(graph_doc, in));
        const SubsetMask h = subset_from_json(load_document(cluster_doc, in), g.n());
        const auto s = sched.require(in);
        RunReport r;
        r.command = name;
        r.inputs = {{"graph", to_json(g)}, {"cluster", to_json(h)}};
        r.schedule = to_json(s);
        r.results = {{"probability", coarse ? coarse_cluster_prob(h, g, s, options)
                                            : cluster_prob(h, g, s, options)}};
        return r;
      };
    });
  };
  add_cluster_command("cluster-prob", "P(H is exactly a cluster | G)", false);
  add_cluster_command("coarse-cluster-prob", "P(some cluster contains H | G)", true);

  auto* classify = app.add_subcommand("classify", "conditional law of X* on [n+1]");
  classify->add_option("--family", family_doc, "observed X* on [n]")->required();
  classify->add_option("--graph", graph_doc, "observed graph on [n+1]")->required();
  sched.attach(classify);
  classify->callback([&] {
    action = [&](const InferenceOptions& options) {
      const SubsetFamily x = family_from_json(load_document(family_doc, in));
      const Graph g = graph_from_json(load_document(graph_doc, in));
      const auto s = sched.require(in);
      RunReport r;
      r.command = "classify";
      r.inputs = {{"family", to_json(x)}, {"graph", to_json(g)}};
      r.schedule = to_json(s);
      Json list = Json::array();
      for (const auto& cand : classify_extension(x, g, s, options)) {
        list.push_back({{"family", to_json(cand.family)}, {"probability", cand.probability}});
      }
      r.results = {{"candidates", list}};
      return r;
    };
  });

  auto* trans = app.add_subcommand("transitivity", "P(2~3 | 1~2, 1~3) at level 3");
  sched.attach(trans);
  trans->callback([&] {
    action = [&](const InferenceOptions&) {
      const auto s = sched.require(in);
      RunReport r;
      r.command = "transitivity";
      r.schedule = to_json(s);
      r.results = {{"probability", transitivity_conditional(s)}};
      return r;
    };
  });

  auto* schedule_cmd = app.add_subcommand("schedule", "validate or derive rate schedules");
  schedule_cmd->require_subcommand(1);
  auto* check = schedule_cmd->add_subcommand("check", "check the consistency recurrence");
  sched.attach(check);
  check->add_option("--nmax", nmax, "largest level compared")->required();
  check->add_option("--tol", schedule_tol, "absolute tolerance")->capture_default_str();
  check->callback([&] {
    action = [&](const InferenceOptions&) {
      const auto s = sched.require(in);
      const auto report = check_consistency(s, nmax, schedule_tol);
      RunReport r;
      r.command = "schedule check";
      r.inputs = {{"nmax", nmax}};
      r.schedule = to_json(s);
      r.results = to_json(report);
      r.tolerances = {{"max_violation", schedule_tol}};
      r.checks.push_back({"consistency", report.max_violation, schedule_tol, report.consistent()});
      return r;
    };
  });
  auto* derive = schedule_cmd->add_subcommand("derive", "fill lower levels from a top row");
  derive->add_option("--row", row_doc, "top row as JSON array λ_N(0..N)")->required();
  derive->callback([&] {
    action = [&](const InferenceOptions&) {
      const auto row = load_document(row_doc, in);
      if (!row.is_array()) throw ArgumentError("--row must be a JSON array");
      std::vector<double> values;
      for (const auto& v : row) {
        if (!v.is_number()) throw ArgumentError("--row entries must be numbers");
        values.push_back(v.get<double>());
      }
      RunReport r;
      r.command = "schedule derive";
      r.inputs = {{"row", values}};
      r.results = {{"schedule", to_json(derive_lower(values))}};
      return r;
    };
  });

  auto* consistency = app.add_subcommand("check-consistency",
                                         "compare the level-m graph law with the pushed-forward level-n law");
  sched.attach(consistency);
  consistency->add_option("--m", m, "lower level")->required();
  consistency->add_option("--n", n, "upper level")->required();
  consistency->add_option("--tol", marginal_tol, "absolute tolerance")->capture_default_str();
  consistency->callback([&] {
    action = [&](const InferenceOptions& options) {
      const auto s = sched.require(in);
      const double d = marginal_restriction_check(s, m, n, options);
      RunReport r;
      r.command = "check-consistency";
      r.inputs = {{"m", m}, {"n", n}};
      r.schedule = to_json(s);
      r.results = {{"max_discrepancy", d}};
      r.tolerances = {{"max_discrepancy", marginal_tol}};
      r.checks.push_back({"marginal_restriction", d, marginal_tol, d <= marginal_tol});
      return r;
    };
  });

  auto* exch = app.add_subcommand("check-exchangeability",
                                  "max |P(G) - P(sigma G)| over all graphs and permutations");
  sched.attach(exch);
  exch->add_option("--n", n, "level")->required();
  exch->add_option("--tol", exchange_tol, "absolute tolerance")->capture_default_str();
  exch->callback([&] {
    action = [&](const InferenceOptions& options) {
      const auto s = sched.require(in);
      const double d = exchangeability_discrepancy(s, n, options);
      RunReport r;
      r.command = "check-exchangeability";
      r.inputs = {{"n", n}};
      r.schedule = to_json(s);
      r.results = {{"max_discrepancy", d}};
      r.tolerances = {{"max_discrepancy", exchange_tol}};
      r.checks.push_back({"exchangeability", d, exchange_tol, d <= exchange_tol});
      return r;
    };
  });

  auto* mc = app.add_subcommand("mc-vs-exact", "Monte Carlo graph frequencies vs the exact law");
  sched.attach(mc);
  exact_sched.attach(mc, "exact-");
  mc->add_option("--n", n, "level")->required();
  mc->add_option("--draws", draws, "number of draws")->required();
  mc->add_option("--seed", seed, "64-bit seed")->required();
  mc->add_option("--threshold", threshold, "standard errors allowed per cell")->default_val(4.0);
  mc->callback([&] {
    action = [&](const InferenceOptions& options) {
      const auto s = sched.require(in);
      const auto e = exact_sched.build(in).value_or(s);
      return mc_vs_exact(s, e, n, draws, seed, threshold, options);
    };
  });

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("exgraph");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    InferenceOptions options;
    options.limits = EnumerationLimits::from_environment();
    const RunReport report = action(options);
    out << report.to_json().dump(2) << "\n";
    return report.passed() ? kExitOk : kExitCheckFailed;
  } catch (const ResourceError& e) {
    err << error_line("resource cap exceeded", e);
    return kExitResource;
  } catch (const InconsistencyError& e) {
    err << error_line("inconsistent input", e);
    return kExitUsage;
  } catch (const DegenerateInputError& e) {
    err << error_line("degenerate input", e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << error_line("argument error", e);
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << error_line("range error", e);
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << error_line("malformed document", e);
    return kExitUsage;
  }
}

}  // namespace exgraph
