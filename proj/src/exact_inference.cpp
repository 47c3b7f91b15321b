#include "exgraph/exact_inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>

#include "exgraph/errors.hpp"

namespace exgraph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kDenseStateBits = 20;
constexpr double kLogRateThreshold = 30.0;
constexpr int kLogSizeThreshold = 8;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

// log(1 − e^{−λ}) without cancellation at either end.
double log_presence(double rate) {
  if (rate == 0.0) return kNegInf;
  return rate > std::log(2.0) ? std::log1p(-std::exp(-rate)) : std::log(-std::expm1(-rate));
}

struct DirectDomain {
  static constexpr bool kLog = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double mul(double a, double b) { return a * b; }
  static double add(double a, double b) { return a + b; }
  static double present(double rate) { return -std::expm1(-rate); }
  static double absent(double rate) { return std::exp(-rate); }
};

struct LogDomain {
  static constexpr bool kLog = true;
  static double zero() { return kNegInf; }
  static double one() { return 0.0; }
  static double mul(double a, double b) { return (a == kNegInf || b == kNegInf) ? kNegInf : a + b; }
  static double add(double a, double b) { return log_add(a, b); }
  static double present(double rate) { return log_presence(rate); }
  static double absent(double rate) { return -rate; }
};

std::vector<double> rates_at(const RateSchedule& schedule, int n) {
  if (!schedule.has_level(n)) {
    throw RangeError("schedule has no rates at level n=" + std::to_string(n));
  }
  return schedule.row(n);
}

bool use_log_domain(const InferenceOptions& options, int n, const std::vector<double>& rates) {
  switch (options.accumulation) {
    case Accumulation::kDirect:
      return false;
    case Accumulation::kLog:
      return true;
    case Accumulation::kAutomatic:
      break;
  }
  return n > kLogSizeThreshold ||
         std::any_of(rates.begin(), rates.end(), [](double r) { return r > kLogRateThreshold; });
}

// One clique as seen by the coverage programme: its edge bits plus, when
// marked, the flag bit that records "some marked clique is present".
struct CliqueTerm {
  std::uint64_t state_mask;
  double rate;
};

// Weights of exact covers, split by presence of a marked clique. Values are
// in the accumulation domain.
struct SplitWeights {
  double unmarked;
  double marked;
};

template <class Domain>
SplitWeights covering_weights(const std::vector<CliqueTerm>& terms, int edge_count) {
  const std::uint64_t full = (std::uint64_t{1} << edge_count) - 1;
  const std::uint64_t flag = std::uint64_t{1} << edge_count;
  const int state_bits = edge_count + 1;

  if (state_bits <= kDenseStateBits) {
    std::vector<double> w(std::size_t{1} << state_bits, Domain::zero());
    w[0] = Domain::one();
    for (const auto& term : terms) {
      const double p = Domain::present(term.rate);
      const double q = Domain::absent(term.rate);
      // Descending order: s | mask >= s has already been updated this round.
      for (std::size_t s = w.size(); s-- > 0;) {
        const double v = w[s];
        if (v == Domain::zero()) continue;
        const std::size_t t = s | term.state_mask;
        if (t == s) {
          w[s] = Domain::add(Domain::mul(v, q), Domain::mul(v, p));
        } else {
          w[s] = Domain::mul(v, q);
          w[t] = Domain::add(w[t], Domain::mul(v, p));
        }
      }
    }
    return {w[full], w[full | flag]};
  }

  std::unordered_map<std::uint64_t, double> current{{0, Domain::one()}};
  for (const auto& term : terms) {
    const double p = Domain::present(term.rate);
    const double q = Domain::absent(term.rate);
    std::unordered_map<std::uint64_t, double> next;
    next.reserve(current.size() * 2);
    auto accumulate = [&](std::uint64_t state, double value) {
      if (value == Domain::zero()) return;
      auto [it, inserted] = next.try_emplace(state, value);
      if (!inserted) it->second = Domain::add(it->second, value);
    };
    for (const auto& [state, v] : current) {
      accumulate(state, Domain::mul(v, q));
      accumulate(state | term.state_mask, Domain::mul(v, p));
    }
    current = std::move(next);
  }
  auto lookup = [&](std::uint64_t state) {
    auto it = current.find(state);
    return it == current.end() ? Domain::zero() : it->second;
  };
  return {lookup(full), lookup(full | flag)};
}

// Everything graph-conditional quantities need about (G, λ_n).
struct GraphProblem {
  int n = 0;
  int edge_count = 0;
  std::vector<double> rates;
  std::vector<SubsetMask> cliques;
  std::vector<std::uint64_t> clique_edges;
  // Σ over non-cliques a with #a >= 2 of λ(#a).
  double excluded_rate_sum = 0.0;
  bool log_domain = false;
};

void require_edge_cap(const Graph& graph, const EnumerationLimits& limits) {
  if (graph.edge_count() > static_cast<std::size_t>(limits.max_edges) || graph.edge_count() > 62) {
    throw ResourceError("graph has " + std::to_string(graph.edge_count()) +
                        " edges; exact enumeration is capped at " +
                        std::to_string(std::min(limits.max_edges, 62)));
  }
}

GraphProblem make_problem(const Graph& graph, const RateSchedule& schedule,
                          const InferenceOptions& options) {
  GraphProblem problem;
  problem.n = graph.n();
  problem.rates = rates_at(schedule, graph.n());
  problem.cliques = list_cliques(graph, options.limits).cliques;
  problem.log_domain = use_log_domain(options, graph.n(), problem.rates);

  // Edge index by lexicographic position among E(G).
  const auto edges = graph.edges();
  problem.edge_count = static_cast<int>(edges.size());
  std::vector<int> index(static_cast<std::size_t>(graph.n() * graph.n()), -1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    index[static_cast<std::size_t>((edges[k].first - 1) * graph.n() + edges[k].second - 1)] =
        static_cast<int>(k);
  }
  std::vector<int> clique_count(static_cast<std::size_t>(graph.n()) + 1, 0);
  for (auto c : problem.cliques) {
    ++clique_count[static_cast<std::size_t>(c.cardinality())];
    std::uint64_t mask = 0;
    const auto vs = c.elements();
    for (std::size_t x = 0; x < vs.size(); ++x) {
      for (std::size_t y = x + 1; y < vs.size(); ++y) {
        mask |= std::uint64_t{1}
                << index[static_cast<std::size_t>((vs[x] - 1) * graph.n() + vs[y] - 1)];
      }
    }
    problem.clique_edges.push_back(mask);
  }
  for (int r = 2; r <= graph.n(); ++r) {
    const double non_cliques = binomial(graph.n(), r) - clique_count[static_cast<std::size_t>(r)];
    problem.excluded_rate_sum += non_cliques * problem.rates[static_cast<std::size_t>(r)];
  }
  return problem;
}

struct ProblemWeights {
  SplitWeights split;
  bool log_domain;
};

ProblemWeights weigh(const GraphProblem& problem,
                         const std::function<bool(SubsetMask)>& marked) {
  std::vector<CliqueTerm> terms;
  terms.reserve(problem.cliques.size());
  const std::uint64_t flag = std::uint64_t{1} << problem.edge_count;
  for (std::size_t i = 0; i < problem.cliques.size(); ++i) {
    const auto c = problem.cliques[i];
    terms.push_back({problem.clique_edges[i] | (marked && marked(c) ? flag : 0),
                     problem.rates[static_cast<std::size_t>(c.cardinality())]});
  }
  if (problem.log_domain) return {covering_weights<LogDomain>(terms, problem.edge_count), true};
  return {covering_weights<DirectDomain>(terms, problem.edge_count), false};
}

double marked_fraction(const ProblemWeights& w) {
  const double total = w.log_domain ? log_add(w.split.unmarked, w.split.marked)
                                    : w.split.unmarked + w.split.marked;
  if (total == (w.log_domain ? kNegInf : 0.0)) {
    throw DegenerateInputError("the observed graph has probability zero under this schedule");
  }
  if (!w.log_domain) return w.split.marked / total;
  if (w.split.marked == kNegInf) return 0.0;
  return std::exp(w.split.marked - total);
}

void check_cluster_query(SubsetMask cluster, const Graph& graph) {
  if (cluster.n() != graph.n()) {
    throw ArgumentError("cluster and graph have different ground sets");
  }
  if (cluster.cardinality() < 2) {
    throw ArgumentError("cluster queries need #H >= 2; smaller subsets are independent of G");
  }
}

double log_family_point_prob(const SubsetFamily& family, const std::vector<double>& rates) {
  const int n = family.n();
  std::vector<double> present(static_cast<std::size_t>(n) + 1, 0.0);
  for (auto a : family.members()) present[static_cast<std::size_t>(a.cardinality())] += 1.0;
  double out = 0.0;
  for (int r = 0; r <= n; ++r) {
    const double k = present[static_cast<std::size_t>(r)];
    const double rate = rates[static_cast<std::size_t>(r)];
    if (k > 0.0) {
      const double lp = log_presence(rate);
      if (lp == kNegInf) return kNegInf;
      out += k * lp;
    }
    out -= (binomial(n, r) - k) * rate;
  }
  return out;
}

void collect_cliques(const Graph& graph, std::uint32_t clique, std::uint32_t candidates,
                     std::vector<SubsetMask>& out) {
  for (std::uint32_t rest = candidates; rest != 0; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    const std::uint32_t next = clique | (std::uint32_t{1} << v);
    out.emplace_back(graph.n(), next);
    collect_cliques(graph, next, candidates & graph.neighbours(v + 1) & ~full_bits(v + 1), out);
  }
}

}  // namespace

CliqueSet list_cliques(const Graph& graph, const EnumerationLimits& limits) {
  require_edge_cap(graph, limits);
  std::vector<SubsetMask> cliques;
  for (int v = 1; v <= graph.n(); ++v) {
    collect_cliques(graph, std::uint32_t{1} << (v - 1), graph.neighbours(v) & ~full_bits(v),
                    cliques);
  }
  std::sort(cliques.begin(), cliques.end());
  return CliqueSet{graph, std::move(cliques)};
}

CoverEnumeration enumerate_monotone_covers(const Graph& graph, const EnumerationLimits& limits) {
  auto cliques = list_cliques(graph, limits).cliques;
  if (cliques.size() > static_cast<std::size_t>(limits.max_cover_cliques)) {
    throw ResourceError("graph has " + std::to_string(cliques.size()) +
                        " cliques; cover enumeration is capped at " +
                        std::to_string(limits.max_cover_cliques));
  }
  // Larger cliques first so that coverage saturates early.
  std::stable_sort(cliques.begin(), cliques.end(), [](SubsetMask a, SubsetMask b) {
    return a.cardinality() > b.cardinality();
  });

  const auto edges = graph.edges();
  const std::uint64_t full = (std::uint64_t{1} << edges.size()) - 1;
  std::vector<std::uint64_t> masks;
  for (auto c : cliques) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (c.contains(edges[k].first) && c.contains(edges[k].second)) m |= std::uint64_t{1} << k;
    }
    masks.push_back(m);
  }
  std::vector<std::uint64_t> suffix(cliques.size() + 1, 0);
  for (std::size_t i = cliques.size(); i-- > 0;) suffix[i] = suffix[i + 1] | masks[i];

  std::vector<GeneratingClass> covers;
  std::vector<SubsetMask> chosen;
  std::function<void(std::size_t, std::uint64_t)> search = [&](std::size_t i,
                                                               std::uint64_t covered) {
    if ((covered | suffix[i]) != full) return;
    if (i == cliques.size()) {
      covers.emplace_back(graph.n(), chosen);
      return;
    }
    const SubsetMask c = cliques[i];
    const bool comparable = std::any_of(chosen.begin(), chosen.end(), [&](SubsetMask d) {
      return c.is_subset_of(d) || d.is_subset_of(c);
    });
    if (!comparable) {
      chosen.push_back(c);
      search(i + 1, covered | masks[i]);
      chosen.pop_back();
    }
    search(i + 1, covered);
  };
  search(0, 0);
  std::sort(covers.begin(), covers.end());
  return CoverEnumeration{graph, std::move(covers)};
}

double family_point_prob(const SubsetFamily& family, const RateSchedule& schedule,
                         const InferenceOptions& options) {
  const auto rates = rates_at(schedule, family.n());
  if (use_log_domain(options, family.n(), rates)) {
    return std::exp(log_family_point_prob(family, rates));
  }
  const int n = family.n();
  std::vector<int> present(static_cast<std::size_t>(n) + 1, 0);
  for (auto a : family.members()) ++present[static_cast<std::size_t>(a.cardinality())];
  double out = 1.0;
  for (int r = 0; r <= n; ++r) {
    const double rate = rates[static_cast<std::size_t>(r)];
    const int k = present[static_cast<std::size_t>(r)];
    out *= std::pow(DirectDomain::present(rate), k) *
           std::pow(DirectDomain::absent(rate), binomial(n, r) - k);
  }
  return out;
}

double interval_prob(const SubsetFamily& family, const RateSchedule& schedule) {
  const int n = family.n();
  const auto rates = rates_at(schedule, n);
  std::vector<int> present(static_cast<std::size_t>(n) + 1, 0);
  for (auto a : family.members()) ++present[static_cast<std::size_t>(a.cardinality())];
  double excluded = 0.0;
  for (int r = 0; r <= n; ++r) {
    excluded += (binomial(n, r) - present[static_cast<std::size_t>(r)]) *
                rates[static_cast<std::size_t>(r)];
  }
  return std::exp(-excluded);
}

double graph_prob(const Graph& graph, const RateSchedule& schedule,
                  const InferenceOptions& options) {
  const GraphProblem problem = make_problem(graph, schedule, options);
  const ProblemWeights w = weigh(problem, nullptr);
  if (!w.log_domain) {
    return (w.split.unmarked + w.split.marked) * std::exp(-problem.excluded_rate_sum);
  }
  const double total = log_add(w.split.unmarked, w.split.marked);
  if (total == kNegInf) return 0.0;
  return std::exp(total - problem.excluded_rate_sum);
}

std::vector<double> graph_law(const RateSchedule& schedule, int n,
                              const InferenceOptions& options) {
  if (n < 1 || Graph::pair_count(n) > 62 ||
      Graph::pair_count(n) > static_cast<std::size_t>(options.limits.max_edges)) {
    throw ResourceError("graph law on [" + std::to_string(n) + "] exceeds the edge cap");
  }
  const std::uint64_t count = std::uint64_t{1} << Graph::pair_count(n);
  std::vector<double> law(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    law[code] = graph_prob(Graph::from_code(n, code), schedule, options);
  }
  return law;
}

double transitivity_conditional(const RateSchedule& schedule) {
  if (!schedule.has_level(3)) throw RangeError("transitivity needs rates at level n=3");
  const double pair_present = -std::expm1(-schedule.lambda(3, 2));
  const double triple_absent = std::exp(-schedule.lambda(3, 3));
  const double numerator = 1.0 - triple_absent * (1.0 - std::pow(pair_present, 3));
  const double denominator = 1.0 - triple_absent * (1.0 - std::pow(pair_present, 2));
  if (!(denominator > 0.0)) {
    throw DegenerateInputError(
        "conditioning event {1~2, 1~3} has probability zero (λ3(2) = λ3(3) = 0)");
  }
  return numerator / denominator;
}

double cluster_prob(SubsetMask cluster, const Graph& graph, const RateSchedule& schedule,
                    const InferenceOptions& options) {
  check_cluster_query(cluster, graph);
  if (!graph.is_clique(cluster)) {
    throw ArgumentError(cluster.to_string() + " is not a clique of G, so it cannot be a cluster");
  }
  const GraphProblem problem = make_problem(graph, schedule, options);
  return marked_fraction(weigh(problem, [&](SubsetMask c) { return c == cluster; }));
}

double coarse_cluster_prob(SubsetMask cluster, const Graph& graph, const RateSchedule& schedule,
                           const InferenceOptions& options) {
  check_cluster_query(cluster, graph);
  const GraphProblem problem = make_problem(graph, schedule, options);
  return marked_fraction(
      weigh(problem, [&](SubsetMask c) { return cluster.is_subset_of(c); }));
}

std::vector<ClassCandidate> classify_extension(const SubsetFamily& x_star,
                                               const Graph& extended_graph,
                                               const RateSchedule& schedule,
                                               const InferenceOptions& options) {
  const int n = x_star.n();
  if (extended_graph.n() != n + 1) {
    throw ArgumentError("extended graph must live on [n+1] = [" + std::to_string(n + 1) + "]");
  }
  if (restrict_graph(extended_graph, n) != clique_graph(monotone_cover(x_star))) {
    throw InconsistencyError("extended graph restricted to [n] differs from the graph of X*");
  }
  if (x_star.size() > static_cast<std::size_t>(options.limits.max_classify_members)) {
    throw ResourceError("classification enumerates 3^|X*| candidates; |X*| = " +
                        std::to_string(x_star.size()) + " exceeds cap " +
                        std::to_string(options.limits.max_classify_members));
  }
  const auto rates = rates_at(schedule, n + 1);
  const std::uint32_t new_vertex = std::uint32_t{1} << n;

  // Each e ∈ X* lifts to a non-empty subset of {e, e ∪ {n+1}}.
  const std::size_t k = x_star.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;

  std::vector<SubsetFamily> families;
  std::vector<double> log_weight;
  std::vector<SubsetMask> members;
  for (std::size_t choice = 0; choice < total; ++choice) {
    members.clear();
    std::size_t rest = choice;
    for (auto e : x_star.members()) {
      const std::size_t pick = rest % 3;
      rest /= 3;
      if (pick != 1) members.emplace_back(n + 1, e.bits());
      if (pick != 0) members.emplace_back(n + 1, e.bits() | new_vertex);
    }
    SubsetFamily candidate(n + 1, members);
    if (clique_graph(monotone_cover(candidate)) != extended_graph) continue;
    log_weight.push_back(log_family_point_prob(candidate, rates));
    families.push_back(std::move(candidate));
  }
  if (families.empty()) {
    throw InconsistencyError("no family on [n+1] restricts to X* and projects to the graph");
  }
  double log_total = kNegInf;
  for (double lw : log_weight) log_total = log_add(log_total, lw);
  if (log_total == kNegInf) {
    throw DegenerateInputError("every consistent extension has probability zero");
  }

  std::vector<ClassCandidate> out;
  out.reserve(families.size());
  for (std::size_t i = 0; i < families.size(); ++i) {
    const double p = log_weight[i] == kNegInf ? 0.0 : std::exp(log_weight[i] - log_total);
    out.push_back({std::move(families[i]), p});
  }
  std::sort(out.begin(), out.end(),
            [](const ClassCandidate& a, const ClassCandidate& b) { return a.family < b.family; });
  return out;
}

double marginal_restriction_check(const RateSchedule& schedule, int m, int n,
                                  const InferenceOptions& options) {
  if (m < 1 || m >= n) throw RangeError("marginal check needs 1 <= m < n");
  const auto upper = graph_law(schedule, n, options);
  const auto lower = graph_law(schedule, m, options);
  std::vector<double> pushed(lower.size(), 0.0);
  for (std::uint64_t code = 0; code < upper.size(); ++code) {
    pushed[restrict_graph(Graph::from_code(n, code), m).code()] += upper[code];
  }
  double worst = 0.0;
  for (std::size_t code = 0; code < lower.size(); ++code) {
    worst = std::max(worst, std::abs(lower[code] - pushed[code]));
  }
  return worst;
}

}  // namespace exgraph
