#pragma once

// Exact laws by enumeration at desk scale.
//
// Subsets of cardinality <= 1 never influence the projected graph; they are
// marginalized out of every graph-level quantity (their factors sum to one).
// A cover configuration is a set S of cliques of G (cardinality >= 2) whose
// pairwise edges reproduce E(G) exactly, and
//
//   P(β(α(X*)) = G) = ∏_{a not a clique, #a>=2} e^{−λ(#a)}
//                     · Σ_S ∏_{a∈S} (1 − e^{−λ(#a)}) ∏_{a∈cliques∖S} e^{−λ(#a)}.
//
// The sum over S is evaluated by a dynamic programme over covered-edge sets,
// so its cost is #cliques · 2^#edges rather than 2^#cliques.

#include <cstdint>
#include <vector>

#include "exgraph/rate_schedule.hpp"
#include "exgraph/subset_lattice.hpp"

namespace exgraph {

enum class Accumulation {
  kAutomatic,  // log domain when any rate exceeds 30 or n > 8
  kDirect,
  kLog,
};

struct InferenceOptions {
  EnumerationLimits limits{};
  Accumulation accumulation = Accumulation::kAutomatic;
};

// All cliques of cardinality >= 2, in increasing bit-pattern order.
struct CliqueSet {
  Graph graph;
  std::vector<SubsetMask> cliques;
};

// Every antichain of cliques (cardinality >= 2) whose clique graph is G.
struct CoverEnumeration {
  Graph graph;
  std::vector<GeneratingClass> covers;  // canonical order
};

struct ClassCandidate {
  SubsetFamily family;
  double probability;
};

CliqueSet list_cliques(const Graph& graph, const EnumerationLimits& limits = {});

CoverEnumeration enumerate_monotone_covers(const Graph& graph,
                                           const EnumerationLimits& limits = {});

// P(X* = E).
double family_point_prob(const SubsetFamily& family, const RateSchedule& schedule,
                         const InferenceOptions& options = {});

// P(X* ≤_E E) = exp{−Σ_{a∉E} λ(#a)}.
double interval_prob(const SubsetFamily& family, const RateSchedule& schedule);

// P(β(α(X*)) = G).
double graph_prob(const Graph& graph, const RateSchedule& schedule,
                  const InferenceOptions& options = {});

// graph_prob for every graph on [n], indexed by Graph::code().
std::vector<double> graph_law(const RateSchedule& schedule, int n,
                              const InferenceOptions& options = {});

// P(1~2, 1~3, 2~3 | 1~2, 1~3) at level 3, in closed form.
double transitivity_conditional(const RateSchedule& schedule);

// P(X_H > 0 | β(α(X*)) = G). H must be a clique of G with #H >= 2.
double cluster_prob(SubsetMask cluster, const Graph& graph, const RateSchedule& schedule,
                    const InferenceOptions& options = {});

// P(some a ∈ X* with a ⊇ H | β(α(X*)) = G), #H >= 2.
double coarse_cluster_prob(SubsetMask cluster, const Graph& graph, const RateSchedule& schedule,
                           const InferenceOptions& options = {});

// Conditional law of X*_{n+1} given X*_n and the extended graph on [n+1].
// Candidates are returned in canonical family order and sum to one.
std::vector<ClassCandidate> classify_extension(const SubsetFamily& x_star,
                                               const Graph& extended_graph,
                                               const RateSchedule& schedule,
                                               const InferenceOptions& options = {});

// max_{G on [m]} |P_m(G) − Σ_{G' on [n], G'|[m] = G} P_n(G')|.
double marginal_restriction_check(const RateSchedule& schedule, int m, int n,
                                  const InferenceOptions& options = {});

}  // namespace exgraph
