#pragma once

// Bitmask representations of the three projective systems used throughout:
//   subset families  E_n = 2^(2^[n])
//   monotone sets    F_n  (stored as generating classes / antichains)
//   graphs           G_n
// together with their partial orders, restriction and permutation maps, the
// least monotone cover (families -> monotone sets) and the clique graph
// (monotone sets -> graphs).
//
// Element i of the ground set [n] = {1, ..., n} is bit (i - 1). Every
// enumeration emits masks in increasing order of their integer bit pattern.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace exgraph {

// Representation limit for a ground set; enumeration caps are far lower.
inline constexpr int kMaxGroundSize = 31;

// Cost model: power-set loops touch 2^n masks, family-space loops 2^(2^n)
// families. Exceeding a cap raises ResourceError.
struct EnumerationLimits {
  int max_power_set_n = 16;     // loops over all a in 2^[n]
  int max_edges = 24;           // coverage-state sums carry 2^edges states
  int max_cover_cliques = 24;   // antichain listing is 2^(#cliques) worst case
  int max_classify_members = 12;  // classify enumerates 3^|X*| candidates

  // Defaults, overridden by EXGRAPH_MAX_N / EXGRAPH_MAX_EDGES /
  // EXGRAPH_MAX_COVER_CLIQUES when set.
  static EnumerationLimits from_environment();
};

void require_power_set_size(int n, const EnumerationLimits& limits);

class SubsetMask {
 public:
  SubsetMask() = default;
  SubsetMask(int n, std::uint32_t bits);

  static SubsetMask from_elements(int n, std::span<const int> elements);
  static SubsetMask from_elements(int n, std::initializer_list<int> elements) {
    return from_elements(n, std::span<const int>(elements.begin(), elements.size()));
  }
  static SubsetMask empty(int n) { return SubsetMask(n, 0); }
  static SubsetMask full(int n);

  int n() const { return n_; }
  std::uint32_t bits() const { return bits_; }
  int cardinality() const;
  bool contains(int element) const;
  bool is_subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }
  std::vector<int> elements() const;

  // a ∩ [m], as a subset of [m].
  SubsetMask restrict_to(int m) const;
  // Same bits, reinterpreted on a larger ground set.
  SubsetMask widen_to(int n) const;

  bool operator==(const SubsetMask&) const = default;
  std::strong_ordering operator<=>(const SubsetMask& other) const {
    if (auto c = bits_ <=> other.bits_; c != 0) return c;
    return n_ <=> other.n_;
  }

  std::string to_string() const;

 private:
  int n_ = 0;
  std::uint32_t bits_ = 0;
};

std::uint32_t full_bits(int n);

class Permutation {
 public:
  // images[i - 1] = σ(i), 1-based values.
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);
  // Cycle notation, e.g. {1, 2, 3} is (1 2 3): 1->2, 2->3, 3->1.
  static Permutation cycle(int n, std::initializer_list<int> cycle);

  int n() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  SubsetMask apply(SubsetMask a) const;
  Permutation inverse() const;
  // Extends σ to [m] (m >= n) by fixing n+1..m.
  Permutation extend_to(int m) const;
  std::span<const int> images() const { return images_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

// Element of E_n: a duplicate-free collection of subsets of [n].
class SubsetFamily {
 public:
  explicit SubsetFamily(int n);
  SubsetFamily(int n, std::vector<SubsetMask> members);
  static SubsetFamily from_bits(int n, std::span<const std::uint32_t> bits);
  static SubsetFamily from_bits(int n, std::initializer_list<std::uint32_t> bits) {
    return from_bits(n, std::span<const std::uint32_t>(bits.begin(), bits.size()));
  }
  static SubsetFamily from_sets(int n, std::initializer_list<std::initializer_list<int>> sets);
  static SubsetFamily power_set(int n, const EnumerationLimits& limits = {});

  int n() const { return n_; }
  std::span<const SubsetMask> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(SubsetMask a) const;

  bool operator==(const SubsetFamily&) const = default;
  auto operator<=>(const SubsetFamily&) const = default;

  std::string to_string() const;

 private:
  int n_;
  std::vector<SubsetMask> members_;  // sorted by bit pattern
};

// Canonical form of a monotone set: its maximal elements (an antichain).
class GeneratingClass {
 public:
  explicit GeneratingClass(int n);  // 0_n, the empty monotone set
  // Throws ArgumentError unless `maximal` is an antichain.
  GeneratingClass(int n, std::vector<SubsetMask> maximal);
  static GeneratingClass from_sets(int n, std::initializer_list<std::initializer_list<int>> sets);
  // Maximal elements of an arbitrary collection.
  static GeneratingClass maximal_of(int n, std::vector<SubsetMask> masks);
  static GeneratingClass whole(int n);  // 1_n = <[n]>

  int n() const { return n_; }
  std::span<const SubsetMask> maximal_elements() const { return maximal_; }
  std::size_t size() const { return maximal_.size(); }
  bool empty() const { return maximal_.empty(); }
  // Membership in the monotone set generated by this class.
  bool covers(SubsetMask a) const;

  bool operator==(const GeneratingClass&) const = default;
  auto operator<=>(const GeneratingClass&) const = default;

  std::string to_string() const;

 private:
  int n_;
  std::vector<SubsetMask> maximal_;  // sorted by bit pattern
};

// Simple undirected graph on [n].
class Graph {
 public:
  explicit Graph(int n);
  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges);
  static Graph from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
    return from_edges(n, std::span<const std::pair<int, int>>(edges.begin(), edges.size()));
  }
  static Graph complete(int n);
  // Bit k of `code` is the k-th pair in lexicographic order (1,2),(1,3),...
  static Graph from_code(int n, std::uint64_t code);
  static std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

  int n() const { return n_; }
  bool has_edge(int i, int j) const;
  void add_edge(int i, int j);
  // Neighbourhood of vertex i as a mask over [n].
  std::uint32_t neighbours(int i) const { return adjacency_[static_cast<std::size_t>(i - 1)]; }
  std::vector<std::pair<int, int>> edges() const;  // i < j, lexicographic
  std::size_t edge_count() const;
  std::uint64_t code() const;
  bool is_clique(SubsetMask a) const;

  bool operator==(const Graph&) const = default;

  std::string to_string() const;

 private:
  int n_;
  std::vector<std::uint32_t> adjacency_;
};

// Restriction maps.
SubsetFamily restrict_family(const SubsetFamily& family, int m);
GeneratingClass restrict_generating_class(const GeneratingClass& cover, int m);
Graph restrict_graph(const Graph& graph, int m);

// Permutation action.
SubsetFamily permute_family(const SubsetFamily& family, const Permutation& sigma);
GeneratingClass permute_generating_class(const GeneratingClass& cover, const Permutation& sigma);
Graph permute_graph(const Graph& graph, const Permutation& sigma);

// Least monotone cover of a family, as its generating class.
GeneratingClass monotone_cover(const SubsetFamily& family);

// Union of cliques on the generating elements.
Graph clique_graph(const GeneratingClass& cover);

// Largest family on [n] whose restriction to [family.n()] is `family`:
// { e ∪ s : e ∈ family, s ⊆ {family.n()+1, ..., n} }.
SubsetFamily preimage_sup(const SubsetFamily& family, int n,
                          const EnumerationLimits& limits = {});

// Partial orders. All throw ArgumentError on ground-set mismatch.
bool leq(const SubsetFamily& lhs, const SubsetFamily& rhs);
bool leq(const GeneratingClass& lhs, const GeneratingClass& rhs);
bool leq(const Graph& lhs, const Graph& rhs);

}  // namespace exgraph
