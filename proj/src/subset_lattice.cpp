#include "exgraph/subset_lattice.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "exgraph/errors.hpp"

namespace exgraph {

namespace {

void check_ground_size(int n, int lowest = 1) {
  if (n < lowest || n > kMaxGroundSize) {
    throw RangeError("ground-set size " + std::to_string(n) + " outside [" +
                     std::to_string(lowest) + ", " + std::to_string(kMaxGroundSize) + "]");
  }
}

void check_restriction(int m, int n) {
  if (m < 1 || m > n) {
    throw RangeError("restriction size " + std::to_string(m) + " outside [1, " +
                     std::to_string(n) + "]");
  }
}

void check_same_size(int lhs, int rhs, const char* what) {
  if (lhs != rhs) {
    throw ArgumentError(std::string(what) + ": ground-set sizes differ (" + std::to_string(lhs) +
                        " vs " + std::to_string(rhs) + ")");
  }
}

int env_int(const char* name, int fallback) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return fallback;
  char* end = nullptr;
  long parsed = std::strtol(value, &end, 10);
  if (*end != '\0' || parsed <= 0) {
    throw ArgumentError(std::string("invalid value for ") + name + ": " + value);
  }
  return static_cast<int>(parsed);
}

// Sorted, duplicate-free maximal elements.
std::vector<SubsetMask> extract_maximal(std::vector<SubsetMask> masks) {
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<SubsetMask> out;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    bool dominated = false;
    // A strict superset has a strictly larger bit pattern, so only look right.
    for (std::size_t j = i + 1; j < masks.size() && !dominated; ++j) {
      dominated = masks[i].is_subset_of(masks[j]);
    }
    if (!dominated) out.push_back(masks[i]);
  }
  return out;
}

}  // namespace

EnumerationLimits EnumerationLimits::from_environment() {
  EnumerationLimits limits;
  limits.max_power_set_n = env_int("EXGRAPH_MAX_N", limits.max_power_set_n);
  limits.max_edges = env_int("EXGRAPH_MAX_EDGES", limits.max_edges);
  limits.max_cover_cliques = env_int("EXGRAPH_MAX_COVER_CLIQUES", limits.max_cover_cliques);
  return limits;
}

void require_power_set_size(int n, const EnumerationLimits& limits) {
  if (n > limits.max_power_set_n) {
    throw ResourceError("power set of [" + std::to_string(n) + "] exceeds cap n <= " +
                        std::to_string(limits.max_power_set_n));
  }
}

std::uint32_t full_bits(int n) {
  return n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
}

// ---------------------------------------------------------------- SubsetMask

SubsetMask::SubsetMask(int n, std::uint32_t bits) : n_(n), bits_(bits) {
  check_ground_size(n, 0);
  if ((bits & ~full_bits(n)) != 0) {
    throw ArgumentError("subset mask has bits above position " + std::to_string(n));
  }
}

SubsetMask SubsetMask::from_elements(int n, std::span<const int> elements) {
  check_ground_size(n, 0);
  std::uint32_t bits = 0;
  for (int e : elements) {
    if (e < 1 || e > n) {
      throw ArgumentError("element " + std::to_string(e) + " not in [" + std::to_string(n) + "]");
    }
    bits |= std::uint32_t{1} << (e - 1);
  }
  return SubsetMask(n, bits);
}

SubsetMask SubsetMask::full(int n) { return SubsetMask(n, full_bits(n)); }

int SubsetMask::cardinality() const { return std::popcount(bits_); }

bool SubsetMask::contains(int element) const {
  return element >= 1 && element <= n_ && ((bits_ >> (element - 1)) & 1U) != 0;
}

std::vector<int> SubsetMask::elements() const {
  std::vector<int> out;
  for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest) + 1);
  }
  return out;
}

SubsetMask SubsetMask::restrict_to(int m) const {
  check_restriction(m, n_);
  return SubsetMask(m, bits_ & full_bits(m));
}

SubsetMask SubsetMask::widen_to(int n) const {
  if (n < n_) throw RangeError("cannot widen to a smaller ground set");
  return SubsetMask(n, bits_);
}

std::string SubsetMask::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int e : elements()) {
    os << (first ? "" : ",") << e;
    first = false;
  }
  os << '}';
  return os.str();
}

// --------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  check_ground_size(n);
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
      throw ArgumentError("permutation images are not a bijection of [" + std::to_string(n) + "]");
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Permutation Permutation::identity(int n) {
  check_ground_size(n);
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(images));
}

Permutation Permutation::cycle(int n, std::initializer_list<int> cycle) {
  std::vector<int> images = identity(n).images_;
  std::vector<int> c(cycle);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] < 1 || c[k] > n) throw ArgumentError("cycle element outside [n]");
    images[static_cast<std::size_t>(c[k] - 1)] = c[(k + 1) % c.size()];
  }
  return Permutation(std::move(images));
}

SubsetMask Permutation::apply(SubsetMask a) const {
  check_same_size(a.n(), n(), "permutation");
  std::uint32_t bits = 0;
  for (std::uint32_t rest = a.bits(); rest != 0; rest &= rest - 1) {
    bits |= std::uint32_t{1} << (images_[static_cast<std::size_t>(std::countr_zero(rest))] - 1);
  }
  return SubsetMask(a.n(), bits);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    inv[static_cast<std::size_t>(images_[i] - 1)] = static_cast<int>(i) + 1;
  }
  return Permutation(std::move(inv));
}

Permutation Permutation::extend_to(int m) const {
  if (m < n()) throw RangeError("cannot extend a permutation to a smaller set");
  std::vector<int> images = images_;
  for (int i = n() + 1; i <= m; ++i) images.push_back(i);
  return Permutation(std::move(images));
}

// -------------------------------------------------------------- SubsetFamily

SubsetFamily::SubsetFamily(int n) : n_(n) { check_ground_size(n); }

SubsetFamily::SubsetFamily(int n, std::vector<SubsetMask> members)
    : n_(n), members_(std::move(members)) {
  check_ground_size(n);
  for (const auto& a : members_) check_same_size(a.n(), n, "family member");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SubsetFamily SubsetFamily::from_bits(int n, std::span<const std::uint32_t> bits) {
  std::vector<SubsetMask> members;
  members.reserve(bits.size());
  for (auto b : bits) members.emplace_back(n, b);
  return SubsetFamily(n, std::move(members));
}

SubsetFamily SubsetFamily::from_sets(int n,
                                     std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<SubsetMask> members;
  for (const auto& s : sets) members.push_back(SubsetMask::from_elements(n, s));
  return SubsetFamily(n, std::move(members));
}

SubsetFamily SubsetFamily::power_set(int n, const EnumerationLimits& limits) {
  check_ground_size(n);
  require_power_set_size(n, limits);
  std::vector<SubsetMask> members;
  members.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b <= full_bits(n); ++b) members.emplace_back(n, b);
  return SubsetFamily(n, std::move(members));
}

bool SubsetFamily::contains(SubsetMask a) const {
  return a.n() == n_ && std::binary_search(members_.begin(), members_.end(), a);
}

std::string SubsetFamily::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != 0) out += ",";
    out += members_[i].to_string();
  }
  return out + "}";
}

// ----------------------------------------------------------- GeneratingClass

GeneratingClass::GeneratingClass(int n) : n_(n) { check_ground_size(n); }

GeneratingClass::GeneratingClass(int n, std::vector<SubsetMask> maximal) : n_(n) {
  check_ground_size(n);
  for (const auto& a : maximal) check_same_size(a.n(), n, "generating element");
  std::sort(maximal.begin(), maximal.end());
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    for (std::size_t j = i + 1; j < maximal.size(); ++j) {
      if (maximal[i].is_subset_of(maximal[j])) {
        throw ArgumentError("generating class is not an antichain: " + maximal[i].to_string() +
                            " is contained in " + maximal[j].to_string());
      }
    }
  }
  maximal_ = std::move(maximal);
}

GeneratingClass GeneratingClass::from_sets(
    int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<SubsetMask> members;
  for (const auto& s : sets) members.push_back(SubsetMask::from_elements(n, s));
  return GeneratingClass(n, std::move(members));
}

GeneratingClass GeneratingClass::maximal_of(int n, std::vector<SubsetMask> masks) {
  check_ground_size(n);
  for (const auto& a : masks) check_same_size(a.n(), n, "generating element");
  GeneratingClass out(n);
  out.maximal_ = extract_maximal(std::move(masks));
  return out;
}

GeneratingClass GeneratingClass::whole(int n) {
  return GeneratingClass(n, {SubsetMask::full(n)});
}

bool GeneratingClass::covers(SubsetMask a) const {
  return a.n() == n_ && std::any_of(maximal_.begin(), maximal_.end(),
                                    [&](SubsetMask b) { return a.is_subset_of(b); });
}

std::string GeneratingClass::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < maximal_.size(); ++i) {
    if (i != 0) out += ",";
    out += maximal_[i].to_string();
  }
  return out + ">";
}

// --------------------------------------------------------------------- Graph

Graph::Graph(int n) : n_(n) {
  check_ground_size(n);
  adjacency_.assign(static_cast<std::size_t>(n), 0);
}

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  Graph g(n);
  for (auto [i, j] : edges) g.add_edge(i, j);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 1; i <= n; ++i) {
    g.adjacency_[static_cast<std::size_t>(i - 1)] = full_bits(n) & ~(std::uint32_t{1} << (i - 1));
  }
  return g;
}

Graph Graph::from_code(int n, std::uint64_t code) {
  if (pair_count(n) > 64) throw RangeError("graph code needs n <= 11");
  Graph g(n);
  int k = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j, ++k) {
      if ((code >> k) & 1U) g.add_edge(i, j);
    }
  }
  if (pair_count(n) < 64 && (code >> pair_count(n)) != 0) {
    throw ArgumentError("graph code has bits beyond the pair count");
  }
  return g;
}

bool Graph::has_edge(int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_) return false;
  return ((adjacency_[static_cast<std::size_t>(i - 1)] >> (j - 1)) & 1U) != 0;
}

void Graph::add_edge(int i, int j) {
  if (i < 1 || i > n_ || j < 1 || j > n_) {
    throw ArgumentError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside vertex set [" + std::to_string(n_) + "]");
  }
  if (i == j) throw ArgumentError("self-loop at vertex " + std::to_string(i));
  adjacency_[static_cast<std::size_t>(i - 1)] |= std::uint32_t{1} << (j - 1);
  adjacency_[static_cast<std::size_t>(j - 1)] |= std::uint32_t{1} << (i - 1);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n_; ++i) {
    std::uint32_t higher = adjacency_[static_cast<std::size_t>(i - 1)] & ~full_bits(i);
    for (; higher != 0; higher &= higher - 1) out.emplace_back(i, std::countr_zero(higher) + 1);
  }
  return out;
}

std::size_t Graph::edge_count() const {
  std::size_t degree_sum = 0;
  for (auto row : adjacency_) degree_sum += static_cast<std::size_t>(std::popcount(row));
  return degree_sum / 2;
}

std::uint64_t Graph::code() const {
  if (pair_count(n_) > 64) throw RangeError("graph code needs n <= 11");
  std::uint64_t code = 0;
  int k = 0;
  for (int i = 1; i <= n_; ++i) {
    for (int j = i + 1; j <= n_; ++j, ++k) {
      if (has_edge(i, j)) code |= std::uint64_t{1} << k;
    }
  }
  return code;
}

bool Graph::is_clique(SubsetMask a) const {
  check_same_size(a.n(), n_, "clique test");
  for (std::uint32_t rest = a.bits(); rest != 0; rest &= rest - 1) {
    int v = std::countr_zero(rest);
    std::uint32_t others = a.bits() & ~(std::uint32_t{1} << v);
    if ((adjacency_[static_cast<std::size_t>(v)] & others) != others) return false;
  }
  return true;
}

std::string Graph::to_string() const {
  std::ostringstream os;
  os << "G" << n_ << "[";
  bool first = true;
  for (auto [i, j] : edges()) {
    os << (first ? "" : ",") << i << "-" << j;
    first = false;
  }
  os << "]";
  return os.str();
}

// -------------------------------------------------------------- restriction

SubsetFamily restrict_family(const SubsetFamily& family, int m) {
  check_restriction(m, family.n());
  std::vector<SubsetMask> members;
  members.reserve(family.size());
  for (auto a : family.members()) members.push_back(a.restrict_to(m));
  return SubsetFamily(m, std::move(members));
}

GeneratingClass restrict_generating_class(const GeneratingClass& cover, int m) {
  check_restriction(m, cover.n());
  std::vector<SubsetMask> masks;
  masks.reserve(cover.size());
  for (auto a : cover.maximal_elements()) masks.push_back(a.restrict_to(m));
  return GeneratingClass::maximal_of(m, std::move(masks));
}

Graph restrict_graph(const Graph& graph, int m) {
  check_restriction(m, graph.n());
  Graph out(m);
  for (auto [i, j] : graph.edges()) {
    if (j <= m) out.add_edge(i, j);
  }
  return out;
}

// -------------------------------------------------------------- permutation

SubsetFamily permute_family(const SubsetFamily& family, const Permutation& sigma) {
  check_same_size(family.n(), sigma.n(), "permute_family");
  std::vector<SubsetMask> members;
  members.reserve(family.size());
  for (auto a : family.members()) members.push_back(sigma.apply(a));
  return SubsetFamily(family.n(), std::move(members));
}

GeneratingClass permute_generating_class(const GeneratingClass& cover, const Permutation& sigma) {
  check_same_size(cover.n(), sigma.n(), "permute_generating_class");
  std::vector<SubsetMask> masks;
  masks.reserve(cover.size());
  for (auto a : cover.maximal_elements()) masks.push_back(sigma.apply(a));
  return GeneratingClass(cover.n(), std::move(masks));
}

Graph permute_graph(const Graph& graph, const Permutation& sigma) {
  check_same_size(graph.n(), sigma.n(), "permute_graph");
  Graph out(graph.n());
  for (auto [i, j] : graph.edges()) out.add_edge(sigma(i), sigma(j));
  return out;
}

// ---------------------------------------------------------------- functors

GeneratingClass monotone_cover(const SubsetFamily& family) {
  return GeneratingClass::maximal_of(
      family.n(), std::vector<SubsetMask>(family.members().begin(), family.members().end()));
}

Graph clique_graph(const GeneratingClass& cover) {
  Graph g(cover.n());
  for (auto a : cover.maximal_elements()) {
    auto vs = a.elements();
    for (std::size_t x = 0; x < vs.size(); ++x) {
      for (std::size_t y = x + 1; y < vs.size(); ++y) g.add_edge(vs[x], vs[y]);
    }
  }
  return g;
}

SubsetFamily preimage_sup(const SubsetFamily& family, int n, const EnumerationLimits& limits) {
  if (n <= family.n() || n > kMaxGroundSize) {
    throw RangeError("preimage_sup target size " + std::to_string(n) +
                     " must exceed the family's ground set " + std::to_string(family.n()));
  }
  const int extra = n - family.n();
  require_power_set_size(extra, limits);
  std::vector<SubsetMask> members;
  members.reserve(family.size() << extra);
  for (auto e : family.members()) {
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << extra); ++s) {
      members.emplace_back(n, e.bits() | (s << family.n()));
    }
  }
  return SubsetFamily(n, std::move(members));
}

// ----------------------------------------------------------- partial orders

bool leq(const SubsetFamily& lhs, const SubsetFamily& rhs) {
  check_same_size(lhs.n(), rhs.n(), "family order");
  return std::includes(rhs.members().begin(), rhs.members().end(), lhs.members().begin(),
                       lhs.members().end());
}

bool leq(const GeneratingClass& lhs, const GeneratingClass& rhs) {
  check_same_size(lhs.n(), rhs.n(), "monotone-set order");
  return std::all_of(lhs.maximal_elements().begin(), lhs.maximal_elements().end(),
                     [&](SubsetMask a) { return rhs.covers(a); });
}

bool leq(const Graph& lhs, const Graph& rhs) {
  check_same_size(lhs.n(), rhs.n(), "graph order");
  for (int i = 1; i <= lhs.n(); ++i) {
    if ((lhs.neighbours(i) & ~rhs.neighbours(i)) != 0) return false;
  }
  return true;
}

}  // namespace exgraph
