#pragma once

// Rate families λ_n(r): the Poisson intensity of every subset of cardinality
// r in 2^[n]. A family is projectively consistent when
//
//   λ_n(r) = λ_{n+1}(r) + λ_{n+1}(r+1),   0 <= r <= n,
//
// which is exactly the condition for the induced graph laws to be
// infinitely exchangeable.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace exgraph {

struct MomentAtom {
  double location = 0.0;  // x_k in [0, 1]
  double weight = 0.0;    // w_k > 0

  bool operator==(const MomentAtom&) const = default;
};

class RateSchedule {
 public:
  // c·α^r(1−α)^(n−r)
  struct Geometric {
    double alpha;
    double c;
    bool operator==(const Geometric&) const = default;
  };
  // c / ((n+1)·C(n,r)), the moments of the uniform law on [0,1].
  struct BetaUniform {
    double c;
    bool operator==(const BetaUniform&) const = default;
  };
  // Σ_k w_k·x_k^r(1−x_k)^(n−r)
  struct MomentAtoms {
    std::vector<MomentAtom> atoms;
    bool operator==(const MomentAtoms&) const = default;
  };
  // Explicit rows λ_n(0..n); rows may be sparse.
  struct Table {
    int n_max;
    std::map<int, std::vector<double>> rows;
    bool operator==(const Table&) const = default;
  };
  using Kind = std::variant<Geometric, BetaUniform, MomentAtoms, Table>;

  static RateSchedule geometric(double alpha, double c = 1.0);
  static RateSchedule beta_uniform(double c = 1.0);
  static RateSchedule moment_atoms(std::vector<MomentAtom> atoms);
  // Rows must have length n + 1 and non-negative entries; n_max defaults to
  // the largest row index.
  static RateSchedule table(std::map<int, std::vector<double>> rows,
                            std::optional<int> n_max = std::nullopt);
  // Every level 0..n_max filled with the same value (generally inconsistent).
  static RateSchedule constant_table(int n_max, double value);

  // Throws ArgumentError if r > n or level n is unavailable.
  double lambda(int n, int r) const;
  // Row λ_n(0..n).
  std::vector<double> row(int n) const;
  bool has_level(int n) const;
  // Largest level defined, or nullopt if unbounded.
  std::optional<int> max_level() const;

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  bool operator==(const RateSchedule&) const = default;

 private:
  explicit RateSchedule(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct ConsistencyWitness {
  int n;
  int r;
  double lower;        // λ_n(r)
  double upper_sum;    // λ_{n+1}(r) + λ_{n+1}(r+1)

  double violation() const;
};

struct ConsistencyReport {
  int n_min = 1;
  int n_max = 1;
  double tolerance = 0.0;
  double max_violation = 0.0;
  std::vector<ConsistencyWitness> witnesses;  // entries exceeding tolerance

  bool consistent() const { return witnesses.empty(); }
};

inline constexpr double kDefaultConsistencyTolerance = 1e-12;

// Checks the recurrence for 1 <= n < n_max and 0 <= r <= n. For sparse tables
// only levels whose two rows are both present are compared.
ConsistencyReport check_consistency(const RateSchedule& schedule, int n_max,
                                    double tol = kDefaultConsistencyTolerance);

// Fills every level below N from a complete row λ_N(0..N) via the recurrence.
RateSchedule derive_lower(const std::vector<double>& top_row);

// Validates 0 <= x_k <= 1 and w_k > 0.
RateSchedule from_moment_measure(std::vector<MomentAtom> atoms);

double binomial(int n, int r);

}  // namespace exgraph
