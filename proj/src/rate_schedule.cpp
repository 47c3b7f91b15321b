#include "exgraph/rate_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exgraph/errors.hpp"

namespace exgraph {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_finite_non_negative(double value, const std::string& what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ArgumentError(what + " must be a finite non-negative number, got " +
                        std::to_string(value));
  }
}

}  // namespace

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return std::round(out);
}

RateSchedule RateSchedule::geometric(double alpha, double c) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("geometric schedule needs 0 < alpha < 1, got " + std::to_string(alpha));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ArgumentError("geometric schedule needs c > 0, got " + std::to_string(c));
  }
  return RateSchedule(Geometric{alpha, c});
}

RateSchedule RateSchedule::beta_uniform(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ArgumentError("beta_uniform schedule needs c > 0, got " + std::to_string(c));
  }
  return RateSchedule(BetaUniform{c});
}

RateSchedule from_moment_measure(std::vector<MomentAtom> atoms) {
  return RateSchedule::moment_atoms(std::move(atoms));
}

RateSchedule RateSchedule::moment_atoms(std::vector<MomentAtom> atoms) {
  if (atoms.empty()) throw ArgumentError("moment measure needs at least one atom");
  for (const auto& atom : atoms) {
    if (!(atom.location >= 0.0 && atom.location <= 1.0)) {
      throw ArgumentError("moment atom location " + std::to_string(atom.location) +
                          " outside [0, 1]");
    }
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) {
      throw ArgumentError("moment atom weight must be positive, got " +
                          std::to_string(atom.weight));
    }
  }
  return RateSchedule(MomentAtoms{std::move(atoms)});
}

RateSchedule RateSchedule::table(std::map<int, std::vector<double>> rows,
                                 std::optional<int> n_max) {
  if (rows.empty()) throw ArgumentError("rate table has no rows");
  for (const auto& [n, row] : rows) {
    if (n < 0) throw ArgumentError("rate table level must be non-negative");
    if (row.size() != static_cast<std::size_t>(n) + 1) {
      throw ArgumentError("rate table row " + std::to_string(n) + " must have " +
                          std::to_string(n + 1) + " entries, got " + std::to_string(row.size()));
    }
    for (std::size_t r = 0; r < row.size(); ++r) {
      check_finite_non_negative(row[r], "rate λ_" + std::to_string(n) + "(" + std::to_string(r) + ")");
    }
  }
  const int largest = rows.rbegin()->first;
  const int limit = n_max.value_or(largest);
  if (limit < largest) {
    throw ArgumentError("rate table n_max " + std::to_string(limit) + " below its largest row " +
                        std::to_string(largest));
  }
  return RateSchedule(Table{limit, std::move(rows)});
}

RateSchedule RateSchedule::constant_table(int n_max, double value) {
  std::map<int, std::vector<double>> rows;
  for (int n = 0; n <= n_max; ++n) rows[n] = std::vector<double>(static_cast<std::size_t>(n) + 1, value);
  return table(std::move(rows), n_max);
}

bool RateSchedule::has_level(int n) const {
  if (n < 0) return false;
  if (const auto* t = std::get_if<Table>(&kind_)) return t->rows.contains(n);
  return true;
}

std::optional<int> RateSchedule::max_level() const {
  if (const auto* t = std::get_if<Table>(&kind_)) return t->n_max;
  return std::nullopt;
}

double RateSchedule::lambda(int n, int r) const {
  if (n < 0 || r < 0 || r > n) {
    throw ArgumentError("rate index (n=" + std::to_string(n) + ", r=" + std::to_string(r) +
                        ") needs 0 <= r <= n");
  }
  return std::visit(
      Overloaded{
          [&](const Geometric& g) {
            return g.c * std::pow(g.alpha, r) * std::pow(1.0 - g.alpha, n - r);
          },
          [&](const BetaUniform& b) { return b.c / ((n + 1) * binomial(n, r)); },
          [&](const MomentAtoms& m) {
            double sum = 0.0;
            for (const auto& atom : m.atoms) {
              sum += atom.weight * std::pow(atom.location, r) * std::pow(1.0 - atom.location, n - r);
            }
            return sum;
          },
          [&](const Table& t) {
            auto it = t.rows.find(n);
            if (it == t.rows.end()) {
              throw ArgumentError("rate table has no row for level n=" + std::to_string(n));
            }
            return it->second[static_cast<std::size_t>(r)];
          },
      },
      kind_);
}

std::vector<double> RateSchedule::row(int n) const {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int r = 0; r <= n; ++r) out[static_cast<std::size_t>(r)] = lambda(n, r);
  return out;
}

std::string RateSchedule::kind_name() const {
  return std::visit(Overloaded{
                        [](const Geometric&) { return std::string("geometric"); },
                        [](const BetaUniform&) { return std::string("beta_uniform"); },
                        [](const MomentAtoms&) { return std::string("moment_atoms"); },
                        [](const Table&) { return std::string("table"); },
                    },
                    kind_);
}

double ConsistencyWitness::violation() const { return std::abs(lower - upper_sum); }

ConsistencyReport check_consistency(const RateSchedule& schedule, int n_max, double tol) {
  if (n_max < 1) throw ArgumentError("check_consistency needs n_max >= 1");
  ConsistencyReport report;
  report.n_max = n_max;
  report.tolerance = tol;
  for (int n = 1; n < n_max; ++n) {
    if (!schedule.has_level(n) || !schedule.has_level(n + 1)) continue;
    for (int r = 0; r <= n; ++r) {
      ConsistencyWitness w{n, r, schedule.lambda(n, r),
                           schedule.lambda(n + 1, r) + schedule.lambda(n + 1, r + 1)};
      const double v = w.violation();
      report.max_violation = std::max(report.max_violation, v);
      if (v > tol) report.witnesses.push_back(w);
    }
  }
  return report;
}

RateSchedule derive_lower(const std::vector<double>& top_row) {
  if (top_row.empty()) throw ArgumentError("derive_lower needs a non-empty row");
  const int top = static_cast<int>(top_row.size()) - 1;
  for (std::size_t r = 0; r < top_row.size(); ++r) {
    check_finite_non_negative(top_row[r], "rate λ_" + std::to_string(top) + "(" + std::to_string(r) + ")");
  }
  std::map<int, std::vector<double>> rows;
  rows[top] = top_row;
  for (int n = top - 1; n >= 0; --n) {
    const auto& upper = rows[n + 1];
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r) {
      row[static_cast<std::size_t>(r)] = upper[static_cast<std::size_t>(r)] + upper[static_cast<std::size_t>(r) + 1];
    }
    rows[n] = std::move(row);
  }
  return RateSchedule::table(std::move(rows), top);
}

}  // namespace exgraph
