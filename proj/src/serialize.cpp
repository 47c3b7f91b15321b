#include "exgraph/serialize.hpp"

#include <string>

#include "exgraph/errors.hpp"

namespace exgraph {

namespace {

void check_version(const Json& doc) {
  if (doc.contains("format_version") && doc.at("format_version") != kFormatVersion) {
    throw ArgumentError("unsupported format_version " + doc.at("format_version").dump());
  }
}

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw ArgumentError(std::string("document is missing field \"") + name + "\"");
  }
  return doc.at(name);
}

int int_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number_integer()) throw ArgumentError(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw ArgumentError(what + " must be a number");
  return v.get<double>();
}

std::vector<SubsetMask> masks_from_json(const Json& doc, int n) {
  const Json& members = field(doc, "members");
  if (!members.is_array()) throw ArgumentError("\"members\" must be an array");
  std::vector<SubsetMask> out;
  for (const auto& m : members) out.push_back(subset_from_json(m, n));
  return out;
}

Json masks_to_json(int n, std::span<const SubsetMask> masks) {
  Json members = Json::array();
  for (auto a : masks) members.push_back(to_json(a));
  return Json{{"format_version", kFormatVersion}, {"n", n}, {"members", members}};
}

}  // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ArgumentError(std::string("malformed JSON: ") + e.what());
  }
}

Json to_json(SubsetMask a) { return Json(a.elements()); }

SubsetMask subset_from_json(const Json& doc, int n) {
  if (!doc.is_array()) throw ArgumentError("a subset must be an array of vertex numbers");
  std::vector<int> elements;
  for (const auto& e : doc) {
    if (!e.is_number_integer()) throw ArgumentError("subset elements must be integers");
    elements.push_back(e.get<int>());
  }
  return SubsetMask::from_elements(n, elements);
}

Json to_json(const SubsetFamily& family) { return masks_to_json(family.n(), family.members()); }

SubsetFamily family_from_json(const Json& doc) {
  check_version(doc);
  const int n = int_field(doc, "n");
  return SubsetFamily(n, masks_from_json(doc, n));
}

Json to_json(const GeneratingClass& cover) {
  return masks_to_json(cover.n(), cover.maximal_elements());
}

GeneratingClass cover_from_json(const Json& doc) {
  check_version(doc);
  const int n = int_field(doc, "n");
  return GeneratingClass(n, masks_from_json(doc, n));
}

Json to_json(const Graph& graph) {
  Json edges = Json::array();
  for (auto [i, j] : graph.edges()) edges.push_back({i, j});
  return Json{{"format_version", kFormatVersion}, {"n", graph.n()}, {"edges", edges}};
}

Graph graph_from_json(const Json& doc) {
  check_version(doc);
  const int n = int_field(doc, "n");
  const Json& edges = field(doc, "edges");
  if (!edges.is_array()) throw ArgumentError("\"edges\" must be an array");
  Graph g(n);
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ArgumentError("each edge must be a pair of vertex numbers");
    }
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

Json to_json(const RateSchedule& schedule) {
  Json doc;
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, RateSchedule::Geometric>) {
          doc = {{"kind", "geometric"}, {"alpha", kind.alpha}, {"c", kind.c}};
        } else if constexpr (std::is_same_v<K, RateSchedule::BetaUniform>) {
          doc = {{"kind", "beta_uniform"}, {"c", kind.c}};
        } else if constexpr (std::is_same_v<K, RateSchedule::MomentAtoms>) {
          Json atoms = Json::array();
          for (const auto& a : kind.atoms) atoms.push_back({a.location, a.weight});
          doc = {{"kind", "moment_atoms"}, {"atoms", atoms}};
        } else {
          Json rows = Json::object();
          for (const auto& [n, row] : kind.rows) rows[std::to_string(n)] = row;
          doc = {{"kind", "table"}, {"n", kind.n_max}, {"rows", rows}};
        }
      },
      schedule.kind());
  return doc;
}

RateSchedule schedule_from_json(const Json& doc) {
  const Json& kind_field = field(doc, "kind");
  if (!kind_field.is_string()) throw ArgumentError("schedule \"kind\" must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "geometric") {
    const double c = doc.contains("c") ? number(doc.at("c"), "c") : 1.0;
    return RateSchedule::geometric(number(field(doc, "alpha"), "alpha"), c);
  }
  if (kind == "beta_uniform") {
    return RateSchedule::beta_uniform(doc.contains("c") ? number(doc.at("c"), "c") : 1.0);
  }
  if (kind == "moment_atoms") {
    std::vector<MomentAtom> atoms;
    const Json& list = field(doc, "atoms");
    if (!list.is_array()) throw ArgumentError("\"atoms\" must be an array of [x, w] pairs");
    for (const auto& a : list) {
      if (!a.is_array() || a.size() != 2) throw ArgumentError("each atom must be [x, w]");
      atoms.push_back({number(a[0], "atom location"), number(a[1], "atom weight")});
    }
    return from_moment_measure(std::move(atoms));
  }
  if (kind == "table") {
    const Json& rows_doc = field(doc, "rows");
    if (!rows_doc.is_object()) throw ArgumentError("\"rows\" must map levels to rate rows");
    std::map<int, std::vector<double>> rows;
    for (const auto& [key, value] : rows_doc.items()) {
      std::size_t consumed = 0;
      int level = -1;
      try {
        level = std::stoi(key, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != key.size()) throw ArgumentError("table row key \"" + key + "\" is not a level");
      if (!value.is_array()) throw ArgumentError("table row " + key + " must be an array");
      std::vector<double> row;
      for (const auto& v : value) row.push_back(number(v, "table rate"));
      rows[level] = std::move(row);
    }
    std::optional<int> n_max;
    if (doc.contains("n")) n_max = int_field(doc, "n");
    return RateSchedule::table(std::move(rows), n_max);
  }
  throw ArgumentError("unknown schedule kind \"" + kind + "\"");
}

Json to_json(const PointProcessRealization& realization) {
  Json counts = Json::array();
  for (std::size_t bits = 0; bits < realization.counts().size(); ++bits) {
    if (realization.counts()[bits] == 0) continue;
    counts.push_back({{"subset", to_json(SubsetMask(realization.n(), static_cast<std::uint32_t>(bits)))},
                      {"count", realization.counts()[bits]}});
  }
  return Json{{"n", realization.n()},
              {"mode", realization.mode() == SamplingMode::kFullCounts ? "poisson_counts"
                                                                       : "support_only"},
              {"counts", counts}};
}

Json to_json(const PipelineSample& sample) {
  return Json{{"realization", to_json(sample.realization)},
              {"support", to_json(sample.support)},
              {"cover", to_json(sample.cover)},
              {"graph", to_json(sample.graph)}};
}

Json to_json(const ConsistencyReport& report) {
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"n", w.n}, {"r", w.r}, {"lambda_n_r", w.lower},
                         {"lambda_n1_r_plus_r1", w.upper_sum}, {"violation", w.violation()}});
  }
  return Json{{"n_min", report.n_min},
              {"n_max", report.n_max},
              {"tolerance", report.tolerance},
              {"max_violation", report.max_violation},
              {"witnesses", witnesses}};
}

}  // namespace exgraph
