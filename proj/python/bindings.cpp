#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exgraph/errors.hpp"
#include "exgraph/exact_inference.hpp"
#include "exgraph/harness.hpp"
#include "exgraph/rate_schedule.hpp"
#include "exgraph/sampler.hpp"
#include "exgraph/serialize.hpp"
#include "exgraph/subset_lattice.hpp"

namespace py = pybind11;
using namespace exgraph;

namespace {

py::object to_python(const Json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

SubsetMask mask_of(int n, const std::vector<int>& elements) {
  return SubsetMask::from_elements(n, elements);
}

std::vector<SubsetMask> masks_of(int n, const std::vector<std::vector<int>>& sets) {
  std::vector<SubsetMask> out;
  for (const auto& s : sets) out.push_back(mask_of(n, s));
  return out;
}

std::vector<std::vector<int>> sets_of(std::span<const SubsetMask> masks) {
  std::vector<std::vector<int>> out;
  for (auto a : masks) out.push_back(a.elements());
  return out;
}

}  // namespace

PYBIND11_MODULE(exgraph, m) {
  m.doc() = "Exact laws and simulation for Poisson-process exchangeable random graphs";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<InconsistencyError>(m, "InconsistencyError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);

  py::class_<SubsetFamily>(m, "SubsetFamily")
      .def(py::init([](int n, const std::vector<std::vector<int>>& members) {
             return SubsetFamily(n, masks_of(n, members));
           }),
           py::arg("n"), py::arg("members"))
      .def_property_readonly("n", &SubsetFamily::n)
      .def_property_readonly("members", [](const SubsetFamily& f) { return sets_of(f.members()); })
      .def("__len__", &SubsetFamily::size)
      .def("__eq__", [](const SubsetFamily& a, const SubsetFamily& b) { return a == b; })
      .def("__repr__", &SubsetFamily::to_string);

  py::class_<GeneratingClass>(m, "GeneratingClass")
      .def(py::init([](int n, const std::vector<std::vector<int>>& maximal) {
             return GeneratingClass(n, masks_of(n, maximal));
           }),
           py::arg("n"), py::arg("maximal"))
      .def_property_readonly("n", &GeneratingClass::n)
      .def_property_readonly("maximal",
                             [](const GeneratingClass& g) { return sets_of(g.maximal_elements()); })
      .def("__eq__", [](const GeneratingClass& a, const GeneratingClass& b) { return a == b; })
      .def("__repr__", &GeneratingClass::to_string);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
             return Graph::from_edges(n, edges);
           }),
           py::arg("n"), py::arg("edges") = std::vector<std::pair<int, int>>{})
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("edges", &Graph::edges)
      .def("has_edge", &Graph::has_edge)
      .def("code", &Graph::code)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", &Graph::to_string);

  py::class_<Permutation>(m, "Permutation")
      .def(py::init<std::vector<int>>(), py::arg("images"))
      .def_property_readonly("images", [](const Permutation& p) {
        return std::vector<int>(p.images().begin(), p.images().end());
      });

  py::class_<RateSchedule>(m, "RateSchedule")
      .def_static("geometric", &RateSchedule::geometric, py::arg("alpha"), py::arg("c") = 1.0)
      .def_static("beta_uniform", &RateSchedule::beta_uniform, py::arg("c") = 1.0)
      .def_static(
          "moment_atoms",
          [](const std::vector<std::pair<double, double>>& atoms) {
            std::vector<MomentAtom> out;
            for (auto [x, w] : atoms) out.push_back({x, w});
            return from_moment_measure(std::move(out));
          },
          py::arg("atoms"))
      .def_static(
          "table",
          [](const std::map<int, std::vector<double>>& rows) { return RateSchedule::table(rows); },
          py::arg("rows"))
      .def_static("from_json",
                  [](const std::string& text) { return schedule_from_json(parse_document(text)); })
      .def("to_json", [](const RateSchedule& s) { return to_python(to_json(s)); })
      .def("lam", &RateSchedule::lambda, py::arg("n"), py::arg("r"))
      .def_property_readonly("kind", &RateSchedule::kind_name);

  m.def("restrict_family", &restrict_family, py::arg("family"), py::arg("m"));
  m.def("permute_family", &permute_family, py::arg("family"), py::arg("sigma"));
  m.def("monotone_cover", &monotone_cover, py::arg("family"));
  m.def("restrict_generating_class", &restrict_generating_class, py::arg("cover"), py::arg("m"));
  m.def("clique_graph", &clique_graph, py::arg("cover"));
  m.def("restrict_graph", &restrict_graph, py::arg("graph"), py::arg("m"));
  m.def("preimage_sup", [](const SubsetFamily& f, int n) { return preimage_sup(f, n); },
        py::arg("family"), py::arg("n"));
  m.def("leq", py::overload_cast<const SubsetFamily&, const SubsetFamily&>(&leq));
  m.def("leq", py::overload_cast<const GeneratingClass&, const GeneratingClass&>(&leq));
  m.def("leq", py::overload_cast<const Graph&, const Graph&>(&leq));

  m.def(
      "check_consistency",
      [](const RateSchedule& s, int n_max, double tol) {
        return to_python(to_json(check_consistency(s, n_max, tol)));
      },
      py::arg("schedule"), py::arg("n_max"), py::arg("tol") = kDefaultConsistencyTolerance);
  m.def("derive_lower", &derive_lower, py::arg("top_row"));

  m.def(
      "sample_pipeline",
      [](const RateSchedule& s, int n, std::uint64_t seed, bool support_only) {
        return to_python(to_json(sample_pipeline(
            s, n, seed, support_only ? SamplingMode::kSupportOnly : SamplingMode::kFullCounts)));
      },
      py::arg("schedule"), py::arg("n"), py::arg("seed"), py::arg("support_only") = false);

  m.def("enumerate_monotone_covers",
        [](const Graph& g) { return enumerate_monotone_covers(g).covers; }, py::arg("graph"));
  m.def(
      "family_point_prob",
      [](const SubsetFamily& f, const RateSchedule& s) { return family_point_prob(f, s); },
      py::arg("family"), py::arg("schedule"));
  m.def("interval_prob", &interval_prob, py::arg("family"), py::arg("schedule"));
  m.def("graph_prob", [](const Graph& g, const RateSchedule& s) { return graph_prob(g, s); },
        py::arg("graph"), py::arg("schedule"));
  m.def("transitivity_conditional", &transitivity_conditional, py::arg("schedule"));
  m.def(
      "cluster_prob",
      [](const std::vector<int>& h, const Graph& g, const RateSchedule& s) {
        return cluster_prob(mask_of(g.n(), h), g, s);
      },
      py::arg("cluster"), py::arg("graph"), py::arg("schedule"));
  m.def(
      "coarse_cluster_prob",
      [](const std::vector<int>& h, const Graph& g, const RateSchedule& s) {
        return coarse_cluster_prob(mask_of(g.n(), h), g, s);
      },
      py::arg("cluster"), py::arg("graph"), py::arg("schedule"));
  m.def(
      "classify_extension",
      [](const SubsetFamily& x, const Graph& g, const RateSchedule& s) {
        std::vector<std::pair<SubsetFamily, double>> out;
        for (auto& c : classify_extension(x, g, s)) out.emplace_back(c.family, c.probability);
        return out;
      },
      py::arg("x_star"), py::arg("extended_graph"), py::arg("schedule"));
  m.def(
      "marginal_restriction_check",
      [](const RateSchedule& s, int lower, int upper) {
        return marginal_restriction_check(s, lower, upper);
      },
      py::arg("schedule"), py::arg("m"), py::arg("n"));
  m.def(
      "mc_vs_exact",
      [](const RateSchedule& sampling, const RateSchedule& exact, int n, std::uint64_t draws,
         std::uint64_t seed, double threshold) {
        return to_python(mc_vs_exact(sampling, exact, n, draws, seed, threshold).to_json());
      },
      py::arg("sampling"), py::arg("exact"), py::arg("n"), py::arg("draws"), py::arg("seed"),
      py::arg("threshold") = 4.0);
}
