#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "origami/containment.hpp"
#include "origami/error.hpp"
#include "origami/mso.hpp"
#include "origami/rational.hpp"
#include "origami/reduction.hpp"
#include "origami/resync.hpp"
#include "origami/traversal.hpp"

namespace py = pybind11;
using namespace origami;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transducers with origin semantics and resynchronizers";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<AlphabetMismatch>(m, "AlphabetMismatch", error.ptr());

  py::class_<RunCaps>(m, "RunCaps")
      .def(py::init([](std::size_t max_output, std::size_t max_steps) { return RunCaps{max_output, max_steps}; }),
           py::arg("max_output") = 16, py::arg("max_steps") = 64)
      .def_readwrite("max_output", &RunCaps::max_output)
      .def_readwrite("max_steps", &RunCaps::max_steps);

  py::class_<OriginGraph>(m, "OriginGraph")
      .def(py::init([](SymWord in, SymWord out, std::vector<int> origin) {
             return OriginGraph{std::move(in), std::move(out), std::move(origin)};
           }),
           py::arg("input"), py::arg("output"), py::arg("origin"))
      .def_readwrite("input", &OriginGraph::input)
      .def_readwrite("output", &OriginGraph::output)
      .def_readwrite("origin", &OriginGraph::origin)
      .def(py::self == py::self)
      .def("__repr__", [](const OriginGraph& g) {
        return "OriginGraph(input=" + py::repr(py::cast(g.input)).cast<std::string>() +
               ", output=" + py::repr(py::cast(g.output)).cast<std::string>() +
               ", origin=" + py::repr(py::cast(g.origin)).cast<std::string>() + ")";
      });

  py::class_<Transducer>(m, "Transducer")
      .def_property_readonly("input_alphabet", &Transducer::input_alphabet)
      .def_property_readonly("output_alphabet", &Transducer::output_alphabet)
      .def_property_readonly("num_states", &Transducer::num_states)
      .def_property_readonly("two_way", [](const Transducer& t) { return t.kind() == TransducerKind::two_way; })
      .def("__str__", &format_transducer);
  m.def("parse_transducer", &parse_transducer);
  m.def("parse_word", &parse_word);
  m.def("format_word", &format_word, py::arg("alphabet"), py::arg("word"), py::arg("sep") = " ");

  m.def(
      "origin_graphs",
      [](const Transducer& t, const SymWord& u, const RunCaps& caps) {
        const GraphSet s = run_origin_graphs(t, u, caps);
        return py::make_tuple(s.graphs, s.pruned);
      },
      py::arg("transducer"), py::arg("input"), py::arg("caps") = RunCaps{});
  m.def("origin_graph_dot", [](const std::vector<std::string>& in, const std::vector<std::string>& out,
                               const OriginGraph& g) { return origin_graph_dot(in, out, g); });

  py::class_<Resynchronizer>(m, "Resynchronizer")
      .def_readonly("base", &Resynchronizer::base)
      .def_readonly("params", &Resynchronizer::params)
      .def_readonly("description", &Resynchronizer::description);
  m.def("make_resync",
        py::overload_cast<const std::vector<std::string>&, const std::vector<std::string>&, std::string_view>(
            &make_resync),
        py::arg("base"), py::arg("params"), py::arg("gamma"));
  m.def("make_identity", &make_identity);
  m.def("make_universal", &make_universal);
  m.def("make_pm1", &make_pm1);
  m.def("make_shift", &make_shift);
  m.def("make_Rk", &make_Rk);
  m.def("make_block", &make_block);
  m.def("compose", &compose);
  m.def("parse_resync", &parse_resync, py::arg("text"), py::arg("default_base") = std::vector<std::string>{},
        py::arg("base_dir") = ".");
  m.def("pair_in_resync", [](const Resynchronizer& r, const OriginGraph& s, const OriginGraph& t) {
    const MembershipResult res = pair_in_resync(r, s, t);
    return py::make_tuple(res.accepted, res.witness);
  });
  m.def("is_bounded", [](const Resynchronizer& r) {
    const BoundednessResult b = is_bounded(r);
    return py::make_tuple(b.bounded, std::string(to_string(b.ambiguity)), b.pattern);
  });

  py::class_<TraversalReport>(m, "TraversalReport")
      .def_readonly("left_to_right", &TraversalReport::left_to_right)
      .def_readonly("right_to_left", &TraversalReport::right_to_left)
      .def_readonly("max_count", &TraversalReport::max_count)
      .def_readonly("argmax", &TraversalReport::argmax)
      .def_readonly("max_union", &TraversalReport::max_union);
  m.def("traversal_report", &traversal_report);
  m.def("greedy_label", [](const OriginGraph& s, const OriginGraph& t, int k) -> py::object {
    const LabelResult r = greedy_label(s, t, k);
    if (!r.ok) return py::none();
    return py::cast(to_valuation(r.labels, s.input.size()));
  });

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("holds", &Verdict::holds)
      .def_readonly("counterexample", &Verdict::counterexample)
      .def_readonly("nearest", &Verdict::nearest)
      .def_readonly("pruned", &Verdict::pruned)
      .def_readonly("graphs_checked", &Verdict::graphs_checked);
  m.def("contains_upto",
        [](const Transducer& t1, const Transducer& t2, const Resynchronizer& r, std::size_t n, const RunCaps& c) {
          return contains_upto(t1, t2, r, n, c);
        },
        py::arg("t1"), py::arg("t2"), py::arg("resync"), py::arg("max_len"), py::arg("caps") = RunCaps{});
  m.def(
      "traversal_profile",
      [](const Transducer& t1, const Transducer& t2, std::size_t n, const RunCaps& c) {
        std::vector<py::object> values;
        for (const auto& e : traversal_profile(t1, t2, n, c).entries)
          values.push_back(e.infinite ? py::cast(std::numeric_limits<double>::infinity()) : py::cast(e.value));
        return values;
      },
      py::arg("t1"), py::arg("t2"), py::arg("max_len"), py::arg("caps") = RunCaps{});
  m.def(
      "resync_search",
      [](const Transducer& t1, const Transducer& t2, int k_max, std::size_t n, const RunCaps& c) -> py::object {
        const SearchResult r = resync_search(t1, t2, k_max, n, c);
        return r.found ? py::cast(r.k) : py::none();
      },
      py::arg("t1"), py::arg("t2"), py::arg("k_max"), py::arg("max_len"), py::arg("caps") = RunCaps{});

  m.def("normalize_formula", [](std::string_view text) { return mso::to_string(mso::parse(text)); });
  m.def("compile_formula", [](std::string_view text, const std::vector<std::string>& base) {
    const mso::Formula f = mso::parse(text);
    return format_automaton(to_nfa(mso::compile(f, base, mso::free_variables(f))));
  });

  py::class_<RationalResync>(m, "RationalResync").def_readonly("description", &RationalResync::description);
  m.def("parse_rational", &parse_rational);
  m.def("make_rational_block", &make_rational_block);
  m.def("rational_pair_accepts", &rational_pair_accepts);
  m.def("interleave", &interleave);
  m.def("deinterleave", &deinterleave);

  py::class_<TuringMachine>(m, "TuringMachine")
      .def_readonly("states", &TuringMachine::states)
      .def_readonly("alphabet", &TuringMachine::alphabet);
  m.def("parse_machine", &parse_machine);
  py::class_<TileSet>(m, "TileSet")
      .def_readonly("gamma", &TileSet::gamma)
      .def("names", &TileSet::names)
      .def("__str__", &format_tiles);
  m.def("build_tiles", &build_tiles);
  m.def("build_up", &build_up);
  m.def("build_down", &build_down);
  m.def("check_domino_lemma", [](const TuringMachine& tm, const TileSet& t, const std::vector<std::size_t>& lambda) {
    return std::string(to_string(check_domino_lemma(tm, t, lambda).status));
  });
}
