#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polygrow/errors.hpp"
#include "polygrow/examples.hpp"
#include "polygrow/forest.hpp"
#include "polygrow/growth.hpp"
#include "polygrow/interpretation.hpp"
#include "polygrow/pebble.hpp"
#include "polygrow/report.hpp"
#include "polygrow/skeleton.hpp"

namespace py = pybind11;
using namespace polygrow;

namespace {

// Query with its recognizer, compiled on first use.
class PyQuery {
 public:
  explicit PyQuery(Query q) : query_(std::move(q)) {}

  const Query& query() const { return query_; }
  const Recognizer& recognizer() {
    if (!recognizer_) recognizer_ = compile(query_);
    return *recognizer_;
  }
  Word word(const std::string& text) const { return query_.alphabet().parse_word(text); }

 private:
  Query query_;
  std::optional<Recognizer> recognizer_;
};

Alphabet alphabet_from(const py::object& letters) {
  if (py::isinstance<py::str>(letters)) {
    std::vector<std::string> symbols;
    for (char c : letters.cast<std::string>()) symbols.emplace_back(1, c);
    return Alphabet(symbols);
  }
  return Alphabet(letters.cast<std::vector<std::string>>());
}

std::uint64_t budget_or_default(std::optional<std::uint64_t> budget) { return budget ? *budget : default_budget(); }

PebbleMachine builtin_machine(const std::string& name) {
  if (name == "atom-square") return atom_square_machine();
  const std::string prefix = "alt-square-";
  if (name.rfind(prefix, 0) == 0) return alt_square_machine(std::stoi(name.substr(prefix.size())));
  throw Error("unknown builtin machine '" + name + "'");
}

AtomWord atom_input(const std::string& text) { return parse_atom_word(text, {"<", ">", "a"}); }

py::dict run_dict(const PebbleMachine& m, const std::string& input) {
  const RunResult r = run(m, parse_atom_word(input, m.input.symbols()), true);
  std::size_t tallest = 0;
  for (const Configuration& c : r.trace.configs) tallest = std::max(tallest, c.stack.size());
  py::dict d;
  d["status"] = to_string(r.trace.status);
  d["ok"] = r.ok();
  d["output"] = render_atom_word(r.output);
  d["steps"] = r.trace.steps;
  d["max_stack"] = tallest;
  d["config_tree_height"] = config_tree(r.trace).height;
  d["message"] = r.trace.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(polygrow, m) {
  m.doc() = "Growth rates of MSO queries, interpretations and pebble transducers";
  m.attr("__version__") = kVersion;

  const auto& error = py::register_exception<Error>(m, "PolygrowError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());

  py::class_<PyQuery>(m, "Query")
      .def(py::init([](const py::object& letters, std::vector<std::string> variables, const std::string& regex) {
             return PyQuery(parse_query(regex, alphabet_from(letters), std::move(variables)));
           }),
           py::arg("alphabet"), py::arg("variables"), py::arg("regex"))
      .def_static("parse", [](const std::string& text) { return PyQuery(load_query(parse_query_file(text))); },
                  "Parses the text of a .query file")
      .def_static("load", [](const std::string& path) { return PyQuery(load_query(read_query_file(path))); })
      .def_property_readonly("variables", [](const PyQuery& q) { return q.query().variables(); })
      .def_property_readonly("alphabet", [](const PyQuery& q) { return q.query().alphabet().symbols(); })
      .def("accepts", [](const PyQuery& q, const std::string& w, const Assignment& a) { return q.query().accepts(q.word(w), a); })
      .def("count", [](const PyQuery& q, const std::string& w) { return count_tuples(q.query(), q.word(w)); })
      .def("select", [](const PyQuery& q, const std::string& w) { return select_tuples(q.query(), q.word(w)); })
      .def(
          "growth_table",
          [](const PyQuery& q, int max_len, std::optional<std::uint64_t> b) {
            std::vector<std::pair<int, std::uint64_t>> rows;
            for (const GrowthEntry& e : growth_table(q.query(), max_len, budget_or_default(b))) rows.emplace_back(e.length, e.max_count);
            return rows;
          },
          py::arg("max_len"), py::arg("budget") = py::none())
      .def("semigroup_size", [](PyQuery& q) { return q.recognizer().size(); })
      .def("exponent", [](PyQuery& q) { return exponent(q.recognizer()); }, "None for the empty query")
      .def("fft_height", [](PyQuery& q, const std::string& w) { return build_fft(q.recognizer(), q.word(w)).height(); })
      .def("skeleton_key",
           [](PyQuery& q, const std::string& w, const Assignment& a) { return skeleton(q.recognizer(), q.word(w), a).key(); })
      .def("seed",
           [](PyQuery& q, const std::string& w, const Assignment& a) {
             std::vector<std::string> names;
             for (int v : seed(skeleton(q.recognizer(), q.word(w), a))) names.push_back(q.query().variables()[v]);
             return names;
           })
      .def(
          "crosscheck",
          [](PyQuery& q, int horizon, std::optional<std::uint64_t> b) {
            const CrossCheck c = crosscheck(q.recognizer(), horizon, budget_or_default(b));
            py::dict d;
            d["exponent"] = c.exponent;
            d["max_seed"] = c.max_seed;
            d["disjuncts"] = c.disjuncts.size();
            d["upper_bound_ok"] = c.upper_bound_ok;
            d["disagreements"] = c.disagreements;
            d["notes"] = c.notes;
            d["ok"] = c.ok();
            return d;
          },
          py::arg("horizon") = 8, py::arg("budget") = py::none());

  py::class_<OptimizedInterpretation>(m, "OptimizedInterpretation")
      .def_property_readonly("dimension", &OptimizedInterpretation::dimension)
      .def_property_readonly("horizon", &OptimizedInterpretation::horizon)
      .def("eval", [](const OptimizedInterpretation& o, const std::string& w) {
        return o.base().output.render(o.eval(o.base().input.parse_word(w)));
      });

  py::class_<Interpretation>(m, "Interpretation")
      .def_static("builtin", &builtin_interpretation)
      .def_static("parse", [](const std::string& text) { return parse_interpretation(text); }, "Parses interpretation JSON")
      .def_static("load", &load_interpretation)
      .def_property_readonly("dimension", &Interpretation::dimension)
      .def("eval", [](const Interpretation& in, const std::string& w) { return in.output.render(eval_interpretation(in, in.input.parse_word(w))); })
      .def("growth", [](const Interpretation& in) { return interp_growth(in).k; })
      .def(
          "optimize",
          [](const Interpretation& in, int horizon, std::optional<std::uint64_t> b) {
            return OptimizedInterpretation(in, horizon, budget_or_default(b));
          },
          py::arg("horizon") = 8, py::arg("budget") = py::none());

  py::class_<PebbleMachine>(m, "PebbleMachine")
      .def_static("builtin", &builtin_machine, "atom-square or alt-square-K")
      .def_static("parse", [](const std::string& text) { return parse_machine(text); })
      .def_static("load", &load_machine)
      .def_readonly("pebbles", &PebbleMachine::pebbles)
      .def_readonly("states", &PebbleMachine::states)
      .def("to_json", [](const PebbleMachine& pm) { return machine_to_json(pm); })
      .def("run", &run_dict, py::arg("input"));

  m.def("builtin_interpretation_names", &builtin_interpretation_names);
  m.def("ref_square", &ref_square);
  m.def("ref_block_square", &ref_block_square);
  m.def("ref_map_power", &ref_map_power);
  m.def("ref_atom_square", [](const std::string& w) { return render_atom_word(ref_atom_square(atom_input(w))); });
  m.def("ref_alt_square", [](const std::string& w, int k) { return render_atom_word(ref_alt_square(atom_input(w), k)); });
}
