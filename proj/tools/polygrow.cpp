#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polygrow/dot.hpp"
#include "polygrow/errors.hpp"
#include "polygrow/examples.hpp"
#include "polygrow/report.hpp"

using namespace polygrow;
using nlohmann::json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Common {
  bool json_out = false;
  std::uint64_t budget = 0;
  int horizon = 8;
  int max_len = 8;
};

void emit(const Common& c, const Report& r, const std::string& text) {
  if (c.json_out)
    std::cout << r.dump() << "\n";
  else
    std::cout << text;
}

json word_json(const Alphabet& a, const Word& w) { return a.render(w); }

Query load_query_arg(const std::string& path, Report& report) {
  const std::string text = read_file(path);
  report.add_input("query", text);
  return load_query(parse_query_file(text));
}

Interpretation load_interp_arg(const std::string& source, Report& report) {
  if (source.rfind("builtin:", 0) == 0) {
    report.add_input("interpretation", source);
    return builtin_interpretation(source.substr(8));
  }
  const std::string text = read_file(source);
  report.add_input("interpretation", text);
  return parse_interpretation(text);
}

PebbleMachine load_machine_arg(const std::string& source, Report& report) {
  if (source == "builtin:atom-square") {
    report.add_input("machine", source);
    return atom_square_machine();
  }
  if (source.rfind("builtin:alt-square-", 0) == 0) {
    report.add_input("machine", source);
    return alt_square_machine(std::stoi(source.substr(19)));
  }
  const std::string text = read_file(source);
  report.add_input("machine", text);
  return parse_machine(text);
}

void echo_budget(const Common& c, Report& r) { r.parameters()["budget"] = c.budget; }

int cmd_count(const Common& c, const std::string& path, const std::string& word, bool list) {
  Report r("count");
  const Query q = load_query_arg(path, r);
  const Word w = q.alphabet().parse_word(word);
  r.parameters()["word"] = word_json(q.alphabet(), w);
  const auto tuples = select_tuples(q, w);
  r.results()["count"] = tuples.size();
  if (list) r.results()["tuples"] = tuples;
  std::ostringstream text;
  text << tuples.size() << "\n";
  if (list)
    for (const auto& t : tuples) {
      for (std::size_t i = 0; i < t.size(); ++i) text << (i ? " " : "") << q.variables()[i] << "=" << t[i];
      text << "\n";
    }
  emit(c, r, text.str());
  return 0;
}

int cmd_oracle(const Common& c, const std::string& path) {
  Report r("oracle");
  const Query q = load_query_arg(path, r);
  r.parameters()["max_len"] = c.max_len;
  echo_budget(c, r);
  const auto table = growth_table(q, c.max_len, c.budget);
  std::ostringstream text;
  json rows = json::array();
  for (const auto& e : table) {
    rows.push_back({{"n", e.length}, {"max_count", e.max_count}});
    text << e.length << " " << e.max_count << "\n";
  }
  r.results()["table"] = rows;
  emit(c, r, text.str());
  return 0;
}

int cmd_semigroup(const Common& c, const std::string& path) {
  Report r("semigroup");
  const Recognizer rec = compile(load_query_arg(path, r));
  const auto ids = rec.semigroup.idempotents();
  json witnesses = json::array();
  for (const Word& w : rec.witness) witnesses.push_back(word_json(rec.query.alphabet(), w));
  r.results()["size"] = rec.size();
  r.results()["idempotents"] = ids;
  r.results()["witnesses"] = witnesses;
  r.results()["letter_values"] = rec.letter_value;
  std::ostringstream text;
  text << "size " << rec.size() << "\nidempotents";
  for (Element e : ids) text << " s" << e << "=" << rec.query.alphabet().render(rec.witness[e]);
  text << "\n";
  emit(c, r, text.str());
  return 0;
}

int cmd_fft(const Common& c, const std::string& path, const std::string& word, bool dot) {
  Report r("fft");
  const Recognizer rec = compile(load_query_arg(path, r));
  const Word w = rec.query.alphabet().parse_word(word);
  if (w.empty()) throw UsageError("fft needs a nonempty word");
  const FactorizationTree t = build_fft(rec, w);
  const auto violations = validate_fft(rec, w, t);
  r.parameters()["word"] = word;
  r.results()["height"] = t.height();
  r.results()["bound"] = height_bound(rec);
  r.results()["nodes"] = t.size();
  r.results()["serialized"] = t.serialize();
  r.results()["violations"] = violations.size();
  if (dot) {
    std::cout << tree_dot(t, rec.query.alphabet());
  } else {
    std::ostringstream text;
    text << "height " << t.height() << " (bound " << height_bound(rec) << ")\n" << t.serialize() << "\n";
    for (const auto& v : violations) text << "violation at node " << v.node << ": " << v.message << "\n";
    emit(c, r, text.str());
  }
  return violations.empty() ? 0 : 1;
}

int cmd_skeleton(const Common& c, const std::string& path, const std::string& word, const std::vector<int>& positions,
                 bool dot) {
  Report r("skeleton");
  const Recognizer rec = compile(load_query_arg(path, r));
  const Word w = rec.query.alphabet().parse_word(word);
  if (static_cast<int>(positions.size()) != rec.query.num_variables())
    throw UsageError("expected " + std::to_string(rec.query.num_variables()) + " positions");
  for (int p : positions)
    if (p < 1 || p > static_cast<int>(w.size())) throw UsageError("position " + std::to_string(p) + " is out of range");
  const FactorizationTree t = build_fft(rec, w);
  const Skeleton s = skeleton(t, positions, rec.query.variables());
  if (dot) {
    std::cout << skeleton_dot(s, rec.query.alphabet());
    return 0;
  }
  const auto seg = segments(s);
  const auto sd = seed(s, seg);
  std::vector<std::string> seed_names;
  for (int v : sd) seed_names.push_back(rec.query.variables()[v]);
  r.parameters()["word"] = word;
  r.parameters()["positions"] = positions;
  r.results()["key"] = s.key();
  r.results()["nodes"] = s.nodes.size();
  r.results()["accepted"] = eval_via_skeleton(rec, s);
  r.results()["segments"] = seg.all.size();
  r.results()["minimal_segments"] = seg.minimal.size();
  r.results()["seed"] = seed_names;
  std::ostringstream text;
  text << "key " << s.key() << "\naccepted " << (eval_via_skeleton(rec, s) ? "yes" : "no") << "\nseed {";
  for (std::size_t i = 0; i < seed_names.size(); ++i) text << (i ? "," : "") << seed_names[i];
  text << "}\n";
  emit(c, r, text.str());
  return 0;
}

int cmd_analyze(const Common& c, const std::string& path) {
  Report r("analyze");
  const Recognizer rec = compile(load_query_arg(path, r));
  r.parameters()["horizon"] = c.horizon;
  echo_budget(c, r);
  const CrossCheck x = crosscheck(rec, c.horizon, c.budget);
  r.results()["exponent"] = x.exponent ? json(*x.exponent) : json(nullptr);
  r.results()["semigroup_size"] = rec.size();
  r.results()["pattern_counts"] = x.pattern_counts;
  r.results()["disjuncts"] = x.disjuncts.size();
  r.results()["max_seed"] = x.max_seed;
  r.results()["upper_constant"] = x.upper_constant;
  r.results()["upper_bound_ok"] = x.upper_bound_ok;
  json table = json::array();
  for (const auto& e : x.table) table.push_back({{"n", e.length}, {"max_count", e.max_count}});
  r.results()["table"] = table;
  json pump = json::array();
  for (const auto& p : x.pump)
    pump.push_back({{"n", p.n}, {"length", p.length}, {"count", p.count}, {"lower", p.lower}, {"ok", p.ok()}});
  r.results()["pump"] = pump;
  if (x.pattern) r.results()["pattern"] = describe(rec, *x.pattern);
  r.results()["disagreements"] = x.disagreements;
  r.results()["ok"] = x.ok();
  for (const auto& n : x.notes) r.add_note(n);
  std::ostringstream text;
  text << "exponent " << to_string(x.exponent) << "\nsemigroup " << rec.size() << " elements\ndisjuncts "
       << x.disjuncts.size() << " at horizon " << c.horizon << ", max seed " << x.max_seed << "\n";
  if (x.pattern) text << "pump " << describe(rec, *x.pattern) << "\n";
  for (const auto& p : x.pump)
    text << "  n=" << p.n << " count " << p.count << " >= " << p.lower << (p.ok() ? "" : "  FAILED") << "\n";
  for (const auto& n : x.notes) text << "note: " << n << "\n";
  for (const auto& d : x.disagreements) text << "disagreement: " << d << "\n";
  emit(c, r, text.str());
  return x.ok() ? 0 : 1;
}

int cmd_interp_eval(const Common& c, const std::string& source, const std::string& word, bool copies) {
  Report r("interp eval");
  const Interpretation in = load_interp_arg(source, r);
  const Word w = in.input.parse_word(word);
  r.parameters()["word"] = word;
  const Word out = eval_interpretation(in, w);
  r.results()["output"] = in.output.render(out);
  std::ostringstream text;
  text << in.output.render(out) << "\n";
  if (copies) {
    json list = json::array();
    for (const Copy& cp : evaluate_copies(in, w)) {
      list.push_back(describe(cp) + " " + in.output.symbol(cp.letter));
      text << "  " << describe(cp) << " " << in.output.symbol(cp.letter) << "\n";
    }
    r.results()["copies"] = list;
  }
  emit(c, r, text.str());
  return 0;
}

int cmd_interp_growth(const Common& c, const std::string& source) {
  Report r("interp growth");
  const Interpretation in = load_interp_arg(source, r);
  const InterpGrowth g = interp_growth(in);
  json per = json::array();
  for (const auto& e : g.per_component) per.push_back(e ? json(*e) : json(nullptr));
  r.results()["k"] = g.k ? json(*g.k) : json(nullptr);
  r.results()["dimension"] = in.dimension();
  r.results()["per_component"] = per;
  std::ostringstream text;
  text << "growth " << to_string(g.k) << " (dimension " << in.dimension() << ")\n";
  for (std::size_t i = 0; i < g.per_component.size(); ++i)
    text << "  component " << i << ": " << to_string(g.per_component[i]) << "\n";
  emit(c, r, text.str());
  return 0;
}

int cmd_interp_optimize(const Common& c, const std::string& source, const std::vector<std::string>& words) {
  Report r("interp optimize");
  const Interpretation in = load_interp_arg(source, r);
  r.parameters()["horizon"] = c.horizon;
  echo_budget(c, r);
  const OptimizedInterpretation opt(in, c.horizon, c.budget);
  const InterpGrowth g = interp_growth(in);
  r.results()["dimension"] = opt.dimension() ? json(*opt.dimension()) : json(nullptr);
  r.results()["original_dimension"] = in.dimension();
  r.results()["growth"] = g.k ? json(*g.k) : json(nullptr);
  r.results()["parts"] = opt.parts().size();
  std::ostringstream text;
  text << "dimension " << to_string(opt.dimension()) << " (original " << in.dimension() << ", growth "
       << to_string(g.k) << "), " << opt.parts().size() << " parts at horizon " << c.horizon << "\n";
  json outputs = json::array();
  bool agree = true;
  for (const std::string& word : words) {
    const Word w = in.input.parse_word(word);
    const Word out = opt.eval(w);
    const bool same = out == eval_interpretation(in, w);
    agree = agree && same;
    outputs.push_back({{"input", word}, {"output", in.output.render(out)}, {"agrees", same}});
    text << word << " -> " << in.output.render(out) << (same ? "" : "  DIFFERS") << "\n";
  }
  if (!words.empty()) r.results()["outputs"] = outputs;
  emit(c, r, text.str());
  return agree ? 0 : 1;
}

int cmd_interp_discipline(const Common& c, const std::string& source) {
  Report r("interp discipline");
  const Interpretation in = load_interp_arg(source, r);
  r.parameters()["max_len"] = c.max_len;
  echo_budget(c, r);
  const auto v = discipline_check(in, c.max_len, c.budget);
  json first = json::array();
  std::ostringstream text;
  text << v.size() << " violations\n";
  for (std::size_t i = 0; i < v.size() && i < 10; ++i) {
    first.push_back({{"input", in.input.render(v[i].input)}, {"index", v[i].index}, {"from", v[i].from}, {"to", v[i].to}});
    text << "  " << in.input.render(v[i].input) << ": " << v[i].from << " -> " << v[i].to << "\n";
  }
  r.results()["violations"] = v.size();
  r.results()["first"] = first;
  emit(c, r, text.str());
  return 0;
}

AtomWord parse_machine_input(const PebbleMachine& m, const std::string& text) {
  return parse_atom_word(text, m.input.symbols());
}

int cmd_pebble_run(const Common& c, const std::string& source, const std::string& input, bool trace, bool dot) {
  Report r("pebble run");
  const PebbleMachine m = load_machine_arg(source, r);
  const AtomWord w = parse_machine_input(m, input);
  const RunResult res = run(m, w, trace || dot || c.json_out);
  if (dot) {
    std::cout << config_tree_dot(m, res.trace);
    return res.ok() ? 0 : 1;
  }
  r.parameters()["input"] = input;
  r.results()["status"] = to_string(res.trace.status);
  r.results()["output"] = render_atom_word(res.output);
  r.results()["steps"] = res.trace.steps;
  r.results()["pebbles"] = m.pebbles;
  std::size_t max_height = 0;
  for (const auto& cf : res.trace.configs) max_height = std::max(max_height, cf.stack.size());
  r.results()["max_stack"] = max_height;
  r.results()["config_tree_height"] = config_tree(res.trace).height;
  r.add_note("lower bounds on pebble counts are impossibility results and are not checked");
  std::ostringstream text;
  if (trace)
    for (std::size_t i = 0; i < res.trace.configs.size(); ++i) {
      const auto& cf = res.trace.configs[i];
      text << m.states[cf.state] << " [";
      for (std::size_t p = 0; p < cf.stack.size(); ++p) text << (p ? "," : "") << cf.stack[p];
      text << "]";
      if (!res.trace.outputs[i].empty()) text << " / " << render_atom_word(res.trace.outputs[i]);
      text << "\n";
    }
  if (res.ok())
    text << render_atom_word(res.output) << "\n";
  else
    std::cerr << json{{"error", {{"type", "run"}, {"status", to_string(res.trace.status)}, {"message", res.trace.message}}}}.dump()
              << "\n";
  emit(c, r, text.str());
  return res.ok() ? 0 : 1;
}

int cmd_pebble_growth(const Common& c, const std::string& source) {
  Report r("pebble growth");
  const PebbleMachine m = load_machine_arg(source, r);
  r.parameters()["max_len"] = c.max_len;
  echo_budget(c, r);
  json rows = json::array();
  std::ostringstream text;
  std::uint64_t errors = 0;
  for (const auto& e : output_growth(m, c.max_len, c.budget)) {
    rows.push_back({{"n", e.length}, {"max_output", e.max_output}, {"words", e.words}, {"errors", e.errors}});
    text << e.length << " " << e.max_output << (e.errors ? "  (" + std::to_string(e.errors) + " failed runs)" : "") << "\n";
    errors = e.errors;
  }
  r.results()["table"] = rows;
  emit(c, r, text.str());
  return errors == 0 ? 0 : 1;
}

const std::vector<std::string> kExampleNames = {"square",      "block-square",   "map-power",
                                               "atom-square", "alt-square",     "atom-square-machine",
                                               "alt-square-machine", "deatomized-atom-square", "first-two-differ"};

int cmd_examples_run(const Common& c, const std::string& name, const std::string& input, int k) {
  Report r("examples run");
  r.parameters()["name"] = name;
  r.parameters()["input"] = input;
  std::string out;
  if (name == "square") {
    out = ref_square(input);
  } else if (name == "block-square") {
    out = ref_block_square(input);
  } else if (name == "map-power") {
    out = ref_map_power(input);
  } else {
    const AtomWord w = parse_atom_word(input, {"<", ">", "a"});
    AtomWord result;
    if (name == "atom-square") {
      result = ref_atom_square(w);
    } else if (name == "alt-square") {
      result = ref_alt_square(w, k);
    } else if (name == "atom-square-machine" || name == "alt-square-machine") {
      const PebbleMachine m = name == "atom-square-machine" ? atom_square_machine() : alt_square_machine(k);
      const RunResult res = run(m, w, false);
      if (!res.ok()) throw Error("machine run ended with " + to_string(res.trace.status) + ": " + res.trace.message);
      result = res.output;
    } else if (name == "deatomized-atom-square") {
      AtomWord letters_only;
      for (char ch : input)
        if (!std::isspace(static_cast<unsigned char>(ch))) letters_only.emplace_back(std::string(1, ch));
      result = deatomize(ref_atom_square)(letters_only);
    } else if (name == "first-two-differ") {
      result = first_two_differ(w);
    } else {
      throw UsageError("unknown example '" + name + "'");
    }
    out = render_atom_word(result);
  }
  r.results()["output"] = out;
  emit(c, r, out + "\n");
  return 0;
}

int cmd_examples_machine(const std::string& name, int k) {
  if (name == "atom-square")
    std::cout << machine_to_json(atom_square_machine()) << "\n";
  else if (name == "alt-square")
    std::cout << machine_to_json(alt_square_machine(k)) << "\n";
  else
    throw UsageError("unknown machine '" + name + "'");
  return 0;
}

void print_error(const char* type, const std::string& message) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polygrow: growth rates of MSO queries, interpretations and pebble transducers"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  c.budget = default_budget();
  app.add_flag("--json", c.json_out, "Print a JSON report");
  app.add_option("--budget", c.budget, "Enumeration budget (default POLYGROW_BUDGET or 5e7)");
  app.add_option("--horizon", c.horizon, "Word length horizon for skeleton decomposition")->capture_default_str();
  app.add_option("--max-len", c.max_len, "Largest input length for exhaustive tables")->capture_default_str();

  std::function<int()> action;
  std::string path, word, source, input, name;
  std::vector<int> positions;
  std::vector<std::string> words;
  bool list = false, dot = false, trace = false, copies = false;
  int k = 1;

  auto* count = app.add_subcommand("count", "Count the tuples a query selects in a word");
  count->add_option("query", path, "Query file")->required();
  count->add_option("word", word, "Input word")->required();
  count->add_flag("--list", list, "List the tuples");
  count->callback([&] { action = [&] { return cmd_count(c, path, word, list); }; });

  auto* oracle = app.add_subcommand("oracle", "Brute-force growth table");
  oracle->add_option("query", path, "Query file")->required();
  oracle->callback([&] { action = [&] { return cmd_oracle(c, path); }; });

  auto* semigroup = app.add_subcommand("semigroup", "Transition semigroup of a query");
  semigroup->add_option("query", path, "Query file")->required();
  semigroup->callback([&] { action = [&] { return cmd_semigroup(c, path); }; });

  auto* fft = app.add_subcommand("fft", "Factorization forest of a word");
  fft->add_option("query", path, "Query file")->required();
  fft->add_option("word", word, "Input word")->required();
  fft->add_flag("--dot", dot, "Print DOT");
  fft->callback([&] { action = [&] { return cmd_fft(c, path, word, dot); }; });

  auto* skel = app.add_subcommand("skeleton", "Skeleton of a pointed word");
  skel->add_option("query", path, "Query file")->required();
  skel->add_option("word", word, "Input word")->required();
  skel->add_option("positions", positions, "1-based positions in variable order");
  skel->add_flag("--dot", dot, "Print DOT");
  skel->callback([&] { action = [&] { return cmd_skeleton(c, path, word, positions, dot); }; });

  auto* analyze = app.add_subcommand("analyze", "Exponent, pump witness and skeleton cross-check");
  analyze->add_option("query", path, "Query file")->required();
  analyze->callback([&] { action = [&] { return cmd_analyze(c, path); }; });

  auto* interp = app.add_subcommand("interp", "MSO interpretations (file or builtin:<name>)");
  interp->require_subcommand(1);
  auto* ieval = interp->add_subcommand("eval", "Evaluate on a word");
  ieval->add_option("interpretation", source)->required();
  ieval->add_option("word", word)->required();
  ieval->add_flag("--copies", copies, "List the output copies");
  ieval->callback([&] { action = [&] { return cmd_interp_eval(c, source, word, copies); }; });
  auto* igrowth = interp->add_subcommand("growth", "Growth exponent");
  igrowth->add_option("interpretation", source)->required();
  igrowth->callback([&] { action = [&] { return cmd_interp_growth(c, source); }; });
  auto* iopt = interp->add_subcommand("optimize", "Dimension-optimal equivalent");
  iopt->add_option("interpretation", source)->required();
  iopt->add_option("words", words, "Words to evaluate with the optimized interpretation");
  iopt->callback([&] { action = [&] { return cmd_interp_optimize(c, source, words); }; });
  auto* idisc = interp->add_subcommand("discipline", "Stack discipline of consecutive copies");
  idisc->add_option("interpretation", source)->required();
  idisc->callback([&] { action = [&] { return cmd_interp_discipline(c, source); }; });

  auto* pebble = app.add_subcommand("pebble", "Pebble transducers (file or builtin:atom-square, builtin:alt-square-K)");
  pebble->require_subcommand(1);
  auto* prun = pebble->add_subcommand("run", "Run on an input");
  prun->add_option("machine", source)->required();
  prun->add_option("input", input)->required();
  prun->add_flag("--trace", trace, "Print every configuration");
  prun->add_flag("--dot", dot, "Print the configuration tree as DOT");
  prun->callback([&] { action = [&] { return cmd_pebble_run(c, source, input, trace, dot); }; });
  auto* pgrowth = pebble->add_subcommand("growth", "Maximal output length per input length");
  pgrowth->add_option("machine", source)->required();
  pgrowth->callback([&] { action = [&] { return cmd_pebble_growth(c, source); }; });

  auto* examples = app.add_subcommand("examples", "Reference functions and shipped machines");
  examples->require_subcommand(1);
  auto* erun = examples->add_subcommand("run", "Run a reference function");
  erun->add_option("name", name)->required()->check(CLI::IsMember(kExampleNames));
  erun->add_option("input", input)->required();
  erun->add_option("-k", k, "Tree height for alt-square")->capture_default_str();
  erun->callback([&] { action = [&] { return cmd_examples_run(c, name, input, k); }; });
  auto* emachine = examples->add_subcommand("machine", "Print a shipped machine as JSON");
  emachine->add_option("name", name)->required()->check(CLI::IsMember({"atom-square", "alt-square"}));
  emachine->add_option("-k", k, "Tree height for alt-square")->capture_default_str();
  emachine->callback([&] { action = [&] { return cmd_examples_machine(name, k); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const BudgetExceeded& e) {
    print_error("budget", e.what());
    return 1;
  } catch (const Error& e) {
    print_error("analysis", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
