#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "polygrow/examples.hpp"
#include "support.hpp"

using namespace polygrow;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kCopy = R"j({
  "pebbles": 1, "states": ["go"], "initial": "go",
  "input_alphabet": "ab", "output_alphabet": "ab", "empty_output": "b",
  "rules": [
    {"state": "go", "guard": ["rightmost(1)", "label(1,a)"], "action": "stop", "output": ["a"]},
    {"state": "go", "guard": ["rightmost(1)"], "action": "stop", "output": ["b"]},
    {"state": "go", "guard": ["label(1,a)"], "action": "move-right", "output": ["a"]},
    {"state": "go", "guard": [], "action": "move-right", "output": ["b"]}
  ]})j";

PebbleMachine tiny(const std::string& rules, int pebbles = 1) {
  return parse_machine(R"j({"pebbles": )j" + std::to_string(pebbles) +
                       R"j(, "states": ["s", "t"], "initial": "s", "input_alphabet": "ab", "output_alphabet": "ab", "rules": [)j" +
                       rules + "]}");
}

AtomWord ab(const std::string& s) { return letters(s); }

}  // namespace

TEST_CASE("parsing and running a one-pebble machine") {
  const PebbleMachine m = parse_machine(kCopy);
  CHECK(m.pebbles == 1);
  CHECK(lint(m).empty());
  for (const char* w : {"a", "b", "ab", "abba", "bbbab"}) CHECK(run(m, ab(w)).output == ab(w));
  CHECK(run(m, {}).output == ab("b"));
  const RunResult r = run(m, ab("aba"));
  CHECK(r.trace.configs.size() == 3);
  CHECK(r.trace.steps == 3);
  CHECK(r.trace.outputs[1] == ab("b"));
  CHECK(parse_machine(machine_to_json(m)).rules.size() == m.rules.size());
  CHECK(machine_to_json(parse_machine(machine_to_json(m))) == machine_to_json(m));
  CHECK_THROWS_AS(run(m, atoms({1})), Error);
  CHECK_THROWS_AS(run(m, ab("c")), Error);
}

TEST_CASE("run statuses") {
  CHECK(run(tiny(R"j({"state": "s", "guard": [], "action": "move-left"})j"), ab("ab")).trace.status == RunStatus::FailedAction);
  CHECK(run(tiny(R"j({"state": "s", "guard": [], "action": "pop"})j"), ab("ab")).trace.status == RunStatus::FailedAction);
  CHECK(run(tiny(R"j({"state": "s", "guard": [], "action": "push"})j", 2), ab("ab")).trace.status == RunStatus::FailedAction);
  CHECK(run(tiny(R"j({"state": "s", "guard": ["label(1,b)"], "action": "stop"})j"), ab("ab")).trace.status == RunStatus::NoRule);
  const PebbleMachine loop = tiny(R"j({"state": "s", "guard": [], "action": "move-right", "next_state": "t"},
                                     {"state": "t", "guard": [], "action": "move-left", "next_state": "s"})j");
  const RunResult r = run(loop, ab("ab"), false);
  CHECK(r.trace.status == RunStatus::StepBudget);
  CHECK(r.trace.steps == step_budget(loop, 2));
  CHECK(step_budget(loop, 2) == 2 * 2 + 1);
  CHECK(r.output.empty());
  CHECK_FALSE(r.ok());
}

TEST_CASE("pebble tests") {
  const PebbleMachine m = tiny(R"j(
    {"state": "s", "guard": ["!defined(2)"], "action": "push", "output": ["a"]},
    {"state": "s", "guard": ["same(2,1)", "leftmost(2)"], "action": "move-right", "output": ["b"]},
    {"state": "s", "guard": ["!same(1,2)", "rightmost(2)", "label(2,b)"], "action": "stop", "output": ["a"]},
    {"state": "s", "guard": [], "action": "stop"})j", 2);
  CHECK(run(m, ab("ab")).output == ab("aba"));
  CHECK(run(m, ab("aa")).output == ab("ab"));
  CHECK(to_string(m.rules[2].guard[0], m.input) == "!same(1,2)");
}

TEST_CASE("machine parse errors") {
  CHECK_THROWS_AS(tiny(R"j({"state": "s", "guard": ["same(1)"], "action": "stop"})j"), Error);
  CHECK_THROWS_AS(tiny(R"j({"state": "s", "guard": ["label(1,c)"], "action": "stop"})j"), Error);
  CHECK_THROWS_AS(tiny(R"j({"state": "u", "guard": [], "action": "stop"})j"), Error);
  CHECK_THROWS_AS(tiny(R"j({"state": "s", "guard": [], "action": "jump"})j"), Error);
  CHECK_THROWS_AS(tiny(R"j({"state": "s", "guard": ["defined(3)"], "action": "stop"})j"), Error);
  CHECK_THROWS_AS(parse_machine("{"), Error);
  CHECK_THROWS_AS(parse_machine("{}"), Error);
}

TEST_CASE("lint") {
  const auto warnings = lint(tiny(R"j({"state": "s", "guard": [], "action": "stop"},
                                    {"state": "s", "guard": ["leftmost(1)"], "action": "stop"})j"));
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].find("never fires") != std::string::npos);
  CHECK(warnings[1].find("no rules") != std::string::npos);
}

TEST_CASE("configuration trees") {
  const PebbleMachine m = atom_square_machine();
  const RunResult r = run(m, atoms({1, 2, 3}));
  const ConfigTree t = config_tree(r.trace);
  for (std::size_t i = 0; i < r.trace.configs.size(); ++i) {
    int expected = -1;
    for (int j = static_cast<int>(i) - 1; j >= 0; --j)
      if (r.trace.configs[j].stack.size() < r.trace.configs[i].stack.size()) {
        expected = j;
        break;
      }
    CHECK(t.parent[i] == expected);
  }
  CHECK(t.height == 3);
  const auto low = std::count_if(r.trace.configs.begin(), r.trace.configs.end(),
                                 [](const Configuration& c) { return c.stack.size() == 1; });
  CHECK(t.roots.size() == std::size_t(low));
}

TEST_CASE("output growth") {
  const auto table = output_growth(atom_square_machine(), 5, default_budget());
  REQUIRE(table.size() == 5);
  for (const auto& e : table) {
    CHECK(e.max_output == std::size_t(2 * e.length * e.length));
    CHECK(e.errors == 0);
  }
  const auto copy = output_growth(parse_machine(kCopy), 4, default_budget());
  CHECK(copy.back().words == 2 + 4 + 8 + 16);
  CHECK(copy.back().max_output == 4);
  CHECK_THROWS_AS(output_growth(parse_machine(kCopy), 30, 1000), BudgetExceeded);
}

TEST_CASE("shipped data files match the builders") {
  const std::string dir = POLYGROW_DATA_DIR;
  CHECK(slurp(dir + "/atom-square.json") == machine_to_json(atom_square_machine()) + "\n");
  CHECK(slurp(dir + "/alt-square-1.json") == machine_to_json(alt_square_machine(1)) + "\n");
  CHECK(slurp(dir + "/alt-square-2.json") == machine_to_json(alt_square_machine(2)) + "\n");
  const PebbleMachine loaded = load_machine(dir + "/atom-square.json");
  CHECK(render_atom_word(run(loaded, parse_atom_word("#1 #2")).output) == "#1 #1 #1 #2 #2 #1 #2 #2");

  const Interpretation square = load_interpretation(dir + "/square.json");
  const Interpretation builtin = builtin_interpretation("square");
  const Interpretation reverse = load_interpretation(dir + "/reverse.json");
  const Interpretation builtin_reverse = builtin_interpretation("reverse");
  for_each_word(2, 0, 6, [&](const Word& w) {
    CHECK(eval_interpretation(square, w) == eval_interpretation(builtin, w));
    CHECK(eval_interpretation(reverse, w) == eval_interpretation(builtin_reverse, w));
  });
  const Query triple = load_query(read_query_file(dir + "/triple-order.query"));
  CHECK(triple.num_variables() == 3);
}
