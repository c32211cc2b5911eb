#include "polygrow/pebble.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "polygrow/errors.hpp"
#include "polygrow/query.hpp"

namespace polygrow {

int PebbleMachine::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  throw Error("unknown state '" + std::string(name) + "'");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Stopped: return "stopped";
    case RunStatus::FailedAction: return "failed-action";
    case RunStatus::StepBudget: return "step-budget";
    case RunStatus::NoRule: return "no-rule";
  }
  return "unknown";
}

std::string to_string(PebbleAction a) {
  switch (a) {
    case PebbleAction::Stop: return "stop";
    case PebbleAction::MoveLeft: return "move-left";
    case PebbleAction::MoveRight: return "move-right";
    case PebbleAction::Pop: return "pop";
    case PebbleAction::Push: return "push";
  }
  return "unknown";
}

std::string to_string(const PebbleTest& t, const Alphabet& input) {
  std::string out = t.negated ? "!" : "";
  switch (t.kind) {
    case PebbleTest::Kind::Defined: return out + "defined(" + std::to_string(t.i) + ")";
    case PebbleTest::Kind::Same: return out + "same(" + std::to_string(t.i) + "," + std::to_string(t.j) + ")";
    case PebbleTest::Kind::Leftmost: return out + "leftmost(" + std::to_string(t.i) + ")";
    case PebbleTest::Kind::Rightmost: return out + "rightmost(" + std::to_string(t.i) + ")";
    case PebbleTest::Kind::Label: return out + "label(" + std::to_string(t.i) + "," + input.symbol(t.letter) + ")";
  }
  return out;
}

namespace {

struct Cell {
  bool atom = false;
  Letter letter = 0;
  Atom id;
};

std::vector<Cell> cells_of(const PebbleMachine& m, const AtomWord& w) {
  std::vector<Cell> cells;
  for (const Symbol& s : w) {
    if (is_atom(s)) {
      if (!m.atoms) throw Error("atom in the input of a machine without atoms");
      cells.push_back({true, 0, std::get<Atom>(s)});
      continue;
    }
    const auto letter = m.input.index_of(std::get<std::string>(s));
    if (!letter) throw Error("'" + std::get<std::string>(s) + "' is not an input letter");
    cells.push_back({false, *letter, {}});
  }
  return cells;
}

bool holds(const PebbleTest& t, const std::vector<int>& stack, const std::vector<Cell>& cells) {
  const int h = static_cast<int>(stack.size());
  const int n = static_cast<int>(cells.size());
  auto pos = [&](int i) { return i >= 1 && i <= h ? stack[i - 1] : 0; };
  bool v = false;
  switch (t.kind) {
    case PebbleTest::Kind::Defined: v = pos(t.i) != 0; break;
    case PebbleTest::Kind::Same: v = pos(t.i) != 0 && pos(t.i) == pos(t.j); break;
    case PebbleTest::Kind::Leftmost: v = pos(t.i) == 1; break;
    case PebbleTest::Kind::Rightmost: v = pos(t.i) != 0 && pos(t.i) == n; break;
    case PebbleTest::Kind::Label: {
      const int p = pos(t.i);
      v = p != 0 && !cells[p - 1].atom && cells[p - 1].letter == t.letter;
      break;
    }
  }
  return v != t.negated;
}

std::string describe(const PebbleMachine& m, const Configuration& c) {
  std::string out = m.states[c.state] + " [";
  for (std::size_t i = 0; i < c.stack.size(); ++i) out += (i ? "," : "") + std::to_string(c.stack[i]);
  return out + "]";
}

}  // namespace

std::uint64_t step_budget(const PebbleMachine& m, std::size_t length) {
  std::uint64_t total = 0;
  for (int i = 1; i <= m.pebbles; ++i) {
    const std::uint64_t p = saturating_pow(length, i);
    total = p > UINT64_MAX - total ? UINT64_MAX : total + p;
  }
  const std::uint64_t states = m.states.size();
  if (total != 0 && states > (UINT64_MAX - 1) / total) return UINT64_MAX;
  return states * total + 1;
}

RunResult run(const PebbleMachine& m, const AtomWord& w, bool keep_trace) {
  RunResult result;
  RunTrace& trace = result.trace;
  if (w.empty()) {
    result.output = m.empty_output;
    return result;
  }
  const std::vector<Cell> cells = cells_of(m, w);
  const int n = static_cast<int>(cells.size());
  std::vector<std::vector<int>> by_state(m.states.size());
  for (std::size_t r = 0; r < m.rules.size(); ++r) by_state[m.rules[r].state].push_back(static_cast<int>(r));
  const std::uint64_t budget = step_budget(m, cells.size());

  Configuration c{m.initial, {1}};
  AtomWord out;
  for (;;) {
    if (keep_trace) {
      trace.configs.push_back(c);
      trace.outputs.emplace_back();
    }
    if (trace.steps >= budget) {
      trace.status = RunStatus::StepBudget;
      trace.message = "step budget " + std::to_string(budget) + " exhausted; the run loops";
      break;
    }
    const PebbleRule* rule = nullptr;
    for (int r : by_state[c.state])
      if (std::all_of(m.rules[r].guard.begin(), m.rules[r].guard.end(),
                      [&](const PebbleTest& t) { return holds(t, c.stack, cells); })) {
        rule = &m.rules[r];
        break;
      }
    if (!rule) {
      trace.status = RunStatus::NoRule;
      trace.message = "no rule matches " + describe(m, c);
      break;
    }
    for (const OutputToken& t : rule->output) {
      Symbol s;
      if (t.atom_under_head) {
        const Cell& head = cells[c.stack.back() - 1];
        if (!head.atom) continue;
        s = head.id;
      } else {
        s = m.output.symbol(t.letter);
      }
      out.push_back(s);
      if (keep_trace) trace.outputs.back().push_back(s);
    }
    ++trace.steps;
    int& head = c.stack.back();
    bool failed = false;
    switch (rule->action) {
      case PebbleAction::Stop:
        trace.status = RunStatus::Stopped;
        result.output = std::move(out);
        return result;
      case PebbleAction::MoveLeft:
        failed = head == 1;
        if (!failed) --head;
        break;
      case PebbleAction::MoveRight:
        failed = head == n;
        if (!failed) ++head;
        break;
      case PebbleAction::Pop:
        failed = c.stack.size() == 1;
        if (!failed) c.stack.pop_back();
        break;
      case PebbleAction::Push:
        failed = static_cast<int>(c.stack.size()) == m.pebbles;
        if (!failed) c.stack.push_back(1);
        break;
    }
    if (failed) {
      trace.status = RunStatus::FailedAction;
      trace.message = to_string(rule->action) + " fails at " + describe(m, c);
      break;
    }
    c.state = rule->next_state;
  }
  return result;
}

ConfigTree config_tree(const RunTrace& trace) {
  ConfigTree t;
  const std::size_t n = trace.configs.size();
  t.parent.assign(n, -1);
  t.children.assign(n, {});
  std::vector<int> depth(n, 0);
  std::vector<int> open;  // candidates with increasing stack heights
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = trace.configs[i].stack.size();
    while (!open.empty() && trace.configs[open.back()].stack.size() >= h) open.pop_back();
    if (open.empty()) {
      t.roots.push_back(static_cast<int>(i));
      depth[i] = 1;
    } else {
      t.parent[i] = open.back();
      t.children[open.back()].push_back(static_cast<int>(i));
      depth[i] = depth[open.back()] + 1;
    }
    t.height = std::max(t.height, depth[i]);
    open.push_back(static_cast<int>(i));
  }
  return t;
}

std::vector<OutputGrowthEntry> output_growth(const PebbleMachine& m, int max_len, std::uint64_t budget) {
  const int letters = m.input.size() + (m.atoms ? 1 : 0);
  std::uint64_t words = 0;
  for (int n = 1; n <= max_len; ++n) {
    const std::uint64_t c = saturating_pow(static_cast<std::uint64_t>(letters), n);
    words = c > UINT64_MAX - words ? UINT64_MAX : words + c;
  }
  if (words > budget) throw BudgetExceeded("machine output growth", words, budget);
  std::vector<OutputGrowthEntry> table;
  OutputGrowthEntry running;
  for (int n = 1; n <= max_len; ++n) {
    running.length = n;
    for_each_word(letters, n, n, [&](const Word& w) {
      AtomWord input;
      std::uint32_t fresh = 1;
      for (Letter a : w) {
        if (a == m.input.size())
          input.emplace_back(Atom{fresh++});
        else
          input.emplace_back(m.input.symbol(a));
      }
      ++running.words;
      const RunResult r = run(m, input, false);
      if (!r.ok()) {
        ++running.errors;
        return;
      }
      running.max_output = std::max(running.max_output, r.output.size());
    });
    table.push_back(running);
  }
  return table;
}

std::vector<std::string> lint(const PebbleMachine& m) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    bool any = false;
    bool defaulted = false;
    for (const PebbleRule& r : m.rules) {
      if (r.state != static_cast<int>(s)) continue;
      if (defaulted) {
        out.push_back("state " + m.states[s] + ": rule after the default rule never fires");
        break;
      }
      any = true;
      defaulted = r.guard.empty();
    }
    if (!any)
      out.push_back("state " + m.states[s] + " has no rules");
    else if (!defaulted)
      out.push_back("state " + m.states[s] + " has no default rule; unmatched configurations abort the run");
  }
  return out;
}

namespace {

PebbleTest parse_test(const std::string& text, const PebbleMachine& m) {
  PebbleTest t;
  std::string s = text;
  if (!s.empty() && s[0] == '!') {
    t.negated = true;
    s.erase(0, 1);
  }
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw Error("malformed test '" + text + "'");
  const std::string name = s.substr(0, open);
  std::vector<std::string> args;
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    if (comma == std::string::npos) comma = inner.size();
    args.push_back(inner.substr(start, comma - start));
    start = comma + 1;
  }
  auto pebble = [&](const std::string& a) {
    int i = 0;
    try {
      i = std::stoi(a);
    } catch (const std::exception&) {
      throw Error("malformed pebble index in '" + text + "'");
    }
    if (i < 1 || i > m.pebbles) throw Error("test '" + text + "' names a pebble outside 1.." + std::to_string(m.pebbles));
    return i;
  };
  if (name == "defined" || name == "leftmost" || name == "rightmost") {
    if (args.size() != 1) throw Error("test '" + text + "' takes one pebble");
    t.kind = name == "defined" ? PebbleTest::Kind::Defined
             : name == "leftmost" ? PebbleTest::Kind::Leftmost
                                  : PebbleTest::Kind::Rightmost;
    t.i = pebble(args[0]);
  } else if (name == "same") {
    if (args.size() != 2) throw Error("test '" + text + "' takes two pebbles");
    t.kind = PebbleTest::Kind::Same;
    t.i = pebble(args[0]);
    t.j = pebble(args[1]);
  } else if (name == "label") {
    if (args.size() != 2) throw Error("test '" + text + "' takes a pebble and a letter");
    t.kind = PebbleTest::Kind::Label;
    t.i = pebble(args[0]);
    const auto letter = m.input.index_of(args[1]);
    if (!letter) throw Error("test '" + text + "' names an unknown input letter");
    t.letter = *letter;
  } else {
    throw Error("unknown test '" + text + "'");
  }
  return t;
}

PebbleAction parse_action(const std::string& s) {
  for (PebbleAction a : {PebbleAction::Stop, PebbleAction::MoveLeft, PebbleAction::MoveRight, PebbleAction::Pop, PebbleAction::Push})
    if (to_string(a) == s) return a;
  throw Error("unknown action '" + s + "'");
}

Alphabet symbols_of(const nlohmann::json& v) {
  std::vector<std::string> out;
  if (v.is_string())
    for (char c : v.get<std::string>()) out.emplace_back(1, c);
  else
    for (const auto& s : v) out.push_back(s.get<std::string>());
  return out.empty() ? Alphabet() : Alphabet(out);
}

}  // namespace

PebbleMachine parse_machine(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("machine is not valid JSON: ") + e.what());
  }
  try {
    PebbleMachine m;
    m.pebbles = j.at("pebbles").get<int>();
    if (m.pebbles < 1) throw Error("a machine needs at least one pebble");
    m.states = j.at("states").get<std::vector<std::string>>();
    if (m.states.empty()) throw Error("a machine needs states");
    m.initial = m.state_index(j.at("initial").get<std::string>());
    m.input = symbols_of(j.at("input_alphabet"));
    m.output = symbols_of(j.at("output_alphabet"));
    m.atoms = j.value("atoms", false);
    m.empty_output = parse_atom_word(j.value("empty_output", std::string()), m.output.symbols());
    for (const Symbol& s : m.empty_output)
      if (!is_atom(s) && !m.output.index_of(std::get<std::string>(s))) throw Error("empty_output uses a letter outside the output alphabet");
    for (const auto& r : j.at("rules")) {
      PebbleRule rule;
      rule.state = m.state_index(r.at("state").get<std::string>());
      for (const auto& t : r.value("guard", nlohmann::json::array())) rule.guard.push_back(parse_test(t.get<std::string>(), m));
      rule.action = parse_action(r.at("action").get<std::string>());
      for (const auto& o : r.value("output", nlohmann::json::array())) {
        const std::string tok = o.get<std::string>();
        if (tok == "@") {
          if (!m.atoms) throw Error("'@' outputs require an atoms machine");
          rule.output.push_back({true, 0});
          continue;
        }
        const auto letter = m.output.index_of(tok);
        if (!letter) throw Error("output '" + tok + "' is not an output letter");
        rule.output.push_back({false, *letter});
      }
      rule.next_state = r.contains("next_state") ? m.state_index(r.at("next_state").get<std::string>()) : rule.state;
      m.rules.push_back(std::move(rule));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed machine: ") + e.what());
  }
}

PebbleMachine load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_machine(text.str());
}

std::string machine_to_json(const PebbleMachine& m) {
  nlohmann::ordered_json j;
  j["pebbles"] = m.pebbles;
  j["states"] = m.states;
  j["initial"] = m.states[m.initial];
  j["input_alphabet"] = m.input.symbols();
  j["output_alphabet"] = m.output.symbols();
  j["empty_output"] = render_atom_word(m.empty_output);
  j["atoms"] = m.atoms;
  j["rules"] = nlohmann::ordered_json::array();
  for (const PebbleRule& r : m.rules) {
    nlohmann::ordered_json o;
    o["state"] = m.states[r.state];
    o["guard"] = nlohmann::ordered_json::array();
    for (const PebbleTest& t : r.guard) o["guard"].push_back(to_string(t, m.input));
    o["action"] = to_string(r.action);
    o["output"] = nlohmann::ordered_json::array();
    for (const OutputToken& t : r.output) o["output"].push_back(t.atom_under_head ? std::string("@") : m.output.symbol(t.letter));
    o["next_state"] = m.states[r.next_state];
    j["rules"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

}  // namespace polygrow
