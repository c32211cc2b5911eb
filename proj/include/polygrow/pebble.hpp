#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polygrow/words.hpp"

namespace polygrow {

struct PebbleTest {
  enum class Kind { Defined, Same, Leftmost, Rightmost, Label };
  Kind kind = Kind::Defined;
  int i = 1;
  int j = 1;         // Same
  Letter letter = 0; // Label, index into the input alphabet
  bool negated = false;
};

enum class PebbleAction { Stop, MoveLeft, MoveRight, Pop, Push };

struct OutputToken {
  bool atom_under_head = false;
  Letter letter = 0;  // index into the output alphabet
};

struct PebbleRule {
  int state = 0;
  std::vector<PebbleTest> guard;
  PebbleAction action = PebbleAction::Stop;
  std::vector<OutputToken> output;
  int next_state = 0;
};

/// Classical k-pebble transducer with first-match rules. Pebble 1 is the
/// bottom of the stack; the head is the top pebble. Pushed pebbles start on
/// the leftmost position.
struct PebbleMachine {
  int pebbles = 1;
  std::vector<std::string> states;
  int initial = 0;
  Alphabet input;
  Alphabet output;
  AtomWord empty_output;
  bool atoms = false;
  std::vector<PebbleRule> rules;

  int state_index(std::string_view name) const;
};

struct Configuration {
  int state = 0;
  std::vector<int> stack;  // 1-based positions, bottom first
  bool operator==(const Configuration&) const = default;
};

enum class RunStatus { Stopped, FailedAction, StepBudget, NoRule };
std::string to_string(RunStatus s);

struct RunTrace {
  std::vector<Configuration> configs;
  std::vector<AtomWord> outputs;  // outputs[i]: emitted when leaving configs[i]
  RunStatus status = RunStatus::Stopped;
  std::string message;
  std::uint64_t steps = 0;
};

struct RunResult {
  AtomWord output;  // empty unless the run stopped
  RunTrace trace;
  bool ok() const { return trace.status == RunStatus::Stopped; }
};

std::uint64_t step_budget(const PebbleMachine& m, std::size_t length);
RunResult run(const PebbleMachine& m, const AtomWord& w, bool keep_trace = true);

/// Parent of each configuration: the latest earlier one with a strictly
/// smaller stack; -1 stands for a virtual root of height 0.
struct ConfigTree {
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<int> roots;
  int height = 0;  // edges from the virtual root to the deepest configuration
};
ConfigTree config_tree(const RunTrace& trace);

struct OutputGrowthEntry {
  int length = 0;
  std::size_t max_output = 0;
  std::uint64_t words = 0;
  std::uint64_t errors = 0;
};
/// Max output length per input length. Atom machines read every non-letter
/// cell as a fresh atom, so inputs have pairwise distinct atoms.
std::vector<OutputGrowthEntry> output_growth(const PebbleMachine& m, int max_len, std::uint64_t budget);

std::vector<std::string> lint(const PebbleMachine& m);

/// JSON: {pebbles, states, initial, input_alphabet, output_alphabet,
/// empty_output, atoms, rules: [{state, guard, action, output, next_state}]}.
PebbleMachine parse_machine(std::string_view json_text);
PebbleMachine load_machine(const std::string& path);
std::string machine_to_json(const PebbleMachine& m);
std::string to_string(const PebbleTest& t, const Alphabet& input);
std::string to_string(PebbleAction a);

}  // namespace polygrow
