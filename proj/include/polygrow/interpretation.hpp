#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polygrow/growth.hpp"

namespace polygrow {

/// Variables x1..xk of a component, in tuple order.
std::vector<std::string> tuple_variables(int dimension, const std::string& prefix = "x");

struct InterpComponent {
  int dimension = 0;
  /// Output letter and its query over x1..x_dimension.
  std::vector<std::pair<Letter, Query>> labels;
};

/// String-to-string MSO interpretation. Output positions are copies (i, tuple)
/// of component i selected by one of its label queries; copies are ordered by
/// the order queries.
///
/// orders[{i, j}] is a query over x1..x_ki, y1..y_kj saying that copy
/// (i, x) comes before copy (j, y). A missing pair (i, j) falls back to the
/// negation of (j, i) if present, otherwise to the component index order, and
/// within one component to lexicographic order of tuples.
struct Interpretation {
  Alphabet input;
  Alphabet output;
  Word empty_output;
  std::vector<InterpComponent> components;
  std::map<std::pair<int, int>, Query> orders;

  int dimension() const;
};

struct Copy {
  int component = 0;
  Assignment tuple;
  Letter letter = 0;
  bool operator==(const Copy&) const = default;
};
std::string describe(const Copy& c);

/// Selected copies of w sorted by the order queries. Throws on label
/// ambiguity and on orders that are not strict total orders on the copies.
std::vector<Copy> evaluate_copies(const Interpretation& interp, const Word& w);
Word eval_interpretation(const Interpretation& interp, const Word& w);

struct InterpGrowth {
  Exponent k;
  std::vector<Exponent> per_component;
};
InterpGrowth interp_growth(const Interpretation& interp);

/// Dimension-optimal semantic interpretation: copies are indexed by seed
/// tuples of the skeleton disjuncts of each component's label union.
class OptimizedInterpretation {
 public:
  struct Part {
    int component = 0;
    Disjunct disjunct;
  };

  OptimizedInterpretation(const Interpretation& base, int horizon, std::uint64_t budget);

  int horizon() const noexcept { return horizon_; }
  /// Largest seed size over all parts; std::nullopt when there are no parts.
  Exponent dimension() const;
  const std::vector<Part>& parts() const noexcept { return parts_; }
  const Interpretation& base() const noexcept { return base_; }

  std::vector<Copy> evaluate_copies(const Word& w, bool audit_horizon = true) const;
  Word eval(const Word& w, bool audit_horizon = true) const;

 private:
  Interpretation base_;
  int horizon_;
  std::vector<Recognizer> unions_;  // per component; empty components are skipped
  std::vector<int> union_index_;    // component -> index into unions_, or -1
  std::vector<Part> parts_;
};

struct DisciplineViolation {
  Word input;
  int index = 0;  // position of the first configuration in the sequence
  std::string from;
  std::string to;
};

/// True when `b` can follow `a` in one pebble step: push/pop (one is the
/// other plus one pebble) or a head move (all but the last pebble agree).
bool discipline_step(const std::vector<int>& a, const std::vector<int>& b);
/// Consecutive copies on every input of length <= max_len, read as pebble stacks.
std::vector<DisciplineViolation> discipline_check(const Interpretation& interp, int max_len, std::uint64_t budget);

/// JSON: {input_alphabet, output_alphabet, empty_output, components:
/// [{dimension, labels: {letter: regex}, orders: {"i,j": regex}}], orders: {...}}.
Interpretation parse_interpretation(std::string_view json_text);
Interpretation load_interpretation(const std::string& path);

}  // namespace polygrow
