#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polygrow/interpretation.hpp"
#include "polygrow/pebble.hpp"

namespace polygrow {

// Reference functions on character strings.

/// w -> w^|w|.
std::string ref_square(const std::string& w);
/// <a^k1>...<a^kn> -> <a^ki|a^kj> for all pairs (i, j) in lexicographic
/// order. Ill-formatted input gives the empty string.
std::string ref_block_square(const std::string& w);
/// a^n1 b ... a^nk b -> (a^n1 b)^k ... (a^nk b)^k. Ill-formatted input gives
/// the empty string.
std::string ref_map_power(const std::string& w);
/// a1 ... an -> a1 a1 a1 a2 ... an an. Throws on letters.
AtomWord ref_atom_square(const AtomWord& w);

struct LabeledTree {
  AtomWord label;
  std::vector<LabeledTree> children;

  int height() const;
  bool balanced() const;
  std::vector<AtomWord> leaves() const;
  bool operator==(const LabeledTree&) const = default;
};

/// Preorder: the label, then `< child ... child >` when there are children.
AtomWord encode_tree(const LabeledTree& t);
/// Inverse of encode_tree for one-symbol labels; throws SyntaxError.
LabeledTree parse_tree(const AtomWord& w);

LabeledTree alt_product(const LabeledTree& s, const LabeledTree& t);
LabeledTree alt_square(const LabeledTree& t);
/// Encoded alternating square of an encoded balanced height-k tree with atom
/// labels; anything else gives the empty word.
AtomWord ref_alt_square(const AtomWord& w, int k);

/// Three pebbles, six states.
PebbleMachine atom_square_machine();
/// 2k+1 pebbles; computes ref_alt_square(., k).
PebbleMachine alt_square_machine(int k);

/// Atom i is written as < a^length(i) >.
class AtomRepresentation {
 public:
  AtomRepresentation() = default;
  explicit AtomRepresentation(std::map<std::uint32_t, int> lengths);

  int length(Atom a) const;
  Atom atom(int length) const;
  bool covers_length(int length) const { return by_length_.count(length) != 0; }
  const std::map<std::uint32_t, int>& lengths() const noexcept { return lengths_; }

 private:
  std::map<std::uint32_t, int> lengths_;
  std::map<int, std::uint32_t> by_length_;
};

inline const std::string kBlockOpen = "<";
inline const std::string kBlockUnit = "a";
inline const std::string kBlockClose = ">";

AtomWord encode_atoms(const AtomWord& w, const AtomRepresentation& alpha);
AtomWord decode_atoms(const AtomWord& w, const AtomRepresentation& alpha);

using AtomFunction = std::function<AtomWord(const AtomWord&)>;

/// Replaces each block occurrence by a fresh atom, applies f and writes every
/// output atom back as the block it came from. Unbalanced input gives the
/// empty word.
AtomFunction deatomize(AtomFunction f);

struct CommuteFailure {
  AtomWord input;
  AtomWord expected;
  AtomWord actual;
  std::string note;
};

struct CommuteReport {
  std::uint64_t checked = 0;
  std::vector<CommuteFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks encode(f(w)) == deatomize(f)(encode(w)) on every sample.
CommuteReport check_deatomization(const AtomFunction& f, const AtomRepresentation& alpha,
                                  const std::vector<AtomWord>& samples);

/// Atom map; ids missing from the map are fixed.
using AtomMap = std::map<std::uint32_t, std::uint32_t>;
AtomWord apply_map(const AtomMap& pi, const AtomWord& w);
std::string describe(const AtomMap& pi);

/// Checks pi(f(w)) == f(pi(w)) for every sample and map.
CommuteReport check_atom_oblivious(const AtomFunction& f, const std::vector<AtomWord>& samples,
                                   const std::vector<AtomMap>& maps);

/// Returns the input when its first two letters exist and differ, otherwise
/// the empty word. Equivariant but not atom-oblivious.
AtomWord first_two_differ(const AtomWord& w);

/// Names: identity, duplicate, reverse, square, padded-square, block-square.
std::vector<std::string> builtin_interpretation_names();
Interpretation builtin_interpretation(const std::string& name);

}  // namespace polygrow
