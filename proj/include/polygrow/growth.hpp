#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polygrow/skeleton.hpp"

namespace polygrow {

/// Growth exponent: std::nullopt stands for the empty query.
using Exponent = std::optional<int>;
std::string to_string(const Exponent& e);

/// Block counts k in 0..|X| for which the idempotent pattern exists.
std::vector<int> pattern_counts(const Recognizer& r);
Exponent exponent(const Recognizer& r);

struct PumpMove {
  enum class Kind { Free, Group };
  Kind kind = Kind::Free;
  Element value = 0;  // Free
  Letter letter = 0;  // Group
  VarMask vars = 0;   // Group
};

struct PumpBlock {
  Element idempotent = 0;
  std::vector<PumpMove> moves;
};

/// w0 (e1 v1 e1) w1 ... (ek vk ek) wk, where outside[i] spells w_i and
/// blocks[i].moves spells v_i.
struct PumpPattern {
  int k = 0;
  std::vector<std::vector<PumpMove>> outside;
  std::vector<PumpBlock> blocks;
};

PumpPattern pump_witness(const Recognizer& r, int k);

/// w0 E1^n w1 ... Ek^n wk with E_i the unpointed v_i.
Word realize(const Recognizer& r, const PumpPattern& p, int n);
/// The pointed word with v_i placed in copy copies[i] (1-based) of E_i^n.
std::pair<Word, Assignment> realize_pointed(const Recognizer& r, const PumpPattern& p, int n, const std::vector<int>& copies);
/// Problems with the pattern invariants; empty when the pattern is sound.
std::vector<std::string> check_pattern(const Recognizer& r, const PumpPattern& p);
std::string describe(const Recognizer& r, const PumpPattern& p);

struct Disjunct {
  std::string key;
  std::vector<int> seed;  // variable indices
  Word example_word;
  Assignment example_tuple;
  std::uint64_t tuples = 0;  // accepted tuples with this skeleton over the horizon
};

/// Skeletons of all accepted tuples on words of length <= horizon, ordered by key.
std::vector<Disjunct> decompose(const Recognizer& r, int horizon, std::uint64_t budget);
std::uint64_t decompose_cost(const Recognizer& r, int horizon);

struct PumpCheck {
  int n = 0;
  std::uint64_t count = 0;
  std::uint64_t lower = 0;  // (n - 2)^k
  std::size_t length = 0;
  bool ok() const { return count >= lower; }
};

struct CrossCheck {
  std::optional<std::array<Element, 3>> associativity_failure;
  Exponent exponent;
  std::vector<int> pattern_counts;
  bool monotone = true;
  int horizon = 0;
  std::vector<Disjunct> disjuncts;
  int max_seed = -1;  // -1 when there are no disjuncts
  std::vector<GrowthEntry> table;
  std::vector<double> ratios;  // table[n] / n^k
  std::uint64_t upper_constant = 0;  // number of disjuncts
  bool upper_bound_ok = true;
  std::optional<PumpPattern> pattern;
  std::vector<PumpCheck> pump;
  std::vector<std::string> disagreements;
  std::vector<std::string> notes;  // e.g. a horizon too short to show the largest seed
  bool ok() const { return !associativity_failure && disagreements.empty(); }
};

CrossCheck crosscheck(const Recognizer& r, int horizon, std::uint64_t budget);

}  // namespace polygrow
