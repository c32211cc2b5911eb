#pragma once

#include <vector>

namespace polygrow {

/// Complete deterministic automaton over letters 0..num_letters-1.
struct Dfa {
  int num_letters = 0;
  int num_states = 0;
  int initial = 0;
  std::vector<char> accepting;  // per state
  std::vector<int> delta;       // state * num_letters + letter

  int next(int q, int letter) const { return delta[static_cast<std::size_t>(q * num_letters + letter)]; }

  template <typename Range>
  int run(const Range& letters, int from) const {
    int q = from;
    for (int a : letters) q = next(q, a);
    return q;
  }

  bool is_empty() const;
  /// Reachable part, Moore-minimized, states renumbered in breadth-first order.
  Dfa minimized() const;
  /// States from which no accepting state is reachable.
  std::vector<char> dead_states() const;
};

enum class ProductMode { Intersection, Union };
Dfa product(const Dfa& a, const Dfa& b, ProductMode mode);

}  // namespace polygrow
