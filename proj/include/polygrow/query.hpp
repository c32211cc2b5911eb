#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polygrow/dfa.hpp"
#include "polygrow/words.hpp"

namespace polygrow {

/// Positions (1-based) of the query variables, in Query::variables() order.
using Assignment = std::vector<int>;
/// Bit i stands for Query::variables()[i].
using VarMask = unsigned;

/// A set of pointed words given by an automaton over the marked alphabet
/// Sigma x 2^X. Marked letter (a, m) has index a * 2^|X| + m.
///
/// The constructor intersects the automaton with the well-formedness language
/// (every variable marks exactly one position) and minimizes the result, so
/// the stored automaton never accepts a malformed marked word.
class Query {
 public:
  static constexpr int kMaxVariables = 10;

  Query(Alphabet alphabet, std::vector<std::string> variables, const Dfa& marked);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  /// Variable names, sorted lexicographically.
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  int num_variables() const noexcept { return static_cast<int>(variables_.size()); }
  VarMask full_mask() const noexcept { return (VarMask{1} << variables_.size()) - 1; }
  int num_marked_letters() const noexcept { return alphabet_.size() << variables_.size(); }
  int marked(Letter a, VarMask m) const noexcept { return (a << variables_.size()) | static_cast<int>(m); }
  int var_index(std::string_view name) const;
  VarMask mask_of(const std::vector<std::string>& names) const;

  const Dfa& dfa() const noexcept { return dfa_; }
  /// True iff the query is the empty set of pointed words.
  bool is_empty() const { return dfa_.is_empty(); }
  bool accepts(const Word& w, const Assignment& positions) const;
  bool accepts(const PointedWord& pw) const;
  /// True when the well-formedness intersection removed reachable behaviour.
  bool well_formedness_shrank() const noexcept { return shrank_; }

  /// The marked word for (w, positions).
  std::vector<int> marked_word(const Word& w, const Assignment& positions) const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> variables_;
  Dfa dfa_;
  bool shrank_ = false;
};

/// Automaton accepting exactly the well-formed marked words.
Dfa well_formedness_dfa(int alphabet_size, int num_variables);

/// Regex grammar: atoms `a`, `a[x,y]`, `_`, `_[x]`; juxtaposition, `|`, `*`,
/// `+`, `?` and parentheses. Whitespace separates tokens.
Query parse_query(std::string_view text, const Alphabet& alphabet, std::vector<std::string> variables);

Query query_union(const Query& a, const Query& b);
Query query_intersection(const Query& a, const Query& b);
/// Complement within the well-formed pointed words.
Query query_complement(const Query& q);
/// The same condition over a larger variable set; the new variables are unconstrained.
Query query_lift(const Query& q, std::vector<std::string> variables);

/// All assignments selected in w, by brute-force enumeration of |w|^|X|
/// candidates in lexicographic order.
std::vector<Assignment> select_tuples(const Query& q, const Word& w);
std::uint64_t count_tuples(const Query& q, const Word& w);

struct GrowthEntry {
  int length = 0;
  std::uint64_t max_count = 0;
  bool operator==(const GrowthEntry&) const = default;
};

/// Entry n: maximum tuple count over all words of length <= n, for n = 1..max_len.
std::vector<GrowthEntry> growth_table(const Query& q, int max_len, std::uint64_t budget);

/// Query file: `alphabet: ...`, `vars: ...`, `query: <regex>`; `#` starts a comment.
struct QueryFile {
  Alphabet alphabet;
  std::vector<std::string> variables;
  std::string source;
};
QueryFile parse_query_file(std::string_view text);
QueryFile read_query_file(const std::string& path);
Query load_query(const QueryFile& file);

/// Enumerates all words over an alphabet of the given size with length in [min_len, max_len].
template <typename F>
void for_each_word(int alphabet_size, int min_len, int max_len, F&& visit) {
  for (int n = min_len; n <= max_len; ++n) {
    Word w(static_cast<std::size_t>(n), 0);
    for (;;) {
      visit(static_cast<const Word&>(w));
      int i = n - 1;
      while (i >= 0 && w[static_cast<std::size_t>(i)] == alphabet_size - 1) w[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
      ++w[static_cast<std::size_t>(i)];
    }
  }
}

std::uint64_t saturating_pow(std::uint64_t base, int exponent);

}  // namespace polygrow
