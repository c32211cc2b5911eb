#include <functional>

#include "doctest.h"
#include "polygrow/growth.hpp"
#include "support.hpp"

using namespace polygrow;
using testing_support::make_query;

namespace {

const char* kTriple = "_* _[x1] _* _[x2] _* _[x3] _*";
const char* kSuccessor = "_* _[x1] _* _[x2] _[x3] _*";

// Block counts realizable by the idempotent pattern, found by enumerating
// explicit token sequences: groups, blocks opened and closed around groups,
// and at most one value between consecutive tokens.
std::vector<int> naive_counts(const Recognizer& r) {
  const Query& q = r.query;
  const Semigroup& s = r.semigroup;
  const Dfa& dfa = q.dfa();
  std::vector<char> reach(static_cast<std::size_t>(q.num_variables()) + 1, 0);

  struct Token {
    enum Kind { Group, Open, Close } kind;
    Letter letter = 0;
    VarMask vars = 0;
    Element e = 0;
  };
  std::vector<Token> tokens;

  // Tries every choice of optional values in the slots around the tokens.
  auto evaluate = [&](int blocks) {
    const int slots = static_cast<int>(tokens.size()) + 1;
    std::vector<int> choice(static_cast<std::size_t>(slots), -1);
    for (;;) {
      int state = dfa.initial;
      int open_e = -1;
      int product = -1;
      bool saw = false;
      bool ok = true;
      for (int i = 0; i < slots && ok; ++i) {
        if (choice[i] >= 0) {
          state = r.apply(choice[i], state);
          if (open_e >= 0) product = product < 0 ? choice[i] : s.mul(product, choice[i]);
        }
        if (i == slots - 1) break;
        const Token& t = tokens[i];
        switch (t.kind) {
          case Token::Group:
            state = dfa.next(state, q.marked(t.letter, t.vars));
            if (open_e >= 0) {
              const Element h = r.letter_value[t.letter];
              product = product < 0 ? h : s.mul(product, h);
              saw = true;
            }
            break;
          case Token::Open:
            state = r.apply(t.e, state);
            open_e = t.e;
            product = -1;
            saw = false;
            break;
          case Token::Close:
            if (!saw || product != open_e) ok = false;
            state = r.apply(open_e, state);
            open_e = -1;
            break;
        }
      }
      if (ok && dfa.accepting[state]) {
        reach[blocks] = 1;
        return;
      }
      int i = 0;
      while (i < slots && choice[i] == s.size() - 1) choice[i++] = -1;
      if (i == slots) return;
      ++choice[i];
    }
  };

  std::function<void(VarMask, int, bool, bool)> grow = [&](VarMask used, int blocks, bool open, bool saw) {
    if (used == q.full_mask() && !open) evaluate(blocks);
    if (!open) {
      for (Element e : s.idempotents()) {
        tokens.push_back({Token::Open, 0, 0, e});
        grow(used, blocks, true, false);
        tokens.pop_back();
      }
    } else if (saw) {
      tokens.push_back({Token::Close});
      grow(used, blocks + 1, false, false);
      tokens.pop_back();
    }
    for (VarMask g = 1; g <= q.full_mask(); ++g) {
      if (g & used) continue;
      for (Letter a = 0; a < q.alphabet().size(); ++a) {
        tokens.push_back({Token::Group, a, g});
        grow(used | g, blocks, open, open || saw);
        tokens.pop_back();
      }
    }
  };
  grow(0, 0, false, false);
  std::vector<int> out;
  for (std::size_t k = 0; k < reach.size(); ++k)
    if (reach[k]) out.push_back(static_cast<int>(k));
  return out;
}

Query random_query(std::mt19937& rng, int sigma, int vars, int states) {
  std::vector<std::string> names;
  for (int v = 0; v < vars; ++v) names.push_back("x" + std::to_string(v + 1));
  Dfa d;
  d.num_letters = sigma << vars;
  d.num_states = states;
  std::uniform_int_distribution<int> st(0, states - 1);
  for (int q = 0; q < states; ++q) d.accepting.push_back(rng() % 3 == 0);
  for (int i = 0; i < states * d.num_letters; ++i) d.delta.push_back(st(rng));
  return Query(testing_support::alphabet(std::string("abc").substr(0, static_cast<std::size_t>(sigma))), names, d);
}

}  // namespace

TEST_CASE("exponents of reference queries") {
  CHECK(exponent(compile(make_query("a", {"x1", "x2", "x3"}, kTriple))) == Exponent{3});
  CHECK(exponent(compile(make_query("ab", {"x1", "x2", "x3"}, kTriple))) == Exponent{3});
  CHECK(exponent(compile(make_query("ab", {"x1", "x2", "x3"}, kSuccessor))) == Exponent{2});
  CHECK(exponent(compile(make_query("ab", {"x"}, "_[x] _*"))) == Exponent{0});
  CHECK(exponent(compile(make_query("a", {"x"}, "a a"))) == Exponent{});
  CHECK(exponent(compile(make_query("ab", {}, "a b*"))) == Exponent{0});
}

TEST_CASE("pattern search agrees with explicit enumeration") {
  std::mt19937 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 120; ++trial) {
    const int vars = 1 + trial % 2;
    const Query q = random_query(rng, 1 + trial % 2, vars, 2 + trial % 3);
    Recognizer r = compile(q);
    if (r.size() > 4) continue;
    ++compared;
    INFO("trial " << trial);
    CHECK(pattern_counts(r) == naive_counts(r));
  }
  CHECK(compared >= 50);
}

TEST_CASE("pump witnesses realize the lower bound") {
  for (const char* alphabet : {"a", "ab"}) {
    const Recognizer r = compile(make_query(alphabet, {"x1", "x2", "x3"}, kTriple));
    const PumpPattern p = pump_witness(r, 3);
    CHECK(check_pattern(r, p).empty());
    std::size_t previous = 0;
    for (int n = 3; n <= 8; ++n) {
      const Word w = realize(r, p, n);
      CHECK(count_tuples(r.query, w) >= static_cast<std::uint64_t>((n - 2) * (n - 2) * (n - 2)));
      if (n > 3) CHECK(w.size() - previous == realize(r, p, 4).size() - realize(r, p, 3).size());
      previous = w.size();
      if (std::string(alphabet) == "a") CHECK(std::all_of(w.begin(), w.end(), [](Letter a) { return a == 0; }));
    }
  }
  const Recognizer r = compile(make_query("ab", {"x1", "x2", "x3"}, kSuccessor));
  const PumpPattern p = pump_witness(r, 2);
  CHECK(check_pattern(r, p).empty());
  for (int n = 3; n <= 8; ++n) CHECK(count_tuples(r.query, realize(r, p, n)) >= static_cast<std::uint64_t>((n - 2) * (n - 2)));
  CHECK_THROWS_AS(pump_witness(r, 3), Error);
  CHECK_THROWS_AS(pump_witness(r, 0), Error);
}

TEST_CASE("decomposition of the successor query") {
  const Recognizer r = compile(make_query("ab", {"x1", "x2", "x3"}, kSuccessor));
  const auto disjuncts = decompose(r, 8, default_budget());
  int max_seed = 0;
  for (const auto& d : disjuncts) max_seed = std::max(max_seed, static_cast<int>(d.seed.size()));
  CHECK(max_seed == 2);
  std::uint64_t total = 0;
  for (const auto& d : disjuncts) total += d.tuples;
  std::uint64_t direct = 0;
  for_each_word(2, 1, 8, [&](const Word& w) { direct += count_tuples(r.query, w); });
  CHECK(total == direct);
}

TEST_CASE("per-word partition of tuples into disjuncts") {
  const Recognizer r = compile(make_query("ab", {"x", "y"}, "_* a[x] (b b)* b[y] _*"));
  for_each_word(2, 1, 7, [&](const Word& w) {
    const FactorizationTree t = build_fft(r, w);
    std::map<std::string, std::uint64_t> counts;
    for (const Assignment& a : select_tuples(r.query, w)) ++counts[skeleton(t, a, r.query.variables()).key()];
    std::uint64_t sum = 0;
    for (const auto& [key, c] : counts) sum += c;
    CHECK(sum == count_tuples(r.query, w));
  });
}

TEST_CASE("empty query decomposes to nothing") {
  const Recognizer r = compile(make_query("a", {"x"}, "a a"));
  CHECK(decompose(r, 6, default_budget()).empty());
  const CrossCheck c = crosscheck(r, 6, default_budget());
  CHECK_FALSE(c.exponent.has_value());
  CHECK(c.ok());
}

TEST_CASE("crosscheck of reference queries") {
  const CrossCheck triple = crosscheck(compile(make_query("a", {"x1", "x2", "x3"}, kTriple)), 9, default_budget());
  CHECK(triple.exponent == Exponent{3});
  CHECK(triple.max_seed == 3);
  CHECK(triple.ok());
  CHECK(triple.pump.size() == 6);
  CHECK(triple.notes.empty());

  // Minimal-height trees over a^8 cannot separate three movable intervals.
  const CrossCheck short_horizon = crosscheck(compile(make_query("a", {"x1", "x2", "x3"}, kTriple)), 8, default_budget());
  CHECK(short_horizon.max_seed == 2);
  CHECK(short_horizon.ok());
  CHECK(short_horizon.notes.size() == 1);

  const CrossCheck first = crosscheck(compile(make_query("ab", {"x"}, "_[x] _*")), 8, default_budget());
  CHECK(first.exponent == Exponent{0});
  for (const auto& e : first.table) CHECK(e.max_count == 1);
  CHECK(first.ok());
}

TEST_CASE("decomposition budget") {
  const Recognizer r = compile(make_query("ab", {"x1", "x2", "x3"}, kTriple));
  CHECK_THROWS_AS(decompose(r, 12, 1000), BudgetExceeded);
}

TEST_CASE("corrupted multiplication is reported before analysis") {
  Recognizer r = compile(make_query("ab", {"x"}, "_* a[x] (b b)*"));
  REQUIRE(r.size() >= 2);
  r.semigroup = r.semigroup.with_entry(0, 0, (r.semigroup.mul(0, 0) + 1) % r.size());
  const CrossCheck c = crosscheck(r, 6, default_budget());
  CHECK(c.associativity_failure.has_value());
  CHECK_FALSE(c.ok());
}
