#include <random>
#include <regex>

#include "doctest.h"
#include "support.hpp"

using namespace polygrow;
using testing_support::alphabet;
using testing_support::make_query;
using testing_support::random_word;

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < k) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Pointed word as text with the variables in brackets after their letter,
// matched by std::regex as an independent oracle.
std::string marked_text(const Alphabet& a, const Word& w, const std::vector<std::string>& vars, const Assignment& p) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += a.symbol(w[i]);
    std::string marks;
    for (std::size_t v = 0; v < vars.size(); ++v)
      if (p[v] == static_cast<int>(i) + 1) marks += vars[v];
    out += "[" + marks + "]";
  }
  return out;
}

}  // namespace

TEST_CASE("alphabets and words") {
  const Alphabet a({"a", "b", "ab"});
  CHECK(a.parse_word("ab a b") == Word{2, 0, 1});
  CHECK(a.parse_word("ba") == Word{1, 0});
  CHECK_THROWS_AS(a.parse_word("c"), Error);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
  CHECK(alphabet("ab").single_char());
  CHECK_FALSE(a.single_char());
  CHECK(alphabet("ab").render({0, 1, 1}) == "abb");

  PointedWord u{{0, 1}, {{"x", 2}}};
  PointedWord v{{1}, {{"y", 1}}};
  const PointedWord uv = concat_pointed(u, v);
  CHECK(uv.word == Word{0, 1, 1});
  CHECK(uv.assignment.at("y") == 3);
  CHECK_THROWS_AS(concat_pointed(u, u), Error);
  CHECK_THROWS_AS((PointedWord{{0}, {{"x", 2}}}).validate(), Error);

  const AtomWord w = parse_atom_word("#3 x #10", {"x"});
  REQUIRE(w.size() == 3);
  CHECK(std::get<Atom>(w[0]).id == 3);
  CHECK(render_atom_word(w) == "#3 x #10");
  CHECK(atoms({1, 2}) == parse_atom_word("#1 #2"));
  CHECK(letters("ab") == parse_atom_word("ab"));
}

TEST_CASE("automaton products and minimization") {
  const Query even = make_query("ab", {}, "((a|b) (a|b))*");
  const Query has_b = make_query("ab", {}, "_* b _*");
  const Dfa both = product(even.dfa(), has_b.dfa(), ProductMode::Intersection).minimized();
  const Dfa either = product(even.dfa(), has_b.dfa(), ProductMode::Union).minimized();
  for_each_word(2, 0, 7, [&](const Word& w) {
    const bool e = w.size() % 2 == 0;
    const bool b = std::find(w.begin(), w.end(), 1) != w.end();
    CHECK(static_cast<bool>(both.accepting[both.run(w, both.initial)]) == (e && b));
    CHECK(static_cast<bool>(either.accepting[either.run(w, either.initial)]) == (e || b));
  });
  CHECK(both.num_states == 4);
  CHECK(make_query("a", {}, "a a*").dfa().minimized().num_states <= 3);
  CHECK(make_query("ab", {"x"}, "a* b[x] a* b[x] _*").is_empty());
}

TEST_CASE("query semantics against std::regex") {
  struct Case {
    const char* letters;
    std::vector<std::string> vars;
    const char* query;
    const char* oracle;
  };
  const std::vector<Case> cases = {
      {"ab", {"x"}, "_* a[x] _*", R"(.*a\[x\].*)"},
      {"ab", {"x", "y"}, "_* _[x] b* _[y] _*", R"(.*\[x\](b\[\])*.\[y\].*)"},
      {"ab", {"x", "y"}, "(a|b)* a[x,y] b*", R"((.\[\])*a\[xy\](b\[\])*)"},
      {"ab", {"x"}, "(a a)* _[x] _*", R"((a\[\]a\[\])*.\[x\].*)"},
  };
  std::mt19937 rng(1);
  for (const Case& c : cases) {
    const Query q = make_query(c.letters, c.vars, c.query);
    const std::regex re(c.oracle);
    for (int trial = 0; trial < 200; ++trial) {
      const Word w = random_word(rng, 2, std::uniform_int_distribution<int>(1, 7)(rng));
      std::uint64_t count = 0;
      for (const Assignment& p : select_tuples(q, w)) {
        CHECK(std::regex_match(marked_text(q.alphabet(), w, c.vars, p), re));
        ++count;
      }
      std::uint64_t oracle = 0;
      Assignment p(c.vars.size(), 1);
      for (;;) {
        if (std::regex_match(marked_text(q.alphabet(), w, c.vars, p), re)) ++oracle;
        std::size_t i = p.size();
        while (i > 0 && p[i - 1] == static_cast<int>(w.size())) p[--i] = 1;
        if (i == 0) break;
        ++p[i - 1];
      }
      CHECK(count == oracle);
      CHECK(count_tuples(q, w) == oracle);
    }
  }
}

TEST_CASE("tuple counts of the order queries") {
  const Query triple = make_query("a", {"x1", "x2", "x3"}, "_* _[x1] _* _[x2] _* _[x3] _*");
  const Query succ = make_query("a", {"x1", "x2", "x3"}, "_* _[x1] _* _[x2] _[x3] _*");
  const auto t = growth_table(triple, 10, default_budget());
  const auto s = growth_table(succ, 10, default_budget());
  for (int n = 1; n <= 10; ++n) {
    CHECK(count_tuples(triple, Word(n, 0)) == binomial(n, 3));
    CHECK(count_tuples(succ, Word(n, 0)) == binomial(n - 1, 2));
    CHECK(t[n - 1].max_count == binomial(n, 3));
    CHECK(s[n - 1].max_count == binomial(n - 1, 2));
  }
  CHECK_THROWS_AS(growth_table(triple, 30, 1000), BudgetExceeded);
}

TEST_CASE("query combinators") {
  const Query a = make_query("ab", {"x"}, "_* a[x] _*");
  const Query first = make_query("ab", {"x"}, "_[x] _*");
  const Query both = query_intersection(a, first);
  const Query either = query_union(a, first);
  const Query not_a = query_complement(a);
  const Query lifted = query_lift(a, {"x", "y"});
  CHECK(lifted.num_variables() == 2);
  for_each_word(2, 1, 5, [&](const Word& w) {
    for (int x = 1; x <= static_cast<int>(w.size()); ++x) {
      CHECK(both.accepts(w, {x}) == (a.accepts(w, {x}) && first.accepts(w, {x})));
      CHECK(either.accepts(w, {x}) == (a.accepts(w, {x}) || first.accepts(w, {x})));
      CHECK(not_a.accepts(w, {x}) == !a.accepts(w, {x}));
      for (int y = 1; y <= static_cast<int>(w.size()); ++y) CHECK(lifted.accepts(w, {x, y}) == a.accepts(w, {x}));
    }
  });
  CHECK_THROWS_AS(query_union(a, lifted), Error);
}

TEST_CASE("variable order does not matter") {
  const Query xy = make_query("ab", {"x", "y"}, "_* a[x] _* b[y] _*");
  const Query yx = make_query("ab", {"y", "x"}, "_* a[x] _* b[y] _*");
  CHECK(yx.variables() == std::vector<std::string>{"x", "y"});
  for_each_word(2, 1, 5, [&](const Word& w) { CHECK(select_tuples(xy, w) == select_tuples(yx, w)); });
}

TEST_CASE("query syntax errors and files") {
  CHECK_THROWS_AS(make_query("ab", {"x"}, "_* a[z] _*"), SyntaxError);
  CHECK_THROWS_AS(make_query("ab", {"x"}, "(a"), SyntaxError);
  CHECK_THROWS_AS(make_query("ab", {"x"}, "c"), SyntaxError);
  const QueryFile f = parse_query_file("# comment\nalphabet: a b\nvars: x\nquery: _* a[x] _*\n");
  CHECK(f.alphabet.size() == 2);
  CHECK(load_query(f).accepts(f.alphabet.parse_word("ba"), {2}));
  CHECK_THROWS_AS(parse_query_file("vars: x\n"), Error);
  CHECK_THROWS_AS(parse_query_file("alphabet: a\nfoo: 1\nquery: a\n"), Error);
}

TEST_CASE("transition semigroups") {
  std::mt19937 rng(2);
  const std::vector<std::pair<const char*, const char*>> queries = {
      {"ab", "_* a _*"}, {"ab", "(a b)*"}, {"a", "(a a a)*"}, {"ab", "_* a _ _"}};
  for (const auto& [letters, regex] : queries) {
    const Recognizer r = compile(make_query(letters, {}, regex));
    CHECK_FALSE(r.semigroup.associativity_failure());
    for (Element s = 0; s < r.size(); ++s) {
      CHECK(h_value(r, r.witness[s]) == s);
      CHECK(r.semigroup.is_idempotent(r.semigroup.idempotent_power(s)));
    }
    for (int trial = 0; trial < 100; ++trial) {
      const Word u = random_word(rng, r.query.alphabet().size(), std::uniform_int_distribution<int>(1, 6)(rng));
      const Word v = random_word(rng, r.query.alphabet().size(), std::uniform_int_distribution<int>(1, 6)(rng));
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      CHECK(h_value(r, uv) == r.semigroup.mul(h_value(r, u), h_value(r, v)));
      const int q = r.query.dfa().initial;
      CHECK(r.apply(h_value(r, uv), q) == r.query.dfa().run(r.query.marked_word(uv, {}), q));
    }
  }
  const Recognizer mod3 = compile(make_query("a", {}, "(a a a)*"));
  CHECK(mod3.size() == 3);
  CHECK(mod3.semigroup.idempotents().size() == 1);
  CHECK_THROWS_AS(h_value(mod3, {}), Error);
  CHECK_THROWS_AS(compile(make_query("ab", {}, "_* a _ _ _ _ _ _"), 10), BudgetExceeded);
  bool broken = false;
  for (Element a = 0; a < 3 && !broken; ++a)
    for (Element b = 0; b < 3 && !broken; ++b)
      for (Element v = 0; v < 3 && !broken; ++v)
        if (v != mod3.semigroup.mul(a, b)) broken = mod3.semigroup.with_entry(a, b, v).associativity_failure().has_value();
  CHECK(broken);
}
