#include <algorithm>
#include <climits>
#include <functional>
#include <map>

#include "doctest.h"
#include "polygrow/forest.hpp"
#include "support.hpp"

using namespace polygrow;
using testing_support::make_query;

namespace {

// Minimum factorization height straight from the definition, by memoized
// recursion over intervals and piece sequences.
int min_height_oracle(const Recognizer& r, const Word& w) {
  const int n = static_cast<int>(w.size());
  const Semigroup& s = r.semigroup;
  auto value = [&](int i, int j) {
    Element v = r.letter_value[w[i]];
    for (int k = i + 1; k <= j; ++k) v = s.mul(v, r.letter_value[w[k]]);
    return v;
  };
  std::map<std::pair<int, int>, int> memo;
  std::function<int(int, int)> h = [&](int i, int j) -> int {
    if (i == j) return 0;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    int best = INT_MAX;
    for (int m = i; m < j; ++m) best = std::min(best, std::max(h(i, m), h(m + 1, j)) + 1);
    const Element e = value(i, j);
    if (s.is_idempotent(e)) {
      std::map<std::pair<int, int>, int> pieces;
      std::function<int(int, int)> g = [&](int a, int c) -> int {
        auto pit = pieces.find({a, c});
        if (pit != pieces.end()) return pit->second;
        int out = INT_MAX;
        for (int b = a; b <= j; ++b) {
          if (value(a, b) != e) continue;
          if (b == j) {
            if (c + 1 >= 3) out = std::min(out, h(a, b));
          } else {
            const int rest = g(b + 1, std::min(c + 1, 3));
            if (rest != INT_MAX) out = std::min(out, std::max(h(a, b), rest));
          }
        }
        return pieces[{a, c}] = out;
      };
      const int wide = g(i, 0);
      if (wide != INT_MAX) best = std::min(best, wide + 1);
    }
    return memo[{i, j}] = best;
  };
  return h(0, n - 1);
}

const char* kQueries[][3] = {
    {"ab", "x", "_* a[x] _*"},
    {"ab", "x,y", "_* a[x] (b b)* _[y] _*"},
    {"abc", "", "(a b c)* | c+"},
    {"ab", "x", "(a a)* b[x] (a | b a)*"},
};

Query query_at(int k) {
  std::vector<std::string> vars;
  std::string v = kQueries[k][1];
  std::size_t start = 0;
  while (start < v.size()) {
    std::size_t comma = v.find(',', start);
    if (comma == std::string::npos) comma = v.size();
    vars.push_back(v.substr(start, comma - start));
    start = comma + 1;
  }
  return make_query(kQueries[k][0], vars, kQueries[k][2]);
}

}  // namespace

TEST_CASE("single letter gives a one-node tree") {
  const Recognizer r = compile(make_query("ab", {"x"}, "_* a[x] _*"));
  const FactorizationTree t = build_fft(r, Word{0});
  CHECK(t.size() == 1);
  CHECK(t.height() == 0);
  CHECK(validate_fft(r, Word{0}, t).empty());
}

TEST_CASE("empty word is rejected") {
  const Recognizer r = compile(make_query("ab", {"x"}, "_* a[x] _*"));
  CHECK_THROWS_AS(build_fft(r, Word{}), Error);
}

TEST_CASE("constructed trees are valid, minimal and deterministic") {
  std::mt19937 rng(7);
  for (int k = 0; k < 4; ++k) {
    const Recognizer r = compile(query_at(k));
    for (int trial = 0; trial < 60; ++trial) {
      const Word w = testing_support::random_word(rng, r.query.alphabet().size(), 1 + trial % 12);
      const FactorizationTree t = build_fft(r, w);
      INFO("query " << k << " word length " << w.size());
      CHECK(validate_fft(r, w, t).empty());
      CHECK(t.height() <= height_bound(r));
      CHECK(t.height() == min_height_oracle(r, w));
      CHECK(build_fft(r, w).serialize() == t.serialize());
      for (int i = 1; i <= t.length(); ++i)
        for (int j = i; j <= t.length(); ++j)
          CHECK(infix_value(r, t, i, j) == h_value(r, Word(w.begin() + i - 1, w.begin() + j)));
    }
  }
}

TEST_CASE("long unary words stay within the height bound") {
  const Recognizer r = compile(make_query("a", {"x", "y", "z"}, "_* _[x] _* _[y] _* _[z] _*"));
  CHECK(r.size() == 1);
  const Word w(300, 0);
  const FactorizationTree t = build_fft(r, w);
  CHECK(validate_fft(r, w, t).empty());
  CHECK(t.height() <= height_bound(r));
  CHECK(t.yield() == w);
}

TEST_CASE("validation flags injected faults") {
  const Recognizer r = compile(query_at(1));
  const Word w{0, 1, 1, 0, 1, 1, 0, 1, 0};
  FactorizationTree t = build_fft(r, w);
  REQUIRE(validate_fft(r, w, t).empty());
  const int root = t.root();
  t.relabel(root, (t.node(root).value + 1) % r.size());
  const auto violations = validate_fft(r, w, t);
  REQUIRE_FALSE(violations.empty());
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [&](const FftViolation& v) { return v.rule == FftViolation::Rule::LabelMismatch && v.node == root; }));
  Word other = w;
  other[0] = 1;
  const auto mismatch = validate_fft(r, other, build_fft(r, w));
  CHECK(std::any_of(mismatch.begin(), mismatch.end(),
                    [](const FftViolation& v) { return v.rule == FftViolation::Rule::YieldMismatch; }));
}

TEST_CASE("wide nodes with non-idempotent labels are rejected") {
  const Recognizer r = compile(make_query("a", {}, "(a a)*"));
  REQUIRE(r.size() == 2);
  const Element odd = r.letter_value[0];
  REQUIRE_FALSE(r.semigroup.is_idempotent(odd));
  FactorizationTree t;
  const int a = t.add_leaf(0, odd);
  const int b = t.add_leaf(0, odd);
  const int c = t.add_leaf(0, odd);
  t.add_inner(odd, {a, b, c});
  const auto v = validate_fft(r, Word{0, 0, 0}, t);
  CHECK(std::any_of(v.begin(), v.end(), [](const FftViolation& x) { return x.rule == FftViolation::Rule::NonIdempotentWide; }));
}
