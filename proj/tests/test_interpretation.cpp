#include <chrono>

#include "doctest.h"
#include "polygrow/examples.hpp"
#include "support.hpp"

using namespace polygrow;
using testing_support::make_query;

namespace {

std::string reference(const std::string& name, const std::string& w) {
  if (name == "identity") return w;
  if (name == "duplicate") return w + w;
  if (name == "reverse") return std::string(w.rbegin(), w.rend());
  if (name == "square" || name == "padded-square") return ref_square(w);
  if (name == "block-square") return ref_block_square(w);
  throw Error("no reference for " + name);
}

std::string text(const Alphabet& a, const Word& w) {
  std::string out;
  for (Letter x : w) out += a.symbol(x);
  return out;
}

}  // namespace

TEST_CASE("builtin interpretations match the reference functions") {
  for (const std::string& name : builtin_interpretation_names()) {
    CAPTURE(name);
    const Interpretation in = builtin_interpretation(name);
    for_each_word(in.input.size(), 0, 7, [&](const Word& w) {
      CHECK(text(in.output, eval_interpretation(in, w)) == reference(name, text(in.input, w)));
    });
  }
  const Interpretation bs = builtin_interpretation("block-square");
  CHECK(text(bs.output, eval_interpretation(bs, bs.input.parse_word("<a><aa>"))) == "<a|a><a|aa><aa|a><aa|aa>");
}

TEST_CASE("interpretation growth") {
  CHECK(interp_growth(builtin_interpretation("identity")).k == Exponent{1});
  CHECK(interp_growth(builtin_interpretation("duplicate")).k == Exponent{1});
  CHECK(interp_growth(builtin_interpretation("reverse")).k == Exponent{1});
  CHECK(interp_growth(builtin_interpretation("square")).k == Exponent{2});
  CHECK(interp_growth(builtin_interpretation("padded-square")).k == Exponent{2});
  CHECK(interp_growth(builtin_interpretation("block-square")).k == Exponent{2});
}

TEST_CASE("optimized interpretations agree with the originals") {
  for (const std::string& name : {"identity", "duplicate", "reverse", "square", "padded-square"}) {
    CAPTURE(name);
    const Interpretation in = builtin_interpretation(name);
    const OptimizedInterpretation opt(in, 8, default_budget());
    CHECK(opt.dimension() == interp_growth(in).k);
    for_each_word(in.input.size(), 0, 6, [&](const Word& w) { CHECK(opt.eval(w) == eval_interpretation(in, w)); });
  }
}

TEST_CASE("block squaring is exact below the horizon and audited above it") {
  const Interpretation in = builtin_interpretation("block-square");
  const OptimizedInterpretation opt(in, 6, default_budget());
  for_each_word(in.input.size(), 0, 6, [&](const Word& w) { CHECK(opt.eval(w) == eval_interpretation(in, w)); });
  CHECK_THROWS_AS(opt.eval(in.input.parse_word("<><><><>")), HorizonError);
  CHECK(opt.eval(in.input.parse_word("<><><><>"), false) != eval_interpretation(in, in.input.parse_word("<><><><>")));
}

TEST_CASE("interpretation JSON and order audits") {
  const std::string head = R"j({"input_alphabet": "ab", "output_alphabet": "ab", "components": [)j";
  const Interpretation two = parse_interpretation(head + R"j(
      {"dimension": 1, "labels": {"a": "_* _[x1] _*"}},
      {"dimension": 1, "labels": {"b": "_* _[x1] _*"}}],
    "orders": {"1,0": "_* _[x1] _* _[y1] _* | _* _[x1,y1] _*"}})j");
  // (1, x) before (0, y) iff x <= y: the copies interleave as b a b a ...
  CHECK(text(two.output, eval_interpretation(two, two.input.parse_word("aab"))) == "bababa");

  const Interpretation tie = parse_interpretation(head + R"j(
      {"dimension": 1, "labels": {"a": "_* _[x1] _*"}, "orders": {"0,0": "_* _[x1,y1] _*"}}]})j");
  CHECK_THROWS_AS(eval_interpretation(tie, tie.input.parse_word("ab")), Error);
  CHECK(eval_interpretation(tie, tie.input.parse_word("a")) == tie.output.parse_word("a"));

  const Interpretation ambiguous = parse_interpretation(head + R"j(
      {"dimension": 1, "labels": {"a": "_* _[x1] _*", "b": "_* b[x1] _*"}}]})j");
  CHECK_THROWS_AS(eval_interpretation(ambiguous, ambiguous.input.parse_word("ab")), Error);

  CHECK_THROWS_AS(parse_interpretation("["), Error);
  CHECK_THROWS_AS(parse_interpretation(head + R"j({"dimension": 1, "labels": {"c": "_* _[x1] _*"}}]})j"), Error);
  CHECK_THROWS_AS(parse_interpretation(head + R"j({"dimension": 9, "labels": {}}]})j"), Error);
  CHECK_THROWS_AS(parse_interpretation(head + R"j({"dimension": 1, "labels": {}}], "orders": {"0,3": "_*"}})j"), Error);
  CHECK_THROWS_AS(parse_interpretation(head + R"j({"dimension": 1, "labels": {}}], "orders": {"zero": "_*"}})j"), Error);
}

TEST_CASE("stack discipline of consecutive copies") {
  CHECK(discipline_step({1, 2}, {1, 2, 1}));
  CHECK(discipline_step({1, 2, 1}, {1, 2}));
  CHECK(discipline_step({1, 2}, {1, 3}));
  CHECK_FALSE(discipline_step({1, 2}, {2, 1}));
  CHECK_FALSE(discipline_step({1, 2}, {2, 2, 1}));
  CHECK_FALSE(discipline_step({1}, {1, 2, 3}));
  CHECK(discipline_check(builtin_interpretation("identity"), 5, default_budget()).empty());
  CHECK(discipline_check(builtin_interpretation("reverse"), 5, default_budget()).empty());
  // Lexicographic squaring jumps from (i, n) to (i + 1, 1): n - 1 times per word.
  std::uint64_t expected = 0;
  for (int n = 1; n <= 4; ++n) expected += (std::uint64_t{1} << n) * (n - 1);
  const auto violations = discipline_check(builtin_interpretation("square"), 4, default_budget());
  CHECK(violations.size() == expected);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().from == "c0(1,2)");
  CHECK(violations.front().to == "c0(2,1)");
  CHECK_THROWS_AS(discipline_check(builtin_interpretation("square"), 30, 1000), BudgetExceeded);
}
