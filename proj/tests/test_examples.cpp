#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "polygrow/examples.hpp"
#include "support.hpp"

using namespace polygrow;

namespace {

AtomWord W(const std::string& text) { return parse_atom_word(text, {"<", ">", "|", "a", "x"}); }

// The nested loop program: x0 = y0 = root, then for x1 in children(x0), for
// y1 in children(y0), ... Written independently of alt_product.
void loop_program(const std::vector<const LabeledTree*>& xs, const std::vector<const LabeledTree*>& ys, int k,
                  AtomWord& out) {
  const std::size_t m = ys.size() - 1;  // x_0..x_m and y_0..y_m are bound
  if (xs.size() == ys.size()) {
    out.push_back(xs[m]->label[0]);
    out.push_back(ys[m]->label[0]);
    if (static_cast<int>(m) == k) return;
    out.emplace_back(std::string("<"));
    for (const LabeledTree& c : xs[m]->children) {
      auto xs2 = xs;
      xs2.push_back(&c);
      loop_program(xs2, ys, k, out);
    }
    out.emplace_back(std::string(">"));
  } else {
    out.push_back(ys[m]->label[0]);
    out.push_back(xs[m + 1]->label[0]);
    out.emplace_back(std::string("<"));
    for (const LabeledTree& c : ys[m]->children) {
      auto ys2 = ys;
      ys2.push_back(&c);
      loop_program(xs, ys2, k, out);
    }
    out.emplace_back(std::string(">"));
  }
}

AtomWord loop_oracle(const LabeledTree& t, int k) {
  AtomWord out;
  loop_program({&t}, {&t}, k, out);
  return out;
}

LabeledTree random_balanced(std::mt19937& rng, int height, int max_children, std::uint32_t& next) {
  LabeledTree t;
  t.label = {Atom{next++}};
  if (height == 0) return t;
  const int n = std::uniform_int_distribution<int>(1, max_children)(rng);
  for (int i = 0; i < n; ++i) t.children.push_back(random_balanced(rng, height - 1, max_children, next));
  return t;
}

AtomWord distinct_atoms(int n) {
  AtomWord w;
  for (int i = 1; i <= n; ++i) w.emplace_back(Atom{static_cast<std::uint32_t>(i)});
  return w;
}

AtomWord to_atom_word(const std::string& s) {
  AtomWord w;
  for (char c : s) w.emplace_back(std::string(1, c));
  return w;
}

}  // namespace

TEST_CASE("reference functions on the worked examples") {
  CHECK(ref_square("123") == "123123123");
  CHECK(ref_block_square("<a><aa><aaa>") ==
        "<a|a><a|aa><a|aaa><aa|a><aa|aa><aa|aaa><aaa|a><aaa|aa><aaa|aaa>");
  CHECK(ref_block_square("<a><aa>") == "<a|a><a|aa><aa|a><aa|aa>");
  CHECK(ref_block_square("<a><a") == "");
  CHECK(ref_block_square("") == "");
  CHECK(ref_map_power("abaab") == "ababaabaab");
  CHECK(ref_map_power("aba") == "");
  CHECK(ref_atom_square(atoms({1, 2})) == atoms({1, 1, 1, 2, 2, 1, 2, 2}));
  CHECK(ref_atom_square(atoms({7})) == atoms({7, 7}));
  CHECK_THROWS_AS(ref_atom_square(W("#1 x")), Error);
  for (int n = 0; n <= 6; ++n) CHECK(ref_atom_square(distinct_atoms(n)).size() == std::size_t(2 * n * n));
}

TEST_CASE("block squaring outputs n^2 blocks") {
  for (int n = 0; n <= 6; ++n) {
    std::string in;
    for (int i = 1; i <= n; ++i) in += "<" + std::string(i, 'a') + ">";
    const std::string out = ref_block_square(in);
    CHECK(std::count(out.begin(), out.end(), '<') == n * n);
    CHECK(std::count(out.begin(), out.end(), '|') == n * n);
  }
}

TEST_CASE("trees: encoding and alternating square") {
  const LabeledTree t = parse_tree(W("#1 < #2 #3 >"));
  CHECK(t.height() == 1);
  CHECK(t.balanced());
  CHECK(encode_tree(t) == W("#1 < #2 #3 >"));
  CHECK(encode_tree(alt_square(t)) == W("#1 #1 < #1 #2 < #2 #2 #2 #3 > #1 #3 < #3 #2 #3 #3 > >"));
  CHECK(encode_tree(alt_square(parse_tree(W("#4")))) == W("#4 #4"));
  CHECK_FALSE(parse_tree(W("#1 < #2 < #3 > #4 >")).balanced());
  CHECK_THROWS_AS(parse_tree(W("#1 < >")), SyntaxError);
  CHECK_THROWS_AS(parse_tree(W("#1 < #2")), SyntaxError);
  CHECK_THROWS_AS(parse_tree(W("#1 #2")), SyntaxError);

  std::mt19937 rng(11);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 20; ++trial) {
      std::uint32_t next = 1;
      const LabeledTree in = random_balanced(rng, k, 3, next);
      const LabeledTree sq = alt_square(in);
      CHECK(sq.height() == 2 * k);
      CHECK(sq.balanced());
      const auto leaves = in.leaves();
      std::vector<AtomWord> pairs;
      for (const auto& a : leaves)
        for (const auto& b : leaves) pairs.push_back({a[0], b[0]});
      auto got = sq.leaves();
      std::sort(pairs.begin(), pairs.end());
      std::sort(got.begin(), got.end());
      CHECK(got == pairs);
      CHECK(encode_tree(sq) == loop_oracle(in, k));
    }
}

TEST_CASE("atom squaring machine") {
  const PebbleMachine m = atom_square_machine();
  CHECK(m.pebbles == 3);
  CHECK(m.states.size() == 6);
  CHECK(lint(m).empty());
  for (int n = 0; n <= 8; ++n) {
    const AtomWord w = distinct_atoms(n);
    const RunResult r = run(m, w);
    REQUIRE(r.ok());
    CHECK(r.output == ref_atom_square(w));
    int max_height = 0;
    for (const auto& c : r.trace.configs) max_height = std::max<int>(max_height, c.stack.size());
    CHECK(max_height <= 3);
    CHECK(config_tree(r.trace).height == max_height);
  }
  CHECK(render_atom_word(run(m, W("#1 #2")).output) == "#1 #1 #1 #2 #2 #1 #2 #2");
}

TEST_CASE("alternating square machines") {
  for (int k = 1; k <= 3; ++k) {
    const PebbleMachine m = alt_square_machine(k);
    CHECK(m.pebbles == 2 * k + 1);
    CHECK(lint(m).empty());
  }
  const PebbleMachine m1 = alt_square_machine(1);
  for (int children = 1; children <= 5; ++children) {
    LabeledTree t{atoms({1}), {}};
    for (int i = 0; i < children; ++i) t.children.push_back({atoms({std::uint32_t(i + 2)}), {}});
    const RunResult r = run(m1, encode_tree(t));
    REQUIRE(r.ok());
    CHECK(r.output == encode_tree(alt_square(t)));
    int max_height = 0;
    for (const auto& c : r.trace.configs) max_height = std::max<int>(max_height, c.stack.size());
    CHECK(max_height == 3);
    CHECK(config_tree(r.trace).height == max_height);
  }

  std::mt19937 rng(5);
  for (int k = 2; k <= 3; ++k) {
    const PebbleMachine m = alt_square_machine(k);
    for (int trial = 0; trial < 10; ++trial) {
      std::uint32_t next = 1;
      const LabeledTree t = random_balanced(rng, k, 2, next);
      const RunResult r = run(m, encode_tree(t));
      REQUIRE(r.ok());
      CHECK(r.output == loop_oracle(t, k));
      CHECK(r.output == ref_alt_square(encode_tree(t), k));
    }
  }
}

TEST_CASE("alternating square machine rejects malformed input") {
  const std::vector<std::string> tokens = {"#1", "#2", "<", ">"};
  for (int k = 1; k <= 2; ++k) {
    const PebbleMachine m = alt_square_machine(k);
    for (int n = 1; n <= 7; ++n) {
      std::vector<int> idx(n, 0);
      for (;;) {
        std::string text;
        for (int i : idx) text += tokens[i] + " ";
        const AtomWord w = W(text);
        const RunResult r = run(m, w, false);
        REQUIRE(r.ok());
        CHECK(r.output == ref_alt_square(w, k));
        int p = 0;
        while (p < n && ++idx[p] == 4) idx[p++] = 0;
        if (p == n) break;
      }
    }
  }
}

TEST_CASE("atom representations") {
  const AtomRepresentation alpha(std::map<std::uint32_t, int>{{5, 3}});
  CHECK(encode_atoms(W("x #5"), alpha) == to_atom_word("x<aaa>"));
  CHECK(decode_atoms(to_atom_word("x<aaa>"), alpha) == W("x #5"));
  CHECK_THROWS_AS(AtomRepresentation({{1, 2}, {2, 2}}), Error);
  CHECK_THROWS_AS(AtomRepresentation(std::map<std::uint32_t, int>{{1, 0}}), Error);
  CHECK_THROWS_AS(encode_atoms(W("#6"), alpha), Error);
  CHECK_THROWS_AS(encode_atoms(W("a"), alpha), Error);
  CHECK_THROWS_AS(decode_atoms(to_atom_word("<aa>"), alpha), Error);
  CHECK_THROWS_AS(decode_atoms(to_atom_word("<aaa"), alpha), Error);
  const AtomRepresentation beta({{1, 2}, {2, 1}, {3, 4}});
  for (const char* text : {"", "#1", "x #3 #1 x", "#2 #2 #1"}) CHECK(decode_atoms(encode_atoms(W(text), beta), beta) == W(text));
}

TEST_CASE("deatomization commutes") {
  std::vector<AtomWord> samples;
  for (int n = 0; n <= 3; ++n) {
    std::vector<std::uint32_t> idx(n, 1);
    for (;;) {
      AtomWord w;
      for (auto i : idx) w.emplace_back(Atom{i});
      samples.push_back(w);
      int p = 0;
      while (p < n && ++idx[p] == 4) idx[p++] = 1;
      if (p == n) break;
    }
  }
  CHECK(samples.size() == 1 + 3 + 9 + 27);
  for (const auto& lengths : std::vector<std::map<std::uint32_t, int>>{
           {{1, 1}, {2, 2}, {3, 3}}, {{1, 3}, {2, 1}, {3, 2}}, {{1, 5}, {2, 4}, {3, 7}}}) {
    const CommuteReport report = check_deatomization(ref_atom_square, AtomRepresentation(lengths), samples);
    CHECK(report.checked == samples.size());
    CHECK(report.ok());
  }

  const AtomFunction red = deatomize(ref_atom_square);
  const AtomFunction id = deatomize([](const AtomWord& w) { return w; });
  for (int n = 0; n <= 3; ++n) {
    std::vector<int> len(n, 0);
    for (;;) {
      std::string in;
      for (int l : len) in += "<" + std::string(l, 'a') + ">";
      std::string expected = ref_block_square(in);
      std::string merged;
      for (char c : expected) merged += c == '|' ? std::string("><") : std::string(1, c);
      CHECK(red(to_atom_word(in)) == to_atom_word(merged));
      CHECK(id(to_atom_word(in)) == to_atom_word(in));
      int p = 0;
      while (p < n && ++len[p] == 5) len[p++] = 0;
      if (p == n) break;
    }
  }
  CHECK(red(to_atom_word("<a")).empty());
}

TEST_CASE("atom obliviousness") {
  std::mt19937 rng(3);
  std::vector<AtomWord> inputs;
  std::vector<AtomMap> maps;
  std::uniform_int_distribution<std::uint32_t> atom(1, 4);
  for (int i = 0; i < 10; ++i) {
    AtomWord w;
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int j = 0; j < n; ++j) w.emplace_back(Atom{atom(rng)});
    inputs.push_back(w);
    AtomMap pi;
    for (std::uint32_t a = 1; a <= 4; ++a) pi[a] = atom(rng);
    maps.push_back(pi);
  }
  maps[0] = {{1, 1}, {2, 1}, {3, 1}, {4, 1}};
  const CommuteReport square = check_atom_oblivious(ref_atom_square, inputs, maps);
  CHECK(square.checked == 100);
  CHECK(square.ok());
  CHECK(check_atom_oblivious([](const AtomWord& w) { return w; }, inputs, maps).ok());

  const CommuteReport bad = check_atom_oblivious(first_two_differ, {atoms({1, 2})}, {{{2, 1}}});
  REQUIRE(bad.failures.size() == 1);
  CHECK(bad.failures[0].expected == atoms({1, 1}));
  CHECK(bad.failures[0].actual.empty());
  CHECK(check_atom_oblivious(first_two_differ, {atoms({1, 2})}, {{{1, 2}, {2, 1}}}).ok());
}
