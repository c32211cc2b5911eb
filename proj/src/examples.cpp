#include "polygrow/examples.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

std::string ref_square(const std::string& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) out += w;
  return out;
}

namespace {

// Block lengths of <a^k1>...<a^kn>, or nothing when ill-formatted.
std::optional<std::vector<std::size_t>> block_lengths(const std::string& w) {
  std::vector<std::size_t> lengths;
  std::size_t i = 0;
  while (i < w.size()) {
    if (w[i] != '<') return std::nullopt;
    std::size_t j = i + 1;
    while (j < w.size() && w[j] == 'a') ++j;
    if (j == w.size() || w[j] != '>') return std::nullopt;
    lengths.push_back(j - i - 1);
    i = j + 1;
  }
  return lengths;
}

}  // namespace

std::string ref_block_square(const std::string& w) {
  const auto lengths = block_lengths(w);
  if (!lengths) return "";
  std::string out;
  for (std::size_t ki : *lengths)
    for (std::size_t kj : *lengths) out += "<" + std::string(ki, 'a') + "|" + std::string(kj, 'a') + ">";
  return out;
}

std::string ref_map_power(const std::string& w) {
  std::vector<std::string> pieces;
  std::string current;
  for (char c : w) {
    if (c != 'a' && c != 'b') return "";
    current += c;
    if (c == 'b') {
      pieces.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) return "";
  std::string out;
  for (const std::string& p : pieces)
    for (std::size_t i = 0; i < pieces.size(); ++i) out += p;
  return out;
}

AtomWord ref_atom_square(const AtomWord& w) {
  for (const Symbol& s : w)
    if (!is_atom(s)) throw Error("atom squaring: '" + std::get<std::string>(s) + "' is not an atom");
  AtomWord out;
  for (const Symbol& a : w)
    for (const Symbol& b : w) {
      out.push_back(a);
      out.push_back(b);
    }
  return out;
}

int LabeledTree::height() const {
  int h = 0;
  for (const LabeledTree& c : children) h = std::max(h, c.height() + 1);
  return h;
}

bool LabeledTree::balanced() const {
  if (children.empty()) return true;
  const int h = children.front().height();
  return std::all_of(children.begin(), children.end(),
                     [&](const LabeledTree& c) { return c.balanced() && c.height() == h; });
}

std::vector<AtomWord> LabeledTree::leaves() const {
  if (children.empty()) return {label};
  std::vector<AtomWord> out;
  for (const LabeledTree& c : children) {
    auto sub = c.leaves();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

namespace {

bool is_bracket(const Symbol& s, const std::string& b) {
  return !is_atom(s) && std::get<std::string>(s) == b;
}

void encode_into(const LabeledTree& t, AtomWord& out) {
  out.insert(out.end(), t.label.begin(), t.label.end());
  if (t.children.empty()) return;
  out.emplace_back(std::string("<"));
  for (const LabeledTree& c : t.children) encode_into(c, out);
  out.emplace_back(std::string(">"));
}

LabeledTree parse_node(const AtomWord& w, std::size_t& i) {
  if (i == w.size()) throw SyntaxError("tree: unexpected end of input", i);
  if (is_bracket(w[i], "<") || is_bracket(w[i], ">"))
    throw SyntaxError("tree: expected a label", i);
  LabeledTree t;
  t.label = {w[i++]};
  if (i < w.size() && is_bracket(w[i], "<")) {
    ++i;
    do {
      t.children.push_back(parse_node(w, i));
    } while (i < w.size() && !is_bracket(w[i], ">"));
    if (i == w.size()) throw SyntaxError("tree: missing '>'", i);
    ++i;
  }
  return t;
}

}  // namespace

AtomWord encode_tree(const LabeledTree& t) {
  AtomWord out;
  encode_into(t, out);
  return out;
}

LabeledTree parse_tree(const AtomWord& w) {
  std::size_t i = 0;
  LabeledTree t = parse_node(w, i);
  if (i != w.size()) throw SyntaxError("tree: trailing tokens", i);
  return t;
}

LabeledTree alt_product(const LabeledTree& s, const LabeledTree& t) {
  LabeledTree out;
  out.label = t.label;
  out.label.insert(out.label.end(), s.label.begin(), s.label.end());
  for (const LabeledTree& c : t.children) out.children.push_back(alt_product(c, s));
  return out;
}

LabeledTree alt_square(const LabeledTree& t) { return alt_product(t, t); }

AtomWord ref_alt_square(const AtomWord& w, int k) {
  LabeledTree t;
  try {
    t = parse_tree(w);
  } catch (const SyntaxError&) {
    return {};
  }
  if (!t.balanced() || t.height() != k) return {};
  if (!std::all_of(w.begin(), w.end(), [](const Symbol& s) {
        return is_atom(s) || is_bracket(s, "<") || is_bracket(s, ">");
      }))
    return {};
  return encode_tree(alt_square(t));
}

namespace {

class MachineBuilder {
 public:
  MachineBuilder(int pebbles) {
    m_.pebbles = pebbles;
    m_.input = Alphabet({"<", ">"});
    m_.output = Alphabet({"<", ">"});
    m_.atoms = true;
  }

  int state(const std::string& name) {
    for (std::size_t i = 0; i < m_.states.size(); ++i)
      if (m_.states[i] == name) return static_cast<int>(i);
    m_.states.push_back(name);
    return static_cast<int>(m_.states.size()) - 1;
  }

  // Output tokens: "@" is the atom under the head, otherwise an output letter.
  void rule(const std::string& from, std::vector<PebbleTest> guard, const std::vector<std::string>& output,
            PebbleAction action, const std::string& to) {
    PebbleRule r;
    r.state = state(from);
    r.guard = std::move(guard);
    for (const std::string& t : output)
      r.output.push_back(t == "@" ? OutputToken{true, 0} : OutputToken{false, *m_.output.index_of(t)});
    r.action = action;
    r.next_state = state(to);
    m_.rules.push_back(std::move(r));
  }

  PebbleMachine finish(const std::string& initial) {
    m_.initial = state(initial);
    return std::move(m_);
  }

 private:
  PebbleMachine m_;
};

PebbleTest same(int i, int j) { return {PebbleTest::Kind::Same, i, j, 0, false}; }
PebbleTest rightmost(int i, bool negated = false) { return {PebbleTest::Kind::Rightmost, i, 1, 0, negated}; }
PebbleTest leftmost(int i) { return {PebbleTest::Kind::Leftmost, i, 1, 0, false}; }
PebbleTest label(int i, Letter a, bool negated = false) { return {PebbleTest::Kind::Label, i, 1, a, negated}; }

constexpr Letter kOpen = 0;
constexpr Letter kClose = 1;

}  // namespace

PebbleMachine atom_square_machine() {
  using A = PebbleAction;
  MachineBuilder b(3);
  for (const char* s : {"p0", "p1", "q1", "p2", "q2", "p3"}) b.state(s);
  b.rule("p0", {}, {}, A::Push, "p2");
  b.rule("p1", {}, {}, A::Push, "p2");
  b.rule("p2", {}, {}, A::Push, "p3");
  b.rule("p3", {same(3, 1)}, {"@"}, A::Pop, "q2");
  b.rule("p3", {}, {}, A::MoveRight, "p3");
  b.rule("q2", {rightmost(2)}, {"@"}, A::Pop, "q1");
  b.rule("q2", {}, {"@"}, A::MoveRight, "p2");
  b.rule("q1", {rightmost(1)}, {}, A::Stop, "q1");
  b.rule("q1", {}, {}, A::MoveRight, "p1");
  PebbleMachine m = b.finish("p0");
  m.input = Alphabet();
  m.output = Alphabet();
  return m;
}

PebbleMachine alt_square_machine(int k) {
  if (k < 1) throw Error("alternating square machine needs k >= 1");
  using A = PebbleAction;
  MachineBuilder b(2 * k + 1);
  auto num = [](const std::string& s, int i) { return s + std::to_string(i); };

  // Format check with pebble 1: A(c) expects a label at depth c, O(c) expects
  // '<' after a label at depth c < k, D(c) follows a finished subtree at depth c.
  enum { kAtom, kOpenTok, kCloseTok };
  const std::vector<std::vector<PebbleTest>> guards = {
      {label(1, kOpen, true), label(1, kClose, true)}, {label(1, kOpen)}, {label(1, kClose)}};
  auto after_label = [&](int c) { return c < k ? num("O", c) : num("D", c); };
  auto emit = [&](const std::string& from, int token, const std::string& to) {
    std::vector<PebbleTest> last = guards[token];
    last.push_back(rightmost(1));
    if (to == "D0")
      b.rule(from, last, {}, A::MoveLeft, "rewind");
    else
      b.rule(from, last, {}, A::Stop, from);
    b.rule(from, guards[token], {}, A::MoveRight, to);
  };
  auto reject = [&](const std::string& from) { b.rule(from, {}, {}, A::Stop, from); };
  b.state("A0");
  for (int c = 0; c <= k; ++c) {
    emit(num("A", c), kAtom, after_label(c));
    reject(num("A", c));
    if (c < k) {
      emit(num("O", c), kOpenTok, num("A", c + 1));
      reject(num("O", c));
    }
    if (c >= 1) {
      emit(num("D", c), kAtom, after_label(c));
      emit(num("D", c), kCloseTok, num("D", c - 1));
    }
    reject(num("D", c));
  }

  // Pebble j < 2k+1 runs over the children of pebble j-2 (the root for j <= 2).
  // The output node of level j is labelled (pebble j-1, pebble j), with the
  // root standing in for pebble 0.
  b.rule("rewind", {leftmost(1)}, {"@", "@", "<"}, A::MoveRight, "first1");
  b.rule("rewind", {}, {}, A::MoveLeft, "rewind");
  for (int j = 1; j <= 2 * k; ++j) {
    const int depth = (j + 1) / 2;
    const std::string look = num("look", j), next = num("next", j), tmp = num("tmp", j);
    if (j >= 2) {
      if (j >= 3) b.rule(num("seek", j), {same(j, j - 2)}, {}, A::MoveRight, num("first", j));
      if (j >= 3) b.rule(num("seek", j), {}, {}, A::MoveRight, num("seek", j));
      if (j == 2) b.rule(num("seek", j), {}, {}, A::MoveRight, num("first", j));
    }
    b.rule(num("first", j), {}, {}, A::MoveRight, look);
    if (j == 1)
      b.rule(look, {label(j, kClose)}, {">"}, A::Stop, look);
    else
      b.rule(look, {label(j, kClose)}, {">"}, A::Pop, num("next", j - 1));
    b.rule(look, {}, {}, A::Push, tmp);
    if (j == 1) {
      b.rule(tmp, {}, {"@"}, A::Pop, num("emit", j));
    } else {
      b.rule(tmp, {same(j + 1, j - 1)}, {"@"}, A::Pop, num("emit", j));
      b.rule(tmp, {}, {}, A::MoveRight, tmp);
    }
    const std::string after_move = depth == k ? look : num("skip", j) + ".0";
    if (j < 2 * k) {
      b.rule(num("emit", j), {}, {"@", "<"}, A::Push, num("seek", j + 1));
      b.rule(next, {}, {}, A::MoveRight, after_move);
    } else {
      b.rule(num("emit", j), {}, {"@"}, A::MoveRight, after_move);
    }
    // Skip the subtree below pebble j; c counts the open brackets.
    for (int c = 0; depth < k && c <= k - depth; ++c) {
      const std::string here = num("skip", j) + "." + std::to_string(c);
      if (c < k - depth)
        b.rule(here, {label(j, kOpen)}, {}, A::MoveRight, num("skip", j) + "." + std::to_string(c + 1));
      if (c >= 1)
        b.rule(here, {label(j, kClose)}, {}, A::MoveRight, c == 1 ? look : num("skip", j) + "." + std::to_string(c - 1));
      b.rule(here, {}, {}, A::MoveRight, here);
    }
  }
  return b.finish("A0");
}

AtomRepresentation::AtomRepresentation(std::map<std::uint32_t, int> lengths) : lengths_(std::move(lengths)) {
  for (const auto& [id, len] : lengths_) {
    if (len < 1) throw Error("atom representation: block length of #" + std::to_string(id) + " must be >= 1");
    if (!by_length_.emplace(len, id).second)
      throw Error("atom representation is not injective: #" + std::to_string(by_length_[len]) + " and #" +
                  std::to_string(id) + " share length " + std::to_string(len));
  }
}

int AtomRepresentation::length(Atom a) const {
  const auto it = lengths_.find(a.id);
  if (it == lengths_.end()) throw Error("atom representation has no block for #" + std::to_string(a.id));
  return it->second;
}

Atom AtomRepresentation::atom(int length) const {
  const auto it = by_length_.find(length);
  if (it == by_length_.end()) throw Error("no atom is represented by a block of length " + std::to_string(length));
  return Atom{it->second};
}

namespace {

bool is_block_letter(const std::string& s) { return s == kBlockOpen || s == kBlockUnit || s == kBlockClose; }

void append_block(AtomWord& out, int length) {
  out.emplace_back(kBlockOpen);
  for (int i = 0; i < length; ++i) out.emplace_back(kBlockUnit);
  out.emplace_back(kBlockClose);
}

// Splits a block word into letters and block lengths; nullopt when a block is
// unbalanced or a unit letter appears outside a block.
std::optional<std::vector<std::variant<std::string, int>>> split_blocks(const AtomWord& w) {
  std::vector<std::variant<std::string, int>> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_atom(w[i])) return std::nullopt;
    const std::string& s = std::get<std::string>(w[i]);
    if (s == kBlockUnit || s == kBlockClose) return std::nullopt;
    if (s != kBlockOpen) {
      out.emplace_back(s);
      continue;
    }
    int len = 0;
    std::size_t j = i + 1;
    for (; j < w.size() && is_bracket(w[j], kBlockUnit); ++j) ++len;
    if (j == w.size() || !is_bracket(w[j], kBlockClose)) return std::nullopt;
    out.emplace_back(len);
    i = j;
  }
  return out;
}

}  // namespace

AtomWord encode_atoms(const AtomWord& w, const AtomRepresentation& alpha) {
  AtomWord out;
  for (const Symbol& s : w) {
    if (is_atom(s)) {
      append_block(out, alpha.length(std::get<Atom>(s)));
      continue;
    }
    if (is_block_letter(std::get<std::string>(s)))
      throw Error("letter '" + std::get<std::string>(s) + "' clashes with the atom block letters");
    out.push_back(s);
  }
  return out;
}

AtomWord decode_atoms(const AtomWord& w, const AtomRepresentation& alpha) {
  const auto parts = split_blocks(w);
  if (!parts) throw Error("malformed atom blocks in '" + render_atom_word(w) + "'");
  AtomWord out;
  for (const auto& p : *parts) {
    if (std::holds_alternative<int>(p))
      out.emplace_back(alpha.atom(std::get<int>(p)));
    else
      out.emplace_back(std::get<std::string>(p));
  }
  return out;
}

AtomFunction deatomize(AtomFunction f) {
  return [f = std::move(f)](const AtomWord& w) -> AtomWord {
    const auto parts = split_blocks(w);
    if (!parts) return {};
    AtomWord input;
    std::vector<int> block_of;
    for (const auto& p : *parts) {
      if (std::holds_alternative<int>(p)) {
        input.emplace_back(Atom{static_cast<std::uint32_t>(block_of.size())});
        block_of.push_back(std::get<int>(p));
      } else {
        input.emplace_back(std::get<std::string>(p));
      }
    }
    AtomWord out;
    for (const Symbol& s : f(input)) {
      if (!is_atom(s)) {
        out.push_back(s);
        continue;
      }
      const std::uint32_t id = std::get<Atom>(s).id;
      if (id >= block_of.size()) throw Error("deatomize: the function produced an atom that is not in its input");
      append_block(out, block_of[id]);
    }
    return out;
  };
}

CommuteReport check_deatomization(const AtomFunction& f, const AtomRepresentation& alpha,
                                  const std::vector<AtomWord>& samples) {
  CommuteReport report;
  const AtomFunction red = deatomize(f);
  for (const AtomWord& w : samples) {
    ++report.checked;
    const AtomWord expected = encode_atoms(f(w), alpha);
    const AtomWord actual = red(encode_atoms(w, alpha));
    if (expected != actual) report.failures.push_back({w, expected, actual, "encode(f(w)) != deatomized(encode(w))"});
  }
  return report;
}

AtomWord apply_map(const AtomMap& pi, const AtomWord& w) {
  AtomWord out;
  for (const Symbol& s : w) {
    if (!is_atom(s)) {
      out.push_back(s);
      continue;
    }
    const auto it = pi.find(std::get<Atom>(s).id);
    out.emplace_back(it == pi.end() ? std::get<Atom>(s) : Atom{it->second});
  }
  return out;
}

std::string describe(const AtomMap& pi) {
  std::string out = "{";
  for (const auto& [from, to] : pi)
    out += (out.size() > 1 ? ", #" : "#") + std::to_string(from) + "->#" + std::to_string(to);
  return out + "}";
}

CommuteReport check_atom_oblivious(const AtomFunction& f, const std::vector<AtomWord>& samples,
                                   const std::vector<AtomMap>& maps) {
  CommuteReport report;
  for (const AtomWord& w : samples)
    for (const AtomMap& pi : maps) {
      ++report.checked;
      const AtomWord expected = apply_map(pi, f(w));
      const AtomWord actual = f(apply_map(pi, w));
      if (expected != actual) report.failures.push_back({w, expected, actual, "pi = " + describe(pi)});
    }
  return report;
}

AtomWord first_two_differ(const AtomWord& w) {
  if (w.size() >= 2 && w[0] != w[1]) return w;
  return {};
}

namespace {

Alphabet chars(const std::string& s) {
  std::vector<std::string> symbols;
  for (char c : s) symbols.emplace_back(1, c);
  return Alphabet(symbols);
}

Query lifted(const Alphabet& sigma, std::vector<std::string> vars, const std::string& regex,
             const std::vector<std::string>& all) {
  return query_lift(parse_query(regex, sigma, std::move(vars)), all);
}

Query all_of(const std::vector<Query>& qs) {
  Query out = qs.front();
  for (std::size_t i = 1; i < qs.size(); ++i) out = query_intersection(out, qs[i]);
  return out;
}

InterpComponent letter_copy(const Alphabet& sigma, int dimension, const std::string& var,
                            const std::vector<Query>& extra = {}) {
  InterpComponent c;
  c.dimension = dimension;
  const auto vars = tuple_variables(dimension);
  for (Letter a = 0; a < sigma.size(); ++a) {
    std::vector<Query> parts = extra;
    parts.push_back(lifted(sigma, {var}, "_* " + sigma.symbol(a) + "[" + var + "] _*", vars));
    c.labels.emplace_back(a, all_of(parts));
  }
  return c;
}

Interpretation block_square_interpretation() {
  Interpretation in;
  in.input = chars("<a>");
  in.output = chars("<a|>");
  const Alphabet& s = in.input;
  const auto xs = tuple_variables(3);
  const Query format = lifted(s, {}, "( < a* > )*", xs);
  const Query second_open = lifted(s, {"x2"}, "_* <[x2] _*", xs);
  auto in_block = [&](const std::string& u, const std::string& tail) {
    return all_of({format, second_open, lifted(s, {"x1", u}, tail, xs)});
  };
  InterpComponent first{3, {}};
  first.labels.emplace_back(0, in_block("x3", "_* <[x1,x3] _*"));
  first.labels.emplace_back(1, in_block("x3", "_* <[x1] a* a[x3] _*"));
  first.labels.emplace_back(2, in_block("x3", "_* <[x1] a* >[x3] _*"));
  InterpComponent second{3, {}};
  const Query first_open = lifted(s, {"x1"}, "_* <[x1] _*", xs);
  second.labels.emplace_back(1, all_of({format, first_open, lifted(s, {"x2", "x3"}, "_* <[x2] a* a[x3] _*", xs)}));
  second.labels.emplace_back(3, all_of({format, first_open, lifted(s, {"x2", "x3"}, "_* <[x2] a* >[x3] _*", xs)}));
  in.components = {first, second};

  // (x1, x2) <= (y1, y2) lexicographically.
  std::vector<std::string> xy = xs;
  for (const auto& y : tuple_variables(3, "y")) xy.push_back(y);
  auto less = [&](const std::string& u, const std::string& v) {
    return lifted(s, {u, v}, "_* _[" + u + "] _* _[" + v + "] _*", xy);
  };
  auto equal = [&](const std::string& u, const std::string& v) {
    return lifted(s, {u, v}, "_* _[" + u + "," + v + "] _*", xy);
  };
  const Query second_le = query_union(less("x2", "y2"), equal("x2", "y2"));
  in.orders.emplace(std::make_pair(0, 1),
                    query_union(less("x1", "y1"), query_intersection(equal("x1", "y1"), second_le)));
  return in;
}

}  // namespace

std::vector<std::string> builtin_interpretation_names() {
  return {"identity", "duplicate", "reverse", "square", "padded-square", "block-square"};
}

Interpretation builtin_interpretation(const std::string& name) {
  if (name == "block-square") return block_square_interpretation();
  Interpretation in;
  in.input = chars("ab");
  in.output = in.input;
  if (name == "identity") {
    in.components = {letter_copy(in.input, 1, "x1")};
  } else if (name == "duplicate") {
    in.components = {letter_copy(in.input, 1, "x1"), letter_copy(in.input, 1, "x1")};
  } else if (name == "reverse") {
    in.components = {letter_copy(in.input, 1, "x1")};
    in.orders.emplace(std::make_pair(0, 0), parse_query("_* _[y1] _* _[x1] _*", in.input, {"x1", "y1"}));
  } else if (name == "square") {
    in.components = {letter_copy(in.input, 2, "x2")};
  } else if (name == "padded-square") {
    const Query pad = lifted(in.input, {"x3"}, "_[x3] _*", tuple_variables(3));
    in.components = {letter_copy(in.input, 3, "x2", {pad})};
  } else {
    throw Error("unknown interpretation '" + name + "'");
  }
  return in;
}

}  // namespace polygrow
