#include "polygrow/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

std::uint64_t saturating_pow(std::uint64_t base, int exponent) {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

Dfa well_formedness_dfa(int alphabet_size, int num_variables) {
  // States 0..2^|X|-1 record the variables seen so far; the last state is dead.
  const int masks = 1 << num_variables;
  Dfa d;
  d.num_letters = alphabet_size * masks;
  d.num_states = masks + 1;
  d.initial = 0;
  d.accepting.assign(static_cast<std::size_t>(d.num_states), 0);
  d.accepting[static_cast<std::size_t>(masks - 1)] = 1;
  d.delta.resize(static_cast<std::size_t>(d.num_states * d.num_letters));
  const int dead = masks;
  for (int q = 0; q <= masks; ++q) {
    for (int l = 0; l < d.num_letters; ++l) {
      const int m = l & (masks - 1);
      int target = dead;
      if (q != dead && (q & m) == 0) target = q | m;
      d.delta[static_cast<std::size_t>(q * d.num_letters + l)] = target;
    }
  }
  return d;
}

namespace {

Dfa complement(Dfa d) {
  for (auto& a : d.accepting) a = !a;
  return d;
}

}  // namespace

Query::Query(Alphabet alphabet, std::vector<std::string> variables, const Dfa& marked)
    : alphabet_(std::move(alphabet)), variables_(std::move(variables)) {
  const std::vector<std::string> given = variables_;
  std::sort(variables_.begin(), variables_.end());
  if (std::adjacent_find(variables_.begin(), variables_.end()) != variables_.end())
    throw Error("duplicate query variable");
  if (num_variables() > kMaxVariables) throw Error("too many query variables");
  if (marked.num_letters != num_marked_letters())
    throw Error("automaton alphabet does not match Sigma x 2^X");
  Dfa d = marked;
  if (given != variables_) {
    // Masks of `marked` refer to the given order; rewrite them for the sorted one.
    const int k = num_variables();
    std::vector<int> old_bit(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      old_bit[static_cast<std::size_t>(i)] =
          static_cast<int>(std::find(given.begin(), given.end(), variables_[static_cast<std::size_t>(i)]) - given.begin());
    for (int q = 0; q < d.num_states; ++q)
      for (Letter a = 0; a < alphabet_.size(); ++a)
        for (VarMask m = 0; m <= full_mask(); ++m) {
          VarMask old = 0;
          for (int i = 0; i < k; ++i)
            if (m & (VarMask{1} << i)) old |= VarMask{1} << old_bit[static_cast<std::size_t>(i)];
          d.delta[static_cast<std::size_t>(q * d.num_letters + this->marked(a, m))] =
              marked.delta[static_cast<std::size_t>(q * marked.num_letters + ((a << k) | static_cast<int>(old)))];
        }
  }
  const Dfa wf = well_formedness_dfa(alphabet_.size(), num_variables());
  dfa_ = product(d, wf, ProductMode::Intersection);
  shrank_ = !product(d, complement(wf), ProductMode::Intersection).is_empty();
}

int Query::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == name) return static_cast<int>(i);
  throw Error("unknown variable '" + std::string(name) + "'");
}

VarMask Query::mask_of(const std::vector<std::string>& names) const {
  VarMask m = 0;
  for (const auto& n : names) m |= VarMask{1} << var_index(n);
  return m;
}

std::vector<int> Query::marked_word(const Word& w, const Assignment& positions) const {
  std::vector<int> masks(w.size(), 0);
  for (std::size_t v = 0; v < positions.size(); ++v) masks[static_cast<std::size_t>(positions[v] - 1)] |= 1 << v;
  std::vector<int> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = marked(w[i], static_cast<VarMask>(masks[i]));
  return out;
}

bool Query::accepts(const Word& w, const Assignment& positions) const {
  if (positions.size() != variables_.size()) throw Error("assignment arity does not match the query");
  for (int p : positions)
    if (p < 1 || p > static_cast<int>(w.size())) return false;
  const auto m = marked_word(w, positions);
  return dfa_.accepting[static_cast<std::size_t>(dfa_.run(m, dfa_.initial))];
}

bool Query::accepts(const PointedWord& pw) const {
  pw.validate();
  if (pw.assignment.size() != variables_.size()) throw Error("pointed word variables do not match the query");
  Assignment a;
  for (const auto& v : variables_) {
    auto it = pw.assignment.find(v);
    if (it == pw.assignment.end()) throw Error("pointed word lacks variable " + v);
    a.push_back(it->second);
  }
  return accepts(pw.word, a);
}

// ---------------------------------------------------------------------------
// Regex front end: recursive descent to a Thompson NFA, then subset construction.

namespace {

struct Nfa {
  struct Edge {
    int target;
    std::vector<int> letters;  // empty: epsilon edge
  };
  std::vector<std::vector<Edge>> edges;

  int add_state() {
    edges.emplace_back();
    return static_cast<int>(edges.size()) - 1;
  }
  void add(int from, int to, std::vector<int> letters = {}) { edges[static_cast<std::size_t>(from)].push_back({to, std::move(letters)}); }
};

struct Fragment {
  int start;
  int end;
};

class RegexParser {
 public:
  RegexParser(std::string_view text, const Alphabet& alphabet, const Query& shape)
      : text_(text), alphabet_(alphabet), shape_(shape) {}

  Fragment parse(Nfa& nfa) {
    nfa_ = &nfa;
    Fragment f = parse_alternation();
    skip_space();
    if (pos_ < text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool at_concat_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')';
  }

  Fragment epsilon() {
    const int s = nfa_->add_state();
    const int e = nfa_->add_state();
    nfa_->add(s, e);
    return {s, e};
  }

  Fragment parse_alternation() {
    Fragment left = parse_concat();
    while (at('|')) {
      ++pos_;
      Fragment right = parse_concat();
      const int s = nfa_->add_state();
      const int e = nfa_->add_state();
      nfa_->add(s, left.start);
      nfa_->add(s, right.start);
      nfa_->add(left.end, e);
      nfa_->add(right.end, e);
      left = {s, e};
    }
    return left;
  }

  Fragment parse_concat() {
    if (at_concat_end()) return epsilon();
    Fragment f = parse_repeat();
    while (!at_concat_end()) {
      Fragment g = parse_repeat();
      nfa_->add(f.end, g.start);
      f.end = g.end;
    }
    return f;
  }

  Fragment parse_repeat() {
    Fragment f = parse_primary();
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c != '*' && c != '+' && c != '?') break;
      ++pos_;
      const int s = nfa_->add_state();
      const int e = nfa_->add_state();
      nfa_->add(s, f.start);
      nfa_->add(f.end, e);
      if (c == '*' || c == '?') nfa_->add(s, e);
      if (c == '*' || c == '+') nfa_->add(f.end, f.start);
      f = {s, e};
    }
    return f;
  }

  Fragment parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of query", pos_);
    if (text_[pos_] == '(') {
      const std::size_t open = pos_++;
      Fragment f = parse_alternation();
      if (!at(')')) throw SyntaxError("unbalanced parenthesis opened", open);
      ++pos_;
      return f;
    }
    std::vector<Letter> letters;
    if (text_[pos_] == '_') {
      ++pos_;
      for (Letter a = 0; a < alphabet_.size(); ++a) letters.push_back(a);
    } else {
      letters.push_back(read_symbol());
    }
    VarMask marks = 0;
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      for (;;) {
        skip_space();
        const std::size_t name_start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        if (name_start == pos_) throw SyntaxError("expected variable name", pos_);
        const std::string name(text_.substr(name_start, pos_ - name_start));
        const auto& vars = shape_.variables();
        const auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw SyntaxError("unknown variable '" + name + "'", name_start);
        marks |= VarMask{1} << (it - vars.begin());
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          break;
        }
        throw SyntaxError("expected ',' or ']'", pos_);
      }
    }
    std::vector<int> marked;
    for (Letter a : letters) marked.push_back(shape_.marked(a, marks));
    const int s = nfa_->add_state();
    const int e = nfa_->add_state();
    nfa_->add(s, e, std::move(marked));
    return {s, e};
  }

  Letter read_symbol() {
    // Longest alphabet symbol that matches at the cursor.
    int best = -1;
    std::size_t best_len = 0;
    for (Letter a = 0; a < alphabet_.size(); ++a) {
      const auto& sym = alphabet_.symbol(a);
      if (sym.size() > best_len && text_.substr(pos_, sym.size()) == sym) {
        best = a;
        best_len = sym.size();
      }
    }
    if (best < 0) {
      std::size_t end = pos_;
      while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
             std::string_view("()|*+?[]").find(text_[end]) == std::string_view::npos)
        ++end;
      if (end == pos_) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
      throw SyntaxError("unknown symbol '" + std::string(text_.substr(pos_, end - pos_)) + "'", pos_);
    }
    pos_ += best_len;
    return best;
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  const Query& shape_;
  Nfa* nfa_ = nullptr;
  std::size_t pos_ = 0;
};

std::vector<int> epsilon_closure(const Nfa& nfa, std::vector<int> states) {
  std::vector<char> in(nfa.edges.size(), 0);
  for (int s : states) in[static_cast<std::size_t>(s)] = 1;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& e : nfa.edges[static_cast<std::size_t>(states[i])]) {
      if (e.letters.empty() && !in[static_cast<std::size_t>(e.target)]) {
        in[static_cast<std::size_t>(e.target)] = 1;
        states.push_back(e.target);
      }
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

Dfa determinize(const Nfa& nfa, Fragment f, int num_letters) {
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> set) {
    auto [it, inserted] = ids.emplace(set, static_cast<int>(sets.size()));
    if (inserted) sets.push_back(std::move(set));
    return it->second;
  };
  Dfa d;
  d.num_letters = num_letters;
  d.initial = intern(epsilon_closure(nfa, {f.start}));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<std::vector<int>> moves(static_cast<std::size_t>(num_letters));
    for (int s : sets[i])
      for (const auto& e : nfa.edges[static_cast<std::size_t>(s)])
        for (int l : e.letters) moves[static_cast<std::size_t>(l)].push_back(e.target);
    const bool accepting = std::binary_search(sets[i].begin(), sets[i].end(), f.end);
    d.accepting.push_back(accepting);
    for (int l = 0; l < num_letters; ++l) {
      auto& m = moves[static_cast<std::size_t>(l)];
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      d.delta.push_back(intern(epsilon_closure(nfa, std::move(m))));
    }
  }
  d.num_states = static_cast<int>(sets.size());
  return d;
}

}  // namespace

Query parse_query(std::string_view text, const Alphabet& alphabet, std::vector<std::string> variables) {
  for (const auto& v : variables) {
    if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
      throw Error("invalid variable name '" + v + "'");
  }
  for (const auto& s : alphabet.symbols()) {
    if (s.find_first_of("()|*+?[],_ \t\n#") != std::string::npos)
      throw Error("alphabet symbol '" + s + "' clashes with the query syntax");
  }
  // A placeholder query fixes the variable order and marked-letter encoding.
  const int nv = static_cast<int>(variables.size());
  Dfa all;
  all.num_letters = alphabet.size() << nv;
  all.num_states = 1;
  all.accepting = {0};
  all.delta.assign(static_cast<std::size_t>(all.num_letters), 0);
  const Query shape(alphabet, variables, all);

  Nfa nfa;
  RegexParser parser(text, alphabet, shape);
  const Fragment f = parser.parse(nfa);
  return Query(alphabet, shape.variables(), determinize(nfa, f, shape.num_marked_letters()));
}

Query query_union(const Query& a, const Query& b) {
  if (!(a.alphabet() == b.alphabet()) || a.variables() != b.variables())
    throw Error("union of queries over different alphabets or variables");
  return Query(a.alphabet(), a.variables(), product(a.dfa(), b.dfa(), ProductMode::Union));
}

Query query_intersection(const Query& a, const Query& b) {
  if (!(a.alphabet() == b.alphabet()) || a.variables() != b.variables())
    throw Error("intersection of queries over different alphabets or variables");
  return Query(a.alphabet(), a.variables(), product(a.dfa(), b.dfa(), ProductMode::Intersection));
}

Query query_complement(const Query& q) { return Query(q.alphabet(), q.variables(), complement(q.dfa())); }

Query query_lift(const Query& q, std::vector<std::string> variables) {
  std::sort(variables.begin(), variables.end());
  std::vector<int> target;
  for (const auto& v : q.variables()) {
    auto it = std::find(variables.begin(), variables.end(), v);
    if (it == variables.end()) throw Error("lift target lacks variable " + v);
    target.push_back(static_cast<int>(it - variables.begin()));
  }
  const int k = static_cast<int>(variables.size());
  if (k > Query::kMaxVariables) throw Error("too many query variables");
  const Dfa& src = q.dfa();
  Dfa d;
  d.num_letters = q.alphabet().size() << k;
  d.num_states = src.num_states;
  d.initial = src.initial;
  d.accepting = src.accepting;
  d.delta.resize(static_cast<std::size_t>(d.num_states) * static_cast<std::size_t>(d.num_letters));
  for (int s = 0; s < d.num_states; ++s)
    for (Letter a = 0; a < q.alphabet().size(); ++a)
      for (VarMask m = 0; m < (VarMask{1} << k); ++m) {
        VarMask proj = 0;
        for (std::size_t i = 0; i < target.size(); ++i)
          if (m & (VarMask{1} << target[i])) proj |= VarMask{1} << i;
        d.delta[static_cast<std::size_t>(s * d.num_letters + ((a << k) | static_cast<int>(m)))] = src.next(s, q.marked(a, proj));
      }
  return Query(q.alphabet(), variables, d);
}

namespace {

// Calls visit(assignment) for each selected assignment.
template <typename F>
void enumerate_selected(const Query& q, const Word& w, F&& visit) {
  const int k = q.num_variables();
  const int n = static_cast<int>(w.size());
  if (k == 0) {
    if (q.dfa().accepting[static_cast<std::size_t>(q.dfa().run(w, q.dfa().initial))]) visit(Assignment{});
    return;
  }
  if (n == 0) return;
  Assignment a(static_cast<std::size_t>(k), 1);
  for (;;) {
    if (q.accepts(w, a)) visit(static_cast<const Assignment&>(a));
    int i = k - 1;
    while (i >= 0 && a[static_cast<std::size_t>(i)] == n) a[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++a[static_cast<std::size_t>(i)];
  }
}

}  // namespace

std::vector<Assignment> select_tuples(const Query& q, const Word& w) {
  std::vector<Assignment> out;
  enumerate_selected(q, w, [&](const Assignment& a) { out.push_back(a); });
  return out;
}

std::uint64_t count_tuples(const Query& q, const Word& w) {
  std::uint64_t count = 0;
  enumerate_selected(q, w, [&](const Assignment&) { ++count; });
  return count;
}

std::vector<GrowthEntry> growth_table(const Query& q, int max_len, std::uint64_t budget) {
  const std::uint64_t size = saturating_pow(static_cast<std::uint64_t>(q.alphabet().size()), max_len);
  const std::uint64_t tuples = saturating_pow(static_cast<std::uint64_t>(std::max(max_len, 1)), q.num_variables());
  const std::uint64_t attempted = (size != 0 && tuples > UINT64_MAX / size) ? UINT64_MAX : size * tuples;
  if (attempted > budget) throw BudgetExceeded("growth_table", attempted, budget);
  std::vector<GrowthEntry> table;
  std::uint64_t best = 0;
  for (int n = 1; n <= max_len; ++n) {
    for_each_word(q.alphabet().size(), n, n, [&](const Word& w) { best = std::max(best, count_tuples(q, w)); });
    table.push_back({n, best});
  }
  return table;
}

QueryFile parse_query_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> alphabet;
  std::vector<std::string> vars;
  std::string source;
  bool have_alphabet = false;
  bool have_query = false;
  auto words = [](const std::string& s) {
    std::istringstream ws(s);
    std::vector<std::string> out;
    std::string t;
    while (ws >> t) out.push_back(t);
    return out;
  };
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error("query file: expected 'key: value' in line '" + line + "'");
    std::string key = line.substr(first, colon - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    const std::string value = line.substr(colon + 1);
    if (key == "alphabet") {
      alphabet = words(value);
      have_alphabet = true;
    } else if (key == "vars") {
      vars = words(value);
    } else if (key == "query") {
      source = value;
      have_query = true;
    } else {
      throw Error("query file: unknown key '" + key + "'");
    }
  }
  if (!have_alphabet) throw Error("query file: missing 'alphabet:' line");
  if (!have_query) throw Error("query file: missing 'query:' line");
  return {Alphabet(alphabet), vars, source};
}

QueryFile read_query_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_query_file(buf.str());
}

Query load_query(const QueryFile& file) { return parse_query(file.source, file.alphabet, file.variables); }

}  // namespace polygrow
