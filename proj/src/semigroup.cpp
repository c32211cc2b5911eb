#include "polygrow/semigroup.hpp"

#include <map>

#include "polygrow/errors.hpp"

namespace polygrow {

Semigroup::Semigroup(int size, std::vector<Element> table) : size_(size), table_(std::move(table)) {
  if (size_ < 1) throw Error("semigroup must be nonempty");
  if (table_.size() != static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_))
    throw Error("multiplication table has the wrong size");
  for (Element v : table_)
    if (v < 0 || v >= size_) throw Error("multiplication table entry out of range");
}

std::vector<Element> Semigroup::idempotents() const {
  std::vector<Element> out;
  for (Element e = 0; e < size_; ++e)
    if (is_idempotent(e)) out.push_back(e);
  return out;
}

Element Semigroup::power(Element s, int n) const {
  if (n < 1) throw Error("semigroup powers start at 1");
  Element r = s;
  for (int i = 1; i < n; ++i) r = mul(r, s);
  return r;
}

Element Semigroup::idempotent_power(Element s) const {
  Element p = s;
  for (int i = 0; i <= size_; ++i) {
    if (is_idempotent(p)) return p;
    p = mul(p, s);
  }
  throw Error("no idempotent power found; multiplication is not associative");
}

std::optional<std::array<Element, 3>> Semigroup::associativity_failure() const {
  for (Element a = 0; a < size_; ++a)
    for (Element b = 0; b < size_; ++b) {
      const Element ab = mul(a, b);
      for (Element c = 0; c < size_; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) return std::array<Element, 3>{a, b, c};
    }
  return std::nullopt;
}

Semigroup Semigroup::with_entry(Element a, Element b, Element value) const {
  Semigroup copy = *this;
  copy.table_.at(static_cast<std::size_t>(a * size_ + b)) = value;
  return copy;
}

Recognizer compile(const Query& q, std::size_t max_elements) {
  const Dfa& dfa = q.dfa();
  const int sigma = q.alphabet().size();
  const std::size_t states = static_cast<std::size_t>(dfa.num_states);

  std::vector<std::vector<int>> functions;
  std::vector<Word> witness;
  std::map<std::vector<int>, Element> index;
  std::vector<Element> letter_value(static_cast<std::size_t>(sigma));

  auto intern = [&](std::vector<int> f, const Word& w) -> std::pair<Element, bool> {
    auto [it, inserted] = index.emplace(f, static_cast<Element>(functions.size()));
    if (inserted) {
      if (functions.size() >= max_elements)
        throw BudgetExceeded("transition monoid", functions.size() + 1, max_elements);
      functions.push_back(std::move(f));
      witness.push_back(w);
    }
    return {it->second, inserted};
  };

  std::vector<std::vector<int>> letter_fn(static_cast<std::size_t>(sigma), std::vector<int>(states));
  for (Letter a = 0; a < sigma; ++a)
    for (std::size_t s = 0; s < states; ++s) letter_fn[static_cast<std::size_t>(a)][s] = dfa.next(static_cast<int>(s), q.marked(a, 0));

  // Breadth-first closure in shortlex order: the first word found for each
  // value is its shortlex-minimal witness.
  for (Letter a = 0; a < sigma; ++a) letter_value[static_cast<std::size_t>(a)] = intern(letter_fn[static_cast<std::size_t>(a)], Word{a}).first;
  for (std::size_t head = 0; head < functions.size(); ++head) {
    for (Letter a = 0; a < sigma; ++a) {
      std::vector<int> f(states);
      for (std::size_t s = 0; s < states; ++s) f[s] = letter_fn[static_cast<std::size_t>(a)][static_cast<std::size_t>(functions[head][s])];
      Word w = witness[head];
      w.push_back(a);
      intern(std::move(f), w);
    }
  }

  const int size = static_cast<int>(functions.size());
  std::vector<Element> table(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  std::vector<int> f(states);
  for (Element x = 0; x < size; ++x) {
    for (Element y = 0; y < size; ++y) {
      for (std::size_t s = 0; s < states; ++s) f[s] = functions[static_cast<std::size_t>(y)][static_cast<std::size_t>(functions[static_cast<std::size_t>(x)][s])];
      table[static_cast<std::size_t>(x) * static_cast<std::size_t>(size) + static_cast<std::size_t>(y)] = index.at(f);
    }
  }
  return Recognizer{q, Semigroup(size, std::move(table)), std::move(letter_value), std::move(witness), std::move(functions)};
}

Element h_value(const Recognizer& r, const Word& w) {
  if (w.empty()) throw Error("h is undefined on the empty word");
  Element v = r.letter_value.at(static_cast<std::size_t>(w[0]));
  for (std::size_t i = 1; i < w.size(); ++i) v = r.semigroup.mul(v, r.letter_value.at(static_cast<std::size_t>(w[i])));
  return v;
}

std::vector<Element> idempotents(const Recognizer& r) { return r.semigroup.idempotents(); }

Profile profile_of(const Recognizer& r, const Word& w, const Assignment& positions) {
  std::map<int, VarMask> at;
  for (std::size_t v = 0; v < positions.size(); ++v) {
    const int p = positions[v];
    if (p < 1 || p > static_cast<int>(w.size())) throw Error("assignment out of range");
    at[p] |= VarMask{1} << v;
  }
  Profile out;
  int prev = 0;
  auto gap = [&](int from, int to) -> std::optional<Element> {  // infix (from, to), exclusive
    if (to - from <= 1) return std::nullopt;
    return h_value(r, Word(w.begin() + from, w.begin() + to - 1));
  };
  for (const auto& [p, mask] : at) {
    out.gaps.push_back(gap(prev, p));
    out.groups.push_back({w[static_cast<std::size_t>(p - 1)], mask});
    prev = p;
  }
  out.gaps.push_back(gap(prev, static_cast<int>(w.size()) + 1));
  return out;
}

Profile profile_of(const Recognizer& r, const PointedWord& pw) {
  const Query& q = r.query;
  if (pw.assignment.size() != static_cast<std::size_t>(q.num_variables()))
    throw Error("pointed word variables do not match the query");
  Assignment a;
  for (const auto& v : q.variables()) {
    auto it = pw.assignment.find(v);
    if (it == pw.assignment.end()) throw Error("pointed word lacks variable " + v);
    a.push_back(it->second);
  }
  return profile_of(r, pw.word, a);
}

bool accept_profile(const Recognizer& r, const Profile& p) {
  const Query& q = r.query;
  if (p.gaps.size() != p.groups.size() + 1) throw Error("malformed profile: gap count must be groups + 1");
  VarMask seen = 0;
  for (const auto& g : p.groups) {
    if (g.vars == 0 || (g.vars & seen) != 0 || (g.vars & ~q.full_mask()) != 0)
      throw Error("malformed profile: group variables must partition the query variables");
    seen |= g.vars;
  }
  if (seen != q.full_mask()) throw Error("malformed profile: group variables must partition the query variables");
  int state = q.dfa().initial;
  for (std::size_t i = 0; i < p.gaps.size(); ++i) {
    if (p.gaps[i]) {
      if (*p.gaps[i] < 0 || *p.gaps[i] >= r.size()) throw Error("malformed profile: unknown semigroup element");
      state = r.apply(*p.gaps[i], state);
    }
    if (i < p.groups.size()) state = q.dfa().next(state, q.marked(p.groups[i].letter, p.groups[i].vars));
  }
  return q.dfa().accepting[static_cast<std::size_t>(state)];
}

}  // namespace polygrow
