#include "polygrow/growth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

std::string to_string(const Exponent& e) { return e ? std::to_string(*e) : std::string("empty"); }

namespace {

constexpr std::uint64_t kMaxSearchStates = 20'000'000;

enum class StepKind : unsigned char { None, Free, Group, Enter, Exit };

struct Step {
  int parent = -2;  // -2: unvisited, -1: start
  int value = 0;    // element, letter or idempotent
  VarMask vars = 0;
  StepKind kind = StepKind::None;
};

// Reachability over (dfa state, OUT | IN(partial product, idempotent, saw group), blocks done).
class PatternSearch {
 public:
  explicit PatternSearch(const Recognizer& r)
      : r_(r), q_(r.query.dfa().num_states), s_(r.size()), idem_(r.semigroup.idempotents()),
        k_(r.query.num_variables()) {
    modes_ = 1 + (s_ + 1) * static_cast<int>(idem_.size()) * 2;
    const std::uint64_t total = static_cast<std::uint64_t>(q_) * static_cast<std::uint64_t>(modes_) * static_cast<std::uint64_t>(k_ + 1);
    if (total > kMaxSearchStates) throw BudgetExceeded("pattern search states", total, kMaxSearchStates);
    steps_.resize(static_cast<std::size_t>(total));
    dead_ = r.query.dfa().dead_states();
    run();
  }

  bool accepts(int k) const { return target(k) >= 0; }

  std::vector<Step> path(int k) const {
    std::vector<Step> out;
    for (int id = target(k); steps_[id].parent >= 0; id = steps_[id].parent) out.push_back(steps_[id]);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  int id(int q, int mode, int blocks) const { return (q * modes_ + mode) * (k_ + 1) + blocks; }
  int in_mode(int p, int ei, int saw) const { return 1 + (p * static_cast<int>(idem_.size()) + ei) * 2 + saw; }

  int target(int k) const {
    if (k < 0 || k > k_) return -1;
    const Dfa& dfa = r_.query.dfa();
    for (int q = 0; q < q_; ++q)
      if (dfa.accepting[q] && steps_[id(q, 0, k)].parent != -2) return id(q, 0, k);
    return -1;
  }

  void run() {
    const Dfa& dfa = r_.query.dfa();
    const Query& query = r_.query;
    const int identity = s_;
    std::deque<int> queue;
    auto visit = [&](int from, int q, int mode, int blocks, StepKind kind, int value, VarMask vars) {
      if (dead_[q]) return;
      const int to = id(q, mode, blocks);
      if (steps_[to].parent != -2) return;
      steps_[to] = {from, value, vars, kind};
      queue.push_back(to);
    };
    const int start = id(dfa.initial, 0, 0);
    if (dead_[dfa.initial]) return;
    steps_[start].parent = -1;
    queue.push_back(start);
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      const int blocks = cur % (k_ + 1);
      const int mode = (cur / (k_ + 1)) % modes_;
      const int q = cur / (k_ + 1) / modes_;
      if (mode == 0) {
        for (Element s = 0; s < s_; ++s) visit(cur, r_.apply(s, q), 0, blocks, StepKind::Free, s, 0);
        for (Letter a = 0; a < query.alphabet().size(); ++a)
          for (VarMask g = 1; g <= query.full_mask(); ++g)
            visit(cur, dfa.next(q, query.marked(a, g)), 0, blocks, StepKind::Group, a, g);
        if (blocks < k_)
          for (std::size_t ei = 0; ei < idem_.size(); ++ei)
            visit(cur, r_.apply(idem_[ei], q), in_mode(identity, static_cast<int>(ei), 0), blocks, StepKind::Enter, idem_[ei], 0);
        continue;
      }
      const int packed = mode - 1;
      const int saw = packed % 2;
      const int ei = (packed / 2) % static_cast<int>(idem_.size());
      const int p = packed / 2 / static_cast<int>(idem_.size());
      const Element e = idem_[ei];
      auto times = [&](Element v) { return p == identity ? v : r_.semigroup.mul(p, v); };
      for (Element s = 0; s < s_; ++s) visit(cur, r_.apply(s, q), in_mode(times(s), ei, saw), blocks, StepKind::Free, s, 0);
      for (Letter a = 0; a < query.alphabet().size(); ++a) {
        const Element ha = r_.letter_value[a];
        for (VarMask g = 1; g <= query.full_mask(); ++g)
          visit(cur, dfa.next(q, query.marked(a, g)), in_mode(times(ha), ei, 1), blocks, StepKind::Group, a, g);
      }
      if (saw && p == e) visit(cur, r_.apply(e, q), 0, blocks + 1, StepKind::Exit, e, 0);
    }
  }

  const Recognizer& r_;
  int q_;
  int s_;
  std::vector<Element> idem_;
  int k_;
  int modes_ = 0;
  std::vector<Step> steps_;
  std::vector<char> dead_;
};

Word spell(const Recognizer& r, const std::vector<PumpMove>& moves) {
  Word out;
  for (const PumpMove& m : moves) {
    if (m.kind == PumpMove::Kind::Free) {
      const Word& w = r.witness[m.value];
      out.insert(out.end(), w.begin(), w.end());
    } else {
      out.push_back(m.letter);
    }
  }
  return out;
}

// Appends the moves to `w`, recording the position of every group.
void place(const Recognizer& r, const std::vector<PumpMove>& moves, Word& w, Assignment& a) {
  for (const PumpMove& m : moves) {
    if (m.kind == PumpMove::Kind::Free) {
      const Word& piece = r.witness[m.value];
      w.insert(w.end(), piece.begin(), piece.end());
      continue;
    }
    w.push_back(m.letter);
    for (std::size_t v = 0; v < a.size(); ++v)
      if (m.vars & (VarMask{1} << v)) a[v] = static_cast<int>(w.size());
  }
}

}  // namespace

std::vector<int> pattern_counts(const Recognizer& r) {
  std::vector<int> out;
  if (r.query.is_empty()) return out;
  PatternSearch search(r);
  for (int k = 0; k <= r.query.num_variables(); ++k)
    if (search.accepts(k)) out.push_back(k);
  return out;
}

Exponent exponent(const Recognizer& r) {
  const auto counts = pattern_counts(r);
  if (counts.empty()) return std::nullopt;
  return counts.back();
}

PumpPattern pump_witness(const Recognizer& r, int k) {
  if (k < 1) throw Error("pump witnesses exist only for exponents >= 1");
  if (r.query.is_empty()) throw Error("the query is empty");
  PatternSearch search(r);
  if (!search.accepts(k)) throw Error("no idempotent pattern with " + std::to_string(k) + " blocks");
  PumpPattern p;
  p.k = k;
  p.outside.emplace_back();
  bool inside = false;
  for (const Step& s : search.path(k)) {
    switch (s.kind) {
      case StepKind::Enter:
        p.blocks.push_back({s.value, {}});
        inside = true;
        break;
      case StepKind::Exit:
        p.outside.emplace_back();
        inside = false;
        break;
      case StepKind::Free:
      case StepKind::Group: {
        PumpMove m;
        m.kind = s.kind == StepKind::Free ? PumpMove::Kind::Free : PumpMove::Kind::Group;
        if (s.kind == StepKind::Free)
          m.value = s.value;
        else {
          m.letter = s.value;
          m.vars = s.vars;
        }
        (inside ? p.blocks.back().moves : p.outside.back()).push_back(m);
        break;
      }
      case StepKind::None:
        break;
    }
  }
  return p;
}

Word realize(const Recognizer& r, const PumpPattern& p, int n) {
  if (n < 1) throw Error("repetition count must be positive");
  Word w = spell(r, p.outside.at(0));
  for (int i = 0; i < p.k; ++i) {
    const Word e = spell(r, p.blocks.at(i).moves);
    for (int c = 0; c < n; ++c) w.insert(w.end(), e.begin(), e.end());
    const Word next = spell(r, p.outside.at(i + 1));
    w.insert(w.end(), next.begin(), next.end());
  }
  return w;
}

std::pair<Word, Assignment> realize_pointed(const Recognizer& r, const PumpPattern& p, int n, const std::vector<int>& copies) {
  if (static_cast<int>(copies.size()) != p.k) throw Error("one copy index per block is required");
  Word w;
  Assignment a(static_cast<std::size_t>(r.query.num_variables()), 0);
  place(r, p.outside.at(0), w, a);
  for (int i = 0; i < p.k; ++i) {
    if (copies[i] < 1 || copies[i] > n) throw Error("copy index out of range");
    const Word e = spell(r, p.blocks[i].moves);
    for (int c = 1; c <= n; ++c) {
      if (c == copies[i])
        place(r, p.blocks[i].moves, w, a);
      else
        w.insert(w.end(), e.begin(), e.end());
    }
    place(r, p.outside.at(i + 1), w, a);
  }
  return {w, a};
}

std::vector<std::string> check_pattern(const Recognizer& r, const PumpPattern& p) {
  std::vector<std::string> problems;
  if (static_cast<int>(p.blocks.size()) != p.k || static_cast<int>(p.outside.size()) != p.k + 1) {
    problems.push_back("pattern shape does not match k");
    return problems;
  }
  for (int i = 0; i < p.k; ++i) {
    const PumpBlock& b = p.blocks[i];
    const std::string name = "block " + std::to_string(i + 1);
    if (!r.semigroup.is_idempotent(b.idempotent)) problems.push_back(name + ": label is not idempotent");
    if (std::none_of(b.moves.begin(), b.moves.end(), [](const PumpMove& m) { return m.kind == PumpMove::Kind::Group; }))
      problems.push_back(name + ": no variables");
    const Word v = spell(r, b.moves);
    if (v.empty() || h_value(r, v) != b.idempotent) problems.push_back(name + ": product differs from its idempotent");
  }
  if (problems.empty()) {
    const auto [w, a] = realize_pointed(r, p, 3, std::vector<int>(static_cast<std::size_t>(p.k), 2));
    if (!r.query.accepts(w, a)) problems.push_back("realized pointed word is rejected");
  }
  return problems;
}

std::string describe(const Recognizer& r, const PumpPattern& p) {
  const Query& q = r.query;
  auto moves = [&](const std::vector<PumpMove>& ms) {
    std::string out;
    for (const PumpMove& m : ms) {
      if (!out.empty()) out += " ";
      if (m.kind == PumpMove::Kind::Free) {
        out += q.alphabet().render(r.witness[m.value]);
        continue;
      }
      out += q.alphabet().symbol(m.letter) + "[";
      bool first = true;
      for (int v = 0; v < q.num_variables(); ++v)
        if (m.vars & (VarMask{1} << v)) {
          out += (first ? "" : ",") + q.variables()[v];
          first = false;
        }
      out += "]";
    }
    return out;
  };
  std::ostringstream out;
  out << "w0=(" << moves(p.outside[0]) << ")";
  for (int i = 0; i < p.k; ++i)
    out << " e" << i + 1 << "=" << p.blocks[i].idempotent << " v" << i + 1 << "=(" << moves(p.blocks[i].moves) << ") w" << i + 1
        << "=(" << moves(p.outside[i + 1]) << ")";
  return out.str();
}

std::uint64_t decompose_cost(const Recognizer& r, int horizon) {
  std::uint64_t total = 0;
  for (int n = 1; n <= horizon; ++n) {
    const std::uint64_t words = saturating_pow(static_cast<std::uint64_t>(r.query.alphabet().size()), n);
    const std::uint64_t tuples = saturating_pow(static_cast<std::uint64_t>(n), r.query.num_variables());
    const std::uint64_t cost = tuples != 0 && words > UINT64_MAX / tuples ? UINT64_MAX : words * tuples;
    total = cost > UINT64_MAX - total ? UINT64_MAX : total + cost;
  }
  return total;
}

std::vector<Disjunct> decompose(const Recognizer& r, int horizon, std::uint64_t budget) {
  const std::uint64_t cost = decompose_cost(r, horizon);
  if (cost > budget) throw BudgetExceeded("skeleton decomposition", cost, budget);
  std::map<std::string, Disjunct> found;
  if (r.query.is_empty()) return {};
  for_each_word(r.query.alphabet().size(), 1, horizon, [&](const Word& w) {
    const auto tuples = select_tuples(r.query, w);
    if (tuples.empty()) return;
    const FactorizationTree t = build_fft(r, w);
    for (const Assignment& a : tuples) {
      const Skeleton s = skeleton(t, a, r.query.variables());
      auto [it, inserted] = found.try_emplace(s.key());
      Disjunct& d = it->second;
      if (inserted) {
        d.key = it->first;
        d.seed = seed(s);
        d.example_word = w;
        d.example_tuple = a;
      }
      ++d.tuples;
    }
  });
  std::vector<Disjunct> out;
  for (auto& [key, d] : found) out.push_back(std::move(d));
  return out;
}

CrossCheck crosscheck(const Recognizer& r, int horizon, std::uint64_t budget) {
  CrossCheck c;
  c.horizon = horizon;
  c.associativity_failure = r.semigroup.associativity_failure();
  if (c.associativity_failure) return c;

  c.pattern_counts = pattern_counts(r);
  c.exponent = c.pattern_counts.empty() ? Exponent{} : Exponent{c.pattern_counts.back()};
  for (std::size_t i = 0; i < c.pattern_counts.size(); ++i)
    if (c.pattern_counts[i] != static_cast<int>(i)) c.monotone = false;
  if (!c.monotone) c.disagreements.push_back("pattern search is not monotone in the block count");

  c.disjuncts = decompose(r, horizon, budget);
  for (const Disjunct& d : c.disjuncts) c.max_seed = std::max(c.max_seed, static_cast<int>(d.seed.size()));
  c.table = growth_table(r.query, horizon, budget);
  c.upper_constant = c.disjuncts.size();

  if (!c.exponent) {
    if (!c.disjuncts.empty()) c.disagreements.push_back("empty query but the decomposition found accepted tuples");
    for (const auto& e : c.table)
      if (e.max_count != 0) c.disagreements.push_back("empty query but words of length " + std::to_string(e.length) + " have tuples");
    return c;
  }
  const int k = *c.exponent;
  if (c.max_seed > k)
    c.disagreements.push_back("seed of size " + std::to_string(c.max_seed) + " exceeds the exponent " + std::to_string(k));
  else if (c.max_seed < k)
    c.notes.push_back("largest seed at horizon " + std::to_string(horizon) + " is " + std::to_string(c.max_seed) +
                              ", below the exponent " + std::to_string(k));
  for (const auto& e : c.table) {
    const double scale = std::pow(static_cast<double>(e.length), k);
    c.ratios.push_back(static_cast<double>(e.max_count) / scale);
    if (static_cast<double>(e.max_count) > static_cast<double>(c.upper_constant) * scale) {
      c.upper_bound_ok = false;
      c.disagreements.push_back("length " + std::to_string(e.length) + ": " + std::to_string(e.max_count) + " tuples exceed " +
                                std::to_string(c.upper_constant) + " * n^" + std::to_string(k));
    }
  }
  if (k >= 1) {
    c.pattern = pump_witness(r, k);
    for (const auto& problem : check_pattern(r, *c.pattern)) c.disagreements.push_back("pump pattern: " + problem);
    for (int n = 3; n <= 8; ++n) {
      const Word w = realize(r, *c.pattern, n);
      const std::uint64_t work = saturating_pow(w.size(), r.query.num_variables());
      if (work > budget) break;
      PumpCheck pc;
      pc.n = n;
      pc.length = w.size();
      pc.count = count_tuples(r.query, w);
      pc.lower = saturating_pow(static_cast<std::uint64_t>(n - 2), k);
      if (!pc.ok())
        c.disagreements.push_back("pump n=" + std::to_string(n) + ": " + std::to_string(pc.count) + " tuples, expected at least " +
                                  std::to_string(pc.lower));
      c.pump.push_back(pc);
    }
  }
  return c;
}

}  // namespace polygrow
