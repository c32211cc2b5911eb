#include "polygrow/dfa.hpp"

#include <deque>
#include <map>

#include "polygrow/errors.hpp"

namespace polygrow {

bool Dfa::is_empty() const {
  std::vector<char> seen(static_cast<std::size_t>(num_states), 0);
  std::deque<int> queue{initial};
  seen[static_cast<std::size_t>(initial)] = 1;
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    if (accepting[static_cast<std::size_t>(q)]) return false;
    for (int a = 0; a < num_letters; ++a) {
      const int r = next(q, a);
      if (!seen[static_cast<std::size_t>(r)]) {
        seen[static_cast<std::size_t>(r)] = 1;
        queue.push_back(r);
      }
    }
  }
  return true;
}

std::vector<char> Dfa::dead_states() const {
  // Backward reachability from accepting states.
  std::vector<std::vector<int>> reverse(static_cast<std::size_t>(num_states));
  for (int q = 0; q < num_states; ++q)
    for (int a = 0; a < num_letters; ++a) reverse[static_cast<std::size_t>(next(q, a))].push_back(q);
  std::vector<char> live(static_cast<std::size_t>(num_states), 0);
  std::deque<int> queue;
  for (int q = 0; q < num_states; ++q) {
    if (accepting[static_cast<std::size_t>(q)]) {
      live[static_cast<std::size_t>(q)] = 1;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    for (int p : reverse[static_cast<std::size_t>(q)]) {
      if (!live[static_cast<std::size_t>(p)]) {
        live[static_cast<std::size_t>(p)] = 1;
        queue.push_back(p);
      }
    }
  }
  std::vector<char> dead(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) dead[i] = !live[i];
  return dead;
}

Dfa Dfa::minimized() const {
  // Restrict to reachable states.
  std::vector<int> order;
  std::vector<int> index(static_cast<std::size_t>(num_states), -1);
  order.push_back(initial);
  index[static_cast<std::size_t>(initial)] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int a = 0; a < num_letters; ++a) {
      const int r = next(order[head], a);
      if (index[static_cast<std::size_t>(r)] < 0) {
        index[static_cast<std::size_t>(r)] = static_cast<int>(order.size());
        order.push_back(r);
      }
    }
  }
  const int n = static_cast<int>(order.size());

  // Moore refinement.
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cls[static_cast<std::size_t>(i)] = accepting[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] ? 1 : 0;
  int num_classes = 0;
  for (;;) {
    std::map<std::vector<int>, int> signature_ids;
    std::vector<int> refined(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int> sig;
      sig.reserve(static_cast<std::size_t>(num_letters + 1));
      sig.push_back(cls[static_cast<std::size_t>(i)]);
      for (int a = 0; a < num_letters; ++a)
        sig.push_back(cls[static_cast<std::size_t>(index[static_cast<std::size_t>(next(order[static_cast<std::size_t>(i)], a))])]);
      auto [it, inserted] = signature_ids.emplace(std::move(sig), static_cast<int>(signature_ids.size()));
      refined[static_cast<std::size_t>(i)] = it->second;
    }
    const int count = static_cast<int>(signature_ids.size());
    cls = std::move(refined);
    if (count == num_classes) break;
    num_classes = count;
  }

  // Renumber classes breadth-first from the initial class.
  std::vector<int> rep(static_cast<std::size_t>(num_classes), -1);
  for (int i = 0; i < n; ++i)
    if (rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] < 0) rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] = i;
  std::vector<int> new_id(static_cast<std::size_t>(num_classes), -1);
  std::vector<int> bfs{cls[0]};
  new_id[static_cast<std::size_t>(cls[0])] = 0;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    const int member = order[static_cast<std::size_t>(rep[static_cast<std::size_t>(bfs[head])])];
    for (int a = 0; a < num_letters; ++a) {
      const int c = cls[static_cast<std::size_t>(index[static_cast<std::size_t>(next(member, a))])];
      if (new_id[static_cast<std::size_t>(c)] < 0) {
        new_id[static_cast<std::size_t>(c)] = static_cast<int>(bfs.size());
        bfs.push_back(c);
      }
    }
  }

  Dfa out;
  out.num_letters = num_letters;
  out.num_states = num_classes;
  out.initial = 0;
  out.accepting.assign(static_cast<std::size_t>(num_classes), 0);
  out.delta.assign(static_cast<std::size_t>(num_classes * num_letters), 0);
  for (int c = 0; c < num_classes; ++c) {
    const int member = order[static_cast<std::size_t>(rep[static_cast<std::size_t>(c)])];
    const int id = new_id[static_cast<std::size_t>(c)];
    out.accepting[static_cast<std::size_t>(id)] = accepting[static_cast<std::size_t>(member)];
    for (int a = 0; a < num_letters; ++a) {
      const int target = cls[static_cast<std::size_t>(index[static_cast<std::size_t>(next(member, a))])];
      out.delta[static_cast<std::size_t>(id * num_letters + a)] = new_id[static_cast<std::size_t>(target)];
    }
  }
  return out;
}

Dfa product(const Dfa& a, const Dfa& b, ProductMode mode) {
  if (a.num_letters != b.num_letters) throw Error("product of automata over different alphabets");
  Dfa out;
  out.num_letters = a.num_letters;
  out.num_states = a.num_states * b.num_states;
  out.initial = a.initial * b.num_states + b.initial;
  out.accepting.resize(static_cast<std::size_t>(out.num_states));
  out.delta.resize(static_cast<std::size_t>(out.num_states * out.num_letters));
  for (int p = 0; p < a.num_states; ++p) {
    for (int q = 0; q < b.num_states; ++q) {
      const int s = p * b.num_states + q;
      const bool x = a.accepting[static_cast<std::size_t>(p)];
      const bool y = b.accepting[static_cast<std::size_t>(q)];
      out.accepting[static_cast<std::size_t>(s)] = mode == ProductMode::Intersection ? (x && y) : (x || y);
      for (int l = 0; l < out.num_letters; ++l)
        out.delta[static_cast<std::size_t>(s * out.num_letters + l)] = a.next(p, l) * b.num_states + b.next(q, l);
    }
  }
  return out.minimized();
}

}  // namespace polygrow
