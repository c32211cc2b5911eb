#include "polygrow/skeleton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

namespace {

std::string mask_names(VarMask m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t v = 0; v < names.size(); ++v)
    if (m & (VarMask{1} << v)) out += (out.empty() ? "" : ",") + names[v];
  return out;
}

}  // namespace

Skeleton skeleton(const FactorizationTree& t, const Assignment& positions, const std::vector<std::string>& variables) {
  if (t.size() == 0) throw Error("skeleton of an empty tree");
  for (int p : positions)
    if (p < 1 || p > t.length())
      throw Error("assignment position " + std::to_string(p) + " out of range 1.." + std::to_string(t.length()));

  std::vector<char> keep(static_cast<std::size_t>(t.size()), 0);
  std::vector<int> work{t.root()};
  for (int p : positions) work.push_back(t.leaf_at(p));
  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();
    if (keep[static_cast<std::size_t>(id)]) continue;
    keep[static_cast<std::size_t>(id)] = 1;
    const int parent = t.node(id).parent;
    if (parent >= 0) {
      const auto& sib = t.node(parent).children;
      work.push_back(parent);
      work.push_back(sib.front());
      work.push_back(sib.back());
    }
  }

  Skeleton s;
  s.variables = variables;
  if (s.variables.empty())
    for (std::size_t v = 0; v < positions.size(); ++v) s.variables.push_back("x" + std::to_string(v + 1));
  s.tree_height = t.height();
  std::vector<int> index(static_cast<std::size_t>(t.size()), -1);
  std::function<int(int, int)> visit = [&](int id, int parent) {
    const FftNode& n = t.node(id);
    const int me = static_cast<int>(s.nodes.size());
    index[static_cast<std::size_t>(id)] = me;
    SkeletonNode sn;
    sn.tree_node = id;
    sn.parent = parent;
    sn.leaf = n.leaf;
    sn.letter = n.letter;
    sn.label = n.value;
    sn.is_leftmost = t.is_leftmost(id);
    sn.is_rightmost = t.is_rightmost(id);
    s.nodes.push_back(sn);
    int prev = -1;
    for (int c : n.children) {
      if (!keep[static_cast<std::size_t>(c)]) continue;
      const int ci = visit(c, me);
      auto& self = s.nodes[static_cast<std::size_t>(me)];
      if (prev >= 0) self.linked.push_back(t.node(c).index_in_parent == t.node(prev).index_in_parent + 1);
      self.children.push_back(ci);
      prev = c;
    }
    return me;
  };
  visit(t.root(), -1);
  for (std::size_t v = 0; v < positions.size(); ++v) {
    const int node = index[static_cast<std::size_t>(t.leaf_at(positions[v]))];
    s.distinguished.push_back(node);
    s.nodes[static_cast<std::size_t>(node)].vars |= VarMask{1} << v;
  }
  return s;
}

Skeleton skeleton(const Recognizer& r, const Word& w, const Assignment& positions) {
  return skeleton(build_fft(r, w), positions, r.query.variables());
}

std::string Skeleton::key() const {
  std::ostringstream out;
  std::function<void(int)> rec = [&](int id) {
    const SkeletonNode& n = nodes[static_cast<std::size_t>(id)];
    if (n.leaf)
      out << "l" << n.letter;
    else
      out << "n" << n.label;
    if (n.is_leftmost) out << "L";
    if (n.is_rightmost) out << "R";
    if (n.vars) out << "{" << mask_names(n.vars, variables) << "}";
    if (n.children.empty()) return;
    out << "(";
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      if (k > 0) out << (n.linked[k - 1] ? "-" : "~");
      rec(n.children[k]);
    }
    out << ")";
  };
  rec(0);
  return out.str();
}

std::vector<int> Skeleton::captured(int node) const {
  VarMask m = 0;
  std::function<void(int)> rec = [&](int id) {
    m |= nodes[static_cast<std::size_t>(id)].vars;
    for (int c : nodes[static_cast<std::size_t>(id)].children) rec(c);
  };
  rec(node);
  std::vector<int> out;
  for (std::size_t v = 0; v < variables.size(); ++v)
    if (m & (VarMask{1} << v)) out.push_back(static_cast<int>(v));
  return out;
}

Profile skeleton_profile(const Recognizer& r, const Skeleton& s) {
  const Semigroup& sg = r.semigroup;
  Profile p;
  std::optional<Element> gap;
  auto value = [&](Element v) { gap = gap ? sg.mul(*gap, v) : v; };
  std::function<void(int)> rec = [&](int id) {
    const SkeletonNode& n = s.nodes[static_cast<std::size_t>(id)];
    if (n.vars != 0) {
      if (!n.leaf || !n.children.empty()) throw Error("inconsistent skeleton: variables on an inner node");
      p.gaps.push_back(gap);
      gap.reset();
      p.groups.push_back({n.letter, n.vars});
      return;
    }
    if (n.children.empty()) {
      value(n.label);
      return;
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      if (k > 0 && !n.linked[k - 1]) {
        if (!sg.is_idempotent(n.label))
          throw Error("inconsistent skeleton: elided siblings under non-idempotent label " + std::to_string(n.label));
        value(n.label);
      }
      rec(n.children[k]);
    }
  };
  rec(0);
  p.gaps.push_back(gap);
  return p;
}

bool eval_via_skeleton(const Recognizer& r, const Skeleton& s) { return accept_profile(r, skeleton_profile(r, s)); }

SegmentAnalysis segments(const Skeleton& s) {
  SegmentAnalysis out;
  std::function<void(int, std::vector<int>&)> descend = [&](int id, std::vector<int>& acc) {
    acc.push_back(id);
    for (int c : s.nodes[static_cast<std::size_t>(id)].children) descend(c, acc);
  };
  for (std::size_t id = 0; id < s.nodes.size(); ++id) {
    const SkeletonNode& n = s.nodes[id];
    std::size_t k = 0;
    while (k < n.children.size()) {
      std::size_t e = k;
      while (e + 1 < n.children.size() && n.linked[e]) ++e;
      bool movable = true;
      for (std::size_t i = k; i <= e; ++i) {
        const SkeletonNode& c = s.nodes[static_cast<std::size_t>(n.children[i])];
        if (c.is_leftmost || c.is_rightmost) movable = false;
      }
      if (movable) {
        Segment seg;
        seg.parent = static_cast<int>(id);
        seg.idempotent = s.nodes[static_cast<std::size_t>(n.children[k])].label;
        for (std::size_t i = k; i <= e; ++i) {
          const int c = n.children[i];
          seg.interval.push_back(c);
          if (s.nodes[static_cast<std::size_t>(c)].label != seg.idempotent) seg.uniform_label = false;
          descend(c, seg.members);
        }
        std::sort(seg.members.begin(), seg.members.end());
        for (int m : seg.members) seg.captured |= s.nodes[static_cast<std::size_t>(m)].vars;
        out.all.push_back(std::move(seg));
      }
      k = e + 1;
    }
  }
  for (std::size_t i = 0; i < out.all.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < out.all.size() && minimal; ++j) {
      if (i == j) continue;
      const auto& a = out.all[i].members;
      const auto& b = out.all[j].members;
      if (b.size() < a.size() && std::includes(a.begin(), a.end(), b.begin(), b.end())) minimal = false;
    }
    if (minimal) out.minimal.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> seed(const Skeleton& s, const SegmentAnalysis& seg) {
  std::vector<int> out;
  for (int i : seg.minimal) {
    const VarMask m = seg.all[static_cast<std::size_t>(i)].captured;
    if (m == 0) continue;
    out.push_back(__builtin_ctz(m));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  (void)s;
  return out;
}

std::vector<int> seed(const Skeleton& s) { return seed(s, segments(s)); }

std::string to_string(SpanStep::Move m) {
  switch (m) {
    case SpanStep::Move::Parent: return "parent";
    case SpanStep::Move::PrevLinked: return "prev-linked";
    case SpanStep::Move::NextLinked: return "next-linked";
    case SpanStep::Move::LeftmostChild: return "leftmost-child";
    case SpanStep::Move::RightmostChild: return "rightmost-child";
  }
  return "unknown";
}

SpanCertificate span_certificate(const Skeleton& s, const std::vector<int>& seed_vars) {
  using Move = SpanStep::Move;
  const std::size_t n = s.nodes.size();
  std::vector<int> from(n, -2), origin(n, -1);
  std::vector<Move> how(n, Move::Parent);
  std::deque<int> queue;
  for (int v : seed_vars) {
    const int node = s.distinguished.at(static_cast<std::size_t>(v));
    if (from[static_cast<std::size_t>(node)] != -2) continue;
    from[static_cast<std::size_t>(node)] = -1;
    origin[static_cast<std::size_t>(node)] = v;
    queue.push_back(node);
  }
  if (from[0] == -2) {
    from[0] = -1;
    queue.push_back(0);
  }
  auto reach = [&](int src, int dst, Move m) {
    if (dst < 0 || from[static_cast<std::size_t>(dst)] != -2) return;
    from[static_cast<std::size_t>(dst)] = src;
    how[static_cast<std::size_t>(dst)] = m;
    origin[static_cast<std::size_t>(dst)] = origin[static_cast<std::size_t>(src)];
    queue.push_back(dst);
  };
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const SkeletonNode& node = s.nodes[static_cast<std::size_t>(id)];
    reach(id, node.parent, Move::Parent);
    if (node.parent >= 0) {
      const SkeletonNode& p = s.nodes[static_cast<std::size_t>(node.parent)];
      const auto k = static_cast<std::size_t>(std::find(p.children.begin(), p.children.end(), id) - p.children.begin());
      if (k > 0 && p.linked[k - 1]) reach(id, p.children[k - 1], Move::PrevLinked);
      if (k + 1 < p.children.size() && p.linked[k]) reach(id, p.children[k + 1], Move::NextLinked);
    }
    for (int c : node.children) {
      if (s.nodes[static_cast<std::size_t>(c)].is_leftmost) reach(id, c, Move::LeftmostChild);
      if (s.nodes[static_cast<std::size_t>(c)].is_rightmost) reach(id, c, Move::RightmostChild);
    }
  }
  SpanCertificate cert;
  for (std::size_t v = 0; v < s.distinguished.size(); ++v) {
    if (std::find(seed_vars.begin(), seed_vars.end(), static_cast<int>(v)) != seed_vars.end()) continue;
    int node = s.distinguished[v];
    if (from[static_cast<std::size_t>(node)] == -2) {
      cert.unreached.push_back(static_cast<int>(v));
      continue;
    }
    SpanPath path;
    path.variable = static_cast<int>(v);
    path.source_variable = origin[static_cast<std::size_t>(node)];
    while (from[static_cast<std::size_t>(node)] >= 0) {
      path.steps.push_back({how[static_cast<std::size_t>(node)], node});
      node = from[static_cast<std::size_t>(node)];
    }
    std::reverse(path.steps.begin(), path.steps.end());
    cert.paths.push_back(std::move(path));
  }
  return cert;
}

std::optional<Assignment> seed_extension(const Recognizer& r, const Word& w, const FactorizationTree& t,
                                         const std::string& key, const Assignment& partial) {
  const Query& q = r.query;
  const int k = q.num_variables();
  const int n = static_cast<int>(w.size());
  if (static_cast<int>(partial.size()) != k) throw Error("partial assignment has the wrong arity");
  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < partial.size(); ++v) {
    if (partial[v] == 0)
      free.push_back(v);
    else if (partial[v] < 1 || partial[v] > n)
      throw Error("partial assignment out of range");
  }
  Assignment a = partial;
  for (std::size_t v : free) a[v] = 1;
  std::optional<Assignment> found;
  for (;;) {
    if (q.accepts(w, a) && skeleton(t, a, q.variables()).key() == key) {
      if (found) {
        std::ostringstream msg;
        msg << "seed tuple extends to two assignments with skeleton " << key << ":";
        for (int p : *found) msg << " " << p;
        msg << " and";
        for (int p : a) msg << " " << p;
        throw SeedUniquenessViolation(msg.str());
      }
      found = a;
    }
    std::size_t i = free.size();
    while (i > 0 && a[free[i - 1]] == n) a[free[--i]] = 1;
    if (i == 0) break;
    ++a[free[i - 1]];
  }
  return found;
}

std::optional<Assignment> seed_extension(const Recognizer& r, const Word& w, const std::string& key,
                                         const Assignment& partial) {
  if (w.empty()) return std::nullopt;
  return seed_extension(r, w, build_fft(r, w), key, partial);
}

DependencyGraph dependency_graph(const Skeleton& s) {
  const int n = static_cast<int>(s.nodes.size());
  DependencyGraph g;
  g.edges.assign(static_cast<std::size_t>(n), {});
  auto add = [&](int x, int y) {
    auto& e = g.edges[static_cast<std::size_t>(x)];
    if (std::find(e.begin(), e.end(), y) == e.end()) e.push_back(y);
  };
  for (int x = 0; x < n; ++x) {
    const SkeletonNode& node = s.nodes[static_cast<std::size_t>(x)];
    if (node.parent >= 0) add(x, node.parent);
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      const int c = node.children[k];
      const SkeletonNode& child = s.nodes[static_cast<std::size_t>(c)];
      if (child.is_leftmost || child.is_rightmost) add(x, c);
      if (k + 1 < node.children.size() && node.linked[k]) {
        add(c, node.children[k + 1]);
        add(node.children[k + 1], c);
      }
    }
  }

  // Tarjan's algorithm.
  g.component.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n)), order(static_cast<std::size_t>(n), -1), stack;
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    order[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
    stack.push_back(v);
    on_stack[static_cast<std::size_t>(v)] = 1;
    for (int u : g.edges[static_cast<std::size_t>(v)]) {
      if (order[static_cast<std::size_t>(u)] < 0) {
        strong(u);
        low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(u)]);
      } else if (on_stack[static_cast<std::size_t>(u)]) {
        low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], order[static_cast<std::size_t>(u)]);
      }
    }
    if (low[static_cast<std::size_t>(v)] == order[static_cast<std::size_t>(v)]) {
      int u;
      do {
        u = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(u)] = 0;
        g.component[static_cast<std::size_t>(u)] = g.num_components;
      } while (u != v);
      ++g.num_components;
    }
  };
  for (int v = 0; v < n; ++v)
    if (order[static_cast<std::size_t>(v)] < 0) strong(v);

  std::vector<char> entered(static_cast<std::size_t>(g.num_components), 0);
  for (int x = 0; x < n; ++x)
    for (int y : g.edges[static_cast<std::size_t>(x)])
      if (g.component[static_cast<std::size_t>(x)] != g.component[static_cast<std::size_t>(y)])
        entered[static_cast<std::size_t>(g.component[static_cast<std::size_t>(y)])] = 1;
  for (int c = 0; c < g.num_components; ++c) {
    if (entered[static_cast<std::size_t>(c)]) continue;
    g.minimal.push_back(c);
    int best = -1;
    for (std::size_t v = 0; v < s.distinguished.size(); ++v)
      if (g.component[static_cast<std::size_t>(s.distinguished[v])] == c) {
        best = static_cast<int>(v);
        break;
      }
    if (best >= 0) g.seed.push_back(best);
  }
  std::sort(g.seed.begin(), g.seed.end());
  return g;
}

}  // namespace polygrow
