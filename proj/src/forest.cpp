#include "polygrow/forest.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

int FactorizationTree::add_leaf(Letter letter, Element value) {
  FftNode n;
  n.leaf = true;
  n.letter = letter;
  n.value = value;
  n.first = n.last = static_cast<int>(leaves_.size()) + 1;
  nodes_.push_back(n);
  leaves_.push_back(root());
  return root();
}

int FactorizationTree::add_inner(Element label, std::vector<int> children) {
  if (children.empty()) throw Error("inner node needs children");
  FftNode n;
  n.value = label;
  const int id = size();
  int height = 0;
  for (std::size_t k = 0; k < children.size(); ++k) {
    FftNode& c = nodes_.at(static_cast<std::size_t>(children[k]));
    if (c.parent >= 0) throw Error("node already has a parent");
    if (k > 0 && c.first != node(children[k - 1]).last + 1) throw Error("children must cover consecutive positions");
    c.parent = id;
    c.index_in_parent = static_cast<int>(k);
    height = std::max(height, c.height + 1);
  }
  n.first = node(children.front()).first;
  n.last = node(children.back()).last;
  n.height = height;
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return id;
}

bool FactorizationTree::is_rightmost(int id) const {
  const FftNode& n = node(id);
  if (n.parent < 0) return true;
  return n.index_in_parent + 1 == static_cast<int>(node(n.parent).children.size());
}

Word FactorizationTree::yield() const {
  Word w;
  for (int id : leaves_) w.push_back(node(id).letter);
  return w;
}

std::string FactorizationTree::serialize() const {
  std::ostringstream out;
  auto rec = [&](auto&& self, int id) -> void {
    const FftNode& n = node(id);
    if (n.leaf) {
      out << "l" << n.letter << ":" << n.value;
      return;
    }
    out << "(" << n.value;
    for (int c : n.children) {
      out << " ";
      self(self, c);
    }
    out << ")";
  };
  if (size() > 0) rec(rec, root());
  return out.str();
}

namespace {

// Rows of bitsets over interval end points: row i, bit j.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * static_cast<std::size_t>((n + 63) / 64)) {}

  bool test(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1U; }
  void set(int i, int j) { row(i)[j >> 6] |= std::uint64_t{1} << (j & 63); }
  std::uint64_t* row(int i) { return bits_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(words_); }
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(words_); }
  void or_row(int i, const std::uint64_t* src) {
    std::uint64_t* d = row(i);
    for (int k = 0; k < words_; ++k) d[k] |= src[k];
  }
  template <typename F>
  void for_each(int i, F&& f) const {
    const std::uint64_t* r = row(i);
    for (int k = 0; k < words_; ++k)
      for (std::uint64_t b = r[k]; b != 0; b &= b - 1) f(k * 64 + __builtin_ctzll(b));
  }
  int n() const { return n_; }
  int words() const { return words_; }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Intervals [i, j] (0-based) splittable into >= 1, >= 2, >= 3 consecutive pieces,
// each in `pieces` with value e.
struct WideSets {
  BitMatrix at_least[3];
};

class Builder {
 public:
  Builder(const Recognizer& r, const Word& w) : r_(r), w_(w), n_(static_cast<int>(w.size())) {
    value_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i) {
      Element v = letter(i);
      val(i, i) = v;
      for (int j = i + 1; j < n_; ++j) {
        v = r_.semigroup.mul(v, letter(j));
        val(i, j) = v;
      }
    }
    for (Element e : r_.semigroup.idempotents()) {
      BitMatrix m(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
          if (val(i, j) == e) m.set(i, j);
      by_value_.emplace(e, std::move(m));
    }
  }

  FactorizationTree run() {
    BitMatrix base(n_);
    for (int i = 0; i < n_; ++i) base.set(i, i);
    levels_.push_back(std::move(base));
    const int bound = height_bound(r_);
    while (!levels_.back().test(0, n_ - 1)) {
      if (static_cast<int>(levels_.size()) > bound) throw Error("factorization height exceeded 3|S| - 1; the semigroup is inconsistent");
      levels_.push_back(next_level(static_cast<int>(levels_.size())));
    }
    build(0, n_ - 1);
    return std::move(tree_);
  }

 private:
  Element letter(int i) const { return r_.letter_value.at(static_cast<std::size_t>(w_[static_cast<std::size_t>(i)])); }
  Element& val(int i, int j) { return value_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }
  Element val(int i, int j) const { return value_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }

  // Pieces available below level h are the intervals of levels_[h - 1].
  const WideSets& wide(int h, Element e) {
    auto key = std::make_pair(h, e);
    auto it = wide_cache_.find(key);
    if (it != wide_cache_.end()) return it->second;
    const BitMatrix& prev = levels_.at(static_cast<std::size_t>(h - 1));
    const BitMatrix& ve = by_value_.at(e);
    WideSets s{{BitMatrix(n_), BitMatrix(n_), BitMatrix(n_)}};
    std::vector<std::uint64_t> piece(static_cast<std::size_t>(prev.words()));
    for (int i = n_ - 1; i >= 0; --i) {
      for (int k = 0; k < prev.words(); ++k) piece[static_cast<std::size_t>(k)] = prev.row(i)[k] & ve.row(i)[k];
      s.at_least[0].or_row(i, piece.data());
      for (int k = 0; k < prev.words(); ++k)
        for (std::uint64_t b = piece[static_cast<std::size_t>(k)]; b != 0; b &= b - 1) {
          const int m = k * 64 + __builtin_ctzll(b);
          if (m + 1 >= n_) continue;
          s.at_least[0].or_row(i, s.at_least[0].row(m + 1));
          s.at_least[1].or_row(i, s.at_least[0].row(m + 1));
          s.at_least[2].or_row(i, s.at_least[1].row(m + 1));
        }
    }
    return wide_cache_.emplace(key, std::move(s)).first->second;
  }

  BitMatrix next_level(int h) {
    const BitMatrix& prev = levels_.back();
    BitMatrix cur = prev;
    for (int i = 0; i < n_; ++i)
      prev.for_each(i, [&](int m) {
        if (m + 1 < n_) cur.or_row(i, prev.row(m + 1));
      });
    for (const auto& [e, unused] : by_value_) {
      const WideSets& s = wide(h, e);
      for (int i = 0; i < n_; ++i) cur.or_row(i, s.at_least[2].row(i));
    }
    return cur;
  }

  int min_level(int i, int j) const {
    for (std::size_t h = 0; h < levels_.size(); ++h)
      if (levels_[h].test(i, j)) return static_cast<int>(h);
    throw Error("interval missing from every level");
  }

  int build(int i, int j) {
    const int h = min_level(i, j);
    if (h == 0) return tree_.add_leaf(w_[static_cast<std::size_t>(i)], letter(i));
    const Element v = val(i, j);
    if (r_.semigroup.is_idempotent(v) && wide(h, v).at_least[2].test(i, j)) {
      const WideSets& s = wide(h, v);
      const BitMatrix& prev = levels_.at(static_cast<std::size_t>(h - 1));
      std::vector<std::pair<int, int>> pieces;
      int a = i;
      int need = 3;
      while (a <= j) {
        int chosen = -1;
        for (int b = a; b <= j && chosen < 0; ++b) {
          if (!prev.test(a, b) || val(a, b) != v) continue;
          if (b == j) {
            if (need <= 1) chosen = b;
          } else {
            const int rest = std::max(need - 1, 1);
            if (s.at_least[rest - 1].test(b + 1, j)) chosen = b;
          }
        }
        if (chosen < 0) throw Error("wide node reconstruction failed");
        pieces.emplace_back(a, chosen);
        a = chosen + 1;
        need = std::max(need - 1, 1);
      }
      std::vector<int> kids;
      for (auto [x, y] : pieces) kids.push_back(build(x, y));
      return tree_.add_inner(v, std::move(kids));
    }
    const BitMatrix& prev = levels_.at(static_cast<std::size_t>(h - 1));
    for (int m = i; m < j; ++m) {
      if (prev.test(i, m) && prev.test(m + 1, j)) {
        const int left = build(i, m);
        const int right = build(m + 1, j);
        return tree_.add_inner(v, {left, right});
      }
    }
    throw Error("binary split reconstruction failed");
  }

  const Recognizer& r_;
  const Word& w_;
  int n_;
  std::vector<Element> value_;
  std::map<Element, BitMatrix> by_value_;
  std::vector<BitMatrix> levels_;
  std::map<std::pair<int, Element>, WideSets> wide_cache_;
  FactorizationTree tree_;
};

}  // namespace

int height_bound(const Recognizer& r) { return 3 * r.size() - 1; }

FactorizationTree build_fft(const Recognizer& r, const Word& w) {
  if (w.empty()) throw Error("factorization trees need a nonempty word");
  for (Letter a : w)
    if (a < 0 || a >= r.query.alphabet().size()) throw Error("letter outside the alphabet");
  return Builder(r, w).run();
}

std::string to_string(FftViolation::Rule rule) {
  switch (rule) {
    case FftViolation::Rule::YieldMismatch: return "yield";
    case FftViolation::Rule::LabelMismatch: return "label";
    case FftViolation::Rule::Arity: return "arity";
    case FftViolation::Rule::NonIdempotentWide: return "non-idempotent-wide";
    case FftViolation::Rule::WideChildMismatch: return "wide-child";
    case FftViolation::Rule::HeightOverflow: return "height";
  }
  return "unknown";
}

std::vector<FftViolation> validate_fft(const Recognizer& r, const Word& w, const FactorizationTree& t) {
  using Rule = FftViolation::Rule;
  std::vector<FftViolation> out;
  if (t.size() == 0) {
    out.push_back({-1, Rule::YieldMismatch, "tree is empty"});
    return out;
  }
  if (t.yield() != w) out.push_back({t.root(), Rule::YieldMismatch, "leaves do not spell the word"});
  const Semigroup& s = r.semigroup;
  for (int id = 0; id < t.size(); ++id) {
    const FftNode& n = t.node(id);
    const std::string where = "node " + std::to_string(id) + " [" + std::to_string(n.first) + "," + std::to_string(n.last) + "]";
    if (n.leaf) {
      if (n.value != r.letter_value.at(static_cast<std::size_t>(n.letter)))
        out.push_back({id, Rule::LabelMismatch, where + ": leaf label is not h of its letter"});
      continue;
    }
    if (n.children.size() < 2) {
      out.push_back({id, Rule::Arity, where + ": inner node with fewer than two children"});
      continue;
    }
    Element product = t.node(n.children.front()).value;
    for (std::size_t k = 1; k < n.children.size(); ++k) product = s.mul(product, t.node(n.children[k]).value);
    if (product != n.value)
      out.push_back({id, Rule::LabelMismatch, where + ": label " + std::to_string(n.value) + " but children multiply to " + std::to_string(product)});
    if (n.children.size() >= 3) {
      if (!s.is_idempotent(n.value))
        out.push_back({id, Rule::NonIdempotentWide, where + ": wide node label " + std::to_string(n.value) + " is not idempotent"});
      for (int c : n.children)
        if (t.node(c).value != n.value)
          out.push_back({id, Rule::WideChildMismatch, where + ": child " + std::to_string(c) + " label differs from the wide node label"});
    }
  }
  if (t.height() > height_bound(r))
    out.push_back({t.root(), Rule::HeightOverflow,
                   "height " + std::to_string(t.height()) + " exceeds 3|S| - 1 = " + std::to_string(height_bound(r))});
  return out;
}

Element infix_value(const Recognizer& r, const FactorizationTree& t, int i, int j) {
  if (i < 1 || j > t.length() || i > j) throw Error("infix out of range");
  const Semigroup& s = r.semigroup;
  std::optional<Element> acc;
  auto push = [&](Element v) { acc = acc ? s.mul(*acc, v) : v; };
  auto rec = [&](auto&& self, int id) -> void {
    const FftNode& n = t.node(id);
    if (n.last < i || n.first > j) return;
    if (i <= n.first && n.last <= j) {
      push(n.value);
      return;
    }
    bool run_open = false;  // covered children of a wide node collapse to its label
    for (int c : n.children) {
      const FftNode& k = t.node(c);
      const bool covered = i <= k.first && k.last <= j;
      if (covered && n.children.size() >= 3) {
        if (!run_open) push(n.value);
        run_open = true;
        continue;
      }
      run_open = false;
      self(self, c);
    }
  };
  rec(rec, t.root());
  return *acc;
}

}  // namespace polygrow
