#include "polygrow/interpretation.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "polygrow/errors.hpp"

namespace polygrow {

std::vector<std::string> tuple_variables(int dimension, const std::string& prefix) {
  std::vector<std::string> out;
  for (int i = 1; i <= dimension; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

int Interpretation::dimension() const {
  int k = 0;
  for (const auto& c : components) k = std::max(k, c.dimension);
  return k;
}

std::string describe(const Copy& c) {
  std::string out = "c" + std::to_string(c.component) + "(";
  for (std::size_t i = 0; i < c.tuple.size(); ++i) out += (i ? "," : "") + std::to_string(c.tuple[i]);
  return out + ")";
}

namespace {

// Assignment in the query's sorted variable order for values given per name.
Assignment in_query_order(const Query& q, const std::vector<std::string>& names, const Assignment& values) {
  Assignment a(values.size());
  for (std::size_t i = 0; i < names.size(); ++i) a[q.var_index(names[i])] = values[i];
  return a;
}

Assignment in_tuple_order(const Query& q, const std::vector<std::string>& names, const Assignment& sorted) {
  Assignment a(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) a[i] = sorted[q.var_index(names[i])];
  return a;
}

template <typename F>
void for_each_tuple(int n, int k, F&& visit) {
  Assignment a(k, 1);
  if (n < 1 && k > 0) return;
  for (;;) {
    visit(static_cast<const Assignment&>(a));
    int i = k - 1;
    while (i >= 0 && a[i] == n) a[i--] = 1;
    if (i < 0) return;
    ++a[i];
  }
}

std::optional<Letter> label_of(const Interpretation& interp, int component, const Word& w, const Assignment& tuple) {
  const InterpComponent& c = interp.components[component];
  const auto names = tuple_variables(c.dimension);
  std::optional<Letter> found;
  for (const auto& [letter, q] : c.labels) {
    if (!q.accepts(w, in_query_order(q, names, tuple))) continue;
    if (found && *found != letter) {
      Copy copy{component, tuple, letter};
      throw Error("label ambiguity at " + describe(copy) + ": both '" + interp.output.symbol(*found) + "' and '" +
                  interp.output.symbol(letter) + "'");
    }
    found = letter;
  }
  return found;
}

bool before(const Interpretation& interp, const Word& w, const Copy& a, const Copy& b) {
  auto direct = [&](const Copy& x, const Copy& y) -> std::optional<bool> {
    auto it = interp.orders.find({x.component, y.component});
    if (it == interp.orders.end()) return std::nullopt;
    const Query& q = it->second;
    auto names = tuple_variables(static_cast<int>(x.tuple.size()), "x");
    for (const auto& y_name : tuple_variables(static_cast<int>(y.tuple.size()), "y")) names.push_back(y_name);
    Assignment values = x.tuple;
    values.insert(values.end(), y.tuple.begin(), y.tuple.end());
    return q.accepts(w, in_query_order(q, names, values));
  };
  if (auto v = direct(a, b)) return *v;
  if (auto v = direct(b, a)) return !*v;
  if (a.component != b.component) return a.component < b.component;
  return a.tuple < b.tuple;
}

std::vector<Copy> order_copies(const Interpretation& interp, const Word& w, std::vector<Copy> copies) {
  const std::size_t m = copies.size();
  std::vector<char> leq(m * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) leq[i * m + j] = before(interp, w, copies[i], copies[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (leq[i * m + j] && leq[j * m + i])
        throw Error("order is not antisymmetric on " + describe(copies[i]) + " and " + describe(copies[j]));
      if (!leq[i * m + j] && !leq[j * m + i])
        throw Error("order is not total on " + describe(copies[i]) + " and " + describe(copies[j]));
    }
  auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (a == b || b == c || a == c) return;
    if (leq[a * m + b] && leq[b * m + c] && !leq[a * m + c])
      throw Error("order is not transitive on " + describe(copies[a]) + ", " + describe(copies[b]) + ", " + describe(copies[c]));
  };
  if (m <= 64) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c) check(a, b, c);
  } else {
    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (int s = 0; s < 20000; ++s) check(pick(rng), pick(rng), pick(rng));
  }
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return a != b && leq[a * m + b]; });
  std::vector<Copy> out;
  for (std::size_t i : idx) out.push_back(std::move(copies[i]));
  return out;
}

Word letters_of(const std::vector<Copy>& copies) {
  Word out;
  for (const Copy& c : copies) out.push_back(c.letter);
  return out;
}

std::optional<Query> label_union(const InterpComponent& c) {
  std::optional<Query> u;
  for (const auto& [letter, q] : c.labels) u = u ? query_union(*u, q) : q;
  return u;
}

}  // namespace

std::vector<Copy> evaluate_copies(const Interpretation& interp, const Word& w) {
  if (w.empty()) return {};
  std::vector<Copy> copies;
  const int n = static_cast<int>(w.size());
  for (int i = 0; i < static_cast<int>(interp.components.size()); ++i)
    for_each_tuple(n, interp.components[i].dimension, [&](const Assignment& t) {
      if (auto letter = label_of(interp, i, w, t)) copies.push_back({i, t, *letter});
    });
  return order_copies(interp, w, std::move(copies));
}

Word eval_interpretation(const Interpretation& interp, const Word& w) {
  if (w.empty()) return interp.empty_output;
  return letters_of(evaluate_copies(interp, w));
}

InterpGrowth interp_growth(const Interpretation& interp) {
  InterpGrowth g;
  for (const auto& c : interp.components) {
    const auto u = label_union(c);
    const Exponent e = u ? exponent(compile(*u)) : Exponent{};
    g.per_component.push_back(e);
    if (e && (!g.k || *e > *g.k)) g.k = e;
  }
  return g;
}

OptimizedInterpretation::OptimizedInterpretation(const Interpretation& base, int horizon, std::uint64_t budget)
    : base_(base), horizon_(horizon) {
  for (int i = 0; i < static_cast<int>(base_.components.size()); ++i) {
    const auto u = label_union(base_.components[i]);
    if (!u) {
      union_index_.push_back(-1);
      continue;
    }
    union_index_.push_back(static_cast<int>(unions_.size()));
    unions_.push_back(compile(*u));
    for (Disjunct& d : decompose(unions_.back(), horizon, budget)) parts_.push_back({i, std::move(d)});
  }
}

Exponent OptimizedInterpretation::dimension() const {
  Exponent k;
  for (const Part& p : parts_) {
    const int s = static_cast<int>(p.disjunct.seed.size());
    if (!k || s > *k) k = s;
  }
  return k;
}

std::vector<Copy> OptimizedInterpretation::evaluate_copies(const Word& w, bool audit_horizon) const {
  if (w.empty()) return {};
  const int n = static_cast<int>(w.size());
  std::vector<std::optional<FactorizationTree>> trees(unions_.size());
  auto tree = [&](int u) -> const FactorizationTree& {
    if (!trees[u]) trees[u] = build_fft(unions_[u], w);
    return *trees[u];
  };

  if (audit_horizon && n > horizon_) {
    for (int i = 0; i < static_cast<int>(base_.components.size()); ++i) {
      const int u = union_index_[i];
      if (u < 0) continue;
      std::set<std::string> known;
      for (const Part& p : parts_)
        if (p.component == i) known.insert(p.disjunct.key);
      const Recognizer& r = unions_[u];
      for (const Assignment& a : select_tuples(r.query, w)) {
        const std::string key = skeleton(tree(u), a, r.query.variables()).key();
        if (!known.count(key))
          throw HorizonError("component " + std::to_string(i) + ": skeleton " + key + " of input '" + base_.input.render(w) +
                             "' is absent from the decomposition at horizon " + std::to_string(horizon_));
      }
    }
  }

  std::vector<Copy> copies;
  for (const Part& p : parts_) {
    const int u = union_index_[p.component];
    const Recognizer& r = unions_[u];
    const auto names = tuple_variables(base_.components[p.component].dimension);
    const int k = r.query.num_variables();
    const auto& seed_vars = p.disjunct.seed;
    for_each_tuple(n, static_cast<int>(seed_vars.size()), [&](const Assignment& seed_values) {
      Assignment partial(k, 0);
      for (std::size_t s = 0; s < seed_vars.size(); ++s) partial[seed_vars[s]] = seed_values[s];
      const auto full = seed_extension(r, w, tree(u), p.disjunct.key, partial);
      if (!full) return;
      const Assignment tuple = in_tuple_order(r.query, names, *full);
      const auto letter = label_of(base_, p.component, w, tuple);
      if (!letter) throw Error("extended tuple is not selected by any label");
      copies.push_back({p.component, tuple, *letter});
    });
  }
  return order_copies(base_, w, std::move(copies));
}

Word OptimizedInterpretation::eval(const Word& w, bool audit_horizon) const {
  if (w.empty()) return base_.empty_output;
  return letters_of(evaluate_copies(w, audit_horizon));
}

bool discipline_step(const std::vector<int>& a, const std::vector<int>& b) {
  const std::vector<int>& shorter = a.size() <= b.size() ? a : b;
  const std::vector<int>& longer = a.size() <= b.size() ? b : a;
  if (longer.size() == shorter.size() + 1) return std::equal(shorter.begin(), shorter.end(), longer.begin());
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return std::equal(a.begin(), a.end() - 1, b.begin());
}

std::vector<DisciplineViolation> discipline_check(const Interpretation& interp, int max_len, std::uint64_t budget) {
  std::uint64_t cost = 0;
  for (int n = 1; n <= max_len; ++n) {
    const std::uint64_t words = saturating_pow(static_cast<std::uint64_t>(interp.input.size()), n);
    std::uint64_t tuples = 0;
    for (const auto& c : interp.components) tuples += saturating_pow(static_cast<std::uint64_t>(n), c.dimension);
    cost += words * tuples;
  }
  if (cost > budget) throw BudgetExceeded("discipline check", cost, budget);
  std::vector<DisciplineViolation> out;
  for_each_word(interp.input.size(), 1, max_len, [&](const Word& w) {
    const auto copies = evaluate_copies(interp, w);
    for (std::size_t i = 0; i + 1 < copies.size(); ++i)
      if (!discipline_step(copies[i].tuple, copies[i + 1].tuple))
        out.push_back({w, static_cast<int>(i), describe(copies[i]), describe(copies[i + 1])});
  });
  return out;
}

namespace {

Alphabet alphabet_from(const nlohmann::json& j, const char* field) {
  if (!j.contains(field)) throw Error(std::string("interpretation lacks ") + field);
  const auto& v = j.at(field);
  std::vector<std::string> symbols;
  if (v.is_string()) {
    for (char c : v.get<std::string>()) symbols.emplace_back(1, c);
  } else {
    for (const auto& s : v) symbols.push_back(s.get<std::string>());
  }
  return Alphabet(symbols);
}

std::pair<int, int> order_key(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw Error("order key '" + key + "' must look like \"i,j\"");
  try {
    return {std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error("order key '" + key + "' must look like \"i,j\"");
  }
}

}  // namespace

Interpretation parse_interpretation(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("interpretation is not valid JSON: ") + e.what());
  }
  try {
    Interpretation interp;
    interp.input = alphabet_from(j, "input_alphabet");
    interp.output = alphabet_from(j, "output_alphabet");
    interp.empty_output = interp.output.parse_word(j.value("empty_output", std::string()));
    const auto& comps = j.at("components");
    std::vector<std::pair<std::string, std::string>> order_sources;
    for (const auto& c : comps) {
      InterpComponent comp;
      comp.dimension = c.at("dimension").get<int>();
      if (comp.dimension < 0 || comp.dimension > Query::kMaxVariables / 2)
        throw Error("component dimension must be in 0.." + std::to_string(Query::kMaxVariables / 2));
      for (const auto& [symbol, regex] : c.at("labels").items()) {
        const auto letter = interp.output.index_of(symbol);
        if (!letter) throw Error("label '" + symbol + "' is not an output letter");
        comp.labels.emplace_back(*letter, parse_query(regex.get<std::string>(), interp.input, tuple_variables(comp.dimension)));
      }
      if (c.contains("orders"))
        for (const auto& [key, regex] : c.at("orders").items()) order_sources.emplace_back(key, regex.get<std::string>());
      interp.components.push_back(std::move(comp));
    }
    if (j.contains("orders"))
      for (const auto& [key, regex] : j.at("orders").items()) order_sources.emplace_back(key, regex.get<std::string>());
    const int count = static_cast<int>(interp.components.size());
    for (const auto& [key, regex] : order_sources) {
      const auto [a, b] = order_key(key);
      if (a < 0 || b < 0 || a >= count || b >= count) throw Error("order key '" + key + "' names a missing component");
      auto vars = tuple_variables(interp.components[a].dimension, "x");
      for (const auto& y : tuple_variables(interp.components[b].dimension, "y")) vars.push_back(y);
      if (!interp.orders.emplace(std::make_pair(a, b), parse_query(regex, interp.input, vars)).second)
        throw Error("order '" + key + "' given twice");
    }
    return interp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed interpretation: ") + e.what());
  }
}

Interpretation load_interpretation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_interpretation(text.str());
}

}  // namespace polygrow
