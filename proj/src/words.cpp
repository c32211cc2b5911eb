#include "polygrow/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "polygrow/errors.hpp"

namespace polygrow {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("POLYGROW_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 50'000'000ULL;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error("alphabet must be nonempty");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw Error("alphabet symbols must be nonempty");
    if (!seen.insert(s).second) throw Error("duplicate alphabet symbol '" + s + "'");
  }
}

std::optional<Letter> Alphabet::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == symbol) return static_cast<Letter>(i);
  return std::nullopt;
}

bool Alphabet::single_char() const noexcept {
  return std::all_of(symbols_.begin(), symbols_.end(), [](const auto& s) { return s.size() == 1; });
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (auto a = index_of(token)) {
      w.push_back(*a);
      continue;
    }
    for (char c : token) {
      auto a = index_of(std::string_view(&c, 1));
      if (!a) throw Error("symbol '" + std::string(1, c) + "' is not in the alphabet");
      w.push_back(*a);
    }
  }
  return w;
}

std::string Alphabet::render(const Word& w) const {
  std::string out;
  const bool compact = single_char();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ' ';
    out += symbol(w[i]);
  }
  return out;
}

void PointedWord::validate() const {
  for (const auto& [name, pos] : assignment) {
    if (pos < 1 || pos > static_cast<int>(word.size()))
      throw Error("variable " + name + " points to position " + std::to_string(pos) +
                  " outside a word of length " + std::to_string(word.size()));
  }
}

PointedWord concat_pointed(const PointedWord& u, const PointedWord& v) {
  std::string shared;
  for (const auto& [name, pos] : v.assignment) {
    if (u.assignment.contains(name)) shared += (shared.empty() ? "" : ", ") + name;
  }
  if (!shared.empty()) throw Error("pointed words share variables: " + shared);
  PointedWord out = u;
  out.word.insert(out.word.end(), v.word.begin(), v.word.end());
  const int shift = static_cast<int>(u.word.size());
  for (const auto& [name, pos] : v.assignment) out.assignment[name] = pos + shift;
  return out;
}

AtomWord parse_atom_word(std::string_view text, const std::vector<std::string>& letters) {
  AtomWord w;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.size() > 1 && token[0] == '#') {
      char* end = nullptr;
      const unsigned long v = std::strtoul(token.c_str() + 1, &end, 10);
      if (*end != '\0') throw Error("malformed atom '" + token + "'");
      w.emplace_back(Atom{static_cast<std::uint32_t>(v)});
    } else if (letters.empty() || std::find(letters.begin(), letters.end(), token) != letters.end()) {
      if (letters.empty() && token.size() > 1) {
        for (char c : token) w.emplace_back(std::string(1, c));
      } else {
        w.emplace_back(token);
      }
    } else {
      for (char c : token) w.emplace_back(std::string(1, c));
    }
  }
  return w;
}

std::string render_atom_word(const AtomWord& w) {
  bool compact = true;
  for (const auto& s : w)
    if (is_atom(s) || std::get<std::string>(s).size() != 1) compact = false;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ' ';
    if (is_atom(w[i]))
      out += "#" + std::to_string(std::get<Atom>(w[i]).id);
    else
      out += std::get<std::string>(w[i]);
  }
  return out;
}

AtomWord atoms(std::initializer_list<std::uint32_t> ids) {
  AtomWord w;
  for (auto id : ids) w.emplace_back(Atom{id});
  return w;
}

AtomWord letters(std::string_view chars) {
  AtomWord w;
  for (char c : chars) w.emplace_back(std::string(1, c));
  return w;
}

}  // namespace polygrow
