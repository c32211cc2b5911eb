#pragma once

#include <compare>
#include <initializer_list>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polygrow {

/// Index of a symbol inside an Alphabet.
using Letter = int;
using Word = std::vector<Letter>;

/// Ordered finite set of printable tokens.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  int size() const noexcept { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(Letter a) const { return symbols_.at(static_cast<std::size_t>(a)); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<Letter> index_of(std::string_view symbol) const;
  bool single_char() const noexcept;

  /// Whitespace-separated tokens; a token that is not a symbol is split into
  /// single-character symbols.
  Word parse_word(std::string_view text) const;
  std::string render(const Word& w) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
};

/// A word with distinguished positions (1-based) indexed by variable names.
struct PointedWord {
  Word word;
  std::map<std::string, int> assignment;

  void validate() const;
  bool operator==(const PointedWord&) const = default;
};

/// Concatenation of pointed words with disjoint variable sets.
PointedWord concat_pointed(const PointedWord& u, const PointedWord& v);

/// Element of the infinite atom set.
struct Atom {
  std::uint32_t id = 0;
  auto operator<=>(const Atom&) const = default;
};

/// A letter from a finite alphabet or an atom.
using Symbol = std::variant<std::string, Atom>;
using AtomWord = std::vector<Symbol>;

inline bool is_atom(const Symbol& s) { return std::holds_alternative<Atom>(s); }

/// Tokens are whitespace separated; `#<int>` is an atom. Tokens that are not
/// in `letters` are split into characters.
AtomWord parse_atom_word(std::string_view text, const std::vector<std::string>& letters = {});
std::string render_atom_word(const AtomWord& w);
AtomWord atoms(std::initializer_list<std::uint32_t> ids);
AtomWord letters(std::string_view chars);

}  // namespace polygrow
