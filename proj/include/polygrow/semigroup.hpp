#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "polygrow/query.hpp"

namespace polygrow {

/// Semigroup element id.
using Element = int;

/// Finite semigroup given by its multiplication table.
class Semigroup {
 public:
  Semigroup() = default;
  Semigroup(int size, std::vector<Element> table);

  int size() const noexcept { return size_; }
  Element mul(Element a, Element b) const { return table_[static_cast<std::size_t>(a * size_ + b)]; }
  const std::vector<Element>& table() const noexcept { return table_; }

  bool is_idempotent(Element e) const { return mul(e, e) == e; }
  std::vector<Element> idempotents() const;
  /// s^n for n >= 1.
  Element power(Element s, int n) const;
  /// The unique idempotent power of s.
  Element idempotent_power(Element s) const;

  /// First triple (a, b, c) with (ab)c != a(bc), scanning lexicographically.
  std::optional<std::array<Element, 3>> associativity_failure() const;

  /// Copy with one table entry overwritten (fault injection in tests and reports).
  Semigroup with_entry(Element a, Element b, Element value) const;

 private:
  int size_ = 0;
  std::vector<Element> table_;
};

/// The transition monoid of a query's automaton restricted to unmarked
/// letters, with h : Sigma+ -> S given by letter_value.
///
/// Element s denotes the state function state_function[s]; multiplication is
/// left-to-right composition, so h(uv) = h(u) h(v). Every element is the image
/// of some nonempty word, so the realizable image R is all of S.
struct Recognizer {
  Query query;
  Semigroup semigroup;
  std::vector<Element> letter_value;
  /// Shortlex-minimal word with each value.
  std::vector<Word> witness;
  std::vector<std::vector<int>> state_function;

  int apply(Element s, int state) const { return state_function[static_cast<std::size_t>(s)][static_cast<std::size_t>(state)]; }
  int size() const noexcept { return semigroup.size(); }
};

constexpr std::size_t kDefaultMonoidCap = 10'000;

Recognizer compile(const Query& q, std::size_t max_elements = kDefaultMonoidCap);

/// h on a nonempty word; throws on the empty word.
Element h_value(const Recognizer& r, const Word& w);
std::vector<Element> idempotents(const Recognizer& r);

/// Distinguished positions in word order with the h-values of the infixes
/// between them. gaps.size() == groups.size() + 1; std::nullopt marks an
/// empty infix.
struct Profile {
  struct Group {
    Letter letter = 0;
    VarMask vars = 0;
    bool operator==(const Group&) const = default;
  };
  std::vector<Group> groups;
  std::vector<std::optional<Element>> gaps;
  bool operator==(const Profile&) const = default;
};

Profile profile_of(const Recognizer& r, const PointedWord& pw);
Profile profile_of(const Recognizer& r, const Word& w, const Assignment& positions);
/// Runs the automaton symbolically over the profile.
bool accept_profile(const Recognizer& r, const Profile& p);

}  // namespace polygrow
