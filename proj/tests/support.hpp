#pragma once

#include <random>
#include <string>

#include "polygrow/errors.hpp"
#include "polygrow/semigroup.hpp"

namespace testing_support {

inline polygrow::Alphabet alphabet(const std::string& letters) {
  std::vector<std::string> symbols;
  for (char c : letters) symbols.emplace_back(1, c);
  return polygrow::Alphabet(symbols);
}

inline polygrow::Query make_query(const std::string& letters, const std::vector<std::string>& vars, const std::string& regex) {
  return polygrow::parse_query(regex, alphabet(letters), vars);
}

inline polygrow::Word random_word(std::mt19937& rng, int alphabet_size, int length) {
  std::uniform_int_distribution<int> d(0, alphabet_size - 1);
  polygrow::Word w;
  for (int i = 0; i < length; ++i) w.push_back(d(rng));
  return w;
}

}  // namespace testing_support
