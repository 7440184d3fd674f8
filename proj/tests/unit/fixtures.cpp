#include "fixtures.hpp"

#include <doctest.h>

#include "mapgame/knowledge.hpp"

namespace fixtures {

Reveal only_reveal(const Game& g, const GameState& s) {
  auto reveals = knowledge::enumerate_reveals(s, g);
  REQUIRE_FALSE(reveals.empty());
  return reveals.front();
}

}  // namespace fixtures
