#pragma once

#include "mapgame/game.hpp"
#include "mapgame/io.hpp"

namespace fixtures {

using namespace mapgame;

// s - x - t
inline MixedGraph line3() {
  MixedGraph g;
  VertexId s = g.add_vertex("s"), x = g.add_vertex(), t = g.add_vertex("t");
  g.add_edge(s, x);
  g.add_edge(x, t);
  g.start = s;
  g.target = t;
  g.canonicalize();
  return g;
}

// s - a, s - b, a - t: b is a dead end.
inline MixedGraph fork() {
  MixedGraph g;
  VertexId s = g.add_vertex("s"), a = g.add_vertex(), b = g.add_vertex(), t = g.add_vertex("t");
  g.add_edge(s, a);
  g.add_edge(s, b);
  g.add_edge(a, t);
  g.start = s;
  g.target = t;
  g.canonicalize();
  return g;
}

inline MixedGraph triangle() {
  MixedGraph g;
  for (int i = 0; i < 3; ++i) g.add_vertex();
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.start = 0;
  g.canonicalize();
  return g;
}

inline GameSpec reach(const MixedGraph& g, Constraint c) {
  GameSpec spec = io::default_spec(g);
  spec.constraint = c;
  return spec;
}

// First reveal offered, for driving a game without an adversary.
Reveal only_reveal(const Game& g, const GameState& s);

}  // namespace fixtures
