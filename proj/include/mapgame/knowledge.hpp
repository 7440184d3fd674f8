#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mapgame/game.hpp"

namespace mapgame::knowledge {

// One consistent placement of the visited labels. Unvisited labels are only
// constrained through the class counts, so their entries stay -1.
struct CoreEmbedding {
  std::vector<VertexId> image;  // label -> vertex, -1 for unvisited labels
  std::vector<LabelId> owner;   // vertex -> visited label, -1 otherwise
};

// Calls visit for each embedding of the visited labels that extends to a full
// embedding; stops early when visit returns false. Returns false iff stopped.
bool for_each_embedding(const GameState& s, const Game& g,
                        const std::function<bool(const CoreEmbedding&)>& visit);

bool embedding_exists(const GameState& s, const Game& g);

// Map vertices each unvisited label may stand for under the given embedding.
// Entries for visited labels hold their single image.
std::vector<std::vector<VertexId>> label_images(const GameState& s, const Game& g, const CoreEmbedding& emb);

// FreshOnly distinguishes reveals that link different but interchangeable
// unvisited labels; Interchangeable keeps one representative of each orbit.
enum class Symmetry { FreshOnly, Interchangeable };

struct RevealOption {
  Reveal reveal;
  std::vector<VertexId> current_images;  // images of the current label producing it
};

std::vector<RevealOption> enumerate_reveal_options(const GameState& s, const Game& g,
                                                   Symmetry symmetry = Symmetry::FreshOnly);
std::vector<Reveal> enumerate_reveals(const GameState& s, const Game& g,
                                      Symmetry symmetry = Symmetry::FreshOnly);

// Labels interchangeable with each other: unvisited, same flags, same links.
// Returns a class id per label (-1 for visited labels).
std::vector<int> interchangeable_classes(const GameState& s);

std::string canonical_key(const GameState& s);

// Every required map element is the image of a used element under every
// embedding.
bool required_covered(const GameState& s, const Game& g);

}  // namespace mapgame::knowledge
