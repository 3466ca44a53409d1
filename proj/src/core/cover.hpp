#pragma once

#include "core/model.hpp"

#include <utility>
#include <vector>

namespace koman {

struct ConflictGraph {
  std::size_t vertices = 0;
  std::vector<std::pair<PlayerId, PlayerId>> edges;  // a < b, sorted
};

// Edges join players whose game is not decided in advance.
ConflictGraph conflict_graph(const Instance& inst);

// Smallest cover by two-way branching on uncovered edges; among minimum covers
// the lexicographically smallest sorted id list is returned.
std::vector<PlayerId> minimum_random_game_cover(const Instance& inst);
std::vector<PlayerId> minimum_vertex_cover(const ConflictGraph& g);

bool is_random_game_cover(const Instance& inst, const std::vector<PlayerId>& cover);

}  // namespace koman
