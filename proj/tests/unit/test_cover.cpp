#include "core/cover.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <algorithm>

using namespace koman;

namespace {

// Smallest cover by trying every subset in order of size, then lexicographically.
std::vector<PlayerId> exhaustive_cover(const ConflictGraph& g) {
  const std::size_t n = g.vertices;
  std::vector<PlayerId> best;
  bool found = false;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    bool covers = true;
    for (auto [a, b] : g.edges)
      if (!((mask >> a) & 1) && !((mask >> b) & 1)) covers = false;
    if (!covers) continue;
    std::vector<PlayerId> set;
    for (PlayerId p = 0; p < n; ++p)
      if ((mask >> p) & 1) set.push_back(p);
    if (!found || set.size() < best.size() || (set.size() == best.size() && set < best)) best = set;
    found = true;
  }
  return best;
}

}  // namespace

TEST_SUITE("cover") {

TEST_CASE("conflict graph of E1") {
  auto inst = testing::e1();
  auto g = conflict_graph(inst);
  CHECK(g.vertices == 4);
  using E = std::pair<PlayerId, PlayerId>;
  CHECK(g.edges == std::vector<E>{{0, 1}, {0, 2}, {1, 2}, {1, 3}});
  auto cover = minimum_random_game_cover(inst);
  CHECK(cover == std::vector<PlayerId>{0, 1});
  CHECK(is_random_game_cover(inst, cover));
  CHECK_FALSE(is_random_game_cover(inst, {0}));
}

TEST_CASE("deterministic instance needs no cover") {
  auto inst = testing::e1();
  for (PlayerId a = 0; a < 4; ++a)
    for (PlayerId b = a + 1; b < 4; ++b) inst.matrix.set(a, b, 1);
  CHECK(conflict_graph(inst).edges.empty());
  CHECK(minimum_random_game_cover(inst).empty());
}

TEST_CASE("branching matches exhaustive search") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 60; ++i) {
    auto inst = testing::random_instance(rng, 2 + i % 11, i % 2 == 0, 2);
    auto g = conflict_graph(inst);
    auto got = minimum_vertex_cover(g);
    CHECK(got == exhaustive_cover(g));
    CHECK(is_random_game_cover(inst, got));
  }
}

TEST_CASE("complete conflict graph needs all but one vertex") {
  auto inst = testing::blank_instance(TournamentTree::balanced({0, 1, 2, 3, 4, 5, 6, 7}), 8);
  auto cover = minimum_random_game_cover(inst);
  CHECK(cover.size() == 7);
  CHECK(cover == std::vector<PlayerId>{0, 1, 2, 3, 4, 5, 6});
}

}  // TEST_SUITE
