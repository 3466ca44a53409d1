#include "core/cover.hpp"

#include <algorithm>

namespace koman {

ConflictGraph conflict_graph(const Instance& inst) {
  ConflictGraph g;
  g.vertices = inst.size();
  const auto& m = inst.matrix;
  for (PlayerId a = 0; a < g.vertices; ++a)
    for (PlayerId b = a + 1; b < g.vertices; ++b) {
      const Rational& p = m(a, b);
      if (p != 0 && p != 1) g.edges.emplace_back(a, b);
    }
  return g;
}

namespace {

struct Search {
  const ConflictGraph& g;
  std::size_t budget = 0;
  std::vector<bool> chosen;
  std::vector<PlayerId> current;
  std::vector<PlayerId> best;
  bool found = false;

  void run(std::size_t from) {
    // first edge still uncovered
    while (from < g.edges.size() && (chosen[g.edges[from].first] || chosen[g.edges[from].second])) ++from;
    if (from == g.edges.size()) {
      auto sorted = current;
      std::sort(sorted.begin(), sorted.end());
      if (!found || sorted < best) best = std::move(sorted);
      found = true;
      return;
    }
    if (current.size() == budget) return;
    for (PlayerId v : {g.edges[from].first, g.edges[from].second}) {
      chosen[v] = true;
      current.push_back(v);
      run(from + 1);
      current.pop_back();
      chosen[v] = false;
    }
  }
};

}  // namespace

std::vector<PlayerId> minimum_vertex_cover(const ConflictGraph& g) {
  for (std::size_t k = 0;; ++k) {
    Search s{g, k, std::vector<bool>(g.vertices, false), {}, {}, false};
    s.run(0);
    if (s.found) return s.best;
  }
}

std::vector<PlayerId> minimum_random_game_cover(const Instance& inst) { return minimum_vertex_cover(conflict_graph(inst)); }

bool is_random_game_cover(const Instance& inst, const std::vector<PlayerId>& cover) {
  std::vector<bool> in(inst.size(), false);
  for (auto p : cover)
    if (p < in.size()) in[p] = true;
  for (const auto& [a, b] : conflict_graph(inst).edges)
    if (!in[a] && !in[b]) return false;
  return true;
}

}  // namespace koman
