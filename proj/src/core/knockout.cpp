#include "core/knockout.hpp"

#include <algorithm>

namespace koman {

std::vector<Game> current_pairings(const TournamentTree& tree) {
  std::vector<Game> games;
  if (tree.empty() || tree.height() == 0) return games;
  const auto last = tree.height() - 1;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& n = tree.node(id);
    if (n.player == kNone && n.depth == last) games.push_back({id, tree.node(n.left).player, tree.node(n.right).player});
  }
  return games;
}

TournamentTree advance_round(const TournamentTree& tree, const std::vector<PlayerId>& winners) {
  auto games = current_pairings(tree);
  if (winners.size() != games.size())
    throw Error(ErrorCode::IncompleteRound, "round has " + std::to_string(games.size()) + " games but " +
                                                std::to_string(winners.size()) + " winners were given");
  std::vector<PlayerId> resolved(tree.node_count(), kNone);
  for (std::size_t k = 0; k < games.size(); ++k) {
    if (winners[k] != games[k].a && winners[k] != games[k].b)
      throw Error(ErrorCode::UnknownWinner, "winner of game " + std::to_string(k + 1) + " is not one of its players");
    resolved[games[k].parent] = winners[k];
  }
  TreeBuilder b;
  std::vector<NodeId> made(tree.node_count(), kNone);
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (resolved[i] != kNone)
      made[i] = b.add_leaf(resolved[i]);
    else if (n.player != kNone)
      made[i] = b.add_leaf(n.player);
    else
      made[i] = b.add_internal(made[n.left], n.right == kNone ? kNone : made[n.right]);
  }
  return b.build(made[0]);
}

TournamentTree advance_round(const TournamentTree& tree, const std::map<std::size_t, PlayerId>& winners) {
  auto games = current_pairings(tree);
  std::vector<PlayerId> list(games.size(), kNone);
  for (const auto& [k, w] : winners) {
    if (k >= games.size()) throw Error(ErrorCode::UnknownWinner, "no game with index " + std::to_string(k));
    list[k] = w;
  }
  for (std::size_t k = 0; k < list.size(); ++k)
    if (list[k] == kNone) throw Error(ErrorCode::IncompleteRound, "game " + std::to_string(k + 1) + " has no declared winner");
  return advance_round(tree, list);
}

RoundState advance_state(const RoundState& state, const std::vector<PlayerId>& winners) {
  auto games = current_pairings(state.tree);
  RoundState next;
  next.tree = advance_round(state.tree, winners);
  next.round = state.round + 1;
  next.eliminated = state.eliminated;
  for (std::size_t k = 0; k < games.size(); ++k) next.eliminated.push_back(winners[k] == games[k].a ? games[k].b : games[k].a);
  std::sort(next.eliminated.begin(), next.eliminated.end());
  return next;
}

ClassDist merge_game(const ClassDist& left, const ClassDist& right, const ClassTable& table) {
  ClassDist out;
  out.reserve(left.size() + right.size());
  auto add = [&](std::uint32_t c, const Rational& w) {
    for (auto& e : out)
      if (e.first == c) {
        e.second += w;
        return;
      }
    out.emplace_back(c, w);
  };
  Rational joint, w;
  for (const auto& [a, pa] : left)
    for (const auto& [b, pb] : right) {
      joint = pa * pb;
      const Rational& p = table(a, b);
      if (p != 0) {
        w = joint * p;
        add(a, w);
      }
      if (p != 1) {
        w = joint - joint * p;
        add(b, w);
      }
    }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  return out;
}

std::vector<ClassDist> class_reach(const TournamentTree& tree, const std::vector<std::uint32_t>& class_of, const ClassTable& table) {
  std::vector<ClassDist> dist(tree.node_count());
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (n.player != kNone)
      dist[i] = {{class_of[n.player], Rational(1)}};
    else
      dist[i] = merge_game(dist[n.left], dist[n.right], table);
  }
  return dist;
}

ReachMap reach_distribution(const TournamentTree& tree, const ProbabilityMatrix& matrix) {
  return reach_distribution(tree, tree.root(), matrix);
}

ReachMap reach_distribution(const TournamentTree& tree, NodeId top, const ProbabilityMatrix& matrix) {
  ClassTable table;
  table.classes = matrix.group_count();
  table.p.resize(table.classes * table.classes);
  for (std::uint32_t a = 0; a < table.classes; ++a)
    for (std::uint32_t b = 0; b < table.classes; ++b) table.p[std::size_t(a) * table.classes + b] = a == b ? half() : matrix.group_p(a, b);
  std::vector<std::uint32_t> class_of(matrix.size());
  for (PlayerId p = 0; p < matrix.size(); ++p) class_of[p] = matrix.group_of(p);
  std::vector<ClassDist> dist(tree.node_count());
  for (NodeId i = tree.subtree_end(top) + 1; i-- > top;) {
    const auto& n = tree.node(i);
    if (n.player != kNone)
      dist[i] = {{class_of[n.player], Rational(1)}};
    else
      dist[i] = merge_game(dist[n.left], dist[n.right], table);
  }

  // A player's reach is the product over its path of the chance to beat
  // whoever comes out of the sibling subtree; those subtrees are disjoint.
  ReachMap out;
  Rational prob, step;
  for (NodeId id = top; id <= tree.subtree_end(top); ++id) {
    const auto& leaf = tree.node(id);
    if (leaf.player == kNone) continue;
    const auto g = class_of[leaf.player];
    prob = 1;
    for (NodeId v = id; v != top && prob != 0; v = tree.node(v).parent) {
      step = 0;
      for (const auto& [c, w] : dist[tree.sibling(v)]) step += w * table(g, c);
      prob *= step;
    }
    if (prob != 0) out.emplace(leaf.player, prob);
  }
  return out;
}

}  // namespace koman
