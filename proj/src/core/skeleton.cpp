#include "core/skeleton.hpp"

#include "core/knockout.hpp"

#include <algorithm>
#include <functional>

namespace koman {

const char* action_name(Action a) { return a == Action::Play ? "PLAY" : "THROW"; }

Skeleton build_skeleton(const TournamentTree& tree, const std::vector<PlayerId>& coalition) {
  Skeleton sk;
  sk.member.assign(tree.node_count(), false);
  std::vector<bool> in_c;
  for (auto c : coalition) {
    if (c >= in_c.size()) in_c.resize(c + 1, false);
    in_c[c] = true;
  }
  unsigned deepest = 0;
  bool any = false;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& n = tree.node(id);
    if (n.player == kNone || n.player >= in_c.size() || !in_c[n.player]) continue;
    any = true;
    deepest = std::max(deepest, n.depth);
    for (NodeId v = id; v != kNone && !sk.member[v]; v = tree.node(v).parent) sk.member[v] = true;
  }
  if (!any) return sk;
  sk.levels.resize(deepest + 1);
  for (NodeId id = 0; id < tree.node_count(); ++id)
    if (sk.member[id]) sk.levels[tree.node(id).depth].push_back(id);
  return sk;
}

namespace {

std::vector<PlayerId> subtree_players(const TournamentTree& tree, NodeId v) {
  std::vector<PlayerId> out;
  for (NodeId id = v; id <= tree.subtree_end(v); ++id)
    if (tree.node(id).player != kNone) out.push_back(tree.node(id).player);
  std::sort(out.begin(), out.end());
  return out;
}

// Odometer over per-position candidate lists; first position most significant.
template <class Candidates, class Visit>
void for_each_product(const std::vector<Candidates>& lists, Visit&& visit) {
  for (const auto& l : lists)
    if (l.empty()) return;
  std::vector<std::size_t> idx(lists.size(), 0);
  while (true) {
    visit(idx);
    std::size_t k = lists.size();
    while (k > 0) {
      --k;
      if (++idx[k] < lists[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (lists.empty()) return;
  }
}

std::vector<NodeId> sibling_vertices(const Skeleton& sk, const TournamentTree& tree, unsigned level) {
  std::vector<NodeId> out;
  for (auto v : sk.levels[level]) {
    auto s = tree.sibling(v);
    if (s != kNone && !sk.member[s]) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Configuration> valid_configurations(const Skeleton& sk, const TournamentTree& tree, unsigned level) {
  std::vector<Configuration> out;
  if (level >= sk.levels.size()) return out;
  std::vector<std::vector<PlayerId>> lists;
  for (auto v : sk.levels[level]) lists.push_back(subtree_players(tree, v));
  for_each_product(lists, [&](const std::vector<std::size_t>& idx) {
    Configuration c{level, {}};
    for (std::size_t k = 0; k < idx.size(); ++k) c.occupants.push_back(lists[k][idx[k]]);
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<std::pair<SiblingConfiguration, Rational>> sibling_configurations(const Skeleton& sk, const TournamentTree& tree,
                                                                              const ProbabilityMatrix& matrix, unsigned level) {
  std::vector<std::pair<SiblingConfiguration, Rational>> out;
  if (level >= sk.levels.size()) return out;
  auto vertices = sibling_vertices(sk, tree, level);
  std::vector<std::vector<std::pair<PlayerId, Rational>>> lists;
  for (auto v : vertices) {
    auto reach = reach_distribution(tree, v, matrix);
    lists.emplace_back(reach.begin(), reach.end());
  }
  if (vertices.empty()) {
    out.push_back({SiblingConfiguration{level, {}, {}}, Rational(1)});
    return out;
  }
  for_each_product(lists, [&](const std::vector<std::size_t>& idx) {
    SiblingConfiguration s{level, vertices, {}};
    Rational p = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      s.occupants.push_back(lists[k][idx[k]].first);
      p *= lists[k][idx[k]].second;
    }
    out.emplace_back(std::move(s), p);
  });
  return out;
}

Rational effective_probability(PlayerId a, PlayerId b, const StrategyProfile& profile, const ProbabilityMatrix& matrix) {
  auto throws = [&](PlayerId x) {
    auto it = profile.find(x);
    return it != profile.end() && it->second == Action::Throw;
  };
  bool ta = throws(a), tb = throws(b);
  if (ta && tb) throw Error(ErrorCode::DoubleThrow, "both players of a game throw it");
  if (ta) return 0;
  if (tb) return 1;
  return matrix(a, b);
}

namespace {

// Occupant of a depth-`level` vertex, from the configuration or the siblings.
PlayerId occupant(const Skeleton& sk, const Configuration& s, const SiblingConfiguration& siblings, NodeId v) {
  const auto& lv = sk.levels[s.level];
  auto it = std::find(lv.begin(), lv.end(), v);
  if (it != lv.end()) return s.occupants[static_cast<std::size_t>(it - lv.begin())];
  auto jt = std::find(siblings.vertices.begin(), siblings.vertices.end(), v);
  if (jt != siblings.vertices.end()) return siblings.occupants[static_cast<std::size_t>(jt - siblings.vertices.begin())];
  return kNone;
}

void check_shapes(const Skeleton& sk, const Configuration& s, const SiblingConfiguration& siblings) {
  if (s.level != siblings.level) throw Error(ErrorCode::LevelMismatch, "configuration and sibling configuration levels differ");
  if (s.level >= sk.levels.size() || s.occupants.size() != sk.levels[s.level].size())
    throw Error(ErrorCode::LevelMismatch, "configuration does not match its level");
}

}  // namespace

std::vector<StrategyProfile> strategy_profiles(const Skeleton& sk, const TournamentTree& tree, const Configuration& s,
                                               const SiblingConfiguration& siblings, const std::vector<bool>& coalition) {
  check_shapes(sk, s, siblings);
  auto in_c = [&](PlayerId p) { return p < coalition.size() && coalition[p]; };
  std::vector<PlayerId> players;
  for (auto p : s.occupants)
    if (in_c(p)) players.push_back(p);
  std::sort(players.begin(), players.end());

  // Coalition occupants that face each other this level.
  std::vector<std::pair<PlayerId, PlayerId>> paired;
  const auto& lv = sk.levels[s.level];
  for (std::size_t k = 0; k < lv.size(); ++k) {
    auto sib = tree.sibling(lv[k]);
    if (sib == kNone || sib < lv[k]) continue;
    auto other = occupant(sk, s, siblings, sib);
    if (in_c(s.occupants[k]) && other != kNone && in_c(other)) paired.emplace_back(s.occupants[k], other);
  }

  std::vector<StrategyProfile> out;
  const std::size_t total = std::size_t(1) << players.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    StrategyProfile profile;
    // first player is the most significant digit, PLAY before THROW
    for (std::size_t k = 0; k < players.size(); ++k)
      profile[players[k]] = (mask >> (players.size() - 1 - k)) & 1 ? Action::Throw : Action::Play;
    bool ok = true;
    for (auto [a, b] : paired)
      if (profile[a] == Action::Throw && profile[b] == Action::Throw) ok = false;
    if (ok) out.push_back(std::move(profile));
  }
  return out;
}

Rational transition_probability(const Skeleton& sk, const TournamentTree& tree, const Configuration& s,
                                const SiblingConfiguration& siblings, const Configuration& next, const StrategyProfile& profile,
                                const ProbabilityMatrix& matrix) {
  check_shapes(sk, s, siblings);
  if (s.level == 0 || next.level + 1 != s.level || next.occupants.size() != sk.levels[next.level].size())
    throw Error(ErrorCode::LevelMismatch, "next configuration must sit one level up");
  Rational prob = 1;
  const auto& up = sk.levels[next.level];
  for (std::size_t k = 0; k < up.size() && prob != 0; ++k) {
    const auto& u = tree.node(up[k]);
    const PlayerId target = next.occupants[k];
    if (u.player != kNone) {
      if (target != u.player) return 0;
      continue;
    }
    PlayerId a = occupant(sk, s, siblings, u.left), b = occupant(sk, s, siblings, u.right);
    if (target == a)
      prob *= effective_probability(a, b, profile, matrix);
    else if (target == b)
      prob *= effective_probability(b, a, profile, matrix);
    else
      return 0;
  }
  return prob;
}

Rational skeleton_recursion_value(const Instance& inst) {
  require_valid(inst);
  const auto& tree = inst.tree;
  auto sk = build_skeleton(tree, inst.coalition);
  if (sk.empty()) {
    auto reach = reach_distribution(tree, inst.matrix);
    auto it = reach.find(inst.favorite);
    return it == reach.end() ? Rational(0) : it->second;
  }
  auto mask = inst.coalition_mask();
  std::vector<std::vector<std::pair<SiblingConfiguration, Rational>>> siblings(sk.levels.size());
  for (unsigned i = 1; i < sk.levels.size(); ++i) siblings[i] = sibling_configurations(sk, tree, inst.matrix, i);

  std::map<std::pair<unsigned, std::vector<PlayerId>>, Rational> memo;
  std::function<Rational(const Configuration&)> value = [&](const Configuration& s) -> Rational {
    if (s.level == 0) return s.occupants[0] == inst.favorite ? 1 : 0;
    auto key = std::pair{s.level, s.occupants};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& up = sk.levels[s.level - 1];
    Rational total = 0;
    for (const auto& [sib, p_sib] : siblings[s.level]) {
      // candidates for each upper vertex: fresh leaf or either game participant
      std::vector<std::vector<PlayerId>> lists;
      for (auto u : up) {
        const auto& node = tree.node(u);
        if (node.player != kNone)
          lists.push_back({node.player});
        else
          lists.push_back({occupant(sk, s, sib, node.left), occupant(sk, s, sib, node.right)});
      }
      Rational best = 0;
      for (const auto& profile : strategy_profiles(sk, tree, s, sib, mask)) {
        Rational v = 0;
        for_each_product(lists, [&](const std::vector<std::size_t>& idx) {
          Configuration next{s.level - 1, {}};
          for (std::size_t k = 0; k < idx.size(); ++k) next.occupants.push_back(lists[k][idx[k]]);
          Rational t = transition_probability(sk, tree, s, sib, next, profile, inst.matrix);
          if (t != 0) v += t * value(next);
        });
        if (v > best) best = v;
      }
      total += p_sib * best;
    }
    memo.emplace(key, total);
    return total;
  };

  Configuration start{sk.deepest(), {}};
  for (auto v : sk.levels[sk.deepest()]) start.occupants.push_back(tree.node(v).player);
  return value(start);
}

}  // namespace koman
