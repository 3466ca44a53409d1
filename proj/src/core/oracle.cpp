#include "core/oracle.hpp"

#include "core/knockout.hpp"

#include <algorithm>
#include <map>

namespace koman {

namespace {

void check_players(const Instance& inst, const OracleLimits& limits) {
  require_valid(inst);
  if (inst.size() > limits.max_players)
    throw Error(ErrorCode::SizeLimitExceeded,
                "oracle is limited to " + std::to_string(limits.max_players) + " players, instance has " + std::to_string(inst.size()));
}

class Adaptive {
 public:
  explicit Adaptive(const Instance& inst) : inst_(inst), mask_(inst.coalition_mask()) {}

  Rational value(const TournamentTree& tree) {
    if (tree.height() == 0) return tree.node(tree.root()).player == inst_.favorite ? 1 : 0;
    std::vector<std::uint32_t> key;
    for (const auto& n : tree.nodes()) key.push_back(n.player);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational best = 0;
    for (const auto& [profile, v] : profile_values(tree))
      if (v > best) best = v;
    memo_.emplace(std::move(key), best);
    return best;
  }

  std::vector<std::pair<StrategyProfile, Rational>> profile_values(const TournamentTree& tree) {
    auto games = current_pairings(tree);
    std::vector<PlayerId> players;
    for (const auto& g : games) {
      if (mask_[g.a]) players.push_back(g.a);
      if (mask_[g.b]) players.push_back(g.b);
    }
    std::sort(players.begin(), players.end());
    std::vector<std::pair<StrategyProfile, Rational>> out;
    const std::size_t total = std::size_t(1) << players.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
      StrategyProfile profile;
      for (std::size_t k = 0; k < players.size(); ++k)
        profile[players[k]] = (mask >> (players.size() - 1 - k)) & 1 ? Action::Throw : Action::Play;
      bool ok = true;
      for (const auto& g : games)
        if (mask_[g.a] && mask_[g.b] && profile[g.a] == Action::Throw && profile[g.b] == Action::Throw) ok = false;
      if (!ok) continue;
      out.emplace_back(profile, expected(tree, games, profile));
    }
    return out;
  }

 private:
  Rational expected(const TournamentTree& tree, const std::vector<Game>& games, const StrategyProfile& profile) {
    std::vector<std::vector<std::pair<PlayerId, Rational>>> outcomes;
    for (const auto& g : games) {
      Rational p = effective_probability(g.a, g.b, profile, inst_.matrix);
      std::vector<std::pair<PlayerId, Rational>> o;
      if (p != 0) o.emplace_back(g.a, p);
      if (p != 1) o.emplace_back(g.b, 1 - p);
      outcomes.push_back(std::move(o));
    }
    Rational total = 0;
    std::vector<PlayerId> winners(games.size());
    std::vector<std::size_t> idx(games.size(), 0);
    while (true) {
      Rational prob = 1;
      for (std::size_t k = 0; k < games.size(); ++k) {
        winners[k] = outcomes[k][idx[k]].first;
        prob *= outcomes[k][idx[k]].second;
      }
      total += prob * value(advance_round(tree, winners));
      std::size_t k = games.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++idx[k] < outcomes[k].size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
    return total;
  }

  const Instance& inst_;
  std::vector<bool> mask_;
  std::map<std::vector<std::uint32_t>, Rational> memo_;
};

using Dist = std::vector<std::pair<PlayerId, Rational>>;  // sorted by player

struct DistLess {
  bool operator()(const Dist& x, const Dist& y) const {
    if (x.size() != y.size()) return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].first != y[i].first) return x[i].first < y[i].first;
      if (x[i].second != y[i].second) return x[i].second < y[i].second;
    }
    return false;
  }
};

class NonAdaptive {
 public:
  NonAdaptive(const Instance& inst, const OracleLimits& limits) : inst_(inst), limits_(limits), mask_(inst.coalition_mask()) {}

  // Every distribution of the winner of `v` reachable by some fixed rule set.
  std::vector<Dist> achievable(NodeId v) {
    const auto& n = inst_.tree.node(v);
    if (n.player != kNone) return {{{n.player, Rational(1)}}};
    auto left = achievable(n.left), right = achievable(n.right);
    std::map<Dist, bool, DistLess> seen;
    for (const auto& dl : left)
      for (const auto& dr : right) {
        // pairs where a coalition member has a real choice
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t i = 0; i < dl.size(); ++i)
          for (std::size_t j = 0; j < dr.size(); ++j)
            if (mask_[dl[i].first] || mask_[dr[j].first]) free.emplace_back(i, j);
        std::vector<int> choice(free.size(), 0);
        auto options = [&](std::size_t k) { return mask_[dl[free[k].first].first] && mask_[dr[free[k].second].first] ? 3 : 2; };
        while (true) {
          seen.emplace(merge(dl, dr, free, choice), true);
          if (seen.size() > limits_.max_distributions)
            throw Error(ErrorCode::SizeLimitExceeded, "too many distinct non-adaptive outcome distributions");
          std::size_t k = free.size();
          bool done = true;
          while (k > 0) {
            --k;
            if (++choice[k] < options(k)) {
              done = false;
              break;
            }
            choice[k] = 0;
          }
          if (done) break;
        }
      }
    std::vector<Dist> out;
    for (auto& [d, _] : seen) out.push_back(d);
    return out;
  }

 private:
  // choice 0: both play; 1: left member throws (or the lone member throws); 2: right member throws
  Dist merge(const Dist& dl, const Dist& dr, const std::vector<std::pair<std::size_t, std::size_t>>& free,
             const std::vector<int>& choice) {
    std::map<PlayerId, Rational> acc;
    std::size_t f = 0;
    for (std::size_t i = 0; i < dl.size(); ++i)
      for (std::size_t j = 0; j < dr.size(); ++j) {
        PlayerId a = dl[i].first, b = dr[j].first;
        Rational p = inst_.matrix(a, b);
        if (f < free.size() && free[f] == std::pair{i, j}) {
          int c = choice[f++];
          bool ca = mask_[a];
          if (c == 1) p = ca ? 0 : 1;
          if (c == 2) p = 1;
        }
        Rational joint = dl[i].second * dr[j].second;
        if (p != 0) acc[a] += joint * p;
        if (p != 1) acc[b] += joint * (1 - p);
      }
    Dist out;
    for (auto& [pl, w] : acc)
      if (w != 0) out.emplace_back(pl, w);
    return out;
  }

  const Instance& inst_;
  const OracleLimits& limits_;
  std::vector<bool> mask_;
};

}  // namespace

Rational oracle_adaptive(const Instance& inst, const OracleLimits& limits) {
  check_players(inst, limits);
  Adaptive a(inst);
  return a.value(inst.tree);
}

std::vector<std::pair<StrategyProfile, Rational>> oracle_profile_values(const Instance& inst, const OracleLimits& limits) {
  check_players(inst, limits);
  Adaptive a(inst);
  if (inst.tree.height() == 0) return {{StrategyProfile{}, a.value(inst.tree)}};
  return a.profile_values(inst.tree);
}

std::vector<StrategyProfile> oracle_best_profiles(const Instance& inst, const OracleLimits& limits) {
  auto values = oracle_profile_values(inst, limits);
  Rational best = 0;
  for (const auto& [p, v] : values) best = std::max(best, v);
  std::vector<StrategyProfile> out;
  for (auto& [p, v] : values)
    if (v == best) out.push_back(p);
  return out;
}

Rational oracle_nonadaptive(const Instance& inst, const OracleLimits& limits) {
  require_valid(inst);
  const std::size_t pairs = inst.coalition.size() * (inst.size() == 0 ? 0 : inst.size() - 1);
  if (pairs > limits.max_strategy_pairs)
    throw Error(ErrorCode::SizeLimitExceeded, "non-adaptive enumeration is limited to " + std::to_string(limits.max_strategy_pairs) +
                                                   " coalition-opponent pairs, instance has " + std::to_string(pairs));
  const auto& tree = inst.tree;
  NodeId leaf = kNone;
  for (NodeId id = 0; id < tree.node_count(); ++id)
    if (tree.node(id).player == inst.favorite) leaf = id;
  if (leaf == kNone) return 0;
  // The favorite's matches are against the winners of disjoint subtrees, and
  // every member meeting the favorite throws, so the optimum factorises.
  NonAdaptive na(inst, limits);
  Rational value = 1;
  for (NodeId v = leaf; tree.node(v).parent != kNone; v = tree.node(v).parent) {
    NodeId sib = tree.sibling(v);
    Rational best = 0;
    for (const auto& d : na.achievable(sib)) {
      Rational s = 0;
      for (const auto& [y, w] : d) s += inst.in_coalition(y) ? w : w * inst.matrix(inst.favorite, y);
      best = std::max(best, s);
    }
    value *= best;
    if (value == 0) break;
  }
  return value;
}

}  // namespace koman
