#include "core/knockout.hpp"
#include "core/solver.hpp"

#include <cmath>
#include <map>
#include <random>

namespace koman {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::uint32_t> tree_key(const TournamentTree& tree) {
  std::vector<std::uint32_t> key;
  key.reserve(tree.node_count());
  for (const auto& n : tree.nodes()) key.push_back(n.player);
  return key;
}

}  // namespace

MonteCarloEstimate monte_carlo_win_estimate(const Instance& inst, std::uint64_t trials, std::uint64_t seed) {
  require_valid(inst);
  if (trials == 0) throw Error(ErrorCode::BadParameter, "trials must be at least 1");
  const auto mask = inst.coalition_mask();
  // The policy only depends on the residual tree, so it is shared across trials.
  std::map<std::vector<std::uint32_t>, StrategyProfile> policy;
  auto profile_for = [&](const TournamentTree& tree) -> const StrategyProfile& {
    auto key = tree_key(tree);
    auto it = policy.find(key);
    if (it != policy.end()) return it->second;
    Position pos{tree, inst.matrix, mask, inst.favorite};
    return policy.emplace(std::move(key), best_response_position(pos).profile).first->second;
  };

  std::uint64_t wins = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(t)));
    TournamentTree tree = inst.tree;
    while (tree.height() > 0) {
      const auto& profile = profile_for(tree);
      auto games = current_pairings(tree);
      std::vector<PlayerId> winners;
      winners.reserve(games.size());
      for (const auto& g : games) {
        double p = effective_probability(g.a, g.b, profile, inst.matrix).get_d();
        winners.push_back(unit(rng) < p ? g.a : g.b);
      }
      tree = advance_round(tree, winners);
    }
    if (tree.node(tree.root()).player == inst.favorite) ++wins;
  }
  MonteCarloEstimate out;
  const double n = static_cast<double>(trials);
  out.estimate = static_cast<double>(wins) / n;
  out.standard_error = std::sqrt(out.estimate * (1 - out.estimate) / n);
  return out;
}

}  // namespace koman
