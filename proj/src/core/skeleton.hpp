#pragma once

#include "core/model.hpp"

#include <map>
#include <utility>
#include <vector>

namespace koman {

enum class Action : std::uint8_t { Play, Throw };
const char* action_name(Action a);

// Coalition player -> action for one round. Players not listed play.
using StrategyProfile = std::map<PlayerId, Action>;

// Union of root-to-coalition-leaf paths, split by depth.
struct Skeleton {
  std::vector<bool> member;                 // per tree node
  std::vector<std::vector<NodeId>> levels;  // levels[i]: members at depth i, left to right

  bool empty() const { return levels.empty(); }
  unsigned deepest() const { return static_cast<unsigned>(levels.size()) - 1; }
};

struct Configuration {
  unsigned level = 0;
  std::vector<PlayerId> occupants;  // parallel to Skeleton::levels[level]
  bool operator==(const Configuration&) const = default;
};

// Occupants of the non-skeleton siblings of a level's vertices.
struct SiblingConfiguration {
  unsigned level = 0;
  std::vector<NodeId> vertices;
  std::vector<PlayerId> occupants;
  bool operator==(const SiblingConfiguration&) const = default;
};

Skeleton build_skeleton(const TournamentTree& tree, const std::vector<PlayerId>& coalition);

std::vector<Configuration> valid_configurations(const Skeleton& sk, const TournamentTree& tree, unsigned level);

// Only configurations with positive probability, each with that probability.
std::vector<std::pair<SiblingConfiguration, Rational>> sibling_configurations(const Skeleton& sk, const TournamentTree& tree,
                                                                              const ProbabilityMatrix& matrix, unsigned level);

Rational effective_probability(PlayerId a, PlayerId b, const StrategyProfile& profile, const ProbabilityMatrix& matrix);

std::vector<StrategyProfile> strategy_profiles(const Skeleton& sk, const TournamentTree& tree, const Configuration& s,
                                               const SiblingConfiguration& siblings, const std::vector<bool>& coalition);

Rational transition_probability(const Skeleton& sk, const TournamentTree& tree, const Configuration& s,
                                const SiblingConfiguration& siblings, const Configuration& next, const StrategyProfile& profile,
                                const ProbabilityMatrix& matrix);

// Value of the level recursion that conditions each decision only on the
// skeleton occupants and the current sibling occupants. It never exceeds the
// adaptive optimum and can fall short of it on generalized trees where a
// hanging subtree is still being played while coalition members decide.
Rational skeleton_recursion_value(const Instance& inst);

}  // namespace koman
