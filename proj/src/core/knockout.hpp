#pragma once

#include "core/model.hpp"

#include <map>
#include <utility>
#include <vector>

namespace koman {

struct Game {
  NodeId parent;
  PlayerId a;
  PlayerId b;
};

// Sibling leaf pairs at maximum depth, left to right.
std::vector<Game> current_pairings(const TournamentTree& tree);

// winners[k] is the winner of the k-th current game.
TournamentTree advance_round(const TournamentTree& tree, const std::vector<PlayerId>& winners);
TournamentTree advance_round(const TournamentTree& tree, const std::map<std::size_t, PlayerId>& winners);

struct RoundState {
  TournamentTree tree;
  unsigned round = 1;
  std::vector<PlayerId> eliminated;  // sorted
};

RoundState advance_state(const RoundState& state, const std::vector<PlayerId>& winners);

using ReachMap = std::map<PlayerId, Rational>;

// Honest-play probability of each player winning the whole tree; zero entries omitted.
ReachMap reach_distribution(const TournamentTree& tree, const ProbabilityMatrix& matrix);
// Same for the subtree rooted at `top`.
ReachMap reach_distribution(const TournamentTree& tree, NodeId top, const ProbabilityMatrix& matrix);

// Win probabilities between player classes; a class against itself is 1/2.
struct ClassTable {
  std::size_t classes = 0;
  std::vector<Rational> p;
  const Rational& operator()(std::uint32_t a, std::uint32_t b) const { return p[std::size_t(a) * classes + b]; }
};

using ClassDist = std::vector<std::pair<std::uint32_t, Rational>>;  // sorted by class, no zeros

// Class-level honest reach for every node, bottom-up.
std::vector<ClassDist> class_reach(const TournamentTree& tree, const std::vector<std::uint32_t>& class_of, const ClassTable& table);

ClassDist merge_game(const ClassDist& left, const ClassDist& right, const ClassTable& table);

struct MonteCarloEstimate {
  double estimate = 0;
  double standard_error = 0;
};

// Plays the best-response policy against sampled outcomes.
MonteCarloEstimate monte_carlo_win_estimate(const Instance& inst, std::uint64_t trials, std::uint64_t seed);

}  // namespace koman
