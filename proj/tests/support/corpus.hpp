#pragma once

#include "core/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace koman::testing {

// Directory holding the checked-in fixtures.
std::string data_path(const std::string& file);

Instance e1();

// Players "e*", "p1", ... with all pairs 1/2; favorite is player 0.
Instance blank_instance(const TournamentTree& tree, std::size_t n);

// Every balanced 4-player instance with probabilities in {0, 1/4, 1/2, 1}
// and every coalition of at most two non-favorite players.
std::vector<Instance> four_player_corpus();

// Random full binary tree over the given leaves; balanced when n is a power of two and `balanced`.
TournamentTree random_tree(std::mt19937_64& rng, std::vector<PlayerId> leaves, bool balanced);

// Probabilities drawn from {0, 1/4, 1/2, 3/4, 1}, coalition of 0..max_coalition players.
Instance random_instance(std::mt19937_64& rng, std::size_t n, bool balanced, std::size_t max_coalition);

// 200 seeded 8-player instances, alternating balanced and generalized trees, |C| <= 3.
std::vector<Instance> random_corpus(std::uint64_t seed = 20240611, std::size_t count = 200);

// A small mixed corpus for the slower property checks.
std::vector<Instance> small_corpus();

}  // namespace koman::testing

#include "core/skeleton.hpp"

namespace koman::testing {

// Σ over round-1 outcomes under `profile` of probability × re-solved value of the residual tournament.
Rational next_round_expectation(const Instance& inst, const StrategyProfile& profile);

// Win probability of the favorite when round 1 follows `profile` and everyone plays honestly afterwards.
Rational profile_then_honest(const Instance& inst, const StrategyProfile& profile);

}  // namespace koman::testing
