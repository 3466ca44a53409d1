#pragma once

#include "core/model.hpp"
#include "core/skeleton.hpp"

#include <cstddef>
#include <vector>

namespace koman {

struct OracleLimits {
  std::size_t max_players = 16;
  // |C| * (n - 1) bound for the non-adaptive enumeration
  std::size_t max_strategy_pairs = 96;
  // distinct outcome distributions kept per tree node
  std::size_t max_distributions = 200'000;
};

// Exhaustive expectimax over rounds.
Rational oracle_adaptive(const Instance& inst, const OracleLimits& limits = {});

// Round-1 profiles whose exhaustive continuation attains the optimum, in
// enumeration order (first player most significant, PLAY before THROW).
std::vector<StrategyProfile> oracle_best_profiles(const Instance& inst, const OracleLimits& limits = {});

// Value of every admissible round-1 profile, same order as above.
std::vector<std::pair<StrategyProfile, Rational>> oracle_profile_values(const Instance& inst, const OracleLimits& limits = {});

// Best pre-committed play/throw rule per (coalition player, opponent).
Rational oracle_nonadaptive(const Instance& inst, const OracleLimits& limits = {});

}  // namespace koman
