#pragma once

#include "core/model.hpp"
#include "core/skeleton.hpp"

#include <cstdint>
#include <functional>

namespace koman {

enum class SolveMode : std::uint8_t { Full, Reachable, LowMemory };
const char* mode_name(SolveMode mode);

struct OptResult {
  Rational t_opt;
  SolveMode mode = SolveMode::Reachable;
  std::uint64_t entries = 0;         // table values computed
  std::uint64_t configurations = 0;  // configurations enumerated
  std::uint64_t peak_live = 0;       // most configurations resident at once
};

struct BestResponse {
  StrategyProfile profile;  // coalition players playing in round 1
  Rational value;
};

// A tournament in progress: the tree may hold only a subset of the players.
struct Position {
  const TournamentTree& tree;
  const ProbabilityMatrix& matrix;
  const std::vector<bool>& coalition;  // indexed by player id
  PlayerId favorite;
};

struct SolveOptions {
  SolveMode mode = SolveMode::Reachable;
  std::uint64_t max_configurations = 20'000'000;
  // Called for every computed table entry with the level, one representative
  // player per tracked vertex and the value.
  std::function<void(unsigned, const std::vector<PlayerId>&, const Rational&)> observe;
};

OptResult solve(const Instance& inst, SolveMode mode = SolveMode::Reachable);
OptResult solve_low_memory(const Instance& inst);
bool decide(const Instance& inst);
BestResponse best_response(const Instance& inst);

OptResult solve_position(const Position& pos, const SolveOptions& options = {});
BestResponse best_response_position(const Position& pos);

}  // namespace koman
