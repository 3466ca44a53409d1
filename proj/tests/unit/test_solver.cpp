#include "core/forge.hpp"
#include "core/knockout.hpp"
#include "core/oracle.hpp"
#include "core/solver.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <algorithm>

using namespace koman;

TEST_SUITE("solver") {

TEST_CASE("E1 value in every mode") {
  auto inst = testing::e1();
  CHECK(solve(inst, SolveMode::Full).t_opt == Rational(1, 2));
  CHECK(solve(inst, SolveMode::Reachable).t_opt == Rational(1, 2));
  CHECK(solve(inst, SolveMode::LowMemory).t_opt == Rational(1, 2));
  CHECK(solve_low_memory(inst).t_opt == Rational(1, 2));
}

TEST_CASE("decide compares against the threshold exactly") {
  auto inst = testing::e1();
  inst.threshold = Rational(1, 2);
  CHECK(decide(inst));
  inst.threshold = 1;
  CHECK_FALSE(decide(inst));
  inst.threshold = 0;
  CHECK(decide(inst));
  inst.threshold = Rational(1, 2) + Rational(1, 1000000);
  CHECK_FALSE(decide(inst));
}

TEST_CASE("E1 best response attains the optimum") {
  auto inst = testing::e1();
  auto br = best_response(inst);
  CHECK(br.value == Rational(1, 2));
  REQUIRE(br.profile.count(2) == 1);
  // c may throw now, or play and throw the final; both reach 1/2
  auto best = oracle_best_profiles(inst);
  CHECK(std::find(best.begin(), best.end(), br.profile) != best.end());
  CHECK(best.size() == 2);
  // ties prefer PLAY
  CHECK(br.profile.at(2) == Action::Play);
  CHECK(testing::profile_then_honest(inst, {{2, Action::Throw}}) == Rational(1, 2));
  CHECK(testing::profile_then_honest(inst, {{2, Action::Play}}) == Rational(1, 8));
}

TEST_CASE("coalition above the deepest level gets an empty profile") {
  // c sits next to the root, so it does not play in round 1
  auto leaf = TournamentTree::leaf;
  auto tree = TournamentTree::join(TournamentTree::join(leaf(0), TournamentTree::balanced({1, 2})), leaf(3));
  Instance inst = testing::blank_instance(tree, 4);
  inst.coalition = {3};
  inst.matrix.set(0, 1, Rational(1, 4));
  auto br = best_response(inst);
  CHECK(br.profile.empty());
  CHECK(br.value == solve(inst).t_opt);
  CHECK(br.value == oracle_adaptive(inst));
}

TEST_CASE("no coalition: value is the honest reach") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto inst = testing::random_instance(rng, 6 + i % 3, false, 0);
    auto reach = reach_distribution(inst.tree, inst.matrix);
    Rational expect = reach.count(0) ? reach[0] : Rational(0);
    CHECK(solve(inst).t_opt == expect);
    auto br = best_response(inst);
    CHECK(br.profile.empty());
    CHECK(br.value == expect);
  }
}

TEST_CASE("modes agree with the adaptive oracle on mixed instances") {
  for (const auto& inst : testing::small_corpus()) {
    auto o = oracle_adaptive(inst);
    CHECK(solve(inst, SolveMode::Full).t_opt == o);
    CHECK(solve(inst, SolveMode::Reachable).t_opt == o);
    CHECK(solve_low_memory(inst).t_opt == o);
  }
}

TEST_CASE("best response value equals the optimum") {
  for (const auto& inst : testing::small_corpus()) {
    auto br = best_response(inst);
    CHECK(br.value == solve(inst).t_opt);
    auto best = oracle_best_profiles(inst);
    CHECK(std::find(best.begin(), best.end(), br.profile) != best.end());
  }
}

TEST_CASE("table entries are probabilities") {
  for (const auto& inst : testing::small_corpus()) {
    SolveOptions opt;
    opt.mode = SolveMode::Full;
    bool ok = true;
    std::size_t seen = 0;
    opt.observe = [&](unsigned, const std::vector<PlayerId>&, const Rational& v) {
      ++seen;
      if (v < 0 || v > 1) ok = false;
    };
    auto mask = inst.coalition_mask();
    solve_position(Position{inst.tree, inst.matrix, mask, inst.favorite}, opt);
    CHECK(ok);
  }
}

TEST_CASE("martingale identity on mixed instances") {
  for (const auto& inst : testing::small_corpus()) {
    if (inst.tree.height() == 0) continue;
    auto br = best_response(inst);
    CHECK(testing::next_round_expectation(inst, br.profile) == br.value);
  }
}

TEST_CASE("favorite already out of the residual tree") {
  auto inst = testing::e1();
  auto next = advance_round(inst.tree, std::vector<PlayerId>{1, 3});
  auto mask = inst.coalition_mask();
  CHECK(solve_position(Position{next, inst.matrix, mask, inst.favorite}).t_opt == 0);
}

TEST_CASE("configuration cap raises SizeLimitExceeded") {
  std::mt19937_64 rng(9);
  auto inst = testing::random_instance(rng, 16, true, 3);
  auto mask = inst.coalition_mask();
  SolveOptions opt;
  opt.mode = SolveMode::Full;
  opt.max_configurations = 2;
  try {
    solve_position(Position{inst.tree, inst.matrix, mask, inst.favorite}, opt);
    FAIL("expected SizeLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeLimitExceeded);
  }
}

TEST_CASE("low-memory residency stays at the recursion depth") {
  auto inst = sat_to_first_round_instance(parse_cnf("p cnf 1 1\n1 0\n"));
  REQUIRE(inst.size() == 64);
  auto full = solve(inst, SolveMode::Full);
  auto low = solve_low_memory(inst);
  CHECK(low.t_opt == full.t_opt);
  CHECK(low.peak_live <= inst.tree.height() + 1);
  CHECK(full.peak_live > low.peak_live);
}

TEST_CASE("invalid instances are rejected") {
  auto inst = testing::e1();
  inst.matrix.set_one_way(0, 1, Rational(1, 3));
  CHECK_THROWS_AS(solve(inst), ValidationError);
}

}  // TEST_SUITE
