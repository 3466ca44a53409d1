#include "core/instance_json.hpp"
#include "core/oracle.hpp"
#include "core/solver.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <fstream>

using namespace koman;

TEST_SUITE("oracle") {

TEST_CASE("E1 adaptive oracle") {
  auto inst = testing::e1();
  CHECK(oracle_adaptive(inst) == Rational(1, 2));
  auto values = oracle_profile_values(inst);
  REQUIRE(values.size() == 2);
  CHECK(values[0].first.at(2) == Action::Play);
  CHECK(values[0].second == Rational(1, 2));
  CHECK(values[1].first.at(2) == Action::Throw);
  CHECK(values[1].second == Rational(1, 2));
}

TEST_CASE("E1 non-adaptive oracle") {
  // c throws to b, or plays b and throws the final: either rule gives 1/2
  CHECK(oracle_nonadaptive(testing::e1()) == Rational(1, 2));
}

TEST_CASE("a choice without consequence: every profile ties") {
  // c loses to d in round 1 whatever it does
  auto inst = testing::blank_instance(TournamentTree::balanced({0, 1, 2, 3}), 4);
  inst.matrix.set(2, 3, 0);
  inst.coalition = {2};
  auto best = oracle_best_profiles(inst);
  CHECK(best.size() == 2);
}

TEST_CASE("double throws are not profiles") {
  auto inst = testing::e1();
  inst.coalition = {2, 3};
  for (const auto& [p, v] : oracle_profile_values(inst)) CHECK_FALSE((p.at(2) == Action::Throw && p.at(3) == Action::Throw));
  CHECK(oracle_profile_values(inst).size() == 3);
}

TEST_CASE("non-adaptive play never beats adaptive play") {
  for (const auto& inst : testing::small_corpus()) CHECK(oracle_nonadaptive(inst) <= oracle_adaptive(inst));
}

TEST_CASE("stored adaptivity-gap witness") {
  std::ifstream f(testing::data_path("adaptivity_gap_witness.json"));
  REQUIRE(f.good());
  auto doc = nlohmann::json::parse(f);
  auto inst = parse_instance(doc["witness"].dump());
  auto adaptive = oracle_adaptive(inst), fixed = oracle_nonadaptive(inst);
  CHECK(fixed < adaptive);
  CHECK(to_string(adaptive) == doc["adaptive"].get<std::string>());
  CHECK(to_string(fixed) == doc["nonadaptive"].get<std::string>());
  CHECK(solve(inst).t_opt == adaptive);
}

TEST_CASE("size limits") {
  std::mt19937_64 rng(2);
  auto big = testing::random_instance(rng, 32, true, 3);
  CHECK_THROWS_AS(oracle_adaptive(big), Error);
  OracleLimits tight;
  tight.max_strategy_pairs = 1;
  auto inst = testing::e1();
  try {
    oracle_nonadaptive(inst, tight);
    FAIL("expected SizeLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeLimitExceeded);
  }
}

}  // TEST_SUITE
