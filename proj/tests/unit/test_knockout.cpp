#include "core/knockout.hpp"
#include "core/solver.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <cmath>

using namespace koman;

TEST_SUITE("knockout") {

TEST_CASE("first-round pairings of E1") {
  auto inst = testing::e1();
  auto games = current_pairings(inst.tree);
  REQUIRE(games.size() == 2);
  CHECK(inst.players[games[0].a] == "e*");
  CHECK(inst.players[games[0].b] == "a");
  CHECK(inst.players[games[1].a] == "c");
  CHECK(inst.players[games[1].b] == "b");
}

TEST_CASE("only the deepest games are played") {
  // ((0, (1, 2)), 3): only 1 vs 2 is open
  auto t = TournamentTree::join(TournamentTree::join(TournamentTree::leaf(0), TournamentTree::balanced({1, 2})),
                                TournamentTree::leaf(3));
  auto games = current_pairings(t);
  REQUIRE(games.size() == 1);
  CHECK(games[0].a == 1);
  CHECK(games[0].b == 2);
  auto next = advance_round(t, std::vector<PlayerId>{2});
  CHECK(next.leaf_players() == std::vector<PlayerId>{0, 2, 3});
  CHECK(next.height() == 2);
  CHECK(current_pairings(next).size() == 1);
}

TEST_CASE("advancing checks the declared winners") {
  auto inst = testing::e1();
  auto next = advance_round(inst.tree, std::vector<PlayerId>{1, 3});
  CHECK(next.leaf_players() == std::vector<PlayerId>{1, 3});
  CHECK(next.height() == 1);

  try {
    advance_round(inst.tree, std::vector<PlayerId>{1});
    FAIL("expected IncompleteRound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteRound);
  }
  try {
    advance_round(inst.tree, std::vector<PlayerId>{2, 3});
    FAIL("expected UnknownWinner");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownWinner);
  }
  try {
    advance_round(inst.tree, std::map<std::size_t, PlayerId>{{0, 0}});
    FAIL("expected IncompleteRound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteRound);
  }
}

TEST_CASE("round state tracks eliminations") {
  auto inst = testing::e1();
  RoundState s{inst.tree, 1, {}};
  auto n = advance_state(s, {1, 3});
  CHECK(n.round == 2);
  CHECK(n.eliminated == std::vector<PlayerId>{0, 2});
  auto f = advance_state(n, {3});
  CHECK(f.round == 3);
  CHECK(f.tree.height() == 0);
  CHECK(f.eliminated == std::vector<PlayerId>{0, 1, 2});
}

TEST_CASE("honest reach of E1") {
  auto inst = testing::e1();
  auto reach = reach_distribution(inst.tree, inst.matrix);
  // e* must beat a (1/2) and then c, who beat b surely (1/4)
  CHECK(reach[0] == Rational(1, 8));
  Rational total = 0;
  for (auto& [p, r] : reach) total += r;
  CHECK(total == 1);
}

TEST_CASE("honest reach is a distribution on random instances") {
  for (const auto& inst : testing::small_corpus()) {
    auto reach = reach_distribution(inst.tree, inst.matrix);
    Rational total = 0;
    for (auto& [p, r] : reach) {
      CHECK(r > 0);
      CHECK(r <= 1);
      total += r;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("Monte Carlo estimate of E1 is within three standard errors") {
  auto inst = testing::e1();
  auto est = monte_carlo_win_estimate(inst, 100000, 12345);
  CHECK(est.standard_error > 0);
  CHECK(std::abs(est.estimate - 0.5) <= 3 * est.standard_error);
  auto again = monte_carlo_win_estimate(inst, 100000, 12345);
  CHECK(again.estimate == est.estimate);
  CHECK_THROWS_AS(monte_carlo_win_estimate(inst, 0, 1), Error);
}

TEST_CASE("Monte Carlo on a sure thing") {
  auto inst = testing::e1();
  inst.matrix.set(0, 1, Rational(1));
  auto est = monte_carlo_win_estimate(inst, 1000, 3);
  CHECK(to_string(solve(inst).t_opt) == "1");
  CHECK(est.estimate == 1.0);
  CHECK(est.standard_error == 0.0);
}

}  // TEST_SUITE
