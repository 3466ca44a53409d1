#include "core/oracle.hpp"
#include "core/skeleton.hpp"
#include "core/solver.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

using namespace koman;

namespace {

// c's round-2 choice should depend on a round-1 result elsewhere in the bracket.
Instance partial_information_instance() {
  // players: e* c X z1 z2 z3; tree (((c, X), (z1, (z2, z3))), e*)
  Instance inst;
  inst.players = {"e*", "c", "X", "z1", "z2", "z3"};
  auto leaf = TournamentTree::leaf;
  auto join = TournamentTree::join;
  inst.tree = join(join(join(leaf(1), leaf(2)), join(leaf(3), join(leaf(4), leaf(5)))), leaf(0));
  inst.matrix = ProbabilityMatrix(6);
  auto& m = inst.matrix;
  m.set(1, 2, 1);            // c beats X
  m.set(3, 4, 1);            // z1 beats z2
  m.set(5, 3, 1);            // z3 beats z1
  m.set(1, 5, 1);            // c beats z3
  m.set(3, 1, 1);            // z1 beats c
  m.set(2, 3, 1);            // X beats z1
  m.set(5, 2, 1);            // z3 beats X
  m.set(0, 2, 1);            // e* beats X
  m.set(3, 0, 1);            // z1 beats e*
  m.set(5, 0, 1);            // z3 beats e*
  inst.coalition = {1};
  inst.favorite = 0;
  inst.threshold = 1;
  return inst;
}

}  // namespace

TEST_SUITE("skeleton") {

TEST_CASE("skeleton of E1 is the path to c") {
  auto inst = testing::e1();
  auto sk = build_skeleton(inst.tree, inst.coalition);
  REQUIRE(sk.levels.size() == 3);
  CHECK(sk.deepest() == 2);
  CHECK(sk.levels[0] == std::vector<NodeId>{inst.tree.root()});
  CHECK(inst.tree.node(sk.levels[2][0]).player == 2);
  CHECK(build_skeleton(inst.tree, {}).empty());
}

TEST_CASE("configurations place occupants inside their vertices") {
  auto inst = testing::e1();
  auto sk = build_skeleton(inst.tree, inst.coalition);
  for (unsigned level = 0; level <= sk.deepest(); ++level) {
    auto configs = valid_configurations(sk, inst.tree, level);
    CHECK_FALSE(configs.empty());
    for (const auto& s : configs) {
      REQUIRE(s.occupants.size() == sk.levels[level].size());
      for (std::size_t k = 0; k < s.occupants.size(); ++k) {
        bool inside = false;
        NodeId v = sk.levels[level][k];
        for (NodeId id = v; id <= inst.tree.subtree_end(v); ++id)
          if (inst.tree.node(id).player == s.occupants[k]) inside = true;
        CHECK(inside);
      }
    }
  }
  CHECK(valid_configurations(sk, inst.tree, 1).size() == 2);
}

TEST_CASE("sibling configurations form a distribution") {
  for (const auto& inst : testing::small_corpus()) {
    if (inst.coalition.empty()) continue;
    auto sk = build_skeleton(inst.tree, inst.coalition);
    for (unsigned level = 1; level <= sk.deepest(); ++level) {
      Rational total = 0;
      for (const auto& [sib, p] : sibling_configurations(sk, inst.tree, inst.matrix, level)) {
        CHECK(p > 0);
        total += p;
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("E1 deepest level: c chooses who advances") {
  auto inst = testing::e1();
  auto sk = build_skeleton(inst.tree, inst.coalition);
  auto configs = valid_configurations(sk, inst.tree, 2);
  REQUIRE(configs.size() == 1);
  auto sibs = sibling_configurations(sk, inst.tree, inst.matrix, 2);
  REQUIRE(sibs.size() == 1);
  CHECK(sibs[0].first.occupants == std::vector<PlayerId>{3});
  auto profiles = strategy_profiles(sk, inst.tree, configs[0], sibs[0].first, inst.coalition_mask());
  REQUIRE(profiles.size() == 2);
  Configuration to_c{1, {2}}, to_b{1, {3}};
  for (const auto& prof : profiles) {
    bool throws = prof.count(2) && prof.at(2) == Action::Throw;
    CHECK(transition_probability(sk, inst.tree, configs[0], sibs[0].first, to_c, prof, inst.matrix) == (throws ? 0 : 1));
    CHECK(transition_probability(sk, inst.tree, configs[0], sibs[0].first, to_b, prof, inst.matrix) == (throws ? 1 : 0));
  }
}

TEST_CASE("effective probability under throws") {
  auto inst = testing::e1();
  StrategyProfile throw_c{{2, Action::Throw}};
  CHECK(effective_probability(2, 3, throw_c, inst.matrix) == 0);
  CHECK(effective_probability(3, 2, throw_c, inst.matrix) == 1);
  CHECK(effective_probability(2, 3, {}, inst.matrix) == 1);
  CHECK(effective_probability(0, 1, {}, inst.matrix) == Rational(1, 2));
}

TEST_CASE("transition probabilities sum to one") {
  for (const auto& inst : testing::small_corpus()) {
    if (inst.coalition.empty()) continue;
    auto sk = build_skeleton(inst.tree, inst.coalition);
    auto mask = inst.coalition_mask();
    for (unsigned level = 1; level <= sk.deepest(); ++level) {
      auto next = valid_configurations(sk, inst.tree, level - 1);
      auto configs = valid_configurations(sk, inst.tree, level);
      auto sibs = sibling_configurations(sk, inst.tree, inst.matrix, level);
      for (std::size_t i = 0; i < configs.size() && i < 3; ++i)
        for (std::size_t j = 0; j < sibs.size() && j < 3; ++j)
          for (const auto& prof : strategy_profiles(sk, inst.tree, configs[i], sibs[j].first, mask)) {
            Rational total = 0;
            for (const auto& n : next) total += transition_probability(sk, inst.tree, configs[i], sibs[j].first, n, prof, inst.matrix);
            CHECK(total == 1);
          }
    }
  }
}

TEST_CASE("level recursion never beats the adaptive optimum") {
  for (const auto& inst : testing::small_corpus()) {
    auto rec = skeleton_recursion_value(inst);
    CHECK(rec <= oracle_adaptive(inst));
  }
  CHECK(skeleton_recursion_value(testing::e1()) == Rational(1, 2));
}

TEST_CASE("level recursion loses information a live coalition member has") {
  auto inst = partial_information_instance();
  REQUIRE(validate_instance(inst).empty());
  CHECK(oracle_adaptive(inst) == 1);
  CHECK(solve(inst).t_opt == 1);
  CHECK(skeleton_recursion_value(inst) == Rational(1, 2));
}

}  // TEST_SUITE
