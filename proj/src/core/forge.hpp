#pragma once

#include "core/model.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace koman {

struct Literal {
  unsigned variable = 0;  // 1-based
  bool negated = false;
  bool operator==(const Literal&) const = default;
};
using Clause3 = std::array<Literal, 3>;

struct QuantifierBlock {
  bool existential = true;
  std::vector<unsigned> variables;
  bool operator==(const QuantifierBlock&) const = default;
};

struct QbfFormula {
  std::vector<QuantifierBlock> blocks;
  std::vector<Clause3> clauses;
};

struct CnfFormula {
  unsigned variables = 0;
  std::vector<Clause3> clauses;
};

struct ColoredGraph {
  std::vector<std::string> colors;
  std::vector<std::string> vertices;
  std::vector<std::size_t> color_of;                         // per vertex
  std::vector<std::pair<std::size_t, std::size_t>> edges;    // vertex indices
};

// Variable or literal carried by a gadget player; clause players store the
// literal polarity in `truth` (true for a positive literal).
struct PlayerTag {
  unsigned variable = 0;
  bool truth = false;
};

struct FixedPair {
  PlayerId a;
  PlayerId b;
  Rational p;  // p(a, b)
};

// A gadget subtree over local player ids 0..size-1.
struct Fragment {
  std::string label;  // name prefix shared by the players
  TournamentTree tree;
  std::vector<std::string> names;
  std::vector<Role> roles;
  std::vector<PlayerTag> tags;
  std::vector<FixedPair> fixed;
  std::vector<PlayerId> slots;  // placeholder players, slot order

  std::size_t size() const { return names.size(); }
  PlayerId find(const std::string& name) const;
};

enum class GadgetKind : std::uint8_t { Existential, Universal, Clause, ClauseFirstRound, Selection, Randomize };

struct GadgetSpec {
  GadgetKind kind = GadgetKind::Existential;
  std::string label;                // name prefix
  unsigned variable = 1;            // Existential, Universal
  Clause3 clause{};                 // Clause, ClauseFirstRound
  std::vector<std::string> items;   // Selection
  std::size_t slots = 0;            // Randomize
};

Fragment build_gadget(const GadgetSpec& spec);

// Height-r2 fragment whose original games start in round r1+1.
Fragment enlarge(const Fragment& frag, unsigned r1, unsigned r2);

// Stand-alone instance: fixed pairs first, then dummies lose to everyone
// else, all other pairs 1/2. Coalition is the coalition-role players.
Instance fragment_instance(const Fragment& frag, const std::string& favorite, const Rational& threshold = Rational(1));

// Same-quantifier blocks merged, an existential block first, an odd block
// count, and every clause variable quantified.
QbfFormula normalize_qbf(const QbfFormula& f);

struct ForgeLimits {
  std::size_t max_players = std::size_t(1) << 18;
};

Instance qbf_to_instance(const QbfFormula& f, const ForgeLimits& limits = {});
Instance sat_to_first_round_instance(const CnfFormula& f, const ForgeLimits& limits = {});
Instance trim_to_generalized(const Instance& inst);
Instance mcc_to_instance(const ColoredGraph& g);

// Exhaustive evaluators; up to 20 variables or vertices.
bool eval_qbf(const QbfFormula& f);
bool eval_cnf(const CnfFormula& f);
bool find_multicolored_clique(const ColoredGraph& g);

// Text formats.
QbfFormula parse_qbf(const std::string& text);
CnfFormula parse_cnf(const std::string& text);
ColoredGraph parse_colored_graph(const std::string& text);
std::string format_qbf(const QbfFormula& f);

}  // namespace koman
