// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "core/cover.hpp"
#include "core/forge.hpp"
#include "core/instance_json.hpp"
#include "core/knockout.hpp"
#include "core/oracle.hpp"
#include "core/solver.hpp"
#include "support/corpus.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace koman;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(1);
  line << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "; " << secs << " s]";
  std::cout << line.str() << std::endl;
}

// Shared corpus for the equivalence, dominance and martingale checks.
const std::vector<Instance>& corpus() {
  static const std::vector<Instance> all = [] {
    auto c = testing::four_player_corpus();
    auto r = testing::random_corpus();
    c.insert(c.end(), r.begin(), r.end());
    return c;
  }();
  return all;
}

Clause3 make_clause(int a, int b, int c) {
  auto lit = [](int v) { return Literal{static_cast<unsigned>(v < 0 ? -v : v), v < 0}; };
  return {lit(a), lit(b), lit(c)};
}

// 8 full sign patterns over x1..x3 and 6 two-variable clauses with a repeated literal.
std::vector<Clause3> clause_pool() {
  std::vector<Clause3> pool;
  for (int s = 0; s < 8; ++s) pool.push_back(make_clause(s & 1 ? -1 : 1, s & 2 ? -2 : 2, s & 4 ? -3 : 3));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {-1, 3}, {2, -3}, {-1, -2}, {1, -3}, {-2, 3}})
    pool.push_back(make_clause(a, b, b));
  return pool;
}

std::vector<QbfFormula> sample_formulas() {
  auto pool = clause_pool();
  std::vector<QbfFormula> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      QbfFormula f;
      f.blocks = {{true, {1, 2, 3}}};
      f.clauses = {pool[i], pool[j]};
      out.push_back(f);
    }
  return out;
}

// Same matrices under an alternating prefix, so both answers occur.
std::vector<QbfFormula> alternating_samples() {
  std::vector<QbfFormula> out;
  for (auto f : sample_formulas()) {
    f.blocks = {{true, {1}}, {false, {2}}, {true, {3}}};
    out.push_back(f);
  }
  auto add = [&](std::vector<QuantifierBlock> blocks, std::vector<Clause3> clauses) {
    out.push_back(QbfFormula{std::move(blocks), std::move(clauses)});
  };
  add({{true, {1}}, {false, {2}}, {true, {3}}}, {make_clause(2, 2, 2)});
  add({{true, {1}}, {false, {2}}, {true, {3}}}, {make_clause(1, 2, 2), make_clause(-1, 2, 2)});
  add({{false, {1}}, {true, {2}}}, {make_clause(1, 2, 2), make_clause(1, -2, -2)});
  add({{true, {1}}, {false, {2}}, {true, {3}}},
      {make_clause(-2, 3, 3), make_clause(2, 3, 3), make_clause(-3, 1, 1), make_clause(-1, -3, -3)});
  return out;
}

std::vector<CnfFormula> unsatisfiable_cnfs() {
  return {CnfFormula{1, {make_clause(1, 1, 1), make_clause(-1, -1, -1)}},
          CnfFormula{2, {make_clause(1, 2, 2), make_clause(-1, 2, 2), make_clause(-2, -2, -2)}},
          CnfFormula{2, {make_clause(1, 2, 2), make_clause(-1, 2, 2), make_clause(1, -2, -2), make_clause(-1, -2, -2)}}};
}

QbfFormula alternating_formula() {
  QbfFormula f;
  f.blocks = {{true, {1}}, {false, {2}}, {true, {3}}};
  f.clauses = {make_clause(-2, 3, 3), make_clause(2, -3, -3)};
  return f;
}

Outcome oracle_equivalence() {
  std::size_t checked = 0, bad = 0;
  for (const auto& inst : corpus()) {
    auto o = oracle_adaptive(inst);
    bool same = solve(inst, SolveMode::Full).t_opt == o && solve(inst, SolveMode::Reachable).t_opt == o &&
                solve_low_memory(inst).t_opt == o;
    if (!same) ++bad;
    ++checked;
  }
  return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " instances agree"};
}

Outcome gadget_claims() {
  std::vector<std::string> broken;
  auto value = [](const Fragment& g, const std::string& fav) { return solve(fragment_instance(g, fav)).t_opt; };

  auto ex = build_gadget({GadgetKind::Existential, "", 1});
  if (value(ex, "T") != 1 || value(ex, "F") != 1) broken.push_back("existential");

  auto un = build_gadget({GadgetKind::Universal, "", 1});
  if (value(un, "T") != half() || value(un, "F") != half()) broken.push_back("universal");

  GadgetSpec cs{GadgetKind::Clause, "c"};
  cs.clause = make_clause(1, -2, 3);
  auto cl = build_gadget(cs);
  for (const char* l : {"l1", "l2", "l3"})
    if (value(cl, l) != 1) broken.push_back(std::string("clause ") + l);

  GadgetSpec fs{GadgetKind::ClauseFirstRound, "c"};
  fs.clause = make_clause(1, 2, -3);
  auto fr = build_gadget(fs);
  for (const char* l : {"l1", "l2", "l3", "e"}) {
    auto inst = fragment_instance(fr, l);
    auto br = best_response(inst);
    // the round-1 profile alone must settle the gadget
    if (br.value != 1 || testing::profile_then_honest(inst, br.profile) != 1) broken.push_back(std::string("first-round ") + l);
  }

  GadgetSpec ss{GadgetKind::Selection, "sel"};
  ss.items = {"i1", "i2", "i3", "i4", "i5"};
  auto sel = build_gadget(ss);
  for (const auto& it : ss.items)
    if (value(sel, it) != 1) broken.push_back("selection " + it);

  for (std::size_t len = 1; len <= 6; ++len) {
    GadgetSpec rs{GadgetKind::Randomize, "rnd"};
    rs.slots = len;
    auto inst = fragment_instance(build_gadget(rs), "r");
    auto reach = reach_distribution(inst.tree, inst.matrix);
    for (std::size_t i = 1; i <= len; ++i) {
      Rational expect(1, 1u << (i < len ? i : len - 1));
      auto id = inst.find("rnd.f" + std::to_string(i));
      if (!id || reach[*id] != expect) broken.push_back("randomize " + std::to_string(len) + "/" + std::to_string(i));
    }
  }
  std::string detail = broken.empty() ? "6 gadget kinds exact" : "broken:";
  for (const auto& b : broken) detail += " " + b;
  return {broken.empty(), detail};
}

Outcome sat_qbf_end_to_end() {
  std::size_t qbf_ok = 0, sat_ok = 0, n_qbf = 0, n_sat = 0, false_qbf = 0, unsat = 0;
  double slowest = 0;
  auto timed = [&](const QbfFormula& f) {
    auto start = std::chrono::steady_clock::now();
    bool got = decide(qbf_to_instance(f));
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return got;
  };
  auto check_sat = [&](const CnfFormula& cnf) {
    ++n_sat;
    bool truth = eval_cnf(cnf);
    if (!truth) ++unsat;
    if ((best_response(sat_to_first_round_instance(cnf)).value == 1) == truth) ++sat_ok;
  };
  for (const auto& f : sample_formulas()) {
    ++n_qbf;
    if (decide(qbf_to_instance(f)) == eval_qbf(f)) ++qbf_ok;
    check_sat(CnfFormula{3, f.clauses});
  }
  for (const auto& cnf : unsatisfiable_cnfs()) check_sat(cnf);
  auto alternating = alternating_samples();
  alternating.push_back(alternating_formula());
  for (const auto& f : alternating) {
    ++n_qbf;
    bool truth = eval_qbf(f);
    if (!truth) ++false_qbf;
    if (timed(f) == truth) ++qbf_ok;
  }
  std::ostringstream d;
  d << "QBF " << qbf_ok << "/" << n_qbf << " (" << false_qbf << " false), SAT first-round " << sat_ok << "/" << n_sat
    << " (" << unsat << " unsatisfiable), " << qbf_to_instance(alternating_formula()).size()
    << " players per k=3 instance, slowest " << std::fixed;
  d.precision(2);
  d << slowest << " s";
  return {qbf_ok == n_qbf && sat_ok == n_sat && false_qbf > 0 && unsat > 0 && slowest < 60, d.str()};
}

Outcome trimming() {
  std::size_t n = 0, kept = 0, shrunk = 0;
  double worst = 0;
  auto formulas = sample_formulas();
  formulas.push_back(alternating_formula());
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    auto inst = qbf_to_instance(formulas[i]);
    auto trimmed = trim_to_generalized(inst);
    ++n;
    if (decide(trimmed) == decide(inst)) ++kept;
    bool k1 = i + 1 < formulas.size();
    double ratio = 1.0 - double(trimmed.tree.leaf_count()) / double(inst.tree.leaf_count());
    if (k1) {
      worst = n == 1 ? ratio : std::min(worst, ratio);
      if (ratio >= 0.5) ++shrunk;
    }
  }
  std::ostringstream d;
  d << "decide kept on " << kept << "/" << n << ", smallest leaf reduction on k=1 samples " << std::fixed;
  d.precision(1);
  d << 100 * worst << "%";
  return {kept == n && shrunk + 1 == n, d.str()};
}

ColoredGraph colored_graph(std::size_t colors, std::size_t per, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  ColoredGraph g;
  for (std::size_t c = 0; c < colors; ++c) {
    g.colors.push_back("k" + std::to_string(c + 1));
    for (std::size_t v = 0; v < per; ++v) {
      g.vertices.push_back("v" + std::to_string(c + 1) + std::to_string(v + 1));
      g.color_of.push_back(c);
    }
  }
  g.edges = edges;
  return g;
}

Outcome multicolored_clique() {
  std::vector<ColoredGraph> graphs;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (unsigned k = 0; k < 4; ++k)
      if ((mask >> k) & 1) edges.emplace_back(k / 2, 2 + k % 2);
    graphs.push_back(colored_graph(2, 2, edges));
  }
  std::mt19937_64 rng(3003);
  for (int i = 0; i < 5; ++i) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t u = 0; u < 9; ++u)
      for (std::size_t v = u + 1; v < 9; ++v)
        if (u / 3 != v / 3 && std::bernoulli_distribution(0.3)(rng)) edges.emplace_back(u, v);
    graphs.push_back(colored_graph(3, 3, edges));
  }
  std::size_t agree = 0, covers = 0, yes = 0;
  for (const auto& g : graphs) {
    auto inst = mcc_to_instance(g);
    bool clique = find_multicolored_clique(g);
    yes += clique;
    if (decide(inst) == clique) ++agree;
    if (minimum_random_game_cover(inst).size() == 2) ++covers;
  }
  std::ostringstream d;
  d << "decide matches on " << agree << "/" << graphs.size() << " (" << yes << " with a clique), cover size 2 on " << covers
    << "/" << graphs.size();
  return {agree == graphs.size() && covers == graphs.size(), d.str()};
}

std::size_t exhaustive_cover_size(const ConflictGraph& g) {
  std::size_t best = g.vertices;
  for (std::size_t mask = 0; mask < (std::size_t(1) << g.vertices); ++mask) {
    bool ok = true;
    for (auto [a, b] : g.edges)
      if (!((mask >> a) & 1) && !((mask >> b) & 1)) ok = false;
    if (ok) best = std::min<std::size_t>(best, __builtin_popcountll(mask));
  }
  return best;
}

Outcome cover_correctness() {
  std::mt19937_64 rng(100);
  std::size_t ok = 0;
  for (int i = 0; i < 100; ++i) {
    auto inst = testing::random_instance(rng, 2 + i % 11, i % 2 == 0, 2);
    auto g = conflict_graph(inst);
    auto cover = minimum_vertex_cover(g);
    if (cover.size() == exhaustive_cover_size(g) && is_random_game_cover(inst, cover)) ++ok;
  }
  return {ok == 100, std::to_string(ok) + "/100 minimum"};
}

Outcome adaptivity_dominance() {
  std::size_t ok = 0, strict = 0;
  for (const auto& inst : corpus()) {
    auto a = oracle_adaptive(inst), f = oracle_nonadaptive(inst);
    if (f <= a) ++ok;
    if (f < a) ++strict;
  }
  std::ifstream file(testing::data_path("adaptivity_gap_witness.json"));
  auto doc = nlohmann::json::parse(file);
  auto witness = parse_instance(doc["witness"].dump());
  auto a = oracle_adaptive(witness), f = oracle_nonadaptive(witness);
  bool witness_ok = f < a && to_string(a) == doc["adaptive"] && to_string(f) == doc["nonadaptive"];
  std::ostringstream d;
  d << "dominance on " << ok << "/" << corpus().size() << " (" << strict << " strict); witness gap " << to_string(f) << " < "
    << to_string(a);
  return {ok == corpus().size() && witness_ok, d.str()};
}

Outcome monte_carlo() {
  std::vector<Instance> cases{testing::e1()};
  const auto& random = testing::random_corpus();
  for (std::size_t i = 0; i < random.size() && cases.size() < 11; i += 19) cases.push_back(random[i]);
  std::size_t within = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    double t = solve(cases[i]).t_opt.get_d();
    auto est = monte_carlo_win_estimate(cases[i], 100000, 1000 + i);
    if (std::abs(est.estimate - t) <= 3 * est.standard_error) ++within;
  }
  return {within >= 9, std::to_string(within) + "/" + std::to_string(cases.size()) + " within 3 standard errors"};
}

Outcome martingale() {
  std::size_t ok = 0;
  for (const auto& inst : corpus()) {
    auto br = best_response(inst);
    if (testing::next_round_expectation(inst, br.profile) == br.value && br.value == solve(inst).t_opt) ++ok;
  }
  return {ok == corpus().size(), std::to_string(ok) + "/" + std::to_string(corpus().size()) + " exact"};
}

}  // namespace

int main() {
  report("Oracle equivalence: FULL = REACHABLE = low-memory = adaptive oracle", oracle_equivalence);
  report("Gadget claims", gadget_claims);
  report("SAT/QBF end-to-end", sat_qbf_end_to_end);
  report("Trimming to generalized trees", trimming);
  report("Multicolored clique end-to-end", multicolored_clique);
  report("Cover correctness", cover_correctness);
  report("Adaptivity dominance", adaptivity_dominance);
  report("Monte Carlo consistency", monte_carlo);
  report("Martingale identity", martingale);
  std::cout << (failures == 0 ? "all acceptance criteria met" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
