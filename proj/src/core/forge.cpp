#include "core/forge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

namespace koman {

PlayerId Fragment::find(const std::string& name) const {
  for (PlayerId p = 0; p < names.size(); ++p)
    if (names[p] == name || names[p] == label + "." + name) return p;
  throw Error(ErrorCode::BadParameter, "fragment has no player '" + name + "'");
}

namespace {

class FragmentBuilder {
 public:
  explicit FragmentBuilder(std::string label) { f_.label = std::move(label); }

  PlayerId add(const std::string& local, Role role, PlayerTag tag = {}) {
    f_.names.push_back(f_.label.empty() ? local : f_.label + "." + local);
    f_.roles.push_back(role);
    f_.tags.push_back(tag);
    return static_cast<PlayerId>(f_.names.size() - 1);
  }
  void fix(PlayerId a, PlayerId b, const Rational& p) { f_.fixed.push_back({a, b, p}); }
  Fragment& fragment() { return f_; }

 private:
  Fragment f_;
};

PlayerTag literal_tag(const Literal& l) { return {l.variable, !l.negated}; }

Fragment existential(const GadgetSpec& s) {
  FragmentBuilder b(s.label.empty() ? "x" + std::to_string(s.variable) : s.label);
  auto q = b.add("q", Role::Coalition);
  auto t = b.add("T", Role::Variable, {s.variable, true});
  auto f = b.add("F", Role::Variable, {s.variable, false});
  auto d = b.add("d", Role::Dummy);
  b.fix(q, t, 1);
  b.fix(f, d, 1);
  b.fix(t, f, 1);
  b.fix(f, q, 1);
  b.fragment().tree = TournamentTree::balanced({q, t, f, d});
  return std::move(b.fragment());
}

Fragment universal(const GadgetSpec& s) {
  FragmentBuilder b(s.label.empty() ? "y" + std::to_string(s.variable) : s.label);
  auto t = b.add("T", Role::Variable, {s.variable, true});
  auto f = b.add("F", Role::Variable, {s.variable, false});
  b.fix(t, f, half());
  b.fragment().tree = TournamentTree::balanced({t, f});
  return std::move(b.fragment());
}

Fragment clause(const GadgetSpec& s) {
  FragmentBuilder b(s.label.empty() ? "c" : s.label);
  auto q = b.add("q", Role::Coalition);
  auto c1 = b.add("l1", Role::Clause, literal_tag(s.clause[0]));
  auto c2 = b.add("l2", Role::Clause, literal_tag(s.clause[1]));
  auto c3 = b.add("l3", Role::Clause, literal_tag(s.clause[2]));
  auto d1 = b.add("d1", Role::Dummy);
  auto d2 = b.add("d2", Role::Dummy);
  auto d3 = b.add("d3", Role::Dummy);
  auto d4 = b.add("d4", Role::Dummy);
  b.fix(q, c1, 1);
  b.fix(c2, d1, 1);
  b.fix(c3, d2, 1);
  b.fix(d3, d4, 1);
  b.fix(c1, c2, 1);
  b.fix(q, c2, 1);
  b.fix(c3, d3, 1);
  b.fix(c1, c3, 1);
  b.fix(c2, c3, 1);
  b.fix(c3, q, 1);
  b.fragment().tree = TournamentTree::balanced({q, c1, c2, d1, c3, d2, d3, d4});
  return std::move(b.fragment());
}

Fragment clause_first_round(const GadgetSpec& s) {
  FragmentBuilder b(s.label.empty() ? "c" : s.label);
  PlayerId q[3], c[3];
  for (int i = 0; i < 3; ++i) {
    q[i] = b.add("q" + std::to_string(i + 1), Role::Coalition);
    c[i] = b.add("l" + std::to_string(i + 1), Role::Clause, literal_tag(s.clause[i]));
  }
  auto e = b.add("e", Role::Ensurance);
  auto d = b.add("d", Role::Dummy);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b.fix(q[i], c[j], i == j ? 1 : 0);
    b.fix(e, q[i], 1);
    b.fix(e, c[i], 0);
  }
  b.fix(e, d, 1);
  b.fragment().tree = TournamentTree::balanced({q[0], c[0], q[1], c[1], q[2], c[2], e, d});
  return std::move(b.fragment());
}

Fragment selection(const GadgetSpec& s) {
  if (s.items.empty()) throw Error(ErrorCode::BadParameter, "selection gadget needs at least one item");
  FragmentBuilder b(s.label.empty() ? "sel" : s.label);
  std::vector<PlayerId> items;
  for (const auto& name : s.items) items.push_back(b.add(name, Role::Item));
  auto c = b.add("q", Role::Coalition);
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < n; ++i) {
    b.fix(c, items[i], i + 1 < n ? 1 : 0);
    for (std::size_t j = i + 1; j < n; ++j) b.fix(items[i], items[j], 1);
  }
  TreeBuilder tb;
  NodeId u = tb.add_internal(tb.add_leaf(items[0]), tb.add_leaf(c));
  for (std::size_t i = 1; i < n; ++i) u = tb.add_internal(tb.add_leaf(items[i]), u);
  b.fragment().tree = tb.build(u);
  return std::move(b.fragment());
}

Fragment randomize(const GadgetSpec& s) {
  if (s.slots == 0) throw Error(ErrorCode::BadParameter, "randomize gadget needs at least one slot");
  FragmentBuilder b(s.label.empty() ? "rnd" : s.label);
  auto r = b.add("r", Role::Randomizer);
  std::vector<PlayerId> f;
  for (std::size_t i = 0; i < s.slots; ++i) f.push_back(b.add("f" + std::to_string(i + 1), Role::Slot));
  std::vector<PlayerId> dummies;
  TreeBuilder tb;
  NodeId u = tb.add_leaf(r);
  for (std::size_t i = 1; i <= s.slots; ++i) {
    NodeId sub = tb.add_leaf(f[i - 1]);
    for (std::size_t j = 1; j < i; ++j) {
      auto d = b.add("z" + std::to_string(dummies.size() + 1), Role::Dummy);
      dummies.push_back(d);
      sub = tb.add_internal(sub, tb.add_leaf(d));
    }
    u = tb.add_internal(u, sub);
  }
  for (std::size_t i = 0; i < s.slots; ++i) {
    b.fix(r, f[i], i + 1 < s.slots ? half() : Rational(0));
    for (std::size_t j = i + 1; j < s.slots; ++j) b.fix(f[i], f[j], 1);
  }
  for (std::size_t i = 0; i < dummies.size(); ++i)
    for (std::size_t j = i + 1; j < dummies.size(); ++j) b.fix(dummies[i], dummies[j], 1);
  b.fragment().tree = tb.build(u);
  b.fragment().slots = f;
  return std::move(b.fragment());
}

unsigned ceil_log2(std::size_t x) {
  unsigned l = 0;
  while ((std::size_t(1) << l) < x) ++l;
  return l;
}

// ------------------------------------------------------------------ assembly

using Rule = std::function<Rational(PlayerId, PlayerId)>;

class Assembly {
 public:
  PlayerId add_player(std::string name, Role role, PlayerTag tag = {}) {
    if (!used_.insert(name).second) throw std::logic_error("duplicate generated player name " + name);
    names_.push_back(std::move(name));
    roles_.push_back(role);
    tags_.push_back(tag);
    return static_cast<PlayerId>(names_.size() - 1);
  }

  // Local to global ids; slot placeholders map to kNone.
  std::vector<PlayerId> add_fragment(const Fragment& f) {
    std::vector<PlayerId> map(f.size(), kNone);
    std::vector<bool> slot(f.size(), false);
    for (auto s : f.slots) slot[s] = true;
    for (PlayerId p = 0; p < f.size(); ++p)
      if (!slot[p]) map[p] = add_player(f.names[p], f.roles[p], f.tags[p]);
    for (const auto& fp : f.fixed)
      if (map[fp.a] != kNone && map[fp.b] != kNone) fix(map[fp.a], map[fp.b], fp.p);
    return map;
  }

  void fix(PlayerId a, PlayerId b, const Rational& p) {
    if (a > b) {
      fixed_[{b, a}] = 1 - p;
      pinned_.insert(a);
      pinned_.insert(b);
    } else {
      fixed_[{a, b}] = p;
      pinned_.insert(a);
      pinned_.insert(b);
    }
  }

  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<PlayerTag>& tags() const { return tags_; }
  std::size_t size() const { return names_.size(); }

  // Dummies without fixed pairs share one group when `share_dummies`.
  Instance finish(TournamentTree tree, PlayerId favorite, const Rational& threshold, const Rule& rule, bool share_dummies) {
    const std::size_t n = names_.size();
    std::vector<std::uint32_t> group_of(n);
    std::vector<PlayerId> reps;
    std::uint32_t shared = kNone;
    for (PlayerId p = 0; p < n; ++p) {
      if (share_dummies && roles_[p] == Role::Dummy && !pinned_.count(p)) {
        if (shared == kNone) {
          shared = static_cast<std::uint32_t>(reps.size());
          reps.push_back(p);
        }
        group_of[p] = shared;
      } else {
        group_of[p] = static_cast<std::uint32_t>(reps.size());
        reps.push_back(p);
      }
    }
    ProbabilityMatrix m(std::move(group_of), reps.size());
    for (std::uint32_t g = 0; g < reps.size(); ++g)
      for (std::uint32_t h = g + 1; h < reps.size(); ++h) {
        PlayerId a = reps[g], b = reps[h];
        auto it = fixed_.find({std::min(a, b), std::max(a, b)});
        Rational v;
        if (it != fixed_.end())
          v = a < b ? it->second : 1 - it->second;
        else
          v = rule(a, b);
        m.set_group(g, h, v);
      }
    Instance inst;
    inst.players = names_;
    inst.tree = std::move(tree);
    inst.matrix = m.regrouped();
    for (PlayerId p = 0; p < n; ++p)
      if (roles_[p] == Role::Coalition) inst.coalition.push_back(p);
    inst.favorite = favorite;
    inst.threshold = threshold;
    inst.roles = roles_;
    return inst;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Role> roles_;
  std::vector<PlayerTag> tags_;
  std::unordered_set<std::string> used_;
  std::map<std::pair<PlayerId, PlayerId>, Rational> fixed_;  // p(min, max)
  std::set<PlayerId> pinned_;
};

// Relabelled copy of a fragment tree; slot leaves are replaced by grafted subtrees.
NodeId add_fragment_tree(TreeBuilder& b, const Fragment& f, const std::vector<PlayerId>& map,
                         const std::map<PlayerId, NodeId>& graft = {}) {
  const auto& tree = f.tree;
  std::vector<NodeId> made(tree.node_count());
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (n.player != kNone) {
      auto g = graft.find(n.player);
      made[i] = g != graft.end() ? g->second : b.add_leaf(map[n.player]);
    } else {
      made[i] = b.add_internal(made[n.left], made[n.right]);
    }
  }
  return made[0];
}

Rational dummy_rule(const std::vector<Role>& roles, PlayerId a, PlayerId b, const Rational& otherwise) {
  bool da = roles[a] == Role::Dummy, db = roles[b] == Role::Dummy;
  if (da && !db) return 0;
  if (db && !da) return 1;
  return otherwise;
}

// Win rule between players of different gadgets in the formula reductions.
Rational formula_rule(const std::vector<Role>& roles, const std::vector<PlayerTag>& tags, PlayerId a, PlayerId b) {
  bool da = roles[a] == Role::Dummy, db = roles[b] == Role::Dummy;
  if (da != db) return da ? 0 : 1;
  Role ra = roles[a], rb = roles[b];
  if (ra == Role::Clause && rb == Role::Variable)
    return tags[a].variable == tags[b].variable && tags[a].truth != tags[b].truth ? 1 : 0;
  if (ra == Role::Variable && rb == Role::Clause)
    return tags[a].variable == tags[b].variable && tags[a].truth != tags[b].truth ? 0 : 1;
  if (ra == Role::Favorite && rb == Role::Variable) return 1;
  if (ra == Role::Favorite && rb == Role::Clause) return 0;
  if (rb == Role::Favorite && ra == Role::Variable) return 0;
  if (rb == Role::Favorite && ra == Role::Clause) return 1;
  return half();
}

void check_size(std::size_t players, const ForgeLimits& limits) {
  if (players > limits.max_players)
    throw Error(ErrorCode::SizeLimitExceeded, "generated instance would have " + std::to_string(players) + " players, limit is " +
                                                   std::to_string(limits.max_players));
}

// Variables half and clauses half padded to n* each, then the favorite's half.
Instance formula_instance(Assembly& as, std::vector<PlayerId> vars, std::vector<PlayerId> clauses, std::size_t half_size) {
  std::size_t k = 0;
  while (vars.size() < half_size) vars.push_back(as.add_player("pad.v" + std::to_string(++k), Role::Dummy));
  k = 0;
  while (clauses.size() < half_size) clauses.push_back(as.add_player("pad.c" + std::to_string(++k), Role::Dummy));
  std::vector<PlayerId> seed = std::move(vars);
  seed.insert(seed.end(), clauses.begin(), clauses.end());
  PlayerId fav = as.add_player("e*", Role::Favorite);
  seed.push_back(fav);
  for (k = 1; k < 2 * half_size; ++k) seed.push_back(as.add_player("pad.e" + std::to_string(k), Role::Dummy));
  auto tree = TournamentTree::balanced(seed);
  const auto& roles = as.roles();
  const auto& tags = as.tags();
  return as.finish(std::move(tree), fav, Rational(1), [&](PlayerId a, PlayerId b) { return formula_rule(roles, tags, a, b); }, true);
}

void append_fragment(Assembly& as, const Fragment& f, std::vector<PlayerId>& seed) {
  auto map = as.add_fragment(f);
  for (auto p : f.tree.leaf_players()) seed.push_back(map[p]);
}

}  // namespace

Fragment build_gadget(const GadgetSpec& spec) {
  switch (spec.kind) {
    case GadgetKind::Existential: return existential(spec);
    case GadgetKind::Universal: return universal(spec);
    case GadgetKind::Clause: return clause(spec);
    case GadgetKind::ClauseFirstRound: return clause_first_round(spec);
    case GadgetKind::Selection: return selection(spec);
    case GadgetKind::Randomize: return randomize(spec);
  }
  throw Error(ErrorCode::BadParameter, "unknown gadget kind");
}

Fragment enlarge(const Fragment& frag, unsigned r1, unsigned r2) {
  if (!is_balanced(frag.tree)) throw Error(ErrorCode::BadParameter, "only balanced fragments can be enlarged");
  const unsigned t = frag.tree.height();
  if (r1 + t > r2) throw Error(ErrorCode::BadParameter, "enlarging needs r1 + height <= r2");
  if (r2 >= 30) throw Error(ErrorCode::SizeLimitExceeded, "enlarged fragment is too large");
  Fragment out = frag;
  std::size_t made = 0;
  auto dummy = [&] {
    out.names.push_back((out.label.empty() ? "" : out.label + ".") + "pad" + std::to_string(++made));
    out.roles.push_back(Role::Dummy);
    out.tags.push_back({});
    return static_cast<PlayerId>(out.names.size() - 1);
  };
  std::vector<PlayerId> seed;
  const std::size_t per = std::size_t(1) << r1;
  for (auto p : frag.tree.leaf_players()) {
    seed.push_back(p);
    for (std::size_t i = 1; i < per; ++i) seed.push_back(dummy());
  }
  const std::size_t tail = (std::size_t(1) << r2) - (std::size_t(1) << (r1 + t));
  for (std::size_t i = 0; i < tail; ++i) seed.push_back(dummy());
  out.tree = TournamentTree::balanced(seed);
  return out;
}

Instance fragment_instance(const Fragment& frag, const std::string& favorite, const Rational& threshold) {
  Assembly as;
  auto map = as.add_fragment(frag);
  // placeholders stay as ordinary players here
  for (auto s : frag.slots) map[s] = as.add_player(frag.names[s], frag.roles[s], frag.tags[s]);
  for (const auto& fp : frag.fixed)
    if (std::find(frag.slots.begin(), frag.slots.end(), fp.a) != frag.slots.end() ||
        std::find(frag.slots.begin(), frag.slots.end(), fp.b) != frag.slots.end())
      as.fix(map[fp.a], map[fp.b], fp.p);
  TreeBuilder b;
  auto tree = b.build(add_fragment_tree(b, frag, map));
  PlayerId fav = kNone;
  for (PlayerId p = 0; p < frag.size(); ++p)
    if (frag.names[p] == favorite || frag.names[p] == frag.label + "." + favorite) fav = map[p];
  if (fav == kNone) throw Error(ErrorCode::BadParameter, "fragment has no player '" + favorite + "'");
  const auto& roles = as.roles();
  return as.finish(std::move(tree), fav, threshold, [&](PlayerId a, PlayerId b) { return dummy_rule(roles, a, b, half()); }, true);
}

Instance qbf_to_instance(const QbfFormula& input, const ForgeLimits& limits) {
  auto f = normalize_qbf(input);
  const unsigned k = static_cast<unsigned>(f.blocks.size());
  std::size_t vars = 0;
  for (const auto& b : f.blocks) vars += b.variables.size();
  const unsigned gadget_height = 3 * k + 3;
  if (gadget_height >= 40) throw Error(ErrorCode::SizeLimitExceeded, "too many quantifier blocks");
  const std::size_t gadgets = std::max<std::size_t>(1, vars + f.clauses.size());
  const std::size_t gadget_size = std::size_t(1) << gadget_height;
  if (gadgets > limits.max_players / gadget_size) check_size(gadgets * gadget_size * 4, limits);
  const std::size_t half_size = std::size_t(1) << ceil_log2(gadgets * gadget_size);
  check_size(4 * half_size, limits);

  Assembly as;
  std::vector<PlayerId> var_seed, clause_seed;
  for (unsigned i = 1; i <= k; ++i)
    for (auto v : f.blocks[i - 1].variables) {
      GadgetSpec spec;
      spec.kind = f.blocks[i - 1].existential ? GadgetKind::Existential : GadgetKind::Universal;
      spec.variable = v;
      append_fragment(as, enlarge(build_gadget(spec), 3 * i - 3, gadget_height), var_seed);
    }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    GadgetSpec spec;
    spec.kind = GadgetKind::Clause;
    spec.clause = f.clauses[j];
    spec.label = "c" + std::to_string(j + 1);
    append_fragment(as, enlarge(build_gadget(spec), 3 * k, gadget_height), clause_seed);
  }
  return formula_instance(as, std::move(var_seed), std::move(clause_seed), half_size);
}

Instance sat_to_first_round_instance(const CnfFormula& f, const ForgeLimits& limits) {
  unsigned vars = f.variables;
  for (const auto& c : f.clauses)
    for (const auto& l : c) {
      if (l.variable == 0) throw Error(ErrorCode::BadParameter, "variables are numbered from 1");
      vars = std::max(vars, l.variable);
    }
  const std::size_t gadgets = std::max<std::size_t>(1, vars + f.clauses.size());
  if (gadgets > limits.max_players) check_size(gadgets * 32, limits);
  const std::size_t half_size = std::size_t(1) << ceil_log2(8 * gadgets);
  check_size(4 * half_size, limits);

  Assembly as;
  std::vector<PlayerId> var_seed, clause_seed;
  for (unsigned v = 1; v <= vars; ++v) {
    GadgetSpec spec;
    spec.kind = GadgetKind::Existential;
    spec.variable = v;
    append_fragment(as, enlarge(build_gadget(spec), 0, 3), var_seed);
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    GadgetSpec spec;
    spec.kind = GadgetKind::ClauseFirstRound;
    spec.clause = f.clauses[j];
    spec.label = "c" + std::to_string(j + 1);
    append_fragment(as, build_gadget(spec), clause_seed);
  }
  return formula_instance(as, std::move(var_seed), std::move(clause_seed), half_size);
}

Instance trim_to_generalized(const Instance& inst) {
  if (inst.roles.size() != inst.size())
    throw Error(ErrorCode::MissingRoleAnnotations, "trimming needs role annotations on every player");
  require_valid(inst);
  const auto& tree = inst.tree;
  auto is_dummy = [&](PlayerId p) { return inst.roles[p] == Role::Dummy; };
  std::vector<bool> keep(tree.node_count(), false);
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    keep[i] = n.player != kNone ? !is_dummy(n.player) : keep[n.left] || keep[n.right];
  }
  if (!keep[0]) throw Error(ErrorCode::BadParameter, "instance has no non-dummy player");
  if (is_dummy(inst.favorite)) throw Error(ErrorCode::BadParameter, "favorite is a dummy");

  std::vector<PlayerId> kept, remap(inst.size(), kNone);
  for (PlayerId p = 0; p < inst.size(); ++p)
    if (!is_dummy(p)) {
      remap[p] = static_cast<PlayerId>(kept.size());
      kept.push_back(p);
    }
  Instance out;
  for (auto p : kept) {
    out.players.push_back(inst.players[p]);
    out.roles.push_back(inst.roles[p]);
  }
  std::unordered_set<std::string> used(out.players.begin(), out.players.end());
  std::size_t counter = 0;
  auto new_dummy = [&] {
    std::string name;
    do name = "trim.d" + std::to_string(++counter);
    while (used.count(name));
    used.insert(name);
    out.players.push_back(name);
    out.roles.push_back(Role::Dummy);
    return static_cast<PlayerId>(out.players.size() - 1);
  };
  TreeBuilder b;
  std::vector<NodeId> made(tree.node_count(), kNone);
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    if (!keep[i]) continue;
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (n.player != kNone) {
      made[i] = b.add_leaf(remap[n.player]);
    } else if (keep[n.left] && keep[n.right]) {
      made[i] = b.add_internal(made[n.left], made[n.right]);
    } else if (keep[n.left]) {
      made[i] = b.add_internal(made[n.left], b.add_leaf(new_dummy()));
    } else {
      made[i] = b.add_internal(b.add_leaf(new_dummy()), made[n.right]);
    }
  }
  out.tree = b.build(made[0]);

  auto base = inst.matrix.restricted(kept);
  const std::size_t groups = base.group_count();
  std::vector<std::uint32_t> group_of(out.players.size());
  for (PlayerId p = 0; p < kept.size(); ++p) group_of[p] = base.group_of(p);
  for (PlayerId p = static_cast<PlayerId>(kept.size()); p < out.players.size(); ++p) group_of[p] = static_cast<std::uint32_t>(groups);
  ProbabilityMatrix m(std::move(group_of), groups + 1);
  for (std::uint32_t g = 0; g < groups; ++g) {
    for (std::uint32_t h = g + 1; h < groups; ++h) m.set_group(g, h, base.group_p(g, h));
    m.set_group(static_cast<std::uint32_t>(groups), g, 0);
  }
  out.matrix = m.regrouped();
  for (auto c : inst.coalition)
    if (remap[c] != kNone) out.coalition.push_back(remap[c]);
  out.favorite = remap[inst.favorite];
  out.threshold = inst.threshold;
  return out;
}

// ---------------------------------------------------------------- clique

namespace {

struct CliqueMeta {
  enum Kind : std::uint8_t { None, Vertex, Edge } kind = None;
  std::size_t color = kNone;             // vertices
  std::size_t vertex = kNone;            // vertices; kNone for padding
  std::size_t ci = kNone, cj = kNone;    // edge color pair; kNone for the neutral item
  std::size_t u = kNone, v = kNone;      // edge endpoints; kNone for void edges
  std::size_t randomizer = kNone;        // 0 or 1 for players inside a slot subtree
  std::size_t slot = kNone;
};

}  // namespace

Instance mcc_to_instance(const ColoredGraph& g) {
  const std::size_t k = g.colors.size();
  if (k < 2) throw Error(ErrorCode::BadParameter, "multicolored clique needs at least two colors");
  std::vector<std::vector<std::size_t>> classes(k);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) classes[g.color_of[v]].push_back(v);
  std::size_t n = 1;
  for (const auto& c : classes) n = std::max(n, c.size());
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> edges;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) edges[{i, j}];
  for (auto [u, v] : g.edges) {
    std::size_t cu = g.color_of[u], cv = g.color_of[v];
    if (cu == cv) throw Error(ErrorCode::BadParameter, "edge inside one color class");
    if (cu > cv) {
      std::swap(u, v);
      std::swap(cu, cv);
    }
    edges[{cu, cv}].emplace_back(u, v);
  }
  std::size_t m = 1;
  for (const auto& [_, list] : edges) m = std::max(m, list.size());

  Assembly as;
  std::vector<CliqueMeta> meta;
  auto track = [&](const std::vector<PlayerId>& map, const std::vector<CliqueMeta>& local) {
    for (std::size_t i = 0; i < map.size(); ++i)
      if (map[i] != kNone) {
        if (meta.size() <= map[i]) meta.resize(map[i] + 1);
        meta[map[i]] = local[i];
      }
  };

  struct Placed {
    Fragment frag;
    std::vector<PlayerId> map;
    std::vector<CliqueMeta> local;
  };
  const std::size_t pairs = k * (k - 1) / 2;
  const std::size_t slots1 = std::max(k, pairs), slots2 = std::max<std::size_t>(2, pairs);

  // vertex selection gadgets, then padding vertex items for T1's spare slots
  std::vector<Placed> t1_slots;
  for (std::size_t i = 0; i < k; ++i) {
    GadgetSpec spec;
    spec.kind = GadgetKind::Selection;
    spec.label = "V" + std::to_string(i + 1);
    std::vector<CliqueMeta> local;
    for (std::size_t j = 0; j < n; ++j) {
      CliqueMeta cm;
      cm.kind = CliqueMeta::Vertex;
      cm.color = i;
      if (j < classes[i].size()) {
        cm.vertex = classes[i][j];
        spec.items.push_back(g.vertices[classes[i][j]]);
      } else {
        spec.items.push_back("pad" + std::to_string(j - classes[i].size() + 1));
      }
      local.push_back(cm);
    }
    local.push_back({});  // coalition player
    Placed p{build_gadget(spec), {}, std::move(local)};
    t1_slots.push_back(std::move(p));
  }
  for (std::size_t s = k; s < slots1; ++s) {
    FragmentBuilder fb("V.spare" + std::to_string(s - k + 1));
    fb.add("item", Role::Item);
    fb.fragment().tree = TournamentTree::leaf(0);
    CliqueMeta cm;
    cm.kind = CliqueMeta::Vertex;
    t1_slots.push_back({std::move(fb.fragment()), {}, {cm}});
  }
  std::vector<Placed> t2_slots;
  for (const auto& [key, list] : edges) {
    auto [i, j] = key;
    GadgetSpec spec;
    spec.kind = GadgetKind::Selection;
    spec.label = "E" + std::to_string(i + 1) + "-" + std::to_string(j + 1);
    std::vector<CliqueMeta> local;
    for (std::size_t e = 0; e < m; ++e) {
      CliqueMeta cm;
      cm.kind = CliqueMeta::Edge;
      cm.ci = i;
      cm.cj = j;
      if (e < list.size()) {
        cm.u = list[e].first;
        cm.v = list[e].second;
        spec.items.push_back(g.vertices[cm.u] + "~" + g.vertices[cm.v]);
      } else {
        spec.items.push_back("void" + std::to_string(e - list.size() + 1));
      }
      local.push_back(cm);
    }
    local.push_back({});
    t2_slots.push_back({build_gadget(spec), {}, std::move(local)});
  }
  for (std::size_t s = pairs; s < slots2; ++s) {
    FragmentBuilder fb("E.spare" + std::to_string(s - pairs + 1));
    fb.add("item", Role::Item);
    fb.fragment().tree = TournamentTree::leaf(0);
    CliqueMeta cm;
    cm.kind = CliqueMeta::Edge;
    t2_slots.push_back({std::move(fb.fragment()), {}, {cm}});
  }

  TreeBuilder tb;
  std::vector<Fragment> randomizers;
  std::vector<std::vector<PlayerId>> rmaps;
  std::vector<NodeId> roots;
  std::vector<Placed>* slot_sets[2] = {&t1_slots, &t2_slots};
  for (std::size_t r = 0; r < 2; ++r) {
    GadgetSpec spec;
    spec.kind = GadgetKind::Randomize;
    spec.label = r == 0 ? "R1" : "R2";
    spec.slots = r == 0 ? slots1 : slots2;
    randomizers.push_back(build_gadget(spec));
    const auto& rf = randomizers.back();
    auto rmap = as.add_fragment(rf);
    track(rmap, std::vector<CliqueMeta>(rf.size()));
    std::map<PlayerId, NodeId> graft;
    auto& slots = *slot_sets[r];
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto& placed = slots[s];
      placed.map = as.add_fragment(placed.frag);
      for (auto& cm : placed.local) {
        cm.randomizer = r;
        cm.slot = s;
      }
      track(placed.map, placed.local);
      graft[rf.slots[s]] = add_fragment_tree(tb, placed.frag, placed.map);
    }
    roots.push_back(add_fragment_tree(tb, rf, rmap, graft));
    rmaps.push_back(std::move(rmap));
  }
  PlayerId fav = as.add_player("e*", Role::Favorite);
  meta.resize(as.size());
  auto tree = tb.build(tb.add_internal(tb.add_internal(roots[0], roots[1]), tb.add_leaf(fav)));

  // placeholder probabilities of a randomizer, by slot index (kNone: the randomizer player)
  auto placeholder = [&](std::size_t r, std::size_t sa, std::size_t sb) -> Rational {
    const auto& rf = randomizers[r];
    PlayerId la = sa == kNone ? rf.find("r") : rf.slots[sa];
    PlayerId lb = sb == kNone ? rf.find("r") : rf.slots[sb];
    for (const auto& fp : rf.fixed) {
      if (fp.a == la && fp.b == lb) return fp.p;
      if (fp.a == lb && fp.b == la) return 1 - fp.p;
    }
    throw std::logic_error("randomizer placeholder pair missing");
  };
  std::vector<PlayerId> randomizer_player = {rmaps[0][randomizers[0].find("r")], rmaps[1][randomizers[1].find("r")]};
  const auto& roles = as.roles();
  auto rule = [&](PlayerId a, PlayerId b) -> Rational {
    const auto &ma = meta[a], &mb = meta[b];
    // players inside a slot take the placeholder's probabilities
    if (ma.randomizer != kNone || mb.randomizer != kNone) {
      for (std::size_t r = 0; r < 2; ++r) {
        bool ia = ma.randomizer == r, ib = mb.randomizer == r;
        if (ia && ib && ma.slot != mb.slot) return placeholder(r, ma.slot, mb.slot);
        if (ia && b == randomizer_player[r]) return placeholder(r, ma.slot, kNone);
        if (ib && a == randomizer_player[r]) return placeholder(r, kNone, mb.slot);
      }
    }
    bool da = roles[a] == Role::Dummy, db = roles[b] == Role::Dummy;
    if (da != db) return da ? 0 : 1;
    auto vertex_beats_edge = [&](const CliqueMeta& vx, const CliqueMeta& ed) {
      bool involved = vx.color != kNone && (ed.ci == vx.color || ed.cj == vx.color);
      bool endpoint = vx.vertex != kNone && (ed.u == vx.vertex || ed.v == vx.vertex);
      return involved && !endpoint;
    };
    if (ma.kind == CliqueMeta::Vertex && mb.kind == CliqueMeta::Edge) return vertex_beats_edge(ma, mb) ? 1 : 0;
    if (ma.kind == CliqueMeta::Edge && mb.kind == CliqueMeta::Vertex) return vertex_beats_edge(mb, ma) ? 0 : 1;
    if (a == fav && mb.kind != CliqueMeta::None) return mb.kind == CliqueMeta::Edge ? 1 : 0;
    if (b == fav && ma.kind != CliqueMeta::None) return ma.kind == CliqueMeta::Edge ? 0 : 1;
    return a < b ? 1 : 0;
  };
  return as.finish(std::move(tree), fav, Rational(1), rule, false);
}

}  // namespace koman
