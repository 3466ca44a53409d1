#include "core/solver.hpp"

#include "core/knockout.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

// The table is indexed by the occupants of every depth-i vertex that can
// still matter, which is the full information available when the games below
// depth i are played. Vertices whose occupant is already certain are left out
// of the key, and interchangeable non-coalition players share one token.

namespace koman {

const char* mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::Full: return "full";
    case SolveMode::Reachable: return "reachable";
    case SolveMode::LowMemory: return "lowmem";
  }
  return "reachable";
}

namespace {

using Token = std::uint32_t;
using Key = std::vector<Token>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto t : k) h = (h ^ t) * 1099511628211ull;
    return h;
  }
};

using Table = std::unordered_map<Key, Rational, KeyHash>;

struct Outcome {
  Token token;
  Rational p;
  bool operator==(const Outcome&) const = default;
};

// One way a slot can resolve, with the actions that produce it.
struct Choice {
  Action a = Action::Play;
  Action b = Action::Play;
  std::vector<Outcome> outcomes;
};

// Source of a game participant: a tracked vertex of the lower level or a fixed token.
struct Ref {
  bool tracked = false;
  std::uint32_t value = 0;
};

struct Slot {
  bool fresh = false;  // leaf entering at this depth
  Token token = 0;     // fresh leaf token
  Ref left, right;
};

class Frontier {
 public:
  explicit Frontier(const Position& pos) : pos_(pos) {
    const auto& tree = pos.tree;
    const auto& m = pos.matrix;
    auto in_c = [&](PlayerId p) { return p < pos.coalition.size() && pos.coalition[p]; };

    // tokens
    token_of_.assign(m.size(), kNone);
    std::unordered_map<std::uint32_t, Token> by_group;
    for (NodeId id = 0; id < tree.node_count(); ++id) {
      PlayerId p = tree.node(id).player;
      if (p == kNone) continue;
      if (in_c(p) || p == pos.favorite) {
        token_of_[p] = new_token(p, in_c(p));
        continue;
      }
      auto [it, added] = by_group.emplace(m.group_of(p), 0);
      if (added) it->second = new_token(p, false);
      token_of_[p] = it->second;
    }
    if (pos.favorite < m.size()) fav_ = token_of_[pos.favorite];
    const std::size_t t = rep_.size();
    win_.classes = t;
    win_.p.resize(t * t);
    for (Token a = 0; a < t; ++a)
      for (Token b = 0; b < t; ++b) win_.p[std::size_t(a) * t + b] = a == b ? half() : m(rep_[a], rep_[b]);

    // which vertices can still be undecided
    const std::size_t nodes = tree.node_count();
    std::vector<bool> has_c(nodes, false);
    std::vector<ClassDist> dist(nodes);
    for (std::size_t i = nodes; i-- > 0;) {
      const auto& n = tree.node(static_cast<NodeId>(i));
      if (n.player != kNone) {
        has_c[i] = in_c(n.player);
        dist[i] = {{token_of_[n.player], Rational(1)}};
      } else {
        has_c[i] = has_c[n.left] || has_c[n.right];
        if (!has_c[i]) dist[i] = merge_game(dist[n.left], dist[n.right], win_);
      }
    }
    coalition_present_ = has_c[0];
    if (!coalition_present_) {
      for (const auto& [tok, w] : dist[0])
        if (tok == fav_) trivial_value_ = w;
      return;
    }
    tracked_.assign(nodes, false);
    fixed_.assign(nodes, kNone);
    for (std::size_t i = 0; i < nodes; ++i) {
      NodeId parent = tree.node(static_cast<NodeId>(i)).parent;
      tracked_[i] = (has_c[i] || dist[i].size() > 1) && (parent == kNone || tracked_[parent]);
      if (!tracked_[i]) fixed_[i] = dist[i][0].first;
    }
    height_ = tree.height();
    levels_.assign(height_ + 1, {});
    index_.assign(nodes, kNone);
    for (NodeId id = 0; id < nodes; ++id)
      if (tracked_[id]) {
        auto d = tree.node(id).depth;
        index_[id] = static_cast<std::uint32_t>(levels_[d].size());
        levels_[d].push_back(id);
      }
    slots_.assign(height_, {});
    for (unsigned d = 0; d < height_; ++d)
      for (auto u : levels_[d]) {
        const auto& n = tree.node(u);
        Slot s;
        if (n.player != kNone) {
          s.fresh = true;
          s.token = token_of_[n.player];
        } else {
          s.left = ref(n.left);
          s.right = ref(n.right);
        }
        slots_[d].push_back(s);
      }
    for (auto v : levels_[height_]) initial_.push_back(token_of_[tree.node(v).player]);
  }

  bool coalition_present() const { return coalition_present_; }
  const Rational& trivial_value() const { return trivial_value_; }
  unsigned height() const { return height_; }
  const Key& initial() const { return initial_; }
  Token favorite_token() const { return fav_; }
  bool coalition_token(Token t) const { return coalition_tok_[t]; }
  PlayerId rep(Token t) const { return rep_[t]; }

  Rational base(const Key& key) const { return key[0] == fav_ ? 1 : 0; }

  // Choices for every slot of level i-1, given the occupants at level i.
  std::vector<std::vector<Choice>> choices(unsigned i, const Key& key) const {
    std::vector<std::vector<Choice>> out;
    out.reserve(slots_[i - 1].size());
    for (const auto& s : slots_[i - 1]) {
      std::vector<Choice> cs;
      if (s.fresh) {
        cs.push_back({Action::Play, Action::Play, {{s.token, Rational(1)}}});
        out.push_back(std::move(cs));
        continue;
      }
      Token a = resolve(s.left, key), b = resolve(s.right, key);
      const Rational& p = win_(a, b);
      std::vector<Outcome> play;
      if (p != 0) play.push_back({a, p});
      if (p != 1) play.push_back({b, 1 - p});
      bool ca = coalition_tok_[a], cb = coalition_tok_[b];
      cs.push_back({Action::Play, Action::Play, play});
      if (ca && cb) {
        cs.push_back({Action::Play, Action::Throw, {{a, Rational(1)}}});
        cs.push_back({Action::Throw, Action::Play, {{b, Rational(1)}}});
      } else if (ca) {
        cs.push_back({Action::Throw, Action::Play, {{b, Rational(1)}}});
      } else if (cb) {
        cs.push_back({Action::Play, Action::Throw, {{a, Rational(1)}}});
      }
      out.push_back(std::move(cs));
    }
    return out;
  }

  // Participants of slot k at level i-1 (kNone for fresh slots).
  std::pair<Token, Token> participants(unsigned i, std::size_t k, const Key& key) const {
    const auto& s = slots_[i - 1][k];
    if (s.fresh) return {kNone, kNone};
    return {resolve(s.left, key), resolve(s.right, key)};
  }

  std::size_t level_size(unsigned i) const { return levels_[i].size(); }

  // Candidate tokens of each tracked vertex at level i (all players of its subtree).
  std::vector<std::vector<Token>> candidates(unsigned i) const {
    std::vector<std::vector<Token>> out;
    for (auto v : levels_[i]) {
      std::vector<Token> toks;
      for (NodeId id = v; id <= pos_.tree.subtree_end(v); ++id)
        if (pos_.tree.node(id).player != kNone) toks.push_back(token_of_[pos_.tree.node(id).player]);
      std::sort(toks.begin(), toks.end());
      toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
      out.push_back(std::move(toks));
    }
    return out;
  }

  std::vector<PlayerId> decode(const Key& key) const {
    std::vector<PlayerId> out;
    for (auto t : key) out.push_back(rep_[t]);
    return out;
  }

 private:
  Token new_token(PlayerId p, bool coalition) {
    rep_.push_back(p);
    coalition_tok_.push_back(coalition);
    return static_cast<Token>(rep_.size() - 1);
  }
  Ref ref(NodeId child) const {
    if (tracked_[child]) return {true, index_[child]};
    return {false, fixed_[child]};
  }
  static Token resolve(const Ref& r, const Key& key) { return r.tracked ? key[r.value] : r.value; }

  const Position& pos_;
  std::vector<Token> token_of_;
  std::vector<PlayerId> rep_;
  std::vector<bool> coalition_tok_;
  Token fav_ = kNone;
  ClassTable win_;
  bool coalition_present_ = false;
  Rational trivial_value_ = 0;
  std::vector<bool> tracked_;
  std::vector<Token> fixed_;
  unsigned height_ = 0;
  std::vector<std::vector<NodeId>> levels_;
  std::vector<std::uint32_t> index_;
  std::vector<std::vector<Slot>> slots_;
  Key initial_;
};

// Distinct choices per slot; identical outcome lists collapse.
std::vector<std::vector<const std::vector<Outcome>*>> distinct(const std::vector<std::vector<Choice>>& cs) {
  std::vector<std::vector<const std::vector<Outcome>*>> out(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k)
    for (const auto& c : cs[k]) {
      bool seen = false;
      for (auto* o : out[k])
        if (*o == c.outcomes) seen = true;
      if (!seen) out[k].push_back(&c.outcomes);
    }
  return out;
}

// Expected next value for one outcome list per slot.
template <class Lookup>
void expectation(const std::vector<const std::vector<Outcome>*>& chosen, std::size_t k, Key& next, const Rational& prob,
                 Lookup& lookup, Rational& total) {
  if (k == chosen.size()) {
    total += prob * lookup(next);
    return;
  }
  for (const auto& o : *chosen[k]) {
    next[k] = o.token;
    if (o.p == 1) {
      expectation(chosen, k + 1, next, prob, lookup, total);
    } else {
      Rational p = prob * o.p;
      expectation(chosen, k + 1, next, p, lookup, total);
    }
  }
}

// max over joint choices of the expectation under that choice
template <class Lookup>
Rational best_value(const std::vector<std::vector<Choice>>& cs, Lookup&& lookup) {
  auto options = distinct(cs);
  std::vector<std::size_t> idx(options.size(), 0);
  std::vector<const std::vector<Outcome>*> chosen(options.size());
  Key next(options.size());
  Rational best = 0;
  bool first = true;
  while (true) {
    for (std::size_t k = 0; k < options.size(); ++k) chosen[k] = options[k][idx[k]];
    Rational total = 0;
    expectation(chosen, 0, next, Rational(1), lookup, total);
    if (first || total > best) best = total;
    first = false;
    std::size_t k = options.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < options[k].size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  return best;
}

void check_limit(std::uint64_t count, const SolveOptions& options) {
  if (count > options.max_configurations)
    throw Error(ErrorCode::SizeLimitExceeded, "configuration count exceeds " + std::to_string(options.max_configurations));
}

// Keys reachable at level i-1 from `key` at level i under some joint choice.
void successors(const Frontier& f, unsigned i, const Key& key, std::unordered_set<Key, KeyHash>& into) {
  auto cs = f.choices(i, key);
  std::vector<std::vector<Token>> tokens(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    for (const auto& c : cs[k])
      for (const auto& o : c.outcomes) tokens[k].push_back(o.token);
    std::sort(tokens[k].begin(), tokens[k].end());
    tokens[k].erase(std::unique(tokens[k].begin(), tokens[k].end()), tokens[k].end());
  }
  std::vector<std::size_t> idx(cs.size(), 0);
  Key next(cs.size());
  while (true) {
    for (std::size_t k = 0; k < cs.size(); ++k) next[k] = tokens[k][idx[k]];
    into.insert(next);
    std::size_t k = cs.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < tokens[k].size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
}

struct Tables {
  std::vector<Table> m;  // m[i] for levels 0..height
  OptResult stats;
};

Tables build_tables(const Frontier& f, const SolveOptions& options, unsigned top) {
  Tables out;
  out.stats.mode = options.mode;
  out.m.assign(f.height() + 1, {});
  std::vector<std::vector<Key>> keys(f.height() + 1);

  if (options.mode == SolveMode::Full) {
    for (unsigned i = 0; i <= top; ++i) {
      auto cand = f.candidates(i);
      std::uint64_t count = 1;
      for (const auto& c : cand) {
        count *= c.size();
        check_limit(count, options);
      }
      std::vector<std::size_t> idx(cand.size(), 0);
      Key key(cand.size());
      while (true) {
        for (std::size_t k = 0; k < cand.size(); ++k) key[k] = cand[k][idx[k]];
        keys[i].push_back(key);
        std::size_t k = cand.size();
        bool done = true;
        while (k > 0) {
          --k;
          if (++idx[k] < cand[k].size()) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
        if (done) break;
      }
      out.stats.configurations += keys[i].size();
      check_limit(out.stats.configurations, options);
    }
  } else {
    std::unordered_set<Key, KeyHash> level{f.initial()};
    for (unsigned i = f.height();; --i) {
      if (i <= top) keys[i].assign(level.begin(), level.end());
      out.stats.configurations += level.size();
      check_limit(out.stats.configurations, options);
      if (i == 0) break;
      std::unordered_set<Key, KeyHash> up;
      for (const auto& key : level) successors(f, i, key, up);
      level.swap(up);
    }
    // a deterministic order keeps observer output stable
    for (auto& k : keys) std::sort(k.begin(), k.end());
  }

  for (unsigned i = 0; i <= top; ++i) {
    auto& table = out.m[i];
    table.reserve(keys[i].size());
    for (const auto& key : keys[i]) {
      Rational v;
      if (i == 0) {
        v = f.base(key);
      } else {
        const auto& below = out.m[i - 1];
        auto lookup = [&](const Key& next) -> const Rational& {
          auto it = below.find(next);
          if (it == below.end()) throw std::logic_error("successor configuration missing from the table");
          return it->second;
        };
        v = best_value(f.choices(i, key), lookup);
      }
      if (options.observe) options.observe(i, f.decode(key), v);
      table.emplace(key, std::move(v));
      ++out.stats.entries;
    }
  }
  for (const auto& t : out.m) out.stats.peak_live += t.size();
  return out;
}

struct LowMemory {
  const Frontier& f;
  const SolveOptions& options;
  OptResult stats;
  std::uint64_t live = 0;

  Rational value(unsigned i, const Key& key) {
    ++live;
    stats.peak_live = std::max(stats.peak_live, live);
    ++stats.configurations;
    Rational v;
    if (i == 0) {
      v = f.base(key);
    } else {
      auto lookup = [&](const Key& next) { return value(i - 1, next); };
      v = best_value(f.choices(i, key), lookup);
    }
    ++stats.entries;
    if (options.observe) options.observe(i, f.decode(key), v);
    --live;
    return v;
  }
};

}  // namespace

OptResult solve_position(const Position& pos, const SolveOptions& options) {
  Frontier f(pos);
  if (!f.coalition_present()) {
    OptResult r;
    r.t_opt = f.trivial_value();
    r.mode = options.mode;
    return r;
  }
  if (options.mode == SolveMode::LowMemory) {
    LowMemory lm{f, options, {}};
    lm.stats.mode = SolveMode::LowMemory;
    lm.stats.t_opt = lm.value(f.height(), f.initial());
    return lm.stats;
  }
  auto tables = build_tables(f, options, f.height());
  tables.stats.t_opt = tables.m[f.height()].at(f.initial());
  return tables.stats;
}

BestResponse best_response_position(const Position& pos) {
  Frontier f(pos);
  BestResponse br;
  if (!f.coalition_present()) {
    br.value = f.trivial_value();
    return br;
  }
  const unsigned h = f.height();
  SolveOptions options;
  auto tables = build_tables(f, options, h);
  br.value = tables.m[h].at(f.initial());

  // Round-1 games are the slots of level h-1 fed by two level-h vertices.
  auto cs = f.choices(h, f.initial());
  std::vector<std::pair<PlayerId, std::size_t>> players;  // (player, slot)
  for (std::size_t k = 0; k < cs.size(); ++k) {
    auto [a, b] = f.participants(h, k, f.initial());
    if (a == kNone) continue;
    if (f.coalition_token(a)) players.emplace_back(f.rep(a), k);
    if (f.coalition_token(b)) players.emplace_back(f.rep(b), k);
  }
  if (players.empty()) return br;
  std::sort(players.begin(), players.end());

  const auto& below = tables.m[h - 1];
  auto lookup = [&](const Key& next) -> const Rational& { return below.at(next); };
  bool found = false;
  const std::size_t total = std::size_t(1) << players.size();
  for (std::size_t mask = 0; mask < total && !found; ++mask) {
    StrategyProfile profile;
    for (std::size_t k = 0; k < players.size(); ++k)
      profile[players[k].first] = (mask >> (players.size() - 1 - k)) & 1 ? Action::Throw : Action::Play;
    std::vector<const std::vector<Outcome>*> chosen(cs.size());
    bool admissible = true;
    for (std::size_t k = 0; k < cs.size() && admissible; ++k) {
      auto [a, b] = f.participants(h, k, f.initial());
      Action act_a = Action::Play, act_b = Action::Play;
      if (a != kNone) {
        if (f.coalition_token(a)) act_a = profile[f.rep(a)];
        if (f.coalition_token(b)) act_b = profile[f.rep(b)];
      }
      if (act_a == Action::Throw && act_b == Action::Throw) {
        admissible = false;
        break;
      }
      for (const auto& c : cs[k])
        if (c.a == act_a && c.b == act_b) chosen[k] = &c.outcomes;
    }
    if (!admissible) continue;
    Key next(cs.size());
    Rational v = 0;
    expectation(chosen, 0, next, Rational(1), lookup, v);
    if (v == br.value) {
      br.profile = std::move(profile);
      found = true;
    }
  }
  if (!found) throw std::logic_error("no round-1 profile attains the table value");
  return br;
}

OptResult solve(const Instance& inst, SolveMode mode) {
  require_valid(inst);
  auto mask = inst.coalition_mask();
  Position pos{inst.tree, inst.matrix, mask, inst.favorite};
  SolveOptions options;
  options.mode = mode;
  return solve_position(pos, options);
}

OptResult solve_low_memory(const Instance& inst) { return solve(inst, SolveMode::LowMemory); }

bool decide(const Instance& inst) {
  if (inst.threshold == 0) {
    require_valid(inst);
    return true;
  }
  return solve(inst).t_opt >= inst.threshold;
}

BestResponse best_response(const Instance& inst) {
  require_valid(inst);
  auto mask = inst.coalition_mask();
  Position pos{inst.tree, inst.matrix, mask, inst.favorite};
  return best_response_position(pos);
}

}  // namespace koman
