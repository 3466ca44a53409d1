#include "core/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace koman {

namespace {
const Rational kHalf(1, 2);
const Rational kZero(0);
}  // namespace

const char* role_name(Role role) {
  switch (role) {
    case Role::Other: return "other";
    case Role::Coalition: return "coalition";
    case Role::Variable: return "variable";
    case Role::Clause: return "clause";
    case Role::Dummy: return "dummy";
    case Role::Ensurance: return "ensurance";
    case Role::Randomizer: return "randomizer";
    case Role::Slot: return "slot";
    case Role::Item: return "item";
    case Role::Favorite: return "favorite";
  }
  return "other";
}

std::optional<Role> role_from_name(std::string_view name) {
  for (Role r : {Role::Other, Role::Coalition, Role::Variable, Role::Clause, Role::Dummy, Role::Ensurance, Role::Randomizer,
                 Role::Slot, Role::Item, Role::Favorite})
    if (name == role_name(r)) return r;
  return std::nullopt;
}

// ---------------------------------------------------------------- matrix

ProbabilityMatrix::ProbabilityMatrix(std::size_t n) : group_of_(n), group_sizes_(n, 1), groups_(n), table_(n * n, kHalf) {
  std::iota(group_of_.begin(), group_of_.end(), 0u);
}

ProbabilityMatrix::ProbabilityMatrix(std::vector<std::uint32_t> group_of, std::size_t group_count)
    : group_of_(std::move(group_of)), group_sizes_(group_count, 0), groups_(group_count), table_(group_count * group_count, kHalf) {
  for (auto g : group_of_) {
    if (g >= groups_) throw Error(ErrorCode::BadParameter, "group id out of range");
    ++group_sizes_[g];
  }
}

const Rational& ProbabilityMatrix::operator()(PlayerId a, PlayerId b) const {
  if (a == b) return kZero;
  auto g = group_of_[a], h = group_of_[b];
  if (g == h) return kHalf;
  return table_[std::size_t(g) * groups_ + h];
}

void ProbabilityMatrix::set(PlayerId a, PlayerId b, const Rational& v) {
  auto g = group_of_[a], h = group_of_[b];
  if (g == h || group_sizes_[g] != 1 || group_sizes_[h] != 1)
    throw Error(ErrorCode::BadParameter, "per-player entry on a shared group");
  set_group(g, h, v);
}

void ProbabilityMatrix::set_one_way(PlayerId a, PlayerId b, const Rational& v) {
  auto g = group_of_[a], h = group_of_[b];
  if (g == h || group_sizes_[g] != 1 || group_sizes_[h] != 1)
    throw Error(ErrorCode::BadParameter, "per-player entry on a shared group");
  table_[std::size_t(g) * groups_ + h] = v;
}

void ProbabilityMatrix::set_group(std::uint32_t g, std::uint32_t h, const Rational& v) {
  if (g == h) throw Error(ErrorCode::BadParameter, "group against itself is fixed at 1/2");
  table_[std::size_t(g) * groups_ + h] = v;
  table_[std::size_t(h) * groups_ + g] = 1 - v;
}

ProbabilityMatrix ProbabilityMatrix::regrouped() const {
  // Group rows with the self entry read as 1/2; equal rows are interchangeable.
  auto row_equal = [&](std::uint32_t g, std::uint32_t h) {
    for (std::uint32_t x = 0; x < groups_; ++x) {
      const Rational& a = x == g ? kHalf : group_p(g, x);
      const Rational& b = x == h ? kHalf : group_p(h, x);
      if (a != b) return false;
    }
    return true;
  };
  auto row_hash = [&](std::uint32_t g) {
    std::size_t s = 1469598103934665603ull;
    for (std::uint32_t x = 0; x < groups_; ++x) {
      const Rational& a = x == g ? kHalf : group_p(g, x);
      s ^= mpz_get_ui(a.get_num_mpz_t()) * 1000003u + mpz_get_ui(a.get_den_mpz_t());
      s *= 1099511628211ull;
    }
    return s;
  };
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> buckets;
  std::vector<std::uint32_t> merged(groups_, kNone);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> reps;
  for (std::uint32_t g = 0; g < groups_; ++g) {
    auto& bucket = buckets[row_hash(g)];
    for (auto r : bucket)
      if (row_equal(r, g)) {
        merged[g] = merged[r];
        break;
      }
    if (merged[g] == kNone) {
      merged[g] = next++;
      reps.push_back(g);
      bucket.push_back(g);
    }
  }
  std::vector<std::uint32_t> group_of(size());
  for (std::size_t p = 0; p < size(); ++p) group_of[p] = merged[group_of_[p]];
  ProbabilityMatrix out(std::move(group_of), next);
  for (std::uint32_t a = 0; a < next; ++a)
    for (std::uint32_t b = 0; b < next; ++b)
      if (a != b) out.table_[std::size_t(a) * next + b] = group_p(reps[a], reps[b]);
  return out;
}

ProbabilityMatrix ProbabilityMatrix::restricted(const std::vector<PlayerId>& keep) const {
  std::vector<std::uint32_t> remap(groups_, kNone);
  std::vector<std::uint32_t> reps;
  std::vector<std::uint32_t> group_of(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto g = group_of_[keep[i]];
    if (remap[g] == kNone) {
      remap[g] = static_cast<std::uint32_t>(reps.size());
      reps.push_back(g);
    }
    group_of[i] = remap[g];
  }
  ProbabilityMatrix out(std::move(group_of), reps.size());
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (a != b) out.table_[a * reps.size() + b] = group_p(reps[a], reps[b]);
  return out;
}

bool ProbabilityMatrix::operator==(const ProbabilityMatrix& other) const {
  if (size() != other.size()) return false;
  // Compare over the common refinement of both groupings.
  std::map<std::pair<std::uint32_t, std::uint32_t>, PlayerId> joint;
  std::vector<PlayerId> reps;
  for (PlayerId p = 0; p < size(); ++p)
    if (joint.emplace(std::pair{group_of_[p], other.group_of_[p]}, p).second) reps.push_back(p);
  for (PlayerId a : reps)
    for (PlayerId b : reps)
      if (a != b && (*this)(a, b) != other(a, b)) return false;
  return true;
}

// ---------------------------------------------------------------- tree

TournamentTree TournamentTree::leaf(PlayerId p) {
  TreeBuilder b;
  return b.build(b.add_leaf(p));
}

TournamentTree TournamentTree::join(const TournamentTree& left, const TournamentTree& right) {
  TreeBuilder b;
  std::vector<PlayerId> identity;
  auto l = b.add_tree(left, identity);
  auto r = b.add_tree(right, identity);
  return b.build(b.add_internal(l, r));
}

TournamentTree TournamentTree::balanced(const std::vector<PlayerId>& seeding) {
  if (seeding.empty() || (seeding.size() & (seeding.size() - 1)) != 0)
    throw Error(ErrorCode::BadParameter, "balanced tree needs a power-of-two number of leaves");
  TreeBuilder b;
  std::vector<NodeId> layer;
  for (auto p : seeding) layer.push_back(b.add_leaf(p));
  while (layer.size() > 1) {
    std::vector<NodeId> up;
    for (std::size_t i = 0; i < layer.size(); i += 2) up.push_back(b.add_internal(layer[i], layer[i + 1]));
    layer.swap(up);
  }
  return b.build(layer[0]);
}

NodeId TournamentTree::sibling(NodeId id) const {
  auto parent = nodes_[id].parent;
  if (parent == kNone) return kNone;
  return nodes_[parent].left == id ? nodes_[parent].right : nodes_[parent].left;
}

std::size_t TournamentTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.player != kNone; }));
}

std::vector<PlayerId> TournamentTree::leaf_players() const {
  std::vector<PlayerId> out;
  for (const auto& n : nodes_)
    if (n.player != kNone) out.push_back(n.player);
  return out;
}

TournamentTree TournamentTree::mirrored() const {
  TreeBuilder b;
  std::vector<NodeId> made(nodes_.size());
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const auto& n = nodes_[i];
    if (n.player != kNone)
      made[i] = b.add_leaf(n.player);
    else
      made[i] = b.add_internal(n.right == kNone ? made[n.left] : made[n.right], n.right == kNone ? kNone : made[n.left]);
  }
  return b.build(made[0]);
}

NodeId TreeBuilder::add_leaf(PlayerId p) {
  raw_.push_back({kNone, kNone, p});
  return static_cast<NodeId>(raw_.size() - 1);
}

NodeId TreeBuilder::add_internal(NodeId left, NodeId right) {
  raw_.push_back({left, right, kNone});
  return static_cast<NodeId>(raw_.size() - 1);
}

NodeId TreeBuilder::add_tree(const TournamentTree& tree, const std::vector<PlayerId>& relabel) {
  std::vector<NodeId> made(tree.node_count());
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (n.player != kNone)
      made[i] = add_leaf(relabel.empty() ? n.player : relabel[n.player]);
    else
      made[i] = add_internal(made[n.left], n.right == kNone ? kNone : made[n.right]);
  }
  return made[0];
}

TournamentTree TreeBuilder::build(NodeId root) const {
  TournamentTree t;
  t.nodes_.reserve(raw_.size());
  // Iterative preorder: (raw id, parent new id, depth)
  struct Item {
    NodeId raw, parent;
    std::uint32_t depth;
    bool is_right;
  };
  std::vector<Item> stack{{root, kNone, 0, false}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    auto id = static_cast<NodeId>(t.nodes_.size());
    TournamentTree::Node n;
    n.parent = it.parent;
    n.depth = it.depth;
    n.player = raw_[it.raw].player;
    t.nodes_.push_back(n);
    if (it.parent != kNone) {
      if (it.is_right)
        t.nodes_[it.parent].right = id;
      else
        t.nodes_[it.parent].left = id;
    }
    t.height_ = std::max(t.height_, it.depth);
    const auto& r = raw_[it.raw];
    if (r.player == kNone) {
      if (r.right != kNone) stack.push_back({r.right, id, it.depth + 1, true});
      if (r.left != kNone) stack.push_back({r.left, id, it.depth + 1, false});
    }
  }
  t.subtree_end_.resize(t.nodes_.size());
  for (std::size_t i = t.nodes_.size(); i-- > 0;) {
    const auto& n = t.nodes_[i];
    NodeId end = static_cast<NodeId>(i);
    if (n.right != kNone) end = t.subtree_end_[n.right];
    else if (n.left != kNone) end = t.subtree_end_[n.left];
    t.subtree_end_[i] = end;
  }
  return t;
}

// ---------------------------------------------------------------- instance

bool Instance::in_coalition(PlayerId p) const { return std::binary_search(coalition.begin(), coalition.end(), p); }

std::optional<PlayerId> Instance::find(std::string_view name) const {
  for (std::size_t i = 0; i < players.size(); ++i)
    if (players[i] == name) return static_cast<PlayerId>(i);
  return std::nullopt;
}

std::vector<bool> Instance::coalition_mask() const {
  std::vector<bool> mask(players.size(), false);
  for (auto c : coalition)
    if (c < mask.size()) mask[c] = true;
  return mask;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.players == b.players && a.tree == b.tree && a.matrix == b.matrix && a.coalition == b.coalition &&
         a.favorite == b.favorite && a.threshold == b.threshold && a.roles == b.roles;
}

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::Complementarity: return "Complementarity";
    case Violation::LeafBijection: return "LeafBijection";
    case Violation::CoalitionMembership: return "CoalitionMembership";
    case Violation::FavoriteMembership: return "FavoriteMembership";
    case Violation::ThresholdRange: return "ThresholdRange";
    case Violation::TreeArity: return "TreeArity";
  }
  return "Unknown";
}

namespace {
std::string report_summary(const ValidationReport& report) {
  std::string s = "invalid instance:";
  for (const auto& issue : report) s += std::string(" [") + violation_name(issue.code) + "] " + issue.detail + ";";
  return s;
}
}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(ErrorCode::Validation, report_summary(report)), report_(std::move(report)) {}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  const std::size_t n = inst.players.size();

  // matrix
  if (inst.matrix.size() != n) {
    report.push_back({Violation::Complementarity, "matrix size does not match the player count"});
  } else {
    const auto& m = inst.matrix;
    bool bad = false;
    for (std::uint32_t g = 0; g < m.group_count() && !bad; ++g) {
      if (m.group_size(g) == 0) continue;
      for (std::uint32_t h = 0; h < m.group_count() && !bad; ++h) {
        if (g == h || m.group_size(h) == 0) continue;
        const auto& p = m.group_p(g, h);
        if (!is_probability(p) || p + m.group_p(h, g) != 1) {
          bad = true;
          PlayerId a = 0, b = 0;
          for (PlayerId x = 0; x < n; ++x) {
            if (m.group_of(x) == g) a = x;
            if (m.group_of(x) == h) b = x;
          }
          report.push_back({Violation::Complementarity, "p(" + inst.players[a] + "," + inst.players[b] + ") = " +
                                                            to_string(p) + " and p(" + inst.players[b] + "," +
                                                            inst.players[a] + ") = " + to_string(m.group_p(h, g))});
        }
      }
    }
  }

  // names
  {
    std::vector<std::string> names = inst.players;
    std::sort(names.begin(), names.end());
    auto dup = std::adjacent_find(names.begin(), names.end());
    if (dup != names.end()) report.push_back({Violation::LeafBijection, "player name '" + *dup + "' is not unique"});
  }

  // tree
  if (inst.tree.empty()) {
    report.push_back({Violation::LeafBijection, "tree has no leaves"});
  } else {
    std::vector<int> seen(n, 0);
    bool arity_reported = false;
    for (const auto& node : inst.tree.nodes()) {
      if (node.player != kNone) {
        if (node.player >= n)
          report.push_back({Violation::LeafBijection, "leaf labelled with an unknown player"});
        else if (++seen[node.player] == 2)
          report.push_back({Violation::LeafBijection, "player '" + inst.players[node.player] + "' labels more than one leaf"});
      } else if ((node.left == kNone || node.right == kNone) && !arity_reported) {
        report.push_back({Violation::TreeArity, "internal node with a single child"});
        arity_reported = true;
      }
    }
    for (std::size_t p = 0; p < n; ++p)
      if (seen[p] == 0) report.push_back({Violation::LeafBijection, "player '" + inst.players[p] + "' has no leaf"});
  }

  for (auto c : inst.coalition)
    if (c >= n) report.push_back({Violation::CoalitionMembership, "coalition member is not a player"});
  if (!std::is_sorted(inst.coalition.begin(), inst.coalition.end()) ||
      std::adjacent_find(inst.coalition.begin(), inst.coalition.end()) != inst.coalition.end())
    report.push_back({Violation::CoalitionMembership, "coalition list must be sorted and free of repeats"});
  if (inst.favorite >= n) report.push_back({Violation::FavoriteMembership, "favorite is not a player"});
  if (!is_probability(inst.threshold))
    report.push_back({Violation::ThresholdRange, "threshold " + to_string(inst.threshold) + " outside [0,1]"});
  if (!inst.roles.empty() && inst.roles.size() != n)
    report.push_back({Violation::LeafBijection, "role list does not match the player count"});
  return report;
}

void require_valid(const Instance& inst) {
  auto report = validate_instance(inst);
  if (!report.empty()) throw ValidationError(std::move(report));
}

bool is_balanced(const TournamentTree& tree) {
  if (tree.empty()) return false;
  std::size_t leaves = 0;
  for (const auto& n : tree.nodes()) {
    if (n.player == kNone) {
      if (n.left == kNone || n.right == kNone) return false;
      continue;
    }
    if (n.depth != tree.height()) return false;
    ++leaves;
  }
  return (leaves & (leaves - 1)) == 0;
}

}  // namespace koman
