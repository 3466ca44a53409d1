#pragma once

#include "core/error.hpp"
#include "core/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace koman {

using PlayerId = std::uint32_t;
using NodeId = std::uint32_t;
inline constexpr std::uint32_t kNone = 0xffffffffu;

// Construction metadata carried by generated instances. Solvers ignore it.
enum class Role : std::uint8_t { Other, Coalition, Variable, Clause, Dummy, Ensurance, Randomizer, Slot, Item, Favorite };

const char* role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);

// Win probabilities stored per group of interchangeable players. Two players of
// the same group meet at exactly 1/2. A dense matrix is the case of singleton
// groups.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  // n singleton groups, every off-diagonal entry 1/2.
  explicit ProbabilityMatrix(std::size_t n);
  // Players mapped to groups; group table initialised to 1/2.
  ProbabilityMatrix(std::vector<std::uint32_t> group_of, std::size_t group_count);

  std::size_t size() const { return group_of_.size(); }
  std::size_t group_count() const { return groups_; }
  std::uint32_t group_of(PlayerId p) const { return group_of_[p]; }
  std::size_t group_size(std::uint32_t g) const { return group_sizes_[g]; }

  // p(a, b) for a != b.
  const Rational& operator()(PlayerId a, PlayerId b) const;
  const Rational& group_p(std::uint32_t g, std::uint32_t h) const { return table_[std::size_t(g) * groups_ + h]; }

  // Sets p(a,b) = v and p(b,a) = 1 - v. Both players must be alone in their groups.
  void set(PlayerId a, PlayerId b, const Rational& v);
  // Sets only p(a,b); used to build deliberately inconsistent matrices.
  void set_one_way(PlayerId a, PlayerId b, const Rational& v);
  void set_group(std::uint32_t g, std::uint32_t h, const Rational& v);

  // Same probabilities with interchangeable players merged into shared groups.
  ProbabilityMatrix regrouped() const;
  // Restriction to the listed players, in that order.
  ProbabilityMatrix restricted(const std::vector<PlayerId>& keep) const;

  bool operator==(const ProbabilityMatrix& other) const;

 private:
  std::vector<std::uint32_t> group_of_;
  std::vector<std::size_t> group_sizes_;
  std::size_t groups_ = 0;
  std::vector<Rational> table_;
};

class TournamentTree {
 public:
  struct Node {
    NodeId parent = kNone;
    NodeId left = kNone;
    NodeId right = kNone;
    PlayerId player = kNone;  // kNone for internal nodes
    std::uint32_t depth = 0;
    bool operator==(const Node&) const = default;
  };

  TournamentTree() = default;
  static TournamentTree leaf(PlayerId p);
  static TournamentTree join(const TournamentTree& left, const TournamentTree& right);
  // Perfect tree over the given leaf order; size must be a power of two.
  static TournamentTree balanced(const std::vector<PlayerId>& seeding);

  bool empty() const { return nodes_.empty(); }
  NodeId root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  bool is_leaf(NodeId id) const { return nodes_[id].player != kNone; }
  NodeId sibling(NodeId id) const;
  std::uint32_t height() const { return height_; }

  std::size_t leaf_count() const;
  // Leaf labels in left-to-right order.
  std::vector<PlayerId> leaf_players() const;
  // Last node id inside the subtree of id (nodes are stored in preorder).
  NodeId subtree_end(NodeId id) const { return subtree_end_[id]; }
  bool in_subtree(NodeId ancestor, NodeId id) const { return id >= ancestor && id <= subtree_end_[ancestor]; }

  TournamentTree mirrored() const;
  bool operator==(const TournamentTree& other) const { return nodes_ == other.nodes_; }

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
  std::vector<NodeId> subtree_end_;
  std::uint32_t height_ = 0;
};

// Builds trees bottom-up; build() lays the nodes out in preorder.
class TreeBuilder {
 public:
  NodeId add_leaf(PlayerId p);
  // right may be kNone, producing a unary node that fails arity validation.
  NodeId add_internal(NodeId left, NodeId right);
  // Adds a copy of `tree` and returns the id of its root, leaf labels remapped.
  NodeId add_tree(const TournamentTree& tree, const std::vector<PlayerId>& relabel);
  TournamentTree build(NodeId root) const;

 private:
  struct Raw {
    NodeId left = kNone, right = kNone;
    PlayerId player = kNone;
  };
  std::vector<Raw> raw_;
};

struct Instance {
  std::vector<std::string> players;  // index is the player id
  TournamentTree tree;
  ProbabilityMatrix matrix;
  std::vector<PlayerId> coalition;  // sorted, unique
  PlayerId favorite = kNone;
  Rational threshold;
  std::vector<Role> roles;  // empty, or one per player

  std::size_t size() const { return players.size(); }
  bool in_coalition(PlayerId p) const;
  std::optional<PlayerId> find(std::string_view name) const;
  std::vector<bool> coalition_mask() const;
};

bool operator==(const Instance& a, const Instance& b);

enum class Violation : std::uint8_t { Complementarity, LeafBijection, CoalitionMembership, FavoriteMembership, ThresholdRange, TreeArity };
const char* violation_name(Violation v);

struct ValidationIssue {
  Violation code;
  std::string detail;
};
using ValidationReport = std::vector<ValidationIssue>;

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate_instance(const Instance& inst);
void require_valid(const Instance& inst);

bool is_balanced(const TournamentTree& tree);

}  // namespace koman
