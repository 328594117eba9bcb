#pragma once

/**
 * @file schemes.hpp
 * @brief Finite-splitting scheme trees and the injection that realizes them.
 *
 * Level n of a SchemeTree carries pairs (C_t, D_t). On the C side each level
 * partitions omega and children refine parents; on the D side children are
 * contained in parents and every D_t is infinite. build_injection produces
 * the map
 *
 *     phi(n) = min(D_{t_n} \ {phi(0), ..., phi(n-1)})
 *
 * where t_n is the node containing n at level min(n, deepest level). phi is
 * injective and sends C_t into D_t from position height(t) on, so phi(C_t) is
 * almost contained in D_t for every node.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fspace/compact_open.hpp"
#include "fspace/periodic_set.hpp"

namespace fspace {

struct SchemeNode {
  int parent = -1;  ///< index into SchemeTree::nodes(), -1 on level 0
  PeriodicSet c;
  PeriodicSet d;

  friend bool operator==(const SchemeNode&, const SchemeNode&) = default;
};

class SchemeTree {
 public:
  std::size_t level_count() const noexcept { return level_begin_.size() - 1; }
  /// Index of the deepest level; a tree with only level 0 has height 0.
  std::size_t height() const noexcept { return level_count() == 0 ? 0 : level_count() - 1; }

  const std::vector<SchemeNode>& nodes() const noexcept { return nodes_; }
  std::size_t level_begin(std::size_t level) const { return level_begin_.at(level); }
  std::size_t level_end(std::size_t level) const { return level_begin_.at(level + 1); }
  std::size_t level_of(std::size_t node) const;

  /// The node of `level` whose C-set contains n. Throws Errc::precondition if
  /// no node does.
  std::size_t node_at(std::size_t level, Nat n) const;

  /// Appends a level. Parent indices must point into the current deepest level.
  void add_level(std::vector<SchemeNode> level);

  SchemeNode& node(std::size_t i) { return nodes_.at(i); }

  friend bool operator==(const SchemeTree&, const SchemeTree&) = default;

 private:
  std::vector<SchemeNode> nodes_;
  std::vector<std::size_t> level_begin_{0};
};

struct SchemeViolation {
  std::string clause;  ///< "disjoint", "nested", "cover", "infinite", "splitting"
  int node = -1;
  int other = -1;
  std::string detail;
};

/// Every violated clause with the witnessing nodes; empty iff the tree is an
/// exact covering scheme on the C side and a weak scheme with infinite
/// payloads on the D side.
std::vector<SchemeViolation> validate(const SchemeTree& tree);

/// Exact representatives for a tree that is valid up to finite sets. Throws
/// Errc::repair_impossible when some relation fails infinitely.
SchemeTree repair(const SchemeTree& tree);
/// Repairs one level in place, assuming all shallower levels are exact.
void repair_level(SchemeTree& tree, std::size_t level);

/**
 * The scheme injection, computed on demand.
 *
 * Values at positions up to the deepest level are final: deepening the tree
 * never changes them. Positions beyond it are computed with the deepest level
 * standing in for all deeper ones, and are recomputed after the tree grows.
 */
class LazyInjection {
 public:
  /// phi(n). Past the deepest level the value is provisional. Throws
  /// Errc::not_deep_enough on a tree without levels.
  Nat apply(const SchemeTree& tree, Nat n);
  /// phi(0), ..., phi(horizon - 1), provisional past the deepest level.
  std::span<const Nat> extend(const SchemeTree& tree, Nat horizon);
  /// Number of memoized values that are final for `tree`.
  std::size_t finalized(const SchemeTree& tree) const noexcept;
  std::span<const Nat> memo() const noexcept { return memo_; }

 private:
  void sync(const SchemeTree& tree);
  void push_next(const SchemeTree& tree);
  bool used(Nat v) const noexcept { return v < used_.size() && used_[v]; }

  std::vector<Nat> memo_;
  std::vector<char> used_;
  std::vector<Nat> cursor_;
  std::size_t levels_seen_ = 0;
};

/// Requires a valid tree with at least one level.
LazyInjection build_injection(const SchemeTree& tree);

/// For every level m, node t of level m and m <= n < horizon: n in C_t implies
/// prefix[n] in D_t. Throws Errc::precondition if horizon exceeds the prefix.
bool verify_star(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon);
bool verify_star(const SchemeTree& tree, LazyInjection& phi, Nat horizon);

struct ChainLink {
  BasicBox box;
  RefinementCert cert;  ///< against the previous link; ignored on the first
};

/// Adds `link` as a new level under the current deepest level and repairs it.
void append_level(SchemeTree& tree, const ChainLink& link, const BasicBox* previous);

/// Level n holds the constraints of chain[n], linked by the certificates.
SchemeTree chain_to_tree(std::span<const ChainLink> chain);

/// Verification horizon: $FSPACE_HORIZON if set, else 512.
Nat default_horizon();

}  // namespace fspace
