#include "fspace/schemes.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "fspace/error.hpp"
#include "fspace/kernels.hpp"

namespace fspace {

std::size_t SchemeTree::level_of(std::size_t node) const {
  if (node >= nodes_.size()) throw std::out_of_range("scheme node index");
  const auto it = std::upper_bound(level_begin_.begin(), level_begin_.end(), node);
  return static_cast<std::size_t>(it - level_begin_.begin()) - 1;
}

std::size_t SchemeTree::node_at(std::size_t level, Nat n) const {
  for (std::size_t i = level_begin(level); i < level_end(level); ++i) {
    if (nodes_[i].c.contains(n)) return i;
  }
  throw Error(Errc::precondition,
              "level " + std::to_string(level) + " does not cover " + std::to_string(n));
}

void SchemeTree::add_level(std::vector<SchemeNode> level) {
  const std::size_t lo = level_count() == 0 ? 0 : level_begin_[level_count() - 1];
  const std::size_t hi = nodes_.size();
  for (const auto& n : level) {
    const bool root = level_count() == 0;
    if (root ? n.parent != -1
             : (n.parent < static_cast<int>(lo) || n.parent >= static_cast<int>(hi))) {
      throw Error(Errc::invalid_argument, "parent index outside the previous level");
    }
  }
  nodes_.insert(nodes_.end(), std::make_move_iterator(level.begin()),
                std::make_move_iterator(level.end()));
  level_begin_.push_back(nodes_.size());
}

std::vector<SchemeViolation> validate(const SchemeTree& tree) {
  std::vector<SchemeViolation> out;
  const auto& nodes = tree.nodes();
  for (std::size_t level = 0; level < tree.level_count(); ++level) {
    const std::size_t lo = tree.level_begin(level), hi = tree.level_end(level);
    PeriodicSet covered;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& s = nodes[i];
      if (s.c.is_finite()) out.push_back({"infinite", int(i), -1, "C payload is finite"});
      if (s.d.is_finite()) out.push_back({"infinite", int(i), -1, "D payload is finite"});
      for (std::size_t j = lo; j < i; ++j) {
        if (const auto both = nodes[j].c & s.c; !both.is_empty()) {
          out.push_back({"disjoint", int(j), int(i), "C sets share " + to_string(both)});
        }
      }
      if (s.parent >= 0) {
        const auto& t = nodes[s.parent];
        if (const auto extra = s.c - t.c; !extra.is_empty()) {
          out.push_back({"nested", int(i), s.parent, "C \\ parent C = " + to_string(extra)});
        }
        if (const auto extra = s.d - t.d; !extra.is_empty()) {
          out.push_back({"nested", int(i), s.parent, "D \\ parent D = " + to_string(extra)});
        }
      }
      covered = covered | s.c;
    }
    if (covered != PeriodicSet::omega()) {
      const auto missing = ~covered;
      if (level == 0) {
        out.push_back({"cover", -1, -1, "level 0 misses " + to_string(missing)});
      } else {
        for (std::size_t t = tree.level_begin(level - 1); t < lo; ++t) {
          if (const auto gap = nodes[t].c & missing; !gap.is_empty()) {
            out.push_back({"cover", int(t), -1,
                           "children of node miss " + to_string(gap)});
          }
        }
      }
    }
    if (level + 1 < tree.level_count()) {
      for (std::size_t t = lo; t < hi; ++t) {
        bool has_child = false;
        for (std::size_t s = hi; s < tree.level_end(level + 1) && !has_child; ++s) {
          has_child = nodes[s].parent == static_cast<int>(t);
        }
        if (!has_child) out.push_back({"splitting", int(t), -1, "node has no successor"});
      }
    }
  }
  return out;
}

void repair_level(SchemeTree& tree, std::size_t level) {
  const std::size_t lo = tree.level_begin(level), hi = tree.level_end(level);
  auto fail = [&](std::size_t node, const std::string& why) {
    throw Error(Errc::repair_impossible, "node " + std::to_string(node) + ": " + why);
  };
  for (std::size_t i = lo; i < hi; ++i) {
    auto& s = tree.node(i);
    if (s.parent >= 0) {
      const auto& t = tree.nodes()[s.parent];
      if (!almost_subset(s.c, t.c)) fail(i, "C is not almost contained in its parent");
      if (!almost_subset(s.d, t.d)) fail(i, "D is not almost contained in its parent");
      s.c = s.c & t.c;
      s.d = s.d & t.d;
    }
    for (std::size_t j = lo; j < i; ++j) {
      const auto& earlier = tree.nodes()[j].c;
      if (!almost_disjoint(s.c, earlier)) fail(i, "C meets a sibling infinitely");
      s.c = s.c - earlier;
    }
  }
  // Hand every uncovered natural to the first node below the same parent.
  if (level == 0) {
    PeriodicSet covered;
    for (std::size_t i = lo; i < hi; ++i) covered = covered | tree.nodes()[i].c;
    const auto missing = ~covered;
    if (!missing.is_finite()) fail(lo, "level 0 misses an infinite set");
    if (lo < hi) tree.node(lo).c = tree.node(lo).c | missing;
  } else {
    for (std::size_t t = tree.level_begin(level - 1); t < lo; ++t) {
      std::size_t first = hi;
      PeriodicSet covered;
      for (std::size_t s = lo; s < hi; ++s) {
        if (tree.nodes()[s].parent != static_cast<int>(t)) continue;
        if (first == hi) first = s;
        covered = covered | tree.nodes()[s].c;
      }
      const auto missing = tree.nodes()[t].c - covered;
      if (missing.is_empty()) continue;
      if (first == hi || !missing.is_finite()) fail(t, "successors do not cover the node");
      tree.node(first).c = tree.node(first).c | missing;
    }
  }
  for (std::size_t i = lo; i < hi; ++i) {
    if (tree.nodes()[i].c.is_finite()) fail(i, "C became finite");
    if (tree.nodes()[i].d.is_finite()) fail(i, "D is finite");
  }
}

SchemeTree repair(const SchemeTree& tree) {
  SchemeTree out = tree;
  for (std::size_t level = 0; level < out.level_count(); ++level) repair_level(out, level);
  return out;
}

void LazyInjection::sync(const SchemeTree& tree) {
  const std::size_t levels = tree.level_count();
  if (levels == levels_seen_) return;
  if (levels < levels_seen_) throw std::logic_error("scheme tree lost levels");
  // Values at positions < levels_seen_ only consulted levels that still exist unchanged.
  if (memo_.size() > levels_seen_) {
    memo_.resize(levels_seen_);
    used_.assign(used_.size(), 0);
    for (Nat v : memo_) used_[v] = 1;
  }
  cursor_.assign(tree.nodes().size(), 0);
  levels_seen_ = levels;
}

void LazyInjection::push_next(const SchemeTree& tree) {
  const Nat n = memo_.size();
  const std::size_t level = std::min<std::size_t>(n, tree.level_count() - 1);
  const std::size_t node = tree.node_at(level, n);
  const auto& d = tree.nodes()[node].d;
  // min(D \ used) never decreases as `used` grows, so each node keeps a cursor.
  auto next = d.next_at_or_after(cursor_[node]);
  while (next && used(*next)) next = d.next_at_or_after(*next + 1);
  if (!next) throw Error(Errc::exhausted, "D payload of node " + std::to_string(node) + " exhausted");
  cursor_[node] = *next;
  if (*next >= used_.size()) used_.resize(std::max<std::size_t>(*next + 1, used_.size() * 2), 0);
  used_[*next] = 1;
  memo_.push_back(*next);
}

Nat LazyInjection::apply(const SchemeTree& tree, Nat n) {
  if (tree.level_count() == 0) {
    throw Error(Errc::not_deep_enough, "phi(" + std::to_string(n) + ") needs a scheme tree with levels");
  }
  return extend(tree, n + 1)[n];
}

std::span<const Nat> LazyInjection::extend(const SchemeTree& tree, Nat horizon) {
  if (tree.level_count() == 0) throw Error(Errc::not_deep_enough, "scheme tree has no levels");
  sync(tree);
  while (memo_.size() < horizon) push_next(tree);
  return std::span<const Nat>(memo_).first(horizon);
}

std::size_t LazyInjection::finalized(const SchemeTree& tree) const noexcept {
  if (tree.level_count() != levels_seen_) return std::min(memo_.size(), levels_seen_);
  return std::min(memo_.size(), tree.level_count());
}

LazyInjection build_injection(const SchemeTree& tree) {
  if (tree.level_count() == 0) throw Error(Errc::invalid_argument, "scheme tree has no levels");
  if (const auto v = validate(tree); !v.empty()) {
    throw Error(Errc::precondition, "scheme tree is not exact (" + v.front().clause +
                                        " at node " + std::to_string(v.front().node) +
                                        "); repair it first");
  }
  return LazyInjection{};
}

bool verify_star(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon) {
  if (horizon > prefix.size()) {
    throw Error(Errc::precondition, "horizon " + std::to_string(horizon) + " exceeds prefix of length " +
                                        std::to_string(prefix.size()));
  }
  return kernels::verify_star_parallel(tree, prefix, horizon);
}

bool verify_star(const SchemeTree& tree, LazyInjection& phi, Nat horizon) {
  return verify_star(tree, phi.extend(tree, horizon), horizon);
}

namespace {

int completion_node(const SchemeTree& tree, std::size_t level) {
  int pick = static_cast<int>(tree.level_begin(level));
  for (std::size_t i = tree.level_begin(level); i < tree.level_end(level); ++i) {
    if (tree.nodes()[i].d == PeriodicSet::omega()) pick = static_cast<int>(i);
  }
  return pick;
}

}  // namespace

void append_level(SchemeTree& tree, const ChainLink& link, const BasicBox* previous) {
  if (!is_normal_form(link.box)) throw Error(Errc::not_normal_form, "chain box is not in normal form");
  if (is_empty(link.box).empty) throw Error(Errc::empty_box, "chain box is empty");
  std::vector<SchemeNode> level;
  if (tree.level_count() == 0) {
    for (const auto& c : link.box.constraints) level.push_back({-1, c.a, c.b});
  } else {
    if (previous == nullptr || !validate_cert(link.box, *previous, link.cert)) {
      throw Error(Errc::precondition, "missing or invalid refinement certificate");
    }
    const std::size_t base = tree.level_begin(tree.height());
    for (std::size_t l = 0; l < link.box.constraints.size(); ++l) {
      const int m = link.cert.assignment[l];
      const int parent = m == kOutside ? completion_node(tree, tree.height())
                                       : static_cast<int>(base) + m;
      level.push_back({parent, link.box.constraints[l].a, link.box.constraints[l].b});
    }
  }
  tree.add_level(std::move(level));
  repair_level(tree, tree.height());
}

SchemeTree chain_to_tree(std::span<const ChainLink> chain) {
  if (chain.empty()) throw Error(Errc::invalid_argument, "empty chain");
  SchemeTree tree;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    append_level(tree, chain[i], i == 0 ? nullptr : &chain[i - 1].box);
  }
  return tree;
}

Nat default_horizon() {
  if (const char* env = std::getenv("FSPACE_HORIZON")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 512;
}

}  // namespace fspace
