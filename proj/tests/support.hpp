#pragma once

// Random generators and brute-force oracles shared by the test binaries.
// Oracles evaluate denotations directly and never call library operations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "fspace/compact_open.hpp"
#include "fspace/error.hpp"
#include "fspace/periodic_set.hpp"
#include "fspace/progression_map.hpp"
#include "fspace/schemes.hpp"

namespace testing {

using fspace::Nat;
using Rng = std::mt19937_64;

inline Nat uniform(Rng& rng, Nat lo, Nat hi) {  // inclusive
  return std::uniform_int_distribution<Nat>(lo, hi)(rng);
}

/// A set given by raw (non-canonical) data plus its denotation.
struct SetSpec {
  Nat m = 1;
  std::vector<Nat> residues, added, removed;

  bool contains(Nat n) const {
    if (std::find(removed.begin(), removed.end(), n) != removed.end()) return false;
    if (std::find(added.begin(), added.end(), n) != added.end()) return true;
    return std::find(residues.begin(), residues.end(), n % m) != residues.end();
  }
  fspace::PeriodicSet build() const { return fspace::PeriodicSet::make(m, residues, added, removed); }
};

inline SetSpec random_spec(Rng& rng, Nat max_modulus = 12, Nat max_exception = 30) {
  static const Nat moduli[] = {1, 2, 3, 4, 6, 8, 12, 5, 9, 10};
  SetSpec s;
  do s.m = moduli[uniform(rng, 0, 9)];
  while (s.m > max_modulus);
  for (Nat r = 0; r < s.m; ++r) {
    if (uniform(rng, 0, 2) == 0) s.residues.push_back(r);
  }
  for (Nat k = uniform(rng, 0, 3); k > 0; --k) s.added.push_back(uniform(rng, 0, max_exception));
  for (Nat k = uniform(rng, 0, 3); k > 0; --k) s.removed.push_back(uniform(rng, 0, max_exception));
  return s;
}

/// Infinite random set, built through the library.
inline fspace::PeriodicSet random_infinite(Rng& rng, Nat max_modulus = 12) {
  for (;;) {
    auto s = random_spec(rng, max_modulus).build();
    if (!s.is_finite()) return s;
  }
}

/// Whether `a \ b` is finite, by enumeration past both thresholds over
/// `periods` full periods of the combined pattern.
inline bool almost_subset_oracle(const std::function<bool(Nat)>& a, const std::function<bool(Nat)>& b,
                                 Nat period, Nat threshold) {
  for (Nat n = threshold; n < threshold + period; ++n) {
    if (a(n) && !b(n)) return false;
  }
  return true;
}

/// A map given by residue-class affine rules past a threshold plus a table,
/// evaluated directly.
struct MapSpec {
  Nat modulus = 1;
  Nat threshold = 0;
  struct Rule {
    Nat slope;   // value grows by slope per step of modulus
    Nat offset;  // value at the first point of the class at or after threshold
  };
  std::vector<Rule> rules;
  std::vector<Nat> table;

  Nat operator()(Nat n) const {
    if (n < threshold) return table[n];
    const Nat r = n % modulus;
    Nat first = threshold + (r + modulus - threshold % modulus) % modulus;
    return rules[r].offset + rules[r].slope * ((n - first) / modulus);
  }

  fspace::ProgressionMap build() const {
    std::vector<fspace::AffinePiece> pieces;
    for (Nat r = 0; r < modulus; ++r) {
      const Nat first = threshold + (r + modulus - threshold % modulus) % modulus;
      pieces.push_back({first, modulus, rules[r].offset, rules[r].slope});
    }
    std::map<Nat, Nat> t;
    for (Nat n = 0; n < threshold; ++n) t[n] = table[n];
    return fspace::ProgressionMap::from_pieces(pieces, t);
  }
};

inline MapSpec random_map_spec(Rng& rng, bool allow_constant = true) {
  static const Nat moduli[] = {1, 2, 3, 4, 6};
  MapSpec f;
  f.modulus = moduli[uniform(rng, 0, 4)];
  f.threshold = uniform(rng, 0, 6);
  for (Nat r = 0; r < f.modulus; ++r) {
    const Nat slope = uniform(rng, allow_constant ? 0 : 1, 4);
    f.rules.push_back({slope, uniform(rng, 0, 20)});
  }
  for (Nat n = 0; n < f.threshold; ++n) f.table.push_back(uniform(rng, 0, 20));
  return f;
}

/// The k-th element of a set given by predicate, by scanning.
inline Nat nth_oracle(const std::function<bool(Nat)>& in, Nat k) {
  for (Nat n = 0;; ++n) {
    if (in(n) && k-- == 0) return n;
  }
}

/// A random shrink of `box`: one or two constraints, each cutting an a-set by
/// a finer residue class and sending it into a finer class of its target.
inline std::vector<fspace::SubbasicBox> random_shrink(Rng& rng, const fspace::BasicBox& box) {
  std::vector<fspace::SubbasicBox> extra;
  for (Nat k = uniform(rng, 1, 2); k > 0; --k) {
    const auto& c = box.constraints[uniform(rng, 0, box.constraints.size() - 1)];
    const Nat ma = c.a.modulus() * uniform(rng, 2, 3);
    const Nat mb = c.b.modulus() * uniform(rng, 1, 2);
    const auto a = c.a & fspace::PeriodicSet::residue(c.a.select(uniform(rng, 0, 5)) % ma, ma);
    const auto b = uniform(rng, 0, 2) == 0 ? c.b : c.b & fspace::PeriodicSet::residue(c.b.select(uniform(rng, 0, 5)) % mb, mb);
    extra.push_back({a, b});
  }
  return extra;
}

/// A certified chain starting at the full box, each step a legal shrink with
/// at most `branching` children per parent (or a stall when none is found).
inline std::vector<fspace::ChainLink> random_chain(Rng& rng, std::size_t depth, std::size_t branching) {
  std::vector<fspace::ChainLink> chain{{fspace::BasicBox::full(), {}}};
  while (chain.size() <= depth) {
    const auto& prev = chain.back().box;
    std::optional<fspace::ChainLink> next;
    for (int attempt = 0; attempt < 20 && !next; ++attempt) {
      try {
        auto r = fspace::refine(prev, random_shrink(rng, prev));
        std::map<int, std::size_t> children;
        bool ok = true;
        for (int m : r.cert.assignment) ok = ok && ++children[m] <= branching;
        if (ok) next = fspace::ChainLink{std::move(r.box), std::move(r.cert)};
      } catch (const fspace::Error&) {
      }
    }
    if (!next) next = fspace::ChainLink{prev, fspace::refine(prev, {}).cert};
    chain.push_back(std::move(*next));
  }
  return chain;
}

/// The scheme recursion evaluated from scratch: phi(n) is the least element of
/// D at the node of level min(n, height) containing n, among unused values.
inline std::vector<Nat> phi_oracle(const fspace::SchemeTree& tree, Nat horizon) {
  std::vector<Nat> out;
  std::set<Nat> used;
  for (Nat n = 0; n < horizon; ++n) {
    const std::size_t level = std::min<std::size_t>(n, tree.height());
    const fspace::SchemeNode* node = nullptr;
    for (std::size_t i = tree.level_begin(level); i < tree.level_end(level); ++i) {
      if (tree.nodes()[i].c.contains(n)) node = &tree.nodes()[i];
    }
    Nat v = 0;
    while (!node->d.contains(v) || used.count(v)) ++v;
    used.insert(v);
    out.push_back(v);
  }
  return out;
}

inline fspace::PeriodicSet S(Nat r, Nat m) { return fspace::PeriodicSet::residue(r, m); }
inline fspace::PeriodicSet evens() { return S(0, 2); }
inline fspace::PeriodicSet odds() { return S(1, 2); }
inline fspace::PeriodicSet omega() { return fspace::PeriodicSet::omega(); }

}  // namespace testing
