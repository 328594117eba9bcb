#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "fspace/periodic_set.hpp"

namespace fspace {

/// One affine piece: on {a + d*k : k >= 0} the map sends a + d*k to b + e*k.
struct AffinePiece {
  Nat a = 0;
  Nat d = 1;
  Nat b = 0;
  Nat e = 0;

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// An affine rule restricted to a subset of its progression.
struct DomainPiece {
  PeriodicSet domain;
  AffinePiece rule;
};

struct MapFlags {
  bool injective = false;
  bool finite_to_one = false;

  friend bool operator==(const MapFlags&, const MapFlags&) = default;
};

/**
 * A total map omega -> omega that is affine on each residue class modulo
 * `modulus()` from `threshold()` on, with an explicit table below the
 * threshold.
 *
 * Canonical form: the modulus is the least period of the affine rules and the
 * threshold is as small as the table allows. Two canonical maps are equal iff
 * they agree at every natural.
 */
class ProgressionMap {
 public:
  /// The identity.
  ProgressionMap();

  static ProgressionMap identity() { return {}; }
  static ProgressionMap shift(Nat c);
  static ProgressionMap scale(Nat factor);
  static ProgressionMap constant(Nat value);

  /// Builds the map n -> fn(n), given that fn is affine on every class mod
  /// `period` from `threshold` on. Throws std::logic_error if a class turns
  /// out not to be affine on the sampled points.
  static ProgressionMap from_affine_oracle(Nat period, Nat threshold,
                                           const std::function<Nat(Nat)>& fn);

  /// General pieces (any progression domains) plus a table. Pieces must be
  /// pairwise disjoint and together with the table keys cover omega; table
  /// entries take precedence over pieces.
  static ProgressionMap from_pieces(std::span<const AffinePiece> pieces,
                                    const std::map<Nat, Nat>& table);

  /// Like from_pieces, but each rule applies only on `domain`, which must be
  /// contained in its progression. Domains must be pairwise disjoint.
  static ProgressionMap from_domain_pieces(std::span<const DomainPiece> pieces,
                                           const std::map<Nat, Nat>& table);

  Nat modulus() const noexcept { return modulus_; }
  Nat threshold() const noexcept { return static_cast<Nat>(table_.size()); }
  /// One piece per residue class; pieces()[r] has domain r' + modulus*k where
  /// r' is the first natural >= threshold congruent to r.
  const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }
  /// Values on [0, threshold).
  const std::vector<Nat>& table() const noexcept { return table_; }

  Nat operator()(Nat n) const;

  friend bool operator==(const ProgressionMap&, const ProgressionMap&) = default;

 private:
  void canonicalize();

  Nat modulus_ = 1;
  std::vector<AffinePiece> pieces_;
  std::vector<Nat> table_;
};

inline Nat apply(const ProgressionMap& f, Nat n) { return f(n); }

/// Exact image f(a).
PeriodicSet image(const ProgressionMap& f, const PeriodicSet& a);
/// Exact preimage f^{-1}(b).
PeriodicSet preimage(const ProgressionMap& f, const PeriodicSet& b);
/// f ∘ g
ProgressionMap compose(const ProgressionMap& f, const ProgressionMap& g);

struct MapPart {
  PeriodicSet domain;
  ProgressionMap map;
};

/// The map agreeing with parts[i].map on parts[i].domain. Domains must form an
/// almost-partition of omega; overlaps go to the earlier part, and naturals
/// covered by no part go to the first part.
ProgressionMap combine_piecewise(std::span<const MapPart> parts);

/// Increasing enumeration of `a` composed with that of `b`: the k-th element of
/// a goes to the k-th element of b. Off `a` the result is the identity, which
/// only matters when the map is used as a piece of combine_piecewise.
ProgressionMap order_embedding(const PeriodicSet& a, const PeriodicSet& b);

MapFlags classify(const ProgressionMap& f);

/// Map-expression text that parses back to the same map.
std::string to_string(const ProgressionMap& f);

}  // namespace fspace
