#pragma once

/**
 * @file periodic_set.hpp
 * @brief Eventually periodic subsets of the naturals.
 *
 * A PeriodicSet is a finite union of residue classes plus and minus finitely
 * many exceptions. Such sets are closed under every Boolean operation and the
 * relation "a \ b is finite" is decidable on them, which makes them a
 * computable subalgebra of P(omega)/fin. Each value stands for the clopen set
 * A* of the remainder; two sets with finite symmetric difference denote the
 * same clopen set.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fspace {

using Nat = std::uint64_t;

/// Moduli larger than this are rejected with Errc::overflow.
inline constexpr Nat kMaxModulus = Nat{1} << 22;
/// Exception thresholds larger than this are rejected with Errc::overflow.
inline constexpr Nat kMaxThreshold = Nat{1} << 26;

/// Arithmetic progression {start + step*k : k >= 0}; step 0 is the single point {start}.
struct Progression {
  Nat start = 0;
  Nat step = 0;
};

Nat checked_lcm(Nat a, Nat b);

class PeriodicSet {
 public:
  /// The empty set.
  PeriodicSet() = default;

  static PeriodicSet empty() { return {}; }
  static PeriodicSet omega();
  static PeriodicSet residue(Nat r, Nat modulus);
  static PeriodicSet finite(std::vector<Nat> elements);

  /// Denotes {n : n mod modulus in residues} plus `added` minus `removed`.
  /// Arguments need not be canonical; the result is.
  static PeriodicSet make(Nat modulus, std::vector<Nat> residues, std::vector<Nat> added,
                          std::vector<Nat> removed);

  /// Builds the set {n : pred(n)} assuming pred is periodic with the given
  /// period on [threshold, inf). Evaluates pred on [0, threshold + period).
  template <class Pred>
  static PeriodicSet from_predicate(Nat period, Nat threshold, Pred&& pred);

  /// Union of a finite point set and finitely many progressions.
  static PeriodicSet from_progressions(std::span<const Nat> points,
                                       std::span<const Progression> progressions);

  Nat modulus() const noexcept { return modulus_; }
  const std::vector<Nat>& residues() const noexcept { return residues_; }
  const std::vector<Nat>& added() const noexcept { return added_; }
  const std::vector<Nat>& removed() const noexcept { return removed_; }

  /// One past the largest exception; 0 when there are none. Beyond it the
  /// set agrees with its residue pattern.
  Nat threshold() const noexcept;

  bool contains(Nat n) const noexcept;
  bool is_finite() const noexcept { return residues_.empty(); }
  bool is_empty() const noexcept { return residues_.empty() && added_.empty(); }

  /// |A ∩ [0, n)|
  Nat rank(Nat n) const noexcept;
  /// The k-th element (0-based) in increasing order. Throws Errc::exhausted.
  Nat select(Nat k) const;
  std::optional<Nat> next_at_or_after(Nat n) const;

  /// Residue pattern lifted to `period` (which must be a multiple of modulus()).
  std::vector<char> pattern(Nat period) const;

  friend bool operator==(const PeriodicSet&, const PeriodicSet&) = default;

 private:
  static PeriodicSet canonical(Nat period, const std::vector<char>& pattern, std::vector<Nat> added,
                               std::vector<Nat> removed);
  bool in_pattern(Nat n) const noexcept;

  Nat modulus_ = 1;
  std::vector<Nat> residues_;
  std::vector<Nat> added_;
  std::vector<Nat> removed_;
};

PeriodicSet operator|(const PeriodicSet& a, const PeriodicSet& b);  // union
PeriodicSet operator&(const PeriodicSet& a, const PeriodicSet& b);  // intersection
PeriodicSet operator-(const PeriodicSet& a, const PeriodicSet& b);  // difference
PeriodicSet operator~(const PeriodicSet& a);                        // complement in omega

/// a ⊆* b, i.e. a \ b is finite.
bool almost_subset(const PeriodicSet& a, const PeriodicSet& b);
bool almost_equal(const PeriodicSet& a, const PeriodicSet& b);
bool almost_disjoint(const PeriodicSet& a, const PeriodicSet& b);
inline bool is_almost_empty(const PeriodicSet& a) { return a.is_finite(); }

Nat enumerate(const PeriodicSet& a, Nat k);
/// Least element of a \ excluded. `excluded` must be sorted ascending.
Nat min_excluding(const PeriodicSet& a, std::span<const Nat> excluded);

/// Set-expression text that parses back to the same set.
std::string to_string(const PeriodicSet& a);

// ---------------------------------------------------------------------------

template <class Pred>
PeriodicSet PeriodicSet::from_predicate(Nat period, Nat threshold, Pred&& pred) {
  if (period == 0 || period > kMaxModulus || threshold > kMaxThreshold) {
    return canonical(0, {}, {}, {});  // canonical() raises the overflow error
  }
  std::vector<char> pattern(period, 0);
  for (Nat n = threshold; n < threshold + period; ++n) pattern[n % period] = pred(n) ? 1 : 0;
  std::vector<Nat> added, removed;
  for (Nat n = 0; n < threshold; ++n) {
    const bool member = pred(n);
    const bool periodic = pattern[n % period] != 0;
    if (member && !periodic) added.push_back(n);
    if (!member && periodic) removed.push_back(n);
  }
  return canonical(period, pattern, std::move(added), std::move(removed));
}

}  // namespace fspace
