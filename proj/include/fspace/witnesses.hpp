#pragma once

/**
 * @file witnesses.hpp
 * @brief Explicit counterexample constructions in the self-map space: a
 * locally finite family of disjoint open boxes, the parity apparatus showing
 * the space is not an F-space, and a G_delta family with empty interior.
 *
 * The infinite unions U_E, U_O and U_I are only ever handled through
 * truncations with an explicit index bound.
 */

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fspace/compact_open.hpp"
#include "fspace/periodic_set.hpp"
#include "fspace/progression_map.hpp"

namespace fspace {

/// Pairwise almost disjoint infinite sets A_0, ..., A_{K-1}.
struct ParityApparatus {
  std::vector<PeriodicSet> parts;

  /// A_k = k % modulus.
  static ParityApparatus residues(Nat modulus);
  /// Validates the parts. Throws Errc::precondition.
  static ParityApparatus from_parts(std::vector<PeriodicSet> parts);

  std::size_t size() const noexcept { return parts.size(); }
};

enum class Parity { even, odd };

// --- locally finite family -------------------------------------------------

/// U_n = [A_n, B] ∩ [A \ A_n, A] with B the complement of `a`, normalized.
std::vector<BasicBox> locally_finite_family(const PeriodicSet& a, std::span<const PeriodicSet> pieces);

/// A normalized box containing f that meets at most one U_n.
BasicBox separating_nbhd(const ProgressionMap& f, const PeriodicSet& a,
                         std::span<const PeriodicSet> pieces);

// --- parity apparatus --------------------------------------------------------

/// Fix(n, m) = ⋂ [A_k, A_k] over k < max(n, m), k != n, m; normalized.
BasicBox fix_box(const ParityApparatus& app, std::size_t n, std::size_t m);

/// The raw constraints of [A_n, A_m] ∩ Fix(n, m).
std::vector<SubbasicBox> disjunct(const ParityApparatus& app, std::size_t n, std::size_t m);

/// Whether f lies in some [A_n, A_m] ∩ Fix(n, m) with n != m of the given
/// parity and both below `bound`. Throws Errc::invalid_argument if bound > K.
bool parity_member(const ProgressionMap& f, const ParityApparatus& app, Parity parity, std::size_t bound);

struct ParityReport {
  bool disjoint = true;
  std::size_t pairs_checked = 0;
  /// (even n, even m, odd p, odd q) of the first non-empty intersection.
  std::optional<std::array<std::size_t, 4>> offending;
};

/// Checks every even disjunct against every odd disjunct with indices below
/// `bound`.
ParityReport parity_disjoint_upto(const ParityApparatus& app, std::size_t bound);

struct ApproachWitness {
  ProgressionMap map;
  std::size_t from = 0;  ///< the moved part
  std::size_t to = 0;    ///< its target part
};

/// A map in ⋂[C_j, C_j] ∩ [A_n, A_m] ∩ Fix(n, m) for some n != m in I, moving
/// A_n into A_m and fixing everything else. Candidates come from halving I
/// by the C_j from the last down to the second, the first C_j then picks the
/// direction; if that pair fails every ordered pair of I is tried. Throws
/// Errc::search_failure when no pair works.
ApproachWitness approach_identity_witness(std::span<const PeriodicSet> v_parts, const ParityApparatus& app,
                                          std::span<const std::size_t> indices);

/// The certificate: membership in every [C_j, C_j] and in the disjunct.
bool certify_witness(const ApproachWitness& w, std::span<const PeriodicSet> v_parts,
                     const ParityApparatus& app);

// --- G_delta with empty interior -------------------------------------------

/// The boxes [A_n, f(A_n)]. Requires f(A_n) ⊆* b for each piece.
std::vector<SubbasicBox> gdelta_family(const PeriodicSet& a, const PeriodicSet& b, const ProgressionMap& f,
                                       std::span<const PeriodicSet> pieces);

/// The pieces 2^(n+1) % 2^(n+2), n < count: disjoint infinite subsets of the evens.
std::vector<PeriodicSet> dyadic_pieces(std::size_t count);

}  // namespace fspace
