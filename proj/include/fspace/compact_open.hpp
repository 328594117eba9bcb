#pragma once

/**
 * @file compact_open.hpp
 * @brief Basic open sets of the compact-open topology on self-maps of the
 * remainder, over the PeriodicSet clopen algebra.
 *
 * A SubbasicBox [A, B] stands for {f : f(A*) ⊆ B*}. A BasicBox is a finite
 * conjunction of them. Normal form: the a-sets are infinite, pairwise
 * disjoint and cover omega up to a finite set; any part not constrained by
 * the input carries the completion target omega.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspace/periodic_set.hpp"
#include "fspace/progression_map.hpp"

namespace fspace {

struct SubbasicBox {
  PeriodicSet a;
  PeriodicSet b;

  friend bool operator==(const SubbasicBox&, const SubbasicBox&) = default;
};

struct BasicBox {
  std::vector<SubbasicBox> constraints;

  /// The whole function space, {[omega, omega]}.
  static BasicBox full();

  friend bool operator==(const BasicBox&, const BasicBox&) = default;
};

/// Marks a finer constraint whose a-set is almost disjoint from every coarser a-set.
inline constexpr int kOutside = -1;

/// assignment[l] is the index m of the coarser constraint with A_l ⊆* C_m and
/// B_l ⊆* D_m, or kOutside.
struct RefinementCert {
  std::vector<int> assignment;

  friend bool operator==(const RefinementCert&, const RefinementCert&) = default;
};

BasicBox normalize(std::span<const SubbasicBox> boxes);
inline BasicBox normalize(const BasicBox& box) { return normalize(box.constraints); }

bool is_normal_form(const BasicBox& box);

struct EmptinessResult {
  bool empty = false;
  /// Index of a constraint with infinite a and finite b when empty.
  std::optional<std::size_t> offending;
  /// A member of the box when non-empty.
  std::optional<ProgressionMap> witness;
};

/// Decides emptiness of a normal-form box. Throws Errc::not_normal_form.
EmptinessResult is_empty(const BasicBox& box);

/// f(a_i) ⊆* b_i for every constraint; works on any conjunction.
bool member(const ProgressionMap& f, std::span<const SubbasicBox> constraints);
inline bool member(const ProgressionMap& f, const BasicBox& box) {
  return member(f, box.constraints);
}

struct Refinement {
  BasicBox box;
  RefinementCert cert;
};

/// Normal form of outer ∩ extra with a certificate against outer. Throws
/// Errc::empty_box (naming the offending constraint) when the result is empty.
Refinement refine(const BasicBox& outer, std::span<const SubbasicBox> extra);

/// Checks a certificate: every assigned pair satisfies both almost-containments
/// and every kOutside constraint is almost disjoint from all coarser a-sets.
bool validate_cert(const BasicBox& finer, const BasicBox& coarser, const RefinementCert& cert);

/// ⋂[A_i, A_i], completed. Throws Errc::precondition on finite or overlapping sets.
BasicBox identity_nbhd(std::span<const PeriodicSet> partition);

/// Whether [c,c] ∩ [a,b] is empty at the remainder level: c∩a infinite and c∩b
/// finite. Requires a, b almost disjoint and b infinite.
bool fix_intersect_empty(const PeriodicSet& c, const PeriodicSet& a, const PeriodicSet& b);

/// The b-set of the unique constraint whose a-set almost contains `seed`.
/// Throws Errc::straddling_seed when no single constraint does.
PeriodicSet eval_image(const BasicBox& box, const PeriodicSet& seed);

/// Box-expression text: `[a -> b] & [a -> b] ...`
std::string to_string(const BasicBox& box);
std::string to_string(std::span<const SubbasicBox> constraints);

}  // namespace fspace
