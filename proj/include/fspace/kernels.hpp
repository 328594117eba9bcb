#pragma once

// Data-parallel sweeps. Each kernel has a plain serial reference and an
// OpenMP variant; the two must agree exactly (tests/test_kernels.cpp), and
// bench/bench_kernels.cpp compares their throughput.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "fspace/compact_open.hpp"
#include "fspace/schemes.hpp"

namespace fspace::kernels {

bool verify_star_serial(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon);
bool verify_star_parallel(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon);

/// First (i, j) in lexicographic order with normalize(left[i] ∧ right[j])
/// non-empty. With `triangle`, only pairs i < j are examined (left = right).
using PairHit = std::optional<std::pair<std::size_t, std::size_t>>;
PairHit first_nonempty_pair_serial(std::span<const BasicBox> left, std::span<const BasicBox> right,
                                   bool triangle);
PairHit first_nonempty_pair_parallel(std::span<const BasicBox> left,
                                     std::span<const BasicBox> right, bool triangle);

/// Exhaustive checks over a finite universe {0..size-1} with [A, B] read as
/// {f : U -> U | f(A) ⊆ B}.
struct FiniteModelReport {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
};

/// [A0,B0] ∩ [A1,B1] = [A0∩A1, B0∩B1] ∩ [A0\A1, B0] ∩ [A1\A0, B1], pointwise
/// in f, for all functions and all set quadruples.
FiniteModelReport disjointification_serial(unsigned size);
FiniteModelReport disjointification_parallel(unsigned size);

/// For all A, B disjoint with B non-empty and all C: [C,C] ∩ [A,B] is empty
/// iff C∩A ≠ ∅ and C∩B = ∅. Emptiness is decided by enumerating functions.
FiniteModelReport fix_criterion_serial(unsigned size);
FiniteModelReport fix_criterion_parallel(unsigned size);

}  // namespace fspace::kernels
