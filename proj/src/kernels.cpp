#include "fspace/kernels.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <vector>

#include "fspace/error.hpp"

namespace fspace::kernels {

namespace {

bool star_holds_at(const SchemeTree& tree, std::span<const Nat> prefix, Nat n) {
  const std::size_t deepest = std::min<std::size_t>(n, tree.height());
  for (std::size_t level = 0; level <= deepest; ++level) {
    const auto& node = tree.nodes()[tree.node_at(level, n)];
    if (!node.d.contains(prefix[n])) return false;
  }
  return true;
}

bool pair_nonempty(const BasicBox& x, const BasicBox& y) {
  std::vector<SubbasicBox> all = x.constraints;
  all.insert(all.end(), y.constraints.begin(), y.constraints.end());
  return !is_empty(normalize(all)).empty;
}

// Exceptions cannot leave an OpenMP region; park the first one and rethrow.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(fspace_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

// Function U -> U number `index`, digits in base `size`.
std::array<unsigned, 4> decode_function(std::uint64_t index, unsigned size) {
  std::array<unsigned, 4> f{};
  for (unsigned x = 0; x < size; ++x) {
    f[x] = static_cast<unsigned>(index % size);
    index /= size;
  }
  return f;
}

std::uint64_t function_count(unsigned size) {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < size; ++i) n *= size;
  return n;
}

// images[A] = f(A) as a bitmask.
std::array<unsigned, 16> image_table(const std::array<unsigned, 4>& f, unsigned size) {
  std::array<unsigned, 16> images{};
  for (unsigned a = 0; a < (1u << size); ++a) {
    for (unsigned x = 0; x < size; ++x) {
      if (a >> x & 1u) images[a] |= 1u << f[x];
    }
  }
  return images;
}

FiniteModelReport disjointification_for(std::uint64_t index, unsigned size) {
  const auto img = image_table(decode_function(index, size), size);
  const unsigned sets = 1u << size;
  auto in = [&](unsigned a, unsigned b) { return (img[a] & ~b) == 0; };
  FiniteModelReport r;
  for (unsigned a0 = 0; a0 < sets; ++a0)
    for (unsigned b0 = 0; b0 < sets; ++b0)
      for (unsigned a1 = 0; a1 < sets; ++a1)
        for (unsigned b1 = 0; b1 < sets; ++b1) {
          const bool lhs = in(a0, b0) && in(a1, b1);
          const bool rhs = in(a0 & a1, b0 & b1) && in(a0 & ~a1, b0) && in(a1 & ~a0, b1);
          ++r.cases;
          if (lhs != rhs) ++r.failures;
        }
  return r;
}

bool function_in(const std::array<unsigned, 16>& img, unsigned a, unsigned b) {
  return (img[a] & ~b) == 0;
}

FiniteModelReport fix_criterion_for(unsigned c, unsigned size,
                                    const std::vector<std::array<unsigned, 16>>& images) {
  const unsigned sets = 1u << size;
  FiniteModelReport r;
  for (unsigned a = 0; a < sets; ++a)
    for (unsigned b = 1; b < sets; ++b) {
      if (a & b) continue;
      bool some_member = false;
      for (const auto& img : images) {
        if (function_in(img, c, c) && function_in(img, a, b)) {
          some_member = true;
          break;
        }
      }
      const bool predicted_empty = (c & a) != 0 && (c & b) == 0;
      ++r.cases;
      if (predicted_empty == some_member) ++r.failures;
    }
  return r;
}

std::vector<std::array<unsigned, 16>> all_images(unsigned size) {
  std::vector<std::array<unsigned, 16>> out;
  for (std::uint64_t i = 0; i < function_count(size); ++i) {
    out.push_back(image_table(decode_function(i, size), size));
  }
  return out;
}

void check_size(unsigned size) {
  if (size == 0 || size > 4) throw Error(Errc::invalid_argument, "finite universe size must be 1..4");
}

}  // namespace

bool verify_star_serial(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon) {
  for (Nat n = 0; n < horizon; ++n) {
    if (!star_holds_at(tree, prefix, n)) return false;
  }
  return true;
}

bool verify_star_parallel(const SchemeTree& tree, std::span<const Nat> prefix, Nat horizon) {
  std::atomic<bool> ok{true};
  ExceptionSlot slot;
  const auto count = static_cast<std::int64_t>(horizon);
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 0; n < count; ++n) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    slot.run([&] {
      if (!star_holds_at(tree, prefix, static_cast<Nat>(n))) ok.store(false);
    });
  }
  slot.rethrow();
  return ok.load();
}

PairHit first_nonempty_pair_serial(std::span<const BasicBox> left, std::span<const BasicBox> right,
                                   bool triangle) {
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = triangle ? i + 1 : 0; j < right.size(); ++j) {
      if (pair_nonempty(left[i], right[j])) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

PairHit first_nonempty_pair_parallel(std::span<const BasicBox> left,
                                     std::span<const BasicBox> right, bool triangle) {
  // Per-row first hit; rows are independent, the minimum row wins.
  std::vector<std::int64_t> hit(left.size(), -1);
  ExceptionSlot slot;
  const auto rows = static_cast<std::int64_t>(left.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < rows; ++i) {
    slot.run([&] {
      for (std::size_t j = triangle ? i + 1 : 0; j < right.size(); ++j) {
        if (pair_nonempty(left[i], right[j])) {
          hit[i] = static_cast<std::int64_t>(j);
          break;
        }
      }
    });
  }
  slot.rethrow();
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i] >= 0) return std::pair{i, static_cast<std::size_t>(hit[i])};
  }
  return std::nullopt;
}

FiniteModelReport disjointification_serial(unsigned size) {
  check_size(size);
  FiniteModelReport total;
  for (std::uint64_t f = 0; f < function_count(size); ++f) {
    const auto r = disjointification_for(f, size);
    total.cases += r.cases;
    total.failures += r.failures;
  }
  return total;
}

FiniteModelReport disjointification_parallel(unsigned size) {
  check_size(size);
  std::uint64_t cases = 0, failures = 0;
  const auto count = static_cast<std::int64_t>(function_count(size));
#pragma omp parallel for schedule(static) reduction(+ : cases, failures)
  for (std::int64_t f = 0; f < count; ++f) {
    const auto r = disjointification_for(static_cast<std::uint64_t>(f), size);
    cases += r.cases;
    failures += r.failures;
  }
  return {cases, failures};
}

FiniteModelReport fix_criterion_serial(unsigned size) {
  check_size(size);
  const auto images = all_images(size);
  FiniteModelReport total;
  for (unsigned c = 0; c < (1u << size); ++c) {
    const auto r = fix_criterion_for(c, size, images);
    total.cases += r.cases;
    total.failures += r.failures;
  }
  return total;
}

FiniteModelReport fix_criterion_parallel(unsigned size) {
  check_size(size);
  const auto images = all_images(size);
  std::uint64_t cases = 0, failures = 0;
  const int sets = 1 << size;
#pragma omp parallel for schedule(dynamic) reduction(+ : cases, failures)
  for (int c = 0; c < sets; ++c) {
    const auto r = fix_criterion_for(static_cast<unsigned>(c), size, images);
    cases += r.cases;
    failures += r.failures;
  }
  return {cases, failures};
}

}  // namespace fspace::kernels
