#include "fspace/periodic_set.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fspace/error.hpp"

namespace fspace {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::syntax: return "syntax";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::precondition: return "precondition";
    case Errc::exhausted: return "exhausted";
    case Errc::overflow: return "overflow";
    case Errc::not_deep_enough: return "not_deep_enough";
    case Errc::straddling_seed: return "straddling_seed";
    case Errc::empty_box: return "empty_box";
    case Errc::not_normal_form: return "not_normal_form";
    case Errc::repair_impossible: return "repair_impossible";
    case Errc::search_failure: return "search_failure";
    case Errc::illegal_move: return "illegal_move";
    case Errc::wrong_turn: return "wrong_turn";
    case Errc::not_found: return "not_found";
  }
  return "unknown";
}

Nat checked_lcm(Nat a, Nat b) {
  const Nat g = std::gcd(a, b);
  const unsigned __int128 l = static_cast<unsigned __int128>(a / g) * b;
  if (l > kMaxModulus) {
    throw Error(Errc::overflow, "modulus lcm(" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") exceeds the supported maximum");
  }
  return static_cast<Nat>(l);
}

namespace {

void sort_unique(std::vector<Nat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool sorted_contains(const std::vector<Nat>& v, Nat x) {
  return std::binary_search(v.begin(), v.end(), x);
}

Nat count_below(const std::vector<Nat>& v, Nat x) {
  return static_cast<Nat>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

// Smallest divisor p of `period` for which the pattern is p-periodic.
Nat minimal_period(Nat period, const std::vector<char>& pattern) {
  for (Nat p = 1; p < period; ++p) {
    if (period % p != 0) continue;
    bool ok = true;
    for (Nat r = p; r < period && ok; ++r) ok = pattern[r] == pattern[r % p];
    if (ok) return p;
  }
  return period;
}

}  // namespace

PeriodicSet PeriodicSet::canonical(Nat period, const std::vector<char>& pattern,
                                   std::vector<Nat> added, std::vector<Nat> removed) {
  if (period == 0 || period > kMaxModulus) {
    throw Error(Errc::overflow, "period or threshold outside the supported range");
  }
  PeriodicSet s;
  s.modulus_ = minimal_period(period, pattern);
  for (Nat r = 0; r < s.modulus_; ++r) {
    if (pattern[r]) s.residues_.push_back(r);
  }
  // An all-empty pattern is a finite set; canonical modulus 1.
  if (s.residues_.empty()) s.modulus_ = 1;
  sort_unique(added);
  sort_unique(removed);
  s.added_ = std::move(added);
  s.removed_ = std::move(removed);
  return s;
}

PeriodicSet PeriodicSet::omega() { return residue(0, 1); }

PeriodicSet PeriodicSet::residue(Nat r, Nat modulus) {
  if (modulus == 0) throw Error(Errc::invalid_argument, "modulus must be positive");
  if (r >= modulus) throw Error(Errc::invalid_argument, "residue must be smaller than modulus");
  return make(modulus, {r}, {}, {});
}

PeriodicSet PeriodicSet::finite(std::vector<Nat> elements) {
  return make(1, {}, std::move(elements), {});
}

PeriodicSet PeriodicSet::make(Nat modulus, std::vector<Nat> residues, std::vector<Nat> added,
                              std::vector<Nat> removed) {
  if (modulus == 0) throw Error(Errc::invalid_argument, "modulus must be positive");
  if (modulus > kMaxModulus) throw Error(Errc::overflow, "modulus exceeds the supported maximum");
  std::vector<char> pattern(modulus, 0);
  for (Nat r : residues) {
    if (r >= modulus) throw Error(Errc::invalid_argument, "residue must be smaller than modulus");
    pattern[r] = 1;
  }
  sort_unique(removed);
  std::vector<Nat> add, del;
  for (Nat x : added) {
    if (!sorted_contains(removed, x) && !pattern[x % modulus]) add.push_back(x);
  }
  for (Nat x : removed) {
    if (pattern[x % modulus]) del.push_back(x);
  }
  return canonical(modulus, pattern, std::move(add), std::move(del));
}

PeriodicSet PeriodicSet::from_progressions(std::span<const Nat> points,
                                           std::span<const Progression> progressions) {
  Nat period = 1;
  Nat threshold = 0;
  for (Nat p : points) threshold = std::max(threshold, p + 1);
  for (const auto& pr : progressions) {
    if (pr.step == 0) {
      threshold = std::max(threshold, pr.start + 1);
    } else {
      period = checked_lcm(period, pr.step);
      threshold = std::max(threshold, pr.start);
    }
  }
  if (threshold > kMaxThreshold) throw Error(Errc::overflow, "exception threshold too large");
  std::vector<char> pattern(period, 0);
  for (const auto& pr : progressions) {
    if (pr.step == 0) continue;
    for (Nat j = pr.start % pr.step; j < period; j += pr.step) pattern[j] = 1;
  }
  std::vector<char> member(threshold, 0);
  for (Nat p : points) member[p] = 1;
  for (const auto& pr : progressions) {
    if (pr.step == 0) {
      member[pr.start] = 1;
      continue;
    }
    for (Nat x = pr.start; x < threshold; x += pr.step) member[x] = 1;
  }
  std::vector<Nat> added, removed;
  for (Nat n = 0; n < threshold; ++n) {
    const bool periodic = pattern[n % period] != 0;
    if (member[n] && !periodic) added.push_back(n);
    if (!member[n] && periodic) removed.push_back(n);
  }
  return canonical(period, pattern, std::move(added), std::move(removed));
}

Nat PeriodicSet::threshold() const noexcept {
  Nat t = 0;
  if (!added_.empty()) t = std::max(t, added_.back() + 1);
  if (!removed_.empty()) t = std::max(t, removed_.back() + 1);
  return t;
}

bool PeriodicSet::in_pattern(Nat n) const noexcept {
  return std::binary_search(residues_.begin(), residues_.end(), n % modulus_);
}

bool PeriodicSet::contains(Nat n) const noexcept {
  if (in_pattern(n)) return !sorted_contains(removed_, n);
  return sorted_contains(added_, n);
}

Nat PeriodicSet::rank(Nat n) const noexcept {
  const Nat q = n / modulus_;
  const Nat r = n % modulus_;
  Nat count = q * residues_.size() + count_below(residues_, r);
  count += count_below(added_, n);
  count -= count_below(removed_, n);
  return count;
}

Nat PeriodicSet::select(Nat k) const {
  if (is_finite()) {
    if (k >= added_.size()) {
      throw Error(Errc::exhausted, "finite set has no element of index " + std::to_string(k));
    }
    return added_[k];
  }
  // rank(hi) > k for this hi: every full period beyond the threshold adds |residues|.
  const Nat periods = (k + removed_.size()) / residues_.size() + 1;
  Nat lo = 0, hi = threshold() + (periods + 1) * modulus_;
  // smallest n with rank(n + 1) > k
  while (lo < hi) {
    const Nat mid = lo + (hi - lo) / 2;
    if (rank(mid + 1) > k) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::optional<Nat> PeriodicSet::next_at_or_after(Nat n) const {
  if (n < threshold()) {
    const Nat k = rank(n);
    if (is_finite() && k >= added_.size()) return std::nullopt;
    return select(k);
  }
  if (is_finite()) return std::nullopt;
  const Nat r = n % modulus_;
  const auto it = std::lower_bound(residues_.begin(), residues_.end(), r);
  if (it != residues_.end()) return n - r + *it;
  return n - r + modulus_ + residues_.front();
}

std::vector<char> PeriodicSet::pattern(Nat period) const {
  std::vector<char> out(period, 0);
  for (Nat base = 0; base < period; base += modulus_) {
    for (Nat r : residues_) out[base + r] = 1;
  }
  return out;
}

namespace {

template <class Op>
PeriodicSet combine(const PeriodicSet& a, const PeriodicSet& b, Op op) {
  const Nat period = checked_lcm(a.modulus(), b.modulus());
  const auto pa = a.pattern(period);
  const auto pb = b.pattern(period);
  std::vector<char> pattern(period);
  for (Nat r = 0; r < period; ++r) pattern[r] = op(pa[r] != 0, pb[r] != 0) ? 1 : 0;
  // Off the exception lists both operands follow their patterns, so only
  // exception points can deviate from the combined pattern.
  std::vector<Nat> candidates;
  for (const auto* v : {&a.added(), &a.removed(), &b.added(), &b.removed()}) {
    candidates.insert(candidates.end(), v->begin(), v->end());
  }
  std::vector<Nat> added, removed;
  for (Nat n : candidates) {
    const bool member = op(a.contains(n), b.contains(n));
    const bool periodic = pattern[n % period] != 0;
    if (member && !periodic) added.push_back(n);
    if (!member && periodic) removed.push_back(n);
  }
  return PeriodicSet::make(period, [&] {
    std::vector<Nat> res;
    for (Nat r = 0; r < period; ++r)
      if (pattern[r]) res.push_back(r);
    return res;
  }(), std::move(added), std::move(removed));
}

}  // namespace

PeriodicSet operator|(const PeriodicSet& a, const PeriodicSet& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

PeriodicSet operator&(const PeriodicSet& a, const PeriodicSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

PeriodicSet operator-(const PeriodicSet& a, const PeriodicSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

PeriodicSet operator~(const PeriodicSet& a) {
  std::vector<Nat> res;
  for (Nat r = 0, i = 0; r < a.modulus(); ++r) {
    if (i < a.residues().size() && a.residues()[i] == r) {
      ++i;
    } else {
      res.push_back(r);
    }
  }
  return PeriodicSet::make(a.modulus(), std::move(res), a.removed(), a.added());
}

bool almost_subset(const PeriodicSet& a, const PeriodicSet& b) {
  const Nat period = checked_lcm(a.modulus(), b.modulus());
  const auto pa = a.pattern(period);
  const auto pb = b.pattern(period);
  for (Nat r = 0; r < period; ++r) {
    if (pa[r] && !pb[r]) return false;
  }
  return true;
}

bool almost_equal(const PeriodicSet& a, const PeriodicSet& b) {
  return a.modulus() == b.modulus() && a.residues() == b.residues();
}

bool almost_disjoint(const PeriodicSet& a, const PeriodicSet& b) {
  const Nat period = checked_lcm(a.modulus(), b.modulus());
  const auto pa = a.pattern(period);
  const auto pb = b.pattern(period);
  for (Nat r = 0; r < period; ++r) {
    if (pa[r] && pb[r]) return false;
  }
  return true;
}

Nat enumerate(const PeriodicSet& a, Nat k) { return a.select(k); }

Nat min_excluding(const PeriodicSet& a, std::span<const Nat> excluded) {
  Nat from = 0;
  while (true) {
    const auto next = a.next_at_or_after(from);
    if (!next) throw Error(Errc::exhausted, "set is exhausted by the excluded elements");
    if (!std::binary_search(excluded.begin(), excluded.end(), *next)) return *next;
    from = *next + 1;
  }
}

namespace {

void write_list(std::ostringstream& out, const std::vector<Nat>& v) {
  out << '{';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << '}';
}

}  // namespace

std::string to_string(const PeriodicSet& a) {
  if (a.is_empty()) return "empty";
  std::ostringstream out;
  bool first = true;
  if (a.modulus() == 1 && !a.residues().empty()) {
    out << "omega";
    first = false;
  } else {
    for (Nat r : a.residues()) {
      out << (first ? "" : " + ") << r << '%' << a.modulus();
      first = false;
    }
  }
  if (!a.added().empty()) {
    if (!first) out << " + ";
    write_list(out, a.added());
    first = false;
  }
  if (!a.removed().empty()) {
    out << " - ";
    write_list(out, a.removed());
  }
  return out.str();
}

}  // namespace fspace
