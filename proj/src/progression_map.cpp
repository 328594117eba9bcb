#include "fspace/progression_map.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fspace/error.hpp"

namespace fspace {

namespace {

using Wide = __int128;

Nat narrow(Wide v) {
  if (v < 0 || v > static_cast<Wide>(~Nat{0})) {
    throw Error(Errc::overflow, "map value outside the natural range");
  }
  return static_cast<Nat>(v);
}

Nat checked_mul(Nat a, Nat b, Nat limit) {
  const Wide p = static_cast<Wide>(a) * b;
  if (p > limit) throw Error(Errc::overflow, "modulus product exceeds the supported maximum");
  return static_cast<Nat>(p);
}

// First natural >= from that is congruent to r modulo m.
Nat first_in_class(Nat from, Nat r, Nat m) { return from + (r + m - from % m) % m; }

Nat ceil_div(Nat a, Nat b) { return a / b + (a % b != 0); }

}  // namespace

ProgressionMap::ProgressionMap() : pieces_{AffinePiece{0, 1, 0, 1}} {}

ProgressionMap ProgressionMap::shift(Nat c) {
  ProgressionMap f;
  f.pieces_ = {AffinePiece{0, 1, c, 1}};
  return f;
}

ProgressionMap ProgressionMap::scale(Nat factor) {
  ProgressionMap f;
  f.pieces_ = {AffinePiece{0, 1, 0, factor}};
  return f;
}

ProgressionMap ProgressionMap::constant(Nat value) {
  ProgressionMap f;
  f.pieces_ = {AffinePiece{0, 1, value, 0}};
  return f;
}

ProgressionMap ProgressionMap::from_affine_oracle(Nat period, Nat threshold,
                                                  const std::function<Nat(Nat)>& fn) {
  if (period == 0 || period > kMaxModulus) throw Error(Errc::overflow, "map period out of range");
  if (threshold > kMaxThreshold) throw Error(Errc::overflow, "map threshold out of range");
  ProgressionMap f;
  f.modulus_ = period;
  f.table_.resize(threshold);
  for (Nat n = 0; n < threshold; ++n) f.table_[n] = fn(n);
  f.pieces_.resize(period);
  for (Nat r = 0; r < period; ++r) {
    const Nat a = first_in_class(threshold, r, period);
    const Nat v0 = fn(a), v1 = fn(a + period), v2 = fn(a + 2 * period);
    if (v1 < v0 || v2 - v1 != v1 - v0) {
      throw std::logic_error("from_affine_oracle: class " + std::to_string(r) + " mod " +
                             std::to_string(period) + " is not affine");
    }
    f.pieces_[r] = AffinePiece{a, period, v0, v1 - v0};
  }
  f.canonicalize();
  return f;
}

ProgressionMap ProgressionMap::from_pieces(std::span<const AffinePiece> pieces,
                                           const std::map<Nat, Nat>& table) {
  Nat period = 1;
  Nat threshold = table.empty() ? 0 : table.rbegin()->first + 1;
  for (const auto& p : pieces) {
    if (p.d == 0) throw Error(Errc::invalid_argument, "piece step must be positive");
    period = checked_lcm(period, p.d);
    threshold = std::max(threshold, p.a);
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const auto& p = pieces[i];
      const auto& q = pieces[j];
      const Nat g = std::gcd(p.d, q.d);
      if (p.a % g == q.a % g) {
        throw Error(Errc::invalid_argument, "pieces " + std::to_string(i) + " and " +
                                                std::to_string(j) + " overlap");
      }
    }
  }
  return from_affine_oracle(period, threshold, [&](Nat n) -> Nat {
    if (auto it = table.find(n); it != table.end()) return it->second;
    for (const auto& p : pieces) {
      if (n >= p.a && (n - p.a) % p.d == 0) {
        return narrow(static_cast<Wide>(p.b) + static_cast<Wide>(p.e) * ((n - p.a) / p.d));
      }
    }
    throw Error(Errc::invalid_argument, "no piece or table entry covers " + std::to_string(n));
  });
}

ProgressionMap ProgressionMap::from_domain_pieces(std::span<const DomainPiece> pieces,
                                                  const std::map<Nat, Nat>& table) {
  Nat period = 1;
  Nat threshold = table.empty() ? 0 : table.rbegin()->first + 1;
  PeriodicSet covered;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& [domain, p] = pieces[i];
    if (p.d == 0) throw Error(Errc::invalid_argument, "piece step must be positive");
    const auto progression = PeriodicSet::residue(p.a % p.d, p.d) - [&] {
      std::vector<Nat> below;
      for (Nat n = p.a % p.d; n < p.a; n += p.d) below.push_back(n);
      return PeriodicSet::finite(std::move(below));
    }();
    if (const auto stray = domain - progression; !stray.is_empty()) {
      throw Error(Errc::invalid_argument, "domain of piece " + std::to_string(i) +
                                              " leaves its progression at " + to_string(stray));
    }
    if (const auto both = covered & domain; !both.is_empty()) {
      throw Error(Errc::invalid_argument,
                  "piece " + std::to_string(i) + " overlaps earlier pieces on " + to_string(both));
    }
    covered = covered | domain;
    period = checked_lcm(period, checked_lcm(p.d, domain.modulus()));
    threshold = std::max({threshold, p.a, domain.threshold()});
  }
  for (const auto& [n, v] : table) covered = covered | PeriodicSet::finite({n});
  if (covered != PeriodicSet::omega()) {
    throw Error(Errc::invalid_argument,
                "pieces and table do not cover " + to_string(~covered));
  }
  return from_affine_oracle(period, threshold, [&](Nat n) -> Nat {
    if (auto it = table.find(n); it != table.end()) return it->second;
    for (const auto& [domain, p] : pieces) {
      if (domain.contains(n)) {
        return narrow(static_cast<Wide>(p.b) + static_cast<Wide>(p.e) * ((n - p.a) / p.d));
      }
    }
    throw std::logic_error("from_domain_pieces: uncovered natural");
  });
}

void ProgressionMap::canonicalize() {
  const Nat m = modulus_;
  // Each class rule extends to the affine function n -> (mu + e*n) / m on the
  // integers; classes with equal (e, mu) can share a coarser period.
  std::vector<Wide> mu(m);
  for (Nat r = 0; r < m; ++r) {
    mu[r] = static_cast<Wide>(pieces_[r].b) * m - static_cast<Wide>(pieces_[r].e) * pieces_[r].a;
  }
  Nat period = m;
  for (Nat p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    bool ok = true;
    for (Nat r = p; r < m && ok; ++r) {
      ok = pieces_[r].e == pieces_[r % p].e && mu[r] == mu[r % p];
    }
    if (ok) {
      period = p;
      break;
    }
  }
  const Nat t0 = threshold();
  std::vector<AffinePiece> reduced(period);
  for (Nat c = 0; c < period; ++c) {
    const Nat a = first_in_class(t0, c, period);
    const Wide e = pieces_[c].e;
    reduced[c] = AffinePiece{a, period, narrow((mu[c] + e * a) / m), narrow(e * period / m)};
  }
  modulus_ = period;
  pieces_ = std::move(reduced);
  // Lower the threshold while the table agrees with the rule of its class.
  while (!table_.empty()) {
    const Nat n = table_.size() - 1;
    auto& piece = pieces_[n % modulus_];
    const Wide predicted =
        static_cast<Wide>(piece.b) - static_cast<Wide>(piece.e) * ((piece.a - n) / modulus_);
    if (predicted != static_cast<Wide>(table_.back())) break;
    piece.b = table_.back();
    piece.a = n;
    table_.pop_back();
  }
}

Nat ProgressionMap::operator()(Nat n) const {
  if (n < table_.size()) return table_[n];
  const auto& p = pieces_[n % modulus_];
  return narrow(static_cast<Wide>(p.b) + static_cast<Wide>(p.e) * ((n - p.a) / modulus_));
}

PeriodicSet image(const ProgressionMap& f, const PeriodicSet& a) {
  const Nat period = checked_lcm(f.modulus(), a.modulus());
  const Nat start = std::max(f.threshold(), a.threshold());
  std::vector<Nat> points;
  for (Nat n = 0; n < start; ++n) {
    if (a.contains(n)) points.push_back(f(n));
  }
  std::vector<Progression> progressions;
  for (Nat c = 0; c < period; ++c) {
    const Nat n0 = first_in_class(start, c, period);
    if (!a.contains(n0)) continue;
    const Nat e = f.pieces()[c % f.modulus()].e;
    progressions.push_back({f(n0), checked_mul(e, period / f.modulus(), kMaxModulus)});
  }
  return PeriodicSet::from_progressions(points, progressions);
}

PeriodicSet preimage(const ProgressionMap& f, const PeriodicSet& b) {
  const Nat period = checked_mul(f.modulus(), b.modulus(), kMaxModulus);
  Nat start = f.threshold();
  const Nat tb = b.threshold();
  for (const auto& p : f.pieces()) {
    if (p.e == 0 || p.b >= tb) continue;
    start = std::max(start, p.a + f.modulus() * ceil_div(tb - p.b, p.e));
  }
  return PeriodicSet::from_predicate(period, start, [&](Nat n) { return b.contains(f(n)); });
}

ProgressionMap compose(const ProgressionMap& f, const ProgressionMap& g) {
  const Nat period = checked_mul(f.modulus(), g.modulus(), kMaxModulus);
  Nat start = g.threshold();
  const Nat tf = f.threshold();
  for (const auto& p : g.pieces()) {
    if (p.e == 0 || p.b >= tf) continue;
    start = std::max(start, p.a + g.modulus() * ceil_div(tf - p.b, p.e));
  }
  return ProgressionMap::from_affine_oracle(period, start, [&](Nat n) { return f(g(n)); });
}

ProgressionMap combine_piecewise(std::span<const MapPart> parts) {
  if (parts.empty()) throw Error(Errc::invalid_argument, "combine_piecewise needs at least one part");
  PeriodicSet covered;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!almost_disjoint(covered, parts[i].domain)) {
      throw Error(Errc::precondition,
                  "part " + std::to_string(i) + " overlaps earlier parts infinitely");
    }
    covered = covered | parts[i].domain;
  }
  if (!almost_equal(covered, PeriodicSet::omega())) {
    throw Error(Errc::precondition, "parts do not cover almost all of omega");
  }
  std::vector<PeriodicSet> domains;
  domains.reserve(parts.size());
  PeriodicSet taken;
  for (const auto& part : parts) {
    domains.push_back(part.domain - taken);
    taken = taken | part.domain;
  }
  domains.front() = domains.front() | ~covered;
  Nat period = 1, start = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    period = checked_lcm(period, checked_lcm(domains[i].modulus(), parts[i].map.modulus()));
    start = std::max({start, domains[i].threshold(), parts[i].domain.threshold(),
                      parts[i].map.threshold()});
  }
  start = std::max(start, covered.threshold());
  return ProgressionMap::from_affine_oracle(period, start, [&](Nat n) -> Nat {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (domains[i].contains(n)) return parts[i].map(n);
    }
    throw std::logic_error("combine_piecewise: uncovered natural");
  });
}

ProgressionMap order_embedding(const PeriodicSet& a, const PeriodicSet& b) {
  if (a.is_finite() || b.is_finite()) {
    throw Error(Errc::invalid_argument, "order_embedding needs infinite sets");
  }
  const Nat per_a = a.residues().size();
  const Nat per_b = b.residues().size();
  const Nat block = std::lcm(per_a, per_b);
  const Nat period = checked_mul(a.modulus(), block / per_a, kMaxModulus);
  const Nat start = std::max(a.threshold(), a.select(b.rank(b.threshold())));
  return ProgressionMap::from_affine_oracle(period, start, [&](Nat n) {
    return a.contains(n) ? b.select(a.rank(n)) : n;
  });
}

MapFlags classify(const ProgressionMap& f) {
  MapFlags flags;
  flags.finite_to_one = std::all_of(f.pieces().begin(), f.pieces().end(),
                                    [](const AffinePiece& p) { return p.e > 0; });
  if (!flags.finite_to_one) return flags;
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const Nat g = std::gcd(pieces[i].e, pieces[j].e);
      if (pieces[i].b % g == pieces[j].b % g) return flags;
    }
  }
  std::vector<Nat> values = f.table();
  std::sort(values.begin(), values.end());
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) return flags;
  for (Nat v : values) {
    for (const auto& p : pieces) {
      if (v >= p.b && (v - p.b) % p.e == 0) return flags;
    }
  }
  flags.injective = true;
  return flags;
}

std::string to_string(const ProgressionMap& f) {
  if (f.modulus() == 1 && f.threshold() == 0) {
    const auto& p = f.pieces().front();
    if (p.e == 1 && p.b == 0) return "id";
    if (p.e == 1) return "shift(" + std::to_string(p.b) + ")";
    if (p.e == 2 && p.b == 0) return "double";
    if (p.e == 0) return "const(" + std::to_string(p.b) + ")";
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& p : f.pieces()) {
    out << (first ? "" : " ") << "piece(" << p.a << ',' << p.d << " -> " << p.b << ',' << p.e
        << ')';
    first = false;
  }
  if (!f.table().empty()) {
    out << " table{";
    for (Nat n = 0; n < f.threshold(); ++n) out << (n ? "," : "") << n << ':' << f.table()[n];
    out << '}';
  }
  return out.str();
}

}  // namespace fspace
