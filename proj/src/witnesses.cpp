#include "fspace/witnesses.hpp"

#include <algorithm>
#include <string>

#include "fspace/error.hpp"
#include "fspace/kernels.hpp"

namespace fspace {

namespace {

std::string idx(std::size_t n) { return std::to_string(n); }

void require_family(std::span<const PeriodicSet> sets, const char* what) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].is_finite()) throw Error(Errc::precondition, std::string(what) + " " + idx(i) + " is finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (!almost_disjoint(sets[i], sets[j])) {
        throw Error(Errc::precondition, std::string(what) + "s " + idx(j) + " and " + idx(i) + " overlap");
      }
    }
  }
}

bool parity_matches(std::size_t n, Parity p) { return (n % 2 == 0) == (p == Parity::even); }

// Pieces of `part` cut by every C_j, finite pieces dropped. Each comes with the
// set of j whose C_j it lies in.
struct Atom {
  PeriodicSet set;
  std::vector<std::size_t> in;
};

std::vector<Atom> atoms_of(const PeriodicSet& part, std::span<const PeriodicSet> v_parts) {
  std::vector<Atom> atoms{{part, {}}};
  for (std::size_t j = 0; j < v_parts.size(); ++j) {
    std::vector<Atom> next;
    for (auto& atom : atoms) {
      auto inside = atom.set & v_parts[j];
      auto outside = atom.set - v_parts[j];
      if (!inside.is_finite()) {
        auto in = atom.in;
        in.push_back(j);
        next.push_back({std::move(inside), std::move(in)});
      }
      if (!outside.is_finite()) next.push_back({std::move(outside), std::move(atom.in)});
    }
    atoms = std::move(next);
  }
  return atoms;
}

// The map moving A_n into A_m atom by atom and fixing the rest, or nothing when
// some atom has no infinite target.
std::optional<ProgressionMap> move_part(std::span<const PeriodicSet> v_parts, const ParityApparatus& app,
                                        std::size_t n, std::size_t m) {
  const auto atoms = atoms_of(app.parts[n], v_parts);
  PeriodicSet moved;
  std::vector<MapPart> parts;
  parts.push_back({PeriodicSet{}, ProgressionMap::identity()});
  for (const auto& atom : atoms) {
    PeriodicSet target = app.parts[m] - app.parts[n];
    for (std::size_t j : atom.in) target = target & v_parts[j];
    if (target.is_finite()) return std::nullopt;
    parts.push_back({atom.set, order_embedding(atom.set, target)});
    moved = moved | atom.set;
  }
  parts.front().domain = ~moved;
  return combine_piecewise(parts);
}

}  // namespace

ParityApparatus ParityApparatus::residues(Nat modulus) {
  if (modulus == 0) throw Error(Errc::invalid_argument, "apparatus modulus must be positive");
  ParityApparatus app;
  for (Nat r = 0; r < modulus; ++r) app.parts.push_back(PeriodicSet::residue(r, modulus));
  return app;
}

ParityApparatus ParityApparatus::from_parts(std::vector<PeriodicSet> parts) {
  require_family(parts, "part");
  return ParityApparatus{std::move(parts)};
}

std::vector<BasicBox> locally_finite_family(const PeriodicSet& a, std::span<const PeriodicSet> pieces) {
  const PeriodicSet b = ~a;
  if (b.is_finite()) throw Error(Errc::precondition, "complement of a must be infinite");
  require_family(pieces, "piece");
  std::vector<BasicBox> family;
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    if (!almost_subset(pieces[n], a)) throw Error(Errc::precondition, "piece " + idx(n) + " is not inside a");
    const std::vector<SubbasicBox> u{{pieces[n], b}, {a - pieces[n], a}};
    family.push_back(normalize(u));
  }
  return family;
}

BasicBox separating_nbhd(const ProgressionMap& f, const PeriodicSet& a, std::span<const PeriodicSet> pieces) {
  const PeriodicSet b = ~a;
  if (b.is_finite()) throw Error(Errc::precondition, "complement of a must be infinite");
  require_family(pieces, "piece");
  if (almost_subset(image(f, a), a)) return normalize(std::vector<SubbasicBox>{{a, a}});
  const PeriodicSet to_b = preimage(f, b);
  for (const auto& piece : pieces) {
    const auto hit = piece & to_b;
    if (!hit.is_finite()) return normalize(std::vector<SubbasicBox>{{hit, b}});
  }
  return normalize(std::vector<SubbasicBox>{{to_b & a, b}});
}

BasicBox fix_box(const ParityApparatus& app, std::size_t n, std::size_t m) {
  if (n == m) throw Error(Errc::invalid_argument, "Fix needs two distinct indices");
  if (std::max(n, m) >= app.size()) {
    throw Error(Errc::invalid_argument, "index " + idx(std::max(n, m)) + " out of range");
  }
  std::vector<SubbasicBox> cs;
  for (std::size_t k = 0; k < std::max(n, m); ++k) {
    if (k != n && k != m) cs.push_back({app.parts[k], app.parts[k]});
  }
  return normalize(cs);
}

std::vector<SubbasicBox> disjunct(const ParityApparatus& app, std::size_t n, std::size_t m) {
  if (n == m) throw Error(Errc::invalid_argument, "a disjunct needs two distinct indices");
  if (std::max(n, m) >= app.size()) {
    throw Error(Errc::invalid_argument, "index " + idx(std::max(n, m)) + " out of range");
  }
  std::vector<SubbasicBox> cs{{app.parts[n], app.parts[m]}};
  for (std::size_t k = 0; k < std::max(n, m); ++k) {
    if (k != n && k != m) cs.push_back({app.parts[k], app.parts[k]});
  }
  return cs;
}

bool parity_member(const ProgressionMap& f, const ParityApparatus& app, Parity parity, std::size_t bound) {
  if (bound > app.size()) throw Error(Errc::invalid_argument, "bound exceeds the apparatus size");
  std::vector<PeriodicSet> images;
  std::vector<char> fixes;
  for (std::size_t k = 0; k < bound; ++k) {
    images.push_back(image(f, app.parts[k]));
    fixes.push_back(almost_subset(images.back(), app.parts[k]));
  }
  // fixed_below[k]: number of k' < k that f fixes.
  std::vector<std::size_t> fixed_below(bound + 1, 0);
  for (std::size_t k = 0; k < bound; ++k) fixed_below[k + 1] = fixed_below[k] + fixes[k];
  for (std::size_t n = 0; n < bound; ++n) {
    if (!parity_matches(n, parity)) continue;
    for (std::size_t m = 0; m < bound; ++m) {
      if (m == n || !parity_matches(m, parity)) continue;
      if (!almost_subset(images[n], app.parts[m])) continue;
      const std::size_t top = std::max(n, m), low = std::min(n, m);
      // All k < top except n and m must be fixed; `low` is below top, `top` is not.
      const std::size_t need = top - 1;
      if (fixed_below[top] - fixes[low] == need) return true;
    }
  }
  return false;
}

ParityReport parity_disjoint_upto(const ParityApparatus& app, std::size_t bound) {
  if (bound > app.size()) throw Error(Errc::invalid_argument, "bound exceeds the apparatus size");
  std::vector<BasicBox> even, odd;
  std::vector<std::pair<std::size_t, std::size_t>> even_ix, odd_ix;
  for (std::size_t n = 0; n < bound; ++n) {
    for (std::size_t m = 0; m < bound; ++m) {
      if (n == m || n % 2 != m % 2) continue;
      auto& boxes = n % 2 == 0 ? even : odd;
      auto& ix = n % 2 == 0 ? even_ix : odd_ix;
      boxes.push_back(normalize(disjunct(app, n, m)));
      ix.emplace_back(n, m);
    }
  }
  ParityReport report;
  report.pairs_checked = even.size() * odd.size();
  if (const auto hit = kernels::first_nonempty_pair_parallel(even, odd, false)) {
    report.disjoint = false;
    const auto [n, m] = even_ix[hit->first];
    const auto [p, q] = odd_ix[hit->second];
    report.offending = std::array<std::size_t, 4>{n, m, p, q};
  }
  return report;
}

bool certify_witness(const ApproachWitness& w, std::span<const PeriodicSet> v_parts,
                     const ParityApparatus& app) {
  for (const auto& c : v_parts) {
    if (!member(w.map, std::vector<SubbasicBox>{{c, c}})) return false;
  }
  return member(w.map, disjunct(app, w.from, w.to));
}

ApproachWitness approach_identity_witness(std::span<const PeriodicSet> v_parts, const ParityApparatus& app,
                                          std::span<const std::size_t> indices) {
  std::vector<std::size_t> pool(indices.begin(), indices.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() < 2) throw Error(Errc::precondition, "I needs at least two indices");
  if (pool.back() >= app.size()) throw Error(Errc::invalid_argument, "index " + idx(pool.back()) + " out of range");

  auto meets = [&](std::size_t n, std::size_t j) { return !(app.parts[n] & v_parts[j]).is_finite(); };
  auto attempt = [&](std::size_t n, std::size_t m) -> std::optional<ApproachWitness> {
    auto map = move_part(v_parts, app, n, m);
    if (!map) return std::nullopt;
    ApproachWitness w{std::move(*map), n, m};
    if (!certify_witness(w, v_parts, app)) return std::nullopt;
    return w;
  };

  // Halve by C_N, ..., C_2; ties keep the part missing C_j.
  std::vector<std::size_t> keep = pool;
  for (std::size_t j = v_parts.size(); j-- > 1 && keep.size() > 2;) {
    std::vector<std::size_t> missing, meeting;
    for (std::size_t n : keep) (meets(n, j) ? meeting : missing).push_back(n);
    keep = missing.size() >= meeting.size() ? std::move(missing) : std::move(meeting);
  }
  if (keep.size() >= 2) {
    std::size_t n = keep[0], m = keep[1];
    // [C_1, C_1] rules out moving a part meeting C_1 into one that does not.
    if (!v_parts.empty() && meets(n, 0) && !meets(m, 0)) std::swap(n, m);
    if (auto w = attempt(n, m)) return *w;
  }
  for (std::size_t n : pool) {
    for (std::size_t m : pool) {
      if (n == m) continue;
      if (auto w = attempt(n, m)) return *w;
    }
  }
  throw Error(Errc::search_failure, "no pair of I admits a witness in the neighbourhood");
}

std::vector<SubbasicBox> gdelta_family(const PeriodicSet& a, const PeriodicSet& b, const ProgressionMap& f,
                                       std::span<const PeriodicSet> pieces) {
  if (!almost_disjoint(a, b)) throw Error(Errc::precondition, "A and B must be almost disjoint");
  require_family(pieces, "piece");
  std::vector<SubbasicBox> boxes;
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    if (!almost_subset(pieces[n], a)) throw Error(Errc::precondition, "piece " + idx(n) + " is not inside A");
    auto img = image(f, pieces[n]);
    if (!almost_subset(img, b)) throw Error(Errc::precondition, "f does not send piece " + idx(n) + " into B");
    boxes.push_back({pieces[n], std::move(img)});
  }
  return boxes;
}

std::vector<PeriodicSet> dyadic_pieces(std::size_t count) {
  std::vector<PeriodicSet> pieces;
  for (std::size_t n = 0; n < count; ++n) {
    const Nat step = Nat{1} << (n + 2);
    if (step > kMaxModulus) throw Error(Errc::overflow, "dyadic piece " + idx(n) + " exceeds the modulus cap");
    pieces.push_back(PeriodicSet::residue(step / 2, step));
  }
  return pieces;
}

}  // namespace fspace
