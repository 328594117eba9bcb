#include "fspace/compact_open.hpp"

#include <sstream>

#include "fspace/error.hpp"

namespace fspace {

BasicBox BasicBox::full() { return BasicBox{{SubbasicBox{PeriodicSet::omega(), PeriodicSet::omega()}}}; }

BasicBox normalize(std::span<const SubbasicBox> boxes) {
  std::vector<SubbasicBox> parts;
  for (const auto& box : boxes) {
    if (box.a.is_finite()) continue;  // [finite, B] is the whole space
    std::vector<SubbasicBox> next;
    PeriodicSet rest = box.a;
    for (const auto& part : parts) {
      if (auto both = part.a & box.a; !both.is_finite()) next.push_back({both, part.b & box.b});
      if (auto only_old = part.a - box.a; !only_old.is_finite()) next.push_back({only_old, part.b});
      rest = rest - part.a;
    }
    if (!rest.is_finite()) next.push_back({rest, box.b});
    parts = std::move(next);
  }
  PeriodicSet covered;
  for (const auto& part : parts) covered = covered | part.a;
  if (auto uncovered = ~covered; !uncovered.is_finite()) {
    parts.push_back({uncovered, PeriodicSet::omega()});
  }
  return BasicBox{std::move(parts)};
}

bool is_normal_form(const BasicBox& box) {
  PeriodicSet covered;
  for (const auto& c : box.constraints) {
    if (c.a.is_finite() || !almost_disjoint(covered, c.a)) return false;
    covered = covered | c.a;
  }
  return almost_equal(covered, PeriodicSet::omega());
}

EmptinessResult is_empty(const BasicBox& box) {
  if (!is_normal_form(box)) throw Error(Errc::not_normal_form, "is_empty needs a normal-form box");
  EmptinessResult result;
  for (std::size_t i = 0; i < box.constraints.size(); ++i) {
    if (box.constraints[i].b.is_finite()) {
      result.empty = true;
      result.offending = i;
      return result;
    }
  }
  std::vector<MapPart> parts;
  for (const auto& c : box.constraints) {
    parts.push_back({c.a, almost_subset(c.a, c.b) ? ProgressionMap::identity()
                                                  : order_embedding(c.a, c.b)});
  }
  result.witness = combine_piecewise(parts);
  return result;
}

bool member(const ProgressionMap& f, std::span<const SubbasicBox> constraints) {
  for (const auto& c : constraints) {
    if (!almost_subset(image(f, c.a), c.b)) return false;
  }
  return true;
}

Refinement refine(const BasicBox& outer, std::span<const SubbasicBox> extra) {
  if (!is_normal_form(outer)) throw Error(Errc::not_normal_form, "refine needs a normal-form outer box");
  std::vector<SubbasicBox> all = outer.constraints;
  all.insert(all.end(), extra.begin(), extra.end());
  Refinement out{normalize(all), {}};
  for (auto& c : out.box.constraints) {
    int slot = kOutside;
    for (std::size_t m = 0; m < outer.constraints.size(); ++m) {
      if (almost_subset(c.a, outer.constraints[m].a)) {
        slot = static_cast<int>(m);
        break;
      }
    }
    if (slot == kOutside) {
      for (const auto& o : outer.constraints) {
        if (!almost_disjoint(c.a, o.a)) {
          throw Error(Errc::not_normal_form, "refined part straddles outer parts");
        }
      }
    } else {
      c.b = c.b & outer.constraints[slot].b;
    }
    out.cert.assignment.push_back(slot);
  }
  for (std::size_t l = 0; l < out.box.constraints.size(); ++l) {
    const auto& c = out.box.constraints[l];
    if (c.b.is_finite()) {
      throw Error(Errc::empty_box, "refinement is empty: constraint " + std::to_string(l) + " [" +
                                       to_string(c.a) + " -> " + to_string(c.b) +
                                       "] sends an infinite set into a finite one");
    }
  }
  return out;
}

bool validate_cert(const BasicBox& finer, const BasicBox& coarser, const RefinementCert& cert) {
  if (cert.assignment.size() != finer.constraints.size()) return false;
  for (std::size_t l = 0; l < finer.constraints.size(); ++l) {
    const auto& f = finer.constraints[l];
    const int m = cert.assignment[l];
    if (m == kOutside) {
      for (const auto& c : coarser.constraints) {
        if (!almost_disjoint(f.a, c.a)) return false;
      }
      continue;
    }
    if (m < 0 || static_cast<std::size_t>(m) >= coarser.constraints.size()) return false;
    const auto& c = coarser.constraints[m];
    if (!almost_subset(f.a, c.a) || !almost_subset(f.b, c.b)) return false;
  }
  return true;
}

BasicBox identity_nbhd(std::span<const PeriodicSet> partition) {
  std::vector<SubbasicBox> boxes;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i].is_finite()) {
      throw Error(Errc::precondition, "identity_nbhd: set " + std::to_string(i) + " is finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!almost_disjoint(partition[i], partition[j])) {
        throw Error(Errc::precondition, "identity_nbhd: sets " + std::to_string(j) + " and " +
                                            std::to_string(i) + " overlap");
      }
    }
    boxes.push_back({partition[i], partition[i]});
  }
  return normalize(boxes);
}

bool fix_intersect_empty(const PeriodicSet& c, const PeriodicSet& a, const PeriodicSet& b) {
  if (!almost_disjoint(a, b)) throw Error(Errc::precondition, "a and b must be almost disjoint");
  if (b.is_finite()) throw Error(Errc::precondition, "b must be infinite");
  return !(c & a).is_finite() && (c & b).is_finite();
}

PeriodicSet eval_image(const BasicBox& box, const PeriodicSet& seed) {
  if (seed.is_finite()) throw Error(Errc::precondition, "seed must be infinite");
  const BasicBox normal = normalize(box);
  for (const auto& c : normal.constraints) {
    if (almost_subset(seed, c.a)) return c.b;
  }
  throw Error(Errc::straddling_seed,
              "seed " + to_string(seed) + " meets several parts of the box infinitely");
}

std::string to_string(std::span<const SubbasicBox> constraints) {
  if (constraints.empty()) return "[omega -> omega]";
  std::ostringstream out;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    out << (i ? " & " : "") << '[' << to_string(constraints[i].a) << " -> "
        << to_string(constraints[i].b) << ']';
  }
  return out.str();
}

std::string to_string(const BasicBox& box) { return to_string(box.constraints); }

}  // namespace fspace
