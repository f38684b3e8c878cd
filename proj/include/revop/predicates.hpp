#pragma once

// Abstract constancy and surjectivity, quantified over the truncation.

#include <optional>
#include <set>
#include <vector>

#include "revop/operad.hpp"

namespace revop {

// gamma o (phi) = gamma o (phi') for every n <= N and all phi, phi' in P(n).
inline bool is_constant(const FiniteOperad& op, ElemRef gamma) {
  if (gamma.arity != 1) throw UsageError("is_constant needs an arity-1 element");
  if (!op.contains(gamma)) throw UsageError("element reference out of range");
  for (std::size_t n = 0; n <= op.max_arity(); ++n) {
    std::optional<ElemRef> first;
    for (std::size_t i = 0; i < op.carrier_size(n); ++i) {
      const ElemRef arg[] = {ElemRef{n, i}};
      const ElemRef c = compose(op, gamma, arg);
      if (!first) first = c;
      else if (*first != c) return false;
    }
  }
  return true;
}

// theta o (phi) = theta' o (phi) implies theta = theta', for theta, theta' in P(1).
inline bool is_surjective(const FiniteOperad& op, ElemRef phi) {
  if (!op.contains(phi)) throw UsageError("element reference out of range");
  std::set<std::size_t> images;
  const ElemRef arg[] = {phi};
  for (std::size_t i = 0; i < op.carrier_size(1); ++i)
    if (!images.insert(compose(op, ElemRef{1, i}, arg).index).second) return false;
  return true;
}

struct SeparatingWitness {
  ElemRef phi;    // in P(2)
  ElemRef gamma;  // constant, in P(1)
  ElemRef composite;

  friend bool operator==(const SeparatingWitness&, const SeparatingWitness&) = default;
};

// First (phi, gamma) in index order with gamma constant and phi o (gamma, id)
// surjective.
inline std::optional<SeparatingWitness> has_separating_property(const FiniteOperad& op) {
  if (op.max_arity() < 2) throw UsageError("separating property needs max arity at least 2");
  std::vector<ElemRef> constants;
  for (std::size_t g = 0; g < op.carrier_size(1); ++g)
    if (is_constant(op, ElemRef{1, g})) constants.push_back({1, g});
  for (std::size_t p = 0; p < op.carrier_size(2); ++p) {
    const ElemRef phi{2, p};
    for (const auto& gamma : constants) {
      const ElemRef args[] = {gamma, op.identity()};
      const ElemRef e = compose(op, phi, args);
      if (is_surjective(op, e)) return SeparatingWitness{phi, gamma, e};
    }
  }
  return std::nullopt;
}

// Per-element flags used to prune isomorphism search: bit 0 = surjective,
// bit 1 = constant (arity 1 only). Indexed [arity][index].
inline std::vector<std::vector<unsigned>> element_profiles(const FiniteOperad& op) {
  std::vector<std::vector<unsigned>> out(op.max_arity() + 1);
  for_each_element(op, [&](ElemRef e) {
    unsigned flags = is_surjective(op, e) ? 1u : 0u;
    if (e.arity == 1 && is_constant(op, e)) flags |= 2u;
    out[e.arity].push_back(flags);
  });
  return out;
}

}  // namespace revop
