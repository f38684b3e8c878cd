#pragma once

// Operad morphisms and exhaustive backtracking search for them.

#include <functional>
#include <optional>
#include <vector>

#include "revop/operad.hpp"
#include "revop/predicates.hpp"

namespace revop {

struct OperadMorphism {
  FiniteOperad source;
  FiniteOperad target;
  // maps[n][i] is the index in target P(n) of source element (n, i).
  std::vector<std::vector<std::size_t>> maps;

  ElemRef operator()(ElemRef e) const { return {e.arity, maps.at(e.arity).at(e.index)}; }
};

inline OperadMorphism identity_morphism(const FiniteOperad& op) {
  OperadMorphism f{op, op, {}};
  for (std::size_t n = 0; n <= op.max_arity(); ++n) {
    f.maps.emplace_back(op.carrier_size(n));
    for (std::size_t i = 0; i < op.carrier_size(n); ++i) f.maps[n][i] = i;
  }
  return f;
}

// Identity preservation and compatibility with every admissible composition.
inline LawReport check_morphism(const OperadMorphism& f) {
  const auto& p = f.source;
  const auto& q = f.target;
  if (p.max_arity() != q.max_arity()) throw UsageError("morphism between operads of different max arity");
  if (f.maps.size() != p.max_arity() + 1) throw UsageError("morphism has wrong number of components");
  for (std::size_t n = 0; n <= p.max_arity(); ++n) {
    if (f.maps[n].size() != p.carrier_size(n)) throw UsageError("morphism component has wrong domain size");
    for (auto v : f.maps[n])
      if (v >= q.carrier_size(n)) throw UsageError("morphism component leaves the target carrier");
  }
  LawReport report;
  if (f(p.identity()) != q.identity())
    report.violations.push_back({"identity", p.label(p.identity()), q.label(f(p.identity())), q.label(q.identity())});
  std::vector<ElemRef> mapped;
  for (std::size_t s = 0; s < p.slot_count(); ++s) {
    auto [theta, args] = p.decode_slot(s);
    const ElemRef lhs = f(compose(p, theta, args));
    mapped.clear();
    for (const auto& a : args) mapped.push_back(f(a));
    const ElemRef rhs = compose(q, f(theta), mapped);
    if (lhs != rhs)
      report.violations.push_back({"composition", format_composite(p, theta, args), q.label(lhs), q.label(rhs)});
  }
  return report;
}

inline bool components_bijective(const OperadMorphism& f) {
  for (std::size_t n = 0; n < f.maps.size(); ++n) {
    if (f.source.carrier_size(n) != f.target.carrier_size(n)) return false;
    std::vector<bool> hit(f.target.carrier_size(n), false);
    for (auto v : f.maps[n]) {
      if (hit[v]) return false;
      hit[v] = true;
    }
  }
  return true;
}

namespace detail {

// Backtracking over arity-wise maps P -> Q. Elements are assigned identity
// first, then in (arity, index) order; each composition slot is checked as
// soon as every element it mentions is assigned. Candidates are tried in
// increasing target index, so solutions are produced in lexicographic order
// of the assignment sequence. `visit` returns false to stop.
class MorphismSearch {
 public:
  MorphismSearch(const FiniteOperad& p, const FiniteOperad& q, bool bijective)
      : p_(p), q_(q), bijective_(bijective) {}

  void run(const std::function<bool(const OperadMorphism&)>& visit) {
    if (p_.max_arity() != q_.max_arity()) return;
    const std::size_t max_n = p_.max_arity();
    if (bijective_) {
      for (std::size_t n = 0; n <= max_n; ++n)
        if (p_.carrier_size(n) != q_.carrier_size(n)) return;
      p_profile_ = element_profiles(p_);
      q_profile_ = element_profiles(q_);
    }
    for (std::size_t n = 0; n <= max_n; ++n)
      if (p_.carrier_size(n) > 0 && q_.carrier_size(n) == 0) return;

    order_.push_back(p_.identity());
    for_each_element(p_, [&](ElemRef e) {
      if (e != p_.identity()) order_.push_back(e);
    });
    position_.assign(max_n + 1, {});
    for (std::size_t n = 0; n <= max_n; ++n) position_[n].assign(p_.carrier_size(n), 0);
    for (std::size_t k = 0; k < order_.size(); ++k) position_[order_[k].arity][order_[k].index] = k;

    triggers_.assign(order_.size(), {});
    for (std::size_t s = 0; s < p_.slot_count(); ++s) {
      auto [theta, args] = p_.decode_slot(s);
      std::size_t last = pos(theta);
      std::size_t arity = 0;
      for (const auto& a : args) {
        last = std::max(last, pos(a));
        arity += a.arity;
      }
      last = std::max(last, pos(ElemRef{arity, p_.slot_value(s)}));
      triggers_[last].push_back(s);
    }

    maps_.assign(max_n + 1, {});
    used_.assign(max_n + 1, {});
    for (std::size_t n = 0; n <= max_n; ++n) {
      maps_[n].assign(p_.carrier_size(n), 0);
      used_[n].assign(q_.carrier_size(n), false);
    }
    visit_ = &visit;
    stopped_ = false;
    descend(0);
  }

 private:
  std::size_t pos(ElemRef e) const { return position_[e.arity][e.index]; }

  bool consistent(std::size_t k) {
    std::vector<ElemRef> mapped;
    for (auto s : triggers_[k]) {
      auto [theta, args] = p_.decode_slot(s);
      std::size_t arity = 0;
      mapped.clear();
      for (const auto& a : args) {
        mapped.push_back({a.arity, maps_[a.arity][a.index]});
        arity += a.arity;
      }
      const std::size_t expect = maps_[arity][p_.slot_value(s)];
      if (q_.slot_value(q_.slot({theta.arity, maps_[theta.arity][theta.index]}, mapped)) != expect) return false;
    }
    return true;
  }

  void descend(std::size_t k) {
    if (stopped_) return;
    if (k == order_.size()) {
      OperadMorphism f{p_, q_, maps_};
      if (!(*visit_)(f)) stopped_ = true;
      return;
    }
    const ElemRef e = order_[k];
    auto try_target = [&](std::size_t t) {
      if (bijective_ && (used_[e.arity][t] || p_profile_[e.arity][e.index] != q_profile_[e.arity][t])) return;
      maps_[e.arity][e.index] = t;
      used_[e.arity][t] = true;
      if (consistent(k)) descend(k + 1);
      used_[e.arity][t] = false;
    };
    if (k == 0) {
      try_target(q_.identity().index);
      return;
    }
    for (std::size_t t = 0; t < q_.carrier_size(e.arity) && !stopped_; ++t) try_target(t);
  }

  const FiniteOperad& p_;
  const FiniteOperad& q_;
  bool bijective_;
  std::vector<std::vector<unsigned>> p_profile_, q_profile_;
  std::vector<ElemRef> order_;
  std::vector<std::vector<std::size_t>> position_;
  std::vector<std::vector<std::size_t>> triggers_;
  std::vector<std::vector<std::size_t>> maps_;
  std::vector<std::vector<bool>> used_;
  const std::function<bool(const OperadMorphism&)>* visit_ = nullptr;
  bool stopped_ = false;
};

}  // namespace detail

// First isomorphism p -> q in canonical order, or none after exhausting the
// search. Both operads must pass check_structure.
inline std::optional<OperadMorphism> find_isomorphism(const FiniteOperad& p, const FiniteOperad& q) {
  check_structure(p);
  check_structure(q);
  std::optional<OperadMorphism> found;
  detail::MorphismSearch(p, q, true).run([&](const OperadMorphism& f) {
    found = f;
    return false;
  });
  return found;
}

// Visits every operad morphism p -> q; `visit` returns false to stop early.
inline void for_each_morphism(const FiniteOperad& p, const FiniteOperad& q,
                              const std::function<bool(const OperadMorphism&)>& visit) {
  check_structure(p);
  check_structure(q);
  detail::MorphismSearch(p, q, false).run(visit);
}

inline std::string format_morphism(const OperadMorphism& f) {
  std::string out;
  for_each_element(f.source, [&](ElemRef e) {
    out += f.source.label(e) + " -> " + f.target.label(f(e)) + "\n";
  });
  return out;
}

}  // namespace revop
