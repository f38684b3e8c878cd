#pragma once

// The monad (S, mu, eta) induced by a truncated operad on finite sets X:
// SX = sum over n <= N of P(n) x X^n. mu composes operad elements and
// concatenates variable lists; the reversed operad's mu composes the inner
// elements in reverse order but keeps the variable order. iota reverses the
// variable list and is a monad isomorphism S -> rev S.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "revop/isomorphism.hpp"
#include "revop/operad.hpp"

namespace revop {

struct FiniteSetX {
  std::size_t size = 0;
};

struct MonadTerm {
  ElemRef operation;
  std::vector<std::size_t> xs;

  friend auto operator<=>(const MonadTerm&, const MonadTerm&) = default;
  friend bool operator==(const MonadTerm&, const MonadTerm&) = default;
};

// An element of S(SX).
struct NestedTerm {
  ElemRef operation;
  std::vector<MonadTerm> inner;

  friend bool operator==(const NestedTerm&, const NestedTerm&) = default;
};

// An element of S(S(SX)), used for the associativity law.
struct TripleTerm {
  ElemRef operation;
  std::vector<NestedTerm> inner;
};

// Sampling parameters for sets larger than the exhaustive bound.
struct ScanOptions {
  std::size_t exhaustive_limit = 3;
  std::size_t samples = 20000;
  std::uint64_t seed = 0x5eed0f0e5ull;
};

inline std::string format_term(const FiniteOperad& op, const MonadTerm& t) {
  std::string out = "(" + op.label(t.operation) + ", [";
  for (std::size_t i = 0; i < t.xs.size(); ++i) out += (i ? "," : "") + std::to_string(t.xs[i]);
  return out + "])";
}

inline std::string format_term(const FiniteOperad& op, const NestedTerm& t) {
  std::string out = "(" + op.label(t.operation) + ", [";
  for (std::size_t i = 0; i < t.inner.size(); ++i) out += (i ? ", " : "") + format_term(op, t.inner[i]);
  return out + "])";
}

inline std::string format_term(const FiniteOperad& op, const TripleTerm& t) {
  std::string out = "(" + op.label(t.operation) + ", [";
  for (std::size_t i = 0; i < t.inner.size(); ++i) out += (i ? ", " : "") + format_term(op, t.inner[i]);
  return out + "])";
}

inline MonadTerm unit(const FiniteOperad& op, FiniteSetX set, std::size_t x) {
  if (x >= set.size) throw UsageError("element " + std::to_string(x) + " not in a set of size " + std::to_string(set.size));
  return {op.identity(), {x}};
}

namespace detail {

template <bool Reversed>
MonadTerm multiply(const FiniteOperad& op, const NestedTerm& t) {
  if (t.inner.size() != t.operation.arity)
    throw ArityMismatch("nested term has " + std::to_string(t.inner.size()) + " inner terms for an arity-" +
                        std::to_string(t.operation.arity) + " element");
  std::vector<ElemRef> args;
  MonadTerm out;
  for (const auto& in : t.inner) {
    if (in.xs.size() != in.operation.arity) throw ArityMismatch("inner term has the wrong number of variables");
    args.push_back(in.operation);
    out.xs.insert(out.xs.end(), in.xs.begin(), in.xs.end());
  }
  if constexpr (Reversed) std::reverse(args.begin(), args.end());
  out.operation = compose(op, t.operation, args);
  return out;
}

}  // namespace detail

// (theta o (theta_1, ..., theta_n), x_1^1, ..., x_n^{k_n}). Throws
// TruncationOverflow when the total arity exceeds N.
inline MonadTerm mu(const FiniteOperad& op, const NestedTerm& t) { return detail::multiply<false>(op, t); }

// (theta o (theta_n, ..., theta_1), x_1^1, ..., x_n^{k_n}): multiplication of
// the monad induced by reverse(op).
inline MonadTerm mu_rev(const FiniteOperad& op, const NestedTerm& t) { return detail::multiply<true>(op, t); }

inline MonadTerm iota(MonadTerm t) {
  std::reverse(t.xs.begin(), t.xs.end());
  return t;
}

// Calls fn(span) for every word of `length` letters over {0, ..., size-1}.
template <class Fn>
void for_each_word(std::size_t size, std::size_t length, Fn&& fn) {
  std::vector<std::size_t> w(length, 0);
  if (length > 0 && size == 0) return;
  while (true) {
    fn(std::span<const std::size_t>(w));
    std::size_t pos = length;
    while (true) {
      if (pos == 0) return;
      --pos;
      if (++w[pos] < size) break;
      w[pos] = 0;
    }
  }
}

template <class Fn>
void for_each_term(const FiniteOperad& op, FiniteSetX set, Fn&& fn) {
  for_each_element(op, [&](ElemRef e) {
    for_each_word(set.size, e.arity, [&](std::span<const std::size_t> xs) {
      fn(MonadTerm{e, std::vector<std::size_t>(xs.begin(), xs.end())});
    });
  });
}

inline std::vector<MonadTerm> all_terms(const FiniteOperad& op, FiniteSetX set) {
  std::vector<MonadTerm> out;
  for_each_term(op, set, [&](const MonadTerm& t) { out.push_back(t); });
  return out;
}

namespace detail {

// Splits a flat word into consecutive inner terms with the given operations.
inline std::vector<MonadTerm> split_terms(std::span<const ElemRef> ops, std::span<const std::size_t> xs) {
  std::vector<MonadTerm> out;
  std::size_t pos = 0;
  for (const auto& o : ops) {
    out.push_back({o, std::vector<std::size_t>(xs.begin() + pos, xs.begin() + pos + o.arity)});
    pos += o.arity;
  }
  return out;
}

}  // namespace detail

// Every admissible element of S(SX): total inner arity at most N.
template <class Fn>
void for_each_nested_term(const FiniteOperad& op, FiniteSetX set, Fn&& fn) {
  const std::size_t max_n = op.max_arity();
  for (std::size_t n = 0; n <= max_n; ++n) {
    if (op.carrier_size(n) == 0) continue;
    for_each_arity_vector(n, max_n, [&](std::span<const std::size_t> ks) {
      std::size_t total = 0;
      for (auto k : ks) total += k;
      for_each_element_tuple(op, ks, [&](std::span<const ElemRef> inner_ops) {
        for_each_word(set.size, total, [&](std::span<const std::size_t> xs) {
          auto inner = detail::split_terms(inner_ops, xs);
          for (std::size_t t = 0; t < op.carrier_size(n); ++t) fn(NestedTerm{ElemRef{n, t}, inner});
        });
      });
    });
  }
}

// Every element of S(S(SX)) on which both bracketings of mu are defined.
template <class Fn>
void for_each_triple_term(const FiniteOperad& op, FiniteSetX set, Fn&& fn) {
  for_each_associativity_instance(op, [&](ElemRef theta, std::span<const ElemRef> middle, std::span<const ElemRef> inner) {
    std::size_t total = 0;
    for (const auto& e : inner) total += e.arity;
    for_each_word(set.size, total, [&](std::span<const std::size_t> xs) {
      auto leaves = detail::split_terms(inner, xs);
      TripleTerm t{theta, {}};
      std::size_t pos = 0;
      for (const auto& m : middle) {
        t.inner.push_back({m, std::vector<MonadTerm>(leaves.begin() + pos, leaves.begin() + pos + m.arity)});
        pos += m.arity;
      }
      fn(t);
    });
  });
}

namespace detail {

// Random admissible nested term; nullopt if the draw hit an empty carrier.
inline std::optional<NestedTerm> random_nested_term(const FiniteOperad& op, FiniteSetX set, std::mt19937_64& rng) {
  const std::size_t max_n = op.max_arity();
  std::uniform_int_distribution<std::size_t> arity(0, max_n);
  const std::size_t n = arity(rng);
  if (op.carrier_size(n) == 0) return std::nullopt;
  std::vector<std::size_t> ks(n);
  std::size_t total = 0;
  for (auto& k : ks) {
    k = arity(rng);
    total += k;
    if (op.carrier_size(k) == 0) return std::nullopt;
  }
  if (total > max_n || (total > 0 && set.size == 0)) return std::nullopt;
  auto pick = [&](std::size_t a) {
    return ElemRef{a, std::uniform_int_distribution<std::size_t>(0, op.carrier_size(a) - 1)(rng)};
  };
  NestedTerm t{pick(n), {}};
  for (auto k : ks) {
    MonadTerm in{pick(k), {}};
    for (std::size_t j = 0; j < k; ++j) in.xs.push_back(std::uniform_int_distribution<std::size_t>(0, set.size - 1)(rng));
    t.inner.push_back(std::move(in));
  }
  return t;
}

template <class Fn>
void for_each_nested_term_scan(const FiniteOperad& op, FiniteSetX set, const ScanOptions& opt, Fn&& fn) {
  if (set.size <= opt.exhaustive_limit) {
    for_each_nested_term(op, set, fn);
    return;
  }
  std::mt19937_64 rng(opt.seed);
  std::size_t drawn = 0;
  for (std::size_t attempts = 0; drawn < opt.samples && attempts < opt.samples * 64; ++attempts) {
    if (auto t = random_nested_term(op, set, rng)) {
      fn(*t);
      ++drawn;
    }
  }
}

}  // namespace detail

// Unit laws mu . eta_S = id = mu . S eta on SX and associativity
// mu . mu_S = mu . S mu on every admissible element of S^3 X.
inline LawReport check_monad_laws(const FiniteOperad& op, FiniteSetX set, const ScanOptions& opt = {}) {
  check_structure(op);
  LawReport report;
  for_each_term(op, set, [&](const MonadTerm& t) {
    const MonadTerm left = mu(op, NestedTerm{op.identity(), {t}});
    if (left != t) report.violations.push_back({"left unit", format_term(op, t), format_term(op, left), format_term(op, t)});
    NestedTerm s_eta{t.operation, {}};
    for (auto x : t.xs) s_eta.inner.push_back({op.identity(), {x}});
    const MonadTerm right = mu(op, s_eta);
    if (right != t) report.violations.push_back({"right unit", format_term(op, t), format_term(op, right), format_term(op, t)});
  });

  auto check_assoc = [&](const TripleTerm& t) {
    // mu_S first: flatten the outer two levels.
    NestedTerm outer_first;
    {
      std::vector<ElemRef> mids;
      for (const auto& m : t.inner) {
        mids.push_back(m.operation);
        outer_first.inner.insert(outer_first.inner.end(), m.inner.begin(), m.inner.end());
      }
      outer_first.operation = compose(op, t.operation, mids);
    }
    NestedTerm inner_first{t.operation, {}};
    for (const auto& m : t.inner) inner_first.inner.push_back(mu(op, m));
    const MonadTerm lhs = mu(op, outer_first);
    const MonadTerm rhs = mu(op, inner_first);
    if (lhs != rhs) report.violations.push_back({"associativity", format_term(op, t), format_term(op, lhs), format_term(op, rhs)});
  };
  if (set.size <= opt.exhaustive_limit) {
    for_each_triple_term(op, set, check_assoc);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto top = detail::random_nested_term(op, set, rng);
      if (!top) continue;
      // Grow each inner term into a nested term whose arity matches.
      TripleTerm t{top->operation, {}};
      bool ok = true;
      std::size_t leaves = 0;
      for (const auto& in : top->inner) {
        NestedTerm m{in.operation, {}};
        for (std::size_t j = 0; j < in.operation.arity && ok; ++j) {
          const std::size_t a = std::uniform_int_distribution<std::size_t>(0, op.max_arity())(rng);
          if (op.carrier_size(a) == 0) {
            ok = false;
            break;
          }
          MonadTerm leaf{{a, std::uniform_int_distribution<std::size_t>(0, op.carrier_size(a) - 1)(rng)}, {}};
          for (std::size_t k = 0; k < a; ++k) leaf.xs.push_back(std::uniform_int_distribution<std::size_t>(0, set.size - 1)(rng));
          leaves += a;
          m.inner.push_back(std::move(leaf));
        }
        t.inner.push_back(std::move(m));
      }
      if (ok && leaves <= op.max_arity()) check_assoc(t);
    }
  }
  return report;
}

// Checks that `reindex` (theta, list) -> (theta, list permuted) is a monad
// isomorphism from S to rev S: the unit triangle and the square
// reindex . mu = mu_rev . reindex_{revS} . S(reindex). `reindex` is called
// with a mutable list of variables or of inner terms.
template <class Reindex>
LawReport check_monad_iso(const FiniteOperad& op, FiniteSetX set, Reindex&& reindex, const ScanOptions& opt = {}) {
  check_structure(op);
  LawReport report;
  for (std::size_t x = 0; x < set.size; ++x) {
    MonadTerm lhs = unit(op, set, x);
    reindex(lhs.operation, lhs.xs);
    const MonadTerm rhs = unit(op, set, x);
    if (lhs != rhs) report.violations.push_back({"unit diagram", std::to_string(x), format_term(op, lhs), format_term(op, rhs)});
  }
  detail::for_each_nested_term_scan(op, set, opt, [&](const NestedTerm& t) {
    MonadTerm lhs = mu(op, t);
    reindex(lhs.operation, lhs.xs);
    NestedTerm mapped = t;
    for (auto& in : mapped.inner) reindex(in.operation, in.xs);
    reindex(mapped.operation, mapped.inner);
    const MonadTerm rhs = mu_rev(op, mapped);
    if (lhs != rhs)
      report.violations.push_back({"multiplication diagram", format_term(op, t), format_term(op, lhs), format_term(op, rhs)});
  });
  return report;
}

inline LawReport check_iota_monad_iso(const FiniteOperad& op, FiniteSetX set, const ScanOptions& opt = {}) {
  return check_monad_iso(
      op, set, [](ElemRef, auto& list) { std::reverse(list.begin(), list.end()); }, opt);
}

// G(f) at X: (theta, xs) -> (f(theta), xs).
inline std::function<MonadTerm(const MonadTerm&)> induced_map(const OperadMorphism& f) {
  return [f](const MonadTerm& t) { return MonadTerm{f(t.operation), t.xs}; };
}

// G(f) commutes with eta and mu on every admissible term over X.
inline LawReport check_induced_monad_map(const OperadMorphism& f, FiniteSetX set) {
  LawReport report;
  const auto g = induced_map(f);
  for (std::size_t x = 0; x < set.size; ++x) {
    const MonadTerm lhs = g(unit(f.source, set, x));
    const MonadTerm rhs = unit(f.target, set, x);
    if (lhs != rhs) report.violations.push_back({"unit", std::to_string(x), format_term(f.target, lhs), format_term(f.target, rhs)});
  }
  for_each_nested_term(f.source, set, [&](const NestedTerm& t) {
    const MonadTerm lhs = g(mu(f.source, t));
    NestedTerm mapped{f(t.operation), {}};
    for (const auto& in : t.inner) mapped.inner.push_back(g(in));
    const MonadTerm rhs = mu(f.target, mapped);
    if (lhs != rhs)
      report.violations.push_back({"multiplication", format_term(f.source, t), format_term(f.target, lhs), format_term(f.target, rhs)});
  });
  return report;
}

struct BijectivityCheck {
  bool bijective = false;
  std::optional<std::string> witness;  // a collision or a missed target term
};

inline BijectivityCheck induced_map_bijective(const OperadMorphism& f, FiniteSetX set) {
  const auto g = induced_map(f);
  std::map<MonadTerm, MonadTerm> preimage;
  for (const auto& t : all_terms(f.source, set)) {
    const MonadTerm image = g(t);
    auto [it, inserted] = preimage.emplace(image, t);
    if (!inserted)
      return {false, "collision: " + format_term(f.source, it->second) + " and " + format_term(f.source, t) + " both map to " +
                         format_term(f.target, image)};
  }
  for (const auto& t : all_terms(f.target, set))
    if (!preimage.count(t)) return {false, "no preimage: " + format_term(f.target, t)};
  return {true, std::nullopt};
}

inline bool is_operad_isomorphism(const OperadMorphism& f) {
  if (!check_morphism(f).ok() || !components_bijective(f)) return false;
  OperadMorphism inverse{f.target, f.source, {}};
  for (std::size_t n = 0; n < f.maps.size(); ++n) {
    inverse.maps.emplace_back(f.maps[n].size());
    for (std::size_t i = 0; i < f.maps[n].size(); ++i) inverse.maps[n][f.maps[n][i]] = i;
  }
  return check_morphism(inverse).ok();
}

struct ReflectsIsoReport {
  std::vector<std::pair<std::size_t, bool>> bijective_by_size;
  bool bijective_at_listed = false;
  bool bijective_up_to_bound = false;
  bool components_bijective = false;
  bool is_isomorphism = false;
  std::optional<std::string> witness;
};

// Whether G(f) is bijective at each listed |X|, plus the three-way
// equivalence (bijective for all |X| up to max(N, listed) <=> every f_n
// bijective <=> f an operad isomorphism), which is asserted.
inline ReflectsIsoReport check_reflects_iso(const OperadMorphism& f, const std::vector<std::size_t>& sizes) {
  if (!check_morphism(f).ok()) throw UsageError("check_reflects_iso needs a valid operad morphism");
  ReflectsIsoReport r;
  std::size_t bound = f.source.max_arity();
  for (auto s : sizes) bound = std::max(bound, s);
  r.bijective_up_to_bound = true;
  for (std::size_t s = 0; s <= bound; ++s) {
    const auto check = induced_map_bijective(f, FiniteSetX{s});
    r.bijective_by_size.emplace_back(s, check.bijective);
    if (!check.bijective) {
      r.bijective_up_to_bound = false;
      if (!r.witness) r.witness = "|X| = " + std::to_string(s) + ": " + *check.witness;
    }
  }
  r.bijective_at_listed = std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return r.bijective_by_size[s].second; });
  r.components_bijective = components_bijective(f);
  r.is_isomorphism = is_operad_isomorphism(f);
  if (r.bijective_up_to_bound != r.components_bijective || r.components_bijective != r.is_isomorphism)
    throw AssertionFailure("G(f) bijectivity, componentwise bijectivity and isomorphism disagree");
  return r;
}

struct NotFullReport {
  MonadTerm term;
  MonadTerm iota_image;
  std::size_t morphisms = 0;
  std::size_t separated = 0;
  std::string text;
};

// No operad morphism f : P -> rev P has G(f) = iota: G(f) keeps the variable
// order of (theta, [0, 1, ..., 1]) while iota reverses it. Every morphism
// P -> rev P is enumerated and separated on that term.
inline NotFullReport demo_not_full(const FiniteOperad& p, std::size_t max_listed = 10) {
  check_structure(p);
  std::optional<ElemRef> theta;
  for_each_element(p, [&](ElemRef e) {
    if (!theta && e.arity >= 2) theta = e;
  });
  if (!theta) throw UsageError("demo_not_full needs a nonempty P(n) with n >= 2 (iota is the identity otherwise)");
  const FiniteOperad rev = reverse(p);
  const FiniteSetX set{2};

  NotFullReport r;
  r.term = MonadTerm{*theta, std::vector<std::size_t>(theta->arity, 1)};
  r.term.xs[0] = 0;
  r.iota_image = iota(r.term);

  std::ostringstream out;
  out << "# truncated operad: max_arity " << p.max_arity() << ", |X| = " << set.size << "\n";
  out << "operad: " << p.name() << "\n";
  out << "term: " << format_term(p, r.term) << "\n";
  out << "iota(term): " << format_term(rev, r.iota_image) << "\n";
  std::ostringstream listed;
  for_each_morphism(p, rev, [&](const OperadMorphism& f) {
    ++r.morphisms;
    const MonadTerm image = induced_map(f)(r.term);
    if (image != r.iota_image) ++r.separated;
    if (r.morphisms <= max_listed)
      listed << "morphism " << r.morphisms << ": G(f)(term) = " << format_term(rev, image)
             << (image != r.iota_image ? " != " : " == ") << format_term(rev, r.iota_image) << "\n";
    return true;
  });
  out << "morphisms_to_reverse: " << r.morphisms << "\n";
  out << listed.str();
  out << "separated: " << r.separated << "/" << r.morphisms << "\n";
  if (r.separated != r.morphisms) throw AssertionFailure("some morphism induces iota on the separating term");
  out << "no operad map f : P -> rev(P) satisfies G(f) = iota (variable order is preserved by G(f), reversed by iota)\n";
  r.text = out.str();
  return r;
}

// Structure map SX -> X.
using AlgebraMap = std::function<std::size_t(const MonadTerm&)>;

// a(eta x) = x and a(mu T) = a(S a (T)) on admissible T.
inline LawReport check_algebra(const FiniteOperad& op, FiniteSetX set, const AlgebraMap& a) {
  LawReport report;
  for (std::size_t x = 0; x < set.size; ++x)
    if (a(unit(op, set, x)) != x) report.violations.push_back({"algebra unit", std::to_string(x), std::to_string(a(unit(op, set, x))), std::to_string(x)});
  for_each_nested_term(op, set, [&](const NestedTerm& t) {
    MonadTerm evaluated{t.operation, {}};
    for (const auto& in : t.inner) evaluated.xs.push_back(a(in));
    const auto lhs = a(mu(op, t));
    const auto rhs = a(evaluated);
    if (lhs != rhs)
      report.violations.push_back({"algebra multiplication", format_term(op, t), std::to_string(lhs), std::to_string(rhs)});
  });
  return report;
}

}  // namespace revop
