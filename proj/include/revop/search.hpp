#pragma once

// Exhaustive enumeration of small truncated operads and the search for an
// operad not isomorphic to its reverse.
//
// Enumeration fills the composition table slot by slot. Unit-law slots are
// forced up front; every associativity instance is watched by each slot it
// can read (statically, or through a composite it depends on), and is
// re-evaluated whenever one of those slots is assigned. The identity is fixed
// at index 0 of P(1); no other symmetry is broken, so isomorphic copies are
// all produced.

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "revop/isomorphism.hpp"
#include "revop/monad.hpp"
#include "revop/operad.hpp"
#include "revop/operad_io.hpp"
#include "revop/predicates.hpp"

namespace revop {

struct SearchSpace {
  std::size_t max_arity = 1;
  std::vector<std::size_t> carrier_sizes;  // s_0, ..., s_N

  std::size_t total_size() const { return std::accumulate(carrier_sizes.begin(), carrier_sizes.end(), std::size_t{0}); }
  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;
};

inline void check_space(const SearchSpace& space) {
  if (space.max_arity < 1) throw UsageError("search space needs max arity at least 1");
  if (space.carrier_sizes.size() != space.max_arity + 1)
    throw UsageError("search space needs " + std::to_string(space.max_arity + 1) + " carrier sizes");
  if (space.carrier_sizes[1] < 1) throw UsageError("search space needs s_1 >= 1 for the identity");
}

inline std::string format_space(const SearchSpace& space) {
  std::string out = "max_arity " + std::to_string(space.max_arity) + ", carrier sizes (";
  for (std::size_t i = 0; i < space.carrier_sizes.size(); ++i) out += (i ? "," : "") + std::to_string(space.carrier_sizes[i]);
  return out + ")";
}

// All spaces with the given max arity and every s_n <= max_size, ordered by
// total carrier size and then lexicographically.
inline std::vector<SearchSpace> sweep_spaces(std::size_t max_arity, std::size_t max_size) {
  std::vector<SearchSpace> out;
  std::vector<std::size_t> sizes(max_arity + 1, 0);
  auto rec = [&](auto&& self, std::size_t n) -> void {
    if (n == sizes.size()) {
      if (sizes[1] >= 1) out.push_back({max_arity, sizes});
      return;
    }
    for (std::size_t s = 0; s <= max_size; ++s) {
      sizes[n] = s;
      self(self, n + 1);
    }
  };
  rec(rec, 0);
  std::stable_sort(out.begin(), out.end(), [](const SearchSpace& a, const SearchSpace& b) {
    if (a.total_size() != b.total_size()) return a.total_size() < b.total_size();
    return a.carrier_sizes < b.carrier_sizes;
  });
  return out;
}

class OperadEnumerator {
 public:
  explicit OperadEnumerator(const SearchSpace& space)
      : space_(space), base_(make_base(space)) {
    const std::size_t slots = base_.slot_count();
    forced_.assign(slots, FiniteOperad::kUnset);
    for (std::size_t s = 0; s < slots; ++s) {
      auto [theta, args] = base_.decode_slot(s);
      std::size_t arity = 0;
      for (const auto& a : args) arity += a.arity;
      if (base_.carrier_size(arity) == 0) feasible_ = false;
      if (theta == base_.identity()) {
        forced_[s] = static_cast<std::uint32_t>(args[0].index);
      } else if (std::all_of(args.begin(), args.end(), [&](const ElemRef& a) { return a == base_.identity(); })) {
        forced_[s] = static_cast<std::uint32_t>(theta.index);
      } else {
        free_slots_.push_back(s);
      }
      result_size_.push_back(static_cast<std::uint32_t>(base_.carrier_size(arity)));
    }
    if (feasible_) build_instances();
  }

  const SearchSpace& space() const { return space_; }
  bool feasible() const { return feasible_; }
  std::size_t free_slot_count() const { return free_slots_.size(); }
  std::size_t instance_count() const { return instances_.size(); }

  // Number of values the first free slot can take (1 if none are free).
  std::size_t partition_count() const {
    if (!feasible_) return 0;
    return free_slots_.empty() ? 1 : result_size_[free_slots_.front()];
  }

  // Visits every valid operad in the space in canonical order; when
  // `partition` is set, only those whose first free slot has that value.
  // `visit` returns false to stop. Returns false if stopped early.
  template <class Visit>
  bool run(Visit&& visit, std::optional<std::size_t> partition = std::nullopt, std::mt19937_64* shuffle = nullptr,
           const std::atomic<bool>* cancel = nullptr, std::size_t node_limit = 0) const {
    if (!feasible_) return true;
    State st{base_, 0, false};
    st.node_limit = node_limit;
    for (std::size_t s = 0; s < forced_.size(); ++s) st.op.set_slot_value(s, forced_[s]);
    for (const auto& inst : instances_)
      if (!holds(st.op, inst)) return true;
    st.cancel = cancel;
    descend(st, 0, partition, shuffle, visit);
    return !st.stopped;
  }

 private:
  struct Instance {
    std::uint32_t d_slot;
    std::uint32_t rhs_base;
    std::uint32_t rhs_stride;
    std::uint32_t lhs_base;
    std::uint32_t first;  // into inner_slots_ / lhs_strides_
    std::uint32_t count;
  };

  struct State {
    FiniteOperad op;
    std::size_t nodes;
    bool stopped;
    const std::atomic<bool>* cancel = nullptr;
    std::size_t node_limit = 0;  // 0: unlimited
  };

  static FiniteOperad make_base(const SearchSpace& space) {
    check_space(space);
    return FiniteOperad("search", default_labels(space.carrier_sizes), 0);
  }

  // Stride of argument position i (0 = theta) inside a shape's mixed radix.
  static std::vector<std::size_t> strides(const Shape& shape) {
    std::vector<std::size_t> out(shape.radices.size(), 1);
    for (std::size_t i = shape.radices.size() - 1; i-- > 0;) out[i] = out[i + 1] * shape.radices[i + 1];
    return out;
  }

  void build_instances() {
    const auto& op = base_;
    std::vector<std::vector<std::uint32_t>> watch(op.slot_count());
    for_each_associativity_instance(op, [&](ElemRef theta, std::span<const ElemRef> middle, std::span<const ElemRef> inner) {
      Instance inst{};
      inst.first = static_cast<std::uint32_t>(inner_slots_.size());
      inst.count = static_cast<std::uint32_t>(middle.size());
      const auto id = static_cast<std::uint32_t>(instances_.size());

      std::vector<std::size_t> composite_arities;
      std::size_t pos = 0;
      for (const auto& m : middle) {
        const auto group = inner.subspan(pos, m.arity);
        pos += m.arity;
        const std::size_t s = op.slot(m, group);
        inner_slots_.push_back(static_cast<std::uint32_t>(s));
        watch[s].push_back(id);
        std::size_t a = 0;
        for (const auto& g : group) a += g.arity;
        composite_arities.push_back(a);
      }
      // LHS slot: theta(c_1, ..., c_n), c_i varying over P(m_i).
      const Shape& lhs_shape = op.shapes()[*op.find_shape(theta.arity, composite_arities)];
      const auto lhs_strides = strides(lhs_shape);
      inst.lhs_base = static_cast<std::uint32_t>(lhs_shape.offset + theta.index * lhs_strides[0]);
      for (std::size_t i = 0; i < middle.size(); ++i) lhs_strides_.push_back(static_cast<std::uint32_t>(lhs_strides[i + 1]));
      {
        std::vector<std::size_t> idx(middle.size(), 0);
        bool more = true;
        while (more) {
          std::size_t s = inst.lhs_base;
          for (std::size_t i = 0; i < idx.size(); ++i) s += idx[i] * lhs_strides[i + 1];
          watch[s].push_back(id);
          more = false;
          for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < op.carrier_size(composite_arities[k])) {
              more = true;
              break;
            }
            idx[k] = 0;
          }
        }
      }
      // RHS: d = theta(middle), then d(inner), d varying over P(sum k_i).
      const std::size_t d_slot = op.slot(theta, middle);
      inst.d_slot = static_cast<std::uint32_t>(d_slot);
      watch[d_slot].push_back(id);
      std::size_t middle_arity = 0;
      for (const auto& m : middle) middle_arity += m.arity;
      const ElemRef d0{middle_arity, 0};
      const std::size_t rhs0 = op.slot(d0, inner);
      const Shape& rhs_shape = op.shapes()[op.shape_of_slot(rhs0)];
      inst.rhs_base = static_cast<std::uint32_t>(rhs0);
      inst.rhs_stride = static_cast<std::uint32_t>(strides(rhs_shape)[0]);
      for (std::size_t d = 0; d < op.carrier_size(middle_arity); ++d) watch[rhs0 + d * inst.rhs_stride].push_back(id);
      instances_.push_back(inst);
    });
    watch_offsets_.assign(op.slot_count() + 1, 0);
    for (std::size_t s = 0; s < watch.size(); ++s) {
      auto& w = watch[s];
      std::sort(w.begin(), w.end());
      w.erase(std::unique(w.begin(), w.end()), w.end());
      watch_offsets_[s + 1] = watch_offsets_[s] + static_cast<std::uint32_t>(w.size());
      watch_.insert(watch_.end(), w.begin(), w.end());
    }
  }

  // False only when every slot the instance reads is set and the two
  // bracketings disagree.
  bool holds(const FiniteOperad& op, const Instance& inst) const {
    std::size_t lhs_slot = inst.lhs_base;
    for (std::uint32_t i = 0; i < inst.count; ++i) {
      const auto c = op.slot_value(inner_slots_[inst.first + i]);
      if (c == FiniteOperad::kUnset) return true;
      lhs_slot += c * lhs_strides_[inst.first + i];
    }
    const auto lhs = op.slot_value(lhs_slot);
    if (lhs == FiniteOperad::kUnset) return true;
    const auto d = op.slot_value(inst.d_slot);
    if (d == FiniteOperad::kUnset) return true;
    const auto rhs = op.slot_value(inst.rhs_base + d * inst.rhs_stride);
    if (rhs == FiniteOperad::kUnset) return true;
    return lhs == rhs;
  }

  bool consistent_after(const FiniteOperad& op, std::size_t slot) const {
    for (auto k = watch_offsets_[slot]; k < watch_offsets_[slot + 1]; ++k)
      if (!holds(op, instances_[watch_[k]])) return false;
    return true;
  }

  template <class Visit>
  void descend(State& st, std::size_t depth, std::optional<std::size_t> partition, std::mt19937_64* shuffle,
               Visit& visit) const {
    if (st.stopped) return;
    ++st.nodes;
    if (st.node_limit && st.nodes > st.node_limit) {
      st.stopped = true;
      return;
    }
    if (st.cancel && (st.nodes & 0xff) == 0 && st.cancel->load(std::memory_order_relaxed)) {
      st.stopped = true;
      return;
    }
    if (depth == free_slots_.size()) {
      if (!visit(static_cast<const FiniteOperad&>(st.op))) st.stopped = true;
      return;
    }
    const std::size_t slot = free_slots_[depth];
    std::vector<std::uint32_t> values;
    if (depth == 0 && partition) {
      values.push_back(static_cast<std::uint32_t>(*partition));
    } else {
      values.resize(result_size_[slot]);
      std::iota(values.begin(), values.end(), 0u);
      if (shuffle) std::shuffle(values.begin(), values.end(), *shuffle);
    }
    for (auto v : values) {
      st.op.set_slot_value(slot, v);
      if (consistent_after(st.op, slot)) descend(st, depth + 1, partition, shuffle, visit);
      if (st.stopped) break;
    }
    st.op.set_slot_value(slot, FiniteOperad::kUnset);
  }

  SearchSpace space_;
  FiniteOperad base_;
  bool feasible_ = true;
  std::vector<std::uint32_t> forced_;
  std::vector<std::size_t> free_slots_;
  std::vector<std::uint32_t> result_size_;
  std::vector<Instance> instances_;
  std::vector<std::uint32_t> inner_slots_;
  std::vector<std::uint32_t> lhs_strides_;
  std::vector<std::uint32_t> watch_offsets_;
  std::vector<std::uint32_t> watch_;
};

// Collects every operad in the space (small spaces only).
inline std::vector<FiniteOperad> enumerate_operads(const SearchSpace& space) {
  std::vector<FiniteOperad> out;
  OperadEnumerator(space).run([&](const FiniteOperad& op) {
    out.push_back(op);
    return true;
  });
  return out;
}

// One operad drawn by randomized backtracking. None if the space is empty or
// the search visits more than node_limit nodes (0 lifts the limit).
inline std::optional<FiniteOperad> random_operad(const SearchSpace& space, std::mt19937_64& rng,
                                                std::size_t node_limit = 100000) {
  std::optional<FiniteOperad> out;
  OperadEnumerator(space).run(
      [&](const FiniteOperad& op) {
        out = op;
        return false;
      },
      std::nullopt, &rng, nullptr, node_limit);
  return out;
}

class CertificateFailure : public Error {
 public:
  CertificateFailure(std::string stage, const std::string& what)
      : Error("certificate stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Certificate {
  bool valid = false;
  bool reverse_valid = false;
  std::optional<OperadMorphism> isomorphism;  // none: exhaustive search found no isomorphism
  std::vector<std::pair<std::size_t, bool>> iota_checks;
  std::optional<SeparatingWitness> separating;
  std::optional<SeparatingWitness> separating_reverse;

  bool is_counterexample() const { return valid && reverse_valid && !isomorphism; }
};

// Re-verifies a candidate from scratch.
inline Certificate verify_candidate(const FiniteOperad& p) {
  Certificate c;
  try {
    check_structure(p);
  } catch (const StructuralError& e) {
    throw CertificateFailure("structure", e.what());
  }
  const auto report = validate(p);
  if (!report.ok()) throw CertificateFailure("validate", report.violations.front().law + " at " + report.violations.front().instance);
  c.valid = true;
  const FiniteOperad rev = reverse(p);
  const auto rev_report = validate(rev);
  if (!rev_report.ok()) throw CertificateFailure("validate-reverse", rev_report.violations.front().instance);
  c.reverse_valid = true;
  c.isomorphism = find_isomorphism(p, rev);
  for (std::size_t x = 0; x <= 3; ++x) {
    const bool ok = check_iota_monad_iso(p, FiniteSetX{x}).ok();
    c.iota_checks.emplace_back(x, ok);
    if (!ok) throw CertificateFailure("iota", "monad isomorphism check failed at |X| = " + std::to_string(x));
  }
  if (p.max_arity() >= 2) {
    c.separating = has_separating_property(p);
    c.separating_reverse = has_separating_property(rev);
  }
  return c;
}

inline std::string format_certificate(const FiniteOperad& p, const Certificate& c) {
  std::ostringstream out;
  out << "certificate.validate: " << (c.valid ? "ok" : "fail") << "\n";
  out << "certificate.validate_reverse: " << (c.reverse_valid ? "ok" : "fail") << "\n";
  if (c.isomorphism) {
    out << "certificate.isomorphism_to_reverse: found\n";
    std::istringstream lines(format_morphism(*c.isomorphism));
    for (std::string line; std::getline(lines, line);) out << "certificate.isomorphism: " << line << "\n";
  } else {
    out << "certificate.isomorphism_to_reverse: none (exhaustive)\n";
  }
  for (const auto& [x, ok] : c.iota_checks) out << "certificate.iota_monad_iso |X|=" << x << ": " << (ok ? "ok" : "fail") << "\n";
  if (p.max_arity() >= 2) {
    auto sep = [&](const std::optional<SeparatingWitness>& w) {
      if (!w) return std::string("none");
      return "phi=" + p.label(w->phi) + " gamma=" + p.label(w->gamma);
    };
    out << "certificate.separating: " << sep(c.separating) << "\n";
    out << "certificate.separating_reverse: " << sep(c.separating_reverse) << "\n";
  }
  return out.str();
}

enum class SearchTarget {
  non_isomorphic,  // P not isomorphic to reverse(P)
  separated,       // additionally P has the separating property and reverse(P) lacks it
};

struct SearchOptions {
  bool filters = true;
  std::size_t workers = 1;  // 0 = hardware concurrency
  SearchTarget target = SearchTarget::non_isomorphic;
};

struct SearchReport {
  SearchSpace space;
  std::size_t candidates = 0;
  std::optional<FiniteOperad> found;
  std::optional<Certificate> certificate;
  bool exhausted = false;
};

// Invariant filters for P versus rev P. Returns true when they prove the two
// are not isomorphic; false means undecided.
inline bool filters_separate(const FiniteOperad& p, const FiniteOperad& rev) {
  if (p.max_arity() >= 2 && has_separating_property(p).has_value() != has_separating_property(rev).has_value())
    return true;
  auto counts = [](const FiniteOperad& op) {
    auto prof = element_profiles(op);
    for (auto& row : prof) std::sort(row.begin(), row.end());
    return prof;
  };
  return counts(p) != counts(rev);
}

inline bool differs_from_reverse(const FiniteOperad& p, bool filters,
                                 SearchTarget target = SearchTarget::non_isomorphic) {
  const FiniteOperad rev = reverse(p);
  if (target == SearchTarget::separated)
    return p.max_arity() >= 2 && has_separating_property(p) && !has_separating_property(rev);
  if (filters) {
    if (rev == p) return false;
    if (filters_separate(p, rev)) return true;
  }
  return !find_isomorphism(p, rev).has_value();
}

// Scans the space in canonical order and stops at the first P with
// P not isomorphic to reverse(P). Parallel runs split on the first free slot
// and merge so that the result equals the sequential one.
inline SearchReport search_self_reverse_distinct(const SearchSpace& space, const SearchOptions& opt = {}) {
  const OperadEnumerator enumerator(space);
  SearchReport report;
  report.space = space;

  struct PartResult {
    std::size_t candidates = 0;
    std::optional<FiniteOperad> found;
  };
  const std::size_t parts = enumerator.partition_count();
  std::size_t workers = opt.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.workers;
  workers = std::max<std::size_t>(1, std::min(workers, parts));

  std::vector<PartResult> results(parts);
  std::atomic<std::size_t> best_found{parts};
  std::vector<std::atomic<bool>> cancel(parts);
  for (auto& c : cancel) c = false;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t part = next.fetch_add(1);
      if (part >= parts) return;
      if (part > best_found.load()) continue;
      PartResult& r = results[part];
      enumerator.run(
          [&](const FiniteOperad& op) {
            ++r.candidates;
            if (differs_from_reverse(op, opt.filters, opt.target)) {
              r.found = op;
              std::size_t cur = best_found.load();
              while (part < cur && !best_found.compare_exchange_weak(cur, part)) {
              }
              for (std::size_t q = part + 1; q < parts; ++q) cancel[q] = true;
              return false;
            }
            return true;
          },
          enumerator.free_slot_count() ? std::optional<std::size_t>(part) : std::nullopt, nullptr, &cancel[part]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (std::size_t part = 0; part < parts; ++part) {
    report.candidates += results[part].candidates;
    if (results[part].found) {
      report.found = results[part].found;
      break;
    }
  }
  if (report.found) {
    report.found->set_name("counterexample");
    report.certificate = verify_candidate(*report.found);
    const auto& c = *report.certificate;
    if (!c.is_counterexample() || (opt.target == SearchTarget::separated && !(c.separating && !c.separating_reverse)))
      throw AssertionFailure("search produced a candidate whose certificate does not replay");
  } else {
    report.exhausted = true;
  }
  return report;
}

inline std::string format_search_report(const SearchReport& r) {
  std::ostringstream out;
  out << "# truncated operad search: " << format_space(r.space) << "\n";
  out << "candidates_examined: " << r.candidates << "\n";
  out << "exhausted: " << (r.exhausted ? "true" : "false") << "\n";
  if (r.found) {
    out << "found: true\n";
    out << format_operad(*r.found);
    out << format_certificate(*r.found, *r.certificate);
  } else {
    out << "found: false\n";
    out << "no operad in this space is non-isomorphic to its reverse\n";
  }
  return out.str();
}

}  // namespace revop
