#pragma once

// The interval operad restricted to rational PL maps: an element of arity n
// is a tuple (f_1, ..., f_n) whose images are ordered, sup(f_i) <= f_{i+1}(0).
// Composition is (f_1, ..., f_n) o (g_1, ..., g_n) =
// (f_1 g_1^1, ..., f_1 g_1^{k_1}, ..., f_n g_n^{k_n}).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revop/pl_map.hpp"

namespace revop {

class OrderingError : public UsageError {
 public:
  OrderingError(std::size_t first, const Rational& sup, const Rational& next_start)
      : UsageError("maps " + std::to_string(first + 1) + " and " + std::to_string(first + 2) +
                   " are out of order: sup " + to_string(sup) + " > start " + to_string(next_start)),
        first_(first) {}

  // Zero-based index of the first map of the offending consecutive pair.
  std::size_t first() const { return first_; }

 private:
  std::size_t first_;
};

class IntervalElement {
 public:
  IntervalElement() = default;

  // Throws OrderingError when some consecutive pair has sup(f_i) > f_{i+1}(0).
  explicit IntervalElement(std::vector<PLMap> maps) : maps_(std::move(maps)) {
    for (std::size_t i = 0; i + 1 < maps_.size(); ++i) {
      const Rational& sup = maps_[i].limit();
      if (sup > maps_[i + 1].start_value()) throw OrderingError(i, sup, maps_[i + 1].start_value());
    }
  }

  static IntervalElement unit() { return IntervalElement({PLMap::identity()}); }

  std::size_t arity() const { return maps_.size(); }
  const std::vector<PLMap>& maps() const { return maps_; }
  const PLMap& operator[](std::size_t i) const { return maps_.at(i); }

  friend bool operator==(const IntervalElement&, const IntervalElement&) = default;

 private:
  std::vector<PLMap> maps_;
};

inline IntervalElement tuple_validate(std::vector<PLMap> maps) { return IntervalElement(std::move(maps)); }

inline IntervalElement interval_compose(const IntervalElement& theta, const std::vector<IntervalElement>& args) {
  if (args.size() != theta.arity())
    throw ArityMismatch("interval element of arity " + std::to_string(theta.arity()) + " composed with " +
                        std::to_string(args.size()) + " arguments");
  std::vector<PLMap> out;
  for (std::size_t i = 0; i < args.size(); ++i)
    for (const auto& g : args[i].maps()) out.push_back(pl_compose(theta[i], g));
  try {
    return IntervalElement(std::move(out));
  } catch (const OrderingError& e) {
    throw AssertionFailure(std::string("interval composite violates ordering: ") + e.what());
  }
}

// Union of images is [0,1): f_1 starts at 0, each map starts where the
// previous one's sup is, and the last sup is 1.
inline bool is_surjective_tuple(const IntervalElement& e) {
  if (e.arity() == 0) return false;
  if (e[0].start_value() != 0) return false;
  for (std::size_t i = 1; i < e.arity(); ++i)
    if (e[i].start_value() != e[i - 1].limit()) return false;
  return e[e.arity() - 1].limit() == 1;
}

struct Gap {
  Rational lo;
  Rational hi;
};

// First open interval (lo, hi) in [0,1) missed by every image, scanning left
// to right.
inline std::optional<Gap> first_uncovered_gap(const IntervalElement& e) {
  if (e.arity() == 0) return Gap{Rational(0), Rational(1)};
  if (e[0].start_value() > 0) return Gap{Rational(0), e[0].start_value()};
  for (std::size_t i = 1; i < e.arity(); ++i)
    if (e[i - 1].limit() < e[i].start_value()) return Gap{e[i - 1].limit(), e[i].start_value()};
  if (e[e.arity() - 1].limit() < 1) return Gap{e[e.arity() - 1].limit(), Rational(1)};
  return std::nullopt;
}

// Identity outside (lo, hi); inside, the midpoint is raised by a quarter of
// the gap width.
inline PLMap bump_map(const Gap& gap) {
  const Rational quarter = (gap.hi - gap.lo) / 4;
  const Rational mid = (gap.lo + gap.hi) / 2;
  std::vector<PLPoint> pts{{Rational(0), Rational(0)}};
  if (gap.lo > 0) pts.push_back({gap.lo, gap.lo});
  pts.push_back({mid, mid + quarter});
  if (gap.hi < 1) pts.push_back({gap.hi, gap.hi});
  return PLMap(std::move(pts), Rational(1));
}

// For a non-surjective e: a non-identity h with (h) o e = (id) o e.
inline std::optional<PLMap> surjectivity_witness(const IntervalElement& e) {
  auto gap = first_uncovered_gap(e);
  if (!gap) return std::nullopt;
  return bump_map(*gap);
}

inline std::string format_interval(const IntervalElement& e) {
  std::string out = "tuple " + std::to_string(e.arity()) + " [";
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (i) out += "; ";
    out += format_pl(e[i]);
  }
  return out + "]";
}

}  // namespace revop
