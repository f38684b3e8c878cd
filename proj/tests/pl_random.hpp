#pragma once

// Seeded generators for PL maps and interval elements.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "revop/interval.hpp"

namespace revop::testing_util {

inline Rational random_unit_rational(std::mt19937_64& rng, long long max_den, bool allow_one = false) {
  std::uniform_int_distribution<long long> den_dist(1, max_den);
  const long long q = den_dist(rng);
  std::uniform_int_distribution<long long> num_dist(0, allow_one ? q : q - 1);
  return make_rational(num_dist(rng), q);
}

// A random valid map whose values lie in [lo, hi] (hi may be 1 only as the
// limit), with up to `max_interior` interior breakpoints.
inline PLMap random_pl_map(std::mt19937_64& rng, const Rational& lo = Rational(0), const Rational& hi = Rational(1),
                           std::size_t max_interior = 3) {
  std::uniform_int_distribution<std::size_t> count_dist(0, max_interior);
  std::set<Rational> abscissae;
  const std::size_t count = count_dist(rng);
  for (std::size_t i = 0; i < count; ++i) {
    Rational t = random_unit_rational(rng, 12);
    if (t > 0) abscissae.insert(t);
  }
  std::vector<Rational> values;
  for (std::size_t i = 0; i < abscissae.size() + 1; ++i) values.push_back(lo + (hi - lo) * random_unit_rational(rng, 12));
  std::sort(values.begin(), values.end());
  Rational limit = lo + (hi - lo) * random_unit_rational(rng, 12, true);
  if (limit < values.back()) limit = values.back();
  // Occasionally flatten the map into a constant.
  if (std::uniform_int_distribution<int>(0, 5)(rng) == 0) return PLMap::constant(values.front());
  std::vector<PLPoint> pts{{Rational(0), values[0]}};
  std::size_t k = 1;
  for (const auto& t : abscissae) pts.push_back({t, values[k++]});
  return PLMap(std::move(pts), limit);
}

// Random ordered tuple. Image boundaries come from a sorted cut list, so
// roughly half of the samples cover [0,1) exactly and the rest leave gaps.
inline IntervalElement random_interval_element(std::mt19937_64& rng, std::size_t max_arity = 3) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_arity)(rng);
  std::vector<Rational> cuts{Rational(0)};
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(random_unit_rational(rng, 8));
  cuts.push_back(Rational(1));
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  const bool leave_gaps = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  std::vector<PLMap> maps;
  for (std::size_t i = 0; i < n; ++i) {
    Rational lo = cuts[i];
    Rational hi = cuts[i + 1];
    if (leave_gaps) {
      const Rational shrink = (hi - lo) / 4;
      if (std::uniform_int_distribution<int>(0, 1)(rng)) lo += shrink;
      if (std::uniform_int_distribution<int>(0, 1)(rng)) hi -= shrink;
    }
    if (lo == hi) {
      maps.push_back(PLMap::constant(lo));
      continue;
    }
    // Start exactly at lo and approach hi in the limit.
    std::vector<PLPoint> pts{{Rational(0), lo}};
    const Rational mid_t = random_unit_rational(rng, 6);
    if (mid_t > 0) pts.push_back({mid_t, lo + (hi - lo) * random_unit_rational(rng, 6)});
    maps.push_back(PLMap(std::move(pts), hi));
  }
  return IntervalElement(std::move(maps));
}

}  // namespace revop::testing_util
