#pragma once

// Reproduces P != rev(P) inside the rational PL interval operad:
//   (a) gamma = const 0 is a constant element of P(1);
//   (b) phi = (const 0, id) gives phi o (gamma, id) = (const 0, id), surjective;
//   (c) for every phi' in P(2) and constant gamma' drawn from a finite PL
//       family, the reversed composite phi' o (id, gamma') is not surjective,
//       both because its image lies in [0, f_2(b)] and by is_surjective_tuple.

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "revop/interval.hpp"

namespace revop {

// Every canonical PL map with at most `max_interior` interior breakpoints and
// all knot coordinates (abscissae, values, limit) of denominator at most
// `max_denominator`. Sorted and duplicate-free.
inline std::vector<PLMap> pl_family(std::size_t max_interior, long long max_denominator) {
  std::set<Rational> coords;
  for (long long q = 1; q <= max_denominator; ++q)
    for (long long p = 0; p <= q; ++p) coords.insert(make_rational(p, q));
  std::vector<Rational> abscissae, values, limits;
  for (const auto& c : coords) {
    if (c > 0 && c < 1) abscissae.push_back(c);
    if (c < 1) values.push_back(c);
    limits.push_back(c);
  }

  std::set<PLMap> family;
  std::vector<Rational> ts{Rational(0)};
  std::vector<PLPoint> pts;

  // Non-decreasing value choices for the chosen abscissae, then the limit.
  auto choose_values = [&](auto&& self, std::size_t j, std::size_t min_index) -> void {
    if (j == ts.size()) {
      for (const auto& lim : limits)
        if (lim >= pts.back().v) family.insert(PLMap(pts, lim));
      return;
    }
    for (std::size_t vi = min_index; vi < values.size(); ++vi) {
      pts.push_back({ts[j], values[vi]});
      self(self, j + 1, vi);
      pts.pop_back();
    }
  };
  auto choose_abscissae = [&](auto&& self, std::size_t from, std::size_t remaining) -> void {
    choose_values(choose_values, 0, 0);
    if (remaining == 0) return;
    for (std::size_t i = from; i < abscissae.size(); ++i) {
      ts.push_back(abscissae[i]);
      self(self, i + 1, remaining - 1);
      ts.pop_back();
    }
  };
  choose_abscissae(choose_abscissae, 0, max_interior);
  return {family.begin(), family.end()};
}

struct IntervalDemoReport {
  PLMap gamma = PLMap::constant(Rational(0));
  IntervalElement phi;
  IntervalElement composite;
  bool gamma_constant = false;
  bool composite_surjective = false;
  std::size_t family_size = 0;
  std::size_t constant_count = 0;
  std::size_t pairs_checked = 0;
  std::size_t rev_surjective = 0;
  std::size_t bound_violations = 0;
  std::string text;

  bool holds() const {
    return gamma_constant && composite_surjective && pairs_checked > 0 && rev_surjective == 0 && bound_violations == 0;
  }
};

namespace detail {

struct RevScan {
  std::size_t pairs = 0;
  std::size_t surjective = 0;
  std::size_t bound_violations = 0;
  std::optional<std::string> first_failure;
};

inline RevScan scan_reversed_composites(const std::vector<PLMap>& family, const std::vector<PLMap>& constants,
                                        std::size_t begin, std::size_t end) {
  RevScan out;
  const IntervalElement unit = IntervalElement::unit();
  for (std::size_t i = begin; i < end; ++i) {
    const PLMap& f1 = family[i];
    for (const PLMap& f2 : family) {
      if (f1.limit() > f2.start_value()) continue;
      const IntervalElement phi({f1, f2});
      for (const PLMap& g : constants) {
        ++out.pairs;
        // In P, phi o_rev (gamma, id) = phi o (id, gamma).
        const IntervalElement e = interval_compose(phi, {unit, IntervalElement({g})});
        const Rational bound = pl_eval(f2, g.start_value());
        const bool within = e[0].limit() <= bound && is_constant_map(e[1]) && e[1].start_value() == bound && bound < 1;
        const bool surjective = is_surjective_tuple(e);
        if (!within) ++out.bound_violations;
        if (surjective) ++out.surjective;
        if ((!within || surjective) && !out.first_failure)
          out.first_failure = "phi' = " + format_interval(phi) + ", gamma' = " + format_pl(g) +
                              ", composite = " + format_interval(e);
      }
    }
  }
  return out;
}

}  // namespace detail

// Runs (a)-(c). Throws AssertionFailure with the offending object serialized
// if any assertion fails. `workers` = 0 picks the hardware concurrency.
inline IntervalDemoReport paper_counterexample(std::size_t max_interior = 2, long long max_denominator = 4,
                                               std::size_t workers = 0) {
  IntervalDemoReport r;
  r.gamma = PLMap::constant(Rational(0));
  r.phi = IntervalElement({PLMap::constant(Rational(0)), PLMap::identity()});
  r.gamma_constant = is_constant_map(r.gamma) && !constancy_witness(r.gamma);
  if (!r.gamma_constant) throw AssertionFailure("gamma is not constant: " + format_pl(r.gamma));
  r.composite = interval_compose(r.phi, {IntervalElement({r.gamma}), IntervalElement::unit()});
  r.composite_surjective = is_surjective_tuple(r.composite) && !surjectivity_witness(r.composite);
  if (!r.composite_surjective)
    throw AssertionFailure("phi o (gamma, id) is not surjective: " + format_interval(r.composite));

  const auto family = pl_family(max_interior, max_denominator);
  std::vector<PLMap> constants;
  std::copy_if(family.begin(), family.end(), std::back_inserter(constants), is_constant_map);
  r.family_size = family.size();
  r.constant_count = constants.size();

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(1, family.size()));
  std::vector<std::future<detail::RevScan>> parts;
  const std::size_t chunk = (family.size() + workers - 1) / workers;
  for (std::size_t begin = 0; begin < family.size(); begin += chunk) {
    const std::size_t end = std::min(family.size(), begin + chunk);
    parts.push_back(std::async(std::launch::async, [&, begin, end] {
      return detail::scan_reversed_composites(family, constants, begin, end);
    }));
  }
  std::optional<std::string> failure;
  for (auto& part : parts) {
    auto scan = part.get();
    r.pairs_checked += scan.pairs;
    r.rev_surjective += scan.surjective;
    r.bound_violations += scan.bound_violations;
    if (!failure) failure = scan.first_failure;
  }
  if (failure) throw AssertionFailure("reversed composite escapes the bound or is surjective: " + *failure);

  std::ostringstream out;
  out << "# interval operad over rational piecewise-linear maps (sub-operad with rational knots)\n";
  out << "# family: <= " << max_interior << " interior breakpoints, knot denominators <= " << max_denominator << "\n";
  out << "gamma: " << format_pl(r.gamma) << "\n";
  out << "gamma_constant: " << (r.gamma_constant ? "true" : "false") << "\n";
  out << "phi: " << format_interval(r.phi) << "\n";
  out << "phi_o_gamma_id: " << format_interval(r.composite) << "\n";
  out << "phi_o_gamma_id_surjective: " << (r.composite_surjective ? "true" : "false") << "\n";
  out << "family_maps: " << r.family_size << "\n";
  out << "family_constants: " << r.constant_count << "\n";
  out << "rev_pairs_checked: " << r.pairs_checked << "\n";
  out << "rev_pairs_surjective: " << r.rev_surjective << "\n";
  out << "rev_bound_violations: " << r.bound_violations << "\n";
  out << "P is not isomorphic to rev(P) at the decidable level: separating property holds for P, fails for rev(P)\n";
  r.text = out.str();
  return r;
}

}  // namespace revop
