// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes within its time limit.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "pl_random.hpp"
#include "revop/free_operad.hpp"
#include "revop/interval_demo.hpp"
#include "revop/monad.hpp"
#include "revop/presentation.hpp"
#include "revop/search.hpp"
#include "test_util.hpp"

namespace {

using namespace revop;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int run_cli_quiet(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "revop");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(REVOP_FIXTURE_DIR))
    if (entry.path().extension() == ".operad") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

Outcome corpus_shape() {
  const auto corpus = testing_util::load_corpus();
  if (corpus.size() < 5) return {false, "corpus has " + std::to_string(corpus.size()) + " operads"};
  for (const auto& op : corpus) {
    if (op.max_arity() > 3) return {false, op.name() + " has max arity above 3"};
    for (auto s : op.carrier_sizes())
      if (s > 3) return {false, op.name() + " has a carrier larger than 3"};
  }
  return {true, ""};
}

Outcome criterion1() {
  if (auto shape = corpus_shape(); !shape.pass) return shape;
  std::size_t runs = 0;
  for (const auto& file : corpus_files()) {
    std::string text;
    const int code = run_cli_quiet({"monad-iota", file, "--set-size", "3"}, &text);
    if (code != 0) return {false, "monad-iota failed on " + file + ":\n" + text};
    for (std::size_t x = 0; x <= 3; ++x)
      if (text.find("iota_monad_iso |X|=" + std::to_string(x) + ": ok") == std::string::npos)
        return {false, "missing |X|=" + std::to_string(x) + " verdict for " + file};
    ++runs;
  }
  return {true, std::to_string(runs) + " corpus operads x |X| in 0..3, both diagrams exhaustive"};
}

Outcome criterion2() {
  auto check = [](const FiniteOperad& op) -> std::optional<std::string> {
    const FiniteOperad rev = reverse(op);
    if (!(reverse(rev) == op)) return "reverse is not an involution on " + format_operad(op);
    if (validate(op).ok() != validate(rev).ok()) return "validity not preserved on " + format_operad(op);
    if (!validate(op).ok()) return "generated operad is invalid: " + format_operad(op);
    return std::nullopt;
  };
  const auto corpus = testing_util::load_corpus();
  for (const auto& op : corpus)
    if (auto e = check(op)) return {false, *e};

  std::mt19937_64 rng(20240917);
  std::size_t generated = 0, draws = 0, max_total = 0;
  while (generated < 200) {
    ++draws;
    SearchSpace space;
    space.max_arity = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    for (std::size_t n = 0; n <= space.max_arity; ++n)
      space.carrier_sizes.push_back(std::uniform_int_distribution<std::size_t>(n == 1 ? 1 : 0, 3)(rng));
    // Keep each draw small enough for randomized backtracking to settle fast.
    if (space.total_size() > 8) continue;
    auto op = random_operad(space, rng);
    if (!op) continue;
    if (auto e = check(*op)) return {false, *e};
    max_total = std::max(max_total, space.total_size());
    ++generated;
  }
  return {true, std::to_string(corpus.size()) + " corpus + " + std::to_string(generated) + " random operads (" +
                    std::to_string(draws) + " space draws, seed 20240917)"};
}

Outcome criterion3() {
  const auto r = paper_counterexample(2, 4, 0);
  std::ostringstream d;
  d << "gamma constant " << r.gamma_constant << ", phi o (gamma, id) surjective " << r.composite_surjective << ", "
    << r.pairs_checked << " reversed pairs over " << r.family_size << " maps, " << r.rev_surjective << " surjective";
  return {r.holds(), d.str()};
}

Outcome criterion4() {
  std::mt19937_64 rng(4242);
  std::size_t constant = 0, non_constant = 0, surjective = 0, non_surjective = 0;
  for (int i = 0; i < 500; ++i) {
    const PLMap f = testing_util::random_pl_map(rng);
    const auto w = constancy_witness(f);
    if (is_constant_map(f) == w.has_value()) return {false, "constancy witness disagrees on " + format_pl(f)};
    const IntervalElement gamma({f});
    if (w) {
      ++non_constant;
      if (!is_constant_map(w->first) || !is_constant_map(w->second))
        return {false, "constancy witness is not a pair of arity-1 constants for " + format_pl(f)};
      if (pl_compose(f, w->first) == pl_compose(f, w->second)) return {false, "bad constancy witness for " + format_pl(f)};
    } else {
      ++constant;
      // Definition check against random elements of arities 0..3.
      for (int k = 0; k < 4; ++k) {
        const std::size_t n = static_cast<std::size_t>(k);
        IntervalElement a = testing_util::random_interval_element(rng, 3), b = testing_util::random_interval_element(rng, 3);
        while (a.arity() != n) a = testing_util::random_interval_element(rng, 3);
        while (b.arity() != n) b = testing_util::random_interval_element(rng, 3);
        if (!(interval_compose(gamma, {a}) == interval_compose(gamma, {b})))
          return {false, "constant map separates two elements: " + format_pl(f)};
      }
    }

    const IntervalElement e = testing_util::random_interval_element(rng, 3);
    const auto h = surjectivity_witness(e);
    if (is_surjective_tuple(e) == h.has_value()) return {false, "surjectivity witness disagrees on " + format_interval(e)};
    if (h) {
      ++non_surjective;
      if (*h == PLMap::identity()) return {false, "surjectivity witness is the identity"};
      if (!(interval_compose(IntervalElement({*h}), {e}) == interval_compose(IntervalElement::unit(), {e})))
        return {false, "surjectivity witness does not fix " + format_interval(e)};
    } else {
      ++surjective;
      // Any non-identity bump must move some component of a surjective tuple.
      for (int k = 0; k < 4; ++k) {
        Rational a = testing_util::random_unit_rational(rng, 16), b = testing_util::random_unit_rational(rng, 16, true);
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        const PLMap bump = bump_map({a, b});
        if (interval_compose(IntervalElement({bump}), {e}) == e)
          return {false, "bump fixes a surjective tuple: " + format_interval(e)};
      }
    }
  }
  if (!constant || !non_constant || !surjective || !non_surjective) return {false, "a predicate class was never sampled"};
  std::ostringstream d;
  d << "500 maps (" << constant << " constant, " << non_constant << " not) and 500 tuples (" << surjective
    << " surjective, " << non_surjective << " not), seed 4242";
  return {true, d.str()};
}

Outcome criterion5() {
  auto load = [](const std::string& name) { return read_presentation_file(testing_util::fixture_path(name)); };
  const auto monoid = is_strongly_regular(load("monoid.thy"));
  const auto comm = is_strongly_regular(load("commutative-monoid.thy"));
  const auto group = is_strongly_regular(load("group.thy"));
  if (!monoid.accepted()) return {false, "monoid rejected"};
  if (comm.accepted() || comm.failures.size() != 1 || comm.failures[0].same_order || !comm.failures[0].same_set ||
      !comm.failures[0].no_repetition)
    return {false, "commutative monoid not rejected on the order clause alone"};
  if (group.accepted()) return {false, "group accepted"};
  for (const auto& f : group.failures)
    if (f.no_repetition) return {false, "group rejection without the repetition clause"};
  if (run_cli_quiet({"regular", testing_util::fixture_path("commutative-monoid.thy")}) != 1)
    return {false, "CLI exit code for commutative monoid is not 1"};
  return {true, "monoid accepted; commutative monoid fails order; group fails repetition"};
}

Outcome criterion6() {
  const auto r = free_operad_truncation(read_presentation_file(testing_util::fixture_path("monoid.thy")), 3, 5);
  const auto sizes = r.op.carrier_sizes();
  std::ostringstream d;
  d << "carrier sizes [";
  for (std::size_t i = 0; i < sizes.size(); ++i) d << (i ? "," : "") << sizes[i];
  d << "], reverse equal " << (reverse(r.op) == r.op) << ", valid " << validate(r.op).ok();
  const bool pass = sizes == std::vector<std::size_t>{1, 1, 1, 1} && reverse(r.op) == r.op && validate(r.op).ok();
  return {pass, d.str()};
}

Outcome criterion7() {
  std::size_t spaces = 0, found = 0, candidates = 0;
  for (const auto& space : sweep_spaces(2, 2)) {
    ++spaces;
    const auto filtered = search_self_reverse_distinct(space, {true, 1});
    const auto oracle = search_self_reverse_distinct(space, {false, 1});
    candidates += oracle.candidates;
    if (filtered.found.has_value() != oracle.found.has_value() || filtered.exhausted != oracle.exhausted)
      return {false, "filtered and filter-free outcomes differ on " + format_space(space)};
    if (filtered.found && !(*filtered.found == *oracle.found))
      return {false, "filtered and filter-free searches found different operads on " + format_space(space)};
    if (filtered.found) {
      ++found;
      const auto c = verify_candidate(*filtered.found);
      if (!c.is_counterexample() || find_isomorphism(*filtered.found, reverse(*filtered.found)))
        return {false, "certificate does not replay on " + format_space(space)};
      for (const auto& [x, ok] : c.iota_checks)
        if (!ok) return {false, "iota diagram fails in certificate replay"};
    }
  }
  return {true, std::to_string(spaces) + " spaces, " + std::to_string(found) + " with a certified counterexample, " +
                    std::to_string(candidates) + " oracle candidates"};
}

Outcome criterion8() {
  const auto corpus = testing_util::load_corpus();
  std::size_t demos = 0, morphisms = 0, isos = 0;
  for (const auto& op : corpus) {
    if (op.max_arity() < 2 || op.carrier_size(2) == 0) continue;
    const auto r = demo_not_full(op);
    if (r.separated != r.morphisms) return {false, "no separation on " + op.name()};
    ++demos;
  }
  for (const auto& p : corpus)
    for (const auto& q : corpus) {
      if (p.max_arity() != q.max_arity()) continue;
      for_each_morphism(p, q, [&](const OperadMorphism& f) {
        const auto r = check_reflects_iso(f, {0, 1, 2, 3});  // throws if the equivalence breaks
        ++morphisms;
        if (r.is_isomorphism) ++isos;
        return true;
      });
    }
  return {true, std::to_string(demos) + " not-full separations, " + std::to_string(morphisms) + " corpus morphisms (" +
                    std::to_string(isos) + " isomorphisms)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "iota is a monad isomorphism on the corpus, |X| <= 3", 10, criterion1},
      {2, "reversal involution and validity, corpus + 200 random", 60, criterion2},
      {3, "interval operad counterexample over the PL family", 120, criterion3},
      {4, "constancy and surjectivity witnesses on 500 samples", 60, criterion4},
      {5, "strong regularity verdicts", 1, criterion5},
      {6, "free monoid operad at bound 5 is terminal and self-reverse", 30, criterion6},
      {7, "search soundness, N = 2, sizes <= 2", 600, criterion7},
      {8, "not full and reflects isomorphisms on the corpus", 30, criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " - " << c.name << " (" << std::fixed
              << std::setprecision(2) << secs << " s, limit " << std::setprecision(0) << c.limit_seconds << " s)"
              << (in_time ? "" : " [over time]") << (o.detail.empty() ? "" : ": " + o.detail) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
