#pragma once

// Command-line front end. Exit codes: 0 holds/success, 1 property fails or
// nothing found, 2 usage or parse error, 3 internal assertion failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revop/free_operad.hpp"
#include "revop/interval_demo.hpp"
#include "revop/isomorphism.hpp"
#include "revop/monad.hpp"
#include "revop/operad_io.hpp"
#include "revop/predicates.hpp"
#include "revop/presentation.hpp"
#include "revop/search.hpp"

namespace revop::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2, kInternal = 3 };

inline std::string bounds_header(const FiniteOperad& op) {
  return "# truncated operad: max_arity " + std::to_string(op.max_arity()) + "\n";
}

inline void print_violations(std::ostream& out, const LawReport& r, std::size_t limit = 20) {
  for (std::size_t i = 0; i < r.violations.size() && i < limit; ++i) {
    const auto& v = r.violations[i];
    out << "violation: " << v.law << " at " << v.instance << ": " << v.lhs << " != " << v.rhs << "\n";
  }
  if (r.violations.size() > limit) out << "violations_omitted: " << r.violations.size() - limit << "\n";
}

inline std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!detail::is_natural(item)) throw UsageError("--sizes expects comma-separated naturals, got '" + text + "'");
    out.push_back(std::stoul(item));
  }
  return out;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite operads, their reverses and induced monads"};
  app.require_subcommand(1);
  std::uint64_t seed = ScanOptions{}.seed;
  app.add_option("--seed", seed, "Seed for sampled monad scans");

  std::string file, file2;

  auto* check = app.add_subcommand("check", "Validate an operad file");
  check->add_option("file", file)->required();

  auto* reverse_cmd = app.add_subcommand("reverse", "Print the reverse operad");
  reverse_cmd->add_option("file", file)->required();

  auto* iso = app.add_subcommand("iso", "Search for an isomorphism between two operads");
  iso->add_option("first", file)->required();
  iso->add_option("second", file2)->required();

  std::size_t set_size = 3;
  std::size_t samples = ScanOptions{}.samples;
  auto* monad_check = app.add_subcommand("monad-check", "Check the induced monad laws for |X| = 0..K");
  monad_check->add_option("file", file)->required();
  monad_check->add_option("--set-size", set_size, "Largest |X| (exhaustive up to 3, sampled above)");
  monad_check->add_option("--samples", samples, "Samples per size above the exhaustive limit");
  auto* monad_iota = app.add_subcommand("monad-iota", "Check that iota is a monad isomorphism S -> rev S");
  monad_iota->add_option("file", file)->required();
  monad_iota->add_option("--set-size", set_size, "Largest |X| (exhaustive up to 3, sampled above)");
  monad_iota->add_option("--samples", samples, "Samples per size above the exhaustive limit");

  auto* separating = app.add_subcommand("separating", "Find a separating-property witness");
  separating->add_option("file", file)->required();

  std::size_t max_interior = 2, workers = 0;
  long long max_denominator = 4;
  auto* demo = app.add_subcommand("interval-demo", "Interval operad versus its reverse over a PL family");
  demo->add_option("--max-interior", max_interior, "Interior breakpoints per map");
  demo->add_option("--max-denominator", max_denominator, "Knot denominator bound");
  demo->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  auto* regular = app.add_subcommand("regular", "Strong-regularity verdict for a presentation");
  regular->add_option("file", file)->required();

  std::size_t max_arity = 0, size_bound = 0;
  auto* free_cmd = app.add_subcommand("free-operad", "Truncated free operad of a strongly regular presentation");
  free_cmd->add_option("file", file)->required();
  free_cmd->add_option("--max-arity", max_arity)->required();
  free_cmd->add_option("--size-bound", size_bound)->required();

  std::string sizes_text, output;
  std::size_t sweep = 0;
  bool no_filters = false, require_separating = false;
  std::size_t search_workers = 1;
  auto* search = app.add_subcommand("search", "Search for P not isomorphic to rev(P)");
  search->add_option("--max-arity", max_arity)->required();
  auto* sizes_opt = search->add_option("--sizes", sizes_text, "Carrier sizes s0,s1,...,sN");
  auto* sweep_opt = search->add_option("--sweep", sweep, "Sweep every space with all sizes <= S");
  sizes_opt->excludes(sweep_opt);
  search->add_flag("--no-filters", no_filters, "Skip invariant filters (oracle mode)");
  search->add_flag("--require-separating", require_separating,
                   "Also require the separating property on P and not on rev(P)");
  search->add_option("--workers", search_workers, "Worker threads (0 = hardware concurrency)");
  search->add_option("--output", output, "Write the found operad to this file");

  auto* not_full = app.add_subcommand("not-full", "No operad map P -> rev(P) induces iota");
  not_full->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const ScanOptions scan{3, samples, seed};

  try {
    if (check->parsed()) {
      const auto op = read_operad_file(file);
      out << bounds_header(op);
      const auto report = validate(op);
      if (report.ok()) {
        out << "ok\n";
        return kHolds;
      }
      out << "invalid\n";
      print_violations(out, report);
      return kFails;
    }
    if (reverse_cmd->parsed()) {
      const auto op = read_operad_file(file);
      const auto report = validate(op);
      if (!report.ok()) {
        err << "error: " << file << " is not a valid operad\n";
        print_violations(err, report);
        return kUsage;
      }
      out << format_operad(reverse(op));
      return kHolds;
    }
    if (iso->parsed()) {
      const auto p = read_operad_file(file);
      const auto q = read_operad_file(file2);
      if (p.max_arity() != q.max_arity()) throw UsageError("operads have different max arity");
      out << bounds_header(p);
      out << "source: " << p.name() << "\ntarget: " << q.name() << "\n";
      if (auto f = find_isomorphism(p, q)) {
        out << "isomorphism: found\n" << format_morphism(*f);
        return kHolds;
      }
      out << "isomorphism: none (exhaustive)\n";
      return kFails;
    }
    if (monad_check->parsed() || monad_iota->parsed()) {
      const bool iota_mode = monad_iota->parsed();
      const auto op = read_operad_file(file);
      out << "# truncated operad: max_arity " << op.max_arity() << ", |X| <= " << set_size
          << " (exhaustive up to " << scan.exhaustive_limit << ", " << scan.samples << " samples above, seed " << seed
          << ")\n";
      bool ok = true;
      for (std::size_t x = 0; x <= set_size; ++x) {
        const auto report =
            iota_mode ? check_iota_monad_iso(op, {x}, scan) : check_monad_laws(op, {x}, scan);
        out << (iota_mode ? "iota_monad_iso" : "monad_laws") << " |X|=" << x << ": "
            << (report.ok() ? "ok" : "fail") << (x > scan.exhaustive_limit ? " (sampled)" : "") << "\n";
        print_violations(out, report, 5);
        ok = ok && report.ok();
      }
      return ok ? kHolds : kFails;
    }
    if (separating->parsed()) {
      const auto op = read_operad_file(file);
      out << bounds_header(op);
      if (auto w = has_separating_property(op)) {
        out << "separating: phi=" << op.label(w->phi) << " gamma=" << op.label(w->gamma)
            << " composite=" << op.label(w->composite) << "\n";
        return kHolds;
      }
      out << "separating: none\n";
      return kFails;
    }
    if (demo->parsed()) {
      const auto r = paper_counterexample(max_interior, max_denominator, workers);
      out << r.text;
      return r.holds() ? kHolds : kFails;
    }
    if (regular->parsed()) {
      const auto p = read_presentation_file(file);
      const auto v = is_strongly_regular(p);
      out << "# strong regularity: syntactic test, no truncation\n" << format_verdict(p, v);
      return v.accepted() ? kHolds : kFails;
    }
    if (free_cmd->parsed()) {
      const auto p = read_presentation_file(file);
      const auto r = free_operad_truncation(p, max_arity, size_bound);
      out << format_free_operad(r);
      const auto report = validate(r.op);
      if (!report.ok()) {
        err << "warning: the truncated free operad fails validate (see boundary-unstable classes)\n";
        print_violations(err, report);
        return kFails;
      }
      return kHolds;
    }
    if (search->parsed()) {
      std::vector<SearchSpace> spaces;
      if (!sizes_text.empty()) {
        spaces.push_back({max_arity, parse_sizes(sizes_text)});
      } else if (sweep_opt->count() > 0) {
        spaces = sweep_spaces(max_arity, sweep);
      } else {
        throw UsageError("search needs --sizes or --sweep");
      }
      SearchOptions opt{!no_filters, search_workers,
                        require_separating ? SearchTarget::separated : SearchTarget::non_isomorphic};
      for (const auto& space : spaces) {
        const auto r = search_self_reverse_distinct(space, opt);
        out << format_search_report(r);
        if (r.found) {
          if (!output.empty()) {
            std::ofstream f(output);
            if (!f) throw UsageError("cannot write " + output);
            f << format_operad(*r.found);
          }
          return kHolds;
        }
      }
      return kFails;
    }
    if (not_full->parsed()) {
      const auto op = read_operad_file(file);
      out << demo_not_full(op).text;
      return kHolds;
    }
  } catch (const ParseError& e) {
    err << "error: " << file << ": " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TruncationOverflow& e) {
    err << "error: truncation overflow: " << e.what() << "\n";
    return kUsage;
  } catch (const AssertionFailure& e) {
    err << "internal assertion failure: " << e.what() << "\n";
    return kInternal;
  } catch (const CertificateFailure& e) {
    err << "internal assertion failure: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace revop::cli
