#pragma once

// Truncated free operad of a strongly regular presentation.
//
// Terms are planar trees whose leaves are operation nodes or unlabeled holes;
// holes are read left to right as x0, x1, .... All terms with at most
// `size_bound` operation nodes and at most N holes are enumerated and
// hash-consed. Every substitution instance of an equation whose two sides
// fit inside the bound is merged, then congruence closure (union-find plus a
// signature table) runs to a fixed point. Each class is named by its smallest
// member under (node count, preorder token sequence), holes before
// operations, operations in declaration order.
//
// Composition substitutes one argument at a time, nullary arguments first,
// so intermediate terms stay as small as possible; a substitution that still
// leaves the bound raises TruncationOverflow.

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "revop/operad.hpp"
#include "revop/operad_io.hpp"
#include "revop/presentation.hpp"

namespace revop {

namespace detail {

class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline constexpr int kHole = -1;

struct TermNode {
  int op = kHole;
  std::vector<std::size_t> kids;
  std::size_t size = 0;   // operation nodes
  std::size_t holes = 0;
};

class TermStore {
 public:
  std::size_t intern(int op, std::vector<std::size_t> kids) {
    auto key = std::make_pair(op, kids);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    TermNode n{op, std::move(kids), op == kHole ? 0u : 1u, op == kHole ? 1u : 0u};
    for (auto k : n.kids) {
      n.size += nodes_[k].size;
      n.holes += nodes_[k].holes;
    }
    nodes_.push_back(std::move(n));
    index_.emplace(std::move(key), nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  std::optional<std::size_t> lookup(int op, const std::vector<std::size_t>& kids) const {
    auto it = index_.find(std::make_pair(op, kids));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const TermNode& operator[](std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<TermNode> nodes_;
  std::map<std::pair<int, std::vector<std::size_t>>, std::size_t> index_;
};

}  // namespace detail

struct FreeOperadResult {
  FiniteOperad op;
  std::size_t size_bound = 0;
  std::size_t max_equation_size = 0;
  // Per arity and class index: canonical representative and stability flag.
  std::vector<std::vector<std::string>> representatives;
  std::vector<std::vector<bool>> boundary_unstable;
  std::size_t terms = 0;
  std::size_t instances = 0;

  bool any_unstable() const {
    for (const auto& row : boundary_unstable)
      if (std::find(row.begin(), row.end(), true) != row.end()) return true;
    return false;
  }
};

class FreeOperadBuilder {
 public:
  FreeOperadBuilder(const Presentation& p, std::size_t max_arity, std::size_t size_bound)
      : p_(p), max_arity_(max_arity), bound_(size_bound) {
    if (max_arity < 1) throw UsageError("free operad needs max arity at least 1");
    const auto verdict = is_strongly_regular(p);
    if (!verdict.accepted())
      throw UsageError("presentation '" + p.name + "' is not strongly regular:\n" + format_verdict(p, verdict));
    enumerate();
    for (std::size_t i = 0; i < store_.size(); ++i) uf_.add();
    for (const auto& e : p_.equations) add_instances(e);
    close();
    name_classes();
  }

  std::size_t term_count() const { return store_.size(); }
  std::size_t instance_count() const { return instances_; }

  // Class id of a term, or nullopt if it is outside the bound.
  std::optional<std::size_t> class_of(const TermExpr& t) {
    if (term_size(t) > bound_ || variable_sequence(t).size() > max_arity_) return std::nullopt;
    return uf_.find(intern_expr(t));
  }

  bool equivalent(const TermExpr& a, const TermExpr& b) {
    auto ca = class_of(a), cb = class_of(b);
    return ca && cb && *ca == *cb;
  }

  // Number of classes among terms with exactly n holes and at most
  // `max_size` operation nodes (defaults to the full bound).
  std::size_t class_count(std::size_t n, std::optional<std::size_t> max_size = std::nullopt) {
    std::set<std::size_t> roots;
    for (std::size_t id = 0; id < store_.size(); ++id)
      if (store_[id].holes == n && store_[id].size <= max_size.value_or(bound_)) roots.insert(uf_.find(id));
    return roots.size();
  }

  FreeOperadResult build() {
    std::vector<std::size_t> sizes(max_arity_ + 1);
    for (std::size_t n = 0; n <= max_arity_; ++n) sizes[n] = classes_[n].size();
    if (sizes[1] == 0) throw AssertionFailure("free operad has no identity class");

    FreeOperadResult r{FiniteOperad(p_.name + "_free", default_labels(sizes), 0)};
    r.size_bound = bound_;
    r.terms = store_.size();
    r.instances = instances_;
    for (const auto& e : p_.equations)
      r.max_equation_size = std::max({r.max_equation_size, term_size(e.lhs), term_size(e.rhs)});
    r.representatives.resize(max_arity_ + 1);
    r.boundary_unstable.resize(max_arity_ + 1);
    for (std::size_t n = 0; n <= max_arity_; ++n)
      for (auto rep : classes_[n]) {
        r.representatives[n].push_back(format_node(rep));
        r.boundary_unstable[n].push_back(store_[rep].size + r.max_equation_size > bound_);
      }

    auto& op = r.op;
    for (std::size_t s = 0; s < op.slot_count(); ++s) {
      auto [theta, args] = op.decode_slot(s);
      op.set_slot_value(s, static_cast<std::uint32_t>(compose_classes(theta, args)));
    }
    return r;
  }

 private:
  void enumerate() {
    // by_size[s][h]: terms with s operation nodes and h holes.
    by_size_.assign(bound_ + 1, std::vector<std::vector<std::size_t>>(max_arity_ + 1));
    if (max_arity_ >= 1) by_size_[0][1].push_back(store_.intern(detail::kHole, {}));
    for (std::size_t s = 1; s <= bound_; ++s) {
      for (std::size_t o = 0; o < p_.signature.operations.size(); ++o) {
        const std::size_t k = p_.signature.operations[o].arity;
        std::vector<std::size_t> kids;
        auto rec = [&](auto&& self, std::size_t i, std::size_t size_left, std::size_t holes_left) -> void {
          if (i == k) {
            if (size_left == 0) {
              const auto id = store_.intern(static_cast<int>(o), kids);
              by_size_[s][store_[id].holes].push_back(id);
            }
            return;
          }
          for (std::size_t cs = 0; cs <= size_left; ++cs)
            for (std::size_t ch = 0; ch <= holes_left; ++ch)
              for (auto c : by_size_[cs][ch]) {
                kids.push_back(c);
                self(self, i + 1, size_left - cs, holes_left - ch);
                kids.pop_back();
              }
        };
        rec(rec, 0, s - 1, max_arity_);
      }
    }
  }

  // Interns a term built from sub-terms already in the store.
  std::size_t intern_expr(const TermExpr& t) {
    if (t.is_variable()) return store_.intern(detail::kHole, {});
    std::vector<std::size_t> kids;
    for (const auto& a : t.args) kids.push_back(intern_expr(a));
    return store_.intern(static_cast<int>(*t.op), kids);
  }

  std::size_t substitute(const TermExpr& pattern, const std::map<std::size_t, std::size_t>& sigma) {
    if (pattern.is_variable()) return sigma.at(pattern.variable);
    std::vector<std::size_t> kids;
    for (const auto& a : pattern.args) kids.push_back(substitute(a, sigma));
    return store_.intern(static_cast<int>(*pattern.op), kids);
  }

  void add_instances(const Equation& e) {
    const auto vars = variable_sequence(e.lhs);
    const std::size_t pattern_size = std::max(term_size(e.lhs), term_size(e.rhs));
    if (pattern_size > bound_) return;
    std::vector<std::size_t> all_terms(store_.size());
    std::iota(all_terms.begin(), all_terms.end(), 0);
    std::map<std::size_t, std::size_t> sigma;
    auto rec = [&](auto&& self, std::size_t i, std::size_t size_left, std::size_t holes_left) -> void {
      if (i == vars.size()) {
        const auto a = substitute(e.lhs, sigma);
        const auto b = substitute(e.rhs, sigma);
        ++instances_;
        uf_.unite(a, b);
        return;
      }
      for (std::size_t cs = 0; cs <= size_left; ++cs)
        for (std::size_t ch = 0; ch <= holes_left; ++ch)
          for (auto t : by_size_[cs][ch]) {
            sigma[vars[i]] = t;
            self(self, i + 1, size_left - cs, holes_left - ch);
          }
    };
    rec(rec, 0, bound_ - pattern_size, max_arity_);
    if (store_.size() != all_terms.size()) throw AssertionFailure("equation instance left the enumerated term set");
  }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<int, std::vector<std::size_t>>, std::size_t> signatures;
      for (std::size_t id = 0; id < store_.size(); ++id) {
        const auto& n = store_[id];
        if (n.op == detail::kHole) continue;
        std::vector<std::size_t> kids;
        for (auto k : n.kids) kids.push_back(uf_.find(k));
        auto [it, inserted] = signatures.emplace(std::make_pair(n.op, std::move(kids)), id);
        if (!inserted && uf_.unite(it->second, id)) changed = true;
      }
    }
  }

  std::vector<int> preorder(std::size_t id) const {
    std::vector<int> out;
    auto rec = [&](auto&& self, std::size_t t) -> void {
      out.push_back(store_[t].op + 1);  // hole = 0
      for (auto k : store_[t].kids) self(self, k);
    };
    rec(rec, id);
    return out;
  }

  bool term_less(std::size_t a, std::size_t b) const {
    if (store_[a].size != store_[b].size) return store_[a].size < store_[b].size;
    return preorder(a) < preorder(b);
  }

  void name_classes() {
    std::map<std::size_t, std::size_t> best;  // root -> representative
    for (std::size_t id = 0; id < store_.size(); ++id) {
      const auto root = uf_.find(id);
      auto it = best.find(root);
      if (it == best.end()) {
        best.emplace(root, id);
      } else if (term_less(id, it->second)) {
        it->second = id;
      }
    }
    classes_.assign(max_arity_ + 1, {});
    for (const auto& [root, rep] : best) classes_[store_[rep].holes].push_back(rep);
    for (auto& row : classes_) std::sort(row.begin(), row.end(), [&](auto a, auto b) { return term_less(a, b); });
    for (std::size_t n = 0; n <= max_arity_; ++n)
      for (std::size_t i = 0; i < classes_[n].size(); ++i) class_index_[uf_.find(classes_[n][i])] = i;
  }

  std::string format_node(std::size_t id) const {
    std::size_t next_var = 0;
    auto rec = [&](auto&& self, std::size_t t) -> std::string {
      const auto& n = store_[t];
      if (n.op == detail::kHole) return "x" + std::to_string(next_var++);
      std::string out = p_.signature.operations[n.op].name;
      if (n.kids.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? ", " : "") + self(self, n.kids[i]);
      return out + ")";
    };
    return rec(rec, id);
  }

  // Result of plugging `arg` into the hole with the given left-to-right
  // index of `term`, or nullopt if it leaves the bound.
  std::optional<std::size_t> plug(std::size_t term, std::size_t hole, std::size_t arg) {
    if (store_[term].size + store_[arg].size > bound_ || store_[term].holes - 1 + store_[arg].holes > max_arity_)
      return std::nullopt;
    std::size_t seen = 0;
    auto rec = [&](auto&& self, std::size_t t) -> std::size_t {
      const auto& n = store_[t];
      if (n.op == detail::kHole) return seen++ == hole ? arg : t;
      if (seen + n.holes <= hole) {
        seen += n.holes;
        return t;
      }
      std::vector<std::size_t> kids;
      for (auto k : n.kids) kids.push_back(self(self, k));
      return store_.intern(n.op, kids);
    };
    return rec(rec, term);
  }

  std::size_t compose_classes(ElemRef theta, const std::vector<ElemRef>& args) {
    std::vector<std::size_t> order(args.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return args[a].arity < args[b].arity; });
    std::vector<std::size_t> width(args.size(), 1);
    std::size_t current = classes_[theta.arity][theta.index];
    std::size_t current_arity = theta.arity;
    for (auto j : order) {
      std::size_t hole = 0;
      for (std::size_t q = 0; q < j; ++q) hole += width[q];
      const auto plugged = plug(current, hole, classes_[args[j].arity][args[j].index]);
      if (!plugged)
        throw TruncationOverflow("composite " + format_node(current) + " with " + format_node(classes_[args[j].arity][args[j].index]) +
                                 " in position " + std::to_string(hole) + " exceeds size bound " + std::to_string(bound_));
      width[j] = args[j].arity;
      current_arity = current_arity - 1 + args[j].arity;
      const auto root = uf_.find(*plugged);
      current = classes_[current_arity][class_index_.at(root)];
    }
    return class_index_.at(uf_.find(current));
  }

  const Presentation& p_;
  std::size_t max_arity_;
  std::size_t bound_;
  detail::TermStore store_;
  detail::UnionFind uf_;
  std::vector<std::vector<std::vector<std::size_t>>> by_size_;
  std::vector<std::vector<std::size_t>> classes_;
  std::map<std::size_t, std::size_t> class_index_;
  std::size_t instances_ = 0;
};

inline FreeOperadResult free_operad_truncation(const Presentation& p, std::size_t max_arity, std::size_t size_bound) {
  return FreeOperadBuilder(p, max_arity, size_bound).build();
}

inline std::string format_free_operad(const FreeOperadResult& r) {
  std::ostringstream out;
  out << "# free operad truncation: max_arity " << r.op.max_arity() << ", size_bound " << r.size_bound << "\n";
  out << "# terms " << r.terms << ", equation instances " << r.instances << ", max equation size "
      << r.max_equation_size << "\n";
  for (std::size_t n = 0; n < r.representatives.size(); ++n)
    for (std::size_t i = 0; i < r.representatives[n].size(); ++i)
      out << "# class " << r.op.labels(n)[i] << " = " << r.representatives[n][i]
          << (r.boundary_unstable[n][i] ? "  [boundary-unstable]" : "") << "\n";
  out << format_operad(r.op);
  return out.str();
}

}  // namespace revop
