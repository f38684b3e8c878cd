#pragma once

// Finite, arity-truncated non-symmetric operads.
//
// An operad of max arity N stores carriers P(0..N) as labeled sets and a
// composition table with one slot per admissible tuple
// (theta in P(n); theta_1 in P(k_1), ..., theta_n in P(k_n)) where
// k_1 + ... + k_n <= N. Slots are laid out shape by shape, shapes ordered by
// n and then lexicographically by (k_1, ..., k_n); inside a shape the tuple
// indices form a mixed-radix number with theta most significant.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "revop/error.hpp"

namespace revop {

struct ElemRef {
  std::size_t arity = 0;
  std::size_t index = 0;

  friend auto operator<=>(const ElemRef&, const ElemRef&) = default;
};

struct Shape {
  std::size_t arity = 0;
  std::vector<std::size_t> arg_arities;
  std::size_t result_arity = 0;
  std::size_t offset = 0;
  std::size_t count = 0;
  // Carrier sizes of theta and each argument, most significant first.
  std::vector<std::size_t> radices;
};

// Calls fn(span<const size_t>) for every vector of `length` arities whose sum
// is at most `budget`, in lexicographic order.
template <class Fn>
void for_each_arity_vector(std::size_t length, std::size_t budget, Fn&& fn) {
  std::vector<std::size_t> ks(length, 0);
  if (length == 0) {
    fn(std::span<const std::size_t>(ks));
    return;
  }
  std::size_t sum = 0;
  while (true) {
    fn(std::span<const std::size_t>(ks));
    // Advance: bump the last position that can grow, zero everything after.
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (sum < budget) {
        ++ks[pos];
        ++sum;
        break;
      }
      sum -= ks[pos];
      ks[pos] = 0;
      if (pos == 0) return;
    }
  }
}

class FiniteOperad {
 public:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  FiniteOperad() : FiniteOperad("empty", {{}, {"id"}}, 0) {}

  // `labels[n]` names the elements of P(n); max arity is labels.size() - 1.
  // The table starts with every slot unset.
  FiniteOperad(std::string name, std::vector<std::vector<std::string>> labels,
               std::size_t identity_index)
      : name_(std::move(name)), labels_(std::move(labels)), identity_index_(identity_index) {
    if (labels_.size() < 2) throw UsageError("operad needs max arity at least 1");
    if (identity_index_ >= labels_[1].size())
      throw UsageError("identity index out of range of P(1)");
    build_shapes();
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t max_arity() const { return labels_.size() - 1; }
  std::size_t carrier_size(std::size_t n) const { return n < labels_.size() ? labels_[n].size() : 0; }
  std::vector<std::size_t> carrier_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& l : labels_) out.push_back(l.size());
    return out;
  }
  const std::vector<std::string>& labels(std::size_t n) const { return labels_.at(n); }
  const std::string& label(ElemRef e) const { return labels_.at(e.arity).at(e.index); }
  std::optional<std::size_t> find_label(std::size_t n, std::string_view label) const {
    if (n >= labels_.size()) return std::nullopt;
    const auto& l = labels_[n];
    auto it = std::find(l.begin(), l.end(), label);
    if (it == l.end()) return std::nullopt;
    return static_cast<std::size_t>(it - l.begin());
  }
  ElemRef identity() const { return {1, identity_index_}; }
  bool contains(ElemRef e) const { return e.arity < labels_.size() && e.index < labels_[e.arity].size(); }

  const std::vector<Shape>& shapes() const { return shapes_; }
  std::size_t slot_count() const { return table_.size(); }

  std::optional<std::size_t> find_shape(std::size_t n, std::span<const std::size_t> arg_arities) const {
    if (n > max_arity() || arg_arities.size() != n) return std::nullopt;
    std::size_t sum = 0;
    for (auto k : arg_arities) {
      if (k > max_arity()) return std::nullopt;
      sum += k;
    }
    if (sum > max_arity()) return std::nullopt;
    auto it = shape_index_.find(shape_code(n, arg_arities));
    if (it == shape_index_.end()) return std::nullopt;
    return it->second;
  }

  // Slot of theta(args). Throws ArityMismatch when args.size() differs from
  // theta's arity and TruncationOverflow when the composite leaves P(0..N).
  std::size_t slot(ElemRef theta, std::span<const ElemRef> args) const {
    if (!contains(theta)) throw UsageError("element reference out of range");
    if (args.size() != theta.arity)
      throw ArityMismatch("composition of an arity-" + std::to_string(theta.arity) + " element with " +
                          std::to_string(args.size()) + " arguments");
    std::size_t sum = 0;
    std::uint64_t code = theta.arity;
    for (const auto& a : args) {
      if (!contains(a)) throw UsageError("element reference out of range");
      sum += a.arity;
      code = code * (max_arity() + 1) + a.arity;
    }
    if (sum > max_arity())
      throw TruncationOverflow("composite arity " + std::to_string(sum) + " exceeds max arity " +
                               std::to_string(max_arity()));
    const Shape& shape = shapes_[shape_index_.at(code)];
    std::size_t local = theta.index;
    for (std::size_t i = 0; i < args.size(); ++i) local = local * shape.radices[i + 1] + args[i].index;
    return shape.offset + local;
  }

  std::size_t shape_of_slot(std::size_t slot) const {
    auto it = std::upper_bound(shapes_.begin(), shapes_.end(), slot,
                               [](std::size_t s, const Shape& sh) { return s < sh.offset; });
    return static_cast<std::size_t>(it - shapes_.begin()) - 1;
  }

  std::pair<ElemRef, std::vector<ElemRef>> decode_slot(std::size_t slot) const {
    const Shape& shape = shapes_[shape_of_slot(slot)];
    std::size_t local = slot - shape.offset;
    std::vector<ElemRef> args(shape.arity);
    for (std::size_t i = shape.arity; i-- > 0;) {
      args[i] = {shape.arg_arities[i], local % shape.radices[i + 1]};
      local /= shape.radices[i + 1];
    }
    return {ElemRef{shape.arity, local}, std::move(args)};
  }

  std::uint32_t slot_value(std::size_t s) const { return table_[s]; }
  void set_slot_value(std::size_t s, std::uint32_t v) { table_[s] = v; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  void set(ElemRef theta, std::span<const ElemRef> args, std::size_t result_index) {
    table_[slot(theta, args)] = static_cast<std::uint32_t>(result_index);
  }
  void set(ElemRef theta, std::initializer_list<ElemRef> args, std::size_t result_index) {
    set(theta, std::span<const ElemRef>(args.begin(), args.size()), result_index);
  }

  // Structural equality: labels, identity and every table entry. Names are
  // not compared.
  friend bool operator==(const FiniteOperad& a, const FiniteOperad& b) {
    return a.labels_ == b.labels_ && a.identity_index_ == b.identity_index_ && a.table_ == b.table_;
  }

 private:
  std::uint64_t shape_code(std::size_t n, std::span<const std::size_t> ks) const {
    std::uint64_t code = n;
    for (auto k : ks) code = code * (max_arity() + 1) + k;
    return code;
  }

  void build_shapes() {
    const std::size_t max_n = max_arity();
    std::size_t offset = 0;
    for (std::size_t n = 0; n <= max_n; ++n) {
      for_each_arity_vector(n, max_n, [&](std::span<const std::size_t> ks) {
        Shape shape;
        shape.arity = n;
        shape.arg_arities.assign(ks.begin(), ks.end());
        shape.result_arity = std::accumulate(ks.begin(), ks.end(), std::size_t{0});
        shape.radices.push_back(labels_[n].size());
        std::size_t count = labels_[n].size();
        for (auto k : ks) {
          shape.radices.push_back(labels_[k].size());
          count *= labels_[k].size();
        }
        shape.offset = offset;
        shape.count = count;
        offset += count;
        shape_index_.emplace(shape_code(n, ks), shapes_.size());
        shapes_.push_back(std::move(shape));
      });
    }
    table_.assign(offset, kUnset);
  }

  std::string name_;
  std::vector<std::vector<std::string>> labels_;
  std::size_t identity_index_ = 0;
  std::vector<Shape> shapes_;
  std::unordered_map<std::uint64_t, std::size_t> shape_index_;
  std::vector<std::uint32_t> table_;
};

// Calls fn(span<const ElemRef>) for every tuple of elements with the given
// arities, in lexicographic index order. Does nothing if a carrier is empty.
template <class Fn>
void for_each_element_tuple(const FiniteOperad& op, std::span<const std::size_t> arities, Fn&& fn) {
  std::vector<ElemRef> tuple(arities.size());
  for (std::size_t i = 0; i < arities.size(); ++i) {
    if (op.carrier_size(arities[i]) == 0) return;
    tuple[i] = {arities[i], 0};
  }
  while (true) {
    fn(std::span<const ElemRef>(tuple));
    std::size_t pos = tuple.size();
    while (true) {
      if (pos == 0) return;
      --pos;
      if (++tuple[pos].index < op.carrier_size(tuple[pos].arity)) break;
      tuple[pos].index = 0;
    }
  }
}

// Calls fn(ElemRef) for every element in (arity, index) order.
template <class Fn>
void for_each_element(const FiniteOperad& op, Fn&& fn) {
  for (std::size_t n = 0; n <= op.max_arity(); ++n)
    for (std::size_t i = 0; i < op.carrier_size(n); ++i) fn(ElemRef{n, i});
}

inline ElemRef compose(const FiniteOperad& op, ElemRef theta, std::span<const ElemRef> args) {
  const std::size_t s = op.slot(theta, args);
  const std::uint32_t v = op.slot_value(s);
  std::size_t arity = 0;
  for (const auto& a : args) arity += a.arity;
  if (v == FiniteOperad::kUnset || v >= op.carrier_size(arity))
    throw StructuralError("composition table has no valid entry for slot " + std::to_string(s));
  return {arity, v};
}

inline ElemRef compose(const FiniteOperad& op, ElemRef theta, std::initializer_list<ElemRef> args) {
  return compose(op, theta, std::span<const ElemRef>(args.begin(), args.size()));
}

// "m(a, b)" using element labels.
inline std::string format_composite(const FiniteOperad& op, ElemRef theta, std::span<const ElemRef> args) {
  std::string out = op.label(theta) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += op.label(args[i]);
  }
  return out + ")";
}

// Visits every associativity instance theta(middle...)(inner...) for which
// both bracketings are admissible. `inner` is the flattened list of the
// arguments of the middle elements, grouped by middle[i].arity.
template <class Fn>
void for_each_associativity_instance(const FiniteOperad& op, Fn&& fn) {
  const std::size_t max_n = op.max_arity();
  for (std::size_t n = 0; n <= max_n; ++n) {
    if (op.carrier_size(n) == 0) continue;
    for_each_arity_vector(n, max_n, [&](std::span<const std::size_t> ks) {
      const std::size_t total = std::accumulate(ks.begin(), ks.end(), std::size_t{0});
      for_each_element_tuple(op, ks, [&](std::span<const ElemRef> middle) {
        for_each_arity_vector(total, max_n, [&](std::span<const std::size_t> ms) {
          for_each_element_tuple(op, ms, [&](std::span<const ElemRef> inner) {
            for (std::size_t t = 0; t < op.carrier_size(n); ++t) fn(ElemRef{n, t}, middle, inner);
          });
        });
      });
    });
  }
}

struct Violation {
  std::string law;
  std::string instance;
  std::string lhs;
  std::string rhs;
};

struct LawReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Throws StructuralError unless every admissible slot holds an in-range value.
inline void check_structure(const FiniteOperad& op) {
  for (const auto& shape : op.shapes()) {
    for (std::size_t s = shape.offset; s < shape.offset + shape.count; ++s) {
      const auto v = op.slot_value(s);
      if (v == FiniteOperad::kUnset) {
        auto [theta, args] = op.decode_slot(s);
        throw StructuralError("missing composition entry for " + format_composite(op, theta, args));
      }
      if (v >= op.carrier_size(shape.result_arity)) {
        auto [theta, args] = op.decode_slot(s);
        throw StructuralError("composition entry for " + format_composite(op, theta, args) +
                              " is out of range");
      }
    }
  }
}

// Checks unit and associativity laws on every admissible instance.
inline LawReport validate(const FiniteOperad& op) {
  check_structure(op);
  LawReport report;
  const ElemRef id = op.identity();

  for_each_element(op, [&](ElemRef theta) {
    const ElemRef args[] = {theta};
    const ElemRef lhs = compose(op, id, args);
    if (lhs != theta)
      report.violations.push_back({"left unit", format_composite(op, id, args), op.label(lhs), op.label(theta)});

    std::vector<ElemRef> ids(theta.arity, id);
    const ElemRef r = compose(op, theta, ids);
    if (r != theta)
      report.violations.push_back({"right unit", format_composite(op, theta, ids), op.label(r), op.label(theta)});
  });

  std::vector<ElemRef> composed_middle;
  for_each_associativity_instance(op, [&](ElemRef theta, std::span<const ElemRef> middle,
                                          std::span<const ElemRef> inner) {
    composed_middle.clear();
    std::size_t pos = 0;
    for (const auto& m : middle) {
      composed_middle.push_back(compose(op, m, inner.subspan(pos, m.arity)));
      pos += m.arity;
    }
    const ElemRef lhs = compose(op, theta, composed_middle);
    const ElemRef rhs = compose(op, compose(op, theta, middle), inner);
    if (lhs != rhs) {
      std::string instance = op.label(theta) + "(";
      pos = 0;
      for (std::size_t i = 0; i < middle.size(); ++i) {
        if (i) instance += ", ";
        instance += format_composite(op, middle[i], inner.subspan(pos, middle[i].arity));
        pos += middle[i].arity;
      }
      instance += ")";
      report.violations.push_back({"associativity", instance, op.label(lhs), op.label(rhs)});
    }
  });
  return report;
}

// Toggles a "rev_" prefix so that reversing twice restores the name.
inline std::string reversed_name(const std::string& name) {
  return name.starts_with("rev_") ? name.substr(4) : "rev_" + name;
}

// Same carriers and identity; theta o_rev (a_1, ..., a_n) = theta o (a_n, ..., a_1).
inline FiniteOperad reverse(const FiniteOperad& op) {
  check_structure(op);
  std::vector<std::vector<std::string>> labels;
  for (std::size_t n = 0; n <= op.max_arity(); ++n) labels.push_back(op.labels(n));
  FiniteOperad out(reversed_name(op.name()), std::move(labels), op.identity().index);
  for (std::size_t s = 0; s < op.slot_count(); ++s) {
    auto [theta, args] = op.decode_slot(s);
    std::reverse(args.begin(), args.end());
    out.set_slot_value(s, op.slot_value(op.slot(theta, args)));
  }
  return out;
}

// Default element names: c* (arity 0), id/u* (arity 1), b* (2), t* (3),
// p<n>e* above. Distinct across arities, so files stay unambiguous.
inline std::string default_label(std::size_t arity, std::size_t index) {
  switch (arity) {
    case 0: return "c" + std::to_string(index);
    case 1: return index == 0 ? std::string("id") : "u" + std::to_string(index);
    case 2: return "b" + std::to_string(index);
    case 3: return "t" + std::to_string(index);
    default: return "p" + std::to_string(arity) + "e" + std::to_string(index);
  }
}

inline std::vector<std::vector<std::string>> default_labels(std::span<const std::size_t> sizes) {
  std::vector<std::vector<std::string>> out(sizes.size());
  for (std::size_t n = 0; n < sizes.size(); ++n)
    for (std::size_t i = 0; i < sizes[n]; ++i) out[n].push_back(default_label(n, i));
  return out;
}

// Every carrier P(0..N) a singleton; the unique table is forced.
inline FiniteOperad terminal_operad(std::size_t max_arity) {
  std::vector<std::size_t> sizes(max_arity + 1, 1);
  FiniteOperad op("terminal" + std::to_string(max_arity), default_labels(sizes), 0);
  for (std::size_t s = 0; s < op.slot_count(); ++s) op.set_slot_value(s, 0);
  return op;
}

}  // namespace revop
