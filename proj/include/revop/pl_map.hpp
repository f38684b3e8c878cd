#pragma once

// Continuous non-decreasing piecewise-linear maps [0,1) -> [0,1) with
// rational breakpoints, kept in a canonical form so that equality of maps is
// equality of representations.

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revop/rational.hpp"

namespace revop {

class InvalidPLMap : public UsageError {
 public:
  using UsageError::UsageError;
};

struct PLPoint {
  Rational t;
  Rational v;

  friend bool operator==(const PLPoint&, const PLPoint&) = default;
};

// The map interpolates linearly between consecutive points and, on the final
// piece [t_m, 1), linearly toward (1, limit). `limit` is the one-sided limit
// at 1 and is attained only when the final piece is flat.
class PLMap {
 public:
  PLMap(std::vector<PLPoint> points, Rational limit) : points_(std::move(points)), limit_(std::move(limit)) {
    check();
    canonicalize();
  }

  static PLMap identity() { return PLMap({{Rational(0), Rational(0)}}, Rational(1)); }
  static PLMap constant(const Rational& c) { return PLMap({{Rational(0), c}}, c); }

  const std::vector<PLPoint>& points() const { return points_; }
  const Rational& limit() const { return limit_; }
  const Rational& start_value() const { return points_.front().v; }

  friend bool operator==(const PLMap&, const PLMap&) = default;
  friend bool operator<(const PLMap& a, const PLMap& b) {
    const std::size_t n = std::min(a.points_.size(), b.points_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.points_[i].t != b.points_[i].t) return a.points_[i].t < b.points_[i].t;
      if (a.points_[i].v != b.points_[i].v) return a.points_[i].v < b.points_[i].v;
    }
    if (a.points_.size() != b.points_.size()) return a.points_.size() < b.points_.size();
    return a.limit_ < b.limit_;
  }

 private:
  void check() const {
    if (points_.empty()) throw InvalidPLMap("PL map needs at least one point");
    if (points_.front().t != 0) throw InvalidPLMap("first breakpoint must be at t = 0");
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const auto& p = points_[j];
      if (p.t >= 1) throw InvalidPLMap("breakpoint abscissa " + to_string(p.t) + " not below 1");
      if (p.v < 0 || p.v >= 1) throw InvalidPLMap("value " + to_string(p.v) + " outside [0,1)");
      if (j > 0 && p.t <= points_[j - 1].t) throw InvalidPLMap("breakpoint abscissae must increase strictly");
      if (j > 0 && p.v < points_[j - 1].v) throw InvalidPLMap("PL map must be non-decreasing");
    }
    if (limit_ < points_.back().v || limit_ > 1)
      throw InvalidPLMap("limit " + to_string(limit_) + " must lie in [" + to_string(points_.back().v) + ", 1]");
  }

  static bool collinear(const PLPoint& a, const PLPoint& b, const PLPoint& c) {
    return (b.v - a.v) * (c.t - a.t) == (c.v - a.v) * (b.t - a.t);
  }

  void canonicalize() {
    std::vector<PLPoint> out;
    out.reserve(points_.size() + 1);
    auto push = [&](const PLPoint& q) {
      while (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), q)) out.pop_back();
      out.push_back(q);
    };
    for (const auto& p : points_) push(p);
    push({Rational(1), limit_});
    out.pop_back();
    points_ = std::move(out);
  }

  std::vector<PLPoint> points_;
  Rational limit_;
};

inline Rational pl_eval(const PLMap& f, const Rational& t) {
  if (t < 0 || t >= 1) throw UsageError("pl_eval argument " + to_string(t) + " outside [0,1)");
  const auto& pts = f.points();
  std::size_t j = pts.size() - 1;
  while (pts[j].t > t) --j;
  const Rational next_t = (j + 1 < pts.size()) ? pts[j + 1].t : Rational(1);
  const Rational next_v = (j + 1 < pts.size()) ? pts[j + 1].v : f.limit();
  return pts[j].v + (next_v - pts[j].v) * (t - pts[j].t) / (next_t - pts[j].t);
}

// (f o g)(t) = f(g(t)). Breakpoints: those of g, plus g-preimages of f's
// breakpoints found piece by piece.
inline PLMap pl_compose(const PLMap& f, const PLMap& g) {
  const auto& gp = g.points();
  const auto& fp = f.points();
  std::vector<PLPoint> out;
  for (std::size_t j = 0; j < gp.size(); ++j) {
    const Rational& a = gp[j].t;
    const Rational& va = gp[j].v;
    const Rational b = (j + 1 < gp.size()) ? gp[j + 1].t : Rational(1);
    const Rational vb = (j + 1 < gp.size()) ? gp[j + 1].v : g.limit();
    out.push_back({a, pl_eval(f, va)});
    if (va == vb) continue;
    for (std::size_t k = 1; k < fp.size(); ++k) {
      const Rational& s = fp[k].t;
      if (s <= va || s >= vb) continue;
      out.push_back({a + (s - va) * (b - a) / (vb - va), fp[k].v});
    }
  }
  const Rational limit = g.limit() < 1 ? pl_eval(f, g.limit()) : f.limit();
  return PLMap(std::move(out), limit);
}

struct Supremum {
  Rational value;
  bool attained = false;
};

inline Supremum pl_sup(const PLMap& f) { return {f.limit(), f.limit() == f.points().back().v}; }

inline bool is_constant_map(const PLMap& g) { return g.points().size() == 1 && g.limit() == g.start_value(); }

struct ConstancyWitness {
  PLMap first;
  PLMap second;
};

// For non-constant g: constant maps at t = 0 and at the first breakpoint
// abscissa where g moves (or the midpoint of the last piece if g only moves
// there), so that g o first != g o second.
inline std::optional<ConstancyWitness> constancy_witness(const PLMap& g) {
  if (is_constant_map(g)) return std::nullopt;
  const auto& pts = g.points();
  Rational t0 = pts.front().t;
  std::optional<Rational> t1;
  for (std::size_t j = 1; j < pts.size() && !t1; ++j)
    if (pts[j].v != pts.front().v) t1 = pts[j].t;
  if (!t1) t1 = (pts.back().t + 1) / 2;
  return ConstancyWitness{PLMap::constant(t0), PLMap::constant(*t1)};
}

inline std::string format_pl(const PLMap& f) {
  std::string out = "pl [";
  for (std::size_t j = 0; j < f.points().size(); ++j) {
    if (j) out += ",";
    out += "(" + to_string(f.points()[j].t) + "," + to_string(f.points()[j].v) + ")";
  }
  return out + "] limit " + to_string(f.limit());
}

inline PLMap parse_pl(std::string_view text) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  auto fail = [&] { return InvalidPLMap("malformed PL map '" + std::string(text) + "'"); };
  if (!compact.starts_with("pl[")) throw fail();
  const auto close = compact.find(']');
  if (close == std::string::npos || compact.compare(close + 1, 5, "limit") != 0) throw fail();
  std::vector<PLPoint> pts;
  std::string_view body = std::string_view(compact).substr(3, close - 3);
  while (!body.empty()) {
    if (body.front() == ',') body.remove_prefix(1);
    if (body.empty() || body.front() != '(') throw fail();
    const auto comma = body.find(',');
    const auto rparen = body.find(')');
    if (comma == std::string_view::npos || rparen == std::string_view::npos || comma > rparen) throw fail();
    pts.push_back({parse_rational(body.substr(1, comma - 1)), parse_rational(body.substr(comma + 1, rparen - comma - 1))});
    body.remove_prefix(rparen + 1);
  }
  return PLMap(std::move(pts), parse_rational(std::string_view(compact).substr(close + 6)));
}

}  // namespace revop
