#ifndef CHAINGEO_PROJLINE_HPP
#define CHAINGEO_PROJLINE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chaingeo/algebra.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/linalg.hpp"

namespace chaingeo {

using point_id = std::uint32_t;

/// Canonical representative (a, b) of the point R(a, b): the least pair
/// (ua, ub), u in R*, ordered by element index of a, then of b.
struct point {
  algebra::element a = 0;
  algebra::element b = 0;

  friend auto operator<=>(const point&, const point&) = default;
};

/// True iff [[a, b], [c, d]] is in GL_2(R): the F_q-linear map
/// (x, y) |-> (ax + by, cx + dy) on R^2 has full rank 2d.
inline bool invertible_2x2(const algebra& r, algebra::element a, algebra::element b,
                           algebra::element c, algebra::element d) {
  const unsigned n = r.dim();
  fmatrix m(2 * n, 2 * n);
  for (unsigned j = 0; j < n; ++j) {
    const auto ej = r.basis(j);
    const auto col_a = r.coords(r.mul(a, ej)), col_c = r.coords(r.mul(c, ej));
    const auto col_b = r.coords(r.mul(b, ej)), col_d = r.coords(r.mul(d, ej));
    for (unsigned i = 0; i < n; ++i) {
      m(i, j) = col_a[i];
      m(n + i, j) = col_c[i];
      m(i, n + j) = col_b[i];
      m(n + i, n + j) = col_d[i];
    }
  }
  return rank(std::move(m), r.base()) == 2 * n;
}

/// The projective line P(R) with its distant relation.
class projective_line {
 public:
  explicit projective_line(std::shared_ptr<const algebra> ring) : ring_(std::move(ring)) {
    enumerate();
    cross_check_count();
    build_distant();
  }

  const algebra& ring() const { return *ring_; }
  std::shared_ptr<const algebra> ring_ptr() const { return ring_; }

  std::size_t size() const { return points_.size(); }
  const std::vector<point>& points() const { return points_; }
  const point& operator[](point_id id) const { return points_[id]; }

  point canonical(algebra::element a, algebra::element b) const {
    point best{a, b};
    bool first = true;
    for (auto u : ring_->units()) {
      point cand{ring_->mul(u, a), ring_->mul(u, b)};
      if (first || cand < best) best = cand;
      first = false;
    }
    return best;
  }

  std::optional<point_id> find(algebra::element a, algebra::element b) const {
    const point c = canonical(a, b);
    auto it = index_.find(key(c));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  point_id id_of(algebra::element a, algebra::element b) const {
    if (auto id = find(a, b)) return *id;
    throw error(error_code::unknown_point,
                "(" + std::to_string(a) + "," + std::to_string(b) + ") is not a point of P(R)");
  }

  bool distant(point_id p, point_id r) const { return distant_[std::size_t(p) * size() + r]; }

  std::vector<point_id> distant_neighbors(point_id p) const {
    std::vector<point_id> out;
    for (point_id r = 0; r < size(); ++r)
      if (distant(p, r)) out.push_back(r);
    return out;
  }

  point_id infinity() const { return id_of(ring_->one(), ring_->zero()); }  // R(1,0)
  point_id origin() const { return id_of(ring_->zero(), ring_->one()); }    // R(0,1)
  point_id unit_point() const { return id_of(ring_->one(), ring_->one()); } // R(1,1)

  /// Equivalence classes of "not distant" (each point parallel to itself),
  /// sorted by least member. Local rings only.
  std::vector<std::vector<point_id>> parallel_classes() const {
    const algebra& r = *ring_;
    if (!r.is_local()) throw error(error_code::not_local, "parallelism is an equivalence only for local rings");
    std::vector<std::vector<point_id>> classes;
    std::vector<bool> seen(size(), false);
    for (point_id p = 0; p < size(); ++p) {
      if (seen[p]) continue;
      std::vector<point_id> cls;
      for (point_id s = 0; s < size(); ++s)
        if (!distant(p, s)) cls.push_back(s);
      for (point_id s : cls) {
        if (seen[s]) throw error(error_code::design_violation, "parallel classes overlap");
        seen[s] = true;
        if (size() - distant_neighbors(s).size() != cls.size())
          throw error(error_code::design_violation, "parallelism is not transitive");
        for (point_id t : cls)
          if (distant(s, t)) throw error(error_code::design_violation, "parallelism is not transitive");
      }
      classes.push_back(std::move(cls));
    }
    std::uint64_t class_size = 1;
    for (unsigned i = 0; i < *r.delta(); ++i) class_size *= r.q();
    for (const auto& cls : classes)
      if (cls.size() != class_size)
        throw error(error_code::design_violation, "parallel class of size " + std::to_string(cls.size()) +
                                                      ", expected q^delta = " + std::to_string(class_size));
    return classes;
  }

 private:
  static std::uint64_t key(const point& p) { return (std::uint64_t(p.a) << 32) | p.b; }

  // Orbit of R(1,0) under right multiplication by elementary, swap and
  // diagonal unit matrices.
  void enumerate() {
    const algebra& r = *ring_;
    std::vector<algebra::element> shears;
    for (unsigned i = 0; i < r.dim(); ++i)
      for (unsigned c = 1; c < r.q(); ++c)
        shears.push_back(r.smul(static_cast<algebra::scalar>(c), r.basis(i)));

    std::unordered_map<std::uint64_t, bool> seen;
    std::vector<point> found;
    std::deque<point> queue;
    auto visit = [&](algebra::element a, algebra::element b) {
      const point c = canonical(a, b);
      if (seen.emplace(key(c), true).second) {
        found.push_back(c);
        queue.push_back(c);
      }
    };
    visit(r.one(), r.zero());
    while (!queue.empty()) {
      const point p = queue.front();
      queue.pop_front();
      for (auto x : shears) {
        visit(p.a, r.add(r.mul(p.a, x), p.b));
        visit(r.add(p.a, r.mul(p.b, x)), p.b);
      }
      visit(p.b, p.a);
      for (auto u : r.units()) visit(r.mul(p.a, u), p.b);
    }
    std::sort(found.begin(), found.end());
    points_ = std::move(found);
    for (point_id i = 0; i < points_.size(); ++i) index_.emplace(key(points_[i]), i);
  }

  void cross_check_count() const {
    const algebra& r = *ring_;
    const std::uint64_t v = points_.size();
    std::uint64_t qd = 1;
    for (unsigned i = 0; i < r.dim(); ++i) qd *= r.q();
    auto mismatch = [&](const std::string& what) {
      throw error(error_code::orbit_count_mismatch, "v = " + std::to_string(v) + " but " + what);
    };
    if (v + r.unit_count() < 2 * qd) mismatch("v >= 2q^d - r* fails");
    if (r.is_local()) {
      std::uint64_t qdelta = 1;
      for (unsigned i = 0; i < *r.delta(); ++i) qdelta *= r.q();
      if (v != qd + qdelta) mismatch("local ring requires v = q^d + q^delta = " + std::to_string(qd + qdelta));
    }
    if (r.kind() == algebra_kind::product) {
      std::uint64_t expected = 1;
      for (unsigned i = 0; i < r.factors(); ++i) expected *= r.q() + 1;
      if (v != expected) mismatch("K^n requires v = (q+1)^n = " + std::to_string(expected));
    }
  }

  void build_distant() {
    const algebra& r = *ring_;
    const std::size_t v = size();
    distant_.assign(v * v, false);
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = i + 1; j < v; ++j) {
        const bool dist = invertible_2x2(r, points_[i].a, points_[i].b, points_[j].a, points_[j].b);
        distant_[i * v + j] = distant_[j * v + i] = dist;
      }
    std::uint64_t qd = 1;
    for (unsigned i = 0; i < r.dim(); ++i) qd *= r.q();
    for (std::size_t i = 0; i < v; ++i) {
      std::uint64_t deg = 0;
      for (std::size_t j = 0; j < v; ++j) deg += distant_[i * v + j];
      if (deg != qd)
        throw error(error_code::orbit_count_mismatch,
                    "point " + std::to_string(i) + " is distant from " + std::to_string(deg) +
                        " points, expected q^d = " + std::to_string(qd));
    }
  }

  std::shared_ptr<const algebra> ring_;
  std::vector<point> points_;
  std::unordered_map<std::uint64_t, point_id> index_;
  std::vector<bool> distant_;
};

/// Slow oracle: all pairs (a, b) that complete to an invertible 2x2 matrix,
/// reduced modulo left unit multiples. Independent of the orbit construction.
inline std::vector<point> admissible_points_by_filter(const projective_line& line) {
  const algebra& r = line.ring();
  std::vector<point> out;
  for (algebra::element a = 0; a < r.order(); ++a)
    for (algebra::element b = 0; b < r.order(); ++b) {
      bool admissible = false;
      for (algebra::element c = 0; c < r.order() && !admissible; ++c)
        for (algebra::element d = 0; d < r.order() && !admissible; ++d)
          admissible = invertible_2x2(r, a, b, c, d);
      if (admissible) out.push_back(line.canonical(a, b));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Element as a string of base-q digits, coordinate 0 first.
inline std::string format_element(const algebra& r, algebra::element a) {
  std::string s;
  for (auto c : r.coords(a)) {
    if (!s.empty() && r.q() > 36) s += '.';
    s += element_token(c, r.q());
  }
  return s;
}

}  // namespace chaingeo

#endif  // CHAINGEO_PROJLINE_HPP
