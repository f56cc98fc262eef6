#ifndef CHAINGEO_QUADRIC_HPP
#define CHAINGEO_QUADRIC_HPP

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chaingeo/blocking.hpp"
#include "chaingeo/chains.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/linalg.hpp"

namespace chaingeo {

/// A point of PG(3,q) or a plane (dual coordinates), scaled so that the
/// first nonzero coordinate is 1.
using coords4 = std::array<field::element, 4>;

inline coords4 normalize4(coords4 x, const field& k) {
  for (auto c : x)
    if (c != 0) {
      const auto s = k.inv(c);
      for (auto& y : x) y = k.mul(y, s);
      return x;
    }
  throw error(error_code::model_violation, "zero vector is not a projective point");
}

/// All normalized nonzero 4-tuples over k, in index order.
inline std::vector<coords4> pg3_points(const field& k) {
  std::vector<coords4> out;
  const unsigned q = k.order();
  for (unsigned n = 1; n < q * q * q * q; ++n) {
    coords4 x{};
    unsigned v = n;
    for (auto& c : x) {
      c = static_cast<field::element>(v % q);
      v /= q;
    }
    if (normalize4(x, k) == x) out.push_back(x);
  }
  return out;
}

/// x0 x1 - x2 x3 = 0.
inline bool on_quadric(const coords4& x, const field& k) {
  return k.mul(x[0], x[1]) == k.mul(x[2], x[3]);
}

/// A plane u0 x0 + ... + u3 x3 = 0 is tangent to the quadric iff u0 u1 - u2 u3 = 0.
inline bool tangent_by_criterion(const coords4& u, const field& k) { return on_quadric(u, k); }

inline field::element dot4(const coords4& u, const coords4& x, const field& k) {
  field::element s = 0;
  for (int i = 0; i < 4; ++i) s = k.add(s, k.mul(u[i], x[i]));
  return s;
}

/// Points of the line through two distinct points: a + s b (s in F_q) and b.
inline std::vector<coords4> line_points(const coords4& a, const coords4& b, const field& k) {
  std::vector<coords4> out{b};
  for (unsigned s = 0; s < k.order(); ++s) {
    coords4 x;
    for (int i = 0; i < 4; ++i) x[i] = k.add(a[i], k.mul(static_cast<field::element>(s), b[i]));
    out.push_back(normalize4(x, k));
  }
  return out;
}

/// The model of Sigma(F_q, F_q x F_q) on the hyperbolic quadric Q+(3,q):
/// psi(R(a, b)) = (a1 b2, a2 b1, a1 a2, b1 b2).
class quadric_model {
 public:
  explicit quadric_model(const geometry& g) : g_(g), k_(g.ring().base()) {
    const algebra& r = g.ring();
    if (r.kind() != algebra_kind::product || r.factors() != 2)
      throw error(error_code::wrong_ring, "the quadric model needs R = F_q x F_q");
    for (point_id p = 0; p < g.v(); ++p) {
      const coords4 x = psi(p);
      if (!image_.emplace(x, p).second) throw error(error_code::model_violation, "psi is not injective");
    }
  }

  const geometry& geo() const { return g_; }
  const field& base() const { return k_; }

  coords4 psi(point_id p) const {
    const algebra& r = g_.ring();
    const auto& pt = g_.line()[p];
    const auto a = r.coords(pt.a), b = r.coords(pt.b);
    return normalize4({k_.mul(a[0], b[1]), k_.mul(a[1], b[0]), k_.mul(a[0], a[1]), k_.mul(b[0], b[1])}, k_);
  }

  std::optional<point_id> psi_inverse(const coords4& x) const {
    auto it = image_.find(x);
    if (it == image_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<coords4> quadric_points() const {
    std::vector<coords4> out;
    for (const auto& x : pg3_points(k_))
      if (on_quadric(x, k_)) out.push_back(x);
    return out;
  }

  /// The plane spanned by the images of a chain's points. Throws NotCoplanar
  /// or TangentPlane if the image is not a conic section.
  coords4 chain_to_plane(const chain& c) const {
    fmatrix m(c.size(), 4);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const coords4 x = psi(c[i]);
      for (int j = 0; j < 4; ++j) m(i, j) = x[j];
    }
    const auto ker = kernel(m, k_);
    if (ker.size() != 1) throw error(error_code::not_coplanar, "chain image spans " + std::to_string(4 - ker.size()) + " dimensions, expected a plane");
    const coords4 u = normalize4({ker[0][0], ker[0][1], ker[0][2], ker[0][3]}, k_);
    if (tangent_by_criterion(u, k_)) throw error(error_code::tangent_plane, "chain image lies in a tangent plane");
    if (section(u) != c) throw error(error_code::model_violation, "plane section differs from the chain image");
    return u;
  }

  /// psi^-1 of the plane section, sorted point ids.
  std::vector<point_id> section(const coords4& u) const {
    std::vector<point_id> out;
    for (const auto& [x, p] : image_)
      if (dot4(u, x, k_) == 0) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool line_in_quadric(point_id p, point_id r) const {
    const auto pts = line_points(psi(p), psi(r), k_);
    return std::all_of(pts.begin(), pts.end(), [&](const coords4& x) { return on_quadric(x, k_); });
  }

  /// Lines contained in Q, as sorted point-id sets, split into the two
  /// rulings. Family 0 holds the first line found and the lines skew to it.
  std::array<std::vector<std::vector<point_id>>, 2> ruling_lines() const {
    std::set<std::vector<point_id>> lines;
    for (point_id p = 0; p < g_.v(); ++p)
      for (point_id r = p + 1; r < g_.v(); ++r) {
        if (!line_in_quadric(p, r)) continue;
        std::vector<point_id> ids;
        for (const auto& x : line_points(psi(p), psi(r), k_)) ids.push_back(*psi_inverse(x));
        std::sort(ids.begin(), ids.end());
        lines.insert(std::move(ids));
      }
    std::array<std::vector<std::vector<point_id>>, 2> fam;
    if (lines.empty()) return fam;
    const auto& first = *lines.begin();
    for (const auto& l : lines) {
      std::vector<point_id> common;
      std::set_intersection(l.begin(), l.end(), first.begin(), first.end(), std::back_inserter(common));
      fam[(l == first || common.empty()) ? 0 : 1].push_back(l);
    }
    return fam;
  }

  /// psi(p)^T * matrix for the displayed 4x4 matrix of (M,1), M = [[m1,m2],[m3,m4]].
  static std::array<coords4, 4> left_factor_matrix(const std::array<field::element, 4>& m) {
    return {{{m[0], 0, 0, m[1]}, {0, m[3], m[2], 0}, {0, m[1], m[0], 0}, {m[2], 0, 0, m[3]}}};
  }

  /// The companion matrix for (1,N), obtained by the same substitution.
  static std::array<coords4, 4> right_factor_matrix(const std::array<field::element, 4>& n) {
    return {{{n[3], 0, n[2], 0}, {0, n[0], 0, n[1]}, {n[1], 0, n[0], 0}, {0, n[2], 0, n[3]}}};
  }

  coords4 apply(const coords4& x, const std::array<coords4, 4>& mat) const {
    coords4 y{};
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) y[c] = k_.add(y[c], k_.mul(x[r], mat[r][c]));
    return normalize4(y, k_);
  }

  /// Image of point p under (M,1) (left = true) or (1,M), acting on rows.
  point_id act(point_id p, const std::array<field::element, 4>& m, bool left) const {
    const algebra& r = g_.ring();
    const auto& pt = g_.line()[p];
    const auto a = r.coords(pt.a), b = r.coords(pt.b);
    const unsigned i = left ? 0 : 1;
    std::array<field::element, 2> na{a[0], a[1]}, nb{b[0], b[1]};
    na[i] = k_.add(k_.mul(a[i], m[0]), k_.mul(b[i], m[2]));
    nb[i] = k_.add(k_.mul(a[i], m[1]), k_.mul(b[i], m[3]));
    return g_.line().id_of(r.from_coords(na), r.from_coords(nb));
  }

 private:
  const geometry& g_;
  const field& k_;
  std::map<coords4, point_id> image_;
};

/// One line of the correspondence table.
struct model_check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Every correspondence of the model for Sigma(F_q, F_q x F_q).
inline std::vector<model_check> check_quadric_model(const geometry& g, unsigned random_matrices = 20,
                                                    unsigned seed = 1) {
  const quadric_model m(g);
  const field& k = m.base();
  const unsigned q = k.order();
  std::vector<model_check> out;
  auto record = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };

  // psi is a bijection onto Q.
  {
    const auto qpts = m.quadric_points();
    bool onto = qpts.size() == g.v();
    bool on = true;
    for (point_id p = 0; p < g.v(); ++p) on = on && on_quadric(m.psi(p), k);
    for (const auto& x : qpts) onto = onto && m.psi_inverse(x).has_value();
    record("psi_bijective", on && onto,
           "|P(R)|=" + std::to_string(g.v()) + " |Q|=" + std::to_string(qpts.size()));
  }

  // Standard chain lies in x0 = x1.
  {
    const coords4 u = m.chain_to_plane(standard_chain(g.line()));
    const coords4 expected = normalize4({1, k.neg(1), 0, 0}, k);
    record("standard_chain_plane", u == expected, "");
  }

  // Chains <-> non-tangent plane sections; tangency criterion <-> degenerate section.
  {
    std::set<std::vector<point_id>> chain_set(g.chains().begin(), g.chains().end());
    std::size_t nontangent = 0, matched = 0, criterion_ok = 0, planes = 0, chain_planes_ok = 0;
    for (const auto& c : g.chains()) {
      try {
        m.chain_to_plane(c);
        ++chain_planes_ok;
      } catch (const error&) {
      }
    }
    for (const auto& u : pg3_points(k)) {
      ++planes;
      const auto sec = m.section(u);
      bool has_line = false;
      for (std::size_t i = 0; i < sec.size() && !has_line; ++i)
        for (std::size_t j = i + 1; j < sec.size() && !has_line; ++j) has_line = m.line_in_quadric(sec[i], sec[j]);
      const bool tangent = tangent_by_criterion(u, k);
      criterion_ok += tangent == has_line;
      if (!tangent) {
        ++nontangent;
        matched += chain_set.count(sec);
      }
    }
    record("chains_are_conic_sections", chain_planes_ok == g.chains().size(),
           std::to_string(chain_planes_ok) + "/" + std::to_string(g.chains().size()));
    record("conic_sections_are_chains", matched == nontangent && nontangent == g.chains().size(),
           std::to_string(matched) + "/" + std::to_string(nontangent) + " non-tangent planes");
    record("tangency_criterion", criterion_ok == planes,
           std::to_string(criterion_ok) + "/" + std::to_string(planes) + " planes");
  }

  // distant <=> secant.
  {
    std::size_t ok = 0, pairs = 0;
    for (point_id p = 0; p < g.v(); ++p)
      for (point_id r = p + 1; r < g.v(); ++r) {
        ++pairs;
        ok += g.line().distant(p, r) == !m.line_in_quadric(p, r);
      }
    record("distant_iff_secant", ok == pairs, std::to_string(ok) + "/" + std::to_string(pairs) + " pairs");
  }

  // Non-distant neighbours of R(1,0) form the section x3 = 0.
  {
    const point_id inf = g.line().infinity();
    std::vector<point_id> nd;
    for (point_id p = 0; p < g.v(); ++p)
      if (!g.line().distant(inf, p)) nd.push_back(p);
    record("tangent_section_at_infinity", nd == m.section({0, 0, 0, 1}), std::to_string(nd.size()) + " points");
  }

  // Rulings.
  {
    const auto fam = m.ruling_lines();
    const auto inc = incidence::from_geometry(g);
    bool ok = fam[0].size() == q + 1 && fam[1].size() == q + 1;
    for (const auto& f : fam)
      for (const auto& l : f) {
        ok = ok && l.size() == q + 1 && hits_all(inc, l);
        for (std::size_t i = 0; i < l.size(); ++i)
          for (std::size_t j = i + 1; j < l.size(); ++j) ok = ok && !g.line().distant(l[i], l[j]);
        for (const auto& c : g.chains()) {
          std::vector<point_id> common;
          std::set_intersection(l.begin(), l.end(), c.begin(), c.end(), std::back_inserter(common));
          ok = ok && common.size() == 1;
        }
      }
    record("rulings_block", ok,
           std::to_string(fam[0].size()) + "+" + std::to_string(fam[1].size()) + " lines");
  }

  // Displayed 4x4 matrix reproduces the (M,1) action; the analogous matrix for (1,N).
  {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<unsigned> pick(0, q - 1);
    unsigned ok_left = 0, ok_right = 0, drawn = 0;
    while (drawn < random_matrices) {
      std::array<field::element, 4> mm;
      for (auto& c : mm) c = static_cast<field::element>(pick(rng));
      if (k.mul(mm[0], mm[3]) == k.mul(mm[1], mm[2])) continue;
      ++drawn;
      bool left = true, right = true;
      const auto lm = quadric_model::left_factor_matrix(mm), rm = quadric_model::right_factor_matrix(mm);
      for (point_id p = 0; p < g.v(); ++p) {
        left = left && m.psi(m.act(p, mm, true)) == m.apply(m.psi(p), lm);
        right = right && m.psi(m.act(p, mm, false)) == m.apply(m.psi(p), rm);
      }
      ok_left += left;
      ok_right += right;
    }
    record("projectivity_M1", ok_left == random_matrices,
           std::to_string(ok_left) + "/" + std::to_string(random_matrices) + " matrices");
    record("projectivity_1N", ok_right == random_matrices,
           std::to_string(ok_right) + "/" + std::to_string(random_matrices) + " matrices");
  }

  // Ruling lines attain the elf bound.
  {
    const auto elf = geometry_bound_elf(g);
    record("ruling_size_is_elf_bound", elf == q + 1, "elf=" + elf.str());
  }
  return out;
}

}  // namespace chaingeo

#endif  // CHAINGEO_QUADRIC_HPP
