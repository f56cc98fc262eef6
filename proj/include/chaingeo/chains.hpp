#ifndef CHAINGEO_CHAINS_HPP
#define CHAINGEO_CHAINS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chaingeo/algebra.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/linalg.hpp"
#include "chaingeo/projline.hpp"

namespace chaingeo {

/// A chain: the sorted ids of its q+1 points.
using chain = std::vector<point_id>;

/// The chain P(K) = {R(1,0)} u {R(x, 1) : x in F_q}.
inline chain standard_chain(const projective_line& line) {
  const algebra& r = line.ring();
  chain c{line.infinity()};
  for (unsigned x = 0; x < r.q(); ++x)
    c.push_back(line.id_of(r.scalar_elem(static_cast<algebra::scalar>(x)), r.one()));
  std::sort(c.begin(), c.end());
  return c;
}

/// The distinct conjugate subfields w^-1 K w, w in R*, each as the list of
/// its elements (sorted). One entry when K is central.
inline std::vector<std::vector<algebra::element>> conjugate_subfields(const algebra& r) {
  std::set<std::vector<algebra::element>> seen;
  for (auto w : r.units()) {
    const auto winv = r.inv(w);
    std::vector<algebra::element> conj;
    for (unsigned x = 0; x < r.q(); ++x)
      conj.push_back(r.mul(r.mul(winv, r.scalar_elem(static_cast<algebra::scalar>(x))), w));
    std::sort(conj.begin(), conj.end());
    seen.insert(std::move(conj));
  }
  return {seen.begin(), seen.end()};
}

/// All chains through three mutually distant points.
///
/// With g = [[u a1, u b1], [v a2, v b2]] where u (a1,b1) + v (a2,b2) = (a3,b3),
/// g maps R(1,0), R(0,1), R(1,1) to the given triple. The stabilizer of the
/// standard triple is the unit scalars, so the chains through the triple are
/// the images P(w^-1 K w) g.
inline std::vector<chain> chains_through_triple(const projective_line& line, point_id p1, point_id p2,
                                                point_id p3,
                                                const std::vector<std::vector<algebra::element>>& subfields) {
  if (p1 == p2 || p1 == p3 || p2 == p3 || !line.distant(p1, p2) || !line.distant(p1, p3) ||
      !line.distant(p2, p3))
    throw error(error_code::not_mutually_distant,
                std::to_string(p1) + "," + std::to_string(p2) + "," + std::to_string(p3));
  const algebra& r = line.ring();
  const unsigned d = r.dim();
  const auto [a1, b1] = line[p1];
  const auto [a2, b2] = line[p2];
  const auto [a3, b3] = line[p3];

  // Unknowns: coords(u), coords(v). Right multiplication y |-> y*c is linear.
  fmatrix sys(2 * d, 2 * d);
  auto place = [&](unsigned row0, unsigned col0, algebra::element c) {
    const fmatrix m = r.right_regular(c);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) sys(row0 + i, col0 + j) = m(i, j);
  };
  place(0, 0, a1);
  place(0, d, a2);
  place(d, 0, b1);
  place(d, d, b2);
  std::vector<algebra::scalar> rhs(2 * d);
  std::copy(r.coords(a3).begin(), r.coords(a3).end(), rhs.begin());
  std::copy(r.coords(b3).begin(), r.coords(b3).end(), rhs.begin() + d);
  const auto sol = solve(sys, rhs, r.base());
  if (!sol) throw error(error_code::solve_failed, "no u, v with u p1 + v p2 = p3");
  const auto u = r.from_coords(std::span(sol->data(), d));
  const auto v = r.from_coords(std::span(sol->data() + d, d));
  if (!r.is_unit(u) || !r.is_unit(v)) throw error(error_code::solve_failed, "u or v is not a unit");

  const auto g11 = r.mul(u, a1), g12 = r.mul(u, b1), g21 = r.mul(v, a2), g22 = r.mul(v, b2);
  std::set<chain> out;
  for (const auto& sub : subfields) {
    chain c{line.id_of(g11, g12)};
    for (auto k : sub) c.push_back(line.id_of(r.add(r.mul(k, g11), g21), r.add(r.mul(k, g12), g22)));
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw error(error_code::model_violation, "image of P(K) has repeated points");
    out.insert(std::move(c));
  }
  return {out.begin(), out.end()};
}

inline std::vector<chain> chains_through_triple(const projective_line& line, point_id p1, point_id p2,
                                                point_id p3) {
  return chains_through_triple(line, p1, p2, p3, conjugate_subfields(line.ring()));
}

/// Every chain, found as the union of chains through all mutually distant
/// triples, sorted lexicographically. `jobs` threads split the first point.
inline std::vector<chain> enumerate_chains(const projective_line& line, unsigned jobs = 1) {
  const auto subfields = conjugate_subfields(line.ring());
  const point_id v = static_cast<point_id>(line.size());
  jobs = std::max(1u, jobs);
  std::vector<std::set<chain>> found(jobs);
  std::atomic<point_id> next{0};
  auto work = [&](unsigned w) {
    for (point_id p1; (p1 = next.fetch_add(1)) < v;) {
      for (point_id p2 = p1 + 1; p2 < v; ++p2) {
        if (!line.distant(p1, p2)) continue;
        for (point_id p3 = p2 + 1; p3 < v; ++p3) {
          if (!line.distant(p1, p3) || !line.distant(p2, p3)) continue;
          // A chain is first met at its three least points.
          for (auto& c : chains_through_triple(line, p1, p2, p3, subfields))
            if (c[0] == p1 && c[1] == p2 && c[2] == p3) found[w].insert(std::move(c));
        }
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::set<chain> all;
  for (auto& s : found) all.merge(s);
  return {all.begin(), all.end()};
}

struct lambda_values {
  std::uint64_t l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  friend bool operator==(const lambda_values&, const lambda_values&) = default;
};

/// lambda_i from the closed formulas next to the values counted on the chain list.
struct lambda_table {
  lambda_values formula;
  lambda_values empirical;
  bool formula_integral = true;
  /// M = #{(p, C)}: p distant from R(1,0) and R(0,1), C a chain through all three.
  std::uint64_t pair_count = 0;
  bool agrees() const {
    return formula_integral && formula == empirical && pair_count == formula.l3 * unit_count &&
           pair_count == (q - 1) * formula.l2;
  }
  std::uint64_t unit_count = 0;
  std::uint64_t q = 0;
};

/// The chain geometry Sigma(F_q, R): points, distant relation, chains.
class geometry {
 public:
  explicit geometry(algebra r, unsigned jobs = 1, bool verify_now = true)
      : ring_(std::make_shared<const algebra>(std::move(r))), line_(ring_) {
    chains_ = enumerate_chains(line_, jobs);
    const std::size_t k = ring_->q() + 1;
    for (const auto& c : chains_) {
      if (c.size() != k) throw error(error_code::model_violation, "chain with wrong size");
      for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
          if (!line_.distant(c[i], c[j]))
            throw error(error_code::model_violation, "chain with non-distant points");
    }
    compute_lambdas();
    if (verify_now) verify();
  }

  const algebra& ring() const { return *ring_; }
  const projective_line& line() const { return line_; }
  const std::vector<chain>& chains() const { return chains_; }
  std::size_t v() const { return line_.size(); }
  const lambda_table& lambdas() const { return lambdas_; }
  std::uint64_t q() const { return ring_->q(); }

  /// Chain ids containing point p.
  const std::vector<std::size_t>& chains_through(point_id p) const { return through_[p]; }

  /// Throws ChainCountMismatch / LambdaMismatch unless formulas and counts agree.
  void verify() const {
    const auto& t = lambdas_;
    if (!t.formula_integral)
      throw error(error_code::lambda_mismatch, "formula values are not integers");
    if (chains_.size() != t.formula.l0)
      throw error(error_code::chain_count_mismatch,
                  std::to_string(chains_.size()) + " chains, formula lambda_0 = " + std::to_string(t.formula.l0));
    if (!t.agrees())
      throw error(error_code::lambda_mismatch,
                  "formula (" + describe(t.formula) + ") vs counted (" + describe(t.empirical) +
                      "), M = " + std::to_string(t.pair_count));
  }

  static std::string describe(const lambda_values& l) {
    return std::to_string(l.l0) + "," + std::to_string(l.l1) + "," + std::to_string(l.l2) + "," +
           std::to_string(l.l3);
  }

 private:
  void compute_lambdas() {
    const algebra& r = *ring_;
    through_.assign(v(), {});
    for (std::size_t c = 0; c < chains_.size(); ++c)
      for (auto p : chains_[c]) through_[p].push_back(c);

    auto& t = lambdas_;
    const std::uint64_t q = r.q(), rstar = r.unit_count(), n = r.normalizer_order();
    std::uint64_t qd1 = 1;
    for (unsigned i = 1; i < r.dim(); ++i) qd1 *= q;
    t.q = q;
    t.unit_count = rstar;
    auto exact = [&](std::uint64_t num, std::uint64_t den) {
      if (den == 0 || num % den != 0) t.formula_integral = false;
      return den == 0 ? 0 : num / den;
    };
    t.formula.l3 = exact(rstar, n);
    t.formula.l2 = exact(rstar * t.formula.l3, q - 1);
    t.formula.l1 = exact(qd1 * rstar * t.formula.l3, q - 1);
    t.formula.l0 = exact(v() * qd1 * rstar * t.formula.l3, q * q - 1);

    const point_id inf = line_.infinity(), zero = line_.origin(), one = line_.unit_point();
    auto count_with = [&](std::initializer_list<point_id> pts) {
      std::uint64_t k = 0;
      for (const auto& c : chains_)
        if (std::all_of(pts.begin(), pts.end(),
                        [&](point_id p) { return std::binary_search(c.begin(), c.end(), p); }))
          ++k;
      return k;
    };
    t.empirical.l0 = chains_.size();
    t.empirical.l1 = count_with({inf});
    t.empirical.l2 = count_with({inf, zero});
    t.empirical.l3 = count_with({inf, zero, one});
    t.pair_count = 0;
    for (point_id p = 0; p < v(); ++p)
      if (line_.distant(p, inf) && line_.distant(p, zero)) t.pair_count += count_with({inf, zero, p});
  }

  std::shared_ptr<const algebra> ring_;
  projective_line line_;
  std::vector<chain> chains_;
  std::vector<std::vector<std::size_t>> through_;
  lambda_table lambdas_;
};

/// Outcome of the divisible-design check on a local geometry.
struct design_report {
  std::uint64_t class_size = 0;  ///< q^delta
  std::size_t class_count = 0;
  std::size_t v = 0;
  std::size_t blocks = 0;
  std::size_t block_size = 0;
  std::uint64_t lambda3 = 0;
  std::uint64_t triples_checked = 0;
};

/// Confirms the 3-(q^delta, q+1, lambda_3) divisible design structure with
/// q^d + q^delta points. Throws DesignViolation with a witness.
inline design_report verify_divisible_design(const geometry& g) {
  const algebra& r = g.ring();
  if (!r.is_local()) throw error(error_code::not_local, "divisible design check needs a local ring");
  const auto& line = g.line();
  const auto classes = line.parallel_classes();
  design_report rep;
  rep.class_size = classes.front().size();
  rep.class_count = classes.size();
  rep.v = g.v();
  rep.blocks = g.chains().size();
  rep.block_size = g.q() + 1;
  rep.lambda3 = g.lambdas().formula.l3;

  std::uint64_t qd = 1;
  for (unsigned i = 0; i < r.dim(); ++i) qd *= r.q();
  if (rep.v != qd + rep.class_size)
    throw error(error_code::design_violation, "v != q^d + q^delta");

  std::vector<std::size_t> class_of(g.v());
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (auto p : classes[k]) class_of[p] = k;
  for (std::size_t c = 0; c < g.chains().size(); ++c) {
    std::set<std::size_t> met;
    for (auto p : g.chains()[c])
      if (!met.insert(class_of[p]).second)
        throw error(error_code::design_violation, "chain " + std::to_string(c) + " meets a class twice");
  }

  // Triple counts: accumulate per chain, then compare against lambda_3.
  const std::size_t v = g.v();
  std::unordered_map<std::uint64_t, std::uint32_t> count;
  auto key = [v](std::uint64_t a, std::uint64_t b, std::uint64_t c) { return (a * v + b) * v + c; };
  for (const auto& c : g.chains())
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        for (std::size_t k = j + 1; k < c.size(); ++k) ++count[key(c[i], c[j], c[k])];
  for (point_id a = 0; a < v; ++a)
    for (point_id b = a + 1; b < v; ++b) {
      if (class_of[a] == class_of[b]) continue;
      for (point_id c = b + 1; c < v; ++c) {
        if (class_of[c] == class_of[a] || class_of[c] == class_of[b]) continue;
        ++rep.triples_checked;
        const auto it = count.find(key(a, b, c));
        const std::uint32_t n = it == count.end() ? 0 : it->second;
        if (n != rep.lambda3)
          throw error(error_code::design_violation,
                      "triple " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                          " lies on " + std::to_string(n) + " chains");
      }
    }
  return rep;
}

}  // namespace chaingeo

#endif  // CHAINGEO_CHAINS_HPP
