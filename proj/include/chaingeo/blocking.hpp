#ifndef CHAINGEO_BLOCKING_HPP
#define CHAINGEO_BLOCKING_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chaingeo/chains.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/incidence.hpp"
#include "chaingeo/search.hpp"

namespace chaingeo {

using bigint = boost::multiprecision::cpp_int;

inline bigint ipow(const bigint& base, unsigned n) {
  bigint r = 1;
  for (unsigned i = 0; i < n; ++i) r *= base;
  return r;
}

/// theta_n = (q^{n+1} - 1)/(q - 1) = 1 + q + ... + q^n; theta_{-1} = 0.
inline bigint theta(int n, const bigint& q) {
  bigint s = 0;
  for (int i = 0; i <= n; ++i) s += ipow(q, static_cast<unsigned>(i));
  return s;
}

inline bigint ceil_div(const bigint& a, const bigint& b) {
  bigint quot = a / b;
  if (quot * b < a) ++quot;
  return quot;
}

/// Glynn's weight P(i) = (i-1)(i-3)(i-4), nonnegative on positive integers.
inline bigint glynn_weight(const bigint& i) { return (i - 1) * (i - 3) * (i - 4); }

/// Upper bound for (1/lambda_3) * sum n_i P(i) over a blocking set of size x
/// in a local chain geometry with parameters (q, d, delta):
///
///   x(x-1)(x-2) - 5 x (x - q^delta) theta_{d-delta-1} q^delta
///     + 12 x q^{d+delta-1} theta_{d-delta-1}
///     - 12 (1 + q^2 + ... + q^{2(d-delta-1)}) q^{d+2delta-1}
///
/// A blocking set of size x can only exist where this is >= 0.
class glynn_polynomial {
 public:
  glynn_polynomial(unsigned q, unsigned d, unsigned delta) : q_(q), d_(d), delta_(delta) {
    if (q < 2 || d < 1 || delta + 1 > d)
      throw error(error_code::bad_parameters, "need q >= 2, d >= 1, 0 <= delta <= d-1");
    const bigint Q = q;
    const bigint th = theta(static_cast<int>(d - delta) - 1, Q);
    qdelta_ = ipow(Q, delta);
    c2_ = 5 * th * qdelta_;
    c1_ = 12 * ipow(Q, d + delta - 1) * th;
    bigint squares = 0;
    for (unsigned j = 0; j < d - delta; ++j) squares += ipow(Q, 2 * j);
    c0_ = 12 * squares * ipow(Q, d + 2 * delta - 1);
  }

  bigint operator()(const bigint& x) const {
    return x * (x - 1) * (x - 2) - c2_ * x * (x - qdelta_) + c1_ * x - c0_;
  }

  unsigned q() const { return q_; }
  unsigned d() const { return d_; }
  unsigned delta() const { return delta_; }

 private:
  unsigned q_, d_, delta_;
  bigint qdelta_, c2_, c1_, c0_;
};

/// ceil((2q^d - r*)/(q+1)).
inline bigint bound_elf(unsigned q, unsigned d, const bigint& unit_count) {
  return ceil_div(2 * ipow(bigint(q), d) - unit_count, bigint(q) + 1);
}

/// Least x >= ceil((q^d + q^delta)/(q+1)) with glynn_polynomial(x) >= 0.
inline bigint glynn_bound(unsigned q, unsigned d, unsigned delta) {
  const glynn_polynomial poly(q, d, delta);
  const bigint v = ipow(bigint(q), d) + ipow(bigint(q), delta);
  if (v > bigint(100'000'000)) throw error(error_code::bad_parameters, "q^d too large for an exact scan");
  for (bigint x = ceil_div(v, bigint(q) + 1); x <= v; ++x)
    if (poly(x) >= 0) return x;
  throw error(error_code::polynomial_mismatch, "no admissible size up to v; the full point set must qualify");
}

/// P_bound(2q^2 - q + t) for (d, delta) = (3, 0), checked against the
/// expanded polynomial in q and t.
inline bigint glynn_polynomial_check_3d(unsigned q, long long t) {
  const glynn_polynomial poly(q, 3, 0);
  const bigint Q = q, T = t;
  const bigint direct = poly(2 * Q * Q - Q + T);
  const bigint expanded = (-1 + 4 * T) * ipow(Q, 4) + (19 - 10 * T) * ipow(Q, 3) +
                          (-11 - 2 * T + T * T) * Q * Q + (-7 + 21 * T - 8 * T * T) * Q +
                          (7 * T - 8 * T * T + T * T * T);
  if (direct != expanded)
    throw error(error_code::polynomial_mismatch, "q=" + std::to_string(q) + " t=" + std::to_string(t) + ": " +
                                                     direct.str() + " != " + expanded.str());
  return direct;
}

/// Published lower bounds for Moebius geometries of order q.
struct moebius_bounds {
  bigint plane;  ///< d = 2: 2q-1, and 2q for q >= 4
  bigint solid;  ///< d = 3: 2q^2-q-2, +1 at q >= 4, +1 at q >= 7, +1 at q >= 19
};

inline moebius_bounds moebius_bound_table(unsigned q) {
  const bigint Q = q;
  moebius_bounds b;
  b.plane = 2 * Q - (q >= 4 ? 0 : 1);
  b.solid = 2 * Q * Q - Q - 2 + (q >= 4) + (q >= 7) + (q >= 19);
  return b;
}

/// For each offset in {-1, 0, 1}: the least q0 in [2, q_max] such that
/// glynn_bound(q, 3, 0) >= 2q^2 - q + offset for every q in [q0, q_max].
struct crossover {
  int offset;
  unsigned published_threshold;
  unsigned computed;
};

inline std::vector<crossover> glynn_crossovers(unsigned q_max) {
  std::vector<crossover> out;
  const std::pair<int, unsigned> rows[] = {{-1, 4}, {0, 7}, {1, 19}};
  std::vector<bigint> bound(q_max + 1);
  for (unsigned q = 2; q <= q_max; ++q) bound[q] = glynn_bound(q, 3, 0);
  for (auto [offset, published] : rows) {
    unsigned q0 = q_max + 1;
    for (unsigned q = q_max; q >= 2; --q) {
      const bigint target = 2 * bigint(q) * q - q + offset;
      if (bound[q] < target) break;
      q0 = q;
    }
    out.push_back({offset, published, q0});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

struct intersection_distribution {
  /// n[i] = number of blocks meeting the set in exactly i points.
  std::vector<std::uint64_t> n;
  std::size_t x = 0;

  bigint moment(unsigned order) const {
    bigint s = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      bigint f = 1;
      for (unsigned j = 0; j < order; ++j) f *= bigint(i) - j;
      s += f * n[i];
    }
    return s;
  }
};

/// One checked counting relation: lhs (relation) rhs.
struct counting_check {
  std::string name;
  std::string relation;  ///< "==", ">=", "<="
  bigint lhs;
  bigint rhs;
  bool holds = false;
};

struct blocking_report {
  std::vector<point_id> set;
  bool is_blocking = false;
  std::optional<std::size_t> first_missed_chain;
  intersection_distribution distribution;
  std::vector<counting_check> checks;
  bigint bound_trivial = 0;
  bigint bound_elf = 0;
  std::optional<bigint> bound_glynn;

  bool checks_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
  }
};

inline std::vector<point_id> normalize_set(std::size_t v, std::vector<point_id> set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (!set.empty() && set.back() >= v)
    throw error(error_code::unknown_point, "point id " + std::to_string(set.back()) + " >= v = " + std::to_string(v));
  return set;
}

/// Distribution and first missed block for any incidence structure.
inline blocking_report check_blocking(const incidence& s, std::vector<point_id> set) {
  blocking_report rep;
  rep.set = normalize_set(s.v, std::move(set));
  std::vector<bool> in(s.v, false);
  for (auto p : rep.set) in[p] = true;
  rep.distribution.x = rep.set.size();
  rep.distribution.n.assign(s.block_size + 1, 0);
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    std::size_t hits = 0;
    for (auto p : s.blocks[b]) hits += in[p];
    ++rep.distribution.n[hits];
    if (hits == 0 && !rep.first_missed_chain) rep.first_missed_chain = b;
  }
  rep.is_blocking = rep.distribution.n[0] == 0;
  return rep;
}

inline bigint bound_trivial(const geometry& g) {
  const auto& l = g.lambdas().formula;
  return ceil_div(bigint(l.l0), bigint(l.l1));
}

inline bigint geometry_bound_elf(const geometry& g) {
  return bound_elf(g.ring().base().order(), g.ring().dim(), bigint(g.ring().unit_count()));
}

inline std::optional<bigint> geometry_bound_glynn(const geometry& g) {
  if (!g.ring().is_local()) return std::nullopt;
  return glynn_bound(g.ring().q(), g.ring().dim(), *g.ring().delta());
}

/// Full report for a point set of a chain geometry, including the double
/// counts over (point, chain), (pair, chain), (triple, chain):
///   sum n_i = lambda_0, sum i n_i = x lambda_1,
///   sum i(i-1) n_i >= x(x - q^delta) lambda_2   (local rings),
///   sum i(i-1)(i-2) n_i <= x(x-1)(x-2) lambda_3,
/// and for blocking sets in local rings 0 <= sum n_i P(i) <= lambda_3 P_bound(x).
inline blocking_report is_blocking(const geometry& g, std::vector<point_id> set) {
  auto rep = check_blocking(incidence::from_geometry(g), std::move(set));
  const auto& lam = g.lambdas().formula;
  const auto& dist = rep.distribution;
  const bigint x = dist.x;
  const algebra& r = g.ring();

  rep.checks.push_back({"sum n_i = lambda_0", "==", dist.moment(0), bigint(lam.l0), false});
  rep.checks.push_back({"sum i n_i = x lambda_1", "==", dist.moment(1), x * lam.l1, false});
  if (r.is_local()) {
    const bigint qdelta = ipow(bigint(r.q()), *r.delta());
    rep.checks.push_back({"sum i(i-1) n_i >= x(x-q^delta) lambda_2", ">=", dist.moment(2),
                          x * (x - qdelta) * lam.l2, false});
  }
  rep.checks.push_back({"sum i(i-1)(i-2) n_i <= x(x-1)(x-2) lambda_3", "<=", dist.moment(3),
                        x * (x - 1) * (x - 2) * lam.l3, false});
  if (r.is_local() && rep.is_blocking) {
    bigint weighted = 0;
    for (std::size_t i = 0; i < dist.n.size(); ++i) weighted += glynn_weight(bigint(i)) * dist.n[i];
    const glynn_polynomial poly(r.q(), r.dim(), *r.delta());
    rep.checks.push_back({"sum n_i P(i) >= 0", ">=", weighted, bigint(0), false});
    rep.checks.push_back({"sum n_i P(i) <= lambda_3 P_bound(x)", "<=", weighted, poly(x) * lam.l3, false});
  }
  for (auto& c : rep.checks)
    c.holds = c.relation == "==" ? c.lhs == c.rhs : (c.relation == ">=" ? c.lhs >= c.rhs : c.lhs <= c.rhs);

  rep.bound_trivial = bound_trivial(g);
  rep.bound_elf = geometry_bound_elf(g);
  rep.bound_glynn = geometry_bound_glynn(g);
  return rep;
}

// ---------------------------------------------------------------------------
// Exact minimum.

struct min_blocking_options {
  /// Prune with the trivial, elf and (local rings) Glynn bounds. Off means a
  /// plain search with no lower bound, used as an independent reference.
  bool use_theory_bounds = true;
  std::optional<std::size_t> max_size;
  bool all_minima = false;
  unsigned jobs = 1;
};

inline search_result min_blocking(const geometry& g, const min_blocking_options& opt = {}) {
  search_options so;
  so.max_size = opt.max_size;
  so.all_minima = opt.all_minima;
  so.jobs = opt.jobs;
  if (opt.use_theory_bounds) {
    bigint lb = std::max(bound_trivial(g), geometry_bound_elf(g));
    if (auto gl = geometry_bound_glynn(g)) lb = std::max(lb, *gl);
    so.lower_bound = lb.convert_to<std::size_t>();
  }
  return min_hitting_set(incidence::from_geometry(g), so);
}

/// Removing any single point of a blocking set breaks it.
inline bool is_minimal_blocking(const incidence& s, const std::vector<point_id>& set) {
  if (!hits_all(s, set)) return false;
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto smaller = set;
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
    if (hits_all(s, smaller)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Bose-Burton type characterization for delta = d - 1.

struct bose_burton_report {
  std::size_t min_size = 0;
  std::vector<std::vector<point_id>> minima;
  std::vector<std::vector<point_id>> classes;
  bool every_class_blocks = false;
  bool minima_are_classes = false;
};

/// Every minimum blocking set is a parallel class and every parallel class
/// is a blocking set of size q^{d-1}. Throws CounterexampleFound otherwise.
inline bose_burton_report bose_burton_check(const geometry& g, unsigned jobs = 1) {
  const algebra& r = g.ring();
  if (!r.is_local() || *r.delta() + 1 != r.dim())
    throw error(error_code::not_applicable, "needs a local ring with delta = d - 1");
  bose_burton_report rep;
  rep.classes = g.line().parallel_classes();
  const auto inc = incidence::from_geometry(g);
  const std::size_t expected = ipow(bigint(r.q()), r.dim() - 1).convert_to<std::size_t>();
  rep.every_class_blocks = std::all_of(rep.classes.begin(), rep.classes.end(), [&](const auto& c) {
    return c.size() == expected && hits_all(inc, c);
  });
  min_blocking_options opt;
  opt.all_minima = true;
  opt.jobs = jobs;
  const auto res = min_blocking(g, opt);
  rep.min_size = res.size;
  rep.minima = res.minima;
  auto sorted_classes = rep.classes;
  std::sort(sorted_classes.begin(), sorted_classes.end());
  rep.minima_are_classes = res.size == expected && rep.minima == sorted_classes;
  if (!rep.every_class_blocks || !rep.minima_are_classes)
    throw error(error_code::counterexample_found,
                "minimum size " + std::to_string(res.size) + ", " + std::to_string(rep.minima.size()) +
                    " minima vs " + std::to_string(rep.classes.size()) + " parallel classes");
  return rep;
}

// ---------------------------------------------------------------------------
// Lifting from the residue geometry.

struct lift_report {
  std::shared_ptr<const geometry> residue;  ///< Sigma(F_q, R/(R\R*))
  std::vector<point_id> phi;                ///< phi[p] = id in the residue geometry
  std::vector<point_id> downstairs;
  std::vector<point_id> lifted;
  std::uint64_t fiber_size = 0;             ///< q^delta
  bool chains_map_to_chains = false;
  bool fibers_are_parallel_classes = false;
  blocking_report report;
};

/// phi: R(a, b) |-> F(a + I, b + I), I = R \ R*.
inline std::vector<point_id> residue_map(const geometry& g, const residue_field_result& res,
                                         const projective_line& residue_line) {
  std::vector<point_id> phi(g.v());
  for (point_id p = 0; p < g.v(); ++p) {
    const auto& pt = g.line()[p];
    const auto id = residue_line.find(res(pt.a), res(pt.b));
    if (!id) throw error(error_code::model_violation, "residue image of a point is not a point");
    phi[p] = *id;
  }
  return phi;
}

inline geometry residue_geometry(const geometry& g, unsigned jobs = 1) {
  return geometry(residue_field(g.ring()).residue, jobs);
}

/// B0 = phi^-1(B_F): the union of #B_F parallel classes. Verifies that
/// phi maps chains onto chains and that its fibers are the parallel classes.
inline lift_report lift_blocking(const geometry& g, std::vector<point_id> downstairs, unsigned jobs = 1) {
  const algebra& r = g.ring();
  if (!r.is_local()) throw error(error_code::not_local, "lifting needs a local ring");
  const auto res = residue_field(r);
  lift_report rep;
  rep.residue = std::make_shared<const geometry>(res.residue, jobs);
  const geometry& down = *rep.residue;
  rep.phi = residue_map(g, res, down.line());
  rep.fiber_size = ipow(bigint(r.q()), *r.delta()).convert_to<std::uint64_t>();

  const auto down_inc = incidence::from_geometry(down);
  rep.downstairs = normalize_set(down.v(), std::move(downstairs));
  if (!hits_all(down_inc, rep.downstairs))
    throw error(error_code::not_blocking_downstairs, "the given set is not blocking in the residue geometry");

  const std::set<chain> down_chains(down.chains().begin(), down.chains().end());
  rep.chains_map_to_chains = std::all_of(g.chains().begin(), g.chains().end(), [&](const chain& c) {
    chain img;
    for (auto p : c) img.push_back(rep.phi[p]);
    std::sort(img.begin(), img.end());
    return std::adjacent_find(img.begin(), img.end()) == img.end() && down_chains.count(img) == 1;
  });
  rep.fibers_are_parallel_classes = true;
  for (point_id p = 0; p < g.v(); ++p)
    for (point_id s = 0; s < g.v(); ++s)
      if ((rep.phi[p] == rep.phi[s]) != (p == s || !g.line().distant(p, s)))
        rep.fibers_are_parallel_classes = false;
  if (!rep.chains_map_to_chains || !rep.fibers_are_parallel_classes)
    throw error(error_code::model_violation, "residue map does not have the lifting properties");

  std::vector<bool> chosen(down.v(), false);
  for (auto p : rep.downstairs) chosen[p] = true;
  for (point_id p = 0; p < g.v(); ++p)
    if (chosen[rep.phi[p]]) rep.lifted.push_back(p);
  if (rep.lifted.size() != rep.downstairs.size() * rep.fiber_size)
    throw error(error_code::model_violation, "lifted set size is not x q^delta");
  rep.report = is_blocking(g, rep.lifted);
  if (!rep.report.is_blocking) throw error(error_code::model_violation, "lifted set is not blocking");
  return rep;
}

}  // namespace chaingeo

#endif  // CHAINGEO_BLOCKING_HPP
