#ifndef CHAINGEO_RING_SPEC_HPP
#define CHAINGEO_RING_SPEC_HPP

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chaingeo/algebra.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/field.hpp"

namespace chaingeo {

// ---------------------------------------------------------------------------
// Polynomials over F_q (element indices, low-to-high), used to realize
// extension fields as F_q[s]/(g).

namespace detail {

using fq_poly = std::vector<field::element>;

inline void trim(fq_poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline fq_poly fq_rem(fq_poly f, const fq_poly& g, const field& k) {
  trim(f);
  const std::size_t n = g.size();
  const field::element lead_inv = k.inv(g.back());
  while (f.size() >= n) {
    const field::element c = k.mul(f.back(), lead_inv);
    const std::size_t shift = f.size() - n;
    for (std::size_t i = 0; i < n; ++i) f[shift + i] = k.sub(f[shift + i], k.mul(c, g[i]));
    trim(f);
  }
  return f;
}

inline fq_poly fq_monic_from_index(unsigned index, unsigned deg, const field& k) {
  fq_poly f(deg + 1, 0);
  for (unsigned i = 0; i < deg; ++i) {
    f[i] = static_cast<field::element>(index % k.order());
    index /= k.order();
  }
  f[deg] = 1;
  return f;
}

inline bool fq_irreducible(const fq_poly& f, const field& k) {
  const unsigned deg = static_cast<unsigned>(f.size()) - 1;
  for (unsigned m = 1; 2 * m <= deg; ++m) {
    unsigned count = 1;
    for (unsigned i = 0; i < m; ++i) count *= k.order();
    for (unsigned idx = 0; idx < count; ++idx)
      if (fq_rem(f, fq_monic_from_index(idx, m, k), k).empty()) return false;
  }
  return true;
}

}  // namespace detail

/// Least (by index sum c_i q^i) monic irreducible polynomial of degree m over k.
inline detail::fq_poly least_irreducible(const field& k, unsigned m) {
  unsigned count = 1;
  for (unsigned i = 0; i < m; ++i) count *= k.order();
  for (unsigned idx = 0; idx < count; ++idx) {
    auto f = detail::fq_monic_from_index(idx, m, k);
    if (detail::fq_irreducible(f, k)) return f;
  }
  throw error(error_code::bad_spec, "no irreducible polynomial found");  // unreachable for m >= 1
}

// ---------------------------------------------------------------------------
// Algebra constructors.

/// R = K, d = 1.
inline algebra make_base_field_algebra(const field& k) {
  return algebra(k, 1, {1}, {1}, algebra_kind::base_field);
}

/// F_q[s]/(g(s)) x F_q[t]/(t^n) with basis s^i t^j at index i + m*j; g is the
/// least irreducible of degree m. Covers extensions (n = 1) and truncated
/// polynomial rings (m = 1).
inline algebra make_truncated_extension(const field& k, unsigned m, unsigned n) {
  if (m == 0 || n == 0) throw error(error_code::bad_spec, "degrees must be positive");
  const auto g = least_irreducible(k, m);
  const unsigned d = m * n;
  // Reduced coordinates of s^e for e < 2m - 1.
  std::vector<detail::fq_poly> spow(2 * m);
  for (unsigned e = 0; e < 2 * m; ++e) {
    detail::fq_poly mono(e + 1, 0);
    mono[e] = 1;
    spow[e] = detail::fq_rem(mono, g, k);
    spow[e].resize(m, 0);
  }
  std::vector<field::element> tensor(std::size_t(d) * d * d, 0);
  for (unsigned a = 0; a < d; ++a)
    for (unsigned b = 0; b < d; ++b) {
      const unsigned ia = a % m, ja = a / m, ib = b % m, jb = b / m;
      if (ja + jb >= n) continue;
      for (unsigned c = 0; c < m; ++c)
        tensor[(std::size_t(a) * d + b) * d + c + m * (ja + jb)] = spow[ia + ib][c];
    }
  std::vector<field::element> one(d, 0);
  one[0] = 1;
  algebra_kind kind = n > 1 ? algebra_kind::truncated
                            : (m > 1 ? algebra_kind::extension : algebra_kind::base_field);
  return algebra(k, d, std::move(one), std::move(tensor), kind);
}

inline algebra make_extension(const field& k, unsigned m) { return make_truncated_extension(k, m, 1); }

inline algebra make_truncated(const field& k, unsigned n) { return make_truncated_extension(k, 1, n); }

/// K^n with orthogonal idempotent basis.
inline algebra make_product(const field& k, unsigned n) {
  if (n == 0) throw error(error_code::bad_spec, "product needs at least one factor");
  std::vector<field::element> tensor(std::size_t(n) * n * n, 0);
  for (unsigned i = 0; i < n; ++i) tensor[(std::size_t(i) * n + i) * n + i] = 1;
  return algebra(k, n, std::vector<field::element>(n, 1), std::move(tensor),
                 n == 1 ? algebra_kind::base_field : algebra_kind::product, n);
}

// ---------------------------------------------------------------------------
// Structure-constant files.
//
//   p e d
//   c_0 ... c_e          (only when e > 1: modulus digits, or the word `auto`)
//   o_0 ... o_{d-1}      (coordinates of the unit)
//   d*d lines, line i*d + j: coordinates of e_i * e_j
//
// Digits are whitespace-separated integers; `#` starts a comment.

inline algebra parse_structure_constants(std::istream& in) {
  std::vector<std::vector<long>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<long> nums;
    std::string tok;
    bool any = false;
    while (ls >> tok) {
      any = true;
      if (tok == "auto") {
        nums.push_back(-1);
        continue;
      }
      try {
        std::size_t used = 0;
        nums.push_back(std::stol(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw error(error_code::bad_file, "not an integer: '" + tok + "'");
      }
    }
    if (any) lines.push_back(std::move(nums));
  }
  if (lines.empty() || lines[0].size() != 3)
    throw error(error_code::bad_file, "header must be `p e d`");
  const long p = lines[0][0], e = lines[0][1], d = lines[0][2];
  if (p < 2 || e < 1 || d < 1 || e > 8 || d > 16) throw error(error_code::bad_file, "header out of range");
  std::size_t at = 1;
  std::optional<std::vector<unsigned>> modulus;
  if (e > 1) {
    if (at >= lines.size()) throw error(error_code::bad_file, "missing modulus line");
    const auto& m = lines[at++];
    if (!(m.size() == 1 && m[0] == -1)) {
      if (m.size() != std::size_t(e) + 1) throw error(error_code::bad_file, "modulus needs e+1 digits");
      modulus.emplace();
      for (long c : m) {
        if (c < 0) throw error(error_code::bad_file, "negative modulus digit");
        modulus->push_back(static_cast<unsigned>(c));
      }
    }
  }
  field k(static_cast<unsigned>(p), static_cast<unsigned>(e), modulus);
  const std::size_t expected = at + 1 + std::size_t(d) * d;
  if (lines.size() != expected)
    throw error(error_code::bad_file, "expected " + std::to_string(expected) + " data lines, got " +
                                          std::to_string(lines.size()));
  auto digits = [&](const std::vector<long>& row) {
    if (row.size() != std::size_t(d)) throw error(error_code::bad_file, "row must hold d digits");
    std::vector<field::element> out;
    for (long c : row) {
      if (c < 0 || c >= long(k.order())) throw error(error_code::bad_file, "digit out of range");
      out.push_back(static_cast<field::element>(c));
    }
    return out;
  };
  auto one = digits(lines[at++]);
  std::vector<field::element> tensor;
  for (long i = 0; i < d * d; ++i) {
    auto row = digits(lines[at++]);
    tensor.insert(tensor.end(), row.begin(), row.end());
  }
  return algebra(std::move(k), static_cast<unsigned>(d), std::move(one), std::move(tensor));
}

inline algebra read_structure_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(error_code::bad_file, "cannot open " + path);
  return parse_structure_constants(in);
}

inline std::string format_structure_constants(const algebra& r) {
  std::ostringstream out;
  const unsigned d = r.dim();
  out << r.base().characteristic() << ' ' << r.base().degree() << ' ' << d << '\n';
  if (r.base().degree() > 1) {
    const auto& m = r.base().modulus();
    for (std::size_t i = 0; i < m.size(); ++i) out << (i ? " " : "") << m[i];
    out << '\n';
  }
  auto row = [&](auto first, auto last) {
    for (auto it = first; it != last; ++it) out << (it == first ? "" : " ") << unsigned(*it);
    out << '\n';
  };
  row(r.one_coords().begin(), r.one_coords().end());
  for (std::size_t ij = 0; ij < std::size_t(d) * d; ++ij)
    row(r.tensor().begin() + ij * d, r.tensor().begin() + (ij + 1) * d);
  return out.str();
}

// ---------------------------------------------------------------------------
// Ring specifications.
//
//   gf(q)                          R = K
//   gf(q;c0,...,1)                 R = K with an explicit modulus
//   gf(Q)/gf(q)                    the degree-m extension, Q = q^m
//   gf(q) x gf(q) [x gf(q) ...]    K^n
//   gf(q)[t]/(t^n)                 truncated polynomials
//   gf(Q)[t]/(t^n) over gf(q)      F_Q[t]/(t^n) as an F_q-algebra
//   file:<path>                    structure-constant file

struct ring_spec {
  enum class form { field, extension, product, truncated, file };

  form shape = form::field;
  unsigned q = 0;                  ///< order of the ground field K
  std::vector<unsigned> modulus;   ///< explicit modulus for K, if given
  unsigned extension_degree = 1;   ///< m, with F_{q^m} the coefficient field
  unsigned factors = 1;            ///< n for K^n
  unsigned nilpotency = 1;         ///< n for t^n = 0
  std::string path;

  static ring_spec parse(std::string_view text);
  std::string to_string() const;
};

namespace detail {

inline void prime_power(unsigned q, unsigned& p, unsigned& e) {
  for (p = 2; p <= q; ++p)
    if (q % p == 0) break;
  e = 0;
  unsigned v = q;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  if (q < 2 || v != 1)
    throw error(error_code::non_prime_characteristic, std::to_string(q) + " is not a prime power");
}

class spec_lexer {
 public:
  explicit spec_lexer(std::string_view s) {
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
  }

  bool done() const { return pos_ == text_.size(); }
  bool accept(std::string_view lit) {
    if (text_.compare(pos_, lit.size(), lit) == 0) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view lit) {
    if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
  }
  unsigned number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 6) fail("expected a number");
    return static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw error(error_code::bad_spec, why + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
};

// gf(q) or gf(q;c0,...,1)
inline unsigned parse_gf(spec_lexer& lx, std::vector<unsigned>* modulus) {
  lx.expect("gf(");
  unsigned q = lx.number();
  if (lx.accept(";")) {
    if (!modulus) lx.fail("modulus override is only allowed on the ground field");
    do modulus->push_back(lx.number());
    while (lx.accept(","));
  }
  lx.expect(")");
  return q;
}

inline unsigned log_base(unsigned big, unsigned small) {
  unsigned m = 0;
  unsigned long long v = 1;
  while (v < big) {
    v *= small;
    ++m;
  }
  if (v != big || small < 2)
    throw error(error_code::bad_spec, std::to_string(big) + " is not a power of " + std::to_string(small));
  return m;
}

}  // namespace detail

inline ring_spec ring_spec::parse(std::string_view text) {
  ring_spec s;
  {
    std::string_view t = text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    if (t.substr(0, 5) == "file:") {
      s.shape = form::file;
      s.path = std::string(t.substr(5));
      while (!s.path.empty() && std::isspace(static_cast<unsigned char>(s.path.back()))) s.path.pop_back();
      if (s.path.empty()) throw error(error_code::bad_spec, "file: needs a path");
      return s;
    }
  }
  detail::spec_lexer lx(text);
  std::vector<unsigned> first_modulus;
  const unsigned first = detail::parse_gf(lx, &first_modulus);

  if (lx.done()) {
    s.q = first;
    s.modulus = std::move(first_modulus);
  } else if (lx.accept("/gf(")) {
    if (!first_modulus.empty()) lx.fail("modulus override belongs on the ground field");
    std::vector<unsigned> mod;
    s.q = lx.number();
    if (lx.accept(";")) {
      do mod.push_back(lx.number());
      while (lx.accept(","));
    }
    lx.expect(")");
    s.modulus = std::move(mod);
    s.extension_degree = detail::log_base(first, s.q);
    s.shape = s.extension_degree == 1 ? form::field : form::extension;
  } else if (lx.accept("[t]/(t^")) {
    s.nilpotency = lx.number();
    lx.expect(")");
    if (s.nilpotency == 0) lx.fail("nilpotency index must be positive");
    if (lx.accept("over")) {
      if (!first_modulus.empty()) lx.fail("modulus override belongs on the ground field");
      s.q = detail::parse_gf(lx, &s.modulus);
      s.extension_degree = detail::log_base(first, s.q);
    } else {
      s.q = first;
      s.modulus = std::move(first_modulus);
    }
    s.shape = s.nilpotency > 1 ? form::truncated
                               : (s.extension_degree > 1 ? form::extension : form::field);
  } else if (lx.accept("x")) {
    s.q = first;
    s.modulus = std::move(first_modulus);
    s.factors = 1;
    do {
      std::vector<unsigned> mod;
      const unsigned next = detail::parse_gf(lx, &mod);
      if (next != first || (!mod.empty() && mod != s.modulus))
        lx.fail("product factors must all be the same field");
      ++s.factors;
    } while (lx.accept("x"));
    s.shape = form::product;
  } else {
    lx.fail("unrecognized ring spec");
  }
  if (!lx.done()) lx.fail("trailing input");
  unsigned p = 0, e = 0;
  detail::prime_power(s.q, p, e);
  if (s.extension_degree > 1) detail::prime_power(first, p, e);
  return s;
}

inline std::string ring_spec::to_string() const {
  if (shape == form::file) return "file:" + path;
  std::string k = "gf(" + std::to_string(q);
  for (std::size_t i = 0; i < modulus.size(); ++i) k += (i ? "," : ";") + std::to_string(modulus[i]);
  k += ")";
  unsigned long long big = 1;
  for (unsigned i = 0; i < extension_degree; ++i) big *= q;
  const std::string coeff = "gf(" + std::to_string(big) + ")";
  switch (shape) {
    case form::field:
      return k;
    case form::extension:
      return coeff + "/" + k;
    case form::product: {
      std::string out = k;
      for (unsigned i = 1; i < factors; ++i) out += " x " + k;
      return out;
    }
    case form::truncated:
      if (extension_degree == 1) return k + "[t]/(t^" + std::to_string(nilpotency) + ")";
      return coeff + "[t]/(t^" + std::to_string(nilpotency) + ") over " + k;
    case form::file:
      break;
  }
  return k;
}

inline field make_ground_field(const ring_spec& s) {
  unsigned p = 0, e = 0;
  detail::prime_power(s.q, p, e);
  if (s.modulus.empty()) return field(p, e);
  return field(p, e, s.modulus);
}

inline algebra build_algebra(const ring_spec& s) {
  if (s.shape == ring_spec::form::file) return read_structure_constants(s.path);
  const field k = make_ground_field(s);
  switch (s.shape) {
    case ring_spec::form::field:
      return make_base_field_algebra(k);
    case ring_spec::form::extension:
      return make_extension(k, s.extension_degree);
    case ring_spec::form::product:
      return make_product(k, s.factors);
    case ring_spec::form::truncated:
      return make_truncated_extension(k, s.extension_degree, s.nilpotency);
    case ring_spec::form::file:
      break;
  }
  throw error(error_code::bad_spec, "unreachable");
}

inline algebra algebra_from_spec(std::string_view text) { return build_algebra(ring_spec::parse(text)); }

}  // namespace chaingeo

#endif  // CHAINGEO_RING_SPEC_HPP
