#ifndef CHAINGEO_FIELD_HPP
#define CHAINGEO_FIELD_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaingeo/error.hpp"

namespace chaingeo {

namespace detail {

inline bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

// Dense polynomials over Z_p, coefficients low-to-high.
using zp_poly = std::vector<unsigned>;

inline void trim(zp_poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo the monic polynomial g.
inline zp_poly zp_rem(zp_poly f, const zp_poly& g, unsigned p) {
  trim(f);
  const std::size_t n = g.size();
  while (f.size() >= n) {
    const unsigned c = f.back();
    const std::size_t shift = f.size() - n;
    for (std::size_t i = 0; i < n; ++i)
      f[shift + i] = (f[shift + i] + (p - c) * g[i]) % p;
    trim(f);
  }
  return f;
}

inline zp_poly zp_mul(const zp_poly& a, const zp_poly& b, unsigned p) {
  if (a.empty() || b.empty()) return {};
  zp_poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

// Monic polynomial of degree `deg` whose non-leading coefficients are the
// base-p digits of `index`.
inline zp_poly monic_from_index(unsigned index, unsigned deg, unsigned p) {
  zp_poly f(deg + 1, 0);
  for (unsigned i = 0; i < deg; ++i) {
    f[i] = index % p;
    index /= p;
  }
  f[deg] = 1;
  return f;
}

/// Trial division by every monic polynomial of degree 1..deg/2.
inline bool zp_irreducible(const zp_poly& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size()) - 1;
  for (unsigned k = 1; 2 * k <= deg; ++k) {
    unsigned count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (unsigned idx = 0; idx < count; ++idx)
      if (zp_rem(f, monic_from_index(idx, k, p), p).empty()) return false;
  }
  return true;
}

}  // namespace detail

/// Built-in moduli: for each q = p^e with e > 1 and q <= 128, the monic
/// irreducible of degree e with the least index sum c_i p^i.
struct builtin_modulus {
  unsigned q;
  unsigned p;
  unsigned e;
  std::array<unsigned, 8> coeffs;  // low-to-high, leading 1 included
};

inline constexpr std::array<builtin_modulus, 13> builtin_moduli{{
    {4, 2, 2, {1, 1, 1}},
    {8, 2, 3, {1, 1, 0, 1}},
    {9, 3, 2, {1, 0, 1}},
    {16, 2, 4, {1, 1, 0, 0, 1}},
    {25, 5, 2, {2, 0, 1}},
    {27, 3, 3, {1, 2, 0, 1}},
    {32, 2, 5, {1, 0, 1, 0, 0, 1}},
    {49, 7, 2, {1, 0, 1}},
    {64, 2, 6, {1, 1, 0, 0, 0, 0, 1}},
    {81, 3, 4, {2, 1, 0, 0, 1}},
    {121, 11, 2, {1, 0, 1}},
    {125, 5, 3, {1, 1, 0, 1}},
    {128, 2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
}};

/// The finite field F_q, q = p^e <= 128. Element i has coefficient vector
/// given by the base-p digits of i (constant term first).
class field {
 public:
  using element = std::uint8_t;

  static constexpr unsigned max_order = 128;

  field(unsigned p, unsigned e, std::optional<std::vector<unsigned>> modulus = {})
      : p_(p), e_(e) {
    if (!detail::is_prime(p))
      throw error(error_code::non_prime_characteristic, std::to_string(p) + " is not prime");
    if (e == 0) throw error(error_code::bad_spec, "field degree must be positive");
    unsigned long long q = 1;
    for (unsigned i = 0; i < e; ++i) {
      q *= p;
      if (q > max_order)
        throw error(error_code::unsupported_order,
                    "q = " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 128");
    }
    q_ = static_cast<unsigned>(q);

    if (e > 1) {
      if (modulus) {
        modulus_ = *modulus;
        if (modulus_.size() != e + 1 || modulus_.back() != 1)
          throw error(error_code::bad_spec, "modulus must be monic of degree " + std::to_string(e));
        for (unsigned c : modulus_)
          if (c >= p) throw error(error_code::bad_spec, "modulus digit out of range");
      } else {
        for (const auto& m : builtin_moduli)
          if (m.q == q_) modulus_.assign(m.coeffs.begin(), m.coeffs.begin() + e + 1);
        if (modulus_.empty())
          throw error(error_code::unsupported_order, "no built-in modulus for q = " + std::to_string(q_));
      }
      if (!detail::zp_irreducible(modulus_, p))
        throw error(error_code::reducible_modulus, "modulus is reducible over Z_" + std::to_string(p));
    } else if (modulus && !modulus->empty()) {
      throw error(error_code::bad_spec, "a prime field takes no modulus");
    }
    build_tables();
  }

  unsigned characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  unsigned order() const { return q_; }
  /// Empty for prime fields.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  element zero() const { return 0; }
  element one() const { return 1; }

  element add(element a, element b) const { return add_[a * q_ + b]; }
  element neg(element a) const { return neg_[a]; }
  element sub(element a, element b) const { return add(a, neg(b)); }

  element mul(element a, element b) const {
    if (a == 0 || b == 0) return 0;
    return antilog_[(log_[a] + log_[b]) % (q_ - 1)];
  }

  element inv(element a) const {
    if (a == 0) throw error(error_code::division_by_zero, "inverse of 0");
    return antilog_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  element div(element a, element b) const { return mul(a, inv(b)); }

  element pow(element a, unsigned long long k) const {
    if (k == 0) return 1;
    if (a == 0) return 0;
    return antilog_[(log_[a] * (k % (q_ - 1))) % (q_ - 1)];
  }

  /// Image of an integer in the prime subfield.
  element from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<element>(r);
  }

  /// A generator of the multiplicative group.
  element primitive_element() const { return antilog_[1 % (q_ - 1 == 0 ? 1 : q_ - 1)]; }

  /// Multiplicative order of a nonzero element.
  unsigned multiplicative_order(element a) const {
    if (a == 0) throw error(error_code::division_by_zero, "order of 0");
    unsigned k = 1;
    for (element x = a; x != 1; x = mul(x, a)) ++k;
    return k;
  }

  std::vector<unsigned> coefficients(element a) const {
    std::vector<unsigned> c(e_);
    unsigned v = a;
    for (unsigned i = 0; i < e_; ++i) {
      c[i] = v % p_;
      v /= p_;
    }
    return c;
  }

  element from_coefficients(std::span<const unsigned> c) const {
    unsigned v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i] % p_;
    return static_cast<element>(v);
  }

  friend bool operator==(const field& a, const field& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.modulus_ == b.modulus_;
  }

 private:
  // Polynomial product reduced mod the modulus, on element indices.
  element poly_mul(element a, element b) const {
    auto prod = detail::zp_mul(detail::zp_poly(coefficients(a)), coefficients(b), p_);
    if (e_ > 1) prod = detail::zp_rem(prod, modulus_, p_);
    else if (!prod.empty()) prod[0] %= p_;
    prod.resize(e_, 0);
    return from_coefficients(prod);
  }

  void build_tables() {
    add_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    for (unsigned a = 0; a < q_; ++a) {
      auto ca = coefficients(static_cast<element>(a));
      std::vector<unsigned> cn(e_);
      for (unsigned i = 0; i < e_; ++i) cn[i] = (p_ - ca[i]) % p_;
      neg_[a] = from_coefficients(cn);
      for (unsigned b = 0; b < q_; ++b) {
        auto cb = coefficients(static_cast<element>(b));
        std::vector<unsigned> cs(e_);
        for (unsigned i = 0; i < e_; ++i) cs[i] = (ca[i] + cb[i]) % p_;
        add_[a * q_ + b] = from_coefficients(cs);
      }
    }

    log_.assign(q_, 0);
    antilog_.assign(q_ == 1 ? 1 : q_ - 1, 1);
    if (q_ == 2) return;
    for (unsigned g = 2; g < q_; ++g) {
      std::vector<element> powers{1};
      element x = static_cast<element>(g);
      while (x != 1 && powers.size() < q_) {
        powers.push_back(x);
        x = poly_mul(x, static_cast<element>(g));
      }
      if (powers.size() == q_ - 1 && x == 1) {
        for (unsigned k = 0; k < q_ - 1; ++k) {
          antilog_[k] = powers[k];
          log_[powers[k]] = k;
        }
        return;
      }
    }
    throw error(error_code::reducible_modulus, "no primitive element found");
  }

  unsigned p_;
  unsigned e_;
  unsigned q_ = 0;
  std::vector<unsigned> modulus_;
  std::vector<element> add_;
  std::vector<element> neg_;
  std::vector<unsigned> log_;
  std::vector<element> antilog_;
};

/// Digit used when printing a field element (0-9a-z); q > 36 callers use decimal.
inline std::string element_token(unsigned v, unsigned q) {
  if (q <= 36) return std::string(1, "0123456789abcdefghijklmnopqrstuvwxyz"[v]);
  return std::to_string(v);
}

}  // namespace chaingeo

#endif  // CHAINGEO_FIELD_HPP
