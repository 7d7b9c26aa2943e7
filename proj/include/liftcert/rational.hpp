#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftcert {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts "3/4", "-1/2", "7", "0.3", "1e-12", "2.5e-3".
inline Rat parse_rational(const std::string& s) {
  if (s.empty()) throw parse_error("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (n.empty() || d.empty()) throw parse_error("bad rational: " + s);
    try {
      Int num(n), den(d);
      if (den == 0) throw parse_error("zero denominator: " + s);
      return Rat(num, den);
    } catch (const std::exception&) {
      throw parse_error("bad rational: " + s);
    }
  }
  // decimal / scientific form
  std::string mant = s;
  long exp10 = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    mant = s.substr(0, e);
    try {
      exp10 = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw parse_error("bad exponent: " + s);
    }
  }
  bool neg = false;
  std::string digits = mant;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    neg = digits[0] == '-';
    digits = digits.substr(1);
  }
  auto dot = digits.find('.');
  std::string intpart = digits, fracpart;
  if (dot != std::string::npos) {
    intpart = digits.substr(0, dot);
    fracpart = digits.substr(dot + 1);
  }
  if (intpart.empty() && fracpart.empty()) throw parse_error("bad rational: " + s);
  for (char c : intpart + fracpart)
    if (c < '0' || c > '9') throw parse_error("bad rational: " + s);
  Int num(intpart.empty() ? "0" : intpart);
  Int den = 1;
  for (char c : fracpart) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  long k = exp10;
  while (k > 0) { num *= 10; --k; }
  while (k < 0) { den *= 10; ++k; }
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

// Canonical form: "num/den" in lowest terms, or plain "num" when den == 1.
inline std::string rat_to_string(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

// Decimal rendering, exact if the expansion terminates within max_digits,
// otherwise truncated with a trailing "...".
inline std::string rat_to_decimal(const Rat& r, int max_digits = 12) {
  Int n = rat_num(r), d = rat_den(r);
  std::string out;
  if (n < 0) { out += "-"; n = -n; }
  out += Int(n / d).str();
  Int rem = n % d;
  if (rem == 0) return out;
  out += ".";
  for (int i = 0; i < max_digits && rem != 0; ++i) {
    rem *= 10;
    out += char('0' + int(rem / d));
    rem %= d;
  }
  if (rem != 0) out += "...";
  return out;
}

// "1/4 (= 0.25)" style used by the CLI.
inline std::string rat_display(const Rat& r) {
  if (rat_den(r) == 1) return rat_to_string(r);
  return rat_to_string(r) + " (= " + rat_to_decimal(r) + ")";
}

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

inline Int int_pow(Int base, unsigned long e) {
  Int acc = 1;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
  return Rat(int_pow(rat_num(base), e), int_pow(rat_den(base), e));
}

// Largest x with x^k <= v (v >= 0).
inline Int int_kth_root(const Int& v, unsigned long k) {
  if (v <= 1 || k == 1) return v;
  // initial guess from bit length
  std::size_t bits = boost::multiprecision::msb(v) + 1;
  Int x = Int(1) << (bits / k + 1);
  while (true) {
    // Newton step for x^k - v
    Int xk1 = int_pow(x, k - 1);
    Int nx = ((k - 1) * x * xk1 + v) / (k * xk1);
    if (nx >= x) break;
    x = nx;
  }
  while (int_pow(x, k) > v) --x;
  while (int_pow(x + 1, k) <= v) ++x;
  return x;
}

// Exact value, or a certified enclosure, of radicand^(1/index).
struct RootResult {
  bool exact;
  Rat lo, hi;  // lo == hi when exact
};

// radicand in [0,1], index >= 1. The returned interval is verified by exact
// integer arithmetic: lo^index <= radicand <= hi^index.
inline RootResult kth_root(const Rat& radicand, const Int& index, const Rat& precision) {
  if (radicand < 0) throw std::domain_error("kth_root: negative radicand");
  if (radicand > 1) throw std::domain_error("kth_root: radicand > 1");
  if (index < 1) throw std::domain_error("kth_root: index < 1");
  if (index == 1 || radicand == 0 || radicand == 1)
    return {true, radicand, radicand};
  unsigned long k = index.convert_to<unsigned long>();
  Int n = rat_num(radicand), d = rat_den(radicand);
  Int rn = int_kth_root(n, k), rd = int_kth_root(d, k);
  if (int_pow(rn, k) == n && int_pow(rd, k) == d) {
    Rat v(rn, rd);
    return {true, v, v};
  }
  // enclose via high-precision float, then verify and (if needed) widen
  BigFloat g = boost::multiprecision::exp(
      (boost::multiprecision::log(BigFloat(n)) - boost::multiprecision::log(BigFloat(d))) /
      BigFloat(k));
  const int bits = 120;
  Int scale = Int(1) << bits;
  BigFloat scaled = g * BigFloat(scale);
  Int mid = scaled.convert_to<Int>();
  Rat pad(1, Int(1) << 90);
  Rat lo(mid, scale), hi(mid + 1, scale);
  lo = rat_max(Rat(0), lo - pad);
  hi = rat_min(Rat(1), hi + pad);
  for (int guard = 0; guard < 512; ++guard) {
    bool lo_ok = rat_pow(lo, k) <= radicand;
    bool hi_ok = rat_pow(hi, k) >= radicand;
    if (lo_ok && hi_ok) break;
    if (!lo_ok) lo = rat_max(Rat(0), lo - pad);
    if (!hi_ok) hi = rat_min(Rat(1), hi + pad);
    pad *= 2;
  }
  if (rat_pow(lo, k) > radicand || rat_pow(hi, k) < radicand)
    throw std::logic_error("kth_root: enclosure failed");
  (void)precision;  // enclosure width ~2^-90, far below any supported precision
  return {false, lo, hi};
}

// Lazily-rooted value: radicand^(1/index). Keeping the radicand exact lets
// bound comparisons be decided without any approximation.
struct PreRoot {
  Rat radicand;
  Int index = 1;

  static PreRoot zero() { return {Rat(0), 1}; }
  static PreRoot of(const Rat& r) { return {r, 1}; }
};

inline Int int_lcm(const Int& a, const Int& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

// Exact three-way comparison of a^(1/ia) vs b^(1/ib): cross-power to the lcm.
inline int preroot_cmp(const PreRoot& a, const PreRoot& b) {
  if (a.index == b.index)
    return a.radicand < b.radicand ? -1 : (a.radicand > b.radicand ? 1 : 0);
  Int l = int_lcm(a.index, b.index);
  Rat pa = rat_pow(a.radicand, Int(l / a.index).convert_to<unsigned long>());
  Rat pb = rat_pow(b.radicand, Int(l / b.index).convert_to<unsigned long>());
  return pa < pb ? -1 : (pa > pb ? 1 : 0);
}

inline bool preroot_leq(const PreRoot& a, const PreRoot& b) { return preroot_cmp(a, b) <= 0; }
inline bool preroot_eq(const PreRoot& a, const PreRoot& b) { return preroot_cmp(a, b) == 0; }

}  // namespace liftcert
