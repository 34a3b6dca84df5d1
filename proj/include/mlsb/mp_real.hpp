#pragma once
// Value-semantics wrapper over mpfr_t with a thread-local default precision.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace mlsb::mp {

inline mpfr_prec_t& default_bits_ref() {
  thread_local mpfr_prec_t bits = 64;
  return bits;
}

inline mpfr_prec_t default_bits() { return default_bits_ref(); }

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(default_bits_ref()) {
    default_bits_ref() = static_cast<mpfr_prec_t>(bits);
  }
  ~PrecisionScope() { default_bits_ref() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

class Real {
 public:
  Real() {
    mpfr_init2(v_, default_bits());
    mpfr_set_zero(v_, 1);
  }
  Real(double d) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, default_bits());
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(int i) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, default_bits());
    mpfr_set_si(v_, i, MPFR_RNDN);
  }
  Real(long i) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, default_bits());
    mpfr_set_si(v_, i, MPFR_RNDN);
  }
  Real(double d, long bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(const Real& o, long bits) {
    mpfr_init2(v_, bits);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  explicit Real(std::string_view s, long bits = default_bits()) {
    mpfr_init2(v_, bits);
    std::string buf(s);
    if (mpfr_set_str(v_, buf.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw std::invalid_argument("not a decimal number: " + buf);
    }
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  ~Real() { mpfr_clear(v_); }

  Real& operator=(const Real& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  Real& operator=(double d) {
    mpfr_set_d(v_, d, MPFR_RNDN);
    return *this;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long bits() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  explicit operator double() const { return to_double(); }

  Real& operator+=(const Real& o) { return op2(o, mpfr_add); }
  Real& operator-=(const Real& o) { return op2(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return op2(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return op2(o, mpfr_div); }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  // Decimal string that reads back to the same binary value at this precision.
  // Trailing zeros are stripped so exact integers print plainly ("4").
  std::string to_decimal() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);
    bool neg = false;
    if (!digits.empty() && digits[0] == '-') {
      neg = true;
      digits.erase(0, 1);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out;
    long exp10 = static_cast<long>(e);  // value = 0.digits * 10^exp10
    long nd = static_cast<long>(digits.size());
    if (exp10 > 0 && exp10 <= 40) {
      if (nd <= exp10) {
        out = digits + std::string(static_cast<size_t>(exp10 - nd), '0');
      } else {
        out = digits.substr(0, static_cast<size_t>(exp10)) + "." + digits.substr(static_cast<size_t>(exp10));
      }
    } else if (exp10 <= 0 && exp10 > -6) {
      out = "0." + std::string(static_cast<size_t>(-exp10), '0') + digits;
    } else {
      out = digits.substr(0, 1);
      if (nd > 1) out += "." + digits.substr(1);
      out += "e" + std::to_string(exp10 - 1);
    }
    return neg ? "-" + out : out;
  }

  friend std::ostream& operator<<(std::ostream& os, const Real& r) { return os << r.to_decimal(); }

 private:
  using Fn2 = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

  Real& op2(const Real& o, Fn2 f) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    f(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  static Real bin(const Real& a, const Real& b, Fn2 f) {
    Real r(Uninit{}, std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  struct Uninit {};
  Real(Uninit, mpfr_prec_t bits) { mpfr_init2(v_, bits); }

  template <class F>
  friend Real apply1(const Real& a, F f);
  friend Real atan2(const Real& y, const Real& x);
  friend Real pow(const Real& a, const Real& b);
  friend Real ldexp(const Real& a, long e);

  mpfr_t v_;
};

// Mixed arithmetic with plain numbers. The number is converted at the other operand's precision.
#define MLSB_MP_MIXED(OP)                                                                       \
  inline Real operator OP(const Real& a, double b) { return a OP Real(b, a.bits()); }           \
  inline Real operator OP(double a, const Real& b) { return Real(a, b.bits()) OP b; }           \
  inline Real operator OP(const Real& a, int b) { return a OP Real(double(b), a.bits()); }      \
  inline Real operator OP(int a, const Real& b) { return Real(double(a), b.bits()) OP b; }
MLSB_MP_MIXED(+)
MLSB_MP_MIXED(-)
MLSB_MP_MIXED(*)
MLSB_MP_MIXED(/)
#undef MLSB_MP_MIXED

#define MLSB_MP_CMP(OP)                                                                        \
  inline bool operator OP(const Real& a, double b) { return a OP Real(b, 64); }               \
  inline bool operator OP(double a, const Real& b) { return Real(a, 64) OP b; }               \
  inline bool operator OP(const Real& a, int b) { return a OP Real(double(b), 64); }          \
  inline bool operator OP(int a, const Real& b) { return Real(double(a), 64) OP b; }
MLSB_MP_CMP(<)
MLSB_MP_CMP(>)
MLSB_MP_CMP(<=)
MLSB_MP_CMP(>=)
MLSB_MP_CMP(==)
MLSB_MP_CMP(!=)
#undef MLSB_MP_CMP

template <class F>
inline Real apply1(const Real& a, F f) {
  Real r(Real::Uninit{}, mpfr_get_prec(a.v_));
  f(r.v_, a.v_, MPFR_RNDN);
  return r;
}

inline Real sqrt(const Real& a) { return apply1(a, mpfr_sqrt); }
inline Real abs(const Real& a) { return apply1(a, mpfr_abs); }
inline Real fabs(const Real& a) { return apply1(a, mpfr_abs); }
inline Real sin(const Real& a) { return apply1(a, mpfr_sin); }
inline Real cos(const Real& a) { return apply1(a, mpfr_cos); }
inline Real tan(const Real& a) { return apply1(a, mpfr_tan); }
inline Real asin(const Real& a) { return apply1(a, mpfr_asin); }
inline Real acos(const Real& a) { return apply1(a, mpfr_acos); }
inline Real atan(const Real& a) { return apply1(a, mpfr_atan); }
inline Real exp(const Real& a) { return apply1(a, mpfr_exp); }
inline Real log(const Real& a) { return apply1(a, mpfr_log); }
inline Real log2(const Real& a) { return apply1(a, mpfr_log2); }
inline Real log10(const Real& a) { return apply1(a, mpfr_log10); }
inline Real floor(const Real& a) {
  return apply1(a, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t) { return mpfr_floor(r, x); });
}
inline Real round(const Real& a) {
  return apply1(a, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t) { return mpfr_round(r, x); });
}

inline Real atan2(const Real& y, const Real& x) {
  Real r(Real::Uninit{}, std::max(mpfr_get_prec(y.v_), mpfr_get_prec(x.v_)));
  mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, const Real& b) {
  Real r(Real::Uninit{}, std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
  mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, int n) {
  Real r(a);
  mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN);
  return r;
}
inline Real ldexp(const Real& a, long e) {
  Real r(Real::Uninit{}, mpfr_get_prec(a.v_));
  mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
  return r;
}
inline bool isfinite(const Real& a) { return mpfr_number_p(a.get()) != 0; }
inline bool signbit(const Real& a) { return mpfr_signbit(a.get()) != 0; }
inline Real pi(long bits = default_bits()) {
  Real r(0.0, bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

}  // namespace mlsb::mp

namespace mlsb {

// Unqualified math in namespace mlsb resolves to these for double and to mlsb::mp by ADL for Real.
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::fabs(x); }
inline double fabs(double x) { return std::fabs(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double asin(double x) { return std::asin(x); }
inline double acos(double x) { return std::acos(x); }
inline double atan(double x) { return std::atan(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log2(double x) { return std::log2(x); }
inline double log10(double x) { return std::log10(x); }
inline double floor(double x) { return std::floor(x); }
inline double round(double x) { return std::round(x); }
inline double pow(double a, double b) { return std::pow(a, b); }
inline double pow(double a, int n) { return std::pow(a, n); }
inline double ldexp(double a, long e) { return std::ldexp(a, static_cast<int>(e)); }
inline bool isfinite(double x) { return std::isfinite(x); }

using mp::Real;

// Uniform access to precision-dependent constants for double and Real.
template <class T>
struct real_traits;

template <>
struct real_traits<double> {
  static long bits(const double&) { return 53; }
  static long working_bits() { return 53; }
  static double from(double d) { return d; }
  static double from_decimal(const std::string& s) { return std::strtod(s.c_str(), nullptr); }
  static double pi() { return 3.14159265358979323846; }
  static double eps() { return std::numeric_limits<double>::epsilon(); }
  static double to_double(double d) { return d; }
  static std::string to_decimal(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }
};

template <>
struct real_traits<Real> {
  static long bits(const Real& r) { return r.bits(); }
  static long working_bits() { return mp::default_bits(); }
  static Real from(double d) { return Real(d); }
  static Real from_decimal(const std::string& s) { return Real(std::string_view(s)); }
  static Real pi() { return mp::pi(); }
  static Real eps() { return mp::ldexp(Real(1.0), 1 - mp::default_bits()); }
  static double to_double(const Real& r) { return r.to_double(); }
  static std::string to_decimal(const Real& r) { return r.to_decimal(); }
};

template <class T>
inline T from_double(double d) {
  return real_traits<T>::from(d);
}

template <class T>
inline double to_double(const T& x) {
  return real_traits<T>::to_double(x);
}

template <class T>
inline std::string to_decimal(const T& x) {
  return real_traits<T>::to_decimal(x);
}

// 2^-k at working precision.
template <class T>
inline T pow2(long k) {
  if constexpr (std::is_same_v<T, double>) {
    return std::ldexp(1.0, static_cast<int>(k));
  } else {
    return mp::ldexp(T(1.0), k);
  }
}

}  // namespace mlsb
