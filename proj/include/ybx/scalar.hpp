// Scalar field tags for the engine: exact rationals (GMP) and complex doubles.
// Every operator in the library is generic over one of these two fields.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ybx {

using Cplx = std::complex<double>;

// Exact rational. Thin wrapper over mpq_class that keeps values canonical
// (lowest terms, positive denominator) no matter how they were constructed.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "p/q", and leading '-'.
    static Rat parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    std::string str() const { return v_.get_str(); }
    double to_double() const { return v_.get_d(); }
    const mpq_class& raw() const { return v_; }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.v_ == 0) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(a.v_ / b.v_));
    }
    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& b) { v_ += b.v_; return *this; }
    Rat& operator-=(const Rat& b) { v_ -= b.v_; return *this; }
    Rat& operator*=(const Rat& b) { v_ *= b.v_; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    bool is_zero() const { return v_ == 0; }

private:
    mpq_class v_;
};

inline Cplx ensure_finite(Cplx z, const char* where) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error(std::string("non-finite complex value in ") + where);
    return z;
}

// Field traits used by the generic operator machinery.
template <class F>
struct field_traits;

template <>
struct field_traits<Rat> {
    static constexpr bool exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat from_int(long n) { return Rat(n); }
    static bool is_zero(const Rat& x) { return x.is_zero(); }
    static double abs_approx(const Rat& x) { return std::abs(x.to_double()); }
    static const char* name() { return "rational"; }
};

template <>
struct field_traits<Cplx> {
    static constexpr bool exact = false;
    static Cplx zero() { return Cplx(0.0, 0.0); }
    static Cplx one() { return Cplx(1.0, 0.0); }
    static Cplx from_int(long n) { return Cplx(double(n), 0.0); }
    static bool is_zero(const Cplx& x) { return x == Cplx(0.0, 0.0); }
    static double abs_approx(const Cplx& x) { return std::abs(x); }
    static const char* name() { return "complex"; }
};

template <class F>
F from_rat(const Rat& r);
template <>
inline Rat from_rat<Rat>(const Rat& r) { return r; }
template <>
inline Cplx from_rat<Cplx>(const Rat& r) { return Cplx(r.to_double(), 0.0); }

// Integer power with negative exponents (complex base must be nonzero for c < 0).
inline Cplx ipow(Cplx base, long c) {
    if (c == 0) return Cplx(1.0, 0.0);
    bool inv = c < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-c) : static_cast<unsigned long>(c);
    Cplx acc(1.0, 0.0), b = base;
    while (e) {
        if (e & 1UL) acc *= b;
        b *= b;
        e >>= 1UL;
    }
    return inv ? Cplx(1.0, 0.0) / acc : acc;
}

inline Rat rat_ipow(const Rat& base, long c) {
    if (c == 0) return Rat(1);
    bool inv = c < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-c) : static_cast<unsigned long>(c);
    Rat acc(1), b = base;
    while (e) {
        if (e & 1UL) acc *= b;
        b *= b;
        e >>= 1UL;
    }
    return inv ? Rat(1) / acc : acc;
}

// Binomial coefficient as an exact field value (n small throughout this library).
template <class F>
F binomial(long n, long k) {
    if (k < 0 || k > n || n < 0) return field_traits<F>::zero();
    F acc = field_traits<F>::one();
    for (long j = 0; j < k; ++j) {
        acc = acc * field_traits<F>::from_int(n - j);
        acc = acc / field_traits<F>::from_int(j + 1);
    }
    return acc;
}

inline double binomial_d(long n, long k) {
    if (k < 0 || k > n || n < 0) return 0.0;
    double acc = 1.0;
    for (long j = 0; j < k; ++j) acc = acc * double(n - j) / double(j + 1);
    return acc;
}

}  // namespace ybx
