// Special functions for the three R-operator constructions: rising factorials,
// q-Pochhammer symbols, Jacobi theta series, the elliptic gamma function and
// the quantized D-function of the modular double.
#pragma once

#include <numbers>

#include "errors.hpp"
#include "scalar.hpp"

namespace ybx {

inline constexpr double kPi = std::numbers::pi;
inline const Cplx kI = Cplx(0.0, 1.0);

// Series / product cutoffs. The geometric tail bound |r|^N / (1 - |r|) of the
// dominating ratio r must fall below target_tol; params constructors verify it.
struct TruncationConfig {
    int theta_terms = 30;   // theta series cut |n + 1/2| <= theta_terms
    int gamma_terms = 40;   // elliptic gamma double product cut n, m <= gamma_terms
    double target_tol = 1e-12;

    TruncationConfig() = default;
    TruncationConfig(int nt, int ng, double tol)
        : theta_terms(nt), gamma_terms(ng), target_tol(tol) {
        if (nt <= 0 || ng <= 0 || tol <= 0.0)
            throw ConfigError("TruncationConfig: all fields must be positive");
    }

    static void check_tail(double ratio, int terms, double tol, const char* what) {
        if (ratio >= 1.0)
            throw ConfigError(std::string(what) + ": series ratio >= 1, cannot converge");
        double tail = std::pow(ratio, double(terms)) / (1.0 - ratio);
        if (tail >= tol)
            throw ConfigError(std::string(what) + ": tail bound " + std::to_string(tail) +
                              " exceeds target_tol " + std::to_string(tol));
    }
};

// --- rising factorial -------------------------------------------------------

// prod_{j=0}^{k-1} (a + j); exact over the rational field.
template <class F>
F rising_factorial(const F& a, int k) {
    F acc = field_traits<F>::one();
    for (int j = 0; j < k; ++j) acc = acc * (a + field_traits<F>::from_int(j));
    return acc;
}

inline double falling_factorial_d(double b, int k) {
    double acc = 1.0;
    for (int j = 0; j < k; ++j) acc *= (b - j);
    return acc;
}

// --- q-Pochhammer -----------------------------------------------------------

// (q^2; q^2)_k = prod_{j=1}^{k} (1 - q^{2j})
inline Cplx q_pochhammer_q2(Cplx q, int k) {
    Cplx acc(1.0, 0.0);
    Cplx q2 = q * q, pw(1.0, 0.0);
    for (int j = 1; j <= k; ++j) {
        pw *= q2;
        acc *= (Cplx(1.0, 0.0) - pw);
    }
    return acc;
}

// (p; p)_N = prod_{k=1}^{N} (1 - p^k), the truncated Euler product.
inline Cplx pochhammer_inf(Cplx p, int terms) {
    Cplx acc(1.0, 0.0), pw(1.0, 0.0);
    for (int k = 1; k <= terms; ++k) {
        pw *= p;
        acc *= (Cplx(1.0, 0.0) - pw);
    }
    return acc;
}

// --- Jacobi theta functions -------------------------------------------------

// theta_1(z|tau) = -sum_n exp(i pi (n+1/2)^2 tau) exp(2 pi i (n+1/2)(z+1/2)),
// summed over |n + 1/2| <= theta_terms.
inline Cplx theta1_series(Cplx z, Cplx tau, const TruncationConfig& trunc) {
    if (tau.imag() <= 0.0) throw ConfigError("theta: Im(tau) must be positive");
    Cplx sum(0.0, 0.0);
    const int N = trunc.theta_terms;
    for (int n = -N; n < N; ++n) {
        double half = n + 0.5;
        Cplx term = std::exp(kI * kPi * (half * half) * tau) *
                    std::exp(2.0 * kPi * kI * half * (z + 0.5));
        sum += term;
    }
    return -sum;
}

// a = 1..4; theta_2, theta_3, theta_4 via the half-period shifts of theta_1.
inline Cplx theta(int a, Cplx z, Cplx tau, const TruncationConfig& trunc) {
    switch (a) {
        case 1: return theta1_series(z, tau, trunc);
        case 2: return theta1_series(z + 0.5, tau, trunc);
        case 3: return std::exp(kI * kPi * tau / 4.0 + kI * kPi * z) *
                       theta(2, z + tau / 2.0, tau, trunc);
        case 4: return theta(3, z + 0.5, tau, trunc);
        default: throw ConfigError("theta: index a must be in 1..4");
    }
}

// bar_theta_a(z) = theta_a(z | tau/2), a in {3,4}.
inline Cplx bar_theta(int a, Cplx z, Cplx tau, const TruncationConfig& trunc) {
    if (a != 3 && a != 4) throw ConfigError("bar_theta: index a must be 3 or 4");
    return theta(a, z, tau / 2.0, trunc);
}

// --- modular double parameters ----------------------------------------------

// omega, omega' with omega*omega' = -1/4; q = exp(i pi omega'/omega). The half
// power q^{1/2} is defined once here and shared by every phase computation.
struct ModularParams {
    Cplx omega;
    Cplx omega_prime;    // -1/(4 omega)
    Cplx omega_dblprime; // omega + omega'
    Cplx q;
    Cplx qh;             // q^{1/2} = exp(i pi omega' / (2 omega))

    explicit ModularParams(Cplx om = Cplx(0.5, 0.5)) : omega(om) {
        omega_prime = -1.0 / (4.0 * omega);
        omega_dblprime = omega + omega_prime;
        if (omega.imag() <= 0.0 || omega_prime.imag() <= 0.0)
            throw ConfigError("ModularParams: Im(omega) and Im(omega') must be positive");
        qh = std::exp(kI * kPi * omega_prime / (2.0 * omega));
        q = qh * qh;
        double aq = std::abs(q);
        if (aq >= 1.0 - 1e-12) {
            if (aq > 1.0 + 1e-12) throw ConfigError("ModularParams: |q| > 1");
            for (int k = 1; k <= 64; ++k)
                if (std::abs(ipow(q, k) - Cplx(1.0, 0.0)) < 1e-9)
                    throw ConfigError("ModularParams: q is a root of unity");
        }
    }

    // q^{c/2} for integer c (phases on Laurent monomials).
    Cplx q_half_pow(long c) const { return ipow(qh, c); }

    // X(x) = exp(i pi x / (2 omega))
    Cplx X(Cplx x) const { return std::exp(kI * kPi * x / (2.0 * omega)); }
};

// --- elliptic parameters ------------------------------------------------------

struct EllipticParams {
    Cplx tau;
    Cplx eta;
    Cplx p;      // exp(2 pi i tau)
    Cplx q_ell;  // exp(4 pi i eta)
    TruncationConfig trunc;

    explicit EllipticParams(Cplx tau_ = Cplx(0.0, 1.0), Cplx eta_ = Cplx(0.17, 0.11),
                            TruncationConfig tc = TruncationConfig())
        : tau(tau_), eta(eta_), trunc(tc) {
        if (tau.imag() <= 0.0) throw ConfigError("EllipticParams: Im(tau) must be positive");
        p = std::exp(2.0 * kPi * kI * tau);
        q_ell = std::exp(4.0 * kPi * kI * eta);
        if (std::abs(p) >= 1.0 || std::abs(q_ell) >= 1.0)
            throw ConfigError("EllipticParams: need |p| < 1 and |q| < 1");
        TruncationConfig::check_tail(std::abs(std::exp(kI * kPi * tau / 2.0)),
                                     trunc.theta_terms, trunc.target_tol, "theta tail");
        TruncationConfig::check_tail(std::max(std::abs(p), std::abs(q_ell)),
                                     trunc.gamma_terms, trunc.target_tol, "gamma tail");
        for (int a = 1; a <= 4; ++a)
            if (std::abs(theta(a, eta, tau, trunc)) < 1e-8)
                throw ConfigError("EllipticParams: theta_a(eta) vanishes, structure constants undefined");
    }

    Cplx theta_tau(int a, Cplx z) const { return theta(a, z, tau, trunc); }
    Cplx btheta(int a, Cplx z) const { return bar_theta(a, z, tau, trunc); }

    // R(tau) = p^{-1/8} / (i (p;p)_inf) with the branch p^{-1/8} = exp(-i pi tau/4)
    // and (p;p)_inf truncated at gamma_terms, consistently with the gamma product.
    Cplx r_tau() const {
        return std::exp(-kI * kPi * tau / 4.0) / (kI * pochhammer_inf(p, trunc.gamma_terms));
    }
};

// Gamma(z | tau, 2 eta) as the double product over 0 <= n, m <= gamma_terms.
inline Cplx elliptic_gamma(Cplx z, const EllipticParams& par) {
    const int N = par.trunc.gamma_terms;
    const Cplx em = std::exp(-2.0 * kPi * kI * z);
    const Cplx ep = std::exp(2.0 * kPi * kI * z);
    Cplx acc(1.0, 0.0);
    Cplx pn(1.0, 0.0);
    for (int n = 0; n <= N; ++n) {
        Cplx qm(1.0, 0.0);
        for (int m = 0; m <= N; ++m) {
            Cplx num = Cplx(1.0, 0.0) - em * pn * par.p * qm * par.q_ell;
            Cplx den = Cplx(1.0, 0.0) - ep * pn * qm;
            if (std::abs(den) < par.trunc.target_tol)
                throw PoleProximity("elliptic_gamma: denominator factor below target_tol");
            acc *= num / den;
            qm *= par.q_ell;
        }
        pn *= par.p;
    }
    return acc;
}

// Shorthand product Gamma(+-z +-x + c) of four gamma factors.
inline Cplx elliptic_gamma4(Cplx z, Cplx x, Cplx c, const EllipticParams& par) {
    return elliptic_gamma(c + z + x, par) * elliptic_gamma(c + z - x, par) *
           elliptic_gamma(c - z + x, par) * elliptic_gamma(c - z - x, par);
}

// --- quantized D-function -----------------------------------------------------

// D_{m omega'}(x) = prod_{l=0}^{m-1} (X q^{(m-1)/2-l} + X^{-1} q^{-(m-1)/2+l}),
// the finite-product value of the D-function at quantized first argument.
inline Cplx dfunc_quantized(int m, Cplx x, const ModularParams& par) {
    if (m < 0) throw ConfigError("dfunc_quantized: m must be nonnegative");
    const Cplx X = par.X(x);
    const Cplx Xi = 1.0 / X;
    Cplx acc(1.0, 0.0);
    for (int l = 0; l < m; ++l) {
        long e = m - 1 - 2 * l;  // 2 * ((m-1)/2 - l)
        acc *= X * par.q_half_pow(e) + Xi * par.q_half_pow(-e);
    }
    return acc;
}

}  // namespace ybx
