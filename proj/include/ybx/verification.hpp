// Model-agnostic residual computations: Yang-Baxter residuals, scalar-normalized
// equality, commutant residuals, and the report record they all produce.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "operator_space.hpp"

namespace ybx {

struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    double relative = 0.0;  // max_abs / max entry magnitude of the reference side
    bool passed = false;
    bool exact_zero = false;  // set in rational mode when the residual is identically 0
    std::string context;
    double runtime_ms = 0.0;

    std::string summary() const {
        std::ostringstream os;
        os << (passed ? "[PASS] " : "[FAIL] ") << name << "  max_abs=" << max_abs
           << " rel=" << relative;
        if (exact_zero) os << " (exact zero)";
        if (!context.empty()) os << "  [" << context << "]";
        return os.str();
    }
};

// Residual of R12 R13 R23 - R23 R13 R12 on the d1 d2 d3 tensor space. The
// caller supplies R12 built at u-v, R13 at u, R23 at v.
template <class F>
ResidualReport ybe_residual(const LinOp<F>& R12, const LinOp<F>& R13, const LinOp<F>& R23,
                            int d1, int d2, int d3, double tol,
                            const std::string& context = "") {
    LinOp<F> E12 = embed_pair(R12, d1, d2, d3, 12);
    LinOp<F> E13 = embed_pair(R13, d1, d2, d3, 13);
    LinOp<F> E23 = embed_pair(R23, d1, d2, d3, 23);
    LinOp<F> lhs = E12 * (E13 * E23);
    LinOp<F> rhs = E23 * (E13 * E12);
    LinOp<F> diff = lhs - rhs;
    ResidualReport rep;
    rep.name = "ybe_residual";
    rep.context = context;
    rep.max_abs = diff.max_abs();
    double denom = rhs.max_abs();
    rep.relative = denom > 0.0 ? rep.max_abs / denom : rep.max_abs;
    if constexpr (field_traits<F>::exact) {
        rep.exact_zero = rep.max_abs == 0.0;
        rep.passed = rep.exact_zero;
    } else {
        rep.passed = rep.relative <= tol;
    }
    return rep;
}

// Pivot of the largest-modulus entry; ties break to the lowest flat index.
template <class F>
size_t pivot_index(const LinOp<F>& A) {
    size_t best = 0;
    double bm = -1.0;
    for (size_t t = 0; t < A.a.size(); ++t) {
        double m = field_traits<F>::abs_approx(A.a[t]);
        if (m > bm) { bm = m; best = t; }
    }
    return best;
}

// A == s * B for one scalar s. Float mode normalizes both sides by their pivot
// entries; rational mode uses the exact ratio of the pivot entries.
template <class F>
ResidualReport equal_up_to_scalar(const LinOp<F>& A, const LinOp<F>& B, double tol,
                                  const std::string& context = "") {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionMismatch("equal_up_to_scalar: shapes differ");
    if (B.max_abs() == 0.0) throw ZeroMatrix("equal_up_to_scalar: reference side is zero");
    ResidualReport rep;
    rep.name = "equal_up_to_scalar";
    rep.context = context;
    size_t pb = pivot_index(B);
    if constexpr (field_traits<F>::exact) {
        F ratio = A.a[pb] / B.a[pb];
        double m = 0.0;
        for (size_t t = 0; t < A.a.size(); ++t)
            m = std::max(m, field_traits<F>::abs_approx(A.a[t] - ratio * B.a[t]));
        rep.max_abs = m;
        rep.relative = m;
        rep.exact_zero = m == 0.0;
        rep.passed = rep.exact_zero;
    } else {
        size_t pa = pivot_index(A);
        F na = A.a[pa], nb = B.a[pb];
        if (field_traits<F>::abs_approx(na) == 0.0)
            throw ZeroMatrix("equal_up_to_scalar: left side is zero");
        double m = 0.0;
        for (size_t t = 0; t < A.a.size(); ++t)
            m = std::max(m, field_traits<F>::abs_approx(A.a[t] / na - B.a[t] / nb));
        rep.max_abs = m;
        rep.relative = m;  // both sides normalized to pivot magnitude 1
        rep.passed = m <= tol;
    }
    return rep;
}

// Co-product pair for symmetry checks: additive Delta(G) = G1 (x) 1 + 1 (x) G2,
// multiplicative Delta(G) = G1 (x) G2 (group-like, used for the trig K-grading).
template <class F>
struct CoproductPair {
    LinOp<F> g1, g2;
    bool multiplicative = false;
    std::string label;
};

template <class F>
ResidualReport commutant_residual(const LinOp<F>& R,
                                  const std::vector<CoproductPair<F>>& gens, double tol,
                                  const std::string& context = "") {
    ResidualReport rep;
    rep.name = "commutant_residual";
    rep.context = context;
    double m = 0.0, scale = 0.0;
    for (const auto& g : gens) {
        LinOp<F> delta =
            g.multiplicative
                ? tensor(g.g1, g.g2)
                : tensor(g.g1, LinOp<F>::identity(g.g2.domain)) +
                      tensor(LinOp<F>::identity(g.g1.domain), g.g2);
        if (delta.rows() != R.rows())
            throw DimensionMismatch("commutant_residual: generator shape");
        delta.domain = R.domain;
        delta.codomain = R.codomain;
        LinOp<F> comm = R * delta - delta * R;
        m = std::max(m, comm.max_abs());
        scale = std::max(scale, (R * delta).max_abs());
    }
    rep.max_abs = m;
    rep.relative = scale > 0.0 ? m / scale : m;
    if constexpr (field_traits<F>::exact) {
        rep.exact_zero = m == 0.0;
        rep.passed = rep.exact_zero;
    } else {
        rep.passed = rep.relative <= tol;
    }
    return rep;
}

}  // namespace ybx
