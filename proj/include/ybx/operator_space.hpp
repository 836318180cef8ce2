// Bases, dense linear operators, block operators with operator entries,
// tensor products and embeddings, and collocation fitting.
//
// Index conventions (fixed across the library, also in the JSON schema):
//   * tensor factors are ordered space1 (slowest) x space2 (x space3),
//   * finite monomial spaces are ordered by descending degree where they enter
//     an R-matrix (e_1 = z^n, ..., e_{n+1} = 1); plain operator carriers use
//     ascending degree z^0..z^N,
//   * Laurent windows are ordered by descending exponent.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar.hpp"
#include "special_functions.hpp"

namespace ybx {

enum class BasisKind { Monomial, Laurent, ThetaPlus, Tensor };
enum class Parity { Even, Odd, Both };

struct BasisDescriptor {
    BasisKind kind = BasisKind::Monomial;
    int dim = 0;
    std::vector<long> labels;            // exponent per index (monomial/laurent)
    int order_n = 0;                     // theta_plus order
    std::vector<std::string> tensor_labels;

    static BasisDescriptor monomial(int N) {
        if (N < 0) throw ConfigError("monomial basis: N must be >= 0");
        BasisDescriptor b;
        b.kind = BasisKind::Monomial;
        b.dim = N + 1;
        for (int k = 0; k <= N; ++k) b.labels.push_back(k);
        return b;
    }

    // Exponents descending from W' to -W', where W' matches the requested
    // parity (step 2) or spans every integer in [-W, W] (step 1).
    static BasisDescriptor laurent(int W, Parity par) {
        if (W < 0) throw ConfigError("laurent basis: W must be >= 0");
        BasisDescriptor b;
        b.kind = BasisKind::Laurent;
        if (par == Parity::Both) {
            for (long j = W; j >= -W; --j) b.labels.push_back(j);
        } else {
            long top = W;
            if ((par == Parity::Even) != (W % 2 == 0)) top = W - 1;
            for (long j = top; j >= -top; j -= 2) b.labels.push_back(j);
        }
        b.dim = int(b.labels.size());
        return b;
    }

    static BasisDescriptor theta_plus(int n) {
        if (n < 0) throw ConfigError("theta_plus basis: n must be >= 0");
        BasisDescriptor b;
        b.kind = BasisKind::ThetaPlus;
        b.dim = n + 1;
        b.order_n = n;
        for (long j = 1; j <= n + 1; ++j) b.labels.push_back(j);
        return b;
    }

    static BasisDescriptor tensor_of(const BasisDescriptor& a, const BasisDescriptor& c) {
        BasisDescriptor b;
        b.kind = BasisKind::Tensor;
        b.dim = a.dim * c.dim;
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < c.dim; ++j)
                b.tensor_labels.push_back(a.label_str(i) + "*" + c.label_str(j));
        return b;
    }

    int index_of_label(long lab) const {
        for (int i = 0; i < dim; ++i)
            if (labels[i] == lab) return i;
        return -1;
    }

    std::string label_str(int i) const {
        switch (kind) {
            case BasisKind::Monomial: return "z^" + std::to_string(labels[i]);
            case BasisKind::Laurent: return "X^" + std::to_string(labels[i]);
            case BasisKind::ThetaPlus: return "phi_" + std::to_string(labels[i]);
            case BasisKind::Tensor: return tensor_labels[i];
        }
        return "?";
    }

    friend bool operator==(const BasisDescriptor& a, const BasisDescriptor& b) {
        return a.kind == b.kind && a.dim == b.dim && a.labels == b.labels &&
               a.order_n == b.order_n;
    }
    friend bool operator!=(const BasisDescriptor& a, const BasisDescriptor& b) {
        return !(a == b);
    }
};

// Dense matrix of field values carrying its domain/codomain bases and a
// per-column truncation taint: a column is tainted when the operator's action
// on that basis vector touched a truncated tail, so exact assertions must
// skip it.
template <class F>
struct LinOp {
    BasisDescriptor domain, codomain;
    std::vector<F> a;                 // row-major, codomain.dim x domain.dim
    std::vector<uint8_t> col_taint;

    LinOp() = default;
    LinOp(BasisDescriptor dom, BasisDescriptor cod)
        : domain(std::move(dom)), codomain(std::move(cod)),
          a(size_t(codomain.dim) * domain.dim, field_traits<F>::zero()),
          col_taint(domain.dim, 0) {}

    static LinOp identity(const BasisDescriptor& b) {
        LinOp m(b, b);
        for (int i = 0; i < b.dim; ++i) m.at(i, i) = field_traits<F>::one();
        return m;
    }
    static LinOp zero(const BasisDescriptor& dom, const BasisDescriptor& cod) {
        return LinOp(dom, cod);
    }
    static LinOp scalar(const BasisDescriptor& b, const F& s) {
        LinOp m(b, b);
        for (int i = 0; i < b.dim; ++i) m.at(i, i) = s;
        return m;
    }

    int rows() const { return codomain.dim; }
    int cols() const { return domain.dim; }
    F& at(int r, int c) { return a[size_t(r) * domain.dim + c]; }
    const F& at(int r, int c) const { return a[size_t(r) * domain.dim + c]; }

    bool any_taint() const {
        for (auto t : col_taint)
            if (t) return true;
        return false;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a) m = std::max(m, field_traits<F>::abs_approx(x));
        return m;
    }

    std::vector<F> apply(const std::vector<F>& v) const {
        if (int(v.size()) != cols()) throw DimensionMismatch("LinOp apply: vector length");
        std::vector<F> out(rows(), field_traits<F>::zero());
        for (int i = 0; i < rows(); ++i)
            for (int j = 0; j < cols(); ++j)
                if (!field_traits<F>::is_zero(at(i, j))) out[i] += at(i, j) * v[j];
        return out;
    }

    friend LinOp operator*(const LinOp& A, const LinOp& B) {
        if (A.domain != B.codomain)
            throw DimensionMismatch("LinOp compose: A.domain != B.codomain");
        LinOp C(B.domain, A.codomain);
        for (int i = 0; i < A.rows(); ++i)
            for (int k = 0; k < A.cols(); ++k) {
                const F& aik = A.at(i, k);
                if (field_traits<F>::is_zero(aik)) continue;
                for (int j = 0; j < B.cols(); ++j) {
                    const F& bkj = B.at(k, j);
                    if (field_traits<F>::is_zero(bkj)) continue;
                    C.at(i, j) += aik * bkj;
                }
            }
        for (int j = 0; j < B.cols(); ++j) {
            uint8_t t = B.col_taint[j];
            if (!t)
                for (int r = 0; r < B.rows() && !t; ++r)
                    if (!field_traits<F>::is_zero(B.at(r, j)) && A.col_taint[r]) t = 1;
            C.col_taint[j] = t;
        }
        return C;
    }

    friend LinOp operator+(const LinOp& A, const LinOp& B) {
        if (A.domain != B.domain || A.codomain != B.codomain)
            throw DimensionMismatch("LinOp add: shapes differ");
        LinOp C = A;
        for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
        for (int j = 0; j < C.cols(); ++j) C.col_taint[j] |= B.col_taint[j];
        return C;
    }

    friend LinOp operator-(const LinOp& A, const LinOp& B) {
        if (A.domain != B.domain || A.codomain != B.codomain)
            throw DimensionMismatch("LinOp sub: shapes differ");
        LinOp C = A;
        for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
        for (int j = 0; j < C.cols(); ++j) C.col_taint[j] |= B.col_taint[j];
        return C;
    }

    friend LinOp operator*(const F& s, const LinOp& A) {
        LinOp C = A;
        for (auto& x : C.a) x = s * x;
        return C;
    }

    // Max |A - B| over columns untainted in both (exact fields compare exactly:
    // the caller should test == zero via max_abs() == 0).
    double max_abs_diff_untainted(const LinOp& B) const {
        if (domain != B.domain || codomain != B.codomain)
            throw DimensionMismatch("LinOp diff: shapes differ");
        double m = 0.0;
        for (int j = 0; j < cols(); ++j) {
            if (col_taint[j] || B.col_taint[j]) continue;
            for (int i = 0; i < rows(); ++i) {
                F d = at(i, j) - B.at(i, j);
                m = std::max(m, field_traits<F>::abs_approx(d));
            }
        }
        return m;
    }

    bool equal_untainted(const LinOp& B) const {
        if (domain != B.domain || codomain != B.codomain) return false;
        for (int j = 0; j < cols(); ++j) {
            if (col_taint[j] || B.col_taint[j]) continue;
            for (int i = 0; i < rows(); ++i)
                if (!(field_traits<F>::is_zero(at(i, j) - B.at(i, j)))) return false;
        }
        return true;
    }
};

template <class F>
LinOp<F> tensor(const LinOp<F>& A, const LinOp<F>& B) {
    LinOp<F> C(BasisDescriptor::tensor_of(A.domain, B.domain),
               BasisDescriptor::tensor_of(A.codomain, B.codomain));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            const F& aij = A.at(i, j);
            if (field_traits<F>::is_zero(aij)) continue;
            for (int k = 0; k < B.rows(); ++k)
                for (int l = 0; l < B.cols(); ++l) {
                    const F& bkl = B.at(k, l);
                    if (field_traits<F>::is_zero(bkl)) continue;
                    C.at(i * B.rows() + k, j * B.cols() + l) = aij * bkl;
                }
        }
    for (int j = 0; j < A.cols(); ++j)
        for (int l = 0; l < B.cols(); ++l)
            C.col_taint[size_t(j) * B.cols() + l] = A.col_taint[j] | B.col_taint[l];
    return C;
}

// P(a (x) b) = b (x) a on V_d (x) V_d.
template <class F>
LinOp<F> permutation(int d) {
    BasisDescriptor s = BasisDescriptor::monomial(d - 1);
    LinOp<F> P(BasisDescriptor::tensor_of(s, s), BasisDescriptor::tensor_of(s, s));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            P.at(j * d + i, i * d + j) = field_traits<F>::one();
    return P;
}

// Insert op (acting on the pair `which` of spaces with dims d1,d2,d3) into the
// triple product, identity on the omitted factor. Index order: space1 slowest.
template <class F>
LinOp<F> embed_pair(const LinOp<F>& op, int d1, int d2, int d3, int which) {
    int da = 0, db = 0;
    if (which == 12) { da = d1; db = d2; }
    else if (which == 13) { da = d1; db = d3; }
    else if (which == 23) { da = d2; db = d3; }
    else throw ConfigError("embed_pair: which must be 12, 13, or 23");
    if (op.rows() != da * db || op.cols() != da * db)
        throw DimensionMismatch("embed_pair: operator shape does not match pair dims");

    int D = d1 * d2 * d3;
    BasisDescriptor flat = BasisDescriptor::monomial(D - 1);
    flat.kind = BasisKind::Tensor;
    flat.tensor_labels.assign(size_t(D), "");
    LinOp<F> out(flat, flat);
    auto idx = [&](int i1, int i2, int i3) { return (i1 * d2 + i2) * d3 + i3; };
    for (int i1 = 0; i1 < d1; ++i1)
        for (int i2 = 0; i2 < d2; ++i2)
            for (int i3 = 0; i3 < d3; ++i3)
                for (int j1 = 0; j1 < d1; ++j1)
                    for (int j2 = 0; j2 < d2; ++j2)
                        for (int j3 = 0; j3 < d3; ++j3) {
                            F v = field_traits<F>::zero();
                            if (which == 12 && i3 == j3)
                                v = op.at(i1 * d2 + i2, j1 * d2 + j2);
                            else if (which == 13 && i2 == j2)
                                v = op.at(i1 * d3 + i3, j1 * d3 + j3);
                            else if (which == 23 && i1 == j1)
                                v = op.at(i2 * d3 + i3, j2 * d3 + j3);
                            if (!field_traits<F>::is_zero(v))
                                out.at(idx(i1, i2, i3), idx(j1, j2, j3)) = v;
                        }
    return out;
}

// --- elementary operators ----------------------------------------------------

// z^k -> z^{k+1}; the top degree truncates to zero and taints its column.
template <class F>
LinOp<F> mult_by_coordinate(const BasisDescriptor& basis) {
    if (basis.kind != BasisKind::Monomial)
        throw ConfigError("mult_by_coordinate: monomial basis required");
    LinOp<F> m(basis, basis);
    for (int k = 0; k + 1 < basis.dim; ++k) m.at(k + 1, k) = field_traits<F>::one();
    m.col_taint[basis.dim - 1] = 1;
    return m;
}

// z^k -> k z^{k-1}, exact on the whole window.
template <class F>
LinOp<F> derivative(const BasisDescriptor& basis) {
    if (basis.kind != BasisKind::Monomial)
        throw ConfigError("derivative: monomial basis required");
    LinOp<F> m(basis, basis);
    for (int k = 1; k < basis.dim; ++k) m.at(k - 1, k) = field_traits<F>::from_int(k);
    return m;
}

// General monomial multiplication z^p (p >= 0), truncating columns that leave
// the window.
template <class F>
LinOp<F> mult_by_power(const BasisDescriptor& basis, int p) {
    if (basis.kind != BasisKind::Monomial)
        throw ConfigError("mult_by_power: monomial basis required");
    if (p < 0) throw ConfigError("mult_by_power: p must be >= 0");
    LinOp<F> m(basis, basis);
    for (int k = 0; k < basis.dim; ++k) {
        if (k + p < basis.dim)
            m.at(k + p, k) = field_traits<F>::one();
        else if (p > 0)
            m.col_taint[k] = 1;
    }
    return m;
}

// Shift operator e^{c omega' d/dx}: diagonal with eigenvalue q^{c j / 2} on X^j.
inline LinOp<Cplx> laurent_shift(long c, const BasisDescriptor& basis,
                                 const ModularParams& par) {
    if (basis.kind != BasisKind::Laurent)
        throw ConfigError("laurent_shift: laurent basis required");
    LinOp<Cplx> m(basis, basis);
    for (int i = 0; i < basis.dim; ++i) m.at(i, i) = par.q_half_pow(c * basis.labels[i]);
    return m;
}

// Multiplication by X^k: shifts the Laurent exponent; exponents leaving the
// window truncate to zero and taint their column.
inline LinOp<Cplx> laurent_mult(long k, const BasisDescriptor& basis) {
    if (basis.kind != BasisKind::Laurent)
        throw ConfigError("laurent_mult: laurent basis required");
    LinOp<Cplx> m(basis, basis);
    for (int j = 0; j < basis.dim; ++j) {
        int target = basis.index_of_label(basis.labels[j] + k);
        if (target >= 0)
            m.at(target, j) = Cplx(1.0, 0.0);
        else if (k != 0)
            m.col_taint[j] = 1;
    }
    return m;
}

// --- block operators -----------------------------------------------------------

// Matrix with operator entries: outer_dim x outer_dim blocks, every block a
// LinOp on one shared inner space.
template <class F>
struct BlockOp {
    int outer_dim = 0;
    BasisDescriptor inner_dom, inner_cod;
    std::vector<LinOp<F>> blocks;  // row-major

    BlockOp() = default;
    BlockOp(int d, const BasisDescriptor& dom, const BasisDescriptor& cod)
        : outer_dim(d), inner_dom(dom), inner_cod(cod),
          blocks(size_t(d) * d, LinOp<F>::zero(dom, cod)) {}

    LinOp<F>& block(int i, int j) { return blocks[size_t(i) * outer_dim + j]; }
    const LinOp<F>& block(int i, int j) const { return blocks[size_t(i) * outer_dim + j]; }

    static BlockOp identity(int d, const BasisDescriptor& b) {
        BlockOp m(d, b, b);
        for (int i = 0; i < d; ++i) m.block(i, i) = LinOp<F>::identity(b);
        return m;
    }

    // Diagonal block operator from per-index inner operators.
    static BlockOp diagonal(const std::vector<LinOp<F>>& ops) {
        BlockOp m(int(ops.size()), ops[0].domain, ops[0].codomain);
        for (int i = 0; i < m.outer_dim; ++i) m.block(i, i) = ops[i];
        return m;
    }

    // Numeric outer matrix acting as scalars on the inner space.
    static BlockOp from_numeric(const std::vector<F>& entries, int d,
                                const BasisDescriptor& inner) {
        BlockOp m(d, inner, inner);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (!field_traits<F>::is_zero(entries[size_t(i) * d + j]))
                    m.block(i, j) = LinOp<F>::scalar(inner, entries[size_t(i) * d + j]);
        return m;
    }

    friend BlockOp operator*(const BlockOp& A, const BlockOp& B) {
        if (A.outer_dim != B.outer_dim)
            throw DimensionMismatch("BlockOp compose: outer dims differ");
        BlockOp C(A.outer_dim, B.inner_dom, A.inner_cod);
        for (int i = 0; i < A.outer_dim; ++i)
            for (int j = 0; j < A.outer_dim; ++j) {
                LinOp<F> acc = LinOp<F>::zero(B.inner_dom, A.inner_cod);
                for (int k = 0; k < A.outer_dim; ++k)
                    acc = acc + A.block(i, k) * B.block(k, j);
                C.block(i, j) = acc;
            }
        return C;
    }

    friend BlockOp operator-(const BlockOp& A, const BlockOp& B) {
        BlockOp C = A;
        for (size_t t = 0; t < C.blocks.size(); ++t) C.blocks[t] = C.blocks[t] - B.blocks[t];
        return C;
    }

    // Tensor-basis matrix, outer index slowest: flat row (i * d_inner + a).
    LinOp<F> flatten() const {
        int di = inner_cod.dim, dj = inner_dom.dim;
        BasisDescriptor dom = BasisDescriptor::tensor_of(outer_basis(), inner_dom);
        BasisDescriptor cod = BasisDescriptor::tensor_of(outer_basis(), inner_cod);
        LinOp<F> out(dom, cod);
        for (int i = 0; i < outer_dim; ++i)
            for (int j = 0; j < outer_dim; ++j) {
                const LinOp<F>& b = block(i, j);
                for (int r = 0; r < di; ++r)
                    for (int c = 0; c < dj; ++c)
                        out.at(i * di + r, j * dj + c) = b.at(r, c);
                for (int c = 0; c < dj; ++c)
                    out.col_taint[size_t(j) * dj + c] |= b.col_taint[c];
            }
        return out;
    }

    // Inverse round trip of flatten().
    static BlockOp from_flat(const LinOp<F>& flat, int outer_dim,
                             const BasisDescriptor& inner_dom,
                             const BasisDescriptor& inner_cod) {
        BlockOp m(outer_dim, inner_dom, inner_cod);
        int di = inner_cod.dim, dj = inner_dom.dim;
        for (int i = 0; i < outer_dim; ++i)
            for (int j = 0; j < outer_dim; ++j)
                for (int r = 0; r < di; ++r)
                    for (int c = 0; c < dj; ++c)
                        m.block(i, j).at(r, c) = flat.at(i * di + r, j * dj + c);
        return m;
    }

    BasisDescriptor outer_basis() const {
        BasisDescriptor b = BasisDescriptor::monomial(outer_dim - 1);
        b.kind = BasisKind::Tensor;
        b.tensor_labels.assign(size_t(outer_dim), "e");
        for (int i = 0; i < outer_dim; ++i)
            b.tensor_labels[i] = "e_" + std::to_string(i + 1);
        return b;
    }
};

// (I + N)^{-1} for N strictly triangular in the outer index: Neumann sum,
// nilpotent after outer_dim terms. Diagonal blocks must be identities.
template <class F>
BlockOp<F> invert_unitriangular(const BlockOp<F>& Z) {
    BlockOp<F> N = Z;
    for (int i = 0; i < Z.outer_dim; ++i)
        N.block(i, i) = N.block(i, i) - LinOp<F>::identity(Z.inner_dom);
    BlockOp<F> acc = BlockOp<F>::identity(Z.outer_dim, Z.inner_dom);
    BlockOp<F> pw = BlockOp<F>::identity(Z.outer_dim, Z.inner_dom);
    for (int k = 1; k < Z.outer_dim; ++k) {
        pw = pw * N;
        if (k % 2 == 1)
            acc = acc - pw;
        else {
            for (size_t t = 0; t < acc.blocks.size(); ++t)
                acc.blocks[t] = acc.blocks[t] + pw.blocks[t];
        }
    }
    return acc;
}

// --- collocation ----------------------------------------------------------------

struct CollocationGrid {
    std::vector<Cplx> points;
    std::vector<Cplx> validation;

    // Default Theta+ grid: n+1 fit points plus two validation points along a
    // slanted line that avoids lattice symmetry.
    static CollocationGrid for_theta_plus(int n) {
        CollocationGrid g;
        for (int s = 0; s <= n; ++s) g.points.push_back(Cplx(0.13 + 0.06 * s, 0.02 * s));
        for (int s = n + 1; s <= n + 2; ++s)
            g.validation.push_back(Cplx(0.13 + 0.06 * s, 0.02 * s));
        return g;
    }
};

struct FitResult {
    std::vector<Cplx> coeffs;
    double residual = 0.0;      // max abs mismatch at validation points / scale
    double residual_abs = 0.0;  // the un-normalized mismatch
    double scale = 0.0;         // max |value| seen over fit + validation points
    double cond = 0.0;
};

// Solve sum_j c_j basis_j(z_s) = F(z_s) over the grid and measure membership
// at held-out validation points. basis(j, z) evaluates the j-th basis element.
inline FitResult collocation_fit(const std::function<Cplx(int, Cplx)>& basis, int nbasis,
                                 const std::function<Cplx(Cplx)>& F,
                                 const CollocationGrid& grid, double cond_bound = 1e8) {
    const int np = int(grid.points.size());
    if (np < nbasis) throw ConfigError("collocation_fit: grid smaller than basis");
    CMat A(np, nbasis);
    CVec b(np);
    for (int s = 0; s < np; ++s) {
        for (int j = 0; j < nbasis; ++j) A(s, j) = basis(j, grid.points[s]);
        b(s) = F(grid.points[s]);
    }
    FitResult out;
    out.cond = cond_svd(A);
    CVec c = guarded_solve(A, b, cond_bound, "collocation_fit");
    out.coeffs.assign(c.data(), c.data() + c.size());

    double scale = b.cwiseAbs().maxCoeff();
    for (Cplx zv : grid.validation) {
        Cplx fit(0.0, 0.0);
        for (int j = 0; j < nbasis; ++j) fit += out.coeffs[j] * basis(j, zv);
        Cplx truth = F(zv);
        scale = std::max(scale, std::abs(truth));
        out.residual_abs = std::max(out.residual_abs, std::abs(fit - truth));
    }
    out.scale = scale;
    out.residual = scale > 0.0 ? out.residual_abs / scale : out.residual_abs;
    return out;
}

}  // namespace ybx
