// JSON serialization of matrices and reports.
//
// Matrix schema: {"model", "spins", "u", "shift_convention", "field"
// ("rational"|"complex"), "rows", "cols", "basis", "entries"} with entries
// row-major; rationals as canonical "p/q" strings (bit-exact round trip),
// complex values as [re, im]. Operator-valued entries use "basis2" plus nested
// row-major matrices per entry.
#pragma once

#include <json.hpp>

#include "operator_space.hpp"
#include "verification.hpp"

namespace ybx {

using nlohmann::json;

struct MatrixMeta {
    std::string model;
    std::vector<int> spins;
    std::string u;
    std::string shift_convention;
};

inline json scalar_to_json(const Rat& x) { return json(x.str()); }
inline json scalar_to_json(const Cplx& x) { return json::array({x.real(), x.imag()}); }

inline Rat rat_from_json(const json& j) { return Rat::parse(j.get<std::string>()); }
inline Cplx cplx_from_json(const json& j) { return Cplx(j.at(0).get<double>(), j.at(1).get<double>()); }

template <class F>
json matrix_to_json(const LinOp<F>& m, const MatrixMeta& meta) {
    json out;
    out["model"] = meta.model;
    out["spins"] = meta.spins;
    out["u"] = meta.u;
    out["shift_convention"] = meta.shift_convention;
    out["field"] = field_traits<F>::name();
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    json basis = json::array();
    for (int i = 0; i < m.domain.dim; ++i) basis.push_back(m.domain.label_str(i));
    out["basis"] = basis;
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.at(r, c)));
        rows.push_back(row);
    }
    out["entries"] = rows;
    return out;
}

// Operator-valued emission: outer block matrix whose entries are matrices on
// the second space.
template <class F>
json blockop_to_json(const BlockOp<F>& b, const MatrixMeta& meta) {
    json out;
    out["model"] = meta.model;
    out["spins"] = meta.spins;
    out["u"] = meta.u;
    out["shift_convention"] = meta.shift_convention;
    out["field"] = field_traits<F>::name();
    out["rows"] = b.outer_dim;
    out["cols"] = b.outer_dim;
    json basis2 = json::array();
    for (int i = 0; i < b.inner_dom.dim; ++i) basis2.push_back(b.inner_dom.label_str(i));
    out["basis2"] = basis2;
    json rows = json::array();
    for (int i = 0; i < b.outer_dim; ++i) {
        json row = json::array();
        for (int j = 0; j < b.outer_dim; ++j) {
            const LinOp<F>& blk = b.block(i, j);
            json inner = json::array();
            for (int r = 0; r < blk.rows(); ++r) {
                json irow = json::array();
                for (int c = 0; c < blk.cols(); ++c)
                    irow.push_back(scalar_to_json(blk.at(r, c)));
                inner.push_back(irow);
            }
            row.push_back(inner);
        }
        rows.push_back(row);
    }
    out["entries"] = rows;
    return out;
}

template <class F>
LinOp<F> matrix_from_json(const json& j) {
    int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    std::string field = j.at("field").get<std::string>();
    if (field != field_traits<F>::name())
        throw ConfigError("matrix_from_json: field mismatch, file has " + field);
    BasisDescriptor dom = BasisDescriptor::monomial(cols - 1);
    BasisDescriptor cod = BasisDescriptor::monomial(rows - 1);
    dom.kind = BasisKind::Tensor;
    dom.tensor_labels.assign(size_t(cols), "");
    if (j.contains("basis"))
        for (int c = 0; c < cols && c < int(j["basis"].size()); ++c)
            dom.tensor_labels[c] = j["basis"][c].get<std::string>();
    cod.kind = BasisKind::Tensor;
    cod.tensor_labels.assign(size_t(rows), "");
    LinOp<F> m(dom, cod);
    const json& e = j.at("entries");
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if constexpr (field_traits<F>::exact)
                m.at(r, c) = rat_from_json(e.at(r).at(c));
            else
                m.at(r, c) = cplx_from_json(e.at(r).at(c));
        }
    return m;
}

inline json report_to_json(const ResidualReport& r) {
    json out;
    out["name"] = r.name;
    out["max_abs"] = r.max_abs;
    out["relative"] = r.relative;
    out["passed"] = r.passed;
    out["exact_zero"] = r.exact_zero;
    out["context"] = r.context;
    out["runtime_ms"] = r.runtime_ms;
    return out;
}

inline json reports_to_json(const std::vector<ResidualReport>& reps, uint64_t seed,
                            const std::vector<std::string>& conventions) {
    json out;
    out["seed"] = seed;
    out["conventions"] = conventions;
    json arr = json::array();
    for (const auto& r : reps) arr.push_back(report_to_json(r));
    out["reports"] = arr;
    return out;
}

inline ResidualReport report_from_json(const json& j) {
    ResidualReport r;
    r.name = j.at("name").get<std::string>();
    r.max_abs = j.at("max_abs").get<double>();
    r.relative = j.at("relative").get<double>();
    r.passed = j.at("passed").get<bool>();
    r.exact_zero = j.value("exact_zero", false);
    r.context = j.value("context", "");
    r.runtime_ms = j.value("runtime_ms", 0.0);
    return r;
}

}  // namespace ybx
