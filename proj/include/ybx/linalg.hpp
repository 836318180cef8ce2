// Dense complex solves used by collocation and basis changes (Eigen-backed).
#pragma once

#include <Eigen/Dense>

#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace ybx {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline double cond_svd(const CMat& a) {
    Eigen::JacobiSVD<CMat> svd(a);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    double smax = svd.singularValues()(0);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

// Square solve or least squares, with a condition-number guard.
inline CVec guarded_solve(const CMat& a, const CVec& b, double cond_bound,
                          const char* what) {
    double c = cond_svd(a);
    if (!(c < cond_bound))
        throw IllConditioned(std::string(what) + ": cond " + std::to_string(c) +
                             " exceeds bound " + std::to_string(cond_bound));
    if (a.rows() == a.cols()) return a.fullPivLu().solve(b);
    return a.colPivHouseholderQr().solve(b);
}

inline CMat guarded_inverse(const CMat& a, double cond_bound, const char* what) {
    double c = cond_svd(a);
    if (!(c < cond_bound))
        throw IllConditioned(std::string(what) + ": cond " + std::to_string(c) +
                             " exceeds bound " + std::to_string(cond_bound));
    return a.fullPivLu().inverse();
}

}  // namespace ybx
