#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include <dfscreen/errors.hpp>

namespace dfscreen {

inline double mean(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double sample_sd(const std::vector<double>& v)
{
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Linear-interpolation quantile (R type 7).
inline double quantile(std::vector<double> v, double q)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

/// Centers each column and scales it to unit sample variance.
inline Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x)
{
    if (x.rows() < 2) throw ContractError("standardize: need at least two rows");
    Eigen::MatrixXd out = x;
    const double denom = static_cast<double>(x.rows() - 1);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        out.col(j).array() -= out.col(j).mean();
        const double sd = std::sqrt(out.col(j).squaredNorm() / denom);
        if (!(sd > 0.0)) {
            throw ContractError("standardize: column " + std::to_string(j) + " is constant");
        }
        out.col(j) /= sd;
    }
    return out;
}

/// Throws ContractError naming the first column whose mean is not 0 or whose
/// sample variance is not 1, to within `tol`.
inline void check_standardized(const Eigen::MatrixXd& x, double tol = 1e-6)
{
    const double denom = static_cast<double>(std::max<Eigen::Index>(x.rows() - 1, 1));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double m = x.col(j).mean();
        const double var = (x.col(j).array() - m).square().sum() / denom;
        if (std::abs(m) > tol || std::abs(var - 1.0) > tol) {
            throw ContractError("column " + std::to_string(j)
                                + " is not standardized (mean " + std::to_string(m)
                                + ", variance " + std::to_string(var) + ")");
        }
    }
}

} // namespace dfscreen
