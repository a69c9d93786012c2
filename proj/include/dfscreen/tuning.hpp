#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>
#include <dfscreen/linalg.hpp>
#include <dfscreen/links.hpp>
#include <dfscreen/screening.hpp>

namespace dfscreen {

/// lambda_n = 4 (log p / n)^{1/4}.
inline double default_lambda(Index n, Index p)
{
    if (p < 2) throw ParameterError("default_lambda: p must be >= 2, got " + std::to_string(p));
    if (n < 1) throw ParameterError("default_lambda: n must be >= 1");
    return 4.0 * std::pow(std::log(static_cast<double>(p)) / static_cast<double>(n), 0.25);
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
inline std::vector<double> log_grid(double lo, double hi, int count)
{
    if (!(lo > 0.0 && hi >= lo) || count < 1) throw ParameterError("log_grid: invalid range");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) return {lo};
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(std::log(lo) + step * i));
    out.back() = hi;
    return out;
}

/// Default grid for the threshold constant: 20 log-spaced values in [1e-3, 10].
inline std::vector<double> default_c_grid() { return log_grid(1e-3, 10.0, 20); }

/// Scale on which held-out prediction error is measured during CV.
enum class CvErrorScale
{
    Original,     // (y - g^{-1}(fit))^2
    Transformed,  // (Y* - fit)^2
};

struct CvReport
{
    std::vector<double> c_grid;
    /// fold_errors(i, f): held-out error of c_grid[i] on fold f.
    Matrix fold_errors;
    std::vector<double> mean_errors;
    double chosen_c = 0.0;
};

/// Intercept plus coefficients on a column subset.
struct LinearFit
{
    IndexList support;
    double intercept = 0.0;
    Vector coef;

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const
    {
        double eta = intercept;
        for (std::size_t i = 0; i < support.size(); ++i) {
            eta += row[support[i]] * coef[static_cast<Index>(i)];
        }
        return eta;
    }
};

/// Least squares with intercept on the given columns. Rank-deficient
/// designs get the minimum-norm solution.
inline LinearFit fit_least_squares(const Matrix& x, const IndexList& support, const Vector& y)
{
    Matrix design(x.rows(), static_cast<Index>(support.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t i = 0; i < support.size(); ++i) {
        design.col(static_cast<Index>(i) + 1) = x.col(support[i]);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
    const Vector beta = cod.solve(y);
    LinearFit fit;
    fit.support = support;
    fit.intercept = beta[0];
    fit.coef = beta.tail(beta.size() - 1);
    return fit;
}

/// Balanced fold labels from a seeded shuffle: sizes differ by at most one.
inline std::vector<int> fold_assignment(Index n, int folds, std::uint64_t seed)
{
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> label(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < perm.size(); ++i) {
        label[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }
    return label;
}

inline Matrix take_rows(const Matrix& x, const IndexList& rows)
{
    Matrix out(static_cast<Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
    return out;
}

inline Vector take_rows(const Vector& y, const IndexList& rows)
{
    Vector out(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = y[rows[i]];
    return out;
}

struct CvOptions
{
    /// Fixed lambda; when absent, default_lambda of each training part.
    std::optional<double> lambda;
    std::vector<double> c_grid = default_c_grid();
    int folds = 10;
    std::uint64_t seed = 0;
    CvErrorScale scale = CvErrorScale::Original;
};

/**
 * K-fold cross-validation of the threshold constant c.
 *
 * Per fold, the training part is transformed and decorrelated, and a single
 * DF path is grown until the rule fires for the smallest c in the grid.
 * Every larger c stops on a prefix of that path. Selected supports are refit
 * by least squares on Y* and scored on the held-out rows.
 */
inline CvReport cv_select_c(const Matrix& x, const Vector& y, const LinkSpec& link,
                            const CvOptions& opt = {})
{
    const Index n = x.rows();
    const Index p = x.cols();
    if (y.size() != n) throw ShapeError("cv_select_c: X and y row counts differ");
    if (opt.folds < 2) throw ParameterError("cv_select_c: folds must be >= 2");
    if (opt.folds > n) throw ParameterError("cv_select_c: more folds than rows");
    if (opt.c_grid.empty()) throw ParameterError("cv_select_c: c_grid is empty");
    for (double c : opt.c_grid) {
        if (!(c > 0.0)) throw ParameterError("cv_select_c: c_grid values must be positive");
    }
    const Index largest_fold = (n + opt.folds - 1) / opt.folds;
    if (n - largest_fold < 21) {
        throw ParameterError("cv_select_c: a training part has " + std::to_string(n - largest_fold)
                             + " rows; at least 21 are needed (use fewer folds or more data)");
    }

    const std::vector<int> label = fold_assignment(n, opt.folds, opt.seed);
    const double c_min = *std::min_element(opt.c_grid.begin(), opt.c_grid.end());

    CvReport report;
    report.c_grid = opt.c_grid;
    report.fold_errors.resize(static_cast<Index>(opt.c_grid.size()), opt.folds);

    for (int f = 0; f < opt.folds; ++f) {
        IndexList train, test;
        for (Index i = 0; i < n; ++i) (label[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);

        const Matrix x_train = take_rows(x, train);
        const Matrix x_test = take_rows(x, test);
        const Vector y_train = take_rows(y, train);
        const Vector y_test = take_rows(y, test);
        const auto n_train = static_cast<Index>(train.size());

        const TransformedResponse tr = transform_response(y_train, link);
        const double lambda = opt.lambda ? *opt.lambda : default_lambda(n_train, p);
        const TransformedProblem problem = make_problem(x_train, tr.ystar, lambda, tr.identity_transform);
        const int budget = static_cast<int>(std::min(n_train, p));
        const ScreeningPath path = tdf_select(problem, c_min, budget).path;

        Vector ystar_test(y_test.size());
        if (opt.scale == CvErrorScale::Transformed) {
            for (Index i = 0; i < y_test.size(); ++i) {
                ystar_test[i] = apply_link(project_response(y_test[i], link, n_train), link);
            }
        }

        std::map<std::size_t, double> error_by_size;
        for (std::size_t g = 0; g < opt.c_grid.size(); ++g) {
            const IndexList selected = threshold_path(path, problem, opt.c_grid[g]).selected;
            auto it = error_by_size.find(selected.size());
            if (it == error_by_size.end()) {
                const LinearFit fit = fit_least_squares(x_train, selected, tr.ystar);
                double sse = 0.0;
                for (Index i = 0; i < x_test.rows(); ++i) {
                    const double eta = fit.predict(x_test.row(i));
                    const double r = opt.scale == CvErrorScale::Original
                                         ? y_test[i] - inverse_link(eta, link)
                                         : ystar_test[i] - eta;
                    sse += r * r;
                }
                it = error_by_size.emplace(selected.size(), sse / static_cast<double>(x_test.rows())).first;
            }
            report.fold_errors(static_cast<Index>(g), f) = it->second;
        }
    }

    report.mean_errors.resize(opt.c_grid.size());
    std::size_t best = 0;
    for (std::size_t g = 0; g < opt.c_grid.size(); ++g) {
        report.mean_errors[g] = report.fold_errors.row(static_cast<Index>(g)).mean();
        const bool better = report.mean_errors[g] < report.mean_errors[best]
                            || (report.mean_errors[g] == report.mean_errors[best]
                                && opt.c_grid[g] < opt.c_grid[best]);
        if (better) best = g;
    }
    report.chosen_c = opt.c_grid[best];
    return report;
}

} // namespace dfscreen
