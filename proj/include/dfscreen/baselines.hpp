#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>
#include <dfscreen/linalg.hpp>
#include <dfscreen/screening.hpp>
#include <dfscreen/stats.hpp>

namespace dfscreen {

/// Feature scores with indices sorted by descending score (ties: smaller
/// index first).
struct RankedScreen
{
    Vector scores;
    IndexList order;
};

inline RankedScreen rank_scores(Vector scores)
{
    RankedScreen out;
    out.order.resize(static_cast<std::size_t>(scores.size()));
    std::iota(out.order.begin(), out.order.end(), Index{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](Index a, Index b) { return scores[a] > scores[b]; });
    out.scores = std::move(scores);
    return out;
}

/// Marginal screening |X^T Y*| on standardized columns.
inline RankedScreen sis_rank(const Matrix& x, const Vector& ystar)
{
    if (x.rows() != ystar.size()) throw ShapeError("sis_rank: row mismatch");
    check_standardized(x);
    return rank_scores((x.transpose() * ystar).cwiseAbs());
}

namespace detail {

/// Cholesky factor of X X^T / p + lambda I.
inline Eigen::LLT<Matrix> ridge_gram_factor(const Matrix& x, double lambda)
{
    if (!(lambda > 0.0)) {
        throw ParameterError("ridge screening: lambda must be positive, got " + std::to_string(lambda));
    }
    Matrix g = scaled_row_gram(x);
    g.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) throw NumericalError("ridge screening: Cholesky failed");
    return llt;
}

} // namespace detail

/// Ridge-HOLP: |X^T (X X^T / p + lambda I)^{-1} Y*|.
inline RankedScreen holp_rank(const Matrix& x, const Vector& ystar, double lambda)
{
    if (x.rows() != ystar.size()) throw ShapeError("holp_rank: row mismatch");
    const auto llt = detail::ridge_gram_factor(x, lambda);
    const Vector z = llt.solve(ystar);
    return rank_scores((x.transpose() * z).cwiseAbs());
}

/// Weighted ridge-HOLP: HOLP scores divided by sqrt(X_j^T Psi^2 X_j). Its
/// argmax is the first column picked by decorrelated forward selection.
inline RankedScreen wrh_rank(const Matrix& x, const Vector& ystar, double lambda)
{
    if (x.rows() != ystar.size()) throw ShapeError("wrh_rank: row mismatch");
    const auto llt = detail::ridge_gram_factor(x, lambda);
    // With M = L L^T: x^T M^{-1} v = (L^{-1} x)^T (L^{-1} v).
    const Matrix wx = llt.matrixL().solve(x);
    const Vector wy = llt.matrixL().solve(ystar);
    Vector scores(x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        const double w = wx.col(j).squaredNorm();
        if (!(w > 0.0)) {
            throw DegeneracyError("wrh_rank: column " + std::to_string(j) + " is zero");
        }
        scores[j] = std::abs(wx.col(j).dot(wy)) / std::sqrt(w);
    }
    return rank_scores(std::move(scores));
}

/// Classical forward regression on (X, Y*).
inline ScreeningPath fr_path(const Matrix& x, const Vector& ystar, int max_steps)
{
    return df_path(make_identity_problem(x, ystar, true), max_steps);
}

inline IndexList top_k(const RankedScreen& ranked, Index k)
{
    const auto m = static_cast<std::size_t>(std::clamp<Index>(k, 0, static_cast<Index>(ranked.order.size())));
    return {ranked.order.begin(), ranked.order.begin() + static_cast<std::ptrdiff_t>(m)};
}

/// Conventional top-k size ceil(n / log n).
inline Index default_top_k(Index n)
{
    return static_cast<Index>(std::ceil(static_cast<double>(n) / std::log(static_cast<double>(n))));
}

struct EbicChoice
{
    IndexList selected;
    /// EBIC(k) for k = 0..(number of candidate sizes - 1).
    std::vector<double> scores;
};

/**
 * Chooses a prefix of `ordering` by the extended BIC
 *   n log(RSS_k / n) + k (log n + 2 gamma log p).
 * RSS_k is the least-squares residual of Y* on the first k columns (no
 * intercept), floored at 1e-12 ||Y*||^2. Ties go to the smaller model.
 */
inline EbicChoice ebic_select(const IndexList& ordering, const Matrix& x, const Vector& ystar,
                              double gamma, int max_size)
{
    const Index n = x.rows();
    const Index p = x.cols();
    if (n != ystar.size()) throw ShapeError("ebic_select: row mismatch");
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ParameterError("ebic_select: gamma must be in [0, 1], got " + std::to_string(gamma));
    }
    const Index cap = std::min(n - 2, p);
    if (max_size < 1 || max_size > cap) {
        throw ParameterError("ebic_select: max_size must be in [1, " + std::to_string(cap)
                             + "], got " + std::to_string(max_size));
    }

    const auto steps = std::min<std::size_t>(static_cast<std::size_t>(max_size), ordering.size());
    const double nn = static_cast<double>(n);
    const double per_term = std::log(nn) + 2.0 * gamma * std::log(static_cast<double>(p));
    const double floor = std::max(1e-12 * ystar.squaredNorm(), std::numeric_limits<double>::min());
    auto score = [&](double rss, std::size_t k) {
        return nn * std::log(std::max(rss, floor) / nn) + static_cast<double>(k) * per_term;
    };

    EbicChoice out;
    ForwardState state = forward_init(ystar);
    out.scores.push_back(score(state.rss, 0));
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            state = forward_extend(state, x, ordering[k - 1]);
        } catch (const DegeneracyError&) {
            // Column already in the span: RSS unchanged.
        }
        out.scores.push_back(score(state.rss, k));
        if (out.scores[k] < out.scores[best_k]) best_k = k;
    }
    out.selected.assign(ordering.begin(), ordering.begin() + static_cast<std::ptrdiff_t>(best_k));
    return out;
}

} // namespace dfscreen
