#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>
#include <dfscreen/linalg.hpp>
#include <dfscreen/links.hpp>

namespace dfscreen {

/// The decorrelated least-squares problem that forward selection consumes.
struct TransformedProblem
{
    Matrix xdec;
    Vector ydec;
    double psi_op_norm_sq = 1.0;
    double lambda = 0.0;
    bool identity_transform = true;

    Index n() const { return xdec.rows(); }
    Index p() const { return xdec.cols(); }
};

/// Decorrelates (X, Y*) with Psi = (X X^T / p + lambda I)^{-1/2}.
inline TransformedProblem make_problem(const Matrix& x, const Vector& ystar, double lambda,
                                       bool identity_transform)
{
    if (x.rows() != ystar.size()) {
        throw ShapeError("make_problem: X has " + std::to_string(x.rows())
                         + " rows but the response has " + std::to_string(ystar.size()));
    }
    const DecorrelationOperator op = build_decorrelator(x, lambda);
    auto [xdec, ydec] = apply_decorrelator(op, x, ystar);
    return {std::move(xdec), std::move(ydec), op.psi_op_norm_sq, lambda, identity_transform};
}

/// Psi := I, i.e. classical forward regression on (X, Y*).
inline TransformedProblem make_identity_problem(const Matrix& x, const Vector& ystar,
                                                bool identity_transform)
{
    if (x.rows() != ystar.size()) throw ShapeError("make_identity_problem: row mismatch");
    return {x, ystar, 1.0, 0.0, identity_transform};
}

struct ScreeningPath
{
    IndexList order;
    /// rss_per_step[0] = ||Y*||^2; rss_per_step[k] after the k-th addition.
    std::vector<double> rss_per_step;
    /// decrements[k-1] = rss_per_step[k-1] - rss_per_step[k], clipped at 0.
    std::vector<double> decrements;
};

struct SelectionResult
{
    IndexList selected;
    /// Step k whose decrement failed the threshold, or the number of steps
    /// taken when the rule never fired.
    int stop_step = 0;
    bool fired = false;
    /// c_{n,k} for k = 1..stop_step.
    std::vector<double> thresholds;
    ScreeningPath path;
};

inline void check_max_steps(const TransformedProblem& problem, int max_steps, const char* who)
{
    const Index cap = std::min(problem.n(), problem.p());
    if (max_steps < 1 || max_steps > cap) {
        throw ParameterError(std::string(who) + ": max_steps must be in [1, "
                             + std::to_string(cap) + "], got " + std::to_string(max_steps));
    }
}

namespace detail {

inline bool residual_exhausted(double rss, double initial_rss)
{
    return rss <= 1e-12 * initial_rss;
}

inline void record_step(ScreeningPath& path, Index j, double rss)
{
    const double prev = path.rss_per_step.back();
    path.order.push_back(j);
    path.rss_per_step.push_back(rss);
    path.decrements.push_back(std::max(0.0, prev - rss));
}

/// Advances the engine by one step. Returns false when no admissible
/// candidate remains or the residual is numerically zero.
inline bool advance(ForwardEngine& engine, ScreeningPath& path)
{
    if (residual_exhausted(engine.state().rss, path.rss_per_step.front())) return false;
    while (auto j = engine.best()) {
        if (engine.try_extend(*j)) {
            record_step(path, *j, engine.state().rss);
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Decorrelated forward selection: greedy DRSS-minimizing path of at most
/// `max_steps` columns.
inline ScreeningPath df_path(const TransformedProblem& problem, int max_steps)
{
    check_max_steps(problem, max_steps, "df_path");
    ForwardEngine engine(problem.xdec, problem.ydec);
    ScreeningPath path;
    path.rss_per_step.push_back(engine.state().rss);
    for (int k = 0; k < max_steps; ++k) {
        if (!detail::advance(engine, path)) break;
    }
    return path;
}

/// c_{n,k} = c k ||Psi||^2 log(log(n^{1/3})) log(p) * m, where m = 1 for
/// Y = Y* and sqrt(log p) otherwise.
inline double tdf_threshold(double c, int k, double psi_op_norm_sq, Index n, Index p,
                            bool identity_transform)
{
    if (n <= 20) {
        throw ParameterError("tdf_threshold: n = " + std::to_string(n)
                             + " gives log(log(n^(1/3))) <= 0; at least 21 rows are required");
    }
    if (p < 1) throw ParameterError("tdf_threshold: p must be positive, got " + std::to_string(p));
    if (!(c > 0.0)) throw ParameterError("tdf_threshold: c must be positive");
    if (k < 1) throw ParameterError("tdf_threshold: k must be >= 1");
    if (!(psi_op_norm_sq > 0.0)) throw ParameterError("tdf_threshold: ||Psi||^2 must be positive");

    const double nn = static_cast<double>(n);
    const double log_p = std::log(static_cast<double>(p));
    const double mult = identity_transform ? 1.0 : std::sqrt(log_p);
    return c * k * psi_op_norm_sq * std::log(std::log(std::cbrt(nn))) * log_p * mult;
}

/// Applies the stopping rule to a precomputed DF path.
inline SelectionResult threshold_path(const ScreeningPath& path, const TransformedProblem& problem,
                                      double c)
{
    SelectionResult out;
    const int steps = static_cast<int>(path.order.size());
    for (int k = 1; k <= steps; ++k) {
        const double t = tdf_threshold(c, k, problem.psi_op_norm_sq, problem.n(), problem.p(),
                                       problem.identity_transform);
        out.thresholds.push_back(t);
        if (path.decrements[static_cast<std::size_t>(k - 1)] <= t) {
            out.fired = true;
            out.stop_step = k;
            out.path.order.assign(path.order.begin(), path.order.begin() + k);
            out.path.rss_per_step.assign(path.rss_per_step.begin(), path.rss_per_step.begin() + k + 1);
            out.path.decrements.assign(path.decrements.begin(), path.decrements.begin() + k);
            out.selected.assign(path.order.begin(), path.order.begin() + (k - 1));
            return out;
        }
    }
    out.stop_step = steps;
    out.path = path;
    out.selected = path.order;
    return out;
}

/// Thresholded decorrelated forward selection.
inline SelectionResult tdf_select(const TransformedProblem& problem, double c, int max_steps)
{
    check_max_steps(problem, max_steps, "tdf_select");
    // Validates n, p and c before doing any work.
    (void)tdf_threshold(c, 1, problem.psi_op_norm_sq, problem.n(), problem.p(),
                        problem.identity_transform);

    ForwardEngine engine(problem.xdec, problem.ydec);
    SelectionResult out;
    out.path.rss_per_step.push_back(engine.state().rss);
    for (int k = 1; k <= max_steps; ++k) {
        if (!detail::advance(engine, out.path)) break;
        const double t = tdf_threshold(c, k, problem.psi_op_norm_sq, problem.n(), problem.p(),
                                       problem.identity_transform);
        out.thresholds.push_back(t);
        if (out.path.decrements.back() <= t) {
            out.fired = true;
            out.stop_step = k;
            out.selected.assign(out.path.order.begin(), out.path.order.end() - 1);
            return out;
        }
    }
    out.stop_step = static_cast<int>(out.path.order.size());
    out.selected = out.path.order;
    return out;
}

} // namespace dfscreen
