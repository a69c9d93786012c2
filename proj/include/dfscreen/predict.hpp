#pragma once
#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>
#include <dfscreen/parallel.hpp>
#include <dfscreen/pipeline.hpp>
#include <dfscreen/simgen.hpp>
#include <dfscreen/stats.hpp>
#include <dfscreen/tuning.hpp>

namespace dfscreen {

struct SplitOptions
{
    Method method = Method::TDF;
    int repeats = 100;
    std::uint64_t seed = 0;
    MethodOptions method_options;
    unsigned threads = 1;
};

struct SplitRepeat
{
    double error = 0.0;
    /// Same protocol with an intercept-only model.
    double null_error = 0.0;
    /// Model sizes chosen on the first and second half.
    int size_first = 0;
    int size_second = 0;
};

struct SplitSummary
{
    std::vector<SplitRepeat> repeats;
    double mean = 0.0;
    double sd = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double null_mean = 0.0;
    /// model size -> number of half-sample fits that chose it.
    std::map<int, int> size_counts;
};

/**
 * Split-sample prediction error. Each repeat splits the rows into two halves
 * by a seeded shuffle. A model is selected and fit (least squares on Y*,
 * intercept included) on one half and scored on the other, both ways:
 *   (1/n) sum_k sum_{i in A_k} (y_i - g^{-1}(x_i^T beta^{(other)}))^2.
 */
inline SplitSummary predict_split(const Matrix& x, const Vector& y, const LinkSpec& link,
                                  const SplitOptions& opt)
{
    const Index n = x.rows();
    if (y.size() != n) throw ShapeError("predict_split: X and y row counts differ");
    if (n < 42) throw ParameterError("predict_split: need n >= 42 so each half has 21 rows");
    if (opt.repeats < 1) throw ParameterError("predict_split: repeats must be positive");

    SplitSummary out;
    out.repeats.resize(static_cast<std::size_t>(opt.repeats));

    parallel_for(out.repeats.size(), opt.threads, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(opt.seed, r);
        IndexList perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Index{0});
        std::mt19937_64 rng(seed);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto half = static_cast<std::ptrdiff_t>(n / 2);
        const IndexList parts[2] = {IndexList(perm.begin(), perm.begin() + half),
                                    IndexList(perm.begin() + half, perm.end())};

        SplitRepeat rep;
        double sse = 0.0, null_sse = 0.0;
        for (int k = 0; k < 2; ++k) {
            const IndexList& fit_rows = parts[1 - k];
            const IndexList& eval_rows = parts[k];
            const Matrix x_fit = take_rows(x, fit_rows);
            const Vector y_fit = take_rows(y, fit_rows);

            MethodOptions mo = opt.method_options;
            mo.tdf.seed = splitmix64(seed + static_cast<std::uint64_t>(k));
            const IndexList selected = run_method(opt.method, x_fit, y_fit, link, mo);
            // k == 1 fits on parts[0].
            (k == 1 ? rep.size_first : rep.size_second) = static_cast<int>(selected.size());

            const Vector ystar = transform_response(y_fit, link).ystar;
            const LinearFit fit = fit_least_squares(x_fit, selected, ystar);
            const LinearFit null_fit = fit_least_squares(x_fit, {}, ystar);
            for (Index i : eval_rows) {
                const double e = y[i] - inverse_link(fit.predict(x.row(i)), link);
                const double e0 = y[i] - inverse_link(null_fit.predict(x.row(i)), link);
                sse += e * e;
                null_sse += e0 * e0;
            }
        }
        rep.error = sse / static_cast<double>(n);
        rep.null_error = null_sse / static_cast<double>(n);
        out.repeats[r] = rep;
    });

    std::vector<double> errors, nulls;
    for (const auto& rep : out.repeats) {
        errors.push_back(rep.error);
        nulls.push_back(rep.null_error);
        ++out.size_counts[rep.size_first];
        ++out.size_counts[rep.size_second];
    }
    out.mean = mean(errors);
    out.sd = sample_sd(errors);
    out.q25 = quantile(errors, 0.25);
    out.median = quantile(errors, 0.5);
    out.q75 = quantile(errors, 0.75);
    out.null_mean = mean(nulls);
    return out;
}

} // namespace dfscreen
