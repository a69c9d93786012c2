#pragma once
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <dfscreen/baselines.hpp>
#include <dfscreen/links.hpp>
#include <dfscreen/screening.hpp>
#include <dfscreen/stats.hpp>
#include <dfscreen/tuning.hpp>

namespace dfscreen {

struct ScreenOptions
{
    std::optional<double> lambda;
    std::optional<double> c;
    bool standardize = true;
    /// Defaults to min(n, p).
    std::optional<int> max_steps;
    std::vector<double> c_grid = default_c_grid();
    int folds = 10;
    std::uint64_t seed = 0;
    CvErrorScale cv_scale = CvErrorScale::Original;
};

/// T-DF selection plus the tuning values that produced it.
struct ScreenOutcome
{
    SelectionResult selection;
    double lambda = 0.0;
    double c = 0.0;
    double psi_op_norm_sq = 0.0;
    std::optional<CvReport> cv;
};

/// Standardize, transform, decorrelate, tune c by CV when not given, then run
/// thresholded decorrelated forward selection.
inline ScreenOutcome screen(const Matrix& x_raw, const Vector& y, const LinkSpec& link,
                            const ScreenOptions& opt = {})
{
    if (x_raw.rows() != y.size()) {
        throw ShapeError("screen: X has " + std::to_string(x_raw.rows()) + " rows but y has "
                         + std::to_string(y.size()));
    }
    const Matrix x = opt.standardize ? standardize_columns(x_raw) : x_raw;
    const Index n = x.rows();
    const Index p = x.cols();

    const TransformedResponse tr = transform_response(y, link);
    ScreenOutcome out;
    out.lambda = opt.lambda ? *opt.lambda : default_lambda(n, p);
    const TransformedProblem problem = make_problem(x, tr.ystar, out.lambda, tr.identity_transform);
    out.psi_op_norm_sq = problem.psi_op_norm_sq;

    if (opt.c) {
        out.c = *opt.c;
    } else {
        CvOptions cv;
        cv.lambda = opt.lambda;
        cv.c_grid = opt.c_grid;
        cv.folds = opt.folds;
        cv.seed = opt.seed;
        cv.scale = opt.cv_scale;
        out.cv = cv_select_c(x, y, link, cv);
        out.c = out.cv->chosen_c;
    }

    const int budget = opt.max_steps ? *opt.max_steps : static_cast<int>(std::min(n, p));
    out.selection = tdf_select(problem, out.c, budget);
    return out;
}

enum class Method
{
    TDF,
    FBIC,
    HOLP_EBIC,
    SIS_TOPK,
    WRH_TOPK,
};

inline std::string method_name(Method m)
{
    switch (m) {
    case Method::TDF: return "TDF";
    case Method::FBIC: return "FBIC";
    case Method::HOLP_EBIC: return "HOLP_EBIC";
    case Method::SIS_TOPK: return "SIS_TOPK";
    case Method::WRH_TOPK: return "WRH_TOPK";
    }
    return "TDF";
}

/// Accepts the canonical names and the short CLI aliases.
inline Method parse_method(const std::string& s)
{
    if (s == "TDF" || s == "tdf") return Method::TDF;
    if (s == "FBIC" || s == "fbic") return Method::FBIC;
    if (s == "HOLP_EBIC" || s == "holp") return Method::HOLP_EBIC;
    if (s == "SIS_TOPK" || s == "sis") return Method::SIS_TOPK;
    if (s == "WRH_TOPK" || s == "wrh") return Method::WRH_TOPK;
    throw ParameterError("unknown method '" + s + "'");
}

struct MethodOptions
{
    ScreenOptions tdf;
    double ebic_gamma = 1.0;
    /// EBIC search depth; defaults to min(ceil(n / log n), n - 2, p).
    std::optional<int> ebic_max_size;
    /// Top-k size for SIS/WRH; defaults to ceil(n / log n).
    std::optional<Index> top_k;
};

/// Runs one screening method and returns its selected column set.
inline IndexList run_method(Method method, const Matrix& x, const Vector& y, const LinkSpec& link,
                            const MethodOptions& opt = {})
{
    if (method == Method::TDF) return screen(x, y, link, opt.tdf).selection.selected;

    const Index n = x.rows();
    const Index p = x.cols();
    const Vector ystar = transform_response(y, link).ystar;
    const double lambda = opt.tdf.lambda ? *opt.tdf.lambda : default_lambda(n, p);
    const Index k = opt.top_k ? *opt.top_k : default_top_k(n);
    const int depth = opt.ebic_max_size ? *opt.ebic_max_size
                                        : static_cast<int>(std::min({default_top_k(n), n - 2, p}));

    switch (method) {
    case Method::FBIC: {
        const ScreeningPath path = fr_path(x, ystar, depth);
        return ebic_select(path.order, x, ystar, opt.ebic_gamma, depth).selected;
    }
    case Method::HOLP_EBIC:
        return ebic_select(holp_rank(x, ystar, lambda).order, x, ystar, opt.ebic_gamma, depth).selected;
    case Method::SIS_TOPK:
        return top_k(sis_rank(standardize_columns(x), ystar), k);
    case Method::WRH_TOPK:
        return top_k(wrh_rank(x, ystar, lambda), k);
    case Method::TDF: break;
    }
    return {};
}

} // namespace dfscreen
