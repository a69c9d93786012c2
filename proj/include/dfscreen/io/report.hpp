#pragma once
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>
#include <nlohmann/json.hpp>
#include <dfscreen/errors.hpp>
#include <dfscreen/pipeline.hpp>
#include <dfscreen/simgen.hpp>

namespace dfscreen::io {

using json = nlohmann::json;

inline json to_json(const CvReport& cv)
{
    json folds = json::array();
    for (Index g = 0; g < cv.fold_errors.rows(); ++g) {
        std::vector<double> row;
        for (Index f = 0; f < cv.fold_errors.cols(); ++f) row.push_back(cv.fold_errors(g, f));
        folds.push_back(row);
    }
    return {{"c_grid", cv.c_grid}, {"mean_errors", cv.mean_errors}, {"fold_errors", folds}, {"chosen_c", cv.chosen_c}};
}

inline CvReport cv_report_from_json(const json& j)
{
    CvReport cv;
    cv.c_grid = j.at("c_grid").get<std::vector<double>>();
    cv.mean_errors = j.at("mean_errors").get<std::vector<double>>();
    cv.chosen_c = j.at("chosen_c").get<double>();
    const auto& folds = j.at("fold_errors");
    const auto rows = static_cast<Index>(folds.size());
    const auto cols = rows ? static_cast<Index>(folds[0].size()) : 0;
    cv.fold_errors.resize(rows, cols);
    for (Index g = 0; g < rows; ++g) {
        for (Index f = 0; f < cols; ++f) cv.fold_errors(g, f) = folds[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)].get<double>();
    }
    return cv;
}

/// Everything `dfscreen screen` writes: inputs, tuning values and the full
/// selection audit. Column indices are 0-based positions among the features.
struct ScreenReport
{
    std::string response;
    LinkSpec link;
    Index n = 0;
    Index p = 0;
    bool standardize = true;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    ScreenOutcome outcome;
    double wall_time_seconds = 0.0;
};

inline json to_json(const ScreenReport& r)
{
    const auto& sel = r.outcome.selection;
    auto names_of = [&](const IndexList& idx) {
        std::vector<std::string> out;
        for (Index j : idx) out.push_back(r.feature_names.at(static_cast<std::size_t>(j)));
        return out;
    };
    json j;
    j["response"] = r.response;
    j["link"] = r.link.to_string();
    j["n"] = r.n;
    j["p"] = r.p;
    j["standardize"] = r.standardize;
    j["seed"] = r.seed;
    j["lambda"] = r.outcome.lambda;
    j["c"] = r.outcome.c;
    j["psi_op_norm_sq"] = r.outcome.psi_op_norm_sq;
    j["selected_indices"] = sel.selected;
    j["selected_names"] = names_of(sel.selected);
    j["stop_step"] = sel.stop_step;
    j["rule_fired"] = sel.fired;
    j["path"] = {
        {"order", sel.path.order},
        {"order_names", names_of(sel.path.order)},
        {"rss_per_step", sel.path.rss_per_step},
        {"decrements", sel.path.decrements},
        {"thresholds", sel.thresholds},
    };
    j["cv"] = r.outcome.cv ? to_json(*r.outcome.cv) : json(nullptr);
    j["feature_names"] = r.feature_names;
    j["wall_time_seconds"] = r.wall_time_seconds;
    return j;
}

inline ScreenReport screen_report_from_json(const json& j)
{
    try {
        ScreenReport r;
        r.response = j.at("response").get<std::string>();
        r.link = LinkSpec::parse(j.at("link").get<std::string>());
        r.n = j.at("n").get<Index>();
        r.p = j.at("p").get<Index>();
        r.standardize = j.at("standardize").get<bool>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        r.outcome.lambda = j.at("lambda").get<double>();
        r.outcome.c = j.at("c").get<double>();
        r.outcome.psi_op_norm_sq = j.at("psi_op_norm_sq").get<double>();
        auto& sel = r.outcome.selection;
        sel.selected = j.at("selected_indices").get<IndexList>();
        sel.stop_step = j.at("stop_step").get<int>();
        sel.fired = j.at("rule_fired").get<bool>();
        const auto& path = j.at("path");
        sel.path.order = path.at("order").get<IndexList>();
        sel.path.rss_per_step = path.at("rss_per_step").get<std::vector<double>>();
        sel.path.decrements = path.at("decrements").get<std::vector<double>>();
        sel.thresholds = path.at("thresholds").get<std::vector<double>>();
        if (!j.at("cv").is_null()) r.outcome.cv = cv_report_from_json(j.at("cv"));
        r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw IoError(std::string("screen report: ") + e.what());
    }
}

/// Simulation config file: ScenarioConfig fields, the method list and a few
/// tuning knobs.
struct ExperimentSpec
{
    ScenarioConfig scenario;
    std::vector<Method> methods;
    ExperimentOptions options;
};

/**
 * Reads a JSON experiment config. `beta` is either an array (zero-padded to
 * length p) or an object mapping 0-based column indices to values; when
 * absent, beta* = (1, -1, 0.8, 0, ...).
 */
inline ExperimentSpec experiment_from_json(const json& j)
{
    ExperimentSpec s;
    auto& cfg = s.scenario;
    try {
        cfg.scenario = parse_scenario(j.value("scenario", std::string("AR1")));
        cfg.n = j.at("n").get<Index>();
        cfg.p = j.at("p").get<Index>();
        cfg.rho = j.value("rho", 0.0);
        cfg.link = LinkSpec::parse(j.value("link", std::string("identity")));
        cfg.replications = j.value("replications", 50);
        cfg.seed = j.value("seed", std::uint64_t{1});
        if (cfg.p < 1) throw ParameterError("config: p must be positive");

        if (!j.contains("beta")) {
            cfg.beta = ScenarioConfig::default_beta(cfg.p);
        } else if (j["beta"].is_array()) {
            const auto head = j["beta"].get<std::vector<double>>();
            if (static_cast<Index>(head.size()) > cfg.p) throw ParameterError("config: beta longer than p");
            cfg.beta = Vector::Zero(cfg.p);
            for (std::size_t i = 0; i < head.size(); ++i) cfg.beta[static_cast<Index>(i)] = head[i];
        } else if (j["beta"].is_object()) {
            cfg.beta = Vector::Zero(cfg.p);
            for (const auto& [key, value] : j["beta"].items()) {
                const Index idx = std::stoll(key);
                if (idx < 0 || idx >= cfg.p) throw ParameterError("config: beta index " + key + " out of range");
                cfg.beta[idx] = value.get<double>();
            }
        } else {
            throw ParameterError("config: beta must be an array or an object");
        }

        const auto names = j.value("methods", std::vector<std::string>{"TDF"});
        for (const auto& m : names) s.methods.push_back(parse_method(m));

        s.options.threads = j.value("threads", 1u);
        auto& tdf = s.options.method.tdf;
        if (j.contains("lambda")) tdf.lambda = j["lambda"].get<double>();
        if (j.contains("c")) tdf.c = j["c"].get<double>();
        tdf.folds = j.value("folds", tdf.folds);
        tdf.standardize = j.value("standardize", false);
        s.options.method.ebic_gamma = j.value("ebic_gamma", 1.0);
        if (j.contains("ebic_max_size")) s.options.method.ebic_max_size = j["ebic_max_size"].get<int>();
        if (j.contains("top_k")) s.options.method.top_k = j["top_k"].get<Index>();
    } catch (const json::exception& e) {
        throw IoError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw IoError("config: beta keys must be integers");
    }
    cfg.validate();
    return s;
}

/// CSV with columns method,metric,mean,sd.
inline void write_metrics_csv(std::ostream& out, const std::vector<MethodResult>& results)
{
    out << "method,metric,mean,sd\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& r : results) {
        const std::string name = method_name(r.method);
        out << name << ",tp," << r.metrics.tp.mean << ',' << r.metrics.tp.sd << '\n';
        out << name << ",fp," << r.metrics.fp.mean << ',' << r.metrics.fp.sd << '\n';
        out << name << ",cr," << r.metrics.cr.mean << ',' << r.metrics.cr.sd << '\n';
    }
}

/// Table in the "mean(sd)" layout.
inline void write_metrics_table(std::ostream& out, const std::vector<MethodResult>& results)
{
    auto cell = [](const Summary& s) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(2) << s.mean << '(' << s.sd << ')';
        return os.str();
    };
    out << std::left << std::setw(12) << "method" << std::setw(14) << "TP" << std::setw(14) << "FP"
        << "CR" << '\n';
    for (const auto& r : results) {
        out << std::left << std::setw(12) << method_name(r.method) << std::setw(14) << cell(r.metrics.tp)
            << std::setw(14) << cell(r.metrics.fp) << cell(r.metrics.cr) << '\n';
    }
}

} // namespace dfscreen::io
