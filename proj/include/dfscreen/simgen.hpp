#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>
#include <dfscreen/linalg.hpp>
#include <dfscreen/links.hpp>
#include <dfscreen/parallel.hpp>
#include <dfscreen/pipeline.hpp>
#include <dfscreen/stats.hpp>

namespace dfscreen {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of replication r; independent of how many replications are run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t r)
{
    return splitmix64(splitmix64(master) ^ (r * 0xD1B54A32D192ED03ull + 1));
}

inline void check_rho(double rho, const char* who)
{
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw ParameterError(std::string(who) + ": rho must be in [0, 1), got " + std::to_string(rho));
    }
}

inline void check_dims(Index n, Index p, const char* who)
{
    if (n < 1 || p < 1) throw ParameterError(std::string(who) + ": n and p must be positive");
}

/// Rows from N(0, Sigma), Sigma_ij = rho^|i-j|, by the AR(1) recursion.
inline Matrix gen_ar1(Index n, Index p, double rho, Rng& rng)
{
    check_rho(rho, "gen_ar1");
    check_dims(n, p, "gen_ar1");
    std::normal_distribution<double> z(0.0, 1.0);
    const double innov = std::sqrt(1.0 - rho * rho);
    Matrix x(n, p);
    for (Index i = 0; i < n; ++i) {
        double prev = z(rng);
        x(i, 0) = prev;
        for (Index j = 1; j < p; ++j) {
            prev = rho * prev + innov * z(rng);
            x(i, j) = prev;
        }
    }
    return x;
}

/// Closed-form square root of the compound-symmetry matrix
/// (1 - rho) I + rho 1 1^T: sqrt(1-rho) I + (s1 - s0)/p 1 1^T.
inline Matrix compound_symmetry_sqrt(Index p, double rho)
{
    check_rho(rho, "compound_symmetry_sqrt");
    const double s0 = std::sqrt(1.0 - rho);
    const double s1 = std::sqrt(1.0 + (static_cast<double>(p) - 1.0) * rho);
    Matrix out = Matrix::Constant(p, p, (s1 - s0) / static_cast<double>(p));
    out.diagonal().array() += s0;
    return out;
}

/// Block compound-symmetry design: v = Sigma^{1/2} f, then columns 4.. are
/// shifted by -0.6 rho v_1.
inline Matrix gen_blockcs(Index n, Index p, double rho, Rng& rng)
{
    check_rho(rho, "gen_blockcs");
    check_dims(n, p, "gen_blockcs");
    if (p < 4) throw ParameterError("gen_blockcs: p must be >= 4");
    std::normal_distribution<double> z(0.0, 1.0);
    const double s0 = std::sqrt(1.0 - rho);
    const double s1 = std::sqrt(1.0 + (static_cast<double>(p) - 1.0) * rho);
    const double coupling = (s1 - s0) / static_cast<double>(p);
    Matrix x(n, p);
    Vector f(p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) f[j] = z(rng);
        const double shared = coupling * f.sum();
        for (Index j = 0; j < p; ++j) x(i, j) = s0 * f[j] + shared;
        const double a = x(i, 0);
        for (Index j = 3; j < p; ++j) x(i, j) -= 0.6 * a * rho;
    }
    return x;
}

/// Symmetric square root of the AR(1) correlation matrix (rho^|i-j|).
inline Matrix ar1_sqrt(Index p, double rho)
{
    check_rho(rho, "ar1_sqrt");
    Matrix sigma(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    }
    const SymEig eig = sym_eig(sigma);
    const Vector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    Matrix b = eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.transpose();
    return 0.5 * (b + b.transpose());
}

/// Factor design x = B f + u with B^2 the AR(1) matrix and u ~ U(0, 0.5).
/// `loading` must be ar1_sqrt(p, rho).
inline Matrix gen_factor_toy(Index n, const Matrix& loading, Rng& rng)
{
    const Index p = loading.rows();
    check_dims(n, p, "gen_factor_toy");
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    Matrix f(n, p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) f(i, j) = z(rng);
    }
    Matrix x = f * loading;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) x(i, j) += u(rng);
    }
    return x;
}

inline Matrix gen_factor_toy(Index n, Index p, double rho, Rng& rng)
{
    return gen_factor_toy(n, ar1_sqrt(p, rho), rng);
}

/// Response draws for eta = X beta: Gaussian noise (identity), Bernoulli
/// (logit) or Poisson (log).
inline Vector gen_response(const Matrix& x, const Vector& beta, const LinkSpec& link, Rng& rng)
{
    if (x.cols() != beta.size()) throw ShapeError("gen_response: beta length differs from column count");
    const Vector eta = x * beta;
    Vector y(eta.size());
    switch (link.kind()) {
    case LinkKind::Identity: {
        std::normal_distribution<double> z(0.0, 1.0);
        for (Index i = 0; i < y.size(); ++i) y[i] = eta[i] + z(rng);
        break;
    }
    case LinkKind::Logit: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (Index i = 0; i < y.size(); ++i) y[i] = u(rng) < inverse_link(eta[i], link) ? 1.0 : 0.0;
        break;
    }
    case LinkKind::Log: {
        for (Index i = 0; i < y.size(); ++i) {
            if (eta[i] > 30.0) {
                throw NumericalError("gen_response: Poisson rate exp(" + std::to_string(eta[i])
                                     + ") at row " + std::to_string(i) + " is too large");
            }
            std::poisson_distribution<long long> pois(std::exp(eta[i]));
            y[i] = static_cast<double>(pois(rng));
        }
        break;
    }
    case LinkKind::Power:
        throw ParameterError("gen_response: no sampler for the power link");
    }
    return y;
}

struct Evaluation
{
    int tp = 0;
    int fp = 0;
    int cr = 0;
};

inline Evaluation evaluate(const IndexList& selected, const IndexList& truth)
{
    Evaluation e;
    for (Index j : selected) {
        if (std::find(truth.begin(), truth.end(), j) != truth.end()) ++e.tp;
        else ++e.fp;
    }
    e.cr = std::all_of(truth.begin(), truth.end(), [&](Index t) {
               return std::find(selected.begin(), selected.end(), t) != selected.end();
           })
               ? 1
               : 0;
    return e;
}

enum class Scenario
{
    AR1,
    BlockCS,
    FactorToy,
};

inline std::string scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::AR1: return "AR1";
    case Scenario::BlockCS: return "BlockCS";
    case Scenario::FactorToy: return "FactorToy";
    }
    return "AR1";
}

inline Scenario parse_scenario(const std::string& s)
{
    if (s == "AR1" || s == "ar1") return Scenario::AR1;
    if (s == "BlockCS" || s == "blockcs") return Scenario::BlockCS;
    if (s == "FactorToy" || s == "factortoy") return Scenario::FactorToy;
    throw ParameterError("unknown scenario '" + s + "' (expected AR1, BlockCS or FactorToy)");
}

struct ScenarioConfig
{
    Scenario scenario = Scenario::AR1;
    Index n = 200;
    Index p = 500;
    double rho = 0.0;
    LinkSpec link = LinkSpec::identity();
    Vector beta;
    int replications = 50;
    std::uint64_t seed = 1;

    /// beta* = (1, -1, 0.8, 0, ..., 0).
    static Vector default_beta(Index p)
    {
        Vector b = Vector::Zero(p);
        const double head[] = {1.0, -1.0, 0.8};
        for (Index j = 0; j < std::min<Index>(3, p); ++j) b[j] = head[j];
        return b;
    }

    void validate() const
    {
        check_rho(rho, "ScenarioConfig");
        check_dims(n, p, "ScenarioConfig");
        if (beta.size() != p) {
            throw ParameterError("ScenarioConfig: beta has length " + std::to_string(beta.size())
                                 + " but p = " + std::to_string(p));
        }
        if (replications < 1) throw ParameterError("ScenarioConfig: replications must be positive");
        if (scenario == Scenario::BlockCS && p < 4) throw ParameterError("ScenarioConfig: BlockCS needs p >= 4");
    }

    IndexList support() const
    {
        IndexList s;
        for (Index j = 0; j < beta.size(); ++j) {
            if (beta[j] != 0.0) s.push_back(j);
        }
        return s;
    }
};

struct Dataset
{
    Matrix x;
    Vector y;
};

/// Draws one replication's data. `loading` is only read for FactorToy.
inline Dataset generate(const ScenarioConfig& cfg, std::uint64_t seed, const Matrix* loading = nullptr)
{
    Rng rng(seed);
    Dataset d;
    switch (cfg.scenario) {
    case Scenario::AR1: d.x = gen_ar1(cfg.n, cfg.p, cfg.rho, rng); break;
    case Scenario::BlockCS: d.x = gen_blockcs(cfg.n, cfg.p, cfg.rho, rng); break;
    case Scenario::FactorToy:
        d.x = loading ? gen_factor_toy(cfg.n, *loading, rng) : gen_factor_toy(cfg.n, cfg.p, cfg.rho, rng);
        break;
    }
    d.y = gen_response(d.x, cfg.beta, cfg.link, rng);
    return d;
}

struct Summary
{
    double mean = 0.0;
    double sd = 0.0;
};

struct Metrics
{
    Summary tp;
    Summary fp;
    Summary cr;
};

struct MethodResult
{
    Method method;
    Metrics metrics;
    std::vector<Evaluation> per_replication;
};

/// Generated designs are used as drawn: no column standardization for T-DF.
inline MethodOptions harness_method_defaults()
{
    MethodOptions m;
    m.tdf.standardize = false;
    return m;
}

struct ExperimentOptions
{
    MethodOptions method = harness_method_defaults();
    unsigned threads = 1;
};

inline Metrics summarize(const std::vector<Evaluation>& evals)
{
    std::vector<double> tp, fp, cr;
    for (const auto& e : evals) {
        tp.push_back(e.tp);
        fp.push_back(e.fp);
        cr.push_back(e.cr);
    }
    return {{mean(tp), sample_sd(tp)}, {mean(fp), sample_sd(fp)}, {mean(cr), sample_sd(cr)}};
}

/**
 * Monte-Carlo replication runner. Replication r draws its data from
 * derive_seed(cfg.seed, r); T-DF's cross-validation shuffle is seeded from
 * the same replication seed. Results do not depend on the thread count.
 * The first failing replication aborts the run with a ReplicationError.
 */
inline std::vector<MethodResult> run_experiment(const ScenarioConfig& cfg, const std::vector<Method>& methods,
                                                const ExperimentOptions& opt = {})
{
    cfg.validate();
    if (methods.empty()) throw ParameterError("run_experiment: no methods given");
    const IndexList truth = cfg.support();

    Matrix loading;
    if (cfg.scenario == Scenario::FactorToy) loading = ar1_sqrt(cfg.p, cfg.rho);

    const auto reps = static_cast<std::size_t>(cfg.replications);
    std::vector<std::vector<Evaluation>> evals(methods.size(), std::vector<Evaluation>(reps));

    parallel_for(reps, opt.threads, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(cfg.seed, r);
        try {
            const Dataset d = generate(cfg, seed, &loading);
            for (std::size_t m = 0; m < methods.size(); ++m) {
                MethodOptions mo = opt.method;
                mo.tdf.seed = splitmix64(seed);
                evals[m][r] = evaluate(run_method(methods[m], d.x, d.y, cfg.link, mo), truth);
            }
        } catch (const std::exception& e) {
            throw ReplicationError("replication " + std::to_string(r) + " (seed " + std::to_string(seed)
                                       + ") failed: " + e.what(),
                                   seed);
        }
    });

    std::vector<MethodResult> out;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        out.push_back({methods[m], summarize(evals[m]), std::move(evals[m])});
    }
    return out;
}

} // namespace dfscreen
