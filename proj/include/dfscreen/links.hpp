#pragma once
#include <cmath>
#include <string>
#include <Eigen/Dense>
#include <dfscreen/errors.hpp>

namespace dfscreen {

enum class LinkKind
{
    Identity,
    Logit,
    Log,
    Power,
};

/// Link function g. For Power, g^{-1}(t) = t^alpha with alpha in {1/3, 1/5},
/// stored as the odd integer exponent 1/alpha.
class LinkSpec
{
public:
    LinkSpec() = default;

    static LinkSpec identity() { return LinkSpec(LinkKind::Identity, 1); }
    static LinkSpec logit() { return LinkSpec(LinkKind::Logit, 1); }
    static LinkSpec log() { return LinkSpec(LinkKind::Log, 1); }
    static LinkSpec power(int inverse_alpha)
    {
        if (inverse_alpha != 3 && inverse_alpha != 5) {
            throw ParameterError("power link: alpha must be 1/3 or 1/5, got 1/"
                                 + std::to_string(inverse_alpha));
        }
        return LinkSpec(LinkKind::Power, inverse_alpha);
    }

    /// Parses "identity" | "logit" | "log" | "power:1/3" | "power:1/5".
    static LinkSpec parse(const std::string& text)
    {
        if (text == "identity") return identity();
        if (text == "logit") return logit();
        if (text == "log") return log();
        if (text == "power:1/3") return power(3);
        if (text == "power:1/5") return power(5);
        throw ParameterError("unknown link '" + text
                             + "' (expected identity, logit, log, power:1/3 or power:1/5)");
    }

    LinkKind kind() const { return kind_; }
    double alpha() const { return 1.0 / inverse_alpha_; }
    int inverse_alpha() const { return inverse_alpha_; }

    std::string to_string() const
    {
        switch (kind_) {
        case LinkKind::Identity: return "identity";
        case LinkKind::Logit: return "logit";
        case LinkKind::Log: return "log";
        case LinkKind::Power: return "power:1/" + std::to_string(inverse_alpha_);
        }
        return "identity";
    }

    friend bool operator==(const LinkSpec&, const LinkSpec&) = default;

private:
    LinkSpec(LinkKind kind, int inverse_alpha) : kind_(kind), inverse_alpha_(inverse_alpha) {}

    LinkKind kind_ = LinkKind::Identity;
    int inverse_alpha_ = 1;
};

/// Projection of a response value onto the subset of its range where g is
/// finite. `n` is the sample size used for the boundary offset n^{-1/2}.
inline double project_response(double y, const LinkSpec& link, long n)
{
    switch (link.kind()) {
    case LinkKind::Identity:
    case LinkKind::Power:
        return y;
    case LinkKind::Logit: {
        if (n <= 4) {
            throw ParameterError("logit projection needs n >= 5, got n = " + std::to_string(n));
        }
        const double eps = 1.0 / std::sqrt(static_cast<double>(n));
        if (y == 0.0) return eps;
        if (y == 1.0) return 1.0 - eps;
        throw DomainError("logit response must be 0 or 1, got " + std::to_string(y));
    }
    case LinkKind::Log: {
        if (!(y >= 0.0) || y != std::floor(y)) {
            throw DomainError("log response must be a nonnegative integer, got " + std::to_string(y));
        }
        if (n < 1) throw ParameterError("log projection needs n >= 1");
        if (y == 0.0) return 1.0 / std::sqrt(static_cast<double>(n));
        return y;
    }
    }
    return y;
}

/// g(t) on an already projected value.
inline double apply_link(double t, const LinkSpec& link)
{
    switch (link.kind()) {
    case LinkKind::Identity: return t;
    case LinkKind::Logit: return std::log(t / (1.0 - t));
    case LinkKind::Log: return std::log(t);
    case LinkKind::Power: {
        // Odd integer power keeps the sign.
        double out = t;
        for (int i = 1; i < link.inverse_alpha(); ++i) out *= t;
        return out;
    }
    }
    return t;
}

/// g^{-1}(t).
inline double inverse_link(double t, const LinkSpec& link)
{
    switch (link.kind()) {
    case LinkKind::Identity: return t;
    case LinkKind::Logit:
        if (t < -30.0) {
            const double e = std::exp(t);
            return e / (1.0 + e);
        }
        return 1.0 / (1.0 + std::exp(-t));
    case LinkKind::Log: return std::exp(t);
    case LinkKind::Power:
        if (link.inverse_alpha() == 3) return std::cbrt(t);
        return std::copysign(std::pow(std::abs(t), link.alpha()), t);
    }
    return t;
}

struct TransformedResponse
{
    Eigen::VectorXd ystar;
    /// True iff Y* = Y, i.e. the identity link.
    bool identity_transform = false;
};

inline TransformedResponse transform_response(const Eigen::VectorXd& y, const LinkSpec& link)
{
    const long n = static_cast<long>(y.size());
    TransformedResponse out;
    out.ystar.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        try {
            out.ystar[i] = apply_link(project_response(y[i], link, n), link);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (row " + std::to_string(i) + ")");
        }
        if (!std::isfinite(out.ystar[i])) {
            throw DomainError("transformed response is not finite at row " + std::to_string(i));
        }
    }
    out.identity_transform = link.kind() == LinkKind::Identity;
    return out;
}

} // namespace dfscreen
