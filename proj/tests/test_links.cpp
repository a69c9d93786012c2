#include <gtest/gtest.h>
#include <cmath>
#include <random>
#include <dfscreen/links.hpp>

using namespace dfscreen;

namespace {

const LinkSpec all_links[] = {LinkSpec::identity(), LinkSpec::logit(), LinkSpec::log(), LinkSpec::power(3),
                              LinkSpec::power(5)};

} // namespace

TEST(LinkSpec, ParseAndPrint)
{
    for (const auto& link : all_links) EXPECT_EQ(LinkSpec::parse(link.to_string()), link);
    EXPECT_EQ(LinkSpec::parse("power:1/3").inverse_alpha(), 3);
    EXPECT_DOUBLE_EQ(LinkSpec::parse("power:1/5").alpha(), 0.2);
    EXPECT_THROW(LinkSpec::parse("probit"), ParameterError);
    EXPECT_THROW(LinkSpec::power(2), ParameterError);
}

TEST(ProjectResponse, Examples)
{
    EXPECT_DOUBLE_EQ(project_response(0.0, LinkSpec::logit(), 100), 0.1);
    EXPECT_DOUBLE_EQ(project_response(1.0, LinkSpec::logit(), 100), 0.9);
    EXPECT_DOUBLE_EQ(project_response(7.0, LinkSpec::log(), 100), 7.0);
    EXPECT_DOUBLE_EQ(project_response(0.0, LinkSpec::log(), 100), 0.1);
    EXPECT_DOUBLE_EQ(project_response(-3.5, LinkSpec::identity(), 50), -3.5);
    EXPECT_DOUBLE_EQ(project_response(-3.5, LinkSpec::power(3), 50), -3.5);
}

TEST(ProjectResponse, Errors)
{
    EXPECT_THROW(project_response(0.5, LinkSpec::logit(), 100), DomainError);
    EXPECT_THROW(project_response(-1.0, LinkSpec::log(), 100), DomainError);
    EXPECT_THROW(project_response(1.5, LinkSpec::log(), 100), DomainError);
    EXPECT_THROW(project_response(0.0, LinkSpec::logit(), 4), ParameterError);
    EXPECT_NO_THROW(project_response(0.0, LinkSpec::logit(), 5));
}

TEST(TransformResponse, Examples)
{
    Eigen::VectorXd y(100);
    y.setZero();
    y[1] = 1.0;
    const auto logit = transform_response(y, LinkSpec::logit());
    EXPECT_NEAR(logit.ystar[0], -2.1972245773362196, 1e-14);
    EXPECT_NEAR(logit.ystar[1], 2.1972245773362196, 1e-14);
    EXPECT_FALSE(logit.identity_transform);

    const auto log = transform_response(y, LinkSpec::log());
    EXPECT_NEAR(log.ystar[0], -2.3025850929940455, 1e-14);
    EXPECT_DOUBLE_EQ(log.ystar[1], 0.0);

    Eigen::VectorXd two(1);
    two << 2.0;
    EXPECT_DOUBLE_EQ(transform_response(two, LinkSpec::power(3)).ystar[0], 8.0);
    EXPECT_DOUBLE_EQ(transform_response(two, LinkSpec::power(5)).ystar[0], 32.0);

    const auto id = transform_response(y, LinkSpec::identity());
    EXPECT_TRUE(id.identity_transform);
    EXPECT_EQ(id.ystar, y);
}

TEST(TransformResponse, ErrorNamesRow)
{
    Eigen::VectorXd y = Eigen::VectorXd::Zero(10);
    y[7] = 0.3;
    try {
        transform_response(y, LinkSpec::logit());
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("row 7"), std::string::npos);
    }
}

TEST(InverseLink, Examples)
{
    EXPECT_DOUBLE_EQ(inverse_link(0.0, LinkSpec::logit()), 0.5);
    EXPECT_NEAR(inverse_link(std::log(9.0), LinkSpec::logit()), 0.9, 1e-15);
    EXPECT_DOUBLE_EQ(inverse_link(8.0, LinkSpec::power(3)), 2.0);
    EXPECT_NEAR(inverse_link(-32.0, LinkSpec::power(5)), -2.0, 1e-14);
    EXPECT_DOUBLE_EQ(inverse_link(0.0, LinkSpec::log()), 1.0);
    EXPECT_GT(inverse_link(-800.0, LinkSpec::logit()), -1e-300);
    EXPECT_LT(inverse_link(800.0, LinkSpec::logit()), 1.0 + 1e-15);
}

TEST(LinkProperties, RoundTripOverSeededInputs)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wide(-50.0, 50.0);
    for (const auto& link : all_links) {
        for (int i = 0; i < 1000; ++i) {
            double t = 0.0;
            switch (link.kind()) {
            case LinkKind::Identity:
            case LinkKind::Power: t = wide(rng); break;
            case LinkKind::Logit: t = 0.01 + 0.98 * unit(rng); break;
            case LinkKind::Log: t = 1e-3 + 100.0 * unit(rng); break;
            }
            const double back = inverse_link(apply_link(t, link), link);
            EXPECT_NEAR(back, t, 1e-12 * std::max(1.0, std::abs(t))) << link.to_string() << " t=" << t;
        }
    }
}

TEST(LinkProperties, StrictlyIncreasing)
{
    for (const auto& link : all_links) {
        double lo = -10.0, hi = 10.0;
        if (link.kind() == LinkKind::Logit) lo = 1e-3, hi = 1.0 - 1e-3;
        if (link.kind() == LinkKind::Log) lo = 1e-3;
        double prev = apply_link(lo, link);
        for (int i = 1; i <= 500; ++i) {
            const double t = lo + (hi - lo) * i / 500.0;
            const double v = apply_link(t, link);
            EXPECT_GT(v, prev) << link.to_string() << " at " << t;
            prev = v;
        }
    }
}

TEST(LinkProperties, IdentityFlagOnlyForIdentity)
{
    Eigen::VectorXd y(6);
    y << 0, 1, 0, 1, 1, 0;
    for (const auto& link : all_links) {
        EXPECT_EQ(transform_response(y, link).identity_transform, link.kind() == LinkKind::Identity);
    }
}
