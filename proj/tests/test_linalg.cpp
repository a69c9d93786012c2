#include <gtest/gtest.h>
#include <cmath>
#include <dfscreen/linalg.hpp>
#include <dfscreen/screening.hpp>
#include "test_util.hpp"

using namespace dfscreen;
using test::gaussian;
using test::gaussian_vec;
using test::max_abs;

namespace {

double rel_frobenius(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

Matrix reconstruct(const SymEig& e)
{
    return e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose();
}

} // namespace

TEST(SymEig, Identity)
{
    const Matrix m = Matrix::Identity(3, 3);
    const SymEig e = sym_eig(m);
    EXPECT_LT(max_abs(e.eigenvalues - Vector::Ones(3)), 1e-14);
    EXPECT_LT(rel_frobenius(reconstruct(e), m), 1e-10);
}

TEST(SymEig, DiagonalIsAxisAligned)
{
    Matrix m(2, 2);
    m << 1, 0, 0, 4;
    const SymEig e = sym_eig(m);
    EXPECT_DOUBLE_EQ(e.eigenvalues[0], 4.0);
    EXPECT_DOUBLE_EQ(e.eigenvalues[1], 1.0);
    EXPECT_NEAR(std::abs(e.eigenvectors(1, 0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(e.eigenvectors(0, 1)), 1.0, 1e-14);
}

TEST(SymEig, RandomReconstructionAndOrthogonality)
{
    const Matrix a = gaussian(6, 6, 11);
    const Matrix m = a + a.transpose();
    const SymEig e = sym_eig(m);
    EXPECT_LT(rel_frobenius(reconstruct(e), m), 1e-10);
    EXPECT_LT(max_abs(e.eigenvectors.transpose() * e.eigenvectors - Matrix::Identity(6, 6)), 1e-10);
    for (Index i = 1; i < 6; ++i) EXPECT_GE(e.eigenvalues[i - 1], e.eigenvalues[i]);
}

TEST(SymEig, RejectsAsymmetric)
{
    Matrix m(2, 2);
    m << 1, 2, 2.001, 1;
    EXPECT_THROW(sym_eig(m), SymmetryError);
    EXPECT_THROW(sym_eig(Matrix(2, 3)), ShapeError);
}

TEST(Decorrelator, ZeroDesign)
{
    const auto op = build_decorrelator(Matrix::Zero(3, 4), 0.25);
    EXPECT_LT(max_abs(op.psi - 2.0 * Matrix::Identity(3, 3)), 1e-14);
    EXPECT_NEAR(op.psi_op_norm_sq, 4.0, 1e-14);
}

TEST(Decorrelator, OrthogonalRows)
{
    // Rows orthogonal with squared norm p = 6, so X X^T / p = I.
    Matrix x = Matrix::Zero(3, 6);
    for (Index i = 0; i < 3; ++i) {
        x(i, i) = std::sqrt(3.0);
        x(i, i + 3) = std::sqrt(3.0);
    }
    const auto op = build_decorrelator(x, 1.0);
    EXPECT_LT(max_abs(op.psi - Matrix::Identity(3, 3) / std::sqrt(2.0)), 1e-14);
}

TEST(Decorrelator, InverseSquareRootIdentity)
{
    const Matrix x = gaussian(5, 8, 3);
    const double lambda = 0.1;
    const auto op = build_decorrelator(x, lambda);
    const Matrix target = x * x.transpose() / 8.0 + lambda * Matrix::Identity(5, 5);
    EXPECT_LT(max_abs(op.psi * op.psi * target - Matrix::Identity(5, 5)), 1e-8);

    // ||Psi||^2 = 1 / (sigma_min(X)^2 / p + lambda), via an SVD of X.
    Eigen::JacobiSVD<Matrix> svd(x);
    const double smin = svd.singularValues().minCoeff();
    const double expect = 1.0 / (smin * smin / 8.0 + lambda);
    EXPECT_NEAR(op.psi_op_norm_sq / expect, 1.0, 1e-10);
}

TEST(Decorrelator, RejectsNonPositiveLambda)
{
    EXPECT_THROW(build_decorrelator(Matrix::Ones(2, 2), 0.0), ParameterError);
    EXPECT_THROW(build_decorrelator(Matrix::Ones(2, 2), -1.0), ParameterError);
}

TEST(Decorrelator, PropertyOverSeeds)
{
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Index n = 3 + static_cast<Index>(seed % 7);
        const Index p = 2 + static_cast<Index>((seed * 5) % 13);
        const Matrix x = gaussian(n, p, 100 + seed);
        const double lambda = 0.01 + 0.1 * static_cast<double>(seed % 4);
        const auto op = build_decorrelator(x, lambda);
        const Matrix target = x * x.transpose() / static_cast<double>(p) + lambda * Matrix::Identity(n, n);
        EXPECT_LT(max_abs(op.psi * op.psi * target - Matrix::Identity(n, n)), 1e-8) << "seed " << seed;
    }
}

TEST(Decorrelator, NearOrthogonalityForTallFullRank)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Index n = 30, p = 10;
        const Matrix x = gaussian(n, p, 500 + seed);
        Eigen::JacobiSVD<Matrix> svd(x);
        const double smin = svd.singularValues().minCoeff();
        const double lambda = 1e-10 * smin * smin / static_cast<double>(p);
        const auto op = build_decorrelator(x, lambda);
        const Matrix xdec = op.psi * x;
        Matrix g = xdec.transpose() * xdec / static_cast<double>(p);
        const double diag_err = (g.diagonal().array() - 1.0).abs().maxCoeff();
        g.diagonal().setZero();
        EXPECT_LE(diag_err, 1e-5) << "seed " << seed;
        EXPECT_LE(max_abs(g), 1e-5) << "seed " << seed;
    }
}

TEST(ApplyDecorrelator, IdentityAndScalarOperators)
{
    const Matrix x = gaussian(4, 3, 9);
    const Vector y = gaussian_vec(4, 10);
    auto [xd, yd] = apply_decorrelator(DecorrelationOperator::identity(4), x, y);
    EXPECT_EQ(xd, x);
    EXPECT_EQ(yd, y);

    DecorrelationOperator two{2.0 * Matrix::Identity(2, 2), 0.25, 0.25};
    Vector ystar(2);
    ystar << 1, 0;
    auto [x2, y2] = apply_decorrelator(two, Matrix::Ones(2, 2), ystar);
    EXPECT_EQ(x2, Matrix::Constant(2, 2, 2.0));
    EXPECT_EQ(y2, Vector(Vector::Unit(2, 0) * 2.0));
}

TEST(ApplyDecorrelator, PerColumnOracle)
{
    const Matrix x = gaussian(5, 8, 21);
    const Vector y = gaussian_vec(5, 22);
    const auto op = build_decorrelator(x, 0.3);
    auto [xd, yd] = apply_decorrelator(op, x, y);
    for (Index j = 0; j < 8; ++j) {
        for (Index i = 0; i < 5; ++i) {
            double acc = 0.0;
            for (Index k = 0; k < 5; ++k) acc += op.psi(i, k) * x(k, j);
            EXPECT_NEAR(xd(i, j), acc, 1e-12);
        }
    }
    EXPECT_THROW(apply_decorrelator(op, gaussian(4, 8, 1), gaussian_vec(4, 2)), ShapeError);
}

TEST(ForwardInit, ResidualAndRss)
{
    Vector y(2);
    y << 3, 4;
    EXPECT_DOUBLE_EQ(forward_init(y).rss, 25.0);
    EXPECT_DOUBLE_EQ(forward_init(Vector::Zero(5)).rss, 0.0);

    const Vector r = gaussian_vec(10, 4);
    double ss = 0.0;
    for (Index i = 0; i < 10; ++i) ss += r[i] * r[i];
    const auto s = forward_init(r);
    EXPECT_NEAR(s.rss, ss, 1e-12);
    EXPECT_EQ(s.basis.cols(), 0);
    EXPECT_TRUE(s.selected.empty());
}

TEST(DrssCandidates, ParallelAndOrthogonalColumns)
{
    Vector y(3);
    y << 1, 2, 0;
    Matrix x(3, 2);
    x.col(0) = 3.0 * y;
    x.col(1) << 0, 0, 5;
    const auto c = drss_candidates(forward_init(y), x, {});
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0].drss, 0.0, 1e-12);
    EXPECT_NEAR(c[1].drss, 5.0, 1e-12);
}

TEST(DrssCandidates, MatchesBruteForceAfterThreeSteps)
{
    const Matrix x = gaussian(20, 50, 31);
    const Vector y = gaussian_vec(20, 32);
    ForwardState s = forward_init(y);
    for (Index j : {Index{4}, Index{17}, Index{33}}) s = forward_extend(s, x, j);
    for (const auto& cand : drss_candidates(s, x, s.selected)) {
        IndexList cols = s.selected;
        cols.push_back(cand.index);
        EXPECT_NEAR(cand.drss, brute_force_drss(gather_columns(x, cols), y), 1e-8);
    }
}

TEST(ForwardExtend, ExactFitAndZeroProjection)
{
    Vector y(3);
    y << 1, -1, 2;
    Matrix x(3, 2);
    x.col(0) = -2.0 * y;
    x.col(1) << 1, 1, 0;  // orthogonal to y
    EXPECT_NEAR(forward_extend(forward_init(y), x, 0).rss, 0.0, 1e-24);
    EXPECT_NEAR(forward_extend(forward_init(y), x, 1).rss, y.squaredNorm(), 1e-12);
}

TEST(ForwardExtend, InvariantsAndOracle)
{
    const Matrix x = gaussian(15, 30, 41);
    const Vector y = gaussian_vec(15, 42);
    ForwardState s = forward_init(y);
    double prev = s.rss;
    for (Index j : {Index{2}, Index{9}, Index{0}, Index{28}, Index{13}}) {
        s = forward_extend(s, x, j);
        const Index k = s.basis.cols();
        EXPECT_LT(max_abs(s.basis.transpose() * s.basis - Matrix::Identity(k, k)), 1e-8);
        EXPECT_LT(max_abs(s.basis.transpose() * s.residual), 1e-8);
        EXPECT_LE(s.rss, prev);
        EXPECT_NEAR(s.rss, brute_force_drss(gather_columns(x, s.selected), y), 1e-8);
        prev = s.rss;
    }
}

TEST(ForwardExtend, Errors)
{
    Matrix x = gaussian(6, 3, 5);
    x.col(2) = 2.0 * x.col(0) - x.col(1);
    ForwardState s = forward_init(gaussian_vec(6, 6));
    s = forward_extend(s, x, 0);
    EXPECT_THROW(forward_extend(s, x, 0), ParameterError);
    s = forward_extend(s, x, 1);
    EXPECT_THROW(forward_extend(s, x, 2), DegeneracyError);
    EXPECT_THROW(forward_extend(s, x, 7), ParameterError);
}

TEST(BruteForceDrss, Basics)
{
    Vector e1 = Vector::Unit(4, 0);
    EXPECT_NEAR(brute_force_drss(Matrix::Identity(4, 4).leftCols(1), e1), 0.0, 1e-15);
    const Vector y = gaussian_vec(4, 1);
    EXPECT_DOUBLE_EQ(brute_force_drss(Matrix(4, 0), y), y.squaredNorm());
}

TEST(BruteForceDrss, DuplicatedColumnIsHarmless)
{
    const Matrix base = gaussian(8, 3, 71);
    const Vector y = gaussian_vec(8, 72);
    Matrix dup(8, 4);
    dup << base, base.col(1);
    EXPECT_NEAR(brute_force_drss(dup, y), brute_force_drss(base, y), 1e-10);
}

TEST(ForwardEngine, AgreesWithFromScratchScan)
{
    const Matrix x = gaussian(20, 40, 81);
    const Vector y = gaussian_vec(20, 82);
    ForwardEngine engine(x, y);
    for (int step = 0; step < 6; ++step) {
        const Vector fast = engine.drss();
        for (const auto& c : drss_candidates(engine.state(), x, engine.state().selected)) {
            EXPECT_NEAR(fast[c.index], c.drss, 1e-9);
        }
        engine.extend(*engine.best());
    }
}

TEST(ForwardEngine, DuplicateColumnNeverChosen)
{
    Matrix x = gaussian(10, 5, 91);
    x.col(4) = x.col(0);
    Vector y = x.col(0) + 0.01 * gaussian_vec(10, 92);
    ForwardEngine engine(x, y);
    const Index first = *engine.best();
    EXPECT_EQ(first, 0);  // tie with column 4 goes to the smaller index
    engine.extend(first);
    EXPECT_TRUE(engine.is_degenerate(4));
    EXPECT_NE(*engine.best(), 4);
}

TEST(OracleEquivalence, FiftyInstancesTenSteps)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Matrix x = gaussian(20, 50, 1000 + seed);
        const Vector y = gaussian_vec(20, 2000 + seed);
        const auto problem = make_problem(x, y, 0.5, true);
        ForwardEngine engine(problem.xdec, problem.ydec);
        for (int step = 0; step < 10; ++step) {
            const Vector d = engine.drss();
            for (Index j = 0; j < 50; ++j) {
                if (std::isnan(d[j])) continue;
                IndexList cols = engine.state().selected;
                cols.push_back(j);
                ASSERT_NEAR(d[j], brute_force_drss(gather_columns(problem.xdec, cols), problem.ydec), 1e-8)
                    << "seed " << seed << " step " << step << " col " << j;
            }
            engine.extend(*engine.best());
        }
    }
}
