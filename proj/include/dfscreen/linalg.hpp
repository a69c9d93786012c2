#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include <Eigen/Dense>
#include <dfscreen/errors.hpp>

namespace dfscreen {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

/// Squared-norm ratio below which a column's component orthogonal to the
/// current span is treated as zero.
inline constexpr double degeneracy_tol = 1e-12;

/// Symmetric eigendecomposition with eigenvalues sorted in descending order.
/// Column i of `eigenvectors` pairs with `eigenvalues[i]`.
struct SymEig
{
    Vector eigenvalues;
    Matrix eigenvectors;
};

inline SymEig sym_eig(const Matrix& m)
{
    if (m.rows() != m.cols()) {
        throw ShapeError("sym_eig: matrix is " + std::to_string(m.rows()) + "x"
                         + std::to_string(m.cols()) + ", expected square");
    }
    if (m.rows() < 1) throw ShapeError("sym_eig: empty matrix");

    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-12 * scale)) {
        throw SymmetryError("sym_eig: max |M - M^T| = " + std::to_string(asym)
                            + " exceeds 1e-12 relative tolerance");
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        // Eigen's tridiagonal QR gives up after 30*n sweeps.
        throw NumericalError("sym_eig: eigensolver did not converge within "
                             + std::to_string(30 * m.rows()) + " iterations");
    }
    // Eigen returns ascending order.
    SymEig out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

/// Psi = (X X^T / p + lambda I)^{-1/2}, together with ||Psi||_2^2.
struct DecorrelationOperator
{
    Matrix psi;
    double psi_op_norm_sq = 1.0;
    /// 0 only for the identity operator.
    double lambda = 0.0;

    static DecorrelationOperator identity(Index n)
    {
        return {Matrix::Identity(n, n), 1.0, 0.0};
    }
};

/// Gram matrix X X^T / p, exactly symmetric.
inline Matrix scaled_row_gram(const Matrix& x)
{
    const Index n = x.rows();
    Matrix g = Matrix::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(x.cols()));
    return g.selfadjointView<Eigen::Lower>();
}

inline DecorrelationOperator build_decorrelator(const Matrix& x, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParameterError("build_decorrelator: lambda must be positive and finite, got "
                             + std::to_string(lambda));
    }
    if (x.rows() < 1 || x.cols() < 1) {
        throw ShapeError("build_decorrelator: design must have at least one row and column");
    }

    const SymEig eig = sym_eig(scaled_row_gram(x));
    Vector shifted = eig.eigenvalues.cwiseMax(0.0).array() + lambda;
    if (!(shifted.minCoeff() > 0.0)) {
        throw NumericalError("build_decorrelator: nonpositive shifted eigenvalue");
    }
    const Vector inv_sqrt = shifted.cwiseSqrt().cwiseInverse();

    DecorrelationOperator op;
    op.psi = eig.eigenvectors * inv_sqrt.asDiagonal() * eig.eigenvectors.transpose();
    // Re-symmetrize away the rounding from the triple product.
    op.psi = 0.5 * (op.psi + op.psi.transpose()).eval();
    op.psi_op_norm_sq = 1.0 / shifted.minCoeff();
    op.lambda = lambda;
    return op;
}

inline std::pair<Matrix, Vector>
apply_decorrelator(const DecorrelationOperator& op, const Matrix& x, const Vector& ystar)
{
    if (op.psi.cols() != x.rows() || op.psi.cols() != ystar.size()) {
        throw ShapeError("apply_decorrelator: operator is " + std::to_string(op.psi.rows())
                         + "x" + std::to_string(op.psi.cols()) + " but X has "
                         + std::to_string(x.rows()) + " rows and y has "
                         + std::to_string(ystar.size()) + " entries");
    }
    return {op.psi * x, op.psi * ystar};
}

/// Residual of a forward least-squares fit, with an orthonormal basis of the
/// span of the selected columns.
struct ForwardState
{
    IndexList selected;
    Matrix basis;   // n x k, orthonormal columns
    Vector residual;
    double rss = 0.0;
};

inline ForwardState forward_init(const Vector& ydec)
{
    ForwardState s;
    s.basis.resize(ydec.size(), 0);
    s.residual = ydec;
    s.rss = ydec.squaredNorm();
    return s;
}

/// Component of `col` orthogonal to the columns of `basis`, using two
/// Gram-Schmidt passes.
inline Vector orthogonal_component(const Matrix& basis, const Vector& col)
{
    Vector z = col;
    for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < basis.cols(); ++i) {
            z -= basis.col(i).dot(z) * basis.col(i);
        }
    }
    return z;
}

struct Candidate
{
    Index index;
    double drss;
};

/// DRSS for every column not in `exclude`, computed from scratch against the
/// state's basis. Degenerate columns report the current rss.
inline std::vector<Candidate>
drss_candidates(const ForwardState& state, const Matrix& xdec, const IndexList& exclude)
{
    if (xdec.rows() != state.residual.size()) {
        throw ShapeError("drss_candidates: design rows do not match residual length");
    }
    std::vector<char> skip(static_cast<std::size_t>(xdec.cols()), 0);
    for (Index j : exclude) {
        if (j >= 0 && j < xdec.cols()) skip[static_cast<std::size_t>(j)] = 1;
    }

    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(xdec.cols()));
    for (Index j = 0; j < xdec.cols(); ++j) {
        if (skip[static_cast<std::size_t>(j)]) continue;
        const double col_sq = xdec.col(j).squaredNorm();
        const Vector z = orthogonal_component(state.basis, xdec.col(j));
        const double z_sq = z.squaredNorm();
        if (col_sq == 0.0 || z_sq <= degeneracy_tol * col_sq) {
            out.push_back({j, state.rss});
            continue;
        }
        const double dot = z.dot(state.residual);
        out.push_back({j, std::max(0.0, state.rss - dot * dot / z_sq)});
    }
    return out;
}

inline ForwardState forward_extend(ForwardState state, const Matrix& xdec, Index j)
{
    if (j < 0 || j >= xdec.cols()) {
        throw ParameterError("forward_extend: column index " + std::to_string(j) + " out of range");
    }
    if (std::find(state.selected.begin(), state.selected.end(), j) != state.selected.end()) {
        throw ParameterError("forward_extend: column " + std::to_string(j) + " already selected");
    }
    const double col_sq = xdec.col(j).squaredNorm();
    const Vector z = orthogonal_component(state.basis, xdec.col(j));
    const double z_sq = z.squaredNorm();
    if (col_sq == 0.0 || z_sq <= degeneracy_tol * col_sq) {
        throw DegeneracyError("forward_extend: column " + std::to_string(j)
                              + " lies in the span of the selected columns");
    }
    const Vector q = z / std::sqrt(z_sq);

    const Index k = state.basis.cols();
    state.basis.conservativeResize(Eigen::NoChange, k + 1);
    state.basis.col(k) = q;
    state.residual -= q.dot(state.residual) * q;
    state.rss = std::min(state.rss, state.residual.squaredNorm());
    state.selected.push_back(j);
    return state;
}

/// ||y - P(cols) y||^2 via a rank-revealing least-squares solve.
inline double brute_force_drss(const Matrix& cols, const Vector& y)
{
    if (cols.cols() == 0) return y.squaredNorm();
    if (cols.rows() != y.size()) throw ShapeError("brute_force_drss: row mismatch");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(cols);
    const Vector coef = cod.solve(y);
    return (y - cols * coef).squaredNorm();
}

inline Matrix gather_columns(const Matrix& x, const IndexList& idx)
{
    Matrix out(x.rows(), static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Index>(i)) = x.col(idx[i]);
    return out;
}

/**
 * Incremental forward-selection engine over a fixed design.
 *
 * Keeps ||x_j||^2 and ||Q^T x_j||^2 for every column so a full DRSS scan
 * costs O(n p) per step instead of O(n p k). Because the residual is
 * orthogonal to span(Q), <z_j, r> = <x_j, r>.
 */
class ForwardEngine
{
public:
    ForwardEngine(const Matrix& xdec, const Vector& ydec)
        : xdec_(&xdec),
          state_(forward_init(ydec)),
          col_sq_(xdec.colwise().squaredNorm().transpose()),
          proj_sq_(Vector::Zero(xdec.cols())),
          in_model_(static_cast<std::size_t>(xdec.cols()), 0),
          blocked_(static_cast<std::size_t>(xdec.cols()), 0)
    {
        if (xdec.rows() != ydec.size()) {
            throw ShapeError("ForwardEngine: design has " + std::to_string(xdec.rows())
                             + " rows but response has " + std::to_string(ydec.size()));
        }
    }

    const ForwardState& state() const { return state_; }

    /// DRSS per column; entries for selected columns are NaN.
    Vector drss() const
    {
        const Vector dots = xdec_->transpose() * state_.residual;
        Vector out(xdec_->cols());
        for (Index j = 0; j < out.size(); ++j) {
            if (in_model_[static_cast<std::size_t>(j)]) {
                out[j] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const double orth = col_sq_[j] - proj_sq_[j];
            if (col_sq_[j] == 0.0 || orth <= degeneracy_tol * col_sq_[j]) {
                out[j] = state_.rss;
            } else {
                out[j] = std::max(0.0, state_.rss - dots[j] * dots[j] / orth);
            }
        }
        return out;
    }

    bool is_degenerate(Index j) const
    {
        const double orth = col_sq_[j] - proj_sq_[j];
        return col_sq_[j] == 0.0 || orth <= degeneracy_tol * col_sq_[j];
    }

    /// Unselected, non-degenerate column with smallest DRSS; ties go to the
    /// smallest index. Empty when every remaining column is degenerate.
    std::optional<Index> best() const
    {
        const Vector d = drss();
        std::optional<Index> arg;
        double best_val = 0.0;
        for (Index j = 0; j < d.size(); ++j) {
            if (in_model_[static_cast<std::size_t>(j)] || is_degenerate(j)) continue;
            if (blocked_[static_cast<std::size_t>(j)]) continue;
            if (!arg || d[j] < best_val) {
                arg = j;
                best_val = d[j];
            }
        }
        return arg;
    }

    /// Adds column j. Returns false, and excludes j from later scans, when the
    /// explicit orthogonalization finds it degenerate after all.
    bool try_extend(Index j)
    {
        try {
            extend(j);
            return true;
        } catch (const DegeneracyError&) {
            blocked_[static_cast<std::size_t>(j)] = 1;
            return false;
        }
    }

    void extend(Index j)
    {
        state_ = forward_extend(state_, *xdec_, j);
        in_model_[static_cast<std::size_t>(j)] = 1;
        const Vector proj = xdec_->transpose() * state_.basis.col(state_.basis.cols() - 1);
        proj_sq_ += proj.cwiseAbs2();
    }

private:
    const Matrix* xdec_;
    ForwardState state_;
    Vector col_sq_;
    Vector proj_sq_;
    std::vector<char> in_model_;
    std::vector<char> blocked_;
};

} // namespace dfscreen
