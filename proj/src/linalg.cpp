#include "opideal/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "opideal/errors.hpp"

namespace opideal {

void require_finite(const CMatrix& m, std::string_view what)
{
    if (m.rows() == 0 || m.cols() == 0)
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": empty matrix");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                throw Error(ErrorCode::InvalidInput,
                            std::string(what) + ": non-finite entry at (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
        }
    }
}

void require_square(const CMatrix& m, std::string_view what)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected a square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_dim(const CMatrix& m, Eigen::Index n, std::string_view what)
{
    if (m.rows() != n || m.cols() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected " + std::to_string(n) + "x" +
                        std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
}

double frobenius(const CMatrix& m) { return m.norm(); }

double op_norm(const CMatrix& m)
{
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double condition_number(const CMatrix& m)
{
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

double unitarity_defect(const CMatrix& u)
{
    return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).norm();
}

double hermitian_defect(const CMatrix& h) { return (h - h.adjoint()).norm(); }

CMatrix conj(const CMatrix& m) { return m.conjugate(); }

HermitianEigen hermitian_eigen(const CMatrix& h)
{
    // Symmetrize so tiny rounding asymmetries never reach the solver.
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::InvalidInput, "Hermitian eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix exp_hermitian(const CMatrix& h)
{
    return hermitian_apply(h, [](double x) { return Complex(std::exp(x), 0.0); });
}

CMatrix exp_skew_hermitian(const CMatrix& s)
{
    const CMatrix h = Complex(0.0, -1.0) * s; // s = i h
    return hermitian_apply(h, [](double x) { return std::polar(1.0, x); });
}

CMatrix log_positive(const CMatrix& p)
{
    const auto e = hermitian_eigen(p);
    if (!(e.values(0) > 0.0))
        throw Error(ErrorCode::NotPositiveDefinite, "log_positive: matrix is not positive definite",
                    e.values(0));
    CVector mapped(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = std::log(e.values(i));
    return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

CMatrix sqrt_positive(const CMatrix& p)
{
    return hermitian_apply(p, [](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)))
{
}

CMatrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            m(i, j) = Complex(re, im);
        }
    return m;
}

RMatrix random_real_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    RMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

CMatrix random_unitary(Rng& rng, Eigen::Index n)
{
    const CMatrix z = random_gaussian(rng, n, n);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

} // namespace opideal
