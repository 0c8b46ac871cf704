#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace opideal {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Input validation. All throw opideal::Error.
void require_finite(const CMatrix& m, std::string_view what);
void require_square(const CMatrix& m, std::string_view what);
void require_dim(const CMatrix& m, Eigen::Index n, std::string_view what);

double frobenius(const CMatrix& m);
/// Largest singular value.
double op_norm(const CMatrix& m);
/// sigma_max / sigma_min; +inf for singular or empty input.
double condition_number(const CMatrix& m);

/// ||u^* u - 1||_F
double unitarity_defect(const CMatrix& u);
/// ||h - h^*||_F
double hermitian_defect(const CMatrix& h);

/// Elementwise complex conjugate, as a plain matrix.
CMatrix conj(const CMatrix& m);

/// Hermitian eigendecomposition with eigenvalues in increasing order.
struct HermitianEigen {
    RVector values;
    CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& h);

/// f(h) for Hermitian h, through the eigendecomposition.
template <class F>
CMatrix hermitian_apply(const CMatrix& h, F&& f)
{
    const auto e = hermitian_eigen(h);
    CVector mapped(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
    return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

/// exp(h) for Hermitian h.
CMatrix exp_hermitian(const CMatrix& h);
/// exp(s) for skew-Hermitian s (a unitary).
CMatrix exp_skew_hermitian(const CMatrix& s);
/// Principal logarithm of a Hermitian positive definite matrix.
CMatrix log_positive(const CMatrix& p);
/// Principal square root of a Hermitian positive semidefinite matrix.
CMatrix sqrt_positive(const CMatrix& p);

/// Deterministic RNG with independent streams keyed by (seed, stream).
///
/// Streams are derived by splitmix64 so that parallel trials can each own
/// an engine and results stay independent of thread scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t next() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0,1)).
CMatrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);
RMatrix random_real_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);
/// Haar-distributed unitary (QR of a Gaussian with phase correction).
CMatrix random_unitary(Rng& rng, Eigen::Index n);

} // namespace opideal
