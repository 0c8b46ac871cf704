#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "opideal/linalg.hpp"

namespace opideal::testing {

inline CMatrix random_hpd(Rng& rng, int n)
{
    const CMatrix z = random_gaussian(rng, n, n);
    return z * z.adjoint() + 0.5 * CMatrix::Identity(n, n);
}

inline CMatrix random_hermitian(Rng& rng, int n)
{
    const CMatrix z = random_gaussian(rng, n, n);
    return (z + z.adjoint()) / 2.0;
}

inline double rel(const CMatrix& a, const CMatrix& b)
{
    return (a - b).norm() / std::max(1.0, b.norm());
}

// Random cut list ending at n.
inline std::vector<int> random_cuts(Rng& rng, int n)
{
    std::vector<int> cuts;
    for (int k = 1; k < n; ++k)
        if (rng.uniform() < 0.5) cuts.push_back(k);
    cuts.push_back(n);
    return cuts;
}

// Modified Gram-Schmidt QR with positive diagonal, column by column.
inline void gram_schmidt(const CMatrix& g, CMatrix& q, CMatrix& r)
{
    const auto n = g.cols();
    q = g;
    r = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i) {
                const Complex c = q.col(i).dot(q.col(j));
                r(i, j) += c;
                q.col(j) -= c * q.col(i);
            }
        r(j, j) = q.col(j).norm();
        q.col(j) /= r(j, j).real();
    }
}

// Scalar Cholesky a = l l^* by the textbook recurrence.
inline CMatrix scalar_cholesky(const CMatrix& a)
{
    const auto n = a.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex s = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) s -= l(j, k) * std::conj(l(j, k));
        l(j, j) = std::sqrt(s.real());
        for (Eigen::Index i = j + 1; i < n; ++i) {
            Complex t = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) t -= l(i, k) * std::conj(l(j, k));
            l(i, j) = t / l(j, j);
        }
    }
    return l;
}

inline std::vector<double> random_sorted(Rng& rng, int len)
{
    std::vector<double> v(len);
    for (auto& x : v) x = rng.uniform();
    std::sort(v.rbegin(), v.rend());
    return v;
}

inline double lp(const std::vector<double>& v, double p)
{
    if (std::isinf(p)) return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::pow(x, p);
    return std::pow(s, 1.0 / p);
}

} // namespace opideal::testing

#include "opideal/classical.hpp"

namespace opideal::testing {

// Dimensions and signature splits where every type has a default structure.
inline std::optional<Signature> default_split(ClassicalType t, int n)
{
    if (!uses_signature(t)) return std::nullopt;
    if (t == ClassicalType::CII) {
        if (n == 2) return Signature{2, 0};
        const int q = 2 * ((n / 2) / 2);
        return Signature{n - q, q};
    }
    return Signature{(n + 1) / 2, n / 2};
}

inline StructureData default_structure(ClassicalType t, int n)
{
    return StructureData::standard(t, n, default_split(t, n));
}

// The defining relations for the default structures, written out directly:
// C = 1, C~ = Omega (block diagonal per signature block for CII), V = diag(1, -1).
inline double relation_oracle(const CMatrix& g, ClassicalType t, const StructureData& s)
{
    const auto n = g.rows();
    const CMatrix one = CMatrix::Identity(n, n);
    double worst = 0.0;
    auto take = [&](const CMatrix& m) { worst = std::max(worst, m.norm()); };
    const CMatrix gbar = g.conjugate();
    switch (t) {
    case ClassicalType::A: break;
    case ClassicalType::B: take(g * g.transpose() - one); break;
    case ClassicalType::C: take(g * *s.anti * g.transpose() - *s.anti); break;
    case ClassicalType::AI: take(g - gbar); break;
    case ClassicalType::AII: take(g * *s.anti - *s.anti * gbar); break;
    case ClassicalType::AIII: take(g.adjoint() * s.split->matrix() * g - s.split->matrix()); break;
    case ClassicalType::BI:
        take(g * g.transpose() - one);
        take(g.adjoint() * s.split->matrix() * g - s.split->matrix());
        break;
    case ClassicalType::BII:
        take(g * g.transpose() - one);
        take(g * *s.anti - *s.anti * gbar);
        break;
    case ClassicalType::CI:
        take(g * *s.anti * g.transpose() - *s.anti);
        take(g - gbar);
        break;
    case ClassicalType::CII:
        take(g * *s.anti * g.transpose() - *s.anti);
        take(g.adjoint() * s.split->matrix() * g - s.split->matrix());
        break;
    }
    return worst;
}

inline std::vector<int> dims_for(ClassicalType t)
{
    if (uses_anti_conjugation(t)) return {2, 4, 6};
    return {2, 3, 4, 6};
}

} // namespace opideal::testing
