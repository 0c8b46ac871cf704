#include "opideal/harish.hpp"

#include <string>

#include "opideal/errors.hpp"

namespace opideal {

namespace {

constexpr double kConditionLimit = 1e12;

void validate(const CMatrix& g, const BlockSplit& split, const char* what)
{
    if (split.n_plus < 1 || split.n_minus < 1)
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": split blocks must be positive");
    require_finite(g, what);
    require_dim(g, split.dim(), what);
}

void validate_z(const CMatrix& z, const BlockSplit& split, const char* what)
{
    require_finite(z, what);
    if (z.rows() != split.n_plus || z.cols() != split.n_minus)
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": Z must be " + std::to_string(split.n_plus) + "x" +
                        std::to_string(split.n_minus));
}

} // namespace

CMatrix HCFactors::reconstruct() const
{
    const auto p = z_plus.rows(), q = z_plus.cols();
    const auto n = p + q;
    CMatrix upper = CMatrix::Identity(n, n);
    upper.topRightCorner(p, q) = z_plus;
    CMatrix lower = CMatrix::Identity(n, n);
    lower.bottomLeftCorner(q, p) = z_minus;
    return upper * kappa * lower;
}

CMatrix exp_p_plus(const CMatrix& z, const BlockSplit& split)
{
    validate_z(z, split, "exp_p_plus");
    CMatrix e = CMatrix::Identity(split.dim(), split.dim());
    e.topRightCorner(split.n_plus, split.n_minus) = z;
    return e;
}

HCFactors hc_factorize(const CMatrix& g, const BlockSplit& split)
{
    validate(g, split, "hc_factorize");
    const int p = split.n_plus, q = split.n_minus;
    const CMatrix a = g.topLeftCorner(p, p);
    const CMatrix b = g.topRightCorner(p, q);
    const CMatrix c = g.bottomLeftCorner(q, p);
    const CMatrix d = g.bottomRightCorner(q, q);
    const double cond = condition_number(d);
    if (!(cond <= kConditionLimit))
        throw Error(ErrorCode::OutsideDomain,
                    "hc_factorize: lower-right block is singular, g is not in P+ K^C P-", cond);
    const auto lu = d.partialPivLu();
    HCFactors f;
    // B D^{-1} = (D^{-T} B^T)^T
    f.z_plus = d.transpose().partialPivLu().solve(b.transpose()).transpose();
    f.z_minus = lu.solve(c);
    f.kappa = CMatrix::Zero(p + q, p + q);
    f.kappa.topLeftCorner(p, p) = a - f.z_plus * c;
    f.kappa.bottomRightCorner(q, q) = d;
    return f;
}

bool hc_domain_test(const CMatrix& g, const CMatrix& z, const BlockSplit& split)
{
    validate(g, split, "hc_domain_test");
    validate_z(z, split, "hc_domain_test");
    const int p = split.n_plus, q = split.n_minus;
    const CMatrix denom = g.bottomLeftCorner(q, p) * z + g.bottomRightCorner(q, q);
    return condition_number(denom) <= kConditionLimit;
}

CMatrix hc_action(const CMatrix& g, const CMatrix& z, const BlockSplit& split)
{
    validate(g, split, "hc_action");
    validate_z(z, split, "hc_action");
    const int p = split.n_plus, q = split.n_minus;
    const CMatrix num = g.topLeftCorner(p, p) * z + g.topRightCorner(p, q);
    const CMatrix denom = g.bottomLeftCorner(q, p) * z + g.bottomRightCorner(q, q);
    const double cond = condition_number(denom);
    if (!(cond <= kConditionLimit))
        throw Error(ErrorCode::OutsideDomain, "hc_action: C Z + D is singular, Z is outside the domain",
                    cond);
    return denom.transpose().partialPivLu().solve(num.transpose()).transpose();
}

CMatrix hc_cocycle(const CMatrix& g, const CMatrix& z, const BlockSplit& split)
{
    validate(g, split, "hc_cocycle");
    validate_z(z, split, "hc_cocycle");
    const CMatrix moved = g * exp_p_plus(z, split);
    try {
        return hc_factorize(moved, split).kappa;
    } catch (const Error& e) {
        throw Error(ErrorCode::OutsideDomain,
                    "hc_cocycle: C Z + D is singular, Z is outside the domain", e.quantity());
    }
}

} // namespace opideal
