#include "opideal/factor.hpp"

#include <algorithm>
#include <cmath>

#include "opideal/errors.hpp"

namespace opideal {

namespace {

constexpr double kPositivityThreshold = 1e-10;
constexpr double kConditionLimit = 1e12;

struct Blocks {
    std::vector<Eigen::Index> begin;
    std::vector<Eigen::Index> size;
};

Blocks blocks_of(const Partition& p)
{
    Blocks b;
    for (int i = 0; i < p.block_count(); ++i) {
        b.begin.push_back(p.block_begin(i));
        b.size.push_back(p.block_size(i));
    }
    return b;
}

void require_positive_definite(const CMatrix& a)
{
    const double scale = std::max(1.0, a.norm());
    const double asym = hermitian_defect(a);
    if (asym > 1e-12 * scale)
        throw Error(ErrorCode::NotHermitian, "ldl_nest: matrix is not Hermitian", asym);
    const auto eig = hermitian_eigen(a);
    const double lo = eig.values(0);
    const double hi = eig.values(eig.values.size() - 1);
    if (!(hi > 0.0) || lo <= kPositivityThreshold * hi)
        throw Error(ErrorCode::NotPositiveDefinite,
                    "ldl_nest: matrix is not positive definite (smallest eigenvalue " +
                        std::to_string(lo) + ")",
                    lo);
}

// Block elimination in flag coordinates. `s` is overwritten by Schur
// complements. For UpperFirst the last block is eliminated first.
void block_ldl(CMatrix s, const Blocks& blk, LdlOrder order, CMatrix& r, CMatrix& d)
{
    const auto n = s.rows();
    const auto nb = static_cast<int>(blk.begin.size());
    r = CMatrix::Zero(n, n);
    d = CMatrix::Zero(n, n);

    if (order == LdlOrder::UpperFirst) {
        // a = (1 + r) d (1 + r^*): column block i of (1 + r) above the diagonal
        // is S_{ji} d_i^{-1} for j < i.
        for (int i = nb - 1; i >= 0; --i) {
            const auto bi = blk.begin[i], ni = blk.size[i];
            const CMatrix di = 0.5 * (s.block(bi, bi, ni, ni) + s.block(bi, bi, ni, ni).adjoint());
            d.block(bi, bi, ni, ni) = di;
            if (bi == 0) continue;
            const auto llt = di.llt();
            // r_{:, i} = S_{:, i} d_i^{-1}  (rows above block i)
            const CMatrix above = s.block(0, bi, bi, ni);
            const CMatrix ri = llt.solve(above.adjoint()).adjoint();
            r.block(0, bi, bi, ni) = ri;
            s.topLeftCorner(bi, bi) -= ri * di * ri.adjoint();
        }
    } else {
        // a = (1 + r^*) d (1 + r): row block i of (1 + r) right of the
        // diagonal is d_i^{-1} S_{ij} for j > i.
        for (int i = 0; i < nb; ++i) {
            const auto bi = blk.begin[i], ni = blk.size[i];
            const CMatrix di = 0.5 * (s.block(bi, bi, ni, ni) + s.block(bi, bi, ni, ni).adjoint());
            d.block(bi, bi, ni, ni) = di;
            const auto rest = n - bi - ni;
            if (rest == 0) continue;
            const auto llt = di.llt();
            const CMatrix ri = llt.solve(s.block(bi, bi + ni, ni, rest));
            r.block(bi, bi + ni, ni, rest) = ri;
            s.bottomRightCorner(rest, rest) -= ri.adjoint() * di * ri;
        }
    }
}

CMatrix block_diag_sqrt(const CMatrix& d, const Blocks& blk)
{
    CMatrix out = CMatrix::Zero(d.rows(), d.cols());
    for (std::size_t i = 0; i < blk.begin.size(); ++i) {
        const auto bi = blk.begin[i], ni = blk.size[i];
        out.block(bi, bi, ni, ni) = sqrt_positive(d.block(bi, bi, ni, ni));
    }
    return out;
}

// One pass of g = u b in flag coordinates.
void qb_pass(const CMatrix& g, const Blocks& blk, CMatrix& u, CMatrix& b)
{
    const auto n = g.rows();
    CMatrix r, d;
    block_ldl(g.adjoint() * g, blk, LdlOrder::UpperLast, r, d);
    b = block_diag_sqrt(d, blk) * (CMatrix::Identity(n, n) + r);
    // u = g b^{-1}  <=>  b^* u^* = g^*
    u = b.adjoint().partialPivLu().solve(g.adjoint()).adjoint();
}

} // namespace

CMatrix LdlFactors::reconstruct() const
{
    const CMatrix one = CMatrix::Identity(r.rows(), r.cols());
    if (order == LdlOrder::UpperFirst) return (one + r) * d * (one + r).adjoint();
    return (one + r).adjoint() * d * (one + r);
}

LdlFactors ldl_nest(const CMatrix& a, const Partition& p, LdlOrder order)
{
    require_finite(a, "ldl_nest");
    require_dim(a, p.dim(), "ldl_nest");
    require_positive_definite(a);
    const auto& flag = p.flag();
    LdlFactors out;
    out.order = order;
    CMatrix r, d;
    block_ldl(flag.to_flag_coords(a), blocks_of(p), order, r, d);
    out.r = flag.from_flag_coords(r);
    out.d = flag.from_flag_coords(d);
    return out;
}

QbFactors qb_nest(const CMatrix& g, const Flag& flag)
{
    require_finite(g, "qb_nest");
    require_dim(g, flag.dim(), "qb_nest");
    const double cond = condition_number(g);
    if (!(cond <= kConditionLimit))
        throw Error(ErrorCode::Singular,
                    "qb_nest: matrix is numerically singular (condition number above 1e12)", cond);

    const auto finest = Partition::finest(flag);
    const auto blk = blocks_of(finest);
    const CMatrix gf = flag.to_flag_coords(g);

    CMatrix u1, b1, u2, b2;
    qb_pass(gf, blk, u1, b1);
    qb_pass(u1, blk, u2, b2);
    CMatrix b = b2 * b1;
    CMatrix u = u2;

    // Normalize: write each diagonal block as w_i h_i (polar) and move w_i into u.
    for (std::size_t i = 0; i < blk.begin.size(); ++i) {
        const auto bi = blk.begin[i], ni = blk.size[i];
        const CMatrix bii = b.block(bi, bi, ni, ni);
        Eigen::JacobiSVD<CMatrix> svd(bii, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const CMatrix w = svd.matrixU() * svd.matrixV().adjoint();
        b.middleRows(bi, ni) = (w.adjoint() * b.middleRows(bi, ni)).eval();
        u.middleCols(bi, ni) = (u.middleCols(bi, ni) * w).eval();
        // Exact zeros below the block diagonal and a Hermitian diagonal block.
        const CMatrix h = b.block(bi, bi, ni, ni);
        b.block(bi, bi, ni, ni) = 0.5 * (h + h.adjoint());
        b.block(bi, 0, ni, bi).setZero();
    }
    return {flag.from_flag_coords(u), flag.from_flag_coords(b)};
}

int nilpotency_check(const CMatrix& r, const Partition& p)
{
    require_finite(r, "nilpotency_check");
    require_dim(r, p.dim(), "nilpotency_check");
    const double scale = std::max(1.0, r.norm());
    const CMatrix rf = p.flag().to_flag_coords(r);
    const double off = (rf - mask_in_flag_coords(p, rf, Truncation::Upper)).norm();
    if (off > 1e-12 * scale)
        throw Error(ErrorCode::InvalidInput, "nilpotency_check: r is not strictly block-upper", off);

    CMatrix power = r;
    double bound = scale;
    const int limit = p.dim() + 1;
    for (int k = 1; k <= limit; ++k) {
        if (power.norm() <= 1e-12 * bound) return k;
        power = (power * r).eval();
        bound *= scale;
    }
    return limit;
}

} // namespace opideal
