#include "opideal/nest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opideal/errors.hpp"
#include "opideal/parallel.hpp"

namespace opideal {

namespace {

void validate_dims(const std::vector<int>& dims, int n, const char* what)
{
    if (dims.empty() || dims.back() != n)
        throw Error(ErrorCode::InvalidInput,
                    std::string(what) + ": cut list must be nonempty and end at n = " +
                        std::to_string(n));
    int prev = 0;
    for (int d : dims) {
        if (d <= prev)
            throw Error(ErrorCode::InvalidInput,
                        std::string(what) + ": cuts must be strictly increasing and positive", d);
        prev = d;
    }
}

} // namespace

Flag::Flag(CMatrix basis, std::vector<int> dims) : basis_(std::move(basis)), dims_(std::move(dims))
{
    require_finite(basis_, "flag basis");
    require_square(basis_, "flag basis");
    const int n = dim();
    validate_dims(dims_, n, "flag");
    const double defect = unitarity_defect(basis_);
    if (defect > 1e-12 * n)
        throw Error(ErrorCode::InvalidInput, "flag basis is not unitary", defect);
    standard_ = basis_ == CMatrix::Identity(n, n);
}

Flag Flag::standard(int n)
{
    if (n < 1) throw Error(ErrorCode::InvalidInput, "flag dimension must be >= 1", n);
    std::vector<int> dims(n);
    for (int i = 0; i < n; ++i) dims[i] = i + 1;
    return Flag(CMatrix::Identity(n, n), std::move(dims));
}

Flag Flag::standard(int n, std::vector<int> dims)
{
    if (n < 1) throw Error(ErrorCode::InvalidInput, "flag dimension must be >= 1", n);
    return Flag(CMatrix::Identity(n, n), std::move(dims));
}

Flag Flag::maximal(CMatrix basis)
{
    const auto n = static_cast<int>(basis.cols());
    std::vector<int> dims(n);
    for (int i = 0; i < n; ++i) dims[i] = i + 1;
    return Flag(std::move(basis), std::move(dims));
}

bool Flag::is_cut(int k) const noexcept
{
    return k == 0 || std::binary_search(dims_.begin(), dims_.end(), k);
}

CMatrix Flag::to_flag_coords(const CMatrix& x) const
{
    if (standard_) return x;
    return basis_.adjoint() * x * basis_;
}

CMatrix Flag::from_flag_coords(const CMatrix& y) const
{
    if (standard_) return y;
    return basis_ * y * basis_.adjoint();
}

bool Flag::operator==(const Flag& other) const
{
    return dims_ == other.dims_ && basis_.rows() == other.basis_.rows() && basis_ == other.basis_;
}

Partition::Partition(Flag flag, std::vector<int> cuts) : flag_(std::move(flag)), cuts_(std::move(cuts))
{
    validate_dims(cuts_, flag_.dim(), "partition");
    for (int c : cuts_)
        if (!flag_.is_cut(c))
            throw Error(ErrorCode::InvalidInput,
                        "partition cut " + std::to_string(c) + " is not a dimension of the flag", c);
    block_index_.resize(flag_.dim());
    int b = 0;
    for (int i = 0; i < flag_.dim(); ++i) {
        if (i >= cuts_[b]) ++b;
        block_index_[i] = b;
    }
}

Partition Partition::finest(const Flag& flag)
{
    return Partition(flag, std::vector<int>(flag.dims().begin(), flag.dims().end()));
}

Partition Partition::trivial(const Flag& flag) { return Partition(flag, {flag.dim()}); }

int Partition::block_of(int index) const { return block_index_.at(index); }

bool Partition::is_refined_by(const Partition& finer) const
{
    if (!(flag_ == finer.flag_)) return false;
    return std::includes(finer.cuts_.begin(), finer.cuts_.end(), cuts_.begin(), cuts_.end());
}

CMatrix project(const Flag& flag, int k)
{
    if (!flag.is_cut(k))
        throw Error(ErrorCode::InvalidInput,
                    "project: " + std::to_string(k) + " is not a cut of the flag", k);
    const int n = flag.dim();
    if (k == 0) return CMatrix::Zero(n, n);
    const auto cols = flag.basis().leftCols(k);
    return cols * cols.adjoint();
}

CMatrix mask_in_flag_coords(const Partition& p, const CMatrix& y, Truncation which)
{
    const int n = p.dim();
    CMatrix out = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const int bj = p.block_of(j);
        for (int i = 0; i < n; ++i) {
            const int bi = p.block_of(i);
            const bool keep = which == Truncation::Diagonal ? bi == bj
                              : which == Truncation::Upper  ? bi < bj
                                                            : bi > bj;
            if (keep) out(i, j) = y(i, j);
        }
    }
    return out;
}

CMatrix truncate(const Partition& p, const CMatrix& x, Truncation which)
{
    require_dim(x, p.dim(), "truncate");
    const auto& flag = p.flag();
    return flag.from_flag_coords(mask_in_flag_coords(p, flag.to_flag_coords(x), which));
}

CMatrix truncate_diag(const Partition& p, const CMatrix& x) { return truncate(p, x, Truncation::Diagonal); }
CMatrix truncate_upper(const Partition& p, const CMatrix& x) { return truncate(p, x, Truncation::Upper); }
CMatrix truncate_lower(const Partition& p, const CMatrix& x) { return truncate(p, x, Truncation::Lower); }

TriangularParts triangular_integral(const Flag& flag, const CMatrix& x)
{
    require_dim(x, flag.dim(), "triangular_integral");
    const auto finest = Partition::finest(flag);
    const CMatrix y = flag.to_flag_coords(x);
    return {flag.from_flag_coords(mask_in_flag_coords(finest, y, Truncation::Lower)),
            flag.from_flag_coords(mask_in_flag_coords(finest, y, Truncation::Diagonal)),
            flag.from_flag_coords(mask_in_flag_coords(finest, y, Truncation::Upper))};
}

double RefinementReport::max_deviation() const
{
    return std::max({upper_coarse_fine, upper_fine_coarse, lower_coarse_fine, lower_fine_coarse,
                     diag_coarse_fine, diag_fine_coarse});
}

RefinementReport refinement_identities_check(const Partition& coarse, const Partition& fine,
                                             const CMatrix& x)
{
    if (!coarse.is_refined_by(fine))
        throw Error(ErrorCode::InvalidInput,
                    "refinement_identities_check: first partition is not coarser than the second");
    require_dim(x, coarse.dim(), "refinement_identities_check");
    RefinementReport r;
    const auto up = [&](const Partition& p, const CMatrix& m) { return truncate_upper(p, m); };
    const auto lo = [&](const Partition& p, const CMatrix& m) { return truncate_lower(p, m); };
    const auto di = [&](const Partition& p, const CMatrix& m) { return truncate_diag(p, m); };

    const CMatrix up_c = up(coarse, x);
    r.upper_coarse_fine = (up(coarse, up(fine, x)) - up_c).norm();
    r.upper_fine_coarse = (up(fine, up_c) - up_c).norm();
    const CMatrix lo_c = lo(coarse, x);
    r.lower_coarse_fine = (lo(coarse, lo(fine, x)) - lo_c).norm();
    r.lower_fine_coarse = (lo(fine, lo_c) - lo_c).norm();
    const CMatrix di_f = di(fine, x);
    r.diag_coarse_fine = (di(coarse, di_f) - di_f).norm();
    r.diag_fine_coarse = (di(fine, di(coarse, x)) - di_f).norm();
    return r;
}

bool is_in_nest_algebra(const CMatrix& b, const Flag& flag, double tol)
{
    require_dim(b, flag.dim(), "is_in_nest_algebra");
    const double bound = tol * std::max(1.0, b.norm());
    for (int k : flag.dims()) {
        const CMatrix e = project(flag, k);
        if ((b * e - e * b * e).norm() > bound) return false;
    }
    return true;
}

double truncation_ratio_trial(const SymNormFunc& phi, int n, int trial, std::uint64_t seed)
{
    if (n == 1) return 0.0;
    Rng rng(seed, (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(trial));
    const CMatrix u = random_gaussian(rng, n, 1);
    const CMatrix v = random_gaussian(rng, n, 1);
    const CMatrix x = u * v.adjoint();
    CMatrix upper = x.triangularView<Eigen::StrictlyUpper>();
    return phi_norm(phi, upper) / phi_norm(phi, x);
}

namespace {

void validate_experiment(std::span<const int> sizes, int trials)
{
    if (trials < 1) throw Error(ErrorCode::InvalidInput, "experiment: trials must be >= 1", trials);
    for (int n : sizes)
        if (n < 1) throw Error(ErrorCode::InvalidInput, "experiment: sizes must be >= 1", n);
}

} // namespace

std::vector<GrowthRow> truncation_norm_experiment(const SymNormFunc& phi,
                                                  std::span<const int> sizes, int trials,
                                                  std::uint64_t seed, int jobs)
{
    validate_experiment(sizes, trials);
    std::vector<GrowthRow> rows;
    for (int n : sizes) {
        std::vector<double> ratios(trials, 0.0);
        parallel_for(0, trials, jobs, [&](long t) {
            ratios[t] = truncation_ratio_trial(phi, n, static_cast<int>(t), seed);
        });
        rows.push_back({n, *std::max_element(ratios.begin(), ratios.end())});
    }
    return rows;
}

namespace serial {

std::vector<GrowthRow> truncation_norm_experiment(const SymNormFunc& phi,
                                                  std::span<const int> sizes, int trials,
                                                  std::uint64_t seed)
{
    validate_experiment(sizes, trials);
    std::vector<GrowthRow> rows;
    for (int n : sizes) {
        double best = 0.0;
        for (int t = 0; t < trials; ++t) best = std::max(best, truncation_ratio_trial(phi, n, t, seed));
        rows.push_back({n, best});
    }
    return rows;
}

} // namespace serial

} // namespace opideal
