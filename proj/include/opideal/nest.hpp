#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "opideal/linalg.hpp"
#include "opideal/symfunc.hpp"

namespace opideal {

/// Orthonormal flag: the nest of subspaces spanned by the first dims[i]
/// columns of a unitary basis. 0 is implicit; dims ends at n.
class Flag {
public:
    Flag(CMatrix basis, std::vector<int> dims);

    /// Standard basis, every dimension 1..n a cut.
    static Flag standard(int n);
    /// Standard basis with the given cuts.
    static Flag standard(int n, std::vector<int> dims);
    /// Every dimension 1..n a cut.
    static Flag maximal(CMatrix basis);

    int dim() const noexcept { return static_cast<int>(basis_.cols()); }
    const CMatrix& basis() const noexcept { return basis_; }
    std::span<const int> dims() const noexcept { return dims_; }
    bool is_cut(int k) const noexcept;
    bool is_standard() const noexcept { return standard_; }
    bool is_maximal() const noexcept { return static_cast<int>(dims_.size()) == dim(); }

    /// X expressed in the adapted basis (Q^* X Q) and back (Q Y Q^*).
    CMatrix to_flag_coords(const CMatrix& x) const;
    CMatrix from_flag_coords(const CMatrix& y) const;

    bool operator==(const Flag& other) const;

private:
    CMatrix basis_;
    std::vector<int> dims_;
    bool standard_ = false;
};

/// Finite sub-chain of a flag: cut dimensions, always ending at n.
class Partition {
public:
    Partition(Flag flag, std::vector<int> cuts);

    static Partition finest(const Flag& flag);
    /// The partition {0, 1}.
    static Partition trivial(const Flag& flag);

    const Flag& flag() const noexcept { return flag_; }
    std::span<const int> cuts() const noexcept { return cuts_; }
    int dim() const noexcept { return flag_.dim(); }
    int block_count() const noexcept { return static_cast<int>(cuts_.size()); }
    /// Block index of a coordinate in flag coordinates.
    int block_of(int index) const;
    /// First coordinate of block b.
    int block_begin(int b) const { return b == 0 ? 0 : cuts_[b - 1]; }
    int block_size(int b) const { return cuts_[b] - block_begin(b); }

    /// P <= Q: this partition's cuts are a subset of `finer`'s (same flag).
    bool is_refined_by(const Partition& finer) const;

private:
    Flag flag_;
    std::vector<int> cuts_;
    std::vector<int> block_index_;
};

/// Orthogonal projection onto the span of the first k basis vectors.
CMatrix project(const Flag& flag, int k);

enum class Truncation { Diagonal, Upper, Lower };

/// D_P, U_P, L_P: block-diagonal, strictly block-upper and strictly
/// block-lower parts of X relative to the partition.
CMatrix truncate(const Partition& p, const CMatrix& x, Truncation which);
CMatrix truncate_diag(const Partition& p, const CMatrix& x);
CMatrix truncate_upper(const Partition& p, const CMatrix& x);
CMatrix truncate_lower(const Partition& p, const CMatrix& x);

/// Truncation in flag coordinates; no rotation.
CMatrix mask_in_flag_coords(const Partition& p, const CMatrix& y, Truncation which);

struct TriangularParts {
    CMatrix lower;
    CMatrix diag;
    CMatrix upper;
};

/// Truncations at the finest partition the flag supports.
TriangularParts triangular_integral(const Flag& flag, const CMatrix& x);

struct RefinementReport {
    double upper_coarse_fine = 0.0;  // ||U_P U_Q X - U_P X||
    double upper_fine_coarse = 0.0;  // ||U_Q U_P X - U_P X||
    double lower_coarse_fine = 0.0;  // ||L_P L_Q X - L_P X||
    double lower_fine_coarse = 0.0;  // ||L_Q L_P X - L_P X||
    double diag_coarse_fine = 0.0;   // ||D_P D_Q X - D_Q X||
    double diag_fine_coarse = 0.0;   // ||D_Q D_P X - D_Q X||
    double max_deviation() const;
};

/// Evaluates the refinement identities for coarse <= fine on X (Frobenius).
RefinementReport refinement_identities_check(const Partition& coarse, const Partition& fine,
                                             const CMatrix& x);

/// True iff ||b e - e b e||_F <= tol * max(1, ||b||_F) for every flag projection e.
bool is_in_nest_algebra(const CMatrix& b, const Flag& flag, double tol);

struct GrowthRow {
    int n = 0;
    double ratio = 0.0;
};

/// Largest observed ||U(X)||_Phi / ||X||_Phi over `trials` random rank-one
/// complex Gaussian X per dimension, standard maximal flag. Trial t for
/// dimension n draws from RNG stream (seed, n, t), so the table does not
/// depend on `jobs`.
std::vector<GrowthRow> truncation_norm_experiment(const SymNormFunc& phi,
                                                  std::span<const int> sizes, int trials,
                                                  std::uint64_t seed, int jobs = 1);

/// Ratio for a single trial.
double truncation_ratio_trial(const SymNormFunc& phi, int n, int trial, std::uint64_t seed);

namespace serial {
/// Single-threaded reference for opideal::truncation_norm_experiment.
std::vector<GrowthRow> truncation_norm_experiment(const SymNormFunc& phi,
                                                  std::span<const int> sizes, int trials,
                                                  std::uint64_t seed);
} // namespace serial

} // namespace opideal
