#pragma once

#include "opideal/linalg.hpp"
#include "opideal/nest.hpp"

namespace opideal {

/// Which side the strictly upper factor sits on.
enum class LdlOrder {
    /// a = (1 + r) d (1 + r^*)
    UpperFirst,
    /// a = (1 + r^*) d (1 + r)
    UpperLast,
};

struct LdlFactors {
    CMatrix r; // strictly block-upper for the partition
    CMatrix d; // block-diagonal, Hermitian positive definite
    LdlOrder order = LdlOrder::UpperFirst;

    CMatrix reconstruct() const;
};

struct QbFactors {
    CMatrix u; // unitary
    CMatrix b; // invertible, in the nest algebra, positive block diagonal
};

/// Nest-relative LDL^* factorization of a Hermitian positive definite
/// matrix by block Schur-complement elimination over the partition blocks.
///
/// Throws NotHermitian, or NotPositiveDefinite carrying the smallest
/// eigenvalue when it is below 1e-10 times the largest.
LdlFactors ldl_nest(const CMatrix& a, const Partition& p, LdlOrder order = LdlOrder::UpperFirst);

/// g = u b with u unitary and b in the nest algebra of `flag`, obtained from
/// the UpperLast factorization of g^* g: b = d^{1/2} (1 + r), u = g b^{-1}.
/// A second pass on u restores unitarity to rounding level, and the block
/// diagonal of b is normalized to be Hermitian positive definite, which
/// makes the pair unique. On the standard maximal flag this is QR with a
/// positive diagonal.
///
/// Throws Singular when cond(g) > 1e12.
QbFactors qb_nest(const CMatrix& g, const Flag& flag);

/// Smallest k with ||r^k|| <= 1e-12 max(1, ||r||)^k. Throws if r is not
/// strictly block-upper for the partition.
int nilpotency_check(const CMatrix& r, const Partition& p);

} // namespace opideal
