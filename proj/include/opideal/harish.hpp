#pragma once

#include "opideal/linalg.hpp"

namespace opideal {

/// H = H+ (+) H-; p+ and p- are the upper-right and lower-left block spaces.
struct BlockSplit {
    int n_plus = 0;
    int n_minus = 0;
    int dim() const noexcept { return n_plus + n_minus; }
};

/// g = [[1, z_plus], [0, 1]] * kappa * [[1, 0], [z_minus, 1]].
struct HCFactors {
    CMatrix z_plus;  // n+ x n-
    CMatrix kappa;   // block diagonal
    CMatrix z_minus; // n- x n+

    CMatrix reconstruct() const;
};

/// Block factorization of g = [[A, B], [C, D]]:
///   z_plus = B D^{-1},  kappa = diag(A - B D^{-1} C, D),  z_minus = D^{-1} C.
/// Throws OutsideDomain when cond(D) > 1e12 (g is not in P+ K^C P-).
HCFactors hc_factorize(const CMatrix& g, const BlockSplit& split);

/// g.Z = (A Z + B)(C Z + D)^{-1}, the p+ part of g exp(Z).
/// Throws OutsideDomain when C Z + D is not invertible.
CMatrix hc_action(const CMatrix& g, const CMatrix& z, const BlockSplit& split);

/// J(g, Z) = kappa(g exp(Z)).
CMatrix hc_cocycle(const CMatrix& g, const CMatrix& z, const BlockSplit& split);

/// True iff C Z + D is invertible within the condition threshold.
bool hc_domain_test(const CMatrix& g, const CMatrix& z, const BlockSplit& split);

/// exp of Z in p+: [[1, Z], [0, 1]].
CMatrix exp_p_plus(const CMatrix& z, const BlockSplit& split);

} // namespace opideal
