#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "opideal/linalg.hpp"

namespace opideal {

/// Finite group given by its Cayley table: table[x][y] = x y.
class FiniteGroup {
public:
    /// Validates closure, identity, inverses and associativity; throws
    /// InvalidGroup naming the first violated law.
    explicit FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels = {});

    int order() const noexcept { return static_cast<int>(table_.size()); }
    int mul(int x, int y) const { return table_[x][y]; }
    int inverse(int x) const { return inverse_[x]; }
    int identity() const noexcept { return identity_; }
    const std::vector<std::vector<int>>& table() const noexcept { return table_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    void require_element(int x) const;

    bool operator==(const FiniteGroup& other) const { return table_ == other.table_; }

private:
    std::vector<std::vector<int>> table_;
    std::vector<std::string> labels_;
    std::vector<int> inverse_;
    int identity_ = 0;
};

FiniteGroup trivial_group();
FiniteGroup cyclic_group(int n);
/// D_n of order 2n; element r^a s^b has index a + n b.
FiniteGroup dihedral_group(int n);
FiniteGroup quaternion_group();

/// S_k realized on permutations of {0..k-1}, lexicographic order, with
/// composition (x y)(i) = x(y(i)).
struct PermutationGroup {
    FiniteGroup group;
    std::vector<std::vector<int>> perms;
};
PermutationGroup symmetric_group(int k);

/// "trivial", "z<n>", "d<n>", "s3", "s4", "q8".
FiniteGroup group_by_name(std::string_view name);

struct GroupFunction {
    CVector values;
};

/// mu(psi) = sum_x weights(x) psi(x).
struct Functional {
    CVector weights;

    static Functional point_mass(const FiniteGroup& g, int x);
    static Functional uniform(const FiniteGroup& g);
    Complex operator()(const GroupFunction& psi) const;
    /// Nonnegative real weights summing to 1, within tol.
    bool is_mean(double tol = 1e-12) const;
};

/// (L_x psi)(y) = psi(x y). With this convention L_x L_y = L_{y x}.
GroupFunction translate_left(const FiniteGroup& g, int x, const GroupFunction& psi);
/// (R_x psi)(y) = psi(y x). R_x R_y = R_{x y}.
GroupFunction translate_right(const FiniteGroup& g, int x, const GroupFunction& psi);

struct InvariantMeans {
    std::vector<Functional> means;
    /// Rank of the invariance constraints; order - 1 certifies uniqueness.
    int constraint_rank = 0;
    double residual = 0.0;
    bool unique = false;
};

/// Solves {w : mu(L_x psi) = mu(psi) for all x, psi; sum w = 1, w >= 0}
/// by least squares and certifies uniqueness through the constraint rank.
InvariantMeans invariant_means(const FiniteGroup& g);

/// Max over x, psi in the delta basis of |mu(L_x psi) - mu(psi)|.
double invariance_residual(const FiniteGroup& g, const Functional& mu);

/// <mu . nu, psi> = <mu, nu . psi> with (nu . psi)(x) = <nu, L_x psi>;
/// on a finite group this is the convolution sum_{x y = z} mu(x) nu(y).
Functional arens_product(const FiniteGroup& g, const Functional& mu, const Functional& nu);

/// (sigma psi)(x) = conj(psi(x^{-1})).
GroupFunction sigma(const FiniteGroup& g, const GroupFunction& psi);
/// <Sigma(mu), phi> = conj(<mu, sigma(phi)>), i.e. weights conj(mu(x^{-1})).
Functional Sigma(const FiniteGroup& g, const Functional& mu);

class UnitaryRep {
public:
    /// Throws unless there is one unitary per element, pi(e) = 1 and
    /// pi(x y) = pi(x) pi(y), all within tol.
    UnitaryRep(const FiniteGroup& g, std::vector<CMatrix> matrices, double tol = 1e-12);

    int dim() const noexcept { return dim_; }
    const CMatrix& operator()(int x) const { return matrices_.at(x); }
    const std::vector<CMatrix>& matrices() const noexcept { return matrices_; }
    const FiniteGroup& group() const noexcept { return group_; }
    std::vector<Complex> character() const;

private:
    FiniteGroup group_;
    std::vector<CMatrix> matrices_;
    int dim_ = 0;
};

UnitaryRep trivial_rep(const FiniteGroup& g);
/// Left regular representation on C^G: pi(x) delta_y = delta_{x y}.
UnitaryRep regular_rep(const FiniteGroup& g);
UnitaryRep sign_rep(const PermutationGroup& s);
/// Permutation representation restricted to the orthogonal complement of
/// the constant vector (irreducible, dimension k - 1).
UnitaryRep standard_rep(const PermutationGroup& s);
/// The defining 2-dimensional irreducible representation of Q8.
UnitaryRep quaternion_rep();
/// 1-dimensional character x -> exp(2 pi i j x / n) of Z_n.
UnitaryRep cyclic_character(int n, int j);

/// sum_x mu(x) pi(x).
CMatrix integrate_rep(const UnitaryRep& rep, const Functional& mu);

/// Orthonormal basis of the GNS quotient for the form (psi, chi) -> mu(psi chi^*):
/// columns are coefficient vectors in the delta basis. Eigenvalues of the
/// Gram matrix below 1e-12 times the largest are discarded.
CMatrix gns_quotient_basis(const FiniteGroup& g, const Functional& mu);

/// Regular representation on the GNS space of an invariant mean, induced
/// by psi -> L_{x^{-1}} psi. Throws when mu is not an invariant mean.
UnitaryRep gns_regular(const FiniteGroup& g, const Functional& mu);

/// True iff mu(chi psi) = mu(chi L_x psi) for all x and delta functions chi, psi.
bool triviality_test(const FiniteGroup& g, const Functional& mu, double tol = 1e-12);

} // namespace opideal
