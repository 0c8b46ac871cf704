#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "opideal/linalg.hpp"
#include "opideal/nest.hpp"

namespace opideal {

enum class ClassicalType { A, B, C, AI, AII, AIII, BI, BII, CI, CII };

inline constexpr std::array<ClassicalType, 10> kAllClassicalTypes = {
    ClassicalType::A,   ClassicalType::B,  ClassicalType::C,   ClassicalType::AI, ClassicalType::AII,
    ClassicalType::AIII, ClassicalType::BI, ClassicalType::BII, ClassicalType::CI, ClassicalType::CII};

const char* to_string(ClassicalType t) noexcept;
ClassicalType parse_classical_type(std::string_view text);

/// Types whose definition involves an anti-conjugation; these need even n.
bool uses_anti_conjugation(ClassicalType t) noexcept;
bool uses_conjugation(ClassicalType t) noexcept;
bool uses_signature(ClassicalType t) noexcept;

/// H = H+ (+) H-, with V = diag(1_{n+}, -1_{n-}).
struct Signature {
    int n_plus = 0;
    int n_minus = 0;
    CMatrix matrix() const;
};

/// Concrete data for the antilinear maps and the signature of a classical type.
///
/// An antilinear map J is stored as the unitary C with J v = C conj(v). In
/// this realization
///
///   J x J^{-1}   = C conj(x) C^*
///   J x^* J^{-1} = C x^T C^*
///   J^2 = +1  <=>  C conj(C) = +1,     J~^2 = -1  <=>  C~ conj(C~) = -1
///
/// and every defining relation below is rewritten through these two
/// identities (see relation residuals in classical.cpp).
struct StructureData {
    int n = 0;
    std::optional<CMatrix> conj;  // conjugation J
    std::optional<CMatrix> anti;  // anti-conjugation J~
    std::optional<Signature> split;

    /// Defaults: C = 1, C~ = [[0, 1], [-1, 0]] (block-diagonal per signature
    /// block for CII), V = diag(1_{n+}, -1_{n-}).
    static StructureData standard(ClassicalType type, int n,
                                  std::optional<Signature> split = std::nullopt);
};

/// Throws unless the structure carries exactly what `type` needs and
/// satisfies its invariants and compatibility conditions.
void validate_structure(ClassicalType type, const StructureData& s);

/// J x J^{-1} for the antilinear map realized by c.
CMatrix antilinear_conjugate(const CMatrix& c, const CMatrix& x);
/// J x^* J^{-1} for the antilinear map realized by c.
CMatrix antilinear_adjoint_conjugate(const CMatrix& c, const CMatrix& x);

/// Largest defining-relation residual, normalized by ||g||^deg (deg 1 or 2
/// depending on the relation, with ||g|| floored at 1). +inf if g is singular.
double group_residual(const CMatrix& g, ClassicalType type, const StructureData& s);
double algebra_residual(const CMatrix& x, ClassicalType type, const StructureData& s);

/// Residual <= tol * sqrt(n).
bool group_membership(const CMatrix& g, ClassicalType type, const StructureData& s, double tol);
bool algebra_membership(const CMatrix& x, ClassicalType type, const StructureData& s, double tol);

/// Projection onto the Lie algebra: averages over each defining involution.
CMatrix algebra_project(const CMatrix& x, ClassicalType type, const StructureData& s);

/// Product of three factors exp(skew part) exp(Hermitian part) of
/// radius-scaled projected Gaussian algebra elements.
CMatrix random_group_element(ClassicalType type, const StructureData& s, std::uint64_t seed,
                             double radius = 1.0);

struct CartanFactors {
    CMatrix k; // unitary, in G
    CMatrix x; // Hermitian, in the Lie algebra
};

/// g = k exp(x) with x = log(g^* g) / 2. Throws NotInGroup when the group
/// residual exceeds tol * sqrt(n), Singular for singular g.
CartanFactors cartan_decompose(const CMatrix& g, ClassicalType type, const StructureData& s,
                               double tol = 1e-8);

/// Theta(g) = (g^*)^{-1}.
CMatrix cartan_involution(const CMatrix& g);

/// Maximal flag of eigenvectors of a regular Hermitian x0, ordered by
/// decreasing eigenvalue. Throws DegenerateElement when two eigenvalues are
/// closer than 1e-8.
Flag eigenflag(const CMatrix& x0);

/// diag(n, n-1, ..., 1)
CMatrix default_regular_element(int n);

struct IwasawaFactors {
    CMatrix k;
    CMatrix a;
    CMatrix n;
    CMatrix x0;
};

IwasawaFactors iwasawa_decompose(const CMatrix& g, std::optional<CMatrix> x0 = std::nullopt);

struct IwasawaSplit {
    CMatrix xk; // skew-Hermitian
    CMatrix xa; // Hermitian, diagonal in the eigenbasis of x0
    CMatrix xn; // strictly upper in the eigenflag
};

/// gl(n) = k + a + n relative to the eigenflag of x0, through the
/// triangular truncations: xk = L - L^* + i Im D, xa = Re D, xn = U + L^*.
IwasawaSplit iwasawa_algebra_split(const CMatrix& x, const CMatrix& x0);

/// Dimension of {T : [T, g] = 0 for all g in gens and their adjoints}.
int commutant_dimension(std::span<const CMatrix> generators, double tol = 1e-10);
/// Irreducible iff the commutant is the scalars.
bool irreducibility_check(std::span<const CMatrix> generators, double tol = 1e-10);

} // namespace opideal
