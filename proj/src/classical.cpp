#include "opideal/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "opideal/errors.hpp"
#include "opideal/factor.hpp"

namespace opideal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConditionLimit = 1e12;
constexpr double kRegularGap = 1e-8;

CMatrix symplectic_form(int m)
{
    const int h = m / 2;
    CMatrix omega = CMatrix::Zero(m, m);
    omega.block(0, h, h, h) = CMatrix::Identity(h, h);
    omega.block(h, 0, h, h) = -CMatrix::Identity(h, h);
    return omega;
}

bool block_diagonal(const CMatrix& c, const Signature& sig, double tol)
{
    const int p = sig.n_plus, q = sig.n_minus;
    if (p == 0 || q == 0) return true;
    return c.block(0, p, p, q).norm() <= tol && c.block(p, 0, q, p).norm() <= tol;
}

// Relation kinds appearing in the defining equations.
//   Orthogonal(C):  g^{-1} = J g^* J^{-1}      <=>  g C g^T C^* = 1
//                   x = -J x^* J^{-1}          <=>  x + C x^T C^* = 0
//   Commuting(C):   g J = J g                  <=>  g C = C conj(g)
//                   x J = J x                  <=>  x C = C conj(x)
//   Signature:      g^* V g = V ;  x^* V = -V x
enum class Relation { OrthConj, OrthAnti, CommConj, CommAnti, Signature };

std::vector<Relation> relations_of(ClassicalType t)
{
    using R = Relation;
    switch (t) {
    case ClassicalType::A: return {};
    case ClassicalType::B: return {R::OrthConj};
    case ClassicalType::C: return {R::OrthAnti};
    case ClassicalType::AI: return {R::CommConj};
    case ClassicalType::AII: return {R::CommAnti};
    case ClassicalType::AIII: return {R::Signature};
    case ClassicalType::BI: return {R::OrthConj, R::Signature};
    case ClassicalType::BII: return {R::OrthConj, R::CommAnti};
    case ClassicalType::CI: return {R::OrthAnti, R::CommConj};
    case ClassicalType::CII: return {R::OrthAnti, R::Signature};
    }
    return {};
}

const CMatrix& conj_matrix(const StructureData& s, Relation r)
{
    const bool anti = r == Relation::OrthAnti || r == Relation::CommAnti;
    return anti ? *s.anti : *s.conj;
}

double floor_norm(const CMatrix& m) { return std::max(1.0, op_norm(m)); }

} // namespace

const char* to_string(ClassicalType t) noexcept
{
    switch (t) {
    case ClassicalType::A: return "A";
    case ClassicalType::B: return "B";
    case ClassicalType::C: return "C";
    case ClassicalType::AI: return "AI";
    case ClassicalType::AII: return "AII";
    case ClassicalType::AIII: return "AIII";
    case ClassicalType::BI: return "BI";
    case ClassicalType::BII: return "BII";
    case ClassicalType::CI: return "CI";
    case ClassicalType::CII: return "CII";
    }
    return "?";
}

ClassicalType parse_classical_type(std::string_view text)
{
    for (auto t : kAllClassicalTypes)
        if (text == to_string(t)) return t;
    throw Error(ErrorCode::InvalidInput, "unknown classical type '" + std::string(text) + "'");
}

bool uses_anti_conjugation(ClassicalType t) noexcept
{
    switch (t) {
    case ClassicalType::C:
    case ClassicalType::AII:
    case ClassicalType::BII:
    case ClassicalType::CI:
    case ClassicalType::CII: return true;
    default: return false;
    }
}

bool uses_conjugation(ClassicalType t) noexcept
{
    switch (t) {
    case ClassicalType::B:
    case ClassicalType::AI:
    case ClassicalType::BI:
    case ClassicalType::BII:
    case ClassicalType::CI: return true;
    default: return false;
    }
}

bool uses_signature(ClassicalType t) noexcept
{
    return t == ClassicalType::AIII || t == ClassicalType::BI || t == ClassicalType::CII;
}

CMatrix Signature::matrix() const
{
    const int n = n_plus + n_minus;
    CMatrix v = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = i < n_plus ? 1.0 : -1.0;
    return v;
}

StructureData StructureData::standard(ClassicalType type, int n, std::optional<Signature> split)
{
    if (n < 1) throw Error(ErrorCode::InvalidInput, "structure dimension must be >= 1", n);
    StructureData s;
    s.n = n;
    if (uses_conjugation(type)) s.conj = CMatrix::Identity(n, n);
    if (uses_signature(type)) {
        if (!split)
            throw Error(ErrorCode::InvalidInput,
                        std::string("type ") + to_string(type) + " needs a signature split");
        s.split = split;
    }
    if (uses_anti_conjugation(type)) {
        if (n % 2 != 0)
            throw Error(ErrorCode::InvalidInput,
                        std::string("type ") + to_string(type) + " needs an even dimension", n);
        if (type == ClassicalType::CII) {
            const int p = split->n_plus, q = split->n_minus;
            if (p % 2 != 0 || q % 2 != 0)
                throw Error(ErrorCode::InvalidInput,
                            "type CII needs both signature blocks of even dimension");
            CMatrix anti = CMatrix::Zero(n, n);
            if (p > 0) anti.topLeftCorner(p, p) = symplectic_form(p);
            if (q > 0) anti.bottomRightCorner(q, q) = symplectic_form(q);
            s.anti = anti;
        } else {
            s.anti = symplectic_form(n);
        }
    }
    validate_structure(type, s);
    return s;
}

void validate_structure(ClassicalType type, const StructureData& s)
{
    const std::string name = to_string(type);
    const int n = s.n;
    const double tol = 1e-12 * std::max(1, n);
    auto mismatch = [&](const std::string& what) {
        throw Error(ErrorCode::InvalidInput, "type " + name + " / structure mismatch: " + what);
    };

    if (uses_conjugation(type) != s.conj.has_value())
        mismatch(uses_conjugation(type) ? "conjugation required" : "unexpected conjugation");
    if (uses_anti_conjugation(type) != s.anti.has_value())
        mismatch(uses_anti_conjugation(type) ? "anti-conjugation required"
                                             : "unexpected anti-conjugation");
    if (uses_signature(type) != s.split.has_value())
        mismatch(uses_signature(type) ? "signature split required" : "unexpected signature split");
    if (uses_anti_conjugation(type) && n % 2 != 0) mismatch("odd dimension");

    const CMatrix one = CMatrix::Identity(n, n);
    if (s.conj) {
        require_dim(*s.conj, n, "conjugation matrix");
        if (unitarity_defect(*s.conj) > tol) mismatch("conjugation matrix is not unitary");
        if ((*s.conj * conj(*s.conj) - one).norm() > tol) mismatch("J^2 != 1");
    }
    if (s.anti) {
        require_dim(*s.anti, n, "anti-conjugation matrix");
        if (unitarity_defect(*s.anti) > tol) mismatch("anti-conjugation matrix is not unitary");
        if ((*s.anti * conj(*s.anti) + one).norm() > tol) mismatch("J~^2 != -1");
    }
    if (s.split) {
        if (s.split->n_plus < 0 || s.split->n_minus < 0 || s.split->n_plus + s.split->n_minus != n)
            mismatch("signature split does not add up to n");
    }
    if (s.conj && s.anti) {
        // J J~ = J~ J  <=>  C conj(C~) = C~ conj(C)
        if ((*s.conj * conj(*s.anti) - *s.anti * conj(*s.conj)).norm() > tol)
            mismatch("conjugation and anti-conjugation do not commute");
    }
    if (type == ClassicalType::BI && !block_diagonal(*s.conj, *s.split, tol))
        mismatch("conjugation does not preserve H+ and H-");
    if (type == ClassicalType::CII && !block_diagonal(*s.anti, *s.split, tol))
        mismatch("anti-conjugation does not preserve H+ and H-");
}

CMatrix antilinear_conjugate(const CMatrix& c, const CMatrix& x)
{
    return c * x.conjugate() * c.adjoint();
}

CMatrix antilinear_adjoint_conjugate(const CMatrix& c, const CMatrix& x)
{
    return c * x.transpose() * c.adjoint();
}

double group_residual(const CMatrix& g, ClassicalType type, const StructureData& s)
{
    require_finite(g, "group_residual");
    require_dim(g, s.n, "group_residual");
    if (!(condition_number(g) <= kConditionLimit)) return kInf;
    const double gn = floor_norm(g);
    const CMatrix one = CMatrix::Identity(s.n, s.n);
    double worst = 0.0;
    for (auto r : relations_of(type)) {
        double res = 0.0;
        switch (r) {
        case Relation::OrthConj:
        case Relation::OrthAnti: {
            const CMatrix& c = conj_matrix(s, r);
            res = (g * antilinear_adjoint_conjugate(c, g) - one).norm() / (gn * gn);
            break;
        }
        case Relation::CommConj:
        case Relation::CommAnti: {
            const CMatrix& c = conj_matrix(s, r);
            res = (g * c - c * g.conjugate()).norm() / gn;
            break;
        }
        case Relation::Signature: {
            const CMatrix v = s.split->matrix();
            res = (g.adjoint() * v * g - v).norm() / (gn * gn);
            break;
        }
        }
        worst = std::max(worst, res);
    }
    return worst;
}

double algebra_residual(const CMatrix& x, ClassicalType type, const StructureData& s)
{
    require_finite(x, "algebra_residual");
    require_dim(x, s.n, "algebra_residual");
    const double xn = floor_norm(x);
    double worst = 0.0;
    for (auto r : relations_of(type)) {
        double res = 0.0;
        switch (r) {
        case Relation::OrthConj:
        case Relation::OrthAnti:
            res = (x + antilinear_adjoint_conjugate(conj_matrix(s, r), x)).norm();
            break;
        case Relation::CommConj:
        case Relation::CommAnti: {
            const CMatrix& c = conj_matrix(s, r);
            res = (x * c - c * x.conjugate()).norm();
            break;
        }
        case Relation::Signature: {
            const CMatrix v = s.split->matrix();
            res = (x.adjoint() * v + v * x).norm();
            break;
        }
        }
        worst = std::max(worst, res / xn);
    }
    return worst;
}

bool group_membership(const CMatrix& g, ClassicalType type, const StructureData& s, double tol)
{
    validate_structure(type, s);
    return group_residual(g, type, s) <= tol * std::sqrt(static_cast<double>(s.n));
}

bool algebra_membership(const CMatrix& x, ClassicalType type, const StructureData& s, double tol)
{
    validate_structure(type, s);
    return algebra_residual(x, type, s) <= tol * std::sqrt(static_cast<double>(s.n));
}

CMatrix algebra_project(const CMatrix& x, ClassicalType type, const StructureData& s)
{
    validate_structure(type, s);
    require_finite(x, "algebra_project");
    require_dim(x, s.n, "algebra_project");
    CMatrix y = x;
    // Each relation is y = tau(y) for a real-linear involution tau; the
    // involutions of one type commute, so averaging one after another
    // projects onto the common fixed space.
    for (auto r : relations_of(type)) {
        CMatrix tau;
        switch (r) {
        case Relation::OrthConj:
        case Relation::OrthAnti: tau = -antilinear_adjoint_conjugate(conj_matrix(s, r), y); break;
        case Relation::CommConj:
        case Relation::CommAnti: tau = antilinear_conjugate(conj_matrix(s, r), y); break;
        case Relation::Signature: {
            const CMatrix v = s.split->matrix();
            tau = -v * y.adjoint() * v;
            break;
        }
        }
        y = 0.5 * (y + tau);
    }
    return y;
}

CMatrix random_group_element(ClassicalType type, const StructureData& s, std::uint64_t seed,
                             double radius)
{
    validate_structure(type, s);
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive", radius);
    Rng rng(seed, 0xC1A55);
    const int n = s.n;
    CMatrix g = CMatrix::Identity(n, n);
    for (int factor = 0; factor < 3; ++factor) {
        CMatrix x = algebra_project(random_gaussian(rng, n, n), type, s);
        const double nx = x.norm();
        if (nx == 0.0) continue;
        x *= radius / nx;
        const CMatrix herm = 0.5 * (x + x.adjoint());
        const CMatrix skew = 0.5 * (x - x.adjoint());
        g = (g * exp_skew_hermitian(skew) * exp_hermitian(herm)).eval();
    }
    return g;
}

CartanFactors cartan_decompose(const CMatrix& g, ClassicalType type, const StructureData& s,
                               double tol)
{
    validate_structure(type, s);
    require_finite(g, "cartan_decompose");
    require_dim(g, s.n, "cartan_decompose");
    const double cond = condition_number(g);
    if (!(cond <= kConditionLimit))
        throw Error(ErrorCode::Singular, "cartan_decompose: matrix is numerically singular", cond);
    const double res = group_residual(g, type, s);
    if (res > tol * std::sqrt(static_cast<double>(s.n)))
        throw Error(ErrorCode::NotInGroup,
                    std::string("cartan_decompose: matrix is not in group ") + to_string(type), res);

    const auto eig = hermitian_eigen(g.adjoint() * g);
    CVector half_log(eig.values.size());
    CVector inv_sqrt(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        half_log(i) = 0.5 * std::log(eig.values(i));
        inv_sqrt(i) = 1.0 / std::sqrt(eig.values(i));
    }
    CartanFactors out;
    out.x = eig.vectors * half_log.asDiagonal() * eig.vectors.adjoint();
    out.x = (0.5 * (out.x + out.x.adjoint())).eval();
    out.k = g * (eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint());
    return out;
}

CMatrix cartan_involution(const CMatrix& g)
{
    require_finite(g, "cartan_involution");
    require_square(g, "cartan_involution");
    const double cond = condition_number(g);
    if (!(cond <= kConditionLimit))
        throw Error(ErrorCode::Singular, "cartan_involution: matrix is numerically singular", cond);
    return g.adjoint().partialPivLu().inverse();
}

CMatrix default_regular_element(int n)
{
    CMatrix x0 = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) x0(i, i) = static_cast<double>(n - i);
    return x0;
}

Flag eigenflag(const CMatrix& x0)
{
    require_finite(x0, "eigenflag");
    require_square(x0, "eigenflag");
    const double asym = hermitian_defect(x0);
    if (asym > 1e-12 * std::max(1.0, x0.norm()))
        throw Error(ErrorCode::NotHermitian, "regular element must be Hermitian", asym);
    const auto eig = hermitian_eigen(x0);
    const auto n = eig.values.size();
    for (Eigen::Index i = 1; i < n; ++i) {
        const double gap = eig.values(i) - eig.values(i - 1);
        if (gap < kRegularGap) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "regular element is degenerate: eigenvalues " << eig.values(i - 1) << " and "
                << eig.values(i) << " collide";
            throw Error(ErrorCode::DegenerateElement, msg.str(), gap);
        }
    }
    // Decreasing eigenvalue order; phase fixed by making the largest entry
    // of each eigenvector real positive.
    CMatrix basis(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        CVector v = eig.vectors.col(n - 1 - j);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        const Complex phase = v(arg) / std::abs(v(arg));
        v /= phase;
        basis.col(j) = v;
    }
    return Flag::maximal(std::move(basis));
}

IwasawaFactors iwasawa_decompose(const CMatrix& g, std::optional<CMatrix> x0)
{
    require_finite(g, "iwasawa_decompose");
    require_square(g, "iwasawa_decompose");
    const auto n = g.rows();
    CMatrix reg = x0 ? *x0 : default_regular_element(static_cast<int>(n));
    require_dim(reg, n, "regular element");
    const Flag flag = eigenflag(reg);
    const auto qb = qb_nest(g, flag);

    CMatrix b = flag.to_flag_coords(qb.b);
    CMatrix a_f = CMatrix::Zero(n, n);
    CMatrix n_f = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double diag = b(i, i).real();
        a_f(i, i) = diag;
        for (Eigen::Index j = i + 1; j < n; ++j) n_f(i, j) = b(i, j) / diag;
        n_f(i, i) = 1.0;
    }
    return {qb.u, flag.from_flag_coords(a_f), flag.from_flag_coords(n_f), std::move(reg)};
}

IwasawaSplit iwasawa_algebra_split(const CMatrix& x, const CMatrix& x0)
{
    require_finite(x, "iwasawa_algebra_split");
    require_dim(x, x0.rows(), "iwasawa_algebra_split");
    const Flag flag = eigenflag(x0);
    const auto finest = Partition::finest(flag);
    const CMatrix y = flag.to_flag_coords(x);
    const CMatrix lo = mask_in_flag_coords(finest, y, Truncation::Lower);
    const CMatrix up = mask_in_flag_coords(finest, y, Truncation::Upper);
    const CMatrix di = mask_in_flag_coords(finest, y, Truncation::Diagonal);
    const CMatrix re = di.real().cast<Complex>();
    const CMatrix im = Complex(0.0, 1.0) * di.imag().cast<Complex>();
    return {flag.from_flag_coords(lo - lo.adjoint() + im), flag.from_flag_coords(re),
            flag.from_flag_coords(up + lo.adjoint())};
}

int commutant_dimension(std::span<const CMatrix> generators, double tol)
{
    if (generators.empty())
        throw Error(ErrorCode::InvalidInput, "irreducibility_check: empty generator list");
    const auto n = generators.front().rows();
    for (const auto& g : generators) {
        require_finite(g, "irreducibility_check");
        require_dim(g, n, "irreducibility_check");
    }
    const auto nn = n * n;
    const CMatrix one = CMatrix::Identity(n, n);
    // Column-major vec: vec(g T) = (1 (x) g) vec T, vec(T g) = (g^T (x) 1) vec T.
    auto commutator_block = [&](const CMatrix& g) {
        CMatrix blk = CMatrix::Zero(nn, nn);
        for (Eigen::Index j = 0; j < n; ++j) blk.block(j * n, j * n, n, n) += g;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) blk.block(i * n, j * n, n, n) -= g(j, i) * one;
        return blk;
    };
    CMatrix system(2 * static_cast<Eigen::Index>(generators.size()) * nn, nn);
    Eigen::Index row = 0;
    for (const auto& g : generators) {
        system.middleRows(row, nn) = commutator_block(g);
        row += nn;
        system.middleRows(row, nn) = commutator_block(g.adjoint());
        row += nn;
    }
    Eigen::JacobiSVD<CMatrix> svd(system);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv(0));
    int nullity = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= cutoff) ++nullity;
    return nullity;
}

bool irreducibility_check(std::span<const CMatrix> generators, double tol)
{
    return commutant_dimension(generators, tol) == 1;
}

} // namespace opideal
