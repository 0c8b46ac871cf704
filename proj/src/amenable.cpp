#include "opideal/amenable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "opideal/errors.hpp"

namespace opideal {

namespace {

[[noreturn]] void bad_group(const std::string& what)
{
    throw Error(ErrorCode::InvalidGroup, "invalid group table: " + what);
}

void require_same_size(const FiniteGroup& g, Eigen::Index size, const char* what)
{
    if (size != g.order())
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected " + std::to_string(g.order()) +
                        " entries, got " + std::to_string(size));
}

FiniteGroup from_matrices(const std::vector<CMatrix>& elems, std::vector<std::string> labels)
{
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const CMatrix prod = elems[x] * elems[y];
            for (int z = 0; z < n; ++z)
                if ((prod - elems[z]).norm() < 1e-9) table[x][y] = z;
        }
    return FiniteGroup(std::move(table), std::move(labels));
}

} // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels)
    : table_(std::move(table)), labels_(std::move(labels))
{
    const int n = order();
    if (n < 1) bad_group("empty table");
    for (int x = 0; x < n; ++x) {
        if (static_cast<int>(table_[x].size()) != n)
            bad_group("row " + std::to_string(x) + " has the wrong length");
        for (int v : table_[x])
            if (v < 0 || v >= n) bad_group("entry out of range in row " + std::to_string(x));
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) bad_group("no identity element");
    inverse_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y)
            if (table_[x][y] == identity_ && table_[y][x] == identity_) {
                inverse_[x] = y;
                break;
            }
        if (inverse_[x] < 0) bad_group("element " + std::to_string(x) + " has no inverse");
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (table_[table_[x][y]][z] != table_[x][table_[y][z]])
                    bad_group("associativity fails for (" + std::to_string(x) + ", " +
                              std::to_string(y) + ", " + std::to_string(z) + ")");
    if (labels_.empty()) {
        for (int x = 0; x < n; ++x) labels_.push_back(std::to_string(x));
    } else if (static_cast<int>(labels_.size()) != n) {
        bad_group("label count does not match the order");
    }
}

void FiniteGroup::require_element(int x) const
{
    if (x < 0 || x >= order())
        throw Error(ErrorCode::InvalidInput, "group element index out of range", x);
}

FiniteGroup trivial_group() { return FiniteGroup({{0}}, {"e"}); }

FiniteGroup cyclic_group(int n)
{
    if (n < 1) throw Error(ErrorCode::InvalidInput, "cyclic group order must be >= 1", n);
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) table[x][y] = (x + y) % n;
    return FiniteGroup(std::move(table));
}

FiniteGroup dihedral_group(int n)
{
    if (n < 1) throw Error(ErrorCode::InvalidInput, "dihedral group needs n >= 1", n);
    const int order = 2 * n;
    std::vector<std::vector<int>> table(order, std::vector<int>(order));
    std::vector<std::string> labels(order);
    for (int x = 0; x < order; ++x) {
        const int a = x % n, b = x / n;
        labels[x] = "r" + std::to_string(a) + (b ? "s" : "");
        for (int y = 0; y < order; ++y) {
            const int c = y % n, d = y / n;
            // r^a s^b r^c s^d = r^{a + (-1)^b c} s^{b + d}
            const int rot = ((a + (b ? -c : c)) % n + n) % n;
            table[x][y] = rot + n * ((b + d) % 2);
        }
    }
    return FiniteGroup(std::move(table), std::move(labels));
}

namespace {

std::vector<CMatrix> quaternion_matrices()
{
    const Complex i(0.0, 1.0);
    CMatrix one = CMatrix::Identity(2, 2);
    CMatrix qi(2, 2), qj(2, 2), qk(2, 2);
    qi << i, 0, 0, -i;
    qj << 0, 1, -1, 0;
    qk << 0, i, i, 0;
    return {one, -one, qi, -qi, qj, -qj, qk, -qk};
}

} // namespace

FiniteGroup quaternion_group()
{
    return from_matrices(quaternion_matrices(), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

PermutationGroup symmetric_group(int k)
{
    if (k < 1 || k > 6) throw Error(ErrorCode::InvalidInput, "symmetric group degree must be 1..6", k);
    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const int n = static_cast<int>(perms.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    std::vector<std::string> labels(n);
    for (int x = 0; x < n; ++x) {
        for (int v : perms[x]) labels[x] += std::to_string(v);
        for (int y = 0; y < n; ++y) {
            std::vector<int> comp(k);
            for (int i = 0; i < k; ++i) comp[i] = perms[x][perms[y][i]];
            table[x][y] = static_cast<int>(std::lower_bound(perms.begin(), perms.end(), comp) - perms.begin());
        }
    }
    return {FiniteGroup(std::move(table), std::move(labels)), std::move(perms)};
}

FiniteGroup group_by_name(std::string_view name)
{
    const std::string s(name);
    if (s == "trivial") return trivial_group();
    if (s == "s3") return symmetric_group(3).group;
    if (s == "s4") return symmetric_group(4).group;
    if (s == "q8") return quaternion_group();
    auto parse_tail = [&](std::size_t from) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s.substr(from), &used);
            if (used + from == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw Error(ErrorCode::InvalidInput, "unknown group '" + s + "'");
    };
    if (s.size() > 1 && s[0] == 'z') return cyclic_group(parse_tail(1));
    if (s.size() > 1 && s[0] == 'd') return dihedral_group(parse_tail(1));
    throw Error(ErrorCode::InvalidInput, "unknown group '" + s + "'");
}

Functional Functional::point_mass(const FiniteGroup& g, int x)
{
    g.require_element(x);
    Functional f{CVector::Zero(g.order())};
    f.weights(x) = 1.0;
    return f;
}

Functional Functional::uniform(const FiniteGroup& g)
{
    return {CVector::Constant(g.order(), Complex(1.0 / g.order(), 0.0))};
}

Complex Functional::operator()(const GroupFunction& psi) const
{
    if (psi.values.size() != weights.size())
        throw Error(ErrorCode::DimensionMismatch, "functional and function sizes differ");
    return (weights.array() * psi.values.array()).sum();
}

bool Functional::is_mean(double tol) const
{
    Complex total = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (std::abs(weights(i).imag()) > tol || weights(i).real() < -tol) return false;
        total += weights(i);
    }
    return std::abs(total - 1.0) <= tol;
}

GroupFunction translate_left(const FiniteGroup& g, int x, const GroupFunction& psi)
{
    g.require_element(x);
    require_same_size(g, psi.values.size(), "translate_left");
    GroupFunction out{CVector(g.order())};
    for (int y = 0; y < g.order(); ++y) out.values(y) = psi.values(g.mul(x, y));
    return out;
}

GroupFunction translate_right(const FiniteGroup& g, int x, const GroupFunction& psi)
{
    g.require_element(x);
    require_same_size(g, psi.values.size(), "translate_right");
    GroupFunction out{CVector(g.order())};
    for (int y = 0; y < g.order(); ++y) out.values(y) = psi.values(g.mul(y, x));
    return out;
}

double invariance_residual(const FiniteGroup& g, const Functional& mu)
{
    require_same_size(g, mu.weights.size(), "invariance_residual");
    // mu(L_x delta_z) = mu(x^{-1} z)
    double worst = 0.0;
    for (int x = 0; x < g.order(); ++x)
        for (int z = 0; z < g.order(); ++z)
            worst = std::max(worst, std::abs(mu.weights(g.mul(g.inverse(x), z)) - mu.weights(z)));
    return worst;
}

InvariantMeans invariant_means(const FiniteGroup& g)
{
    const int n = g.order();
    // Rows: w(x^{-1} z) - w(z) = 0 for all x, z; last row: sum w = 1.
    RMatrix invariance = RMatrix::Zero(static_cast<Eigen::Index>(n) * n, n);
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            const auto row = static_cast<Eigen::Index>(x) * n + z;
            invariance(row, g.mul(g.inverse(x), z)) += 1.0;
            invariance(row, z) -= 1.0;
        }
    RMatrix system(invariance.rows() + 1, n);
    system << invariance, RMatrix::Ones(1, n);
    RVector rhs = RVector::Zero(system.rows());
    rhs(system.rows() - 1) = 1.0;

    Eigen::JacobiSVD<RMatrix> inv_svd(invariance);
    inv_svd.setThreshold(1e-10);
    InvariantMeans out;
    out.constraint_rank = static_cast<int>(inv_svd.rank());
    out.unique = out.constraint_rank == n - 1;

    Eigen::JacobiSVD<RMatrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector w = svd.solve(rhs);
    out.residual = (system * w - rhs).cwiseAbs().maxCoeff();
    Functional mu{w.cast<Complex>()};
    if (mu.is_mean(1e-12)) out.means.push_back(std::move(mu));
    return out;
}

Functional arens_product(const FiniteGroup& g, const Functional& mu, const Functional& nu)
{
    require_same_size(g, mu.weights.size(), "arens_product");
    require_same_size(g, nu.weights.size(), "arens_product");
    Functional out{CVector::Zero(g.order())};
    for (int x = 0; x < g.order(); ++x)
        for (int y = 0; y < g.order(); ++y) out.weights(g.mul(x, y)) += mu.weights(x) * nu.weights(y);
    return out;
}

GroupFunction sigma(const FiniteGroup& g, const GroupFunction& psi)
{
    require_same_size(g, psi.values.size(), "sigma");
    GroupFunction out{CVector(g.order())};
    for (int x = 0; x < g.order(); ++x) out.values(x) = std::conj(psi.values(g.inverse(x)));
    return out;
}

Functional Sigma(const FiniteGroup& g, const Functional& mu)
{
    require_same_size(g, mu.weights.size(), "Sigma");
    Functional out{CVector(g.order())};
    for (int x = 0; x < g.order(); ++x) out.weights(x) = std::conj(mu.weights(g.inverse(x)));
    return out;
}

UnitaryRep::UnitaryRep(const FiniteGroup& g, std::vector<CMatrix> matrices, double tol)
    : group_(g), matrices_(std::move(matrices))
{
    if (static_cast<int>(matrices_.size()) != g.order())
        throw Error(ErrorCode::DimensionMismatch, "representation needs one matrix per element");
    dim_ = static_cast<int>(matrices_.front().rows());
    for (const auto& m : matrices_) {
        require_dim(m, dim_, "representation matrix");
        const double defect = unitarity_defect(m);
        if (defect > tol * dim_)
            throw Error(ErrorCode::InvalidInput, "representation matrix is not unitary", defect);
    }
    const double id_defect = (matrices_[g.identity()] - CMatrix::Identity(dim_, dim_)).norm();
    if (id_defect > tol * dim_)
        throw Error(ErrorCode::InvalidInput, "representation does not fix the identity", id_defect);
    for (int x = 0; x < g.order(); ++x)
        for (int y = 0; y < g.order(); ++y) {
            const double h = (matrices_[g.mul(x, y)] - matrices_[x] * matrices_[y]).norm();
            if (h > tol * dim_)
                throw Error(ErrorCode::InvalidInput, "representation is not a homomorphism", h);
        }
}

std::vector<Complex> UnitaryRep::character() const
{
    std::vector<Complex> chi;
    for (const auto& m : matrices_) chi.push_back(m.trace());
    return chi;
}

UnitaryRep trivial_rep(const FiniteGroup& g)
{
    return UnitaryRep(g, std::vector<CMatrix>(g.order(), CMatrix::Identity(1, 1)));
}

UnitaryRep regular_rep(const FiniteGroup& g)
{
    const int n = g.order();
    std::vector<CMatrix> mats;
    for (int x = 0; x < n; ++x) {
        CMatrix m = CMatrix::Zero(n, n);
        for (int y = 0; y < n; ++y) m(g.mul(x, y), y) = 1.0;
        mats.push_back(std::move(m));
    }
    return UnitaryRep(g, std::move(mats));
}

UnitaryRep sign_rep(const PermutationGroup& s)
{
    std::vector<CMatrix> mats;
    for (const auto& p : s.perms) {
        int inversions = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
        mats.push_back(CMatrix::Constant(1, 1, inversions % 2 ? -1.0 : 1.0));
    }
    return UnitaryRep(s.group, std::move(mats));
}

UnitaryRep standard_rep(const PermutationGroup& s)
{
    const int k = static_cast<int>(s.perms.front().size());
    if (k < 2) throw Error(ErrorCode::InvalidInput, "standard representation needs degree >= 2", k);
    // Orthonormal basis of the sum-zero subspace: complete the constant
    // vector to a unitary by QR and drop it.
    CMatrix seed = CMatrix::Identity(k, k);
    seed.col(0).setConstant(1.0);
    Eigen::HouseholderQR<CMatrix> qr(seed);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
    const CMatrix basis = q.rightCols(k - 1);
    std::vector<CMatrix> mats;
    for (const auto& p : s.perms) {
        CMatrix perm = CMatrix::Zero(k, k);
        for (int i = 0; i < k; ++i) perm(p[i], i) = 1.0;
        mats.push_back(basis.adjoint() * perm * basis);
    }
    return UnitaryRep(s.group, std::move(mats));
}

UnitaryRep quaternion_rep() { return UnitaryRep(quaternion_group(), quaternion_matrices()); }

UnitaryRep cyclic_character(int n, int j)
{
    const auto g = cyclic_group(n);
    std::vector<CMatrix> mats;
    for (int x = 0; x < n; ++x)
        mats.push_back(CMatrix::Constant(1, 1, std::polar(1.0, 2.0 * std::numbers::pi * j * x / n)));
    return UnitaryRep(g, std::move(mats));
}

CMatrix integrate_rep(const UnitaryRep& rep, const Functional& mu)
{
    require_same_size(rep.group(), mu.weights.size(), "integrate_rep");
    CMatrix out = CMatrix::Zero(rep.dim(), rep.dim());
    for (int x = 0; x < rep.group().order(); ++x) out += mu.weights(x) * rep(x);
    return out;
}

namespace {

// Gram matrix of the form (psi, chi) -> mu(psi chi^*) in the delta basis:
// entry (j, i) = (delta_i, delta_j).
CMatrix gram_matrix(const FiniteGroup& g, const Functional& mu)
{
    require_same_size(g, mu.weights.size(), "gns");
    const int n = g.order();
    CMatrix gram = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) gram(i, i) = mu.weights(i);
    return gram;
}

} // namespace

CMatrix gns_quotient_basis(const FiniteGroup& g, const Functional& mu)
{
    const CMatrix gram = gram_matrix(g, mu);
    const double asym = hermitian_defect(gram);
    if (asym > 1e-12)
        throw Error(ErrorCode::InvalidInput, "gns: the form is not Hermitian", asym);
    const auto eig = hermitian_eigen(gram);
    const auto n = eig.values.size();
    const double top = eig.values(n - 1);
    if (eig.values(0) < -1e-12 * std::max(1.0, top))
        throw Error(ErrorCode::InvalidInput, "gns: the form is not positive semidefinite",
                    eig.values(0));
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = n; i-- > 0;)
        if (eig.values(i) > 1e-12 * top) kept.push_back(i);
    CMatrix basis(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
        basis.col(c) = eig.vectors.col(kept[c]) / std::sqrt(eig.values(kept[c]));
    return basis;
}

UnitaryRep gns_regular(const FiniteGroup& g, const Functional& mu)
{
    if (!mu.is_mean(1e-12))
        throw Error(ErrorCode::InvalidInput, "gns_regular: functional is not a mean");
    const double inv = invariance_residual(g, mu);
    if (inv > 1e-12)
        throw Error(ErrorCode::InvalidInput, "gns_regular: mean is not left invariant", inv);
    const int n = g.order();
    const CMatrix gram = gram_matrix(g, mu);
    const CMatrix basis = gns_quotient_basis(g, mu);
    std::vector<CMatrix> mats;
    for (int x = 0; x < n; ++x) {
        // L_{x^{-1}} delta_y = delta_{x y}
        CMatrix shift = CMatrix::Zero(n, n);
        for (int y = 0; y < n; ++y) shift(g.mul(x, y), y) = 1.0;
        mats.push_back(basis.adjoint() * gram * shift * basis);
    }
    return UnitaryRep(g, std::move(mats));
}

bool triviality_test(const FiniteGroup& g, const Functional& mu, double tol)
{
    require_same_size(g, mu.weights.size(), "triviality_test");
    const int n = g.order();
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                // chi = delta_a, psi = delta_b: mu(chi psi) = w(a)[a = b],
                // mu(chi L_x psi) = w(a)[x a = b].
                const Complex lhs = a == b ? mu.weights(a) : Complex(0.0);
                const Complex rhs = g.mul(x, a) == b ? mu.weights(a) : Complex(0.0);
                if (std::abs(lhs - rhs) > tol) return false;
            }
    return true;
}

} // namespace opideal
