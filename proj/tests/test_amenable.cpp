#include <gtest/gtest.h>

#include "opideal/amenable.hpp"
#include "opideal/errors.hpp"
#include "support.hpp"

using namespace opideal;

namespace {

Functional random_functional(Rng& rng, int order)
{
    return Functional{random_gaussian(rng, order, 1).col(0)};
}

GroupFunction random_function(Rng& rng, int order)
{
    return GroupFunction{random_gaussian(rng, order, 1).col(0)};
}

std::vector<FiniteGroup> sample_groups()
{
    return {trivial_group(),     cyclic_group(2),           cyclic_group(6),
            dihedral_group(4),   symmetric_group(3).group, quaternion_group(),
            symmetric_group(4).group};
}

} // namespace

TEST(Group, BuiltinsValidate)
{
    EXPECT_EQ(group_by_name("s3").order(), 6);
    EXPECT_EQ(group_by_name("s4").order(), 24);
    EXPECT_EQ(group_by_name("q8").order(), 8);
    EXPECT_EQ(group_by_name("z6").order(), 6);
    EXPECT_EQ(group_by_name("d5").order(), 10);
    EXPECT_EQ(group_by_name("trivial").order(), 1);
    EXPECT_THROW(group_by_name("monster"), Error);
}

TEST(Group, FuzzedTablesRejected)
{
    Rng rng(101);
    int rejected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto table = symmetric_group(3).group.table();
        const int i = static_cast<int>(rng.next() % 6), j = static_cast<int>(rng.next() % 6);
        const int v = static_cast<int>(rng.next() % 6);
        if (table[i][j] == v) continue;
        table[i][j] = v;
        EXPECT_THROW(FiniteGroup{table}, Error);
        ++rejected;
    }
    EXPECT_GT(rejected, 100);
    EXPECT_THROW(FiniteGroup({{0, 1}, {1, 2}}), Error);
    EXPECT_THROW(FiniteGroup({{0, 1}, {0, 1}}), Error);
}

TEST(Translate, HandCases)
{
    const auto z2 = cyclic_group(2);
    GroupFunction psi{CVector(2)};
    psi.values << Complex(3, 0), Complex(5, 1);
    EXPECT_EQ(translate_left(z2, 0, psi).values, psi.values);
    const auto l1 = translate_left(z2, 1, psi);
    EXPECT_EQ(l1.values(0), psi.values(1));
    EXPECT_EQ(l1.values(1), psi.values(0));
    EXPECT_THROW(translate_left(z2, 2, psi), Error);
}

TEST(Translate, CompositionOracleAndCommutation)
{
    Rng rng(102);
    for (const auto& g : sample_groups()) {
        const int n = g.order();
        const auto psi = random_function(rng, n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                // Double lookup: (L_x (L_y psi))(z) = (L_y psi)(x z) = psi(y x z).
                const auto lxly = translate_left(g, x, translate_left(g, y, psi));
                for (int z = 0; z < n; ++z) EXPECT_EQ(lxly.values(z), psi.values(g.mul(g.mul(y, x), z)));
                EXPECT_EQ(lxly.values, translate_left(g, g.mul(y, x), psi).values);
                EXPECT_EQ(translate_left(g, x, translate_right(g, y, psi)).values,
                          translate_right(g, y, translate_left(g, x, psi)).values);
            }
    }
}

TEST(Means, UniqueUniform)
{
    for (const auto& g : sample_groups()) {
        const auto m = invariant_means(g);
        ASSERT_EQ(m.means.size(), 1u);
        EXPECT_TRUE(m.unique);
        EXPECT_EQ(m.constraint_rank, g.order() - 1);
        EXPECT_LE(m.residual, 1e-12);
        for (int x = 0; x < g.order(); ++x) EXPECT_NEAR(std::abs(m.means[0].weights(x) - 1.0 / g.order()), 0, 1e-12);
    }
}

TEST(Means, UniformIsInvariantAndOthersAreNot)
{
    Rng rng(103);
    const auto g = symmetric_group(3).group;
    EXPECT_LE(invariance_residual(g, Functional::uniform(g)), 1e-15);
    EXPECT_GT(invariance_residual(g, Functional::point_mass(g, 0)), 0.5);
    EXPECT_TRUE(Functional::uniform(g).is_mean());
    EXPECT_FALSE(random_functional(rng, 6).is_mean());
}

TEST(Arens, ConvolutionOracleAndIdentity)
{
    Rng rng(104);
    for (const auto& g : sample_groups()) {
        const int n = g.order();
        const auto mu = random_functional(rng, n), nu = random_functional(rng, n);
        CVector conv = CVector::Zero(n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) conv(g.mul(x, y)) += mu.weights(x) * nu.weights(y);
        EXPECT_LT((arens_product(g, mu, nu).weights - conv).norm(), 1e-12);
        EXPECT_LT((arens_product(g, Functional::point_mass(g, g.identity()), nu).weights - nu.weights).norm(),
                  1e-15);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                EXPECT_EQ(arens_product(g, Functional::point_mass(g, x), Functional::point_mass(g, y)).weights,
                          Functional::point_mass(g, g.mul(x, y)).weights);
    }
}

TEST(Arens, DefinitionThroughTranslations)
{
    // <mu . nu, psi> = <mu, nu . psi> with (nu . psi)(x) = <nu, L_x psi>.
    Rng rng(105);
    const auto g = quaternion_group();
    const auto mu = random_functional(rng, 8), nu = random_functional(rng, 8);
    const auto psi = random_function(rng, 8);
    GroupFunction nupsi{CVector(8)};
    for (int x = 0; x < 8; ++x) nupsi.values(x) = nu(translate_left(g, x, psi));
    EXPECT_LT(std::abs(arens_product(g, mu, nu)(psi) - mu(nupsi)), 1e-12);
}

TEST(Arens, Associative)
{
    Rng rng(106);
    for (const auto& g : sample_groups()) {
        const int n = g.order();
        for (int t = 0; t < 10; ++t) {
            const auto a = random_functional(rng, n), b = random_functional(rng, n),
                       c = random_functional(rng, n);
            EXPECT_LT((arens_product(g, arens_product(g, a, b), c).weights -
                       arens_product(g, a, arens_product(g, b, c)).weights)
                          .norm(),
                      1e-12);
        }
    }
    EXPECT_THROW(arens_product(cyclic_group(3), Functional::uniform(cyclic_group(2)),
                               Functional::uniform(cyclic_group(3))),
                 Error);
}

TEST(SigmaMaps, Properties)
{
    Rng rng(107);
    for (const auto& g : sample_groups()) {
        const int n = g.order();
        const auto psi = random_function(rng, n);
        EXPECT_EQ(sigma(g, sigma(g, psi)).values, psi.values);
        for (int x = 0; x < n; ++x)
            EXPECT_EQ(translate_left(g, x, sigma(g, psi)).values,
                      sigma(g, translate_right(g, g.inverse(x), psi)).values);
        const auto m1 = random_functional(rng, n), m2 = random_functional(rng, n);
        EXPECT_LT((Sigma(g, arens_product(g, m1, m2)).weights -
                   arens_product(g, Sigma(g, m2), Sigma(g, m1)).weights)
                      .norm(),
                  1e-12);
        EXPECT_NEAR(Sigma(g, m1).weights.lpNorm<1>(), m1.weights.lpNorm<1>(), 1e-12);
        const Complex c(0.3, -2);
        EXPECT_LT((Sigma(g, Functional{c * m1.weights}).weights - std::conj(c) * Sigma(g, m1).weights).norm(),
                  1e-12);
        for (int x = 0; x < n; ++x) {
            Functional d = Functional::point_mass(g, x);
            d.weights(x) = Complex(2, 1);
            const auto s = Sigma(g, d);
            EXPECT_EQ(s.weights(g.inverse(x)), Complex(2, -1));
        }
    }
}

TEST(SigmaMaps, SymmetricRealFunction)
{
    const auto g = symmetric_group(3).group;
    GroupFunction psi{CVector(6)};
    for (int x = 0; x < 6; ++x) psi.values(x) = Complex(1.0 + x + g.inverse(x), 0.5 * (x + g.inverse(x)));
    EXPECT_EQ(sigma(g, psi).values, psi.values.conjugate());
}

TEST(Integrate, HandCasesAndOrthogonality)
{
    const auto s3 = symmetric_group(3);
    const auto& g = s3.group;
    for (const auto& rep : {standard_rep(s3), sign_rep(s3), regular_rep(g)}) {
        EXPECT_LT((integrate_rep(rep, Functional::point_mass(g, g.identity())) -
                   CMatrix::Identity(rep.dim(), rep.dim()))
                      .norm(),
                  1e-15);
    }
    EXPECT_LT(integrate_rep(standard_rep(s3), Functional::uniform(g)).norm(), 1e-15);
    EXPECT_LT(integrate_rep(sign_rep(s3), Functional::uniform(g)).norm(), 1e-15);
    // Character orthogonality: (1/|G|) sum chi(x) conj(chi(x)) = 1 for an irrep.
    const auto chi = standard_rep(s3).character();
    Complex inner = 0;
    for (const auto& c : chi) inner += c * std::conj(c);
    EXPECT_NEAR(std::abs(inner / 6.0 - 1.0), 0, 1e-12);
    EXPECT_LT(integrate_rep(quaternion_rep(), Functional::uniform(quaternion_group())).norm(), 1e-15);
}

TEST(Integrate, LinearMultiplicativeAndAdjoint)
{
    Rng rng(108);
    const auto s3 = symmetric_group(3);
    std::vector<std::pair<FiniteGroup, UnitaryRep>> reps{
        {s3.group, standard_rep(s3)},
        {s3.group, sign_rep(s3)},
        {s3.group, regular_rep(s3.group)},
        {quaternion_group(), quaternion_rep()},
        {cyclic_group(6), cyclic_character(6, 1)},
        {cyclic_group(6), cyclic_character(6, 5)},
    };
    for (const auto& [g, rep] : reps) {
        const int n = g.order();
        for (int t = 0; t < 10; ++t) {
            const auto mu = random_functional(rng, n), nu = random_functional(rng, n);
            const Complex c(1.5, -0.5);
            EXPECT_LT((integrate_rep(rep, Functional{mu.weights + c * nu.weights}) -
                       integrate_rep(rep, mu) - c * integrate_rep(rep, nu))
                          .norm(),
                      1e-12);
            EXPECT_LT((integrate_rep(rep, arens_product(g, mu, nu)) - integrate_rep(rep, mu) * integrate_rep(rep, nu))
                          .norm(),
                      1e-10);
            EXPECT_LT((integrate_rep(rep, Sigma(g, mu)) - integrate_rep(rep, mu).adjoint()).norm(), 1e-12);
        }
    }
}

TEST(Rep, ValidationRejectsNonHomomorphism)
{
    const auto g = cyclic_group(3);
    std::vector<CMatrix> mats(3, CMatrix::Identity(1, 1));
    mats[1](0, 0) = Complex(0, 1); // i^3 != 1
    mats[2](0, 0) = Complex(-1, 0);
    EXPECT_THROW(UnitaryRep(g, mats), Error);
    mats[1](0, 0) = 2.0;
    EXPECT_THROW(UnitaryRep(g, mats), Error);
}

TEST(Gns, RegularCharacter)
{
    for (const auto& g : sample_groups()) {
        const auto rep = gns_regular(g, Functional::uniform(g));
        EXPECT_EQ(rep.dim(), g.order());
        const auto chi = rep.character();
        for (int x = 0; x < g.order(); ++x) {
            const double expected = x == g.identity() ? g.order() : 0;
            EXPECT_EQ(std::lround(chi[x].real()), expected);
            EXPECT_NEAR(chi[x].real(), expected, 1e-12);
            EXPECT_NEAR(chi[x].imag(), 0, 1e-12);
        }
    }
    const auto triv = gns_regular(trivial_group(), Functional::uniform(trivial_group()));
    EXPECT_EQ(triv.dim(), 1);
    EXPECT_NEAR(std::abs(triv(0)(0, 0) - 1.0), 0, 1e-15);
}

TEST(Gns, RejectsNonInvariant)
{
    const auto g = cyclic_group(4);
    EXPECT_THROW(gns_regular(g, Functional::point_mass(g, 0)), Error);
}

TEST(Gns, RankDeficientSyntheticForm)
{
    // A point mass is positive semidefinite but has rank one Gram form.
    const auto g = cyclic_group(4);
    EXPECT_EQ(gns_quotient_basis(g, Functional::point_mass(g, 2)).cols(), 1);
    EXPECT_EQ(gns_quotient_basis(g, Functional::uniform(g)).cols(), 4);
}

TEST(Triviality, Criterion)
{
    EXPECT_TRUE(triviality_test(trivial_group(), Functional::uniform(trivial_group())));
    EXPECT_FALSE(triviality_test(cyclic_group(2), Functional::uniform(cyclic_group(2))));
    for (const auto& g : sample_groups())
        if (g.order() > 1) EXPECT_FALSE(triviality_test(g, Functional::uniform(g)));
}
