#include <gtest/gtest.h>

#include "opideal/classical.hpp"
#include "opideal/errors.hpp"
#include "opideal/harish.hpp"
#include "support.hpp"

using namespace opideal;
using namespace opideal::testing;

namespace {

CMatrix sample_u(const BlockSplit& split, std::uint64_t seed)
{
    const auto s = StructureData::standard(ClassicalType::AIII, split.dim(),
                                           Signature{split.n_plus, split.n_minus});
    return random_group_element(ClassicalType::AIII, s, seed, 1.0);
}

CMatrix random_disc_point(Rng& rng, const BlockSplit& split)
{
    CMatrix z = random_gaussian(rng, split.n_plus, split.n_minus);
    return z * (0.9 * rng.uniform() / op_norm(z));
}

} // namespace

TEST(Hc, Identity)
{
    const BlockSplit sp{2, 3};
    const auto f = hc_factorize(CMatrix::Identity(5, 5), sp);
    EXPECT_EQ(f.z_plus.norm(), 0);
    EXPECT_EQ(f.z_minus.norm(), 0);
    EXPECT_EQ(f.kappa, CMatrix::Identity(5, 5));
}

TEST(Hc, BlockFormula)
{
    Rng rng(91);
    const BlockSplit sp{2, 3};
    const CMatrix g = random_gaussian(rng, 5, 5);
    const CMatrix A = g.topLeftCorner(2, 2), B = g.topRightCorner(2, 3), C = g.bottomLeftCorner(3, 2),
                  D = g.bottomRightCorner(3, 3);
    const CMatrix Dinv = D.inverse();
    const auto f = hc_factorize(g, sp);
    EXPECT_LT((f.z_plus - B * Dinv).norm(), 1e-12);
    EXPECT_LT((f.z_minus - Dinv * C).norm(), 1e-12);
    EXPECT_LT((f.kappa.topLeftCorner(2, 2) - (A - B * Dinv * C)).norm(), 1e-12);
    EXPECT_EQ(f.kappa.bottomRightCorner(3, 3), D);
    EXPECT_EQ(f.kappa.topRightCorner(2, 3).norm(), 0);
    EXPECT_EQ(f.kappa.bottomLeftCorner(3, 2).norm(), 0);
    // Direct block multiplication.
    CMatrix upper = CMatrix::Identity(5, 5), lower = CMatrix::Identity(5, 5);
    upper.topRightCorner(2, 3) = f.z_plus;
    lower.bottomLeftCorner(3, 2) = f.z_minus;
    EXPECT_LE(rel(upper * f.kappa * lower, g), 1e-12);
}

TEST(Hc, ReconstructionOnUnitaryGroup)
{
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q)
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const BlockSplit sp{p, q};
                const CMatrix g = sample_u(sp, seed);
                EXPECT_LE(rel(hc_factorize(g, sp).reconstruct(), g), 1e-12);
            }
}

TEST(Hc, SingularBlockRejected)
{
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 1) = g(1, 0) = 1;
    EXPECT_THROW(hc_factorize(g, {1, 1}), Error);
    EXPECT_FALSE(hc_domain_test(g, CMatrix::Zero(1, 1), {1, 1}));
}

TEST(Action, IdentityAndOrigin)
{
    Rng rng(92);
    const BlockSplit sp{2, 2};
    const CMatrix z = random_disc_point(rng, sp);
    EXPECT_LT((hc_action(CMatrix::Identity(4, 4), z, sp) - z).norm(), 1e-15);
    const CMatrix g = random_gaussian(rng, 4, 4);
    EXPECT_LT((hc_action(g, CMatrix::Zero(2, 2), sp) -
               g.topRightCorner(2, 2) * g.bottomRightCorner(2, 2).inverse())
                  .norm(),
              1e-12);
}

TEST(Action, MatchesFactorizationOracle)
{
    Rng rng(93);
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) {
            const BlockSplit sp{p, q};
            const CMatrix g = sample_u(sp, 100 + p * 3 + q);
            const CMatrix z = random_disc_point(rng, sp);
            const auto f = hc_factorize(g * exp_p_plus(z, sp), sp);
            EXPECT_LT((hc_action(g, z, sp) - f.z_plus).norm(), 1e-12 * std::max(1.0, f.z_plus.norm()));
            EXPECT_LT((hc_cocycle(g, z, sp) - f.kappa).norm(), 1e-12 * std::max(1.0, f.kappa.norm()));
        }
}

TEST(Action, CompositionAndCocycle)
{
    Rng rng(94);
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q)
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const BlockSplit sp{p, q};
                const CMatrix g1 = sample_u(sp, 2 * seed), g2 = sample_u(sp, 2 * seed + 1);
                const CMatrix z = random_disc_point(rng, sp);
                const CMatrix w = hc_action(g2, z, sp);
                EXPECT_LT((hc_action(g1 * g2, z, sp) - hc_action(g1, w, sp)).norm(), 1e-9);
                EXPECT_LT((hc_cocycle(g1 * g2, z, sp) - hc_cocycle(g1, w, sp) * hc_cocycle(g2, z, sp)).norm(),
                          1e-9);
            }
}

TEST(Cocycle, HandCases)
{
    Rng rng(95);
    const BlockSplit sp{2, 1};
    const CMatrix z = random_disc_point(rng, sp);
    EXPECT_LT((hc_cocycle(CMatrix::Identity(3, 3), z, sp) - CMatrix::Identity(3, 3)).norm(), 1e-15);
    CMatrix g = CMatrix::Zero(3, 3);
    g.topLeftCorner(2, 2) = random_gaussian(rng, 2, 2);
    g(2, 2) = Complex(0.5, 1);
    EXPECT_LT((hc_cocycle(g, CMatrix::Zero(2, 1), sp) - g).norm(), 1e-15);
}

TEST(Isotropy, BlockDiagonalUnitariesFixOrigin)
{
    Rng rng(96);
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) {
            const BlockSplit sp{p, q};
            CMatrix k = CMatrix::Zero(p + q, p + q);
            k.topLeftCorner(p, p) = random_unitary(rng, p);
            k.bottomRightCorner(q, q) = random_unitary(rng, q);
            EXPECT_LT(hc_action(k, CMatrix::Zero(p, q), sp).norm(), 1e-15);
            // Conversely a sample moving the origin has a nonzero off-diagonal block.
            const CMatrix g = sample_u(sp, 7 * p + q);
            const double moved = hc_action(g, CMatrix::Zero(p, q), sp).norm();
            const double off = g.topRightCorner(p, q).norm() + g.bottomLeftCorner(q, p).norm();
            if (moved <= 1e-12) EXPECT_LE(off, 1e-9);
            else EXPECT_GT(off, 0);
        }
}

TEST(Domain, UnitaryGroupAndDisc)
{
    Rng rng(97);
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) {
            const BlockSplit sp{p, q};
            const CMatrix g = sample_u(sp, 11 * p + q);
            EXPECT_TRUE(hc_domain_test(g, CMatrix::Zero(p, q), sp));
            for (int t = 0; t < 10; ++t) EXPECT_TRUE(hc_domain_test(g, random_disc_point(rng, sp), sp));
        }
}

TEST(Domain, OutsideRaises)
{
    CMatrix g = CMatrix::Identity(2, 2);
    g(1, 0) = 1;
    g(1, 1) = 0; // C Z + D = Z
    EXPECT_THROW(hc_action(g, CMatrix::Zero(1, 1), {1, 1}), Error);
}
