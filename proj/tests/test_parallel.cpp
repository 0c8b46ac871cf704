#include <gtest/gtest.h>

#include "opideal/nest.hpp"
#include "opideal/symfunc.hpp"

using namespace opideal;

TEST(Parallel, BoydMatchesSerialReference)
{
    for (const auto& phi : {SymNormFunc::schatten(1.5), SymNormFunc::schatten(3), SymNormFunc::ky_fan(2)}) {
        const auto ref = serial::boyd_estimate(phi, 12, 48);
        for (int jobs : {1, 2, 4}) {
            const auto par = boyd_estimate(phi, 12, 48, jobs);
            EXPECT_EQ(par.p_hat, ref.p_hat);
            EXPECT_EQ(par.q_hat, ref.q_hat);
            EXPECT_EQ(par.dilation_norms, ref.dilation_norms);
            EXPECT_EQ(par.contraction_norms, ref.contraction_norms);
        }
    }
}

TEST(Parallel, ExperimentMatchesSerialReference)
{
    const std::vector<int> sizes{1, 3, 8, 16};
    for (const auto& phi : {SymNormFunc::schatten(1), SymNormFunc::schatten(2)}) {
        const auto ref = serial::truncation_norm_experiment(phi, sizes, 25, 11);
        for (int jobs : {1, 2, 4}) {
            const auto par = truncation_norm_experiment(phi, sizes, 25, 11, jobs);
            ASSERT_EQ(par.size(), ref.size());
            for (std::size_t i = 0; i < ref.size(); ++i) {
                EXPECT_EQ(par[i].n, ref[i].n);
                EXPECT_EQ(par[i].ratio, ref[i].ratio);
            }
        }
    }
}
