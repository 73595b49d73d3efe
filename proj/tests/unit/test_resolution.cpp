#include <gtest/gtest.h>

#include <cstdio>

#include "mcs/resolution.hpp"

using namespace molcs;

TEST(Resolution, FamilyTwoElements) {
    const auto f = builtin_family(2);
    const auto m = measure_for(f);
    EXPECT_NEAR(std::abs(unity_matrix_element(f, m, {0, 0, 0}, {0, 0, 0}) - 1.0), 0.0, 1e-4);
    EXPECT_NEAR(std::abs(unity_matrix_element(f, m, {0, 0, 0}, {2, 0, 0})), 0.0, 1e-6);
}

TEST(Resolution, FamilySevenElement) {
    const auto f = builtin_family(7);
    EXPECT_NEAR(std::abs(unity_matrix_element(f, measure_for(f), {2, 2, -2}, {2, 2, -2}) - 1.0), 0.0, 1e-4);
}

TEST(Resolution, AllFamiliesPass) {
    for (int id = 1; id <= 8; ++id) {
        const auto f = builtin_family(id);
        const auto rep = unity_suite(f, measure_for(f), 4);
        EXPECT_TRUE(rep.passed()) << f->name << " diag " << rep.max_diag_defect << " off " << rep.max_offdiag
                                  << " brute " << rep.brute_max_diff;
        EXPECT_EQ(rep.diagonal.size(), basis_dimension({4, f->tower}));
    }
}

TEST(Resolution, MonomialFamilyHasNoResolution) {
    const auto rep = unity_suite(monomial_family(2), std::nullopt, 2);
    EXPECT_FALSE(rep.measure_available);
    EXPECT_FALSE(rep.passed());
    EXPECT_THROW((void)measure_for(monomial_family(2)), InvalidLabel);
}

TEST(Resolution, BetaIntegrals) {
    for (const auto& e : zeta_beta_check(4)) EXPECT_NEAR(e.numeric, e.beta, 1e-10 * e.beta) << e.two_j << ' ' << e.q;
}

TEST(Resolution, CircleSupportDiverges) {
    // A measure concentrated on |z| = 1 forces |c_j|^2 = (2j+1)^2, whose norm series diverges there.
    auto f = std::make_shared<SequenceFamily>();
    f->name = "circle";
    f->c = [](int n) { return cplx(n + 1.0); };
    EXPECT_THROW((void)norm_series(*f, 1.0), NonConvergence);
}

TEST(Resolution, ConvergenceTable) {
    // Radial node study for the sign-changing family 1 measure.
    const auto f = builtin_family(1);
    std::printf("  z_radial  max_diag_defect(family 1, two_j<=4)\n");
    double last = 1.0;
    for (int n : {50, 100, 200}) {
        QuadratureSpec q;
        q.z_radial = n;
        const auto rep = unity_suite(f, measure_for(f), 4, q, false);
        std::printf("  %8d  %.3e\n", n, rep.max_diag_defect);
        last = rep.max_diag_defect;
    }
    EXPECT_LE(last, 1e-4);
}
