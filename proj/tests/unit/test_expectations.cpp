#include <gtest/gtest.h>

#include "mcs/expectations.hpp"
#include "mcs/tables.hpp"
#include "support.hpp"

using namespace molcs;

TEST(Expectations, TableExamples) {
    const auto e1 = mfs_expectations(builtin_family(1), 1.0);
    EXPECT_NEAR(e1.J0, -0.5, 1e-14);
    EXPECT_NEAR(e1.Jsq, 1.0, 1e-14);
    const auto e5 = mfs_expectations(builtin_family(5), std::sqrt(2.0));
    EXPECT_NEAR(e5.J0, -2.0, 1e-13);
    EXPECT_NEAR(e5.Jsq, 8.0, 1e-12);
}

TEST(Expectations, Origin) {
    for (int id = 1; id <= 8; ++id) {
        const auto e = mfs_expectations(builtin_family(id), 0.0);
        EXPECT_EQ(e.J0, 0.0);
        EXPECT_EQ(e.Jsq, 0.0);
        EXPECT_EQ(e.S.cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(e.V.cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Expectations, UncertaintyExamples) {
    const auto u1 = uncertainty_check(builtin_family(1), 1.0);
    EXPECT_NEAR(u1.product_xy, 1.0 / 16.0, 1e-14);
    EXPECT_NEAR(u1.quarter_J0_sq, 1.0 / 16.0, 1e-14);
    const auto u5 = uncertainty_check(builtin_family(5), 1.0);
    EXPECT_GT(u5.product_xz, u5.bound_xz + 1e-3);
    EXPECT_GT(u5.product_yz, u5.bound_yz + 1e-3);
    // A single-term sequence is an eigenstate of J_0: every pair is minimized.
    const auto um = uncertainty_check(monomial_family(2), 0.7);
    EXPECT_NEAR(um.product_xy, um.quarter_J0_sq, 1e-14);
    EXPECT_NEAR(um.product_xz, 0.0, 1e-14);
    EXPECT_NEAR(um.product_yz, 0.0, 1e-14);
}

TEST(Expectations, SpinorDiagonalFamilyFour) {
    const auto e = mfs_expectations(builtin_family(4), 0.3);
    EXPECT_NEAR(e.S(0, 0).real(), 0.765376, 1e-6);
    EXPECT_NEAR(std::abs(e.S(0, 0) - table_forms::s_minus_family4(std::sqrt(cplx(0.3)))), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e.S(1, 1) - std::conj(e.S(0, 0))), 0.0, 1e-15);
}

TEST(Expectations, IntegerTowerSpinorVanishes) {
    const auto p = CoherentParams::make(builtin_family(5), cplx(0.6, 0.2), cplx(0.3, -0.1), cplx(0.5, 0.5));
    const auto t = mcs_tensor_decomposition(p, default_space(p));
    EXPECT_LE(t.S_direct.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE(t.S_predicted.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Expectations, NoDisplacementMeansAlongAxis) {
    const auto e = mcs_expectations(CoherentParams::make(builtin_family(2), 0.4));
    EXPECT_EQ(e.JL[0], 0.0);
    EXPECT_EQ(e.JL[1], 0.0);
    EXPECT_EQ(e.JL[2], e.at_z.J0);
}

TEST(ExpectationsProperty, ClosedFormsMatchDirectOracle) {
    testing_support::Gen g(41);
    for (int trial = 0; trial < 24; ++trial) {
        const auto f = builtin_family(trial % 8 + 1);
        const double r = std::isfinite(f->radius) ? g.real(0.05, 0.7) : g.real(0.1, 2.0);
        const cplx z = std::polar(r, g.real(-3, 3));
        const auto closed = mfs_expectations(f, z);
        const auto direct = direct_expectations(mfs(f, z, default_space(*f, r * r)));
        const double scale = std::max(1.0, std::abs(closed.Jsq));
        EXPECT_LE(std::abs(closed.J0 - direct.J0), 1e-9 * scale) << f->name;
        EXPECT_LE(std::abs(closed.Jsq - direct.Jsq), 1e-9 * scale) << f->name;
        EXPECT_LE(std::abs(direct.Jplus), 1e-12) << f->name;
        EXPECT_LE(std::abs(closed.var0 - direct.var0), 1e-9 * scale) << f->name;
        // 2<J1^2> = 2<J2^2> = -<J0>, and <J1> = <J2> = 0.
        EXPECT_LE(std::abs(2 * direct.var1 + direct.J0), 1e-10 * scale);
        EXPECT_LE(std::abs(2 * direct.var2 + direct.J0), 1e-10 * scale);
        EXPECT_LE((closed.S - direct.S).cwiseAbs().maxCoeff(), 1e-9 * scale) << f->name;
        EXPECT_LE((closed.V - direct.V).cwiseAbs().maxCoeff(), 1e-9 * scale) << f->name;
        EXPECT_LE(std::abs(direct.V(0, 0) - std::conj(direct.V(2, 2))), 1e-10 * scale);
        EXPECT_LE(std::abs(direct.V(1, 1).imag()), 1e-12 * scale);
    }
}

TEST(ExpectationsProperty, DisplacedStates) {
    testing_support::Gen g(42);
    for (int trial = 0; trial < 16; ++trial) {
        const auto f = g.family();
        const auto p = g.params(f);
        const auto sp = default_space(p);
        const auto e = mcs_expectations(p);
        const auto d = direct_mcs_expectations(mcs(p, sp));
        const double s = std::max(1.0, e.Jsq);
        EXPECT_LE((e.JL - d.JL).cwiseAbs().maxCoeff(), 1e-9 * s) << f->name;
        EXPECT_LE((e.JM - d.JM).cwiseAbs().maxCoeff(), 1e-9 * s) << f->name;
        EXPECT_LE((e.JL_spherical - d.JL_spherical).cwiseAbs().maxCoeff(), 1e-9 * s) << f->name;
        EXPECT_LE((e.JM_spherical - d.JM_spherical).cwiseAbs().maxCoeff(), 1e-9 * s) << f->name;
        EXPECT_NEAR(d.JL.norm(), std::abs(e.at_z.J0), 1e-9 * s);
        EXPECT_NEAR(d.JM.norm(), std::abs(e.at_z.J0), 1e-9 * s);
        EXPECT_NEAR(d.Jsq, e.at_z.Jsq, 1e-9 * s);
        const auto t = mcs_tensor_decomposition(p, sp);
        EXPECT_LE(t.V_defect(), 1e-8 * s) << f->name;
        if (f->tower == Tower::HalfInteger) EXPECT_LE(t.S_defect(), 1e-8 * s) << f->name;
        const auto u = mcs_transformed_uncertainty(p, sp);
        EXPECT_LE(u.defect_L, 1e-10);
        EXPECT_LE(u.defect_M, 1e-10);
        EXPECT_NEAR(u.total_variance_Z, u.total_variance_z, 1e-9 * s);
    }
}
