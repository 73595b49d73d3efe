#include <gtest/gtest.h>

#include "mcs/zrep.hpp"
#include "support.hpp"

using namespace molcs;
using OK = OperatorKind;

namespace {

const std::vector<OK> kSix{OK::JL_plus(), OK::JL_minus(), OK::JL_0(), OK::JM_plus(), OK::JM_minus(), OK::JM_0()};

MonomialFunction random_function(testing_support::Gen& g, int two_j_max) {
    MonomialFunction f;
    for (int tj = 0; tj <= two_j_max; ++tj)
        for (int q = 0; q <= tj; ++q)
            for (int r = 0; r <= tj; ++r) f.add({tj, q, r}, g.gaussian());
    return f;
}

MonomialFunction comm(const OK& a, const OK& b, const MonomialFunction& f) {
    return apply_diff(a, apply_diff(b, f)) - apply_diff(b, apply_diff(a, f));
}

}  // namespace

TEST(Zrep, GroundStateIsConstant) {
    const auto fam = builtin_family(2);
    const auto f = to_zrep(TruncatedState::basis_vector({2, Tower::HalfInteger}, {0, 0, 0}), *fam);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f.coefficient({0, 0, 0}), std::conj(fam->coeff(0)));
}

TEST(Zrep, SpinOneCentreMonomial) {
    const auto fam = builtin_family(6);
    const auto f = to_zrep(TruncatedState::basis_vector({2, Tower::Integer}, {2, 0, 0}), *fam);
    ASSERT_EQ(f.size(), 1u);
    // sigma^1_0 sigma^1_0 = 2 on zeta zeta_L zeta_M.
    EXPECT_NEAR(std::abs(f.coefficient({2, 1, 1}) - 2.0 * std::conj(fam->coeff(2))), 0.0, 1e-14);
}

TEST(Zrep, EulerOperatorAndConstants) {
    MonomialFunction c;
    c.add({0, 0, 0}, 3.0);
    EXPECT_EQ(apply_diff(OK::JL_0(), c).size(), 0u);
    MonomialFunction mono;
    mono.add({4, 3, 1}, 1.0);  // zeta_L^3; J^L_0 reads m = q - j = 1
    const auto r = apply_diff(OK::JL_0(), mono);
    EXPECT_EQ(r.coefficient({4, 3, 1}), cplx(1.0));
}

TEST(Zrep, Errors) {
    MonomialFunction f;
    EXPECT_THROW(f.add({2, 3, 0}, 1.0), InvalidLabel);
    EXPECT_THROW((void)apply_diff(OK::S(1, 1), f), InvalidLabel);
    EXPECT_THROW((void)apply_diff(OK::Casimir(), f), InvalidLabel);
    const auto mono = monomial_family(2);
    EXPECT_THROW((void)to_zrep(TruncatedState::basis_vector({2, Tower::Integer}, {0, 0, 0}), *mono), InvalidLabel);
}

TEST(ZrepProperty, RoundTrip) {
    testing_support::Gen g(51);
    for (int trial = 0; trial < 10; ++trial) {
        const auto fam = g.family();
        const SpaceSpec sp{6, fam->tower};
        const auto s = g.state(sp);
        EXPECT_LE(norm(from_zrep(to_zrep(s, *fam), *fam, sp) - s), 1e-13 * norm(s));
    }
}

TEST(ZrepProperty, EvaluationIsConjugateCoherentOverlap) {
    testing_support::Gen g(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto fam = g.family();
        const SpaceSpec sp{4, fam->tower};
        const auto s = g.state(sp);
        const auto p = g.params(fam);
        const auto pbar = CoherentParams::from_root(fam, std::conj(p.root), std::conj(p.zeta_L), std::conj(p.zeta_M));
        const cplx direct = inner_product(mcs(pbar, sp), s);
        EXPECT_LE(std::abs(evaluate(to_zrep(s, *fam), p) - direct), 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST(ZrepProperty, FundamentalStateFunction) {
    testing_support::Gen g(53);
    for (int trial = 0; trial < 10; ++trial) {
        const auto fam = builtin_family(trial % 2 ? 1 : 6);
        const cplx z0 = g.disc(0.8);
        const auto p = g.params(fam, 1.0);
        const SpaceSpec sp = default_space(*fam, 4.0);
        const cplx expected = norm_series_complex(*fam, zrep_root(p) * std::sqrt(z0));
        EXPECT_LE(std::abs(evaluate(to_zrep(mfs(fam, z0, sp), *fam), p) - expected), 1e-12 * std::abs(expected));
    }
}

TEST(ZrepProperty, DifferentialMatchesMatrixAction) {
    testing_support::Gen g(54);
    for (int trial = 0; trial < 10; ++trial) {
        const auto fam = g.family();
        const SpaceSpec sp{4, fam->tower};
        const auto s = g.state(sp);
        for (const auto& op : kSix) {
            const auto lhs = to_zrep(apply(op, s), *fam);
            const auto rhs = apply_diff(op, to_zrep(s, *fam));
            EXPECT_LE(lhs.distance(rhs), 1e-12) << op.name();
        }
    }
}

TEST(ZrepProperty, DifferentialCommutators) {
    testing_support::Gen g(55);
    const auto f = random_function(g, 6);
    EXPECT_LE(comm(OK::JL_plus(), OK::JL_minus(), f).distance(2.0 * apply_diff(OK::JL_0(), f)), 1e-12);
    EXPECT_LE(comm(OK::JL_0(), OK::JL_plus(), f).distance(apply_diff(OK::JL_plus(), f)), 1e-12);
    EXPECT_LE(comm(OK::JL_0(), OK::JL_minus(), f).distance(-1.0 * apply_diff(OK::JL_minus(), f)), 1e-12);
    EXPECT_LE(comm(OK::JM_plus(), OK::JM_minus(), f).distance(-2.0 * apply_diff(OK::JM_0(), f)), 1e-12);
    EXPECT_LE(comm(OK::JM_0(), OK::JM_plus(), f).distance(-1.0 * apply_diff(OK::JM_plus(), f)), 1e-12);
    EXPECT_LE(comm(OK::JM_0(), OK::JM_minus(), f).distance(apply_diff(OK::JM_minus(), f)), 1e-12);
    for (int a = 0; a < 3; ++a)
        for (int b = 3; b < 6; ++b)
            EXPECT_LE(comm(kSix[std::size_t(a)], kSix[std::size_t(b)], f).distance({}), 1e-12);
}

TEST(ZrepProperty, RotorDifferentialMatchesHamiltonian) {
    testing_support::Gen g(56);
    const RotorConstants c{1.0, 2.0, 3.5};
    const auto fam = builtin_family(2);
    const SpaceSpec sp{5, Tower::HalfInteger};
    const auto s = g.state(sp);
    TruncatedState Hs(sp);
    const cplx A[3] = {c.A0, c.A1, c.A2};
    for (int axis = 0; axis < 3; ++axis)
        Hs += A[axis] * apply_component(Frame::Mol, axis, apply_component(Frame::Mol, axis, s));
    EXPECT_LE(to_zrep(Hs, *fam).distance(apply_rotor_diff(c, to_zrep(s, *fam))), 1e-12);
}
