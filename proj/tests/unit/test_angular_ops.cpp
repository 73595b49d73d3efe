#include <gtest/gtest.h>

#include "mcs/angular_ops.hpp"
#include "support.hpp"

using namespace molcs;
using OK = OperatorKind;

namespace {
double dist(const TruncatedState& a, const TruncatedState& b) { return norm(a - b); }
}  // namespace

TEST(AngularOps, LadderOnLab) {
    const SpaceSpec sp{2, Tower::Integer};
    const auto s = apply(OK::JL_plus(), TruncatedState::basis_vector(sp, {2, 0, -2}));
    EXPECT_NEAR(dist(s, TruncatedState::basis_vector(sp, {2, 0, 0}, std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(AngularOps, MolecularPlusLowersK) {
    const SpaceSpec sp{2, Tower::Integer};
    const auto s = apply(OK::JM_plus(), TruncatedState::basis_vector(sp, {2, 2, 0}));
    EXPECT_NEAR(dist(s, TruncatedState::basis_vector(sp, {2, 0, 0}, std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(AngularOps, LambdaEigenvalue) {
    const SpaceSpec sp{1, Tower::HalfInteger};
    const auto v = TruncatedState::basis_vector(sp, {1, -1, -1});
    EXPECT_NEAR(dist(apply(OK::Lambda(), v), 0.5 * v), 0.0, 1e-15);
}

TEST(AngularOps, V00OnGroundState) {
    const SpaceSpec sp{2, Tower::Integer};
    const auto r = apply(OK::V(0, 0), TruncatedState::basis_vector(sp, {0, 0, 0}));
    EXPECT_NEAR(dist(r, TruncatedState::basis_vector(sp, {2, 0, 0}, 1.0 / std::sqrt(3.0))), 0.0, 1e-15);
}

TEST(AngularOps, SpinorRejectsIntegerTower) {
    const SpaceSpec sp{2, Tower::Integer};
    EXPECT_THROW((void)apply(OK::S(1, 1), TruncatedState::basis_vector(sp, {0, 0, 0})), TowerMismatch);
    EXPECT_THROW((void)OK::S(3, 1), InvalidLabel);
    EXPECT_THROW((void)OK::V(2, 0), InvalidLabel);
}

TEST(AngularOps, TruncationReportsDroppedWeight) {
    const SpaceSpec sp{1, Tower::HalfInteger};
    const auto r = apply_reporting(OK::V(0, 0), TruncatedState::basis_vector(sp, {0, 0, 0}));
    EXPECT_EQ(r.state.size(), 0u);
    EXPECT_NEAR(r.dropped_weight, 1.0 / 3.0, 1e-15);
}

TEST(AngularOps, Adjointness) {
    const SpaceSpec half{4, Tower::HalfInteger};
    for (const auto& op : all_S()) EXPECT_LE(adjoint_check(op, half), 1e-12) << op.name();
    EXPECT_LE(adjoint_check(OK::V(0, 0), {4, Tower::Integer}), 1e-12);
    EXPECT_LE(adjoint_check(OK::JL_plus(), half), 1e-12);
    EXPECT_LE(adjoint_check(OK::JM_minus(), half), 1e-12);
}

TEST(AngularOps, CommutatorsAtThree) {
    for (Tower t : {Tower::HalfInteger, Tower::Integer}) {
        const auto rep = commutator_defect({6, t});
        EXPECT_FALSE(rep.entries.empty());
        for (const auto& e : rep.entries) EXPECT_LE(e.defect, 1e-12) << e.relation;
    }
}

TEST(AngularOps, MolecularCommutatorSign) {
    // [J^M_0, J^M_+] = -J^M_+ on a generic state.
    const SpaceSpec sp{4, Tower::HalfInteger};
    testing_support::Gen g(3);
    const auto s = g.state(sp);
    const auto lhs = apply(OK::JM_0(), apply(OK::JM_plus(), s)) - apply(OK::JM_plus(), apply(OK::JM_0(), s));
    EXPECT_NEAR(dist(lhs, -1.0 * apply(OK::JM_plus(), s)), 0.0, 1e-12);
    const auto lab = apply(OK::JL_0(), apply(OK::JL_plus(), s)) - apply(OK::JL_plus(), apply(OK::JL_0(), s));
    EXPECT_NEAR(dist(lab, apply(OK::JL_plus(), s)), 0.0, 1e-12);
}

TEST(AngularOps, SelectionRules) {
    for (const auto& op : all_S()) EXPECT_EQ(selection_rule_defect(op, {5, Tower::HalfInteger}), 0.0);
    for (const auto& op : all_V()) EXPECT_EQ(selection_rule_defect(op, {6, Tower::Integer}), 0.0);
}

TEST(AngularOps, RotorBlocks) {
    const auto sph = rotor_hamiltonian({1, 1, 1}, {2, Tower::Integer});
    ASSERT_EQ(sph.size(), 2u);
    EXPECT_NEAR(sph[0].H(0, 0).real(), 0.0, 1e-15);
    EXPECT_NEAR((sph[1].H - 2.0 * Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    // Symmetric top: A1 j(j+1) + (A0 - A1) k^2 = 3 on k = +-1.
    const auto sym = rotor_k_block({2, 1, 1}, 2);
    for (int a : {0, 2}) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(3);
        e[a] = 1.0;
        EXPECT_NEAR(((sym * e) - 3.0 * e).norm(), 0.0, 1e-14);
    }
    // Asymmetric top, j = 1: eigenvalues A1+A2, A0+A2, A0+A1.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rotor_k_block({1, 2, 3}, 2));
    EXPECT_NEAR(es.eigenvalues()[0], 3.0, 1e-13);
    EXPECT_NEAR(es.eigenvalues()[1], 4.0, 1e-13);
    EXPECT_NEAR(es.eigenvalues()[2], 5.0, 1e-13);
}

TEST(AngularOpsProperty, MatrixMatchesApply) {
    testing_support::Gen g(4);
    const SpaceSpec sp{5, Tower::HalfInteger};
    const BasisIndex idx(sp);
    std::vector<OK> ops{OK::JL_plus(), OK::JL_minus(), OK::JM_plus(), OK::JM_minus(), OK::Casimir(), OK::V(1, -1)};
    for (const auto& s : all_S()) ops.push_back(s);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = g.state(sp);
        for (const auto& op : ops) {
            const Eigen::VectorXcd via_matrix = operator_matrix(op, idx) * s.to_vector(idx);
            EXPECT_NEAR((via_matrix - apply(op, s).to_vector(idx)).norm(), 0.0, 1e-12) << op.name();
        }
    }
}

TEST(AngularOpsProperty, ComponentsAreHermitian) {
    const BasisIndex idx({4, Tower::HalfInteger});
    for (Frame f : {Frame::Lab, Frame::Mol})
        for (int axis = 0; axis < 3; ++axis) {
            const auto M = component_matrix(f, axis, idx);
            EXPECT_NEAR((M - M.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
        }
}
