#include <gtest/gtest.h>

#include <numbers>

#include "mcs/quadrature.hpp"
#include "mcs/wigner.hpp"
#include "support.hpp"

using namespace molcs;
using std::numbers::pi;

TEST(Wigner, SpinHalfClosedForm) {
    for (double beta : {0.0, 0.4, 1.3, pi}) {
        const auto d = little_d(1, beta);
        const double c = std::cos(beta / 2), s = std::sin(beta / 2);
        EXPECT_NEAR(d.at(1, 1).real(), c, 1e-15);
        EXPECT_NEAR(d.at(-1, -1).real(), c, 1e-15);
        EXPECT_NEAR(d.at(1, -1).real(), -s, 1e-15);
        EXPECT_NEAR(d.at(-1, 1).real(), s, 1e-15);
    }
}

TEST(Wigner, SpinOneClosedForm) {
    const double b = 0.9, cb = std::cos(b), sb = std::sin(b);
    const auto d = little_d(2, b);
    EXPECT_NEAR(d.at(2, 2).real(), 0.5 * (1 + cb), 1e-15);
    EXPECT_NEAR(d.at(2, 0).real(), -sb / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d.at(2, -2).real(), 0.5 * (1 - cb), 1e-15);
    EXPECT_NEAR(d.at(0, 0).real(), cb, 1e-15);
    EXPECT_NEAR(d.at(0, 2).real(), sb / std::sqrt(2.0), 1e-15);
}

TEST(Wigner, BetaPiIsAntiDiagonal) {
    const auto d = little_d(3, pi);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r + c != 3) EXPECT_NEAR(std::abs(d.entries(r, c)), 0.0, 1e-15);
    EXPECT_NEAR(d.unitarity_defect(), 0.0, 1e-14);
}

TEST(Wigner, BigRAlphaPi) {
    const auto R = big_R(2, {pi, 0.0, 0.0});
    // exp(-i pi m) on the diagonal: m = -1, 0, 1 gives -1, 1, -1.
    EXPECT_NEAR(std::abs(R.at(-2, -2) - cplx(-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(R.at(0, 0) - cplx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(R.at(2, 2) - cplx(-1.0)), 0.0, 1e-15);
}

TEST(Wigner, DomainErrors) {
    EXPECT_THROW((void)little_d(2, -0.1), DomainError);
    EXPECT_THROW((void)little_d(2, 4.0), DomainError);
    EXPECT_THROW((void)little_d(-1, 1.0), InvalidLabel);
    EXPECT_THROW((void)wavefunction({1, 0, 1}, {}), InvalidLabel);
}

TEST(WignerProperty, UnitarityAndSymmetry) {
    testing_support::Gen g(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int tj = g.integer(0, 12);
        const double beta = g.real(0, pi);
        const auto d = little_d(tj, beta);
        EXPECT_LE(d.unitarity_defect(), 1e-12);
        for (int r = -tj; r <= tj; r += 2)
            for (int c = -tj; c <= tj; c += 2) {
                const double sign = ((r - c) / 2) % 2 == 0 ? 1.0 : -1.0;
                EXPECT_NEAR(d.at(r, c).real(), sign * d.at(c, r).real(), 1e-12);
                EXPECT_NEAR(d.at(r, c).real(), d.at(-c, -r).real(), 1e-12);
            }
    }
}

TEST(WignerProperty, Su2BlockMatchesBigRAndComposes) {
    testing_support::Gen g(12);
    for (int trial = 0; trial < 20; ++trial) {
        const EulerAngles e{g.real(0, 2 * pi), g.real(0, pi), g.real(-pi, pi)};
        const int tj = g.integer(0, 8);
        EXPECT_NEAR((su2_block(tj, su2_from_euler(e)) - big_R(tj, e).entries).cwiseAbs().maxCoeff(), 0.0, 1e-12);
        const Mat2 U1 = g.rotation().matrix(), U2 = g.rotation().matrix();
        EXPECT_NEAR((su2_block(tj, U1 * U2) - su2_block(tj, U1) * su2_block(tj, U2)).cwiseAbs().maxCoeff(), 0.0,
                    1e-12);
    }
}

TEST(Wigner, WavefunctionsAreOrthonormal) {
    // Haar average over alpha, gamma in [0, 4pi) covers the double cover for half-integer j.
    const std::vector<BasisLabel> labels{{0, 0, 0}, {1, 1, -1}, {1, -1, -1}, {2, 0, 2}, {2, 2, 0}, {3, -1, 3}};
    const int na = 16;
    const auto beta_nodes = quad::mapped(12, 0.0, pi);
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(6, 6);
    for (const auto& [beta, wb] : beta_nodes)
        for (int ia = 0; ia < na; ++ia)
            for (int ig = 0; ig < na; ++ig) {
                const EulerAngles e{4 * pi * ia / na, beta, 4 * pi * ig / na};
                Eigen::VectorXcd v(6);
                for (int i = 0; i < 6; ++i) v[i] = wavefunction(labels[std::size_t(i)], e).value;
                G += wb * std::sin(beta) * (v.conjugate() * v.transpose()) / double(na * na);
            }
    G /= 2.0;  // integral of sin(beta) over [0, pi]
    EXPECT_NEAR((G - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Wigner, HalfIntegerWavefunctionFlipsSign) {
    const EulerAngles e{0.3, 1.1, -0.4}, e2{0.3 + 2 * pi, 1.1, -0.4};
    const auto a = wavefunction({1, 1, -1}, e), b = wavefunction({1, 1, -1}, e2);
    EXPECT_TRUE(a.double_valued);
    EXPECT_NEAR(std::abs(a.value + b.value), 0.0, 1e-14);
    EXPECT_FALSE(wavefunction({2, 0, 0}, e).double_valued);
}

TEST(Wigner, SmallExamples) {
    for (int tj = 0; tj <= 6; ++tj)
        EXPECT_NEAR((little_d(tj, 0.0).entries - Eigen::MatrixXcd::Identity(tj + 1, tj + 1)).norm(), 0.0, 1e-15);
    EXPECT_EQ(little_d(0, 1.0).entries(0, 0), cplx(1.0));
    EXPECT_LE(little_d(2, pi / 2).unitarity_defect(), 1e-12);
    const auto R = big_R(1, {pi, 0.0, 0.0});
    EXPECT_NEAR(std::abs(R.at(1, 1) - std::exp(cplx(0, -pi / 2))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(R.at(-1, -1) - std::exp(cplx(0, pi / 2))), 0.0, 1e-15);
    EXPECT_NEAR((big_R(3, {0.0, 0.8, 0.0}).entries - little_d(3, 0.8).entries).norm(), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(wavefunction({0, 0, 0}, {1.0, 2.0, -0.5}).value - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(wavefunction({2, 0, 0}, {0.0, pi / 2, 0.0}).value), 0.0, 1e-15);
}
