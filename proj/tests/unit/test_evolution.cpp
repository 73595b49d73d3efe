#include <gtest/gtest.h>

#include <sstream>

#include "mcs/evolution.hpp"
#include "support.hpp"

using namespace molcs;
using OK = OperatorKind;

namespace {

// exp(-i H t) psi for a Hermitian dense H.
Eigen::VectorXcd propagate(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXcd ph(H.rows());
    for (Eigen::Index i = 0; i < H.rows(); ++i) ph[i] = std::exp(cplx(0.0, -es.eigenvalues()[i] * t));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * v;
}

}  // namespace

TEST(Evolution, ZeroDriveIsStationary) {
    const EvolutionState s0{0.0, {0.3, -0.2}, {0.1, 0.5}, 0.0};
    const auto traj = integrate(DriveCoefficients{}, s0, 1.0, 0.1);
    EXPECT_EQ(traj.back().zeta_L, s0.zeta_L);
    EXPECT_EQ(traj.back().zeta_M, s0.zeta_M);
    EXPECT_EQ(traj.back().sigma, 0.0);
    EXPECT_NEAR(traj.back().t, 1.0, 1e-12);

    const auto p = CoherentParams::make(builtin_family(2), 0.4, 0.2, 0.1);
    const auto sp = default_space(p);
    const auto ref = schrodinger_reference(DriveCoefficients{}, p, 1.0, 0.1, sp);
    EXPECT_EQ(ref.state.coeffs(), mcs(p, sp).coeffs());
}

TEST(Evolution, PureLabPrecessionIsAPhase) {
    const double w = 1.3;
    const cplx z0(0.4, 0.3);
    const auto s = integrate(DriveCoefficients::make(0.0, w, 0.0, 0.0), {0.0, z0, 0.0, 0.0}, 1.0, 1e-3).back();
    EXPECT_LE(std::abs(s.zeta_L - z0 * std::exp(cplx(0, -w))), 1e-10);
    EXPECT_NEAR(s.sigma, -w, 1e-10);
}

TEST(Evolution, RealRiccatiIsTangent) {
    const double a = 0.8;
    const auto traj = integrate(DriveCoefficients::make(a, 0.0, 0.0, 0.0), {}, 1.8, 1e-2);
    for (const auto& s : traj) EXPECT_LE(std::abs(s.zeta_L - std::tan(a * s.t)), 1e-8 * (1 + std::norm(s.zeta_L)));
}

TEST(Evolution, PolePassageIsReported) {
    EXPECT_THROW((void)integrate(DriveCoefficients::make(1.0, 0.0, 0.0, 0.0), {}, 2.0, 1e-2), PoleError);
    EXPECT_THROW((void)step(DriveCoefficients{}, {}, 0.0), DomainError);
}

TEST(Evolution, ParseDrive) {
    std::istringstream in("aL = 0.3+0.2i\naL0 = 0.7\naM = -0.1+0.25i\naM0 = -0.4\n");
    const auto d = parse_drive(in);
    EXPECT_EQ(d.constant.aL, cplx(0.3, 0.2));
    EXPECT_EQ(d.constant.aM0, -0.4);
    std::istringstream bad("aX = 1\n");
    EXPECT_THROW((void)parse_drive(bad), ParseError);
    std::istringstream cplx0("aL0 = 1+i\n");
    EXPECT_THROW((void)parse_drive(cplx0), ParseError);
}

TEST(EvolutionProperty, TemporalStability) {
    testing_support::Gen g(61);
    for (int trial = 0; trial < 4; ++trial) {
        const auto fam = builtin_family(trial % 2 ? 5 : 2);
        const auto p = g.params(fam, 0.6);
        const auto drive = DriveCoefficients::make(0.3 * g.disc(1.0), g.real(-1, 1), 0.3 * g.disc(1.0), g.real(-1, 1));
        const auto rep = temporal_stability(drive, p, 1.0, 1e-3);
        EXPECT_GE(rep.fidelity, 1 - 1e-6) << trial;
        EXPECT_LE(rep.norm_drift, 1e-10);
        EXPECT_NEAR(std::abs(params_at(p, rep.final_state).z()), std::abs(p.z()), 1e-14);
    }
}

TEST(EvolutionProperty, TimeDependentDrive) {
    DriveCoefficients d;
    d.fn = [](double t) { return DriveValues{cplx(0.2 * std::cos(t), 0.1), 0.5 * t, cplx(-0.1, 0.2 * t), 0.3}; };
    const auto p = CoherentParams::make(builtin_family(6), cplx(0.3, 0.2), cplx(0.2, 0.1), cplx(-0.3, 0.2));
    EXPECT_GE(temporal_stability(d, p, 1.0, 1e-3).fidelity, 1 - 1e-6);
}

TEST(EvolutionProperty, ClassicalPrecession) {
    testing_support::Gen g(62);
    for (int trial = 0; trial < 3; ++trial) {
        const auto p = g.params(builtin_family(1), 0.8);
        const auto drive = DriveCoefficients::make(0.3 * g.disc(1.0), g.real(-1, 1), 0.3 * g.disc(1.0), g.real(-1, 1));
        const auto rep = precession_check(drive, p, 1.0, 1e-3);
        EXPECT_LE(rep.residual_L, 1e-6);
        EXPECT_LE(rep.residual_M, 1e-6);
        EXPECT_LE(rep.length_drift, 1e-8);
    }
}

TEST(Evolution, MolecularLadderOrder) {
    // The coherent-state flow needs i(aM J^M_- - conj(aM) J^M_+); the opposite ladder order
    // does not keep the state coherent.
    const auto p = CoherentParams::make(builtin_family(5), 0.3, cplx(0.2, -0.1), cplx(0.3, 0.4));
    const SpaceSpec sp{10, Tower::Integer};
    const BasisIndex idx(sp);
    const DriveValues dv{0.0, 0.0, cplx(0.4, 0.3), 0.2};
    const double t = 1.0;
    const auto evolved = mcs(params_at(p, integrate(DriveCoefficients{dv, {}}, initial_state(p), t, 1e-3).back()), sp);
    const Eigen::VectorXcd v0 = mcs(p, sp).to_vector(idx);

    const Eigen::MatrixXcd used = Eigen::MatrixXcd(drive_hamiltonian(dv, idx));
    const cplx I(0, 1);
    const Eigen::MatrixXcd swapped = I * dv.aM * dense_matrix(OK::JM_plus(), idx) -
                                     I * std::conj(dv.aM) * dense_matrix(OK::JM_minus(), idx) +
                                     dv.aM0 * dense_matrix(OK::JM_0(), idx);
    const auto fid = [&](const Eigen::MatrixXcd& H) {
        return fidelity(evolved, TruncatedState::from_vector(idx, propagate(H, v0, t)));
    };
    EXPECT_GE(fid(used), 1 - 1e-10);
    EXPECT_LT(fid(swapped), 0.99);
}

TEST(Evolution, SphericalRotorPhaseMap) {
    const auto p = CoherentParams::make(builtin_family(5), 1.0, cplx(0.2, 0.1), cplx(0.3, -0.2));
    const auto rep = rotor_decoherence_demo(p, {0.8, 0.8, 0.8}, {0.1, 0.3, 0.5, 1.0});
    EXPECT_TRUE(rep.spherical);
    EXPECT_GE(rep.min_phase_map_fidelity(), 1 - 1e-10);
    EXPECT_LE(rep.max_mean_drift(), 1e-10);
    EXPECT_LE(rep.max_departure(), 1e-10);
    double worst_inverse = 1.0;
    for (const auto& s : rep.samples) worst_inverse = std::min(worst_inverse, s.inverse_phase_fidelity);
    EXPECT_LT(worst_inverse, 0.9);  // e^{+i t j(j+1)/A} is not the propagated state
}

TEST(Evolution, AsymmetricRotorLosesCoherence) {
    const auto p = CoherentParams::make(builtin_family(5), 1.0, cplx(0.2, 0.1), cplx(0.3, -0.2));
    const auto rep = rotor_decoherence_demo(p, {1.0, 2.0, 3.0}, {0.5});
    EXPECT_FALSE(rep.spherical);
    EXPECT_GT(rep.samples[0].correlation_departure, 1e-3);
    EXPECT_GT(rep.samples[0].annihilator_residual, 1e-3);
}

TEST(Evolution, RotorPropagatorUnitary) {
    testing_support::Gen g(63);
    const SpaceSpec sp{6, Tower::HalfInteger};
    const RotorPropagator prop({1.0, 2.0, 3.0}, sp);
    const auto s = g.state(sp);
    EXPECT_NEAR(prop.evolve(s, 0.7).norm_squared(), s.norm_squared(), 1e-10 * s.norm_squared());
    EXPECT_LE(norm(prop.evolve(prop.evolve(s, 0.3), 0.4) - prop.evolve(s, 0.7)), 1e-12 * norm(s));
}
