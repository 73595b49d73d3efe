#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "mcs/angular_ops.hpp"
#include "mcs/coherent.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"
#include "mcs/wigner.hpp"

namespace molcs {

struct UncertaintyProducts {
    double xy = 0.0;  // var(J1) var(J2)
    double xz = 0.0;  // var(J1) var(J0)
    double yz = 0.0;  // var(J2) var(J0)
};

// Normalized expectations <T>_z = <z|T|z>/<z|z>. S rows/columns ordered q = -1/2, +1/2;
// V rows/columns ordered q = -1, 0, +1 (row = molecular index, column = lab index).
struct ExpectationReport {
    double J0 = 0.0;
    double Jsq = 0.0;
    cplx Jplus = 0.0;
    double var1 = 0.0, var2 = 0.0, var0 = 0.0;
    UncertaintyProducts products;
    Eigen::Matrix2cd S = Eigen::Matrix2cd::Zero();
    Eigen::Matrix3cd V = Eigen::Matrix3cd::Zero();
    double norm = 0.0;  // <z|z>
};

namespace detail {

inline int cutoff_for(const SequenceFamily& fam, double x) {
    return truncation_two_j(fam, x) + 4;
}

// Off-diagonal-in-j sums feeding the S and V diagonals on the fundamental state.
inline void tensor_diagonals(const SequenceFamily& fam, cplx root, double N, Eigen::Matrix2cd& S,
                             Eigen::Matrix3cd& V) {
    const double x = std::norm(root) * std::norm(root);
    const int end = cutoff_for(fam, x);
    cplx s_mm = 0.0, v_mm = 0.0;
    double v00 = 0.0;
    auto zpow = [&](int two_j) {  // z^j through the root
        cplx r = 1.0;
        for (int i = 0; i < two_j; ++i) r *= root;
        return r;
    };
    for (int n = 0; n <= end; ++n) {
        const cplx cj = fam.coeff(n);
        if (cj == cplx(0.0)) continue;
        const double j = 0.5 * n;
        const cplx zj = zpow(n);
        const cplx c_half = fam.coeff(n + 1);
        if (c_half != cplx(0.0))
            s_mm += std::conj(c_half * zpow(n + 1)) * cj * zj * std::sqrt((2 * j + 1) / (2 * j + 2));
        const cplx c_one = fam.coeff(n + 2);
        if (c_one != cplx(0.0))
            v_mm += std::conj(c_one * zpow(n + 2)) * cj * zj * std::sqrt((2 * j + 1) / (2 * j + 3));
        if (n > 0) v00 += j / (j + 1) * std::norm(cj) * std::pow(x, j);
    }
    S = Eigen::Matrix2cd::Zero();
    V = Eigen::Matrix3cd::Zero();
    if (fam.tower == Tower::HalfInteger) {
        S(0, 0) = s_mm / N;
        S(1, 1) = std::conj(s_mm) / N;
    }
    V(0, 0) = v_mm / N;
    V(2, 2) = std::conj(v_mm) / N;
    V(1, 1) = v00 / N;
}

}  // namespace detail

// Closed forms on the fundamental state, z given through its root.
inline ExpectationReport mfs_expectations_root(const FamilyPtr& fam, cplx root) {
    const double x = std::norm(root) * std::norm(root);
    const auto d = norm_derivatives(*fam, x);
    ExpectationReport r;
    r.norm = d.N;
    r.J0 = -d.xN1 / d.N;
    r.Jsq = (d.x2N2 + 2.0 * d.xN1) / d.N;
    r.Jplus = 0.0;
    r.var1 = r.var2 = 0.5 * d.xN1 / d.N;
    r.var0 = (d.x2N2 + d.xN1) / d.N - r.J0 * r.J0;
    r.products = {r.var1 * r.var2, r.var1 * r.var0, r.var2 * r.var0};
    detail::tensor_diagonals(*fam, root, d.N, r.S, r.V);
    return r;
}

inline ExpectationReport mfs_expectations(const FamilyPtr& fam, cplx z) {
    return mfs_expectations_root(fam, std::sqrt(z));
}

namespace detail {
inline cplx expect(const TruncatedState& psi, const TruncatedState& op_psi, double nrm) {
    return inner_product(psi, op_psi) / nrm;
}
}  // namespace detail

// <psi|T|psi>/<psi|psi> evaluated by applying operators to the truncated state (lab components).
inline ExpectationReport direct_expectations(const TruncatedState& psi) {
    using OK = OperatorKind;
    ExpectationReport r;
    r.norm = psi.norm_squared();
    const double n = r.norm;
    const auto j1 = apply_component(Frame::Lab, 1, psi);
    const auto j2 = apply_component(Frame::Lab, 2, psi);
    const auto j0 = apply(OK::JL_0(), psi);
    r.J0 = detail::expect(psi, j0, n).real();
    r.Jsq = detail::expect(psi, apply(OK::Casimir(), psi), n).real();
    r.Jplus = detail::expect(psi, apply(OK::JL_plus(), psi), n);
    const double m1 = detail::expect(psi, j1, n).real(), m2 = detail::expect(psi, j2, n).real();
    r.var1 = j1.norm_squared() / n - m1 * m1;
    r.var2 = j2.norm_squared() / n - m2 * m2;
    r.var0 = j0.norm_squared() / n - r.J0 * r.J0;
    r.products = {r.var1 * r.var2, r.var1 * r.var0, r.var2 * r.var0};
    // S leaves the integer tower; evaluate there by embedding into the half-integer tower.
    const TruncatedState half = psi.embedded({psi.space().two_j_max, Tower::HalfInteger});
    for (const auto& op : all_S())
        r.S((op.two_q + 1) / 2, (op.two_qp + 1) / 2) = detail::expect(half, apply(op, half), n);
    for (const auto& op : all_V())
        r.V(op.two_q / 2 + 1, op.two_qp / 2 + 1) = detail::expect(psi, apply(op, psi), n);
    return r;
}

struct UncertaintyCheck {
    double product_xy = 0.0;
    double quarter_J0_sq = 0.0;  // lower bound of product_xy
    double product_xz = 0.0;
    double bound_xz = 0.0;  // (1/4)|<J2>|^2
    double product_yz = 0.0;
    double bound_yz = 0.0;  // (1/4)|<J1>|^2
};

inline UncertaintyCheck uncertainty_check(const FamilyPtr& fam, cplx z) {
    const auto r = mfs_expectations(fam, z);
    UncertaintyCheck u;
    u.product_xy = r.products.xy;
    u.quarter_J0_sq = 0.25 * r.J0 * r.J0;
    u.product_xz = r.products.xz;
    u.product_yz = r.products.yz;
    // <J1> = <J2> = 0 on every fundamental state.
    u.bound_xz = 0.0;
    u.bound_yz = 0.0;
    return u;
}

struct McsExpectations {
    ExpectationReport at_z;       // closed forms on the fundamental state
    Eigen::Vector3d JL, JM;       // (J_1, J_2, J_0) components
    Eigen::Vector3d nL, nM;
    double Jsq = 0.0;
    Eigen::Vector3cd JL_spherical;  // (T_-1, T_0, T_+1) of J^L
    Eigen::Vector3cd JM_spherical;  // same for the molecular rank-one operator
};

// Closed forms: <J>_Z = <J_0>_z n(zeta), with the spherical-component version
// <T_q> = <J_0>_z D^1_{0 q}(-zeta).
inline McsExpectations mcs_expectations(const CoherentParams& p) {
    McsExpectations e;
    e.at_z = mfs_expectations_root(p.family, p.root);
    e.nL = n_hat(Frame::Lab, p.zeta_L);
    e.nM = n_hat(Frame::Mol, p.zeta_M);
    e.JL = e.at_z.J0 * e.nL;
    e.JM = e.at_z.J0 * e.nM;
    e.Jsq = e.at_z.Jsq;
    const Eigen::MatrixXcd DL = su2_block(2, displacement(-p.zeta_L));
    const Eigen::MatrixXcd DM = su2_block(2, displacement(-p.zeta_M));
    for (int q = 0; q < 3; ++q) {
        e.JL_spherical[q] = e.at_z.J0 * DL(1, q);
        e.JM_spherical[q] = e.at_z.J0 * DM(1, q);
    }
    return e;
}

struct DirectMcsExpectations {
    Eigen::Vector3d JL, JM;
    double Jsq = 0.0;
    Eigen::Vector3cd JL_spherical, JM_spherical;
};

inline DirectMcsExpectations direct_mcs_expectations(const TruncatedState& Z) {
    using OK = OperatorKind;
    DirectMcsExpectations d;
    const double n = Z.norm_squared();
    for (int axis = 0; axis < 3; ++axis) {
        const int slot = axis == 0 ? 2 : axis - 1;
        d.JL[slot] = detail::expect(Z, apply_component(Frame::Lab, axis, Z), n).real();
        d.JM[slot] = detail::expect(Z, apply_component(Frame::Mol, axis, Z), n).real();
    }
    d.Jsq = detail::expect(Z, apply(OK::Casimir(), Z), n).real();
    const double r2 = std::sqrt(2.0);
    // Lab: T_{+1} = -J_+/sqrt2, T_{-1} = J_-/sqrt2. Molecular ladders run reversed, so J^M_- plays J_+.
    d.JL_spherical[0] = detail::expect(Z, apply(OK::JL_minus(), Z), n) / r2;
    d.JL_spherical[1] = detail::expect(Z, apply(OK::JL_0(), Z), n);
    d.JL_spherical[2] = -detail::expect(Z, apply(OK::JL_plus(), Z), n) / r2;
    d.JM_spherical[0] = detail::expect(Z, apply(OK::JM_plus(), Z), n) / r2;
    d.JM_spherical[1] = detail::expect(Z, apply(OK::JM_0(), Z), n);
    d.JM_spherical[2] = -detail::expect(Z, apply(OK::JM_minus(), Z), n) / r2;
    return d;
}

struct TensorDecomposition {
    Eigen::Matrix2cd S_direct, S_predicted;
    Eigen::Matrix3cd V_direct, V_predicted;
    Eigen::Matrix2cd S_fundamental;
    Eigen::Matrix3cd V_fundamental;
    [[nodiscard]] double S_defect() const { return (S_direct - S_predicted).cwiseAbs().maxCoeff(); }
    [[nodiscard]] double V_defect() const { return (V_direct - V_predicted).cwiseAbs().maxCoeff(); }
};

// <T>_Z = conj(M) <T>_z L^dagger, L and M the rank blocks of the lab and molecular displacements.
inline TensorDecomposition mcs_tensor_decomposition(const CoherentParams& p, const SpaceSpec& space) {
    TensorDecomposition t;
    const auto Z = mcs(p, space);
    const auto direct = direct_expectations(Z);
    const auto base = mfs_expectations_root(p.family, p.root);
    t.S_direct = direct.S;
    t.V_direct = direct.V;
    t.S_fundamental = base.S;
    t.V_fundamental = base.V;
    const Eigen::MatrixXcd L1 = su2_block(1, displacement(p.zeta_L)), M1 = su2_block(1, displacement(p.zeta_M));
    const Eigen::MatrixXcd L2 = su2_block(2, displacement(p.zeta_L)), M2 = su2_block(2, displacement(p.zeta_M));
    t.S_predicted = M1.conjugate() * base.S * L1.adjoint();
    t.V_predicted = M2.conjugate() * base.V * L2.adjoint();
    return t;
}

struct TransformedUncertainty {
    double defect_L = 0.0;  // relative, var(J1(zeta)) var(J2(zeta)) vs (1/4)<J0(zeta)>^2
    double defect_M = 0.0;
    double total_variance_z = 0.0;  // sum_i var(J_i) on |z>
    double total_variance_Z = 0.0;  // sum_i var(J_i(zeta_L)) on |Z>
};

// Variances of D J D^{-1} on |Z>, with D the displacement, computed by conjugating with its blocks.
inline TransformedUncertainty mcs_transformed_uncertainty(const CoherentParams& p, const SpaceSpec& space) {
    TransformedUncertainty out;
    const auto Z = mcs(p, space);
    const double n = Z.norm_squared();
    auto variances = [&](Frame f, cplx zeta) {
        const Mat2 D = displacement(zeta);
        const TruncatedState phi = apply_rotation(Z, f, D.adjoint());
        std::array<double, 3> var{};
        for (int axis = 0; axis < 3; ++axis) {
            const auto image = apply_rotation(apply_component(f, axis, phi), f, D);  // D J_i D^{-1} |Z>
            const double mean = inner_product(Z, image).real() / n;
            var[std::size_t(axis)] = image.norm_squared() / n - mean * mean;
        }
        const auto j0img = apply_rotation(apply_component(f, 0, phi), f, D);
        const double mean0 = inner_product(Z, j0img).real() / n;
        return std::pair{var, mean0};
    };
    for (Frame f : {Frame::Lab, Frame::Mol}) {
        const auto [var, mean0] = variances(f, f == Frame::Lab ? p.zeta_L : p.zeta_M);
        const double quarter = 0.25 * mean0 * mean0;
        const double prod = var[1] * var[2];
        const double defect = quarter > 0 ? std::abs(prod - quarter) / quarter : std::abs(prod - quarter);
        (f == Frame::Lab ? out.defect_L : out.defect_M) = defect;
        if (f == Frame::Lab) out.total_variance_Z = var[0] + var[1] + var[2];
    }
    const auto base = mfs_expectations_root(p.family, p.root);
    out.total_variance_z = base.var0 + base.var1 + base.var2;
    return out;
}

}  // namespace molcs
