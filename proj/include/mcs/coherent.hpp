#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

#include "mcs/angular_ops.hpp"
#include "mcs/errors.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"
#include "mcs/wigner.hpp"

namespace molcs {

// Z = (z, zeta_L, zeta_M). z is carried through a root w with w^2 = z so that
// half-integer powers z^j = w^{2j} stay continuous under rotations and evolution.
struct CoherentParams {
    FamilyPtr family;
    cplx root = 0.0;
    cplx zeta_L = 0.0;
    cplx zeta_M = 0.0;

    static CoherentParams make(FamilyPtr fam, cplx z, cplx zl = 0.0, cplx zm = 0.0) {
        return from_root(std::move(fam), std::sqrt(z), zl, zm);
    }
    static CoherentParams from_root(FamilyPtr fam, cplx w, cplx zl = 0.0, cplx zm = 0.0) {
        CoherentParams p{std::move(fam), w, zl, zm};
        p.validate();
        return p;
    }

    [[nodiscard]] cplx z() const { return root * root; }
    [[nodiscard]] double x() const { return std::norm(root) * std::norm(root); }  // |z|^2

    void validate() const {
        if (!family) throw InvalidLabel("coherent parameters need a family");
        if (!family->admits_abs_z(std::abs(z())))
            throw DomainError(family->name + ": |z| outside the convergence domain");
    }
};

inline SpaceSpec default_space(const SequenceFamily& fam, double x, double rel_tol = 1e-17) {
    const int n = std::max(truncation_two_j(fam, x, rel_tol), 2);
    const int tj = fam.tower == Tower::Integer && n % 2 ? n + 1 : n;
    return {tj, fam.tower};
}
inline SpaceSpec default_space(const CoherentParams& p) { return default_space(*p.family, p.x()); }

namespace detail {
inline void check_space_for(const SequenceFamily& fam, const SpaceSpec& space) {
    if (fam.tower == Tower::HalfInteger && space.tower == Tower::Integer)
        throw SpaceMismatch(fam.name + " needs the half-integer tower");
}
inline double sqrt_binomial(int n, int k) {
    return std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}
inline cplx ipow(cplx z, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}
}  // namespace detail

// <j,k,m|Z> for one label.
inline cplx mcs_coefficient(const CoherentParams& p, const BasisLabel& b) {
    const cplx cj = p.family->coeff(b.two_j);
    if (cj == cplx(0.0)) return 0.0;
    const double nL = 1.0 / std::sqrt(1.0 + std::norm(p.zeta_L));
    const double nM = 1.0 / std::sqrt(1.0 + std::norm(p.zeta_M));
    const int n = b.two_j;
    const int q = (b.two_j + b.two_m) / 2;  // j + m
    const int r = (b.two_j + b.two_k) / 2;  // j + k
    const cplx lab = detail::sqrt_binomial(n, q) * detail::ipow(p.zeta_L * nL, q) * std::pow(nL, n - q);
    const cplx mol = detail::sqrt_binomial(n, r) * detail::ipow(p.zeta_M * nM, r) * std::pow(nM, n - r);
    return cj * detail::ipow(p.root, n) * lab * mol;
}

inline TruncatedState mcs(const CoherentParams& p, const SpaceSpec& space) {
    p.validate();
    detail::check_space_for(*p.family, space);
    TruncatedState s(space);
    for (int tj = 0; tj <= space.two_j_max; tj += space.j_step()) {
        if (p.family->coeff(tj) == cplx(0.0)) continue;
        // A vanishing zeta leaves only the lowest weight in that index.
        const int tk_hi = p.zeta_M == cplx(0.0) ? -tj : tj;
        const int tm_hi = p.zeta_L == cplx(0.0) ? -tj : tj;
        for (int tk = -tj; tk <= tk_hi; tk += 2)
            for (int tm = -tj; tm <= tm_hi; tm += 2) {
                const BasisLabel b{tj, tk, tm};
                const cplx a = mcs_coefficient(p, b);
                if (a != cplx(0.0)) s.add(b, a);
            }
    }
    return s;
}

inline TruncatedState mfs(const FamilyPtr& fam, cplx z, const SpaceSpec& space) {
    return mcs(CoherentParams::make(fam, z), space);
}

// <Z'|Z> from the closed form, Z' = p2.
inline cplx overlap_closed(const CoherentParams& p, const CoherentParams& p2) {
    if (!(p.family == p2.family || (p.family->id != 0 && p.family->id == p2.family->id)))
        throw InvalidLabel("overlap_closed needs both states from the same family");
    const double den = std::sqrt((1 + std::norm(p.zeta_L)) * (1 + std::norm(p.zeta_M)) * (1 + std::norm(p2.zeta_L)) *
                                 (1 + std::norm(p2.zeta_M)));
    const cplx s = (1.0 + std::conj(p2.zeta_L) * p.zeta_L) * (1.0 + std::conj(p2.zeta_M) * p.zeta_M) *
                   std::conj(p2.root) * p.root / den;
    return norm_series_complex(*p.family, s);
}

// Cayley-Klein pair with matrix [[u, v], [-conj(v), conj(u)]] acting on (up, down).
struct RotationParams {
    cplx u = 1.0;
    cplx v = 0.0;

    static RotationParams from_euler(const EulerAngles& g) {
        RotationParams r{std::exp(cplx(0.0, -0.5 * (g.alpha + g.gamma))) * std::cos(0.5 * g.beta),
                         std::exp(cplx(0.0, 0.5 * (g.alpha - g.gamma))) * std::sin(0.5 * g.beta)};
        return r;
    }
    static RotationParams from_matrix(const Mat2& U) {
        RotationParams r{U(0, 0), U(0, 1)};
        r.check();
        return r;
    }
    [[nodiscard]] Mat2 matrix() const {
        Mat2 U;
        U << u, v, -std::conj(v), std::conj(u);
        return U;
    }
    void check() const {
        if (std::abs(std::norm(u) + std::norm(v) - 1.0) > 1e-12) throw InvalidLabel("|u|^2 + |v|^2 != 1");
    }
    // Apply this, then `after`.
    [[nodiscard]] RotationParams then(const RotationParams& after) const {
        return from_matrix(after.matrix() * matrix());
    }
};

struct RotatedParams {
    CoherentParams params;
    cplx phase;  // e^{i lambda}, with R.z = z e^{-i lambda}
};

// Moebius action on the lab (or molecular) parameter; the state identity
// mcs(rotated) = apply_rotation(mcs(p), frame, r.matrix()) holds with no extra phase.
inline RotatedParams rotate_params(const CoherentParams& p, Frame which, const RotationParams& r) {
    r.check();
    const cplx zeta = which == Frame::Lab ? p.zeta_L : p.zeta_M;
    const cplx den = std::conj(r.u) - std::conj(r.v) * zeta;
    const double scale = std::abs(r.u * zeta) + std::abs(r.v) + 1.0;
    if (std::abs(den) <= 1e-14 * scale) throw PoleError("Moebius denominator vanishes: rotated zeta is at infinity");
    const cplx new_zeta = (r.u * zeta + r.v) / den;
    const cplx unit = den / std::abs(den);
    CoherentParams q = p;
    (which == Frame::Lab ? q.zeta_L : q.zeta_M) = new_zeta;
    q.root = p.root * unit;
    return {q, std::conj(unit) / unit};
}

// Acts with the spin-j image of U on the m index (Lab) or on the k index (Mol), blockwise in j.
inline TruncatedState apply_rotation(const TruncatedState& s, Frame which, const Mat2& U) {
    TruncatedState out(s.space());
    std::map<int, Eigen::MatrixXcd> blocks;
    for (const auto& [b, a] : s) {
        auto it = blocks.find(b.two_j);
        if (it == blocks.end()) it = blocks.emplace(b.two_j, su2_block(b.two_j, U)).first;
        const Eigen::MatrixXcd& D = it->second;
        const int src = ((which == Frame::Lab ? b.two_m : b.two_k) + b.two_j) / 2;
        for (int row = 0; row <= b.two_j; ++row) {
            const cplx d = D(row, src);
            if (d == cplx(0.0)) continue;
            const int t = 2 * row - b.two_j;
            BasisLabel tgt = which == Frame::Lab ? BasisLabel{b.two_j, b.two_k, t} : BasisLabel{b.two_j, t, b.two_m};
            out.add(tgt, d * a);
        }
    }
    return out;
}

// Displacement with D(zeta)|lowest> = spin coherent state of parameter zeta.
inline Mat2 displacement(cplx zeta) {
    const double n = 1.0 / std::sqrt(1.0 + std::norm(zeta));
    Mat2 D;
    D << n, n * zeta, -n * std::conj(zeta), n;
    return D;
}

// Unit direction of <J> in the chosen frame, components ordered (J_1, J_2, J_0).
inline Eigen::Vector3d n_hat(Frame which, cplx zeta) {
    const double d = 1.0 + std::norm(zeta);
    const double sgn2 = which == Frame::Lab ? 1.0 : -1.0;
    return {-2.0 * zeta.real() / d, sgn2 * 2.0 * zeta.imag() / d, (1.0 - std::norm(zeta)) / d};
}

struct DirectionAngles {
    double theta;
    double phi;
};

// zeta = -tan(theta/2) e^{-i phi}.
inline DirectionAngles direction_angles(cplx zeta) {
    const double theta = 2.0 * std::atan(std::abs(zeta));
    const double phi = zeta == cplx(0.0) ? 0.0 : std::arg(-std::conj(zeta));
    return {theta, phi};
}
inline cplx zeta_from_angles(double theta, double phi) {
    return -std::tan(0.5 * theta) * std::exp(cplx(0.0, -phi));
}

// Norms of the two quadratic annihilators built from (zeta_L, zeta_M), relative to the state norm.
inline std::pair<double, double> annihilator_residuals(const TruncatedState& Z, cplx zl, cplx zm) {
    using OK = OperatorKind;
    const double nZ = std::max(norm(Z), 1e-300);
    const double lab =
        norm(zl * zl * apply(OK::JL_plus(), Z) - 2.0 * zl * apply(OK::JL_0(), Z) - apply(OK::JL_minus(), Z)) / nZ;
    const double mol =
        norm(zm * zm * apply(OK::JM_minus(), Z) - 2.0 * zm * apply(OK::JM_0(), Z) - apply(OK::JM_plus(), Z)) / nZ;
    return {lab, mol};
}

// Inverse of n_hat on the sphere minus the south pole n = (0, 0, -1).
inline cplx zeta_from_direction(Frame which, const Eigen::Vector3d& n_in) {
    const Eigen::Vector3d n = n_in.normalized();
    if (n[2] <= -1.0 + 1e-14) throw PoleError("direction at the pole of the zeta chart");
    const double r2 = (1.0 - n[2]) / (1.0 + n[2]);
    const double x = -0.5 * n[0] * (1.0 + r2);
    const double y = 0.5 * n[1] * (1.0 + r2) * (which == Frame::Lab ? 1.0 : -1.0);
    return {x, y};
}

struct IdentityResiduals {
    double mfs_lowering = 0.0;   // J^L_- |z> and J^M_+ |z>
    double mfs_j0 = 0.0;         // (J_0 + Lambda)|z>, both frames
    double mfs_casimir = 0.0;    // (J^2 + J_0(1 - J_0))|z>
    double lab_annihilator = 0.0;
    double mol_annihilator = 0.0;
    double lab_direction = 0.0;  // (Lambda + n^L . J^L)|Z>
    double mol_direction = 0.0;
    [[nodiscard]] double max() const {
        return std::max({mfs_lowering, mfs_j0, mfs_casimir, lab_annihilator, mol_annihilator, lab_direction,
                         mol_direction});
    }
};

// All residuals are divided by the state norm.
inline IdentityResiduals identity_residuals(const CoherentParams& p, const SpaceSpec& space) {
    using OK = OperatorKind;
    IdentityResiduals r;
    const auto z0 = mcs(CoherentParams::from_root(p.family, p.root), space);
    const double n0 = std::max(norm(z0), 1e-300);
    r.mfs_lowering = std::max(norm(apply(OK::JL_minus(), z0)), norm(apply(OK::JM_plus(), z0))) / n0;
    const auto lam0 = apply(OK::Lambda(), z0);
    r.mfs_j0 = std::max(norm(apply(OK::JL_0(), z0) + lam0), norm(apply(OK::JM_0(), z0) + lam0)) / n0;
    {
        const auto j0 = apply(OK::JL_0(), z0);
        const auto lhs = apply(OK::Casimir(), z0) + j0 - apply(OK::JL_0(), j0);
        r.mfs_casimir = norm(lhs) / n0;
    }
    const auto Z = mcs(p, space);
    const double nZ = std::max(norm(Z), 1e-300);
    const cplx zl = p.zeta_L, zm = p.zeta_M;
    std::tie(r.lab_annihilator, r.mol_annihilator) = annihilator_residuals(Z, zl, zm);
    auto direction = [&](Frame f, cplx zeta) {
        const Eigen::Vector3d n = n_hat(f, zeta);
        TruncatedState acc = apply(OK::Lambda(), Z);
        acc += cplx(n[0]) * apply_component(f, 1, Z);
        acc += cplx(n[1]) * apply_component(f, 2, Z);
        acc += cplx(n[2]) * apply_component(f, 0, Z);
        return norm(acc) / nZ;
    };
    r.lab_direction = direction(Frame::Lab, zl);
    r.mol_direction = direction(Frame::Mol, zm);
    return r;
}

}  // namespace molcs
