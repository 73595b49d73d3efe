#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mcs/angular_ops.hpp"
#include "mcs/coherent.hpp"
#include "mcs/errors.hpp"
#include "mcs/expectations.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"
#include "mcs/parse.hpp"

namespace molcs {

struct DriveValues {
    cplx aL = 0.0;
    double aL0 = 0.0;
    cplx aM = 0.0;
    double aM0 = 0.0;
};

// Coefficients of H = i(aL J^L_+ - conj(aL) J^L_-) + aL0 J^L_0 + i(aM J^M_- - conj(aM) J^M_+) + aM0 J^M_0.
// The molecular ladder operators enter in the order that makes the Riccati flow exact
// under the anomalous molecular commutators.
struct DriveCoefficients {
    DriveValues constant;
    std::function<DriveValues(double)> fn;  // overrides `constant` when set

    static DriveCoefficients make(cplx aL, double aL0, cplx aM, double aM0) { return {{aL, aL0, aM, aM0}, {}}; }
    [[nodiscard]] DriveValues at(double t) const { return fn ? fn(t) : constant; }
    [[nodiscard]] bool is_zero() const {
        return !fn && constant.aL == cplx(0.0) && constant.aM == cplx(0.0) && constant.aL0 == 0.0 && constant.aM0 == 0.0;
    }
};

// Keys aL, aL0, aM, aM0 (complex values accept "a+bi"); missing keys are zero.
inline DriveCoefficients parse_drive(std::istream& is) {
    const auto kv = parse_key_values(is);
    DriveCoefficients d;
    for (const auto& [k, v] : kv) {
        if (k == "aL") d.constant.aL = parse_complex(v);
        else if (k == "aM") d.constant.aM = parse_complex(v);
        else if (k == "aL0") d.constant.aL0 = parse_real(v);
        else if (k == "aM0") d.constant.aM0 = parse_real(v);
        else throw ParseError("unknown drive key '" + k + "' (expected aL, aL0, aM, aM0)");
    }
    return d;
}

// Field h with H = h . J in (J_1, J_2, J_0) order; the molecular field is expressed in the
// standard-algebra components K = (J^M_1, -J^M_2, J^M_0).
struct Fields {
    Eigen::Vector3d hL, hK;
};
inline Fields fields(const DriveValues& d) {
    auto h = [](cplx a, double a0) { return Eigen::Vector3d(-2.0 * a.imag(), -2.0 * a.real(), a0); };
    return {h(d.aL, d.aL0), h(d.aM, d.aM0)};
}

struct EvolutionState {
    double t = 0.0;
    cplx zeta_L = 0.0;
    cplx zeta_M = 0.0;
    double sigma = 0.0;
};

struct StepOptions {
    double tol = 1e-11;        // absolute local error per step, scaled by 1 + |zeta|
    int max_halvings = 20;
    double pole_guard = 1e8;   // |zeta| beyond this is reported as a pole passage
    double imag_tol = 1e-12;   // allowed imaginary residue of the phase rate
};

namespace detail {

struct Rates {
    cplx dzl, dzm;
    double dsigma;
};

inline Rates evolution_rates(const DriveValues& d, cplx zl, cplx zm, const StepOptions& opt) {
    const cplx I(0.0, 1.0);
    Rates r;
    r.dzl = d.aL + std::conj(d.aL) * zl * zl - I * d.aL0 * zl;
    r.dzm = d.aM + std::conj(d.aM) * zm * zm - I * d.aM0 * zm;
    const cplx ds = I * (d.aL * std::conj(zl) - std::conj(d.aL) * zl) - d.aL0 +
                    I * (d.aM * std::conj(zm) - std::conj(d.aM) * zm) - d.aM0;
    const double scale = 1.0 + std::abs(d.aL) * std::abs(zl) + std::abs(d.aM) * std::abs(zm);
    if (std::abs(ds.imag()) > opt.imag_tol * scale)
        throw Error("phase rate acquired an imaginary part " + std::to_string(ds.imag()));
    r.dsigma = ds.real();
    return r;
}

inline EvolutionState rk4(const DriveCoefficients& drive, const EvolutionState& s, double dt, const StepOptions& opt) {
    auto f = [&](double t, cplx zl, cplx zm) { return evolution_rates(drive.at(t), zl, zm, opt); };
    const Rates k1 = f(s.t, s.zeta_L, s.zeta_M);
    const Rates k2 = f(s.t + 0.5 * dt, s.zeta_L + 0.5 * dt * k1.dzl, s.zeta_M + 0.5 * dt * k1.dzm);
    const Rates k3 = f(s.t + 0.5 * dt, s.zeta_L + 0.5 * dt * k2.dzl, s.zeta_M + 0.5 * dt * k2.dzm);
    const Rates k4 = f(s.t + dt, s.zeta_L + dt * k3.dzl, s.zeta_M + dt * k3.dzm);
    EvolutionState o;
    o.t = s.t + dt;
    o.zeta_L = s.zeta_L + dt / 6.0 * (k1.dzl + 2.0 * k2.dzl + 2.0 * k3.dzl + k4.dzl);
    o.zeta_M = s.zeta_M + dt / 6.0 * (k1.dzm + 2.0 * k2.dzm + 2.0 * k3.dzm + k4.dzm);
    o.sigma = s.sigma + dt / 6.0 * (k1.dsigma + 2.0 * k2.dsigma + 2.0 * k3.dsigma + k4.dsigma);
    return o;
}

inline void pole_check(const EvolutionState& s, const StepOptions& opt) {
    if (!(std::abs(s.zeta_L) < opt.pole_guard) || !(std::abs(s.zeta_M) < opt.pole_guard))
        throw PoleError("Riccati flow passes the antipodal point near t = " + std::to_string(s.t));
}

}  // namespace detail

// One step of size dt: compares one full RK4 step with two half steps and recursively halves
// while the difference exceeds the tolerance.
inline EvolutionState step(const DriveCoefficients& drive, const EvolutionState& s, double dt,
                           const StepOptions& opt = {}, int depth = 0) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    detail::pole_check(s, opt);
    const EvolutionState full = detail::rk4(drive, s, dt, opt);
    const EvolutionState half = detail::rk4(drive, detail::rk4(drive, s, 0.5 * dt, opt), 0.5 * dt, opt);
    const double scale = 1.0 + std::max(std::abs(half.zeta_L), std::abs(half.zeta_M));
    const double err = std::max({std::abs(full.zeta_L - half.zeta_L), std::abs(full.zeta_M - half.zeta_M),
                                 std::abs(full.sigma - half.sigma)});
    if (std::isfinite(err) && err <= opt.tol * scale) {
        detail::pole_check(half, opt);
        return half;
    }
    if (depth >= opt.max_halvings)
        throw PoleError("step size underflow near t = " + std::to_string(s.t) + " (Riccati pole)");
    const EvolutionState mid = step(drive, s, 0.5 * dt, opt, depth + 1);
    return step(drive, mid, 0.5 * dt, opt, depth + 1);
}

inline EvolutionState initial_state(const CoherentParams& p) { return {0.0, p.zeta_L, p.zeta_M, 0.0}; }

// Trajectory sampled at every multiple of dt up to t_end (inclusive).
inline std::vector<EvolutionState> integrate(const DriveCoefficients& drive, const EvolutionState& s0, double t_end,
                                             double dt, const StepOptions& opt = {}) {
    if (!(dt > 0.0) || t_end < s0.t) throw DomainError("need dt > 0 and t_end >= t0");
    std::vector<EvolutionState> out{s0};
    const auto n = static_cast<long>(std::ceil((t_end - s0.t) / dt - 1e-9));
    EvolutionState s = s0;
    for (long i = 0; i < n; ++i) {
        const double h = std::min(dt, t_end - s.t);
        s = step(drive, s, h, opt);
        out.push_back(s);
    }
    return out;
}

// z(t) = z e^{-i sigma(t)}, carried on the square root so half-integer powers stay continuous.
inline CoherentParams params_at(const CoherentParams& p0, const EvolutionState& s) {
    return CoherentParams::from_root(p0.family, p0.root * std::exp(cplx(0.0, -0.5 * s.sigma)), s.zeta_L, s.zeta_M);
}

inline SparseC drive_hamiltonian(const DriveValues& d, const BasisIndex& idx) {
    using OK = OperatorKind;
    const cplx I(0.0, 1.0);
    SparseC H = (I * d.aL) * operator_matrix(OK::JL_plus(), idx);
    H -= (I * std::conj(d.aL)) * operator_matrix(OK::JL_minus(), idx);
    H += cplx(d.aL0) * operator_matrix(OK::JL_0(), idx);
    H += (I * d.aM) * operator_matrix(OK::JM_minus(), idx);
    H -= (I * std::conj(d.aM)) * operator_matrix(OK::JM_plus(), idx);
    H += cplx(d.aM0) * operator_matrix(OK::JM_0(), idx);
    return H;
}

struct SchrodingerResult {
    TruncatedState state;
    double top_shell_weight = 0.0;  // relative weight on the largest two_j kept
    double norm_drift = 0.0;
};

// Direct RK4 integration of i d/dt psi = H psi starting from the coherent state.
inline SchrodingerResult schrodinger_reference(const DriveCoefficients& drive, const CoherentParams& p, double t,
                                               double dt, std::optional<SpaceSpec> space = std::nullopt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    const SpaceSpec sp = space ? *space : default_space(p);
    const BasisIndex idx(sp);
    const auto psi0 = mcs(p, sp);
    Eigen::VectorXcd v = psi0.to_vector(idx);
    const double n0 = v.norm();
    const cplx mI(0.0, -1.0);
    const bool constant = !drive.fn;
    SparseC Hc;
    if (constant) Hc = drive_hamiltonian(drive.constant, idx);
    auto rhs = [&](double tt, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        if (constant) return mI * (Hc * x);
        const SparseC H = drive_hamiltonian(drive.at(tt), idx);
        return mI * (H * x);
    };
    const auto n = static_cast<long>(std::ceil(t / dt - 1e-9));
    double tt = 0.0;
    for (long i = 0; i < n; ++i) {
        const double h = std::min(dt, t - tt);
        const Eigen::VectorXcd k1 = rhs(tt, v);
        const Eigen::VectorXcd k2 = rhs(tt + 0.5 * h, v + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = rhs(tt + 0.5 * h, v + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = rhs(tt + h, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tt += h;
    }
    SchrodingerResult r{TruncatedState::from_vector(idx, v), 0.0, std::abs(v.norm() - n0) / n0};
    double top = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (idx.label(i).two_j == sp.two_j_max) top += std::norm(v[Eigen::Index(i)]);
    r.top_shell_weight = top / std::max(v.squaredNorm(), 1e-300);
    return r;
}

inline double fidelity(const TruncatedState& a, const TruncatedState& b) {
    return std::norm(inner_product(a, b)) / (a.norm_squared() * b.norm_squared());
}

struct StabilityReport {
    double fidelity = 0.0;
    double top_shell_weight = 0.0;
    double norm_drift = 0.0;
    EvolutionState final_state;
};

// Compares the parameter-evolved coherent state with the directly integrated one at time t.
inline StabilityReport temporal_stability(const DriveCoefficients& drive, const CoherentParams& p, double t, double dt) {
    const SpaceSpec sp = default_space(p);
    const auto traj = integrate(drive, initial_state(p), t, dt);
    const auto evolved = mcs(params_at(p, traj.back()), sp);
    const auto ref = schrodinger_reference(drive, p, t, dt, sp);
    return {fidelity(evolved, ref.state), ref.top_shell_weight, ref.norm_drift, traj.back()};
}

struct PrecessionReport {
    double residual_L = 0.0;     // max |nu' - h x nu| over interior samples
    double residual_M = 0.0;
    double length_drift = 0.0;   // max ||nu| - 1| from the expectation vectors
    [[nodiscard]] double max() const { return std::max({residual_L, residual_M, length_drift}); }
};

// nu^L = <J^L>/<J_0>_z and nu^K likewise in standard molecular components, differentiated
// by central differences along the parameter trajectory.
inline PrecessionReport precession_check(const DriveCoefficients& drive, const CoherentParams& p, double t_end,
                                         double dt) {
    const auto traj = integrate(drive, initial_state(p), t_end, dt);
    std::vector<Eigen::Vector3d> nuL, nuK;
    PrecessionReport r;
    for (const auto& s : traj) {
        const auto e = mcs_expectations(params_at(p, s));
        const double j0 = e.at_z.J0;
        if (j0 == 0.0) throw DomainError("<J_0>_z vanishes; the classical vector is undefined");
        Eigen::Vector3d l = e.JL / j0, k = e.JM / j0;
        k[1] = -k[1];
        nuL.push_back(l);
        nuK.push_back(k);
        r.length_drift = std::max({r.length_drift, std::abs(l.norm() - 1.0), std::abs(k.norm() - 1.0)});
    }
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double h = traj[i + 1].t - traj[i - 1].t;
        const Fields f = fields(drive.at(traj[i].t));
        const Eigen::Vector3d dL = (nuL[i + 1] - nuL[i - 1]) / h, dK = (nuK[i + 1] - nuK[i - 1]) / h;
        r.residual_L = std::max(r.residual_L, (dL - f.hL.cross(nuL[i])).norm());
        r.residual_M = std::max(r.residual_M, (dK - f.hK.cross(nuK[i])).norm());
    }
    return r;
}

// Exact propagation under sum_i A_i (J^M_i)^2: per shell, the k-space block is diagonalized once.
class RotorPropagator {
public:
    RotorPropagator(const RotorConstants& c, const SpaceSpec& space) : space_(space) {
        for (int tj = 0; tj <= space.two_j_max; tj += space.j_step()) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rotor_k_block(c, tj));
            blocks_.push_back({tj, es.eigenvalues(), es.eigenvectors()});
        }
    }

    [[nodiscard]] TruncatedState evolve(const TruncatedState& s, double t) const {
        if (!(s.space() == space_)) throw SpaceMismatch("rotor propagator built for another space");
        TruncatedState out(space_);
        for (const auto& b : blocks_) {
            const int n = b.two_j + 1;
            Eigen::MatrixXcd C(n, n);  // rows k, columns m
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) C(a, c) = s.amplitude({b.two_j, 2 * a - b.two_j, 2 * c - b.two_j});
            if (C.isZero(0.0)) continue;
            Eigen::VectorXcd ph(n);
            for (int i = 0; i < n; ++i) ph[i] = std::exp(cplx(0.0, -b.E[i] * t));
            const Eigen::MatrixXcd U = b.V * ph.asDiagonal() * b.V.adjoint();
            const Eigen::MatrixXcd D = U * C;
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) out.add({b.two_j, 2 * a - b.two_j, 2 * c - b.two_j}, D(a, c));
        }
        return out;
    }

private:
    struct Block {
        int two_j;
        Eigen::VectorXd E;
        Eigen::MatrixXcd V;
    };
    SpaceSpec space_;
    std::vector<Block> blocks_;
};

// First and symmetrized second moments of the three components of one frame.
struct MomentSet {
    Eigen::Vector3d mean;      // (J_1, J_2, J_0)
    Eigen::Matrix3d sym;       // <J_i J_k + J_k J_i>
    [[nodiscard]] Eigen::Matrix3d correlation() const { return sym - 2.0 * mean * mean.transpose(); }
};

inline MomentSet component_moments(Frame f, const TruncatedState& s) {
    const double n2 = s.norm_squared();
    // Component order (J_1, J_2, J_0) maps to apply_component axes (1, 2, 0).
    const std::array<TruncatedState, 3> v{apply_component(f, 1, s), apply_component(f, 2, s),
                                          apply_component(f, 0, s)};
    MomentSet m;
    for (int i = 0; i < 3; ++i) {
        m.mean[i] = inner_product(s, v[std::size_t(i)]).real() / n2;
        for (int k = 0; k < 3; ++k) m.sym(i, k) = 2.0 * inner_product(v[std::size_t(i)], v[std::size_t(k)]).real() / n2;
    }
    return m;
}

struct RotorSample {
    double t;
    double correlation_departure;   // max_{i,k} |G_ik(t) - G_ik(0)|, G = <J_iJ_k+J_kJ_i> - 2<J_i><J_k>
    double annihilator_residual;    // heuristic: best-direction annihilator norm
    double mean_drift_M;            // max_i |<J^M_i>(t) - <J^M_i>(0)|
    double mean_drift_L;
    double phase_map_fidelity;      // overlap with the coherent state of c_j e^{-i A t j(j+1)} (spherical only)
    double inverse_phase_fidelity;    // same with c_j e^{+i t j(j+1)/A}
};

struct RotorReport {
    bool spherical = false;
    std::vector<RotorSample> samples;
    [[nodiscard]] double max_departure() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, s.correlation_departure);
        return m;
    }
    [[nodiscard]] double min_phase_map_fidelity() const {
        double m = 1.0;
        for (const auto& s : samples) m = std::min(m, s.phase_map_fidelity);
        return m;
    }
    [[nodiscard]] double max_mean_drift() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max({m, s.mean_drift_M, s.mean_drift_L});
        return m;
    }
};

// Exact rotor propagation of a coherent state, sampled at the given times. The correlation matrix
// uses molecular components.
inline RotorReport rotor_decoherence_demo(const CoherentParams& p, const RotorConstants& c,
                                          const std::vector<double>& times) {
    const SpaceSpec sp = default_space(p);
    const auto psi0 = mcs(p, sp);
    const RotorPropagator prop(c, sp);
    RotorReport rep;
    rep.spherical = c.A0 == c.A1 && c.A1 == c.A2;
    const MomentSet m0 = component_moments(Frame::Mol, psi0);
    const MomentSet l0 = component_moments(Frame::Lab, psi0);
    const Eigen::Matrix3d G0 = m0.correlation();
    for (double t : times) {
        const auto psi = prop.evolve(psi0, t);
        RotorSample s{};
        s.t = t;
        const MomentSet mt = component_moments(Frame::Mol, psi);
        const MomentSet lt = component_moments(Frame::Lab, psi);
        s.correlation_departure = (mt.correlation() - G0).cwiseAbs().maxCoeff();
        s.mean_drift_M = (mt.mean - m0.mean).cwiseAbs().maxCoeff();
        s.mean_drift_L = (lt.mean - l0.mean).cwiseAbs().maxCoeff();
        try {
            // Directions from the mean vectors; <J> = <J_0>_z n with <J_0>_z < 0.
            const cplx zl = zeta_from_direction(Frame::Lab, -lt.mean);
            const cplx zm = zeta_from_direction(Frame::Mol, -mt.mean);
            const auto [a, b] = annihilator_residuals(psi, zl, zm);
            s.annihilator_residual = std::max(a, b);
        } catch (const PoleError&) {
            s.annihilator_residual = std::numeric_limits<double>::quiet_NaN();
        }
        if (rep.spherical) {
            const double A = c.A0;
            auto phased = [&](std::function<double(int)> ph) {
                const auto fam = phase_shifted(p.family, std::move(ph));
                return fidelity(mcs(CoherentParams::from_root(fam, p.root, p.zeta_L, p.zeta_M), sp), psi);
            };
            s.phase_map_fidelity = phased([A, t](int tj) { return -A * t * 0.25 * tj * (tj + 2); });
            s.inverse_phase_fidelity = phased([A, t](int tj) { return t * 0.25 * tj * (tj + 2) / A; });
        } else {
            s.phase_map_fidelity = std::numeric_limits<double>::quiet_NaN();
            s.inverse_phase_fidelity = std::numeric_limits<double>::quiet_NaN();
        }
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace molcs
