#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "mcs/coherent.hpp"
#include "mcs/errors.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"
#include "mcs/quadrature.hpp"

namespace molcs {

// Node counts per complex plane. Angular counts of 0 are chosen from the largest two_j
// so that the uniform rule integrates every phase that can occur exactly.
struct QuadratureSpec {
    int z_radial = 200;
    int zeta_radial = 8;
    int z_angular = 0;
    int zeta_angular = 0;
};

namespace detail {

inline constexpr double pi = std::numbers::pi;

// Radial nodes in t = |z| with weights for t dt; infinite supports use t = s/(1-s).
inline std::vector<std::pair<double, double>> z_radial_nodes(const Measure& meas, int n) {
    std::vector<std::pair<double, double>> out;
    if (std::isfinite(meas.support)) {
        for (const auto& [t, w] : quad::mapped(n, 0.0, std::sqrt(meas.support))) out.emplace_back(t, w * t);
    } else {
        for (const auto& [s, w] : quad::mapped(n, 0.0, 1.0)) {
            const double t = s / (1.0 - s);
            out.emplace_back(t, w * t / ((1.0 - s) * (1.0 - s)));
        }
    }
    return out;
}

// Radial nodes in rho = |zeta| for the measure d^2 zeta/(1+|zeta|^2)^2 = (1/2) du dphi, u = rho^2/(1+rho^2).
inline std::vector<std::pair<double, double>> zeta_radial_nodes(int n) {
    std::vector<std::pair<double, double>> out;
    for (const auto& [u, w] : quad::mapped(n, 0.0, 1.0)) out.emplace_back(std::sqrt(u / (1.0 - u)), 0.5 * w);
    return out;
}

inline int angular_count(int requested, int two_j_max) { return requested > 0 ? requested : two_j_max + 2; }

}  // namespace detail

// (1/pi^3) int d^2z d^2zeta_L d^2zeta_M f(|z|^2) / ((1+|zeta_L|^2)^2 (1+|zeta_M|^2)^2) <bra|Z><Z|ket>
// by full tensor-product quadrature. The z phase runs over the double cover [0, 4pi) with weight 1/2
// so that half-integer powers z^j integrate to Kronecker deltas.
inline Eigen::MatrixXcd unity_matrix_brute(const FamilyPtr& fam, const Measure& meas, const SpaceSpec& space,
                                           const QuadratureSpec& quad = {}) {
    const BasisIndex idx(space);
    const std::size_t n = idx.size();
    const int tjm = space.two_j_max;
    const auto zr = detail::z_radial_nodes(meas, quad.z_radial);
    const auto zetar = detail::zeta_radial_nodes(quad.zeta_radial);
    const int nza = detail::angular_count(quad.z_angular, tjm);
    const int nzeta = detail::angular_count(quad.zeta_angular, tjm);
    const auto z_theta = quad::periodic_nodes(nza, 4.0 * detail::pi);
    const auto phis = quad::periodic_nodes(nzeta);
    const double wz_ang = 0.5 * 4.0 * detail::pi / nza;
    const double wzeta_ang = 2.0 * detail::pi / nzeta;

    // Spinor factor sigma^j_q zeta^q (1+|zeta|^2)^{-j} for every (two_j, q) at one node.
    auto spinor_table = [&](cplx zeta) {
        std::vector<std::vector<cplx>> tab(std::size_t(tjm + 1));
        const double nrm = 1.0 / std::sqrt(1.0 + std::norm(zeta));
        for (int tj = 0; tj <= tjm; ++tj)
            for (int q = 0; q <= tj; ++q)
                tab[std::size_t(tj)].push_back(detail::sqrt_binomial(tj, q) * detail::ipow(zeta * nrm, q) *
                                               std::pow(nrm, tj - q));
        return tab;
    };
    std::vector<std::tuple<double, std::vector<std::vector<cplx>>>> zeta_nodes;
    for (const auto& [rho, wr] : zetar)
        for (double ph : phis) zeta_nodes.emplace_back(wr * wzeta_ang, spinor_table(std::polar(rho, ph)));

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(n));
    Eigen::VectorXcd amp(static_cast<Eigen::Index>(n));
    std::vector<cplx> zfac(std::size_t(tjm + 1));
    for (const auto& [t, wt] : zr) {
        const double fv = meas.f(t * t);
        if (fv == 0.0) continue;
        for (double th : z_theta) {
            const cplx root = std::polar(std::sqrt(t), 0.5 * th);
            for (int tj = 0; tj <= tjm; ++tj) zfac[std::size_t(tj)] = fam->coeff(tj) * detail::ipow(root, tj);
            const double wz = wt * wz_ang * fv;
            for (const auto& [wl, lab] : zeta_nodes)
                for (const auto& [wm, mol] : zeta_nodes) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const auto& b = idx.label(i);
                        const auto tj = std::size_t(b.two_j);
                        amp[Eigen::Index(i)] = zfac[tj] * lab[tj][std::size_t((b.two_j + b.two_m) / 2)] *
                                               mol[tj][std::size_t((b.two_j + b.two_k) / 2)];
                    }
                    acc.noalias() += (wz * wl * wm) * amp * amp.adjoint();
                }
        }
    }
    return acc / (detail::pi * detail::pi * detail::pi);
}

inline cplx unity_matrix_element(const FamilyPtr& fam, const Measure& meas, const BasisLabel& bra,
                                 const BasisLabel& ket, const QuadratureSpec& quad = {}) {
    const int tjm = std::max(bra.two_j, ket.two_j);
    const bool half = (bra.two_j % 2) || (ket.two_j % 2) || fam->tower == Tower::HalfInteger;
    const SpaceSpec space{tjm, half ? Tower::HalfInteger : Tower::Integer};
    const BasisIndex idx(space);
    const auto M = unity_matrix_brute(fam, meas, space, quad);
    return M(Eigen::Index(idx.at(bra)), Eigen::Index(idx.at(ket)));
}

// Separated evaluation: the integrand factorizes into one z integral and two zeta integrals,
// each done with 1D quadrature (trapezoid in the phases, Gauss in the radii).
class FactorizedUnity {
public:
    FactorizedUnity(FamilyPtr fam, Measure meas, int two_j_max, QuadratureSpec quad = {})
        : fam_(std::move(fam)), meas_(std::move(meas)), tjm_(two_j_max), quad_(quad) {
        zr_ = detail::z_radial_nodes(meas_, quad_.z_radial);
        zetar_ = detail::zeta_radial_nodes(quad_.zeta_radial);
    }

    [[nodiscard]] cplx element(const BasisLabel& bra, const BasisLabel& ket) {
        const cplx iz = z_part(bra.two_j, ket.two_j);
        if (iz == cplx(0.0)) return 0.0;
        const cplx il = zeta_part(bra.two_j, (bra.two_j + bra.two_m) / 2, ket.two_j, (ket.two_j + ket.two_m) / 2);
        const cplx im = zeta_part(bra.two_j, (bra.two_j + bra.two_k) / 2, ket.two_j, (ket.two_j + ket.two_k) / 2);
        return iz * il * im / (detail::pi * detail::pi * detail::pi);
    }

    // int d^2z f(|z|^2) c_j conj(c_j') z^j conj(z)^{j'} over the double cover with weight 1/2.
    [[nodiscard]] cplx z_part(int tj, int tjp) {
        auto key = std::pair{tj, tjp};
        if (auto it = zcache_.find(key); it != zcache_.end()) return it->second;
        const int na = detail::angular_count(quad_.z_angular, tjm_);
        cplx ang = 0.0;
        for (double th : quad::periodic_nodes(na, 4.0 * detail::pi))
            ang += std::exp(cplx(0.0, 0.5 * (tj - tjp) * th));
        ang *= 0.5 * 4.0 * detail::pi / na;
        double rad = 0.0;
        if (std::abs(ang) > 1e-300) {
            for (const auto& [t, w] : zr_) {
                const double fv = meas_.f(t * t);
                if (fv != 0.0) rad += w * fv * std::pow(t, 0.5 * (tj + tjp));
            }
        }
        const cplx val = fam_->coeff(tj) * std::conj(fam_->coeff(tjp)) * ang * rad;
        zcache_.emplace(key, val);
        return val;
    }

    // int d^2zeta/(1+|zeta|^2)^2 sigma^j_q sigma^j'_q' zeta^q conj(zeta)^q' (1+|zeta|^2)^{-j-j'}.
    [[nodiscard]] cplx zeta_part(int tj, int q, int tjp, int qp) {
        auto key = std::tuple{tj, q, tjp, qp};
        if (auto it = zetacache_.find(key); it != zetacache_.end()) return it->second;
        const int na = detail::angular_count(quad_.zeta_angular, tjm_);
        cplx ang = 0.0;
        for (double ph : quad::periodic_nodes(na)) ang += std::exp(cplx(0.0, double(q - qp) * ph));
        ang *= 2.0 * detail::pi / na;
        double rad = 0.0;
        for (const auto& [rho, w] : zetar_)
            rad += w * std::pow(rho, q + qp) * std::pow(1.0 + rho * rho, -0.5 * (tj + tjp));
        const cplx val = detail::sqrt_binomial(tj, q) * detail::sqrt_binomial(tjp, qp) * ang * rad;
        zetacache_.emplace(key, val);
        return val;
    }

private:
    FamilyPtr fam_;
    Measure meas_;
    int tjm_;
    QuadratureSpec quad_;
    std::vector<std::pair<double, double>> zr_, zetar_;
    std::map<std::pair<int, int>, cplx> zcache_;
    std::map<std::tuple<int, int, int, int>, cplx> zetacache_;
};

struct UnityEntry {
    BasisLabel label;
    cplx value;
};

struct UnityReport {
    bool measure_available = true;
    std::string note;
    std::vector<UnityEntry> diagonal;
    double max_diag_defect = 0.0;
    double max_offdiag = 0.0;
    double brute_max_diff = 0.0;  // factorized vs brute at two_j_max = 2 (j_max = 1)
    [[nodiscard]] bool passed(double diag_tol = 1e-4, double off_tol = 1e-10, double cross_tol = 1e-3) const {
        return measure_available && max_diag_defect <= diag_tol && max_offdiag <= off_tol && brute_max_diff <= cross_tol;
    }
};

inline Eigen::MatrixXcd unity_matrix_factorized(const FamilyPtr& fam, const Measure& meas, const SpaceSpec& space,
                                                const QuadratureSpec& quad = {}) {
    const BasisIndex idx(space);
    FactorizedUnity fu(fam, meas, space.two_j_max, quad);
    Eigen::MatrixXcd M(Eigen::Index(idx.size()), Eigen::Index(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c)
            M(Eigen::Index(r), Eigen::Index(c)) = fu.element(idx.label(r), idx.label(c));
    return M;
}

inline UnityReport unity_suite(const FamilyPtr& fam, const std::optional<Measure>& meas, int two_j_max_check,
                               const QuadratureSpec& quad = {}, bool with_brute = true) {
    UnityReport rep;
    if (!meas) {
        rep.measure_available = false;
        rep.note = fam->name + ": no measure whose Mellin moments match (2j+1)^2/|c_j|^2";
        rep.max_diag_defect = 1.0;
        return rep;
    }
    const SpaceSpec space{two_j_max_check, fam->tower};
    const BasisIndex idx(space);
    const auto M = unity_matrix_factorized(fam, *meas, space, quad);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const cplx v = M(Eigen::Index(r), Eigen::Index(c));
            if (r == c) {
                rep.diagonal.push_back({idx.label(r), v});
                rep.max_diag_defect = std::max(rep.max_diag_defect, std::abs(v - 1.0));
            } else {
                rep.max_offdiag = std::max(rep.max_offdiag, std::abs(v));
            }
        }
    if (with_brute) {
        const SpaceSpec small{std::min(2, two_j_max_check), fam->tower};
        const auto B = unity_matrix_brute(fam, *meas, small, quad);
        const auto F = unity_matrix_factorized(fam, *meas, small, quad);
        rep.brute_max_diff = (B - F).cwiseAbs().maxCoeff();
    }
    return rep;
}

struct BetaCheckEntry {
    int two_j;
    int q;
    double numeric;
    double beta;
};

// int_0^inf rho^{2q} (1+rho^2)^{-2j-2} 2 rho d rho against B(q+1, 2j-q+1), integrated directly in rho.
inline std::vector<BetaCheckEntry> zeta_beta_check(int two_j_max) {
    std::vector<BetaCheckEntry> out;
    for (int tj = 0; tj <= two_j_max; ++tj)
        for (int q = 0; q <= tj; ++q) {
            auto g = [&](double rho) { return std::pow(rho, 2 * q) * std::pow(1 + rho * rho, -tj - 2.0) * 2 * rho; };
            const double num = quad::integrate_half_line(g, 40);
            const double beta = std::exp(std::lgamma(q + 1.0) + std::lgamma(tj - q + 1.0) - std::lgamma(tj + 2.0));
            out.push_back({tj, q, num, beta});
        }
    return out;
}

}  // namespace molcs
