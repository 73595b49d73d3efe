#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "mcs/errors.hpp"
#include "mcs/hilbert.hpp"

namespace molcs {

struct EulerAngles {
    double alpha = 0.0;  // [0, 2pi)
    double beta = 0.0;   // [0, pi]
    double gamma = 0.0;  // [-pi, pi)

    [[nodiscard]] bool in_range() const {
        constexpr double pi = std::numbers::pi;
        return alpha >= 0 && alpha < 2 * pi && beta >= 0 && beta <= pi && gamma >= -pi && gamma < pi;
    }
};

// Rows and columns indexed by (m + j) ascending.
struct WignerBlock {
    int two_j = 0;
    Eigen::MatrixXcd entries;

    [[nodiscard]] cplx at(int two_m_row, int two_m_col) const {
        return entries((two_m_row + two_j) / 2, (two_m_col + two_j) / 2);
    }
    [[nodiscard]] double unitarity_defect() const {
        const auto n = entries.rows();
        return (entries.adjoint() * entries - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    }
};

namespace detail {
inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }
inline double factorial(int n) { return std::exp(log_factorial(n)); }
}  // namespace detail

// d^j_{m'm}(beta), row m', column m, in half-angle monomials so beta = pi needs no limit.
inline WignerBlock little_d(int two_j, double beta) {
    if (two_j < 0) throw InvalidLabel("two_j must be nonnegative");
    if (!(beta >= 0.0 && beta <= std::numbers::pi)) throw DomainError("beta must lie in [0, pi]");
    const int n = two_j + 1;
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    WignerBlock w{two_j, Eigen::MatrixXcd::Zero(n, n)};
    for (int r = 0; r < n; ++r) {
        const int jpmp = r;           // j + m'
        const int jmmp = two_j - r;   // j - m'
        for (int col = 0; col < n; ++col) {
            const int jpm = col;          // j + m
            const int jmm = two_j - col;  // j - m
            const int mdiff = r - col;    // m' - m
            const double pref = 0.5 * (detail::log_factorial(jpmp) + detail::log_factorial(jmmp) +
                                       detail::log_factorial(jpm) + detail::log_factorial(jmm));
            double sum = 0.0;
            for (int t = std::max(0, -mdiff); t <= std::min(jpm, jmmp); ++t) {
                // Denominator (j+m-t)! t! (m'-m+t)! (j-m'-t)!
                const int a = jpm - t, b = t, cc = mdiff + t, d = jmmp - t;
                if (a < 0 || cc < 0 || d < 0) continue;
                const double mag = std::exp(pref - detail::log_factorial(a) - detail::log_factorial(b) -
                                            detail::log_factorial(cc) - detail::log_factorial(d));
                const int pc = two_j + col - r - 2 * t;  // 2j + m - m' - 2t
                const int ps = r - col + 2 * t;          // m' - m + 2t
                const double sign = ((mdiff + t) % 2 == 0) ? 1.0 : -1.0;
                sum += sign * mag * std::pow(c, pc) * std::pow(s, ps);
            }
            w.entries(r, col) = sum;
        }
    }
    return w;
}

// R^j_{m m'} = exp(-i alpha m) d^j_{m m'}(beta) exp(-i gamma m').
inline WignerBlock big_R(int two_j, const EulerAngles& g) {
    WignerBlock w = little_d(two_j, g.beta);
    const int n = two_j + 1;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double m = 0.5 * (2 * r - two_j), mp = 0.5 * (2 * c - two_j);
            w.entries(r, c) *= std::exp(cplx(0.0, -(g.alpha * m + g.gamma * mp)));
        }
    return w;
}

using Mat2 = Eigen::Matrix2cd;

// 2x2 SU(2) matrix in (up, down) order whose spin-j image is big_R.
inline Mat2 su2_from_euler(const EulerAngles& g) {
    const cplx u = std::exp(cplx(0.0, -0.5 * (g.alpha + g.gamma))) * std::cos(0.5 * g.beta);
    const cplx v = std::exp(cplx(0.0, 0.5 * (g.alpha - g.gamma))) * std::sin(0.5 * g.beta);
    Mat2 U;
    U << u, -std::conj(v), v, std::conj(u);
    return U;
}

// Spin-j image of a 2x2 matrix acting on (up, down), basis ordered by ascending m.
// Polynomial in the entries, so it also works for non-unitary U.
inline Eigen::MatrixXcd su2_block(int two_j, const Mat2& U) {
    const int n = two_j + 1;
    const cplx a = U(0, 0), b = U(0, 1), c = U(1, 0), d = U(1, 1);
    auto ipow = [](cplx z, int e) {
        cplx r = 1.0;
        for (int i = 0; i < e; ++i) r *= z;
        return r;
    };
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    for (int col = 0; col < n; ++col) {
        const int p = col, q = two_j - col;  // up / down counts of the source
        for (int row = 0; row < n; ++row) {
            const int pp = row, qq = two_j - row;
            const double pref = 0.5 * (detail::log_factorial(p) + detail::log_factorial(q) +
                                       detail::log_factorial(pp) + detail::log_factorial(qq));
            cplx sum = 0.0;
            for (int s = std::max(0, pp - q); s <= std::min(p, pp); ++s) {
                const double mag = std::exp(pref - detail::log_factorial(s) - detail::log_factorial(p - s) -
                                            detail::log_factorial(pp - s) - detail::log_factorial(q - pp + s));
                sum += mag * ipow(a, s) * ipow(b, pp - s) * ipow(c, p - s) * ipow(d, q - pp + s);
            }
            D(row, col) = sum;
        }
    }
    return D;
}

struct WavefunctionValue {
    cplx value;
    bool double_valued;  // half-integer j: sign flips under 2pi shifts
};

// <alpha beta gamma | j k m> = sqrt(2j+1) e^{i m alpha} e^{i k gamma} d^j_{m k}(beta).
inline WavefunctionValue wavefunction(const BasisLabel& b, const EulerAngles& g) {
    if (!b.valid()) throw InvalidLabel("invalid label " + b.str());
    const WignerBlock d = little_d(b.two_j, g.beta);
    const cplx phase = std::exp(cplx(0.0, b.m() * g.alpha + b.k() * g.gamma));
    return {std::sqrt(double(b.two_j + 1)) * phase * d.at(b.two_m, b.two_k), b.two_j % 2 != 0};
}

}  // namespace molcs
