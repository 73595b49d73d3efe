#pragma once

#include <cmath>
#include <compare>
#include <complex>
#include <map>

#include "mcs/angular_ops.hpp"
#include "mcs/coherent.hpp"
#include "mcs/errors.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"

namespace molcs {

// Monomial zeta^j zeta_L^m zeta_M^k stored in the shifted encoding
// (two_j, q = j + m, r = j + k); every exponent is a nonnegative integer.
struct MonomialKey {
    int two_j = 0;
    int q = 0;
    int r = 0;
    constexpr auto operator<=>(const MonomialKey&) const = default;
    [[nodiscard]] constexpr bool physical() const { return two_j >= 0 && q >= 0 && q <= two_j && r >= 0 && r <= two_j; }
};

class MonomialFunction {
public:
    using Map = std::map<MonomialKey, cplx>;

    void add(const MonomialKey& k, cplx c) {
        if (!k.physical())
            throw InvalidLabel("monomial exponents outside 0 <= q, r <= 2j: (" + std::to_string(k.two_j) + "," +
                               std::to_string(k.q) + "," + std::to_string(k.r) + ")");
        if (c == cplx(0.0)) return;
        auto [it, ins] = terms_.emplace(k, c);
        if (!ins) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        }
    }
    [[nodiscard]] cplx coefficient(const MonomialKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? cplx(0.0) : it->second;
    }
    [[nodiscard]] const Map& terms() const { return terms_; }
    [[nodiscard]] auto begin() const { return terms_.begin(); }
    [[nodiscard]] auto end() const { return terms_.end(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    MonomialFunction& operator+=(const MonomialFunction& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    MonomialFunction& operator*=(cplx s) {
        if (s == cplx(0.0)) terms_.clear();
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend MonomialFunction operator+(MonomialFunction a, const MonomialFunction& b) { return a += b; }
    friend MonomialFunction operator-(MonomialFunction a, MonomialFunction b) { return a += (b *= -1.0); }
    friend MonomialFunction operator*(cplx s, MonomialFunction a) { return a *= s; }

    // Largest coefficient difference; used for exact-equality checks.
    [[nodiscard]] double distance(const MonomialFunction& o) const {
        double worst = 0.0;
        for (const auto& [k, c] : terms_) worst = std::max(worst, std::abs(c - o.coefficient(k)));
        for (const auto& [k, c] : o.terms_)
            if (!terms_.count(k)) worst = std::max(worst, std::abs(c));
        return worst;
    }

private:
    Map terms_;
};

// psi(Z) = <conj Z|psi> as a polynomial: coefficient c_{jkm} sigma^j_m sigma^j_k conj(c_j).
inline MonomialFunction to_zrep(const TruncatedState& s, const SequenceFamily& fam) {
    MonomialFunction f;
    for (const auto& [b, a] : s) {
        const cplx cj = fam.coeff(b.two_j);
        if (cj == cplx(0.0))
            throw InvalidLabel(fam.name + " has c_j = 0 at two_j = " + std::to_string(b.two_j) +
                               "; the state has no Z-representation");
        const int q = (b.two_j + b.two_m) / 2, r = (b.two_j + b.two_k) / 2;
        f.add({b.two_j, q, r}, a * detail::sqrt_binomial(b.two_j, q) * detail::sqrt_binomial(b.two_j, r) * std::conj(cj));
    }
    return f;
}

// Inverse of to_zrep for the same family.
inline TruncatedState from_zrep(const MonomialFunction& f, const SequenceFamily& fam, const SpaceSpec& space) {
    TruncatedState s(space);
    for (const auto& [k, c] : f) {
        const cplx cj = fam.coeff(k.two_j);
        if (cj == cplx(0.0)) throw InvalidLabel("c_j = 0 on the support of the function");
        const BasisLabel b{k.two_j, 2 * k.r - k.two_j, 2 * k.q - k.two_j};
        s.add(b, c / (detail::sqrt_binomial(k.two_j, k.q) * detail::sqrt_binomial(k.two_j, k.r) * std::conj(cj)));
    }
    return s;
}

// Root of the variable z / ((1+|zeta_L|^2)(1+|zeta_M|^2)) that multiplies zeta_L zeta_M into zeta.
inline cplx zrep_root(const CoherentParams& p) {
    return p.root / std::sqrt((1.0 + std::norm(p.zeta_L)) * (1.0 + std::norm(p.zeta_M)));
}

// zeta = zeta_L zeta_M z / ((1+|zeta_L|^2)(1+|zeta_M|^2)).
inline cplx zeta_variable(const CoherentParams& p) {
    const cplx w = zrep_root(p);
    return p.zeta_L * p.zeta_M * w * w;
}

inline cplx evaluate(const MonomialFunction& f, cplx w_root, cplx zeta_L, cplx zeta_M) {
    cplx s = 0.0;
    for (const auto& [k, c] : f)
        s += c * detail::ipow(w_root, k.two_j) * detail::ipow(zeta_L, k.q) * detail::ipow(zeta_M, k.r);
    return s;
}

inline cplx evaluate(const MonomialFunction& f, const CoherentParams& p) {
    return evaluate(f, zrep_root(p), p.zeta_L, p.zeta_M);
}

// The six first-order operators in (zeta, zeta_L, zeta_M) acting by exponent arithmetic:
// J^L_0 = zeta_L d_L, J^L_+ = zeta_L (zeta d - zeta_L d_L), J^L_- = (1/zeta_L)(zeta d + zeta_L d_L),
// J^M_0 = zeta_M d_M, J^M_+ = (1/zeta_M)(zeta d + zeta_M d_M), J^M_- = zeta_M (zeta d - zeta_M d_M).
inline MonomialFunction apply_diff(const OperatorKind& op, const MonomialFunction& g) {
    using T = OperatorKind::Tag;
    switch (op.tag) {
        case T::JL_0: case T::JL_plus: case T::JL_minus: case T::JM_0: case T::JM_plus: case T::JM_minus: break;
        default: throw InvalidLabel(op.name() + " has no differential realization");
    }
    MonomialFunction out;
    for (const auto& [k, c] : g) {
        const double j = 0.5 * k.two_j;
        const double m = k.q - j, kk = k.r - j;
        MonomialKey t = k;
        double factor = 0.0;
        switch (op.tag) {
            case T::JL_0: factor = m; break;
            case T::JL_plus: factor = j - m; t.q += 1; break;
            case T::JL_minus: factor = j + m; t.q -= 1; break;
            case T::JM_0: factor = kk; break;
            case T::JM_plus: factor = j + kk; t.r -= 1; break;
            case T::JM_minus: factor = j - kk; t.r += 1; break;
            default: break;
        }
        if (factor == 0.0) continue;
        if (!t.physical()) throw InvalidLabel("differential operator left the physical subspace");
        out.add(t, c * factor);
    }
    return out;
}

// sum_i A_i (J^M_i)^2 composed from the molecular differential operators.
inline MonomialFunction apply_rotor_diff(const RotorConstants& c, const MonomialFunction& g) {
    using OK = OperatorKind;
    const auto P = [](const MonomialFunction& f) { return apply_diff(OK::JM_plus(), f); };
    const auto M = [](const MonomialFunction& f) { return apply_diff(OK::JM_minus(), f); };
    const auto Z = [](const MonomialFunction& f) { return apply_diff(OK::JM_0(), f); };
    const auto PP = P(P(g)), MM = M(M(g)), PM = P(M(g)), MP = M(P(g));
    const MonomialFunction j1sq = 0.25 * (PP + PM + MP + MM);
    const MonomialFunction j2sq = -0.25 * (PP - PM - MP + MM);
    return c.A0 * Z(Z(g)) + c.A1 * j1sq + c.A2 * j2sq;
}

}  // namespace molcs
