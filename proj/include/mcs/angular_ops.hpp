#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mcs/errors.hpp"
#include "mcs/hilbert.hpp"

namespace molcs {

enum class Frame { Lab, Mol };

// S(q,q') and V(q,q'): q shifts k (molecular index), q' shifts m (lab index).
// Indices are stored doubled: S uses +-1, V uses -2, 0, +2.
struct OperatorKind {
    enum class Tag { JL_plus, JL_minus, JL_0, JM_plus, JM_minus, JM_0, Lambda, Casimir, S, V };
    Tag tag = Tag::JL_0;
    int two_q = 0;
    int two_qp = 0;

    constexpr bool operator==(const OperatorKind&) const = default;

    static constexpr OperatorKind JL_plus() { return {Tag::JL_plus}; }
    static constexpr OperatorKind JL_minus() { return {Tag::JL_minus}; }
    static constexpr OperatorKind JL_0() { return {Tag::JL_0}; }
    static constexpr OperatorKind JM_plus() { return {Tag::JM_plus}; }
    static constexpr OperatorKind JM_minus() { return {Tag::JM_minus}; }
    static constexpr OperatorKind JM_0() { return {Tag::JM_0}; }
    static constexpr OperatorKind Lambda() { return {Tag::Lambda}; }
    static constexpr OperatorKind Casimir() { return {Tag::Casimir}; }

    static OperatorKind S(int two_q, int two_qp) {
        if ((two_q != 1 && two_q != -1) || (two_qp != 1 && two_qp != -1))
            throw InvalidLabel("bi-spinor indices must be +-1/2");
        return {Tag::S, two_q, two_qp};
    }
    // Vector indices given undoubled: q, q' in {-1, 0, 1}.
    static OperatorKind V(int q, int qp) {
        if (q < -1 || q > 1 || qp < -1 || qp > 1) throw InvalidLabel("bi-vector indices must lie in {-1,0,1}");
        return {Tag::V, 2 * q, 2 * qp};
    }

    [[nodiscard]] bool is_tensor() const { return tag == Tag::S || tag == Tag::V; }
    // Largest increase of two_j this operator can produce.
    [[nodiscard]] int two_j_raise() const { return tag == Tag::S ? 1 : tag == Tag::V ? 2 : 0; }

    [[nodiscard]] std::string name() const {
        switch (tag) {
            case Tag::JL_plus: return "JL+";
            case Tag::JL_minus: return "JL-";
            case Tag::JL_0: return "JL0";
            case Tag::JM_plus: return "JM+";
            case Tag::JM_minus: return "JM-";
            case Tag::JM_0: return "JM0";
            case Tag::Lambda: return "Lambda";
            case Tag::Casimir: return "J2";
            case Tag::S: return "S(" + std::to_string(two_q) + "/2," + std::to_string(two_qp) + "/2)";
            case Tag::V: return "V(" + std::to_string(two_q / 2) + "," + std::to_string(two_qp / 2) + ")";
        }
        return "?";
    }
};

inline std::vector<OperatorKind> all_S() {
    return {OperatorKind::S(-1, -1), OperatorKind::S(-1, 1), OperatorKind::S(1, -1), OperatorKind::S(1, 1)};
}
inline std::vector<OperatorKind> all_V() {
    std::vector<OperatorKind> v;
    for (int q = -1; q <= 1; ++q)
        for (int qp = -1; qp <= 1; ++qp) v.push_back(OperatorKind::V(q, qp));
    return v;
}

struct RotorConstants {
    double A0 = 1.0;
    double A1 = 1.0;
    double A2 = 1.0;
    [[nodiscard]] bool spherical() const { return A0 == A1 && A1 == A2; }
};

namespace detail {

inline double sqrt0(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

struct Term {
    int dj2, dk2, dm2;  // doubled shifts
    double coef;
};

// Bi-spinor S(q,q') on |j,k,m>.
inline void spinor_terms(int two_q, int two_qp, double j, double k, double m, std::vector<Term>& out) {
    const int s = two_qp > 0 ? 1 : -1;
    const double lower_den = j > 0 ? std::sqrt(2.0 * j * (2.0 * j + 1.0)) : 0.0;
    const double upper_den = std::sqrt(2.0 * (j + 1.0) * (2.0 * j + 1.0));
    double up = 0, down = 0;
    if (two_q > 0) {
        up = sqrt0((j + s * m + 1) * (j + k + 1)) / upper_den;
        if (lower_den > 0) down = s * sqrt0((j - s * m) * (j - k)) / lower_den;
    } else {
        up = sqrt0((j + s * m + 1) * (j - k + 1)) / upper_den;
        if (lower_den > 0) down = -s * sqrt0((j - s * m) * (j + k)) / lower_den;
    }
    out.push_back({1, two_q, two_qp, up});
    out.push_back({-1, two_q, two_qp, down});
}

// Bi-vector V(q,q') on |j,k,m>; q, q' undoubled.
inline void vector_terms(int q, int qp, double j, double k, double m, std::vector<Term>& out) {
    const double r2 = std::sqrt(2.0);
    const double up_den = (j + 1) * std::sqrt((2 * j + 1) * (2 * j + 3));
    const bool has_mid = j > 0;
    const bool has_low = j > 0.5;
    const double low_den = has_low ? j * std::sqrt((2 * j + 1) * (2 * j - 1)) : 1.0;
    double a = 0, b = 0, c = 0;
    if (q != 0 && qp != 0) {
        const int s = qp > 0 ? 1 : -1;
        if (q < 0) {
            a = sqrt0((j + s * m + 1) * (j + s * m + 2) * (j - k + 1) * (j - k + 2)) / (2 * up_den);
            if (has_mid) b = -s * sqrt0((j - s * m) * (j + s * m + 1) * (j - k + 1) * (j + k)) / (2 * (j + 1) * j);
            if (has_low) c = sqrt0((j - s * m - 1) * (j - s * m) * (j + k - 1) * (j + k)) / (2 * low_den);
        } else {
            a = sqrt0((j + s * m + 1) * (j + s * m + 2) * (j + k + 1) * (j + k + 2)) / (2 * up_den);
            if (has_mid) b = s * sqrt0((j + s * m + 1) * (j - s * m) * (j + k + 1) * (j - k)) / (2 * (j + 1) * j);
            if (has_low) c = sqrt0((j - s * m - 1) * (j - s * m) * (j - k - 1) * (j - k)) / (2 * low_den);
        }
    } else if (qp == 0 && q != 0) {
        const int s = q > 0 ? 1 : -1;
        a = sqrt0((j - m + 1) * (j + m + 1) * (j + s * k + 1) * (j + s * k + 2)) / (r2 * up_den);
        if (has_mid) b = -s * m * sqrt0((j - s * k) * (j + s * k + 1)) / (r2 * (j + 1) * j);
        if (has_low) c = -sqrt0((j - m) * (j + m) * (j - s * k - 1) * (j - s * k)) / (r2 * low_den);
    } else if (q == 0 && qp != 0) {
        const int s = qp > 0 ? 1 : -1;
        a = sqrt0((j + s * m + 1) * (j + s * m + 2) * (j - k + 1) * (j + k + 1)) / (r2 * up_den);
        if (has_mid) b = -s * k * sqrt0((j - s * m) * (j + s * m + 1)) / (r2 * (j + 1) * j);
        if (has_low) c = -sqrt0((j - s * m - 1) * (j - s * m) * (j - k) * (j + k)) / (r2 * low_den);
    } else {
        a = sqrt0((j - m + 1) * (j + m + 1) * (j - k + 1) * (j + k + 1)) / up_den;
        if (has_mid) b = m * k / ((j + 1) * j);
        if (has_low) c = sqrt0((j - m) * (j + m) * (j - k) * (j + k)) / low_den;
    }
    out.push_back({2, 2 * q, 2 * qp, a});
    out.push_back({0, 2 * q, 2 * qp, b});
    out.push_back({-2, 2 * q, 2 * qp, c});
}

}  // namespace detail

struct ActionTerm {
    BasisLabel target;
    double coef;
};

// Nonzero images of one basis vector; targets are valid labels but may exceed any truncation.
inline std::vector<ActionTerm> action(const OperatorKind& op, const BasisLabel& b) {
    if (!b.valid()) throw InvalidLabel("invalid label " + b.str());
    const double j = b.j(), k = b.k(), m = b.m();
    std::vector<detail::Term> terms;
    using T = OperatorKind::Tag;
    switch (op.tag) {
        case T::JL_plus: terms.push_back({0, 0, 2, detail::sqrt0((j - m) * (j + m + 1))}); break;
        case T::JL_minus: terms.push_back({0, 0, -2, detail::sqrt0((j + m) * (j - m + 1))}); break;
        case T::JL_0: terms.push_back({0, 0, 0, m}); break;
        // Molecular ladders run against k: J^M_+ lowers k.
        case T::JM_plus: terms.push_back({0, -2, 0, detail::sqrt0((j + k) * (j - k + 1))}); break;
        case T::JM_minus: terms.push_back({0, 2, 0, detail::sqrt0((j - k) * (j + k + 1))}); break;
        case T::JM_0: terms.push_back({0, 0, 0, k}); break;
        case T::Lambda: terms.push_back({0, 0, 0, j}); break;
        case T::Casimir: terms.push_back({0, 0, 0, j * (j + 1)}); break;
        case T::S: detail::spinor_terms(op.two_q, op.two_qp, j, k, m, terms); break;
        case T::V: detail::vector_terms(op.two_q / 2, op.two_qp / 2, j, k, m, terms); break;
    }
    std::vector<ActionTerm> out;
    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        BasisLabel tgt{b.two_j + t.dj2, b.two_k + t.dk2, b.two_m + t.dm2};
        if (!tgt.valid()) continue;
        out.push_back({tgt, t.coef});
    }
    return out;
}

struct ApplyResult {
    TruncatedState state;
    double dropped_weight = 0.0;  // squared norm of amplitude pushed above two_j_max
};

inline void require_tower(const OperatorKind& op, const SpaceSpec& space) {
    if (op.tag == OperatorKind::Tag::S && space.tower == Tower::Integer)
        throw TowerMismatch("bi-spinor S maps the integer tower out of itself");
}

inline ApplyResult apply_reporting(const OperatorKind& op, const TruncatedState& s) {
    require_tower(op, s.space());
    ApplyResult r{TruncatedState(s.space()), 0.0};
    std::map<BasisLabel, cplx> lost;
    for (const auto& [b, a] : s) {
        for (const auto& t : action(op, b)) {
            if (s.space().admits(t.target))
                r.state.add(t.target, a * t.coef);
            else
                lost[t.target] += a * t.coef;
        }
    }
    for (const auto& [b, a] : lost) r.dropped_weight += std::norm(a);
    return r;
}

inline TruncatedState apply(const OperatorKind& op, const TruncatedState& s) { return apply_reporting(op, s).state; }

using SparseC = Eigen::SparseMatrix<cplx>;

// Matrix of op in enumerate_basis order: column = source, row = target.
inline SparseC operator_matrix(const OperatorKind& op, const BasisIndex& idx) {
    require_tower(op, idx.space());
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t c = 0; c < idx.size(); ++c)
        for (const auto& t : action(op, idx.label(c)))
            if (idx.space().admits(t.target)) trip.emplace_back(int(idx.at(t.target)), int(c), t.coef);
    SparseC M(Eigen::Index(idx.size()), Eigen::Index(idx.size()));
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

inline Eigen::MatrixXcd dense_matrix(const OperatorKind& op, const BasisIndex& idx) {
    return Eigen::MatrixXcd(operator_matrix(op, idx));
}

// Cartesian components: axis 0 is J_0, axis 1 is (J_+ + J_-)/2, axis 2 is (J_+ - J_-)/(2i).
inline TruncatedState apply_component(Frame f, int axis, const TruncatedState& s) {
    const auto plus = f == Frame::Lab ? OperatorKind::JL_plus() : OperatorKind::JM_plus();
    const auto minus = f == Frame::Lab ? OperatorKind::JL_minus() : OperatorKind::JM_minus();
    const auto zero = f == Frame::Lab ? OperatorKind::JL_0() : OperatorKind::JM_0();
    if (axis == 0) return apply(zero, s);
    const auto p = apply(plus, s);
    const auto m = apply(minus, s);
    if (axis == 1) return 0.5 * (p + m);
    if (axis == 2) return cplx(0.0, -0.5) * (p - m);
    throw InvalidLabel("component axis must be 0, 1 or 2");
}

inline Eigen::MatrixXcd component_matrix(Frame f, int axis, const BasisIndex& idx) {
    const auto plus = dense_matrix(f == Frame::Lab ? OperatorKind::JL_plus() : OperatorKind::JM_plus(), idx);
    const auto minus = dense_matrix(f == Frame::Lab ? OperatorKind::JL_minus() : OperatorKind::JM_minus(), idx);
    if (axis == 0) return dense_matrix(f == Frame::Lab ? OperatorKind::JL_0() : OperatorKind::JM_0(), idx);
    if (axis == 1) return 0.5 * (plus + minus);
    if (axis == 2) return cplx(0.0, -0.5) * (plus - minus);
    throw InvalidLabel("component axis must be 0, 1 or 2");
}

// Adjoint partner: (T^dagger)_{q q'} = (-1)^{q - q'} T_{-q, -q'}.
inline std::pair<OperatorKind, double> adjoint_kind(const OperatorKind& op) {
    using T = OperatorKind::Tag;
    switch (op.tag) {
        case T::JL_plus: return {OperatorKind::JL_minus(), 1.0};
        case T::JL_minus: return {OperatorKind::JL_plus(), 1.0};
        case T::JM_plus: return {OperatorKind::JM_minus(), 1.0};
        case T::JM_minus: return {OperatorKind::JM_plus(), 1.0};
        case T::S:
        case T::V: {
            const int diff = (op.two_q - op.two_qp) / 2;
            return {OperatorKind{op.tag, -op.two_q, -op.two_qp}, diff % 2 == 0 ? 1.0 : -1.0};
        }
        default: return {op, 1.0};
    }
}

namespace detail {
// Largest |entry| in columns whose two_j leaves room for the given upward shift.
inline double interior_max(const Eigen::MatrixXcd& D, const BasisIndex& idx, int raise) {
    double worst = 0.0;
    for (std::size_t c = 0; c < idx.size(); ++c) {
        if (idx.label(c).two_j + raise > idx.space().two_j_max) continue;
        worst = std::max(worst, D.col(Eigen::Index(c)).cwiseAbs().maxCoeff());
    }
    return worst;
}
}  // namespace detail

// max |<a|T b> - <T^dagger a|b>| over pairs where both images stay inside the truncation.
inline double adjoint_check(const OperatorKind& op, const SpaceSpec& space) {
    const BasisIndex idx(space);
    const auto [adj, sign] = adjoint_kind(op);
    const Eigen::MatrixXcd T = dense_matrix(op, idx);
    const Eigen::MatrixXcd Td = sign * dense_matrix(adj, idx);
    const int raise = op.two_j_raise();
    double worst = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx.label(a).two_j + raise > space.two_j_max) continue;
        for (std::size_t b = 0; b < idx.size(); ++b) {
            if (idx.label(b).two_j + raise > space.two_j_max) continue;
            const cplx lhs = T(Eigen::Index(a), Eigen::Index(b));             // <a|T b>
            const cplx rhs = std::conj(Td(Eigen::Index(b), Eigen::Index(a)));  // <T^dagger a|b>
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

// Largest matrix element that violates the tensor selection rules.
inline double selection_rule_defect(const OperatorKind& op, const SpaceSpec& space) {
    const BasisIndex idx(space);
    const Eigen::MatrixXcd T = dense_matrix(op, idx);
    const int dj_allowed = op.tag == OperatorKind::Tag::S ? 1 : 2;
    double worst = 0.0;
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const auto& a = idx.label(r);
            const auto& b = idx.label(c);
            const int dj = a.two_j - b.two_j;
            bool allowed = a.two_k - b.two_k == op.two_q && a.two_m - b.two_m == op.two_qp;
            if (op.tag == OperatorKind::Tag::S)
                allowed = allowed && std::abs(dj) == 1;
            else
                allowed = allowed && std::abs(dj) <= dj_allowed && dj % 2 == 0;
            if (!allowed) worst = std::max(worst, std::abs(T(Eigen::Index(r), Eigen::Index(c))));
        }
    return worst;
}

struct RelationDefect {
    std::string relation;
    double defect;
};

struct CommutatorReport {
    std::vector<RelationDefect> entries;
    [[nodiscard]] double max_defect() const {
        double m = 0.0;
        for (const auto& e : entries) m = std::max(m, e.defect);
        return m;
    }
};

// Every algebra relation on interior states: su(2) (x) su(2), lab/molecular commutation,
// tensor covariance of S and V, and the Casimir composition.
inline CommutatorReport commutator_defect(const SpaceSpec& space) {
    const BasisIndex idx(space);
    CommutatorReport rep;
    using OK = OperatorKind;
    const auto Lp = dense_matrix(OK::JL_plus(), idx), Lm = dense_matrix(OK::JL_minus(), idx),
               L0 = dense_matrix(OK::JL_0(), idx);
    const auto Mp = dense_matrix(OK::JM_plus(), idx), Mm = dense_matrix(OK::JM_minus(), idx),
               M0 = dense_matrix(OK::JM_0(), idx);
    auto comm = [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) -> Eigen::MatrixXcd {
        return A * B - B * A;
    };
    auto record = [&](std::string name, const Eigen::MatrixXcd& D, int raise) {
        rep.entries.push_back({std::move(name), detail::interior_max(D, idx, raise)});
    };

    record("[JL+,JL-]-2JL0", comm(Lp, Lm) - 2.0 * L0, 0);
    record("[JL0,JL+]-JL+", comm(L0, Lp) - Lp, 0);
    record("[JL0,JL-]+JL-", comm(L0, Lm) + Lm, 0);
    record("[JM+,JM-]+2JM0", comm(Mp, Mm) + 2.0 * M0, 0);
    record("[JM0,JM+]+JM+", comm(M0, Mp) + Mp, 0);
    record("[JM0,JM-]-JM-", comm(M0, Mm) - Mm, 0);
    const std::vector<std::pair<std::string, const Eigen::MatrixXcd*>> lab{{"JL+", &Lp}, {"JL-", &Lm}, {"JL0", &L0}};
    const std::vector<std::pair<std::string, const Eigen::MatrixXcd*>> mol{{"JM+", &Mp}, {"JM-", &Mm}, {"JM0", &M0}};
    for (const auto& [ln, L] : lab)
        for (const auto& [mn, M] : mol) record("[" + ln + "," + mn + "]", comm(*L, *M), 0);

    const auto C = dense_matrix(OK::Casimir(), idx);
    const auto Lam = dense_matrix(OK::Lambda(), idx);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(L0.rows(), L0.cols());
    record("J2-(JL-JL+ + JL0(JL0+1))", C - (Lm * Lp + L0 * (L0 + I)), 0);
    record("J2-(JM+JM- + JM0(JM0+1))", C - (Mp * Mm + M0 * (M0 + I)), 0);
    record("J2-Lambda(Lambda+1)", C - Lam * (Lam + I), 0);

    // Covariance of a rank-r bi-tensor, r = 1/2 (S) or 1 (V); indices doubled.
    auto tensor_relations = [&](OK::Tag tag, int two_r) {
        auto make = [&](int tq, int tqp) -> OK { return OK{tag, tq, tqp}; };
        auto in_range = [&](int t) { return t >= -two_r && t <= two_r; };
        const double r = 0.5 * two_r;
        for (int tq = -two_r; tq <= two_r; tq += 2)
            for (int tqp = -two_r; tqp <= two_r; tqp += 2) {
                const OK op = make(tq, tqp);
                const auto Tm = dense_matrix(op, idx);
                const int raise = op.two_j_raise();
                const double q = 0.5 * tq, qp = 0.5 * tqp;
                const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(Tm.rows(), Tm.cols());
                auto neighbour = [&](int dq, int dqp) -> Eigen::MatrixXcd {
                    const int a = tq + dq, b = tqp + dqp;
                    return (in_range(a) && in_range(b)) ? dense_matrix(make(a, b), idx) : Z;
                };
                const std::string n = op.name();
                record("[JL0," + n + "]-q'T", comm(L0, Tm) - qp * Tm, raise);
                record("[JM0," + n + "]-qT", comm(M0, Tm) - q * Tm, raise);
                record("[JL+," + n + "]", comm(Lp, Tm) - detail::sqrt0((r - qp) * (r + qp + 1)) * neighbour(0, 2), raise);
                record("[JL-," + n + "]", comm(Lm, Tm) - detail::sqrt0((r + qp) * (r - qp + 1)) * neighbour(0, -2), raise);
                record("[JM-," + n + "]", comm(Mm, Tm) - detail::sqrt0((r - q) * (r + q + 1)) * neighbour(2, 0), raise);
                record("[JM+," + n + "]", comm(Mp, Tm) - detail::sqrt0((r + q) * (r - q + 1)) * neighbour(-2, 0), raise);
            }
    };
    if (space.tower == Tower::HalfInteger) tensor_relations(OK::Tag::S, 1);
    tensor_relations(OK::Tag::V, 2);
    return rep;
}

// k-space matrix of sum_i A_i (J^M_i)^2 for one j, ascending k.
inline Eigen::MatrixXcd rotor_k_block(const RotorConstants& c, int two_j) {
    const int n = two_j + 1;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n), Mi = Eigen::MatrixXcd::Zero(n, n),
                     Z = Eigen::MatrixXcd::Zero(n, n);
    const double j = 0.5 * two_j;
    for (int i = 0; i < n; ++i) {
        const double k = -j + i;
        Z(i, i) = k;
        if (i > 0) P(i - 1, i) = detail::sqrt0((j + k) * (j - k + 1));
        if (i + 1 < n) Mi(i + 1, i) = detail::sqrt0((j - k) * (j + k + 1));
    }
    const Eigen::MatrixXcd J1 = 0.5 * (P + Mi);
    const Eigen::MatrixXcd J2 = cplx(0.0, -0.5) * (P - Mi);
    return c.A0 * Z * Z + c.A1 * J1 * J1 + c.A2 * J2 * J2;
}

struct RotorBlock {
    int two_j;
    Eigen::MatrixXcd H;  // (2j+1)^2 square, enumerate_basis order within the block
};

inline std::vector<RotorBlock> rotor_hamiltonian(const RotorConstants& c, const SpaceSpec& space) {
    std::vector<RotorBlock> out;
    for (int tj = 0; tj <= space.two_j_max; tj += space.j_step()) {
        const int n = tj + 1;
        const Eigen::MatrixXcd Hk = rotor_k_block(c, tj);
        // Block index = k_index * n + m_index; H acts on k only.
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n * n, n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int mi = 0; mi < n; ++mi) H(a * n + mi, b * n + mi) = Hk(a, b);
        out.push_back({tj, std::move(H)});
    }
    return out;
}

inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& M) {
    os << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            const cplx v = M(r, c);
            if (v == cplx(0.0)) continue;
            os << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

}  // namespace molcs
