#pragma once

#include <cmath>
#include <compare>
#include <complex>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "mcs/errors.hpp"

namespace molcs {

using cplx = std::complex<double>;

enum class Tower { HalfInteger, Integer };

inline const char* to_string(Tower t) { return t == Tower::HalfInteger ? "half" : "integer"; }

inline Tower parse_tower(const std::string& s) {
    if (s == "half" || s == "half-integer" || s == "HalfIntegerTower") return Tower::HalfInteger;
    if (s == "integer" || s == "IntegerTower") return Tower::Integer;
    throw ParseError("unknown tower '" + s + "' (expected half|integer)");
}

// |j,k,m> with every quantum number stored doubled.
struct BasisLabel {
    int two_j = 0;
    int two_k = 0;
    int two_m = 0;

    constexpr auto operator<=>(const BasisLabel&) const = default;

    [[nodiscard]] constexpr bool valid() const {
        auto same_parity = [this](int v) { return ((v - two_j) % 2) == 0; };
        return two_j >= 0 && two_k >= -two_j && two_k <= two_j && two_m >= -two_j && two_m <= two_j &&
               same_parity(two_k) && same_parity(two_m);
    }
    [[nodiscard]] double j() const { return 0.5 * two_j; }
    [[nodiscard]] double k() const { return 0.5 * two_k; }
    [[nodiscard]] double m() const { return 0.5 * two_m; }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << '(' << two_j << ',' << two_k << ',' << two_m << ")/2";
        return os.str();
    }
};

struct SpaceSpec {
    int two_j_max = 0;
    Tower tower = Tower::HalfInteger;

    constexpr bool operator==(const SpaceSpec&) const = default;

    [[nodiscard]] constexpr bool admits_j(int two_j) const {
        return two_j >= 0 && two_j <= two_j_max && (tower == Tower::HalfInteger || two_j % 2 == 0);
    }
    [[nodiscard]] constexpr bool admits(const BasisLabel& b) const { return b.valid() && admits_j(b.two_j); }
    [[nodiscard]] constexpr int j_step() const { return tower == Tower::HalfInteger ? 1 : 2; }
};

inline std::vector<BasisLabel> enumerate_basis(const SpaceSpec& space) {
    if (space.two_j_max < 0) throw InvalidLabel("two_j_max must be nonnegative");
    std::vector<BasisLabel> out;
    for (int tj = 0; tj <= space.two_j_max; tj += space.j_step())
        for (int tk = -tj; tk <= tj; tk += 2)
            for (int tm = -tj; tm <= tj; tm += 2) out.push_back({tj, tk, tm});
    return out;
}

inline std::size_t basis_dimension(const SpaceSpec& space) {
    std::size_t n = 0;
    for (int tj = 0; tj <= space.two_j_max; tj += space.j_step()) n += std::size_t(tj + 1) * std::size_t(tj + 1);
    return n;
}

// Position of each label in enumerate_basis order.
class BasisIndex {
public:
    explicit BasisIndex(const SpaceSpec& space) : space_(space), labels_(enumerate_basis(space)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) pos_.emplace(key(labels_[i]), i);
    }
    [[nodiscard]] const SpaceSpec& space() const { return space_; }
    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const BasisLabel& label(std::size_t i) const { return labels_[i]; }
    [[nodiscard]] const std::vector<BasisLabel>& labels() const { return labels_; }
    [[nodiscard]] bool contains(const BasisLabel& b) const { return pos_.count(key(b)) != 0; }
    [[nodiscard]] std::size_t at(const BasisLabel& b) const {
        auto it = pos_.find(key(b));
        if (it == pos_.end()) throw InvalidLabel("label " + b.str() + " not in space");
        return it->second;
    }

private:
    static long long key(const BasisLabel& b) {
        return (static_cast<long long>(b.two_j) << 40) ^ (static_cast<long long>(b.two_k + (1 << 19)) << 20) ^
               static_cast<long long>(b.two_m + (1 << 19));
    }
    SpaceSpec space_;
    std::vector<BasisLabel> labels_;
    std::unordered_map<long long, std::size_t> pos_;
};

// Sparse state over the truncated tower. Zero amplitudes are never stored.
class TruncatedState {
public:
    using Map = std::map<BasisLabel, cplx>;

    explicit TruncatedState(SpaceSpec space) : space_(space) {}

    static TruncatedState basis_vector(SpaceSpec space, BasisLabel b, cplx amp = 1.0) {
        TruncatedState s(space);
        s.add(b, amp);
        return s;
    }

    static TruncatedState from_vector(const BasisIndex& idx, const Eigen::VectorXcd& v) {
        TruncatedState s(idx.space());
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (v[Eigen::Index(i)] != cplx(0.0)) s.add(idx.label(i), v[Eigen::Index(i)]);
        return s;
    }

    [[nodiscard]] const SpaceSpec& space() const { return space_; }
    [[nodiscard]] const Map& coeffs() const { return coeffs_; }
    [[nodiscard]] auto begin() const { return coeffs_.begin(); }
    [[nodiscard]] auto end() const { return coeffs_.end(); }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

    [[nodiscard]] cplx amplitude(const BasisLabel& b) const {
        auto it = coeffs_.find(b);
        return it == coeffs_.end() ? cplx(0.0) : it->second;
    }

    // Accumulates; throws if the label is outside the space.
    void add(const BasisLabel& b, cplx amp) {
        if (!space_.admits(b)) throw InvalidLabel("label " + b.str() + " not admitted by space");
        if (amp == cplx(0.0)) return;
        auto [it, inserted] = coeffs_.emplace(b, amp);
        if (!inserted) {
            it->second += amp;
            if (it->second == cplx(0.0)) coeffs_.erase(it);
        }
    }

    [[nodiscard]] double norm_squared() const {
        double s = 0.0;
        for (const auto& [b, a] : coeffs_) s += std::norm(a);
        return s;
    }

    // Same amplitudes viewed in a different (compatible) space.
    [[nodiscard]] TruncatedState embedded(SpaceSpec target) const {
        TruncatedState out(target);
        for (const auto& [b, a] : coeffs_) out.add(b, a);
        return out;
    }

    [[nodiscard]] Eigen::VectorXcd to_vector(const BasisIndex& idx) const {
        if (!(idx.space() == space_)) throw SpaceMismatch("basis index built for another space");
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(idx.size()));
        for (const auto& [b, a] : coeffs_) v[Eigen::Index(idx.at(b))] = a;
        return v;
    }

    TruncatedState& operator+=(const TruncatedState& o) {
        if (!(o.space_ == space_)) throw SpaceMismatch("state addition across spaces");
        for (const auto& [b, a] : o.coeffs_) add(b, a);
        return *this;
    }
    TruncatedState& operator-=(const TruncatedState& o) {
        if (!(o.space_ == space_)) throw SpaceMismatch("state subtraction across spaces");
        for (const auto& [b, a] : o.coeffs_) add(b, -a);
        return *this;
    }
    TruncatedState& operator*=(cplx s) {
        if (s == cplx(0.0)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [b, a] : coeffs_) a *= s;
        return *this;
    }
    friend TruncatedState operator+(TruncatedState a, const TruncatedState& b) { return a += b; }
    friend TruncatedState operator-(TruncatedState a, const TruncatedState& b) { return a -= b; }
    friend TruncatedState operator*(cplx s, TruncatedState a) { return a *= s; }
    friend TruncatedState operator*(TruncatedState a, cplx s) { return a *= s; }

private:
    SpaceSpec space_;
    Map coeffs_;
};

// Conjugate-linear in the first argument.
inline cplx inner_product(const TruncatedState& a, const TruncatedState& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch("inner product across different spaces");
    cplx s = 0.0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& big = a.size() <= b.size() ? b : a;
    for (const auto& [lbl, amp] : small) {
        cplx other = big.amplitude(lbl);
        if (other == cplx(0.0)) continue;
        s += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return s;
}

inline double norm(const TruncatedState& a) { return std::sqrt(a.norm_squared()); }

// "# space <two_j_max> <half|integer>" then "two_j two_k two_m re im" per line.
inline void write_state(std::ostream& os, const TruncatedState& s) {
    os << "# space " << s.space().two_j_max << ' ' << to_string(s.space().tower) << '\n';
    char buf[128];
    for (const auto& [b, a] : s) {
        std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g\n", b.two_j, b.two_k, b.two_m, a.real(), a.imag());
        os << buf;
    }
}

inline TruncatedState read_state(std::istream& is) {
    std::string line;
    std::vector<std::pair<BasisLabel, cplx>> rows;
    SpaceSpec space{-1, Tower::HalfInteger};
    int max_seen = 0;
    bool any_odd = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tag, tower;
            int tjm = 0;
            if (hs >> tag && tag == "space" && hs >> tjm >> tower) space = {tjm, parse_tower(tower)};
            continue;
        }
        std::istringstream ls(line);
        BasisLabel b;
        double re = 0, im = 0;
        if (!(ls >> b.two_j >> b.two_k >> b.two_m >> re >> im)) throw ParseError("malformed state line: " + line);
        if (!b.valid()) throw InvalidLabel("invalid label in state file: " + line);
        max_seen = std::max(max_seen, b.two_j);
        any_odd = any_odd || (b.two_j % 2 != 0);
        rows.push_back({b, {re, im}});
    }
    if (space.two_j_max < 0) space = {max_seen, any_odd ? Tower::HalfInteger : Tower::Integer};
    TruncatedState s(space);
    for (const auto& [b, a] : rows) s.add(b, a);
    return s;
}

}  // namespace molcs
