#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "mcs/errors.hpp"
#include "mcs/hilbert.hpp"
#include "mcs/quadrature.hpp"

namespace molcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SequenceFamily {
    std::string name;
    int id = 0;  // 1..8 for the built-in families, 0 otherwise
    Tower tower = Tower::HalfInteger;
    std::function<cplx(int two_j)> c;
    double radius = kInf;  // sup of admissible |z|
    int max_two_j = -1;    // last nonzero coefficient for finitely supported sequences, -1 if unbounded
    std::function<double(double x)> closed_N;  // x = |z|^2; empty when unknown
    std::function<double(double x)> closed_f;  // radial measure in x = |z|^2; empty when unknown
    double f_support = kInf;                    // f vanishes for x beyond this

    [[nodiscard]] cplx coeff(int two_j) const {
        if (two_j < 0) return 0.0;
        if (tower == Tower::Integer && two_j % 2 != 0) return 0.0;
        if (max_two_j >= 0 && two_j > max_two_j) return 0.0;
        return c(two_j);
    }
    [[nodiscard]] double coeff_abs2(int two_j) const { return std::norm(coeff(two_j)); }
    [[nodiscard]] int j_step() const { return tower == Tower::HalfInteger ? 1 : 2; }
    [[nodiscard]] bool admits_abs_z(double r) const { return r < radius; }
};

using FamilyPtr = std::shared_ptr<const SequenceFamily>;

inline void validate_family(const SequenceFamily& f) {
    if (!f.c) throw InvalidLabel("family '" + f.name + "' has no coefficient function");
    if (f.coeff(0) == cplx(0.0)) throw InvalidLabel("family '" + f.name + "' violates c_0 != 0");
    if (!(f.radius > 0)) throw InvalidLabel("family '" + f.name + "' needs a positive radius");
}

namespace detail {
inline double inv_sqrt_factorial(int n) { return std::exp(-0.5 * std::lgamma(n + 1.0)); }
}  // namespace detail

inline FamilyPtr builtin_family(int id) {
    auto f = std::make_shared<SequenceFamily>();
    f->id = id;
    f->name = "family " + std::to_string(id);
    using detail::inv_sqrt_factorial;
    auto heaviside = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    switch (id) {
        case 1:
            f->c = [](int n) { return cplx(inv_sqrt_factorial(n)); };
            f->closed_N = [](double x) { return std::exp(std::sqrt(x)); };
            f->closed_f = [](double x) { const double y = std::sqrt(x); return 0.5 * (y - 1.0) * std::exp(-y); };
            break;
        case 2:
            f->c = [](int n) { return cplx(std::sqrt((n + 1) / 2.0) * inv_sqrt_factorial(n)); };
            f->closed_N = [](double x) { const double y = std::sqrt(x); return 0.5 * (1.0 + y) * std::exp(y); };
            f->closed_f = [](double x) { return std::exp(-std::sqrt(x)); };
            break;
        case 3:
            f->c = [](int n) { return cplx((n + 1) * std::sqrt(0.5 * n + 1.0)); };
            f->radius = 1.0;
            f->closed_N = [](double x) {
                const double y = std::sqrt(x);
                return (3 * y + 2) / (2 * std::pow(1 - y, 4));
            };
            f->closed_f = heaviside;
            f->f_support = 1.0;
            break;
        case 4:
            f->c = [](int n) { return cplx(std::pow(n + 1.0, 1.5)); };
            f->radius = 1.0;
            f->closed_N = [](double x) {
                const double y = std::sqrt(x);
                return (y * y + 4 * y + 1) / std::pow(1 - y, 4);
            };
            f->closed_f = [heaviside](double x) { return heaviside(x) / (2 * std::sqrt(x)); };
            f->f_support = 1.0;
            break;
        case 5:
            f->tower = Tower::Integer;
            f->c = [](int n) { return cplx(inv_sqrt_factorial(n / 2)); };
            f->closed_N = [](double x) { return std::exp(x); };
            f->closed_f = [](double x) { return (4 * x * x - 8 * x + 1) * std::exp(-x); };
            break;
        case 6:
            f->tower = Tower::Integer;
            f->c = [](int n) { return cplx((n + 1) * inv_sqrt_factorial(n / 2)); };
            f->closed_N = [](double x) { return (4 * x * x + 8 * x + 1) * std::exp(x); };
            f->closed_f = [](double x) { return std::exp(-x); };
            break;
        case 7:
            f->tower = Tower::Integer;
            f->c = [](int n) { return cplx((n + 1) * std::sqrt(0.5 * n + 1.0)); };
            f->radius = 1.0;
            f->closed_N = [](double x) { return (9 * x * x + 14 * x + 1) / std::pow(1 - x, 4); };
            f->closed_f = heaviside;
            f->f_support = 1.0;
            break;
        case 8:
            f->tower = Tower::Integer;
            f->c = [](int n) { return cplx(std::pow(n + 1.0, 1.5)); };
            f->radius = 1.0;
            f->closed_N = [](double x) { return (1 + x) * (x * x + 22 * x + 1) / std::pow(1 - x, 4); };
            f->closed_f = [heaviside](double x) { return heaviside(x) / (2 * std::sqrt(x)); };
            f->f_support = 1.0;
            break;
        default: throw InvalidLabel("built-in family id must be 1..8, got " + std::to_string(id));
    }
    return f;
}

// c_j = delta_{j,l}. Deliberately breaks c_0 != 0; used only to probe the monomial minimizer.
inline FamilyPtr monomial_family(int two_l) {
    auto f = std::make_shared<SequenceFamily>();
    f->name = "monomial 2l=" + std::to_string(two_l);
    f->tower = two_l % 2 == 0 ? Tower::Integer : Tower::HalfInteger;
    f->c = [two_l](int n) { return n == two_l ? cplx(1.0) : cplx(0.0); };
    f->max_two_j = two_l;
    return f;
}

// Same moduli with c_j multiplied by exp(i phase(two_j)); closed forms carry over.
inline FamilyPtr phase_shifted(const FamilyPtr& base, std::function<double(int)> phase, std::string name = {}) {
    auto f = std::make_shared<SequenceFamily>(*base);
    f->id = 0;
    f->name = name.empty() ? base->name + " (phase shifted)" : std::move(name);
    f->c = [base, phase](int n) { return base->c(n) * std::exp(cplx(0.0, phase(n))); };
    return f;
}

// Header "<half|integer> <radius|inf>" then rows "two_j re im"; '#' starts a comment.
inline FamilyPtr parse_family_config(std::istream& is, std::string name = "custom") {
    std::string line;
    bool have_header = false;
    Tower tower = Tower::HalfInteger;
    double radius = kInf;
    std::map<int, cplx> rows;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (!have_header) {
            tower = parse_tower(first);
            std::string r;
            if (!(ls >> r)) throw ParseError("family header needs '<tower> <radius>'");
            radius = (r == "inf" || r == "infinity") ? kInf : std::stod(r);
            have_header = true;
            continue;
        }
        int two_j = 0;
        double re = 0, im = 0;
        try {
            two_j = std::stoi(first);
        } catch (const std::exception&) {
            throw ParseError("bad coefficient row: " + line);
        }
        if (!(ls >> re >> im)) throw ParseError("bad coefficient row: " + line);
        if (two_j < 0) throw ParseError("negative two_j in family config");
        if (tower == Tower::Integer && two_j % 2 != 0) throw ParseError("integer tower family has odd two_j row");
        rows[two_j] = {re, im};
    }
    if (!have_header) throw ParseError("empty family config");
    auto f = std::make_shared<SequenceFamily>();
    f->name = std::move(name);
    f->tower = tower;
    f->radius = radius;
    f->max_two_j = rows.empty() ? 0 : rows.rbegin()->first;
    f->c = [rows](int n) {
        auto it = rows.find(n);
        return it == rows.end() ? cplx(0.0) : it->second;
    };
    validate_family(*f);
    return f;
}

struct SeriesResult {
    double value = 0.0;
    double tail_bound = 0.0;  // bound on the omitted terms
    int last_two_j = 0;       // last term included
};

struct SeriesOptions {
    double rel_tol = 1e-17;
    int max_two_j = 200000;
    int start_two_j = 0;
};

namespace detail {

inline void check_domain(const SequenceFamily& f, double x) {
    if (!(x >= 0.0)) throw DomainError("|z|^2 must be nonnegative");
    if (std::isfinite(f.radius) && !(x < f.radius * f.radius))
        throw DomainError(f.name + ": |z| = " + std::to_string(std::sqrt(x)) + " outside convergence radius " +
                          std::to_string(f.radius));
}

// Sum of weight(j) |c_j|^2 x^j with a ratio-test tail bound over the last five nonzero terms.
template <class Weight>
SeriesResult weighted_series(const SequenceFamily& f, double x, Weight&& weight, const SeriesOptions& opt) {
    check_domain(f, x);
    SeriesResult r;
    const int step = f.j_step();
    int first = opt.start_two_j;
    if (first % step != 0) first += step - first % step;
    if (x == 0.0) {
        if (first == 0) r.value = weight(0.0) * f.coeff_abs2(0);
        return r;
    }
    std::deque<double> ratios;
    double prev = 0.0;
    const int hard_end = f.max_two_j >= 0 ? std::min(f.max_two_j, opt.max_two_j) : opt.max_two_j;
    for (int n = first; n <= hard_end; n += step) {
        const double c2 = f.coeff_abs2(n);
        if (c2 == 0.0) continue;
        const double j = 0.5 * n;
        const double term = weight(j) * c2 * std::pow(x, j);
        r.last_two_j = n;
        if (term == 0.0 && weight(j) != 0.0) return r;  // underflow: everything beyond is negligible
        r.value += term;
        if (term == 0.0) continue;
        const double a = std::abs(term);
        if (prev > 0.0) {
            ratios.push_back(a / prev);
            if (ratios.size() > 5) ratios.pop_front();
        }
        prev = a;
        if (ratios.size() == 5) {
            const double rho = *std::max_element(ratios.begin(), ratios.end());
            if (rho < 1.0) {
                const double tail = a * rho / (1.0 - rho);
                if (tail <= opt.rel_tol * std::abs(r.value)) {
                    r.tail_bound = tail;
                    return r;
                }
            }
        }
    }
    if (f.max_two_j >= 0 && f.max_two_j <= opt.max_two_j) return r;  // finite sum, exact
    throw NonConvergence(f.name + ": series did not converge at x = " + std::to_string(x) +
                         " (ratio test never fell below 1)");
}

}  // namespace detail

inline SeriesResult norm_series(const SequenceFamily& f, double x, double rel_tol = 1e-17) {
    return detail::weighted_series(f, x, [](double) { return 1.0; }, {rel_tol});
}

// Smallest tower cutoff whose omitted norm weight is below rel_tol of N.
inline int truncation_two_j(const SequenceFamily& f, double x, double rel_tol = 1e-17) {
    const auto r = norm_series(f, x, rel_tol);
    return std::max(r.last_two_j, 0);
}

// Norm weight omitted above two_j_max.
inline double tail_weight(const SequenceFamily& f, double x, int two_j_max) {
    if (f.max_two_j >= 0 && two_j_max >= f.max_two_j) return 0.0;
    SeriesOptions opt;
    opt.start_two_j = two_j_max + 1;
    opt.rel_tol = 1e-6;
    if (x == 0.0) return 0.0;
    return detail::weighted_series(f, x, [](double) { return 1.0; }, opt).value;
}

struct NormDerivatives {
    double N = 0.0;
    double xN1 = 0.0;   // x N'(x)
    double x2N2 = 0.0;  // x^2 N''(x)
    double N1 = 0.0;    // N'(x); infinite at x = 0 when c_{1/2} != 0
    double N2 = 0.0;    // N''(x)
};

inline NormDerivatives norm_derivatives(const SequenceFamily& f, double x, double rel_tol = 1e-17) {
    NormDerivatives d;
    d.N = norm_series(f, x, rel_tol).value;
    if (x == 0.0) {
        // Leading behaviour of the term-differentiated series at the origin.
        const bool half = f.coeff_abs2(1) != 0.0;
        const bool three_half = f.coeff_abs2(3) != 0.0;
        d.N1 = half ? kInf : f.coeff_abs2(2);
        d.N2 = half ? -kInf : three_half ? kInf : 2.0 * f.coeff_abs2(4);
        return d;
    }
    d.xN1 = detail::weighted_series(f, x, [](double j) { return j; }, {rel_tol}).value;
    d.x2N2 = detail::weighted_series(f, x, [](double j) { return j * (j - 1.0); }, {rel_tol}).value;
    d.N1 = d.xN1 / x;
    d.N2 = d.x2N2 / (x * x);
    return d;
}

// sum_j |c_j|^2 w^{2j}: N continued to the complex argument w^2, half powers taken from w.
inline cplx norm_series_complex(const SequenceFamily& f, cplx w, double rel_tol = 1e-17) {
    const double r2 = std::norm(w);
    detail::check_domain(f, r2);
    cplx sum = f.coeff_abs2(0);
    if (w == cplx(0.0)) return sum;
    std::deque<double> ratios;
    double prev = 0.0;
    cplx wp = 1.0;
    const int end = f.max_two_j >= 0 ? f.max_two_j : 200000;
    int last_nonzero_n = 0;
    for (int n = 1; n <= end; ++n) {
        wp *= w;
        const double c2 = f.coeff_abs2(n);
        if (c2 == 0.0) continue;
        const cplx term = c2 * wp;
        sum += term;
        const double a = std::abs(term);
        if (a == 0.0) return sum;
        if (prev > 0.0) {
            // normalise ratios per half-step so gaps in the tower do not distort the estimate
            ratios.push_back(std::pow(a / prev, 1.0 / (n - last_nonzero_n)));
            if (ratios.size() > 5) ratios.pop_front();
        }
        prev = a;
        last_nonzero_n = n;
        if (ratios.size() == 5) {
            const double rho = *std::max_element(ratios.begin(), ratios.end());
            if (rho < 1.0 && a * rho / (1.0 - rho) <= rel_tol * std::abs(sum)) return sum;
        }
    }
    if (f.max_two_j >= 0) return sum;
    throw NonConvergence(f.name + ": complex norm series did not converge");
}

struct Measure {
    std::function<double(double x)> f;
    double support = kInf;                      // in x
    std::function<double(int two_j)> moment_target;
};

inline Measure measure_for(const FamilyPtr& fam) {
    if (!fam->closed_f) throw InvalidLabel(fam->name + " has no closed-form measure");
    Measure m;
    m.f = fam->closed_f;
    m.support = fam->f_support;
    m.moment_target = [fam](int two_j) {
        const double c2 = fam->coeff_abs2(two_j);
        return c2 == 0.0 ? kInf : double(two_j + 1) * double(two_j + 1) / c2;
    };
    return m;
}

// int_0^inf f(x) x^j dx, integrated in t = sqrt(x) so x^{-1/2} weights stay bounded.
inline double mellin_moment(const Measure& meas, int two_j) {
    const double j = 0.5 * two_j;
    auto g = [&](double t) { return meas.f(t * t) * std::pow(t, 2.0 * j) * 2.0 * t; };
    if (std::isfinite(meas.support)) return quad::integrate_panels(g, 0.0, std::sqrt(meas.support), 8, 40);
    return quad::integrate_half_line(g, 40);
}

struct MellinEntry {
    int two_j;
    double integral;
    double target;
    double rel_defect;
};

struct MellinReport {
    std::vector<MellinEntry> entries;
    [[nodiscard]] double max_rel_defect() const {
        double m = 0.0;
        for (const auto& e : entries) m = std::max(m, e.rel_defect);
        return m;
    }
};

inline MellinReport mellin_moment_check(const Measure& meas, const std::vector<int>& two_j_list) {
    MellinReport rep;
    for (int tj : two_j_list) {
        const double target = meas.moment_target(tj);
        const double val = mellin_moment(meas, tj);
        const double rel = std::isfinite(target) ? std::abs(val - target) / std::abs(target) : kInf;
        rep.entries.push_back({tj, val, target, rel});
    }
    return rep;
}

// Tower-representable two_j values up to two_j_max.
inline std::vector<int> tower_two_js(Tower t, int two_j_max) {
    std::vector<int> v;
    for (int n = 0; n <= two_j_max; n += (t == Tower::HalfInteger ? 1 : 2)) v.push_back(n);
    return v;
}

}  // namespace molcs
