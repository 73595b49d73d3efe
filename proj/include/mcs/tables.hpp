#pragma once

// Closed-form table entries transcribed verbatim as functions of y = |z|,
// including entries that disagree with their own series definitions.
// Known mismatches are listed in `discrepancies()`; the series oracle is authoritative.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mcs/errors.hpp"
#include "mcs/hilbert.hpp"

namespace molcs::table_forms {

inline double norm(int id, double y) {
    const double y2 = y * y;
    switch (id) {
        case 1: return std::exp(y);
        case 2: return 0.5 * (1 + y) * std::exp(y);
        case 3: return (3 * y + 2) / (2 * std::pow(1 - y, 4));
        case 4: return (y2 + 4 * y + 1) / std::pow(1 - y, 4);
        case 5: return std::exp(y2);
        case 6: return (4 * y2 * y2 + 8 * y2 + 1) * std::exp(y2);
        case 7: return (9 * y2 * y2 + 14 * y2 + 1) / std::pow(1 - y2, 4);
        case 8: return (1 + y2) * (y2 * y2 + 22 * y2 + 1) / std::pow(1 - y2, 4);
        default: throw InvalidLabel("table family id must be 1..8");
    }
}

inline double j0(int id, double y) {
    const double y2 = y * y, y4 = y2 * y2, y6 = y4 * y2;
    switch (id) {
        case 1: return -0.5 * y;
        case 2: return -0.5 * y * (y + 2) / (y + 1);
        case 3: return -0.5 * y * (9 * y + 11) / ((1 - y) * (3 * y + 2));
        case 4: return -y * (y2 + 7 * y + 4) / ((1 - y) * (y2 + 4 * y + 1));
        case 5: return -y2;
        case 6: return -y2 * (4 * y4 + 16 * y2 + 9) / (4 * y4 + 8 * y2 + 1);
        case 7: return -y2 * 6 * (3 * y4 + 10 * y2 + 3) / ((1 - y2) * (9 * y4 + 14 * y2 + 1));
        case 8: return -y2 * (y6 + 49 * y4 + 115 * y2 + 27) / ((1 - y4) * (y4 + 22 * y2 + 1));
        default: throw InvalidLabel("table family id must be 1..8");
    }
}

inline double jsq(int id, double y) {
    const double y2 = y * y, y4 = y2 * y2, y6 = y4 * y2;
    switch (id) {
        case 1: return 0.25 * y * (3 + y);
        case 2: return 0.25 * y * (y2 + 6 * y + 6) / (y + 1);
        case 3: return 0.25 * y * (9 * y2 + 58 * y + 33) / (std::pow(1 - y, 2) * (3 * y + 2));
        case 4: return y * 6 * (y2 + 3 * y + 1) / (std::pow(1 - y, 2) * (y2 + 4 * y + 1));
        case 5: return y2 * (y2 + 2);
        case 6: return y2 * (y2 + 2) * (4 * y4 + 24 * y + 9) / (4 * y4 + 8 * y2 + 1);
        case 7:
            return y2 * 6 * (3 * y6 + 32 * y4 + 39 * y2 + 6) / (std::pow(1 - y2, 2) * (9 * y4 + 14 * y2 + 1));
        case 8: return y2 * 6 * (9 * y4 + 62 * y2 + 9) / (std::pow(1 - y2, 2) * (y4 + 22 * y2 + 1));
        default: throw InvalidLabel("table family id must be 1..8");
    }
}

// Bi-spinor diagonal entry for family 4, with zbar^{1/2} read as conj(root).
inline cplx s_minus_family4(cplx root) {
    const double y = std::norm(root);  // |z|
    return 2.0 * std::conj(root) * (1 + 2 * y) / (y * y + 4 * y + 1);
}

inline cplx v_minus(int id, cplx z) {
    const double y = std::abs(z), y2 = y * y, y4 = y2 * y2, y6 = y4 * y2, y8 = y4 * y4;
    if (id == 4) return std::conj(z) * (-y2 + 4 * y + 3) / (y2 + 4 * y + 1);
    if (id == 8)
        return std::conj(z) * (-y8 + 8 * y6 + 110 * y4 + 240 * y2 + 27) / ((1 - y4) * (y4 + 22 * y2 + 1));
    throw InvalidLabel("bi-vector table only covers families 4 and 8");
}

inline double v00(int id, double y) {
    const double y2 = y * y, y4 = y2 * y2, y6 = y4 * y2, y8 = y4 * y4;
    if (id == 4)
        return (y2 * (-2 * y2 * y + y2 - 6 * y + 1) - 2 * (std::log(1 - y) - y)) / (y2 * std::pow(1 - y, 4));
    if (id == 8)
        return (-19 * y8 + 5 * y6 - 41 * y4 + 7 * y2 - std::pow(1 - y2, 4) * std::log(1 - y2)) /
               (y2 * (1 + y2) * (y4 + 22 * y2 + 1));
    throw InvalidLabel("bi-vector table only covers families 4 and 8");
}

struct Discrepancy {
    int family;
    std::string quantity;  // "N", "J0", "J2", "V--", "V00"
    std::string note;
};

// Entries whose transcription disagrees with the series built from c_j.
inline const std::vector<Discrepancy>& discrepancies() {
    static const std::vector<Discrepancy> d{
        {3, "N", "sum (2j+1)^2 (j+1) |z|^{2j} = (1+2|z|)/(1-|z|)^4, not (3|z|+2)/(2(1-|z|)^4)"},
        {3, "J0", "consistent with the mistranscribed N; oracle is -3|z|(1+|z|)/((1-|z|)(1+2|z|))"},
        {3, "J2", "consistent with the mistranscribed N; oracle is (3y^3+18y^2+9y)/(4y^3-6y^2+2), y=|z|"},
        {6, "J2", "factor 4|z|^4+24|z|+9 should read 4|z|^4+24|z|^2+9"},
        {4, "V00", "matches neither <z|V00|z> nor <V00>_z"},
        {8, "V--", "matches neither <z|V--|z> nor <V-->_z"},
        {8, "V00", "matches neither <z|V00|z> nor <V00>_z"},
    };
    return d;
}

inline std::optional<Discrepancy> find_discrepancy(int family, const std::string& quantity) {
    for (const auto& d : discrepancies())
        if (d.family == family && d.quantity == quantity) return d;
    return std::nullopt;
}

}  // namespace molcs::table_forms
