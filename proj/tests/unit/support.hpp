#pragma once

// Seeded generators for the property tests. Each test derives its own stream from a fixed
// base seed and a per-test salt, so failures reproduce exactly.

#include <complex>
#include <cstdint>
#include <random>

#include "mcs/coherent.hpp"
#include "mcs/families.hpp"
#include "mcs/hilbert.hpp"

namespace testing_support {

using molcs::cplx;

inline constexpr std::uint64_t kBaseSeed = 0x5eed'2024'0601ULL;

class Gen {
public:
    explicit Gen(std::uint64_t salt) : rng_(kBaseSeed ^ (salt * 0x9e3779b97f4a7c15ULL)) {}

    double real(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    cplx gaussian() {
        std::normal_distribution<double> n;
        return {n(rng_), n(rng_)};
    }
    cplx disc(double rmax) { return std::polar(rmax * std::sqrt(real(0, 1)), real(-3.14159265358979, 3.14159265358979)); }

    molcs::BasisLabel label(const molcs::SpaceSpec& sp) {
        int tj = integer(0, sp.two_j_max);
        if (sp.tower == molcs::Tower::Integer && tj % 2) --tj;
        return {tj, -tj + 2 * integer(0, tj), -tj + 2 * integer(0, tj)};
    }
    molcs::TruncatedState state(const molcs::SpaceSpec& sp) {
        molcs::TruncatedState s(sp);
        for (const auto& b : molcs::enumerate_basis(sp)) s.add(b, gaussian());
        return s;
    }
    molcs::FamilyPtr family() { return molcs::builtin_family(integer(1, 8)); }
    molcs::CoherentParams params(const molcs::FamilyPtr& fam, double zeta_max = 2.0) {
        const double rmax = std::isfinite(fam->radius) ? 0.5 : 1.5;
        return molcs::CoherentParams::make(fam, disc(rmax), disc(zeta_max), disc(zeta_max));
    }
    molcs::RotationParams rotation() {
        return molcs::RotationParams::from_euler({real(0, 6.283185307179586), real(0, 3.141592653589793),
                                                  real(-3.141592653589793, 3.141592653589793)});
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace testing_support
