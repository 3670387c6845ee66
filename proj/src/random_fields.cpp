#include "nhf/random_fields.hpp"

#include <cmath>
#include <numbers>

#include "nhf/errors.hpp"

namespace nhf {

namespace {

// splitmix64; stable and good enough for test-field synthesis.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Rng Rng::fork(std::uint64_t salt) const {
    std::uint64_t s = state_ ^ (0xd1342543de82ef95ull * (salt + 1));
    return Rng(splitmix64(s));
}

BumpProfile bump_profile_from_string(const std::string& name) {
    if (name == "cos2") return BumpProfile::Cos2;
    if (name == "gauss") return BumpProfile::Gauss;
    throw InvalidArgument("unknown bump profile: " + name);
}

void add_bump(ScalarField& u, std::array<double, 3> center, double radius,
              double amplitude, BumpProfile profile) {
    if (!(radius > 0.0)) throw InvalidArgument("bump radius must be positive");
    const Domain& dom = u.domain();
    const int m = dom.resolution();
    for (int ix = 0; ix < m; ++ix) {
        const double dx = dom.coord(ix) - center[0];
        for (int iy = 0; iy < m; ++iy) {
            const double dy = dom.coord(iy) - center[1];
            for (int iz = 0; iz < m; ++iz) {
                const double dz = dom.coord(iz) - center[2];
                const double s = std::sqrt(dx * dx + dy * dy + dz * dz) / radius;
                double v = 0.0;
                switch (profile) {
                    case BumpProfile::Cos2: {
                        if (s < 1.0) {
                            const double c = std::cos(0.5 * std::numbers::pi * s);
                            v = c * c;
                        }
                        break;
                    }
                    case BumpProfile::Gauss:
                        v = std::exp(-s * s);
                        break;
                }
                u.at(ix, iy, iz) += amplitude * v;
            }
        }
    }
}

ScalarField random_smooth_field(const Domain& domain, Rng& rng, int max_mode) {
    if (max_mode < 1) throw InvalidArgument("max_mode must be >= 1");
    const int m = domain.resolution();
    const int kmax = std::min(max_mode, m);
    // Draw coefficients first so the field is independent of grid traversal.
    std::vector<double> coeff(static_cast<std::size_t>(kmax) * kmax * kmax);
    {
        std::size_t c = 0;
        for (int kx = 1; kx <= kmax; ++kx)
            for (int ky = 1; ky <= kmax; ++ky)
                for (int kz = 1; kz <= kmax; ++kz, ++c) {
                    const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
                    coeff[c] = rng.next_normal() / k2;
                }
    }
    ScalarField u(domain);
    const auto& L = domain.lengths();
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                const double x = domain.coord(ix) / L[0];
                const double y = domain.coord(iy) / L[1];
                const double z = domain.coord(iz) / L[2];
                double v = 0.0;
                std::size_t c = 0;
                for (int kx = 1; kx <= kmax; ++kx) {
                    const double sx = std::sin(kx * std::numbers::pi * x);
                    for (int ky = 1; ky <= kmax; ++ky) {
                        const double sy = std::sin(ky * std::numbers::pi * y);
                        for (int kz = 1; kz <= kmax; ++kz, ++c) {
                            v += coeff[c] * sx * sy *
                                 std::sin(kz * std::numbers::pi * z);
                        }
                    }
                }
                u.at(ix, iy, iz) = v;
            }
        }
    }
    return u;
}

ScalarField random_rough_field(const Domain& domain, Rng& rng) {
    ScalarField u(domain);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.next_symmetric();
    return u;
}

ScalarField first_eigenvector(const Domain& domain) {
    const int m = domain.resolution();
    ScalarField u(domain);
    const auto& L = domain.lengths();
    for (int ix = 0; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz)
                u.at(ix, iy, iz) =
                    std::sin(std::numbers::pi * domain.coord(ix) / L[0]) *
                    std::sin(std::numbers::pi * domain.coord(iy) / L[1]) *
                    std::sin(std::numbers::pi * domain.coord(iz) / L[2]);
    return u;
}

} // namespace nhf
