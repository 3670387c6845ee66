#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nhf/domain.hpp"

namespace nhf {

/// Deterministic random stream with a platform-stable mapping to doubles
/// (raw mt19937_64 draws, no library distributions, so that seeded runs are
/// reproducible byte-for-byte everywhere).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double next_unit();
    /// Uniform in [-1, 1).
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }
    /// Standard normal via Box-Muller.
    double next_normal();

    /// Derives an independent substream (for per-start / per-row work).
    Rng fork(std::uint64_t salt) const;

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class BumpProfile { Cos2, Gauss };

BumpProfile bump_profile_from_string(const std::string& name);

/// Adds a radial bump centered at `center`: amplitude * cos^2(pi s / 2) for
/// s = |x-c|/radius < 1 (Cos2) or amplitude * exp(-s^2) (Gauss).
void add_bump(ScalarField& u, std::array<double, 3> center, double radius,
              double amplitude, BumpProfile profile);

/// Random smooth field: sine modes up to max_mode per axis with normal
/// coefficients damped by 1/|k|^2. Zero trace by construction.
ScalarField random_smooth_field(const Domain& domain, Rng& rng, int max_mode);

/// Uniform iid values in [-1, 1] (rough field, used by quadrature oracles).
ScalarField random_rough_field(const Domain& domain, Rng& rng);

/// Product of first-mode sines, the first Dirichlet eigenvector of the box.
ScalarField first_eigenvector(const Domain& domain);

} // namespace nhf
