#pragma once

// Test-only oracles. Each one recomputes a quantity through a route that is
// independent of the implementation path it checks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "nhf/domain.hpp"

namespace oracles {

// Plain left-to-right summation of h^3 * u_i^2 in a caller-chosen order.
inline double naive_l2_sq(const nhf::ScalarField& u,
                          const std::vector<std::size_t>& order) {
    double s = 0.0;
    for (std::size_t i : order) s += u[i] * u[i];
    const double h = u.domain().spacing();
    return h * h * h * s;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

inline std::vector<std::size_t> shuffled_order(std::size_t n, unsigned seed) {
    auto order = identity_order(n);
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

// Naive h^3 * sum |u|^q in index order.
inline double naive_lp_pow(const nhf::ScalarField& u, double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::pow(std::abs(u[i]), q);
    const double h = u.domain().spacing();
    return h * h * h * s;
}

// Quadratic form of the 7-point Laplacian: <-lap_h u, u> h^3.
inline double stencil_energy(const nhf::ScalarField& u) {
    const nhf::ScalarField lap = nhf::laplacian(u);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += -lap[i] * u[i];
    const double h = u.domain().spacing();
    return h * h * h * s;
}

// Exact integral of 1/|y| over a cube of side d with the pole at a corner.
inline double corner_cube_integral(double d) {
    const double gamma_corner =
        3.0 * std::log((1.0 + std::sqrt(3.0)) / std::sqrt(2.0)) -
        std::numbers::pi / 4.0;
    return d * d * gamma_corner;
}

// Fine-subgrid quadrature of integral over the box [lo, hi]^3 of
// 1/|y - pole| dy. The pole must sit on subcell corners (box center with
// even s); those eight subcells use the exact corner integral, the rest the
// midpoint rule. Error decays like 1/s^2.
inline double subgrid_box_potential(const std::array<double, 3>& lo,
                                    const std::array<double, 3>& hi,
                                    const std::array<double, 3>& pole, int s) {
    const double dx = (hi[0] - lo[0]) / s;
    const double dy = (hi[1] - lo[1]) / s;
    const double dz = (hi[2] - lo[2]) / s;
    const double vol = dx * dy * dz;
    double total = 0.0;
    int singular = 0;
    for (int i = 0; i < s; ++i) {
        const double x = lo[0] + (i + 0.5) * dx - pole[0];
        for (int j = 0; j < s; ++j) {
            const double y = lo[1] + (j + 0.5) * dy - pole[1];
            for (int k = 0; k < s; ++k) {
                const double z = lo[2] + (k + 0.5) * dz - pole[2];
                if (std::abs(x) < dx && std::abs(y) < dy && std::abs(z) < dz) {
                    ++singular;  // corner-pole subcell, handled exactly below
                    continue;
                }
                total += vol / std::sqrt(x * x + y * y + z * z);
            }
        }
    }
    // The singular subcells are cubes only on isotropic grids; all uses here
    // have dx = dy = dz.
    total += singular * corner_cube_integral(dx);
    return total;
}

// Richardson-extrapolated version (removes the 1/s^2 error term).
inline double subgrid_box_potential_extrapolated(const std::array<double, 3>& lo,
                                                 const std::array<double, 3>& hi,
                                                 const std::array<double, 3>& pole,
                                                 int s) {
    const double coarse = subgrid_box_potential(lo, hi, pole, s);
    const double fine = subgrid_box_potential(lo, hi, pole, 2 * s);
    return (4.0 * fine - coarse) / 3.0;
}

// Conjugate gradients on -lap_h x = b using only stencil applications;
// independent of the sine diagonalization.
inline nhf::ScalarField cg_poisson(const nhf::ScalarField& b, double tol = 1e-12,
                                   int max_iter = 4000) {
    const nhf::Domain& dom = b.domain();
    nhf::ScalarField x(dom);
    nhf::ScalarField r = b;
    nhf::ScalarField p = r;
    double rr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) rr += r[i] * r[i];
    const double rr0 = rr;
    for (int it = 0; it < max_iter && rr > tol * tol * rr0; ++it) {
        nhf::ScalarField ap = nhf::laplacian(p);
        for (std::size_t i = 0; i < ap.size(); ++i) ap[i] = -ap[i];
        double pap = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) pap += p[i] * ap[i];
        const double alpha = rr / pap;
        double rr_new = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rr_new += r[i] * r[i];
        }
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
    }
    return x;
}

// Smallest Dirichlet eigenvalue by inverse power iteration on the stencil.
inline double inverse_power_lambda1(const nhf::Domain& dom, int iterations = 30) {
    nhf::ScalarField v(dom);
    // Deterministic nonsymmetric start with a first-mode component.
    for (int ix = 0; ix < dom.resolution(); ++ix)
        for (int iy = 0; iy < dom.resolution(); ++iy)
            for (int iz = 0; iz < dom.resolution(); ++iz)
                v.at(ix, iy, iz) = 1.0 + 0.1 * ix + 0.01 * iy - 0.003 * iz;
    double lambda = 0.0;
    for (int k = 0; k < iterations; ++k) {
        nhf::ScalarField w = cg_poisson(v, 1e-13);
        double norm = std::sqrt(nhf::l2_norm_sq(w));
        w.scale(1.0 / norm);
        const nhf::ScalarField lap = nhf::laplacian(w);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            num += -lap[i] * w[i];
            den += w[i] * w[i];
        }
        lambda = num / den;
        v = w;
    }
    return lambda;
}

// Shift a field by one node along an axis (zero fill); support must stay
// inside the grid for exact translation-equivariance checks.
inline nhf::ScalarField shift_by_one(const nhf::ScalarField& u, int axis) {
    const nhf::Domain& dom = u.domain();
    const int m = dom.resolution();
    nhf::ScalarField out(dom);
    for (int ix = 0; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz) {
                int jx = ix - (axis == 0), jy = iy - (axis == 1), jz = iz - (axis == 2);
                if (jx >= 0 && jy >= 0 && jz >= 0) {
                    out.at(ix, iy, iz) = u.at(jx, jy, jz);
                }
            }
    return out;
}

} // namespace oracles
