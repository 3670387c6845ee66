#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nhf/domain.hpp"

namespace nhf {

/// Average of 1/|r| over the unit cube centered at the origin. Frozen from a
/// fine-subgrid quadrature oracle (closed-form corner sum agrees to all
/// shown digits); used for the singular cell of the kernel table.
inline constexpr double kCellAverageInvR = 2.3800773639795536;

/// Tabulated Newtonian kernel 1/|x| on the offset lattice of a Domain, with
/// the singular offset replaced by its exact cell average. Also holds the
/// spectrum and FFT plans of the zero-padded grid (smallest 5-smooth size
/// >= 2m per axis) that backs the fast convolution path.
///
/// The table is immutable after construction and safe to share across
/// threads; the fast path allocates its own work buffers per call.
class KernelTable {
public:
    explicit KernelTable(const Domain& domain);
    ~KernelTable();

    KernelTable(const KernelTable&) = delete;
    KernelTable& operator=(const KernelTable&) = delete;

    const Domain& domain() const { return domain_; }

    /// Kernel weight for an integer offset (each component in [-(m-1), m-1]).
    double weight(int dx, int dy, int dz) const;

    double min_weight() const;
    double max_weight() const;
    /// Largest |w(d) - w(-d)| over the offset lattice (exactly 0 by
    /// construction; recomputed on demand for self-checks).
    double max_asymmetry() const;

    /// Test hook: overwrite one off-center weight with a negative value and
    /// refresh the spectrum. Used by the self-test's negative check.
    void corrupt_for_testing();

private:
    friend ScalarField riesz_direct(const KernelTable&, const ScalarField&, double);
    friend double riesz_direct_at(const KernelTable&, const ScalarField&, double, int, int, int);
    friend ScalarField riesz_fast(const KernelTable&, const ScalarField&, double);

    void rebuild_spectrum();

    Domain domain_;
    int padded_;                      // padded grid size per axis, >= 2m
    std::vector<double> padded_weights_;  // cyclic layout on the padded grid
    std::vector<double> spectrum_;        // real part of r2c of the kernel
    void* plan_forward_ = nullptr;    // fftw r2c plan on the padded grid
    void* plan_inverse_ = nullptr;    // fftw c2r plan on the padded grid
};

/// z(u) = h^3 * sum_j w(i-j) |u_j|^p by exact summation. O(N^2); the oracle
/// for the fast path.
ScalarField riesz_direct(const KernelTable& table, const ScalarField& u, double p);

/// Single node of the direct sum, O(N).
double riesz_direct_at(const KernelTable& table, const ScalarField& u, double p,
                       int ix, int iy, int iz);

/// Same operator through zero-padded cyclic FFT convolution. Matches
/// riesz_direct to ~1e-13 relative.
ScalarField riesz_fast(const KernelTable& table, const ScalarField& u, double p);

/// Interaction pairing D(u,v) = h^3 * sum_i z(u)_i |v_i|^p, the double
/// integral of |u(y)|^p |v(x)|^p / |x-y|. Symmetric in (u,v).
double interaction(const KernelTable& table, const ScalarField& u, const ScalarField& v,
                   double p);

} // namespace nhf
