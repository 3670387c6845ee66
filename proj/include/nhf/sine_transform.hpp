#pragma once

#include <vector>

#include "nhf/domain.hpp"

namespace nhf {

/// 3D DST-I on the interior grid. Diagonalizes the 7-point Dirichlet
/// Laplacian on the box: mode (kx,ky,kz), 1-based, has eigenvalue
/// sum over axes of (4/h^2) sin^2(k pi / (2(m+1))).
///
/// Each instance owns its FFTW plans and work buffers; use one instance per
/// thread of control. Plan creation is serialized internally, execution is
/// lock-free.
class SineTransform {
public:
    explicit SineTransform(const Domain& domain);
    ~SineTransform();

    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

    const Domain& domain() const { return domain_; }

    /// Laplacian eigenvalue of 1-based mode indices.
    double eigenvalue(int kx, int ky, int kz) const {
        return axis_eigs_[kx - 1] + axis_eigs_[ky - 1] + axis_eigs_[kz - 1];
    }

    /// Solves (I - dt * lap_h) u = rhs exactly via diagonalization.
    ScalarField helmholtz_solve(const ScalarField& rhs, double dt) const;

    /// Solves -lap_h u = rhs exactly via diagonalization.
    ScalarField poisson_solve(const ScalarField& rhs) const;

    /// Unnormalized forward DST-I coefficients (self-inverse up to the factor
    /// [2(m+1)]^3).
    std::vector<double> forward(const ScalarField& u) const;

private:
    ScalarField solve_diagonal(const ScalarField& rhs,
                               const std::vector<double>& mode_scale) const;

    Domain domain_;
    std::vector<double> axis_eigs_;
    void* plan_ = nullptr;            // fftw_plan
    mutable double* buf_ = nullptr;   // fftw-allocated, m^3
};

} // namespace nhf
