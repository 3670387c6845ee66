#include "nhf/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace nhf {

namespace {

// The FFTW planner is not thread-safe; plan creation/destruction is global.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

SineTransform::SineTransform(const Domain& domain) : domain_(domain) {
    const int m = domain_.resolution();
    const double h = domain_.spacing();
    axis_eigs_.resize(m);
    for (int k = 1; k <= m; ++k) {
        const double s = std::sin(k * std::numbers::pi / (2.0 * (m + 1)));
        axis_eigs_[k - 1] = 4.0 / (h * h) * s * s;
    }
    buf_ = fftw_alloc_real(domain_.node_count());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_r2r_3d(m, m, m, buf_, buf_, FFTW_RODFT00, FFTW_RODFT00,
                             FFTW_RODFT00, FFTW_ESTIMATE);
}

SineTransform::~SineTransform() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    if (buf_) fftw_free(buf_);
}

std::vector<double> SineTransform::forward(const ScalarField& u) const {
    const std::size_t n = domain_.node_count();
    for (std::size_t i = 0; i < n; ++i) buf_[i] = u[i];
    fftw_execute(static_cast<fftw_plan>(plan_));
    return std::vector<double>(buf_, buf_ + n);
}

ScalarField SineTransform::solve_diagonal(const ScalarField& rhs,
                                          const std::vector<double>& mode_scale) const {
    const std::size_t n = domain_.node_count();
    for (std::size_t i = 0; i < n; ++i) buf_[i] = rhs[i];
    fftw_execute(static_cast<fftw_plan>(plan_));
    for (std::size_t i = 0; i < n; ++i) buf_[i] *= mode_scale[i];
    fftw_execute(static_cast<fftw_plan>(plan_));
    ScalarField out(domain_);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf_[i];
    return out;
}

ScalarField SineTransform::helmholtz_solve(const ScalarField& rhs, double dt) const {
    const int m = domain_.resolution();
    const double norm = 1.0 / std::pow(2.0 * (m + 1), 3);
    std::vector<double> scale(domain_.node_count());
    std::size_t i = 0;
    for (int kx = 1; kx <= m; ++kx) {
        for (int ky = 1; ky <= m; ++ky) {
            for (int kz = 1; kz <= m; ++kz, ++i) {
                scale[i] = norm / (1.0 + dt * eigenvalue(kx, ky, kz));
            }
        }
    }
    return solve_diagonal(rhs, scale);
}

ScalarField SineTransform::poisson_solve(const ScalarField& rhs) const {
    const int m = domain_.resolution();
    const double norm = 1.0 / std::pow(2.0 * (m + 1), 3);
    std::vector<double> scale(domain_.node_count());
    std::size_t i = 0;
    for (int kx = 1; kx <= m; ++kx) {
        for (int ky = 1; ky <= m; ++ky) {
            for (int kz = 1; kz <= m; ++kz, ++i) {
                scale[i] = norm / eigenvalue(kx, ky, kz);
            }
        }
    }
    return solve_diagonal(rhs, scale);
}

} // namespace nhf
