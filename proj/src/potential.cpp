#include "nhf/potential.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "nhf/errors.hpp"
#include "nhf/summation.hpp"

namespace nhf {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// |u|^p with shortcuts for the common exponents (hot path of every step).
inline double abs_pow(double v, double p) {
    if (p == 2.0) return v * v;
    if (p == 2.5) {
        const double a = std::abs(v);
        return v * v * std::sqrt(a);
    }
    return std::pow(std::abs(v), p);
}

// Smallest 5-smooth integer >= 2m. Exact-2m padding would be enough to kill
// cyclic wrap-around, but leaves FFTW with large prime factors (2m = 62 for
// the m = 31 baseline); rounding up keeps the transforms fast and changes
// nothing in the represented offsets.
int padded_size(int m) {
    for (int n = 2 * m;; ++n) {
        int k = n;
        for (int f : {2, 3, 5}) {
            while (k % f == 0) k /= f;
        }
        if (k == 1) return n;
    }
}

} // namespace

KernelTable::KernelTable(const Domain& domain) : domain_(domain) {
    const int m = domain_.resolution();
    const double h = domain_.spacing();
    padded_ = padded_size(m);
    const std::size_t np = static_cast<std::size_t>(padded_) * padded_ * padded_;
    padded_weights_.assign(np, 0.0);

    // Cyclic layout on the padded grid of size P >= 2m: slot s along an
    // axis has offset magnitude min(s, P - s). Offsets reachable by interior
    // node pairs stay within |d| <= m-1, so there is no wrap-around
    // aliasing; the middle slots are never touched by valid pairs.
    for (int sx = 0; sx < padded_; ++sx) {
        const int dx = std::min(sx, padded_ - sx);
        for (int sy = 0; sy < padded_; ++sy) {
            const int dy = std::min(sy, padded_ - sy);
            for (int sz = 0; sz < padded_; ++sz) {
                const int dz = std::min(sz, padded_ - sz);
                const std::size_t s =
                    (static_cast<std::size_t>(sx) * padded_ + sy) * padded_ + sz;
                if (dx == 0 && dy == 0 && dz == 0) {
                    padded_weights_[s] = kCellAverageInvR / h;
                } else {
                    const double r = std::sqrt(double(dx) * dx + double(dy) * dy +
                                               double(dz) * dz);
                    padded_weights_[s] = 1.0 / (h * r);
                }
            }
        }
    }

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        double* rbuf = fftw_alloc_real(np);
        fftw_complex* cbuf = fftw_alloc_complex(
            static_cast<std::size_t>(padded_) * padded_ * (padded_ / 2 + 1));
        plan_forward_ = fftw_plan_dft_r2c_3d(padded_, padded_, padded_, rbuf, cbuf,
                                             FFTW_ESTIMATE);
        plan_inverse_ = fftw_plan_dft_c2r_3d(padded_, padded_, padded_, cbuf, rbuf,
                                             FFTW_ESTIMATE);
        fftw_free(cbuf);
        fftw_free(rbuf);
    }
    rebuild_spectrum();
}

KernelTable::~KernelTable() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

void KernelTable::rebuild_spectrum() {
    const std::size_t np = padded_weights_.size();
    const std::size_t nc =
        static_cast<std::size_t>(padded_) * padded_ * (padded_ / 2 + 1);
    double* rbuf = fftw_alloc_real(np);
    fftw_complex* cbuf = fftw_alloc_complex(nc);
    for (std::size_t i = 0; i < np; ++i) rbuf[i] = padded_weights_[i];
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), rbuf, cbuf);
    // The kernel is even under cyclic negation, so its DFT is real; keeping
    // only the real part makes the convolution exactly symmetric.
    spectrum_.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) spectrum_[i] = cbuf[i][0];
    fftw_free(cbuf);
    fftw_free(rbuf);
}

double KernelTable::weight(int dx, int dy, int dz) const {
    const int m = domain_.resolution();
    if (std::abs(dx) >= m || std::abs(dy) >= m || std::abs(dz) >= m) {
        throw InvalidArgument("kernel offset out of range");
    }
    const int sx = dx >= 0 ? dx : dx + padded_;
    const int sy = dy >= 0 ? dy : dy + padded_;
    const int sz = dz >= 0 ? dz : dz + padded_;
    return padded_weights_[(static_cast<std::size_t>(sx) * padded_ + sy) * padded_ + sz];
}

double KernelTable::min_weight() const {
    const int m = domain_.resolution();
    double w = weight(0, 0, 0);
    for (int dx = -(m - 1); dx < m; ++dx)
        for (int dy = -(m - 1); dy < m; ++dy)
            for (int dz = -(m - 1); dz < m; ++dz) w = std::min(w, weight(dx, dy, dz));
    return w;
}

double KernelTable::max_weight() const {
    const int m = domain_.resolution();
    double w = 0.0;
    for (int dx = -(m - 1); dx < m; ++dx)
        for (int dy = -(m - 1); dy < m; ++dy)
            for (int dz = -(m - 1); dz < m; ++dz) w = std::max(w, weight(dx, dy, dz));
    return w;
}

double KernelTable::max_asymmetry() const {
    const int m = domain_.resolution();
    double a = 0.0;
    for (int dx = -(m - 1); dx < m; ++dx)
        for (int dy = -(m - 1); dy < m; ++dy)
            for (int dz = -(m - 1); dz < m; ++dz)
                a = std::max(a, std::abs(weight(dx, dy, dz) - weight(-dx, -dy, -dz)));
    return a;
}

void KernelTable::corrupt_for_testing() {
    const int m = domain_.resolution();
    const int s = std::min(1, m - 1);
    const std::size_t idx = (static_cast<std::size_t>(s) * padded_ + 0) * padded_ + 0;
    padded_weights_[idx] = -padded_weights_[idx];
    rebuild_spectrum();
}

ScalarField riesz_direct(const KernelTable& table, const ScalarField& u, double p) {
    if (!(p > 1.0)) throw InvalidArgument("riesz potential requires p > 1");
    if (!(table.domain() == u.domain()))
        throw DomainMismatch("riesz_direct: field does not match the kernel grid");
    const Domain& dom = u.domain();
    const int m = dom.resolution();
    const double h = dom.spacing();
    const double h3 = h * h * h;

    std::vector<double> gp(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) gp[i] = abs_pow(u[i], p);

    // Offset-indexed lookup flattened over (2m-1)^3 signed offsets.
    const int span = 2 * m - 1;
    std::vector<double> woff(static_cast<std::size_t>(span) * span * span);
    for (int dx = -(m - 1); dx < m; ++dx)
        for (int dy = -(m - 1); dy < m; ++dy)
            for (int dz = -(m - 1); dz < m; ++dz)
                woff[(static_cast<std::size_t>(dx + m - 1) * span + (dy + m - 1)) * span +
                     (dz + m - 1)] = table.weight(dx, dy, dz);

    ScalarField out(dom);
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                CompensatedSum acc;
                for (int jx = 0; jx < m; ++jx) {
                    const std::size_t ox =
                        static_cast<std::size_t>(ix - jx + m - 1) * span;
                    for (int jy = 0; jy < m; ++jy) {
                        const std::size_t oxy = (ox + (iy - jy + m - 1)) * span;
                        const double* wrow = woff.data() + oxy + (iz + m - 1);
                        const double* grow = gp.data() + dom.index(jx, jy, 0);
                        for (int jz = 0; jz < m; ++jz) {
                            acc.add(wrow[-jz] * grow[jz]);
                        }
                    }
                }
                out[dom.index(ix, iy, iz)] = h3 * acc.value();
            }
        }
    }
    return out;
}

double riesz_direct_at(const KernelTable& table, const ScalarField& u, double p,
                       int ix, int iy, int iz) {
    if (!(p > 1.0)) throw InvalidArgument("riesz potential requires p > 1");
    const Domain& dom = u.domain();
    const int m = dom.resolution();
    const double h = dom.spacing();
    CompensatedSum acc;
    for (int jx = 0; jx < m; ++jx)
        for (int jy = 0; jy < m; ++jy)
            for (int jz = 0; jz < m; ++jz)
                acc.add(table.weight(ix - jx, iy - jy, iz - jz) *
                        abs_pow(u[dom.index(jx, jy, jz)], p));
    return h * h * h * acc.value();
}

ScalarField riesz_fast(const KernelTable& table, const ScalarField& u, double p) {
    if (!(p > 1.0)) throw InvalidArgument("riesz potential requires p > 1");
    if (!(table.domain() == u.domain()))
        throw DomainMismatch("riesz_fast: field does not match the kernel grid");
    const Domain& dom = u.domain();
    const int m = dom.resolution();
    const int M = table.padded_;
    const double h = dom.spacing();
    const std::size_t np = static_cast<std::size_t>(M) * M * M;
    const std::size_t nc = static_cast<std::size_t>(M) * M * (M / 2 + 1);

    double* rbuf = fftw_alloc_real(np);
    fftw_complex* cbuf = fftw_alloc_complex(nc);
    for (std::size_t i = 0; i < np; ++i) rbuf[i] = 0.0;
    for (int ix = 0; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz)
                rbuf[(static_cast<std::size_t>(ix) * M + iy) * M + iz] =
                    abs_pow(u[dom.index(ix, iy, iz)], p);

    fftw_execute_dft_r2c(static_cast<fftw_plan>(table.plan_forward_), rbuf, cbuf);
    for (std::size_t i = 0; i < nc; ++i) {
        cbuf[i][0] *= table.spectrum_[i];
        cbuf[i][1] *= table.spectrum_[i];
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(table.plan_inverse_), cbuf, rbuf);

    const double scale = h * h * h / static_cast<double>(np);
    ScalarField out(dom);
    for (int ix = 0; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz)
                out[dom.index(ix, iy, iz)] =
                    scale * rbuf[(static_cast<std::size_t>(ix) * M + iy) * M + iz];

    fftw_free(cbuf);
    fftw_free(rbuf);
    return out;
}

double interaction(const KernelTable& table, const ScalarField& u, const ScalarField& v,
                   double p) {
    require_same_domain(u, v, "interaction");
    if (!(table.domain() == u.domain()))
        throw DomainMismatch("interaction: fields do not match the kernel grid");
    const ScalarField z = riesz_fast(table, u, p);
    const double h = u.domain().spacing();
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) acc.add(z[i] * abs_pow(v[i], p));
    return h * h * h * acc.value();
}

} // namespace nhf
