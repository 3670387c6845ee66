#include "nhf/domain.hpp"

#include <cmath>
#include <sstream>

#include "nhf/errors.hpp"
#include "nhf/summation.hpp"

namespace nhf {

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace

Domain::Domain(std::array<double, 3> lengths, int m) : lengths_(lengths), m_(m) {
    for (double L : lengths_) {
        if (!(L > 0.0) || !std::isfinite(L)) {
            throw InvalidArgument("domain lengths must be positive and finite");
        }
    }
    if (m < 1) {
        throw InvalidArgument("grid resolution m must be >= 1");
    }
    const double hx = lengths_[0] / (m + 1);
    const double hy = lengths_[1] / (m + 1);
    const double hz = lengths_[2] / (m + 1);
    if (!close_rel(hx, hy, 1e-12) || !close_rel(hx, hz, 1e-12)) {
        std::ostringstream msg;
        msg << "anisotropic spacing rejected: h = (" << hx << ", " << hy << ", " << hz << ")";
        throw InvalidArgument(msg.str());
    }
    h_ = hx;
    volume_ = lengths_[0] * lengths_[1] * lengths_[2];
    diameter_ = std::sqrt(lengths_[0] * lengths_[0] + lengths_[1] * lengths_[1] +
                          lengths_[2] * lengths_[2]);
}

Domain make_domain(std::array<double, 3> lengths, int m) { return Domain(lengths, m); }

ScalarField::ScalarField(const Domain& domain)
    : domain_(domain), values_(domain.node_count(), 0.0) {}

ScalarField::ScalarField(const Domain& domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
    if (values_.size() != domain_.node_count()) {
        throw InvalidArgument("field value count does not match the grid");
    }
    check_finite();
}

void ScalarField::check_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("field contains a non-finite entry");
        }
    }
}

ScalarField& ScalarField::scale(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

ScalarField& ScalarField::add_scaled(const ScalarField& other, double c) {
    require_same_domain(*this, other, "add_scaled");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * other.values_[i];
    return *this;
}

ScalarField& ScalarField::abs_in_place() {
    for (double& v : values_) v = std::abs(v);
    return *this;
}

ModelParams::ModelParams(double exponent) : p(exponent) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("exponent p must satisfy p > 1");
    }
}

void require_same_domain(const ScalarField& a, const ScalarField& b, const char* where) {
    if (!(a.domain() == b.domain())) {
        throw DomainMismatch(std::string(where) + ": fields live on different domains");
    }
}

double l2_norm_sq(const ScalarField& u) {
    CompensatedSum acc;
    for (double v : u.values()) acc.add(v * v);
    const double h = u.domain().spacing();
    return h * h * h * acc.value();
}

double l2_norm(const ScalarField& u) { return std::sqrt(l2_norm_sq(u)); }

double h1_seminorm_sq(const ScalarField& u) {
    const int m = u.domain().resolution();
    const Domain& dom = u.domain();
    CompensatedSum acc;
    // Edges along each axis, including the two edges touching the zero
    // boundary on every grid line.
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                const double v = u[dom.index(ix, iy, iz)];
                // backward differences plus the boundary edge at index 0
                const double dx = v - (ix > 0 ? u[dom.index(ix - 1, iy, iz)] : 0.0);
                const double dy = v - (iy > 0 ? u[dom.index(ix, iy - 1, iz)] : 0.0);
                const double dz = v - (iz > 0 ? u[dom.index(ix, iy, iz - 1)] : 0.0);
                acc.add(dx * dx);
                acc.add(dy * dy);
                acc.add(dz * dz);
                // upper boundary edges
                if (ix == m - 1) acc.add(v * v);
                if (iy == m - 1) acc.add(v * v);
                if (iz == m - 1) acc.add(v * v);
            }
        }
    }
    return dom.spacing() * acc.value();
}

double lp_norm(const ScalarField& u, double q) {
    if (!(q >= 1.0)) {
        throw InvalidArgument("lp_norm requires q >= 1");
    }
    CompensatedSum acc;
    for (double v : u.values()) acc.add(std::pow(std::abs(v), q));
    const double h = u.domain().spacing();
    return std::pow(h * h * h * acc.value(), 1.0 / q);
}

double sup_norm(const ScalarField& u) {
    double s = 0.0;
    for (double v : u.values()) s = std::max(s, std::abs(v));
    return s;
}

double inner(const ScalarField& u, const ScalarField& v) {
    require_same_domain(u, v, "inner");
    const double h = u.domain().spacing();
    return h * h * h * compensated_dot(u.values(), v.values());
}

ScalarField laplacian(const ScalarField& u) {
    const Domain& dom = u.domain();
    const int m = dom.resolution();
    const double inv_h2 = 1.0 / (dom.spacing() * dom.spacing());
    ScalarField out(dom);
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                const std::size_t i = dom.index(ix, iy, iz);
                double s = -6.0 * u[i];
                if (ix > 0) s += u[dom.index(ix - 1, iy, iz)];
                if (ix < m - 1) s += u[dom.index(ix + 1, iy, iz)];
                if (iy > 0) s += u[dom.index(ix, iy - 1, iz)];
                if (iy < m - 1) s += u[dom.index(ix, iy + 1, iz)];
                if (iz > 0) s += u[dom.index(ix, iy, iz - 1)];
                if (iz < m - 1) s += u[dom.index(ix, iy, iz + 1)];
                out[i] = s * inv_h2;
            }
        }
    }
    return out;
}

} // namespace nhf
