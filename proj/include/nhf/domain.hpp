#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nhf {

/// Box domain (0,Lx)x(0,Ly)x(0,Lz) with a uniform interior grid of m nodes
/// per axis. Node i along an axis sits at (i+1)*h; the boundary layer at
/// index 0 and m+1 carries the homogeneous Dirichlet condition and is never
/// stored. The spacing h = L/(m+1) must be identical on all three axes.
class Domain {
public:
    Domain(std::array<double, 3> lengths, int m);

    const std::array<double, 3>& lengths() const { return lengths_; }
    int resolution() const { return m_; }
    double spacing() const { return h_; }
    double volume() const { return volume_; }
    double diameter() const { return diameter_; }

    /// Number of interior nodes, m^3.
    std::size_t node_count() const {
        return static_cast<std::size_t>(m_) * m_ * m_;
    }

    /// Coordinate of interior node index i (0-based) along any axis.
    double coord(int i) const { return (i + 1) * h_; }

    /// Row-major flattening: x slowest, z fastest.
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * m_ + iy) * m_ + iz;
    }

    bool operator==(const Domain& other) const {
        return lengths_ == other.lengths_ && m_ == other.m_;
    }

private:
    std::array<double, 3> lengths_;
    int m_;
    double h_;
    double volume_;
    double diameter_;
};

/// Grid function on the interior nodes of a Domain. The zero boundary trace
/// is structural: boundary values are never stored, so it cannot be violated.
/// Construction rejects non-finite entries.
class ScalarField {
public:
    explicit ScalarField(const Domain& domain);                      // zero field
    ScalarField(const Domain& domain, std::vector<double> values);   // takes ownership

    const Domain& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double& at(int ix, int iy, int iz) { return values_[domain_.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return values_[domain_.index(ix, iy, iz)]; }

    /// Throws if any entry is NaN or infinite.
    void check_finite() const;

    // In-place helpers used across the solvers.
    ScalarField& scale(double c);
    ScalarField& add_scaled(const ScalarField& other, double c);  // *this += c*other
    ScalarField& abs_in_place();

private:
    Domain domain_;
    std::vector<double> values_;
};

/// Exponent bundle for the nonlinearity. Dimension is fixed to n = 3, where
/// the kernel power n-2 = 1 and the existence-range ceiling
/// p_nl = 2n/((n-1)(n-2)) evaluates to 3.
struct ModelParams {
    double p;

    static constexpr int n = 3;
    static constexpr double p_nl = 3.0;       // 2n/((n-1)(n-2)) at n=3
    static constexpr double kernel_power = 1; // n-2

    explicit ModelParams(double exponent);

    /// p < p_nl: stationary existence and the norm-threshold criteria apply.
    bool in_existence_range() const { return p < p_nl; }
    /// 2 < p < 3: hypothesis of the high-energy blow-up construction.
    bool in_high_energy_range() const { return 2.0 < p && p < 3.0; }
    /// p <= (n+2)/n = 5/3: global solutions stay bounded in H^1.
    bool in_h1_bound_range() const { return p <= 5.0 / 3.0; }
};

/// make_domain(lengths, m): validating constructor in function form.
Domain make_domain(std::array<double, 3> lengths, int m);

// Discrete norms. All integrals are node-value x h^3 quadrature, which is
// exactly compatible with the energy form of the 7-point Laplacian.
double l2_norm_sq(const ScalarField& u);
double l2_norm(const ScalarField& u);

/// Dirichlet energy: h^3 * sum over axis-adjacent node pairs (boundary zeros
/// included) of ((difference)/h)^2. Equals <-lap_h(u), u> * h^3.
double h1_seminorm_sq(const ScalarField& u);

double lp_norm(const ScalarField& u, double q);
double sup_norm(const ScalarField& u);

/// L2_h inner product h^3 * sum(u_i v_i).
double inner(const ScalarField& u, const ScalarField& v);

/// 7-point discrete Laplacian with zero Dirichlet data.
ScalarField laplacian(const ScalarField& u);

void require_same_domain(const ScalarField& a, const ScalarField& b, const char* where);

} // namespace nhf
