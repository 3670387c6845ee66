#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace nhf {

/// Neumaier-compensated accumulator. All grid reductions in this project go
/// through it so that results are reproducible to ~1e-15 relative no matter
/// how the loop is chunked.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
    CompensatedSum acc;
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

} // namespace nhf
