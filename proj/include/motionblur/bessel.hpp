#pragma once

// Bessel functions of the first kind and integer order.
//
// x < 12: ascending power series. Otherwise: Miller's backward recurrence from an
// order well above max(nu, x), normalised with J0 + 2 sum J_2k = 1. Negative orders
// use J_{-n} = (-1)^n J_n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <vector>

#include "motionblur/error.hpp"

namespace motionblur {

namespace detail {

inline double bessel_series(int n, double x) {
    const double half = 0.5 * x;
    double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
    double sum = term;
    const double q = half * half;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > half) break;
    }
    return sum;
}

inline int miller_start(int n_max, double x) {
    const double top = std::max(static_cast<double>(n_max), x);
    int m = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
    return m + (m % 2);
}

/// J_0..J_{n_max}(x) for x > 0 by backward recurrence.
inline std::vector<double> bessel_miller(int n_max, double x) {
    const int m = miller_start(n_max, x);
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    double next = 0.0, cur = 1e-280, norm = 0.0;
    const double two_over_x = 2.0 / x;
    for (int k = m; k >= 1; --k) {
        // cur = J_k, next = J_{k+1}; produce J_{k-1}
        const double prev = k * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if (k - 1 <= n_max) out[k - 1] = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    norm += cur;  // J_0
    for (auto& v : out) v /= norm;
    return out;
}

}  // namespace detail

/// J_0(x) .. J_{n_max}(x).
inline std::vector<double> bessel_j_all(int n_max, double x) {
    require(x >= 0.0, "bessel_j: x must be >= 0");
    require(n_max >= 0, "bessel_j_all: n_max must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < 12.0) {
        for (int n = 0; n <= n_max; ++n) out[n] = detail::bessel_series(n, x);
        return out;
    }
    return detail::bessel_miller(n_max, x);
}

inline double bessel_j(int nu, double x) {
    require(x >= 0.0, "bessel_j: x must be >= 0");
    const int n = std::abs(nu);
    double v;
    if (x == 0.0)
        v = n == 0 ? 1.0 : 0.0;
    else if (x < 12.0)
        v = detail::bessel_series(n, x);
    else
        v = detail::bessel_miller(n, x)[n];
    return (nu < 0 && (n % 2 == 1)) ? -v : v;
}

/// J_nu from a table of non-negative orders J_0.. (as returned by bessel_j_all).
inline double bessel_signed(const std::vector<double>& J, int nu) {
    const int n = std::abs(nu);
    return (nu < 0 && n % 2 == 1) ? -J[n] : J[n];
}

/// Immutable table of J_nu(x_s) for nu in [-max_order, max_order] on a fixed set
/// of arguments. Negative orders are stored, not recomputed, on every lookup.
class BesselTable {
public:
    BesselTable(int max_order, std::vector<double> args) : max_order_(max_order), args_(std::move(args)) {
        require(max_order >= 0, "BesselTable: max_order must be >= 0");
        const std::size_t width = 2 * static_cast<std::size_t>(max_order) + 1;
        values_.resize(width * args_.size());
        for (std::size_t s = 0; s < args_.size(); ++s) {
            const auto pos = bessel_j_all(max_order, args_[s]);
            for (int nu = -max_order; nu <= max_order; ++nu) {
                const int n = std::abs(nu);
                values_[s * width + (nu + max_order)] = (nu < 0 && n % 2 == 1) ? -pos[n] : pos[n];
            }
        }
    }

    /// Copy of `base` with entry (nu, s) offset by `delta`. Diagnostic use only:
    /// lets a self-test demonstrate that a damaged table is caught.
    static BesselTable perturbed(const BesselTable& base, int nu, std::size_t s, double delta) {
        BesselTable t = base;
        t.values_[t.slot(nu, s)] += delta;
        return t;
    }

    int max_order() const { return max_order_; }
    const std::vector<double>& args() const { return args_; }
    double operator()(int nu, std::size_t s) const { return values_[slot(nu, s)]; }

private:
    std::size_t slot(int nu, std::size_t s) const {
        require(std::abs(nu) <= max_order_ && s < args_.size(), "BesselTable: lookup out of range");
        return s * (2 * static_cast<std::size_t>(max_order_) + 1) + (nu + max_order_);
    }

    int max_order_;
    std::vector<double> args_;
    std::vector<double> values_;
};

}  // namespace motionblur
