#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <system_error>

namespace snplr::num {

struct Minimum {
    double x;
    double fx;
};

/// Brent's golden-section/parabolic minimiser on [lo, hi].
///
/// Terminates once the bracket around the minimum shrinks below
/// 2 * (x_tol + sqrt(eps) * |x|). Endpoints are never evaluated, so f may
/// diverge there.
template <typename F>
Minimum brent_minimize(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
    constexpr double golden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
    constexpr double sqrt_eps = 1.4901161193847656e-08;

    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = x_tol + sqrt_eps * std::fabs(x);
        if (std::fabs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;

        double p = 0.0, q = 0.0, r = 0.0;
        if (std::fabs(e) > tol) {
            // fit a parabola through (v, fv), (w, fw), (x, fx)
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p; else q = -q;
            r = e;
            e = d;
        }

        if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
            d = p / q;
            const double u = x + d;
            if (u - a < 2.0 * tol || b - u < 2.0 * tol) d = (x < m) ? tol : -tol;
        } else {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }

        const double u = (std::fabs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double fu = f(u);

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

/// Composite Simpson rule with n (even) uniform intervals.
template <typename F>
double composite_simpson(F&& f, double a, double b, std::int64_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0, even = 0.0;
    for (std::int64_t i = 1; i < n; i += 2) odd += f(a + h * static_cast<double>(i));
    for (std::int64_t i = 2; i < n; i += 2) even += f(a + h * static_cast<double>(i));
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Shortest decimal representation that round-trips the value exactly.
/// Infinities come out as "inf"/"-inf".
inline std::string to_string_shortest(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace snplr::num
