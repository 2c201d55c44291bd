#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace geeplan {

namespace detail {

// Solve a small dense linear system in place (partial pivoting).
template <int N>
std::array<double, N> solve_small(std::array<std::array<double, N + 1>, N> a) {
    for (int c = 0; c < N; ++c) {
        int piv = c;
        for (int r = c + 1; r < N; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (std::fabs(a[c][c]) < 1e-14)
            throw std::runtime_error("curve_fit: singular normal equations");
        for (int r = 0; r < N; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (int k = c; k <= N; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::array<double, N> x{};
    for (int i = 0; i < N; ++i) x[i] = a[i][N] / a[i][i];
    return x;
}

inline double r_squared(std::span<const double> y, std::span<const double> yhat) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sse = 0.0, sst = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        sse += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    if (sst < 1e-300) return sse < 1e-12 ? 1.0 : 0.0;  // constant data
    return 1.0 - sse / sst;
}

}  // namespace detail

struct PolyFit {
    std::vector<double> coeffs;  // ascending powers
    double r2 = 0.0;

    double operator()(double x) const {
        double acc = 0.0, p = 1.0;
        for (double c : coeffs) {
            acc += c * p;
            p *= x;
        }
        return acc;
    }
};

/// Least-squares polynomial of given degree (1 = linear, 2 = quadratic).
inline PolyFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree) {
    const int n = degree + 1;
    if (static_cast<int>(x.size()) < n || x.size() != y.size())
        throw std::invalid_argument("fit_polynomial: not enough points");
    PolyFit out;
    auto build = [&](auto ncoef) {
        constexpr int N = decltype(ncoef)::value;
        std::array<std::array<double, N + 1>, N> a{};
        for (size_t i = 0; i < x.size(); ++i) {
            std::array<double, N> basis;
            double p = 1.0;
            for (int j = 0; j < N; ++j) {
                basis[j] = p;
                p *= x[i];
            }
            for (int r = 0; r < N; ++r) {
                for (int c = 0; c < N; ++c) a[r][c] += basis[r] * basis[c];
                a[r][N] += basis[r] * y[i];
            }
        }
        auto sol = detail::solve_small<N>(a);
        out.coeffs.assign(sol.begin(), sol.end());
    };
    if (degree == 1)
        build(std::integral_constant<int, 2>{});
    else if (degree == 2)
        build(std::integral_constant<int, 3>{});
    else
        throw std::invalid_argument("fit_polynomial: unsupported degree");
    std::vector<double> yhat(x.size());
    for (size_t i = 0; i < x.size(); ++i) yhat[i] = out(x[i]);
    out.r2 = detail::r_squared(y, yhat);
    return out;
}

/// Rational fit y = (p1*x + p2) / (x + q1).
/// q1 is located by a coarse scan refined by golden-section on the residual;
/// the numerator follows from linear least squares at each candidate q1.
struct RationalFit {
    double p1 = 0.0, p2 = 0.0, q1 = 1.0;
    double r2 = 0.0;

    double operator()(double x) const { return (p1 * x + p2) / (x + q1); }
};

inline RationalFit fit_rational(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 3 || x.size() != y.size())
        throw std::invalid_argument("fit_rational: need at least 3 points");
    double xmax = 0.0;
    for (double v : x) xmax = std::max(xmax, std::fabs(v));

    auto solve_num = [&](double q1, double& p1, double& p2) {
        // weighted LS on (p1*x + p2) ~ y*(x+q1)
        std::array<std::array<double, 3>, 2> a{};
        for (size_t i = 0; i < x.size(); ++i) {
            const double t = y[i] * (x[i] + q1);
            a[0][0] += x[i] * x[i];
            a[0][1] += x[i];
            a[1][1] += 1.0;
            a[0][2] += x[i] * t;
            a[1][2] += t;
        }
        a[1][0] = a[0][1];
        auto sol = detail::solve_small<2>(a);
        p1 = sol[0];
        p2 = sol[1];
    };
    auto sse_at = [&](double q1) {
        double p1, p2;
        solve_num(q1, p1, p2);
        double sse = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - (p1 * x[i] + p2) / (x[i] + q1);
            sse += e * e;
        }
        return sse;
    };

    // coarse scan keeps the pole x = -q1 away from the data (q1 > 0)
    double best_q = 0.0, best_sse = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 400; ++i) {
        const double q1 = 0.05 * xmax * i;
        const double s = sse_at(q1);
        if (s < best_sse) {
            best_sse = s;
            best_q = q1;
        }
    }
    double lo = std::max(best_q - 0.05 * xmax, 1e-6 * xmax);
    double hi = best_q + 0.05 * xmax;
    constexpr double gr = 0.6180339887498949;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = sse_at(c), fd = sse_at(d);
    for (int it = 0; it < 200; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = sse_at(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = sse_at(d);
        }
    }
    RationalFit out;
    out.q1 = 0.5 * (lo + hi);
    solve_num(out.q1, out.p1, out.p2);
    std::vector<double> yhat(x.size());
    for (size_t i = 0; i < x.size(); ++i) yhat[i] = out(x[i]);
    out.r2 = detail::r_squared(y, yhat);
    return out;
}

}  // namespace geeplan
