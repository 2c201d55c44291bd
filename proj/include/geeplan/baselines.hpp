#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geeplan/planner.hpp"

namespace geeplan {

/// Coefficients of the per-segment energy in its convex slack form.
struct EnergyCoeffs {
    double c1 = 0.0;  // rotor profile term
    double c2 = 0.0;  // fuselage term
    double c3 = 0.0;  // weight (slack multiplier)
    double c4 = 0.0;  // induced-term constant
    double v_tip = 102.0;
};

inline EnergyCoeffs energy_coeffs(const UavParams& p) {
    const double rho = air_density(p.altitude);
    EnergyCoeffs c;
    c.c1 = p.n_rotors * (p.profile_drag_coeff / 8.0 * rho * p.rotor_solidity *
                         p.rotor_disc_area * p.v_tip * p.v_tip * p.v_tip);
    c.c2 = 0.5 * p.drag_coeff * p.fuselage_area * rho;
    c.c3 = p.weight_total;
    c.c4 = p.weight_total * p.weight_total /
           (4.0 * p.n_rotors * p.n_rotors * rho * rho * p.rotor_disc_area *
            p.rotor_disc_area);
    c.v_tip = p.v_tip;
    return c;
}

/// Exact slack value: z^2 = sqrt(c4 t^4 + len^4/4) - len^2/2.
inline double exact_slack(const EnergyCoeffs& c, double t, double seg_len) {
    if (t <= 0.0) throw std::domain_error("exact_slack: t must be > 0");
    const double l2 = seg_len * seg_len;
    const double s = std::sqrt(c.c4 * t * t * t * t + l2 * l2 / 4.0);
    return std::sqrt(std::max(s - l2 / 2.0, 0.0));
}

/// Convex-form segment energy at an explicit slack value.
inline double convexified_energy(const EnergyCoeffs& c, double t, double z, double seg_len) {
    if (t <= 0.0 || z < 0.0)
        throw std::domain_error("convexified_energy: t must be > 0 and z >= 0");
    const double l2 = seg_len * seg_len;
    return c.c1 * (t + 3.0 * l2 / (t * c.v_tip * c.v_tip)) +
           c.c2 * l2 * seg_len / (t * t) + c.c3 * z;
}

/// Residual of the linearized slack constraint around z_ref:
/// t^4 / z^2 - (z_ref^2 + 2 z_ref (z - z_ref) + len^2) / c4.
inline double taylor_residual(const EnergyCoeffs& c, double t, double z, double z_ref,
                              double seg_len) {
    if (z_ref <= 0.0) throw std::domain_error("taylor_residual: z_ref must be > 0");
    const double rhs =
        (z_ref * z_ref + 2.0 * z_ref * (z - z_ref) + seg_len * seg_len) / c.c4;
    return t * t * t * t / (z * z) - rhs;
}

/// Smallest z satisfying the linearized constraint at traversal time t.
inline double min_feasible_slack(const EnergyCoeffs& c, double t, double z_ref,
                                 double seg_len) {
    // feasibility: z^2 (2 z_ref z + (len^2 - z_ref^2)) >= c4 t^4, monotone in z
    // beyond the stationary point of the cubic
    const double a = 2.0 * z_ref;
    const double b = seg_len * seg_len - z_ref * z_ref;
    const double target = c.c4 * t * t * t * t;
    auto h = [&](double z) { return z * z * (a * z + b); };
    double lo = std::max(b < 0.0 ? -2.0 * b / (3.0 * a) : 0.0, 0.0);
    double hi = std::max({1.0, 2.0 * lo, exact_slack(c, t, seg_len) * 2.0});
    while (h(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

struct HoverPlan {
    std::vector<int> loi_order;
    std::vector<double> hover_times;  // per LoI, s
    std::vector<int> best_loi;        // serving LoI per node
    double fly_time = 0.0;            // s
    double energy = 0.0;              // J
    double gee = 0.0;                 // bits/J
    double q_bits = 0.0;
};

/// Fly-hover-communicate baseline: hover at each LoI long enough that every
/// node receives its demand from its best LoI; legs are flown at v_max.
inline HoverPlan fly_hover_plan(const std::vector<std::vector<double>>& hover_rates,
                                const std::vector<int>& loi_order, double route_length,
                                const UavParams& uav, double q_bits, double v_max) {
    const size_t n_loi = hover_rates.size();
    if (n_loi == 0) throw std::invalid_argument("fly_hover_plan: no LoIs");
    const size_t n_gn = hover_rates[0].size();
    HoverPlan hp;
    hp.loi_order = loi_order;
    hp.hover_times.assign(n_loi, 0.0);
    hp.best_loi.assign(n_gn, -1);
    hp.q_bits = q_bits;
    for (size_t n = 0; n < n_gn; ++n) {
        size_t best = 0;
        for (size_t l = 1; l < n_loi; ++l)
            if (hover_rates[l][n] > hover_rates[best][n]) best = l;
        if (hover_rates[best][n] <= 0.0)
            throw std::runtime_error("fly_hover_plan: node unreachable from every LoI");
        hp.best_loi[n] = static_cast<int>(best);
        hp.hover_times[best] += q_bits / hover_rates[best][n];
    }
    hp.fly_time = route_length / v_max;
    double hover_total = 0.0;
    for (double t : hp.hover_times) hover_total += t;
    hp.energy = hover_total * propulsion_power(uav, 0.0).total +
                hp.fly_time * propulsion_power(uav, v_max).total;
    hp.gee = static_cast<double>(n_gn) * q_bits / hp.energy;
    return hp;
}

/// Largest speed whose power draw does not exceed hover power (the speed cap
/// that keeps the discharge constraints equivalent to the hover case).
inline double efficient_speed_cap(const UavParams& uav, double v_max) {
    const double hover = propulsion_power(uav, 0.0).total;
    if (propulsion_power(uav, v_max).total <= hover) return v_max;
    double lo = 0.1, hi = v_max;
    // power dips below hover immediately above 0, so bisect the upper crossing
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (propulsion_power(uav, mid).total <= hover ? lo : hi) = mid;
    }
    return lo;
}

struct DinkelbachTraceRow {
    int scp_iter = 0;
    int dink_iter = 0;
    double lambda = 0.0;
    double numerator = 0.0;    // bits
    double denominator = 0.0;  // J
    double gee = 0.0;
};

struct SingleLapResult {
    std::vector<double> t_m;
    std::vector<double> t_mn;  // row-major
    std::vector<double> z_m;
    double lambda = 0.0;
    double energy = 0.0;  // J, convex-form (upper bound on the true energy)
    double gee = 0.0;
    int iter_scp = 0;
    int iter_dink = 0;
    bool converged = true;
    std::vector<DinkelbachTraceRow> trace;
};

struct SingleLapOptions {
    double dinkelbach_eps = 1e-6;   // relative on |N - lambda D|
    double scp_rel_tol = 1e-4;
    int scp_max_iter = 30;
    int inner_max_iter = 120;
    double v_max = 20.0;            // scenario hard speed limit
};

namespace detail {

// Energy-descent step on the traversal times with the schedule row sums as
// lower bounds; the total-time budget enters through a bisected multiplier.
inline double descend_times(const EnergyCoeffs& ec, const FlightPath& path,
                            const std::vector<double>& z_ref, double v_cap, double t_max,
                            const std::vector<double>& row_need, std::vector<double>& t_m,
                            std::vector<double>& z_m) {
    const int M = path.segments();
    auto seg_best = [&](int m, double nu, double& t_out, double& z_out) {
        const double lb = std::max(row_need[m], path.seg_len[m] / v_cap);
        double lo = lb, hi = std::max(lb * 4.0 + 5.0, t_m[m] * 2.0);
        auto cost = [&](double t) {
            const double z = min_feasible_slack(ec, t, z_ref[m], path.seg_len[m]);
            return convexified_energy(ec, t, z, path.seg_len[m]) + nu * t;
        };
        constexpr double gr = 0.6180339887498949;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = cost(c), fd = cost(d);
        for (int it = 0; it < 120; ++it) {
            if (fc < fd) {
                hi = d; d = c; fd = fc;
                c = hi - gr * (hi - lo); fc = cost(c);
            } else {
                lo = c; c = d; fc = fd;
                d = lo + gr * (hi - lo); fd = cost(d);
            }
        }
        t_out = 0.5 * (lo + hi);
        if (t_out < lb) t_out = lb;
        z_out = min_feasible_slack(ec, t_out, z_ref[m], path.seg_len[m]);
    };

    auto total_time = [&](double nu, std::vector<double>& t, std::vector<double>& z) {
        double sum = 0.0;
        for (int m = 0; m < M; ++m) {
            seg_best(m, nu, t[m], z[m]);
            sum += t[m];
        }
        return sum;
    };

    std::vector<double> t(M), z(M);
    if (total_time(0.0, t, z) > t_max) {
        double lo = 0.0, hi = 1.0;
        std::vector<double> th(M), zh(M);
        while (total_time(hi, th, zh) > t_max && hi < 1e9) hi *= 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (total_time(mid, t, z) > t_max)
                lo = mid;
            else
                hi = mid;
        }
        total_time(hi, t, z);
    }
    t_m = t;
    z_m = z;
    double e = 0.0;
    for (int m = 0; m < M; ++m)
        e += convexified_energy(ec, t_m[m], z_m[m], path.seg_len[m]);
    return e;
}

}  // namespace detail

/// Single-lap design: sequential convex refinement of the slack expansion
/// point around a Generalized Dinkelbach loop. Delivery is pinned to the
/// demand, so the fractional objective's numerator is the total demand and
/// each inner problem is an energy descent over the schedule polytope.
inline SingleLapResult single_lap_solve(const RateTable& rates, const FlightPath& path,
                                        const UavParams& uav, const BatteryModel& battery,
                                        double q_bits, const HoverPlan& init,
                                        const std::vector<Vec2>& lois,
                                        const SingleLapOptions& opt = {}) {
    const int M = path.segments(), N = rates.nodes;
    const auto ec = energy_coeffs(uav);
    const double v_cap = std::min(efficient_speed_cap(uav, opt.v_max), opt.v_max);
    const double t_max = flight_time(battery, propulsion_power(uav, 0.0).total).duration;
    const double n_bits = static_cast<double>(N) * q_bits;

    // --- initial point: the fly-hover solution mapped onto the discretized
    // path (legs at the speed cap, each node served at the segment nearest
    // its serving LoI) ---
    SingleLapResult res;
    res.t_m.assign(M, 0.0);
    res.t_mn.assign(static_cast<size_t>(M) * N, 0.0);
    for (int m = 0; m < M; ++m) res.t_m[m] = path.seg_len[m] / v_cap;
    std::vector<int> loi_segment(lois.size(), 0);
    for (size_t l = 0; l < lois.size(); ++l) {
        double bd = 1e300;
        for (int m = 0; m < M; ++m) {
            const double d = (path.segment_midpoint(m).xy() - lois[l]).norm();
            if (d < bd) {
                bd = d;
                loi_segment[l] = m;
            }
        }
    }
    for (int n = 0; n < N; ++n) {
        const int l = init.best_loi.empty() ? 0 : init.best_loi[n];
        int best_m = loi_segment[static_cast<size_t>(l) < lois.size() ? l : 0];
        if (rates.at(best_m, n) <= 0.0) {  // fall back to the best segment
            best_m = 0;
            for (int m = 1; m < M; ++m)
                if (rates.at(m, n) > rates.at(best_m, n)) best_m = m;
        }
        if (rates.at(best_m, n) <= 0.0)
            throw std::runtime_error("single_lap_solve: node unreachable");
        res.t_mn[static_cast<size_t>(best_m) * N + n] += q_bits / rates.at(best_m, n);
    }
    for (int m = 0; m < M; ++m) {
        double row = 0.0;
        for (int n = 0; n < N; ++n) row += res.t_mn[static_cast<size_t>(m) * N + n];
        res.t_m[m] = std::max(res.t_m[m], row);
    }
    res.z_m.assign(M, 0.0);
    std::vector<double> z_ref(M);
    for (int m = 0; m < M; ++m) {
        z_ref[m] = std::max(exact_slack(ec, res.t_m[m], path.seg_len[m]), 1e-9);
        res.z_m[m] = z_ref[m];
    }
    double energy = 0.0;
    for (int m = 0; m < M; ++m)
        energy += convexified_energy(ec, res.t_m[m], res.z_m[m], path.seg_len[m]);

    double lambda = n_bits / energy;
    res.trace.push_back({0, 0, lambda, n_bits, energy, lambda});

    double prev_scp_gee = lambda;
    for (int scp = 0; scp < opt.scp_max_iter; ++scp) {
        ++res.iter_scp;
        // retighten the expansion point at the incumbent
        for (int m = 0; m < M; ++m)
            z_ref[m] = std::max(exact_slack(ec, res.t_m[m], path.seg_len[m]), 1e-9);

        int dink = 0;
        while (true) {
            ++dink;
            ++res.iter_dink;
            // inner: block-coordinate energy descent at fixed delivery
            double inner_prev = energy;
            for (int it = 0; it < opt.inner_max_iter; ++it) {
                const auto sched = maxmin_schedule(rates, res.t_m);
                if (sched.t_star < q_bits * (1.0 - 1e-9)) break;  // keep last feasible point
                // scale each node column down to exact delivery
                std::vector<double> tmn = sched.t_mn;
                for (int n = 0; n < N; ++n) {
                    double bits = 0.0;
                    for (int m = 0; m < M; ++m)
                        bits += tmn[static_cast<size_t>(m) * N + n] * rates.at(m, n);
                    const double f = bits > 0.0 ? q_bits / bits : 0.0;
                    for (int m = 0; m < M; ++m)
                        tmn[static_cast<size_t>(m) * N + n] *= f;
                }
                std::vector<double> row_need(M, 0.0);
                for (int m = 0; m < M; ++m)
                    for (int n = 0; n < N; ++n)
                        row_need[m] += tmn[static_cast<size_t>(m) * N + n];
                std::vector<double> t_new(res.t_m), z_new(res.z_m);
                const double e_new = detail::descend_times(ec, path, z_ref, v_cap, t_max,
                                                           row_need, t_new, z_new);
                if (e_new <= energy * (1.0 + 1e-12)) {
                    res.t_m = t_new;
                    res.z_m = z_new;
                    res.t_mn = tmn;
                    energy = std::min(energy, e_new);
                }
                if (e_new > inner_prev * (1.0 - 1e-10)) break;
                inner_prev = e_new;
            }
            const double f_val = n_bits - lambda * energy;
            lambda = n_bits / energy;
            res.trace.push_back({res.iter_scp, dink, lambda, n_bits, energy, lambda});
            if (std::fabs(f_val) < opt.dinkelbach_eps * energy || dink >= 20) break;
        }
        const double gee = n_bits / energy;
        if (gee < prev_scp_gee * (1.0 + opt.scp_rel_tol)) {
            prev_scp_gee = std::max(prev_scp_gee, gee);
            break;
        }
        prev_scp_gee = gee;
    }

    res.lambda = lambda;
    res.energy = energy;
    res.gee = n_bits / energy;
    return res;
}

}  // namespace geeplan
