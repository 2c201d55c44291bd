#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geeplan/battery.hpp"
#include "geeplan/irs.hpp"
#include "geeplan/linprog.hpp"
#include "geeplan/path.hpp"
#include "geeplan/uav_power.hpp"

namespace geeplan {

/// Achievable rate per (segment, node) pair after per-pair beamforming.
struct RateTable {
    int segments = 0;
    int nodes = 0;
    std::vector<double> d;  // bits/s, row-major [segment][node]

    double& at(int m, int n) { return d[static_cast<size_t>(m) * nodes + n]; }
    double at(int m, int n) const { return d[static_cast<size_t>(m) * nodes + n]; }
};

/// Build the rate table for a discretized path: for every segment midpoint
/// and node, run the discrete phase selection over all visible reflectors and
/// evaluate the resulting SNR (true coupled amplitudes).
inline RateTable build_rate_table(const FlightPath& path, const std::vector<Vec3>& gns,
                                  const std::vector<IrsModule>& irss,
                                  const ChannelParams& cp, const AmpPhaseParams& ap,
                                  const std::vector<double>& phase_set,
                                  bool amplitude_aware) {
    RateTable rt;
    rt.segments = path.segments();
    rt.nodes = static_cast<int>(gns.size());
    rt.d.assign(static_cast<size_t>(rt.segments) * rt.nodes, 0.0);
    for (int m = 0; m < rt.segments; ++m) {
        const Vec3 p = path.segment_midpoint(m);
        for (int n = 0; n < rt.nodes; ++n) {
            const auto direct = build_direct(p, gns[n], cp);
            std::vector<CascadeChannel> cascades;
            for (const auto& irs : irss) {
                if (!visible(p, irs) || !visible(gns[n], irs)) continue;
                cascades.push_back(build_cascade(p, irs, gns[n], cp));
            }
            double snr;
            if (cascades.empty()) {
                snr = cp.tx_power_w() * std::norm(direct) / cp.noise_w();
            } else {
                snr = alternate_optimize(direct, cascades, phase_set, ap, amplitude_aware,
                                         cp.tx_power_w(), cp.noise_w())
                          .snr;
            }
            rt.at(m, n) = rate_bps(snr, cp.bandwidth_per_gn);
        }
    }
    return rt;
}

struct Schedule {
    std::vector<double> t_mn;  // row-major [segment][node], seconds
    double t_star = 0.0;       // per-lap per-node deliverable bits
};

/// Max-min fair schedule for one lap: maximize the worst-node delivered bits
/// subject to the per-segment time budgets (TDMA) and non-negativity.
inline Schedule maxmin_schedule(const RateTable& rates, const std::vector<double>& t_m) {
    const int M = rates.segments, N = rates.nodes;
    if (static_cast<int>(t_m.size()) != M)
        throw std::invalid_argument("maxmin_schedule: budget size mismatch");
    for (double t : t_m)
        if (t <= 0.0) throw std::invalid_argument("maxmin_schedule: budgets must be > 0");

    const size_t nv = static_cast<size_t>(M) * N + 1;  // T_mn ... , t
    std::vector<double> c(nv, 0.0);
    c[nv - 1] = 1.0;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int n = 0; n < N; ++n) {  // t - sum_m T_mn d <= 0
        std::vector<double> row(nv, 0.0);
        for (int m = 0; m < M; ++m) row[static_cast<size_t>(m) * N + n] = -rates.at(m, n);
        row[nv - 1] = 1.0;
        a.push_back(std::move(row));
        b.push_back(0.0);
    }
    for (int m = 0; m < M; ++m) {  // sum_n T_mn <= t_m
        std::vector<double> row(nv, 0.0);
        for (int n = 0; n < N; ++n) row[static_cast<size_t>(m) * N + n] = 1.0;
        a.push_back(std::move(row));
        b.push_back(t_m[m]);
    }
    const auto res = simplex_maximize(c, a, b);
    Schedule s;
    s.t_mn.assign(res.x.begin(), res.x.end() - 1);
    s.t_star = res.objective;
    return s;
}

struct PlanSolution {
    double velocity = 0.0;            // m/s
    std::vector<double> t_m;          // per-segment traversal time, s
    std::vector<double> t_mn;         // row-major schedule, s
    long n_lap = 0;
    double energy_total = 0.0;        // J
    double bits_per_gn = 0.0;         // delivered demand per node
    double gee = 0.0;                 // bits/J, numerator N*Q
    double lap_time = 0.0;            // s
    double t_max = 0.0;               // battery-limited flight time at v
    bool feasible = false;
    std::string infeasible_reason;
};

/// One-velocity plan: fixed-speed traversal times, max-min lap schedule, lap
/// count from the per-lap deliverable bits, feasibility from the discharge
/// simulation (one lap of margin kept in reserve).
inline PlanSolution plan_for_velocity(const RateTable& rates, const FlightPath& path,
                                      const UavParams& uav, const BatteryModel& battery,
                                      double q_bits, double v) {
    if (v <= 0.0) throw std::invalid_argument("plan_for_velocity: v must be > 0");
    PlanSolution ps;
    ps.velocity = v;
    const int M = path.segments();
    ps.t_m.resize(M);
    for (int m = 0; m < M; ++m) ps.t_m[m] = path.seg_len[m] / v;
    ps.lap_time = 0.0;
    for (double t : ps.t_m) ps.lap_time += t;

    const auto sched = maxmin_schedule(rates, ps.t_m);
    if (sched.t_star <= 0.0) {
        ps.infeasible_reason = "a node has no positive rate anywhere on the path";
        return ps;
    }
    ps.t_mn = sched.t_mn;
    ps.n_lap = static_cast<long>(std::ceil(q_bits / sched.t_star - 1e-12));
    ps.n_lap = std::max(ps.n_lap, 1L);

    const double p_v = propulsion_power(uav, v).total;
    ps.t_max = flight_time(battery, p_v).duration;
    if ((ps.n_lap + 1) * ps.lap_time > ps.t_max) {
        ps.infeasible_reason = "battery cannot sustain the required laps";
        return ps;
    }
    ps.energy_total = ps.n_lap * ps.lap_time * p_v;
    ps.bits_per_gn = q_bits;
    ps.gee = static_cast<double>(rates.nodes) * q_bits / ps.energy_total;
    ps.feasible = true;
    return ps;
}

struct E2p2Result {
    PlanSolution best;
    std::vector<PlanSolution> per_velocity;
};

/// Velocity sweep: plan at every velocity in the set, keep the best GEE.
/// With early_break, stop as soon as the objective stops improving.
inline E2p2Result plan_over_velocities(const RateTable& rates, const FlightPath& path,
                                       const UavParams& uav, const BatteryModel& battery,
                                       double q_bits, const std::vector<double>& velocities,
                                       bool early_break = false) {
    E2p2Result out;
    double best_gee = -1.0;
    for (double v : velocities) {
        auto ps = plan_for_velocity(rates, path, uav, battery, q_bits, v);
        const bool improved = ps.feasible && ps.gee > best_gee;
        if (improved) {
            best_gee = ps.gee;
            out.best = ps;
        }
        out.per_velocity.push_back(std::move(ps));
        if (early_break && !improved && best_gee > 0.0) break;
    }
    return out;
}

}  // namespace geeplan
