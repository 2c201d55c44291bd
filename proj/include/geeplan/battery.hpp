#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geeplan/curve_fit.hpp"
#include "geeplan/uav_power.hpp"

namespace geeplan {

/// One extrapolated discharge curve: start/end of the linear section at a
/// given constant current, per cell.
struct DischargeCurvePoint {
    double current = 0.0;  // A
    double v_max = 0.0;    // V, linear-section start voltage
    double v_min = 0.0;    // V, linear-section end voltage
    double e_max = 0.0;    // Wh, energy drawn up to the end of the section

    void validate() const {
        if (current <= 0 || v_min <= 0 || v_max <= v_min || e_max <= 0)
            throw std::invalid_argument("DischargeCurvePoint: invalid values");
    }
};

struct BatteryFitConfig {
    double extrapolation_margin = 0.25;  // fraction of fitted current range
};

/// Regression of the discharge family: V_max linear, V_min quadratic,
/// E_max rational in the discharge current.
class BatteryModel {
public:
    PolyFit f_vmax;      // degree 1
    PolyFit f_vmin;      // degree 2
    RationalFit f_e;     // (p1 I + p2)/(I + q1)
    int n_cells = 1;
    double cell_weight = 0.05;     // kg
    double v_cutoff = 3.2;         // V
    double v_rated = 3.6;          // V
    double cell_max_current = 10;  // A
    double i_lo = 0.0, i_hi = 0.0;  // fitted current range
    double margin = 0.25;

    double vmax(double i) const { return f_vmax(i); }
    double vmin(double i) const { return f_vmin(i); }
    double emax(double i) const { return f_e(i); }

    void check_current(double i) const {
        const double m = margin * (i_hi - i_lo);
        if (i < i_lo - m || i > i_hi + m)
            throw std::domain_error("BatteryModel: current outside fitted range");
    }
};

inline BatteryModel fit_battery(const std::vector<DischargeCurvePoint>& pts,
                                const BatteryFitConfig& cfg = {}) {
    if (pts.size() < 3) throw std::invalid_argument("fit_battery: need at least 3 curves");
    std::vector<double> i, vmax, vmin, e;
    for (const auto& p : pts) {
        p.validate();
        i.push_back(p.current);
        vmax.push_back(p.v_max);
        vmin.push_back(p.v_min);
        e.push_back(p.e_max);
    }
    BatteryModel m;
    m.f_vmax = fit_polynomial(i, vmax, 1);
    m.f_vmin = fit_polynomial(i, vmin, 2);
    m.f_e = fit_rational(i, e);
    m.i_lo = *std::min_element(i.begin(), i.end());
    m.i_hi = *std::max_element(i.begin(), i.end());
    m.margin = cfg.extrapolation_margin;
    return m;
}

/// `current_A,v_max_V,v_min_V,e_max_Wh` rows, one per discharge curve.
inline std::vector<DischargeCurvePoint> load_datasheet_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_datasheet_csv: cannot open " + path);
    std::vector<DischargeCurvePoint> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '.'))
            continue;  // header / comments
        std::istringstream ss(line);
        DischargeCurvePoint p;
        char comma;
        if (ss >> p.current >> comma >> p.v_max >> comma >> p.v_min >> comma >> p.e_max)
            out.push_back(p);
    }
    return out;
}

/// Discharge slope between the linear-section endpoints, V per Wh.
inline double slope(const BatteryModel& m, double current) {
    m.check_current(current);
    return (m.vmax(current) - m.vmin(current)) / m.emax(current);
}

enum class FlightStop { energy_exhausted, cutoff_voltage };

struct FlightTimeResult {
    double duration = 0.0;  // s
    long steps = 0;
    FlightStop terminated_by = FlightStop::energy_exhausted;
    double energy_used = 0.0;  // Wh per cell
    bool current_truncated = false;  // per-cell current limit hit
};

/// Step-wise discharge simulation at constant total electrical power.
/// Power is split evenly across the cells; each step the terminal voltage
/// drops by slope(I) times the per-cell energy drawn, and both the current
/// and the available capacity are re-evaluated.
inline FlightTimeResult flight_time(const BatteryModel& m, double p_uav, double dt = 1.0) {
    if (p_uav <= 0 || dt <= 0) throw std::domain_error("flight_time: p_uav and dt must be > 0");
    const double p_cell = p_uav / m.n_cells;

    double current = p_cell / m.v_rated;
    double v = m.vmax(current);
    current = p_cell / v;
    v = m.vmax(current);  // one fixed-point refinement of the start voltage
    current = p_cell / v;

    FlightTimeResult res;
    double e_tot = 0.0;
    double e_max = m.emax(current);
    while (e_tot < e_max) {
        if (current > m.cell_max_current) {
            res.current_truncated = true;
            break;
        }
        const double k = slope(m, current);
        const double e_step = current * v * dt / 3600.0;  // Wh
        const double v_next = v - k * e_step;
        if (v_next < m.v_cutoff) {
            res.terminated_by = FlightStop::cutoff_voltage;
            break;
        }
        ++res.steps;
        v = v_next;
        current = p_cell / v;
        e_tot += e_step;
        e_max = m.emax(current);
    }
    res.duration = res.steps * dt;
    res.energy_used = e_tot;
    return res;
}

/// Capacity divided by power, ignoring the discharge dynamics. Comparison
/// baseline only.
inline double naive_flight_time(const BatteryModel& m, double p_uav) {
    if (p_uav <= 0) throw std::domain_error("naive_flight_time: p_uav must be > 0");
    const double i1 = p_uav / m.n_cells / m.v_rated;
    return m.emax(i1) * m.n_cells / p_uav * 3600.0;
}

struct SizingPoint {
    int n_cells = 0;
    double hover_minutes = 0.0;
    bool over_takeoff_limit = false;
    bool current_truncated = false;
};

/// Hover endurance as a function of battery size. Total weight is rebuilt
/// from the body weight plus n cells, and the whole discharge simulation is
/// re-run per configuration.
inline std::vector<SizingPoint> sizing_sweep(double body_weight_newton, double cell_weight_kg,
                                             int n_min, int n_max, double max_takeoff_kg,
                                             UavParams uav, BatteryModel model,
                                             double gravity = 9.81) {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("sizing_sweep: bad n range");
    std::vector<SizingPoint> out;
    for (int n = n_min; n <= n_max; ++n) {
        uav.weight_total = body_weight_newton + n * cell_weight_kg * gravity;
        model.n_cells = n;
        const double hover_w = propulsion_power(uav, 0.0).total;
        const auto ft = flight_time(model, hover_w);
        SizingPoint pt;
        pt.n_cells = n;
        pt.hover_minutes = ft.duration / 60.0;
        pt.current_truncated = ft.current_truncated;
        pt.over_takeoff_limit =
            body_weight_newton / gravity + n * cell_weight_kg > max_takeoff_kg;
        out.push_back(pt);
    }
    return out;
}

}  // namespace geeplan
