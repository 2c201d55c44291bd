#pragma once

#include <cmath>
#include <stdexcept>

namespace geeplan {

/// Rotary-wing platform parameters. Defaults describe the reference quadrotor
/// used throughout the experiments.
struct UavParams {
    double weight_total = 24.5;       // N
    int n_rotors = 4;
    double v_tip = 102.0;             // m/s, rotor tip speed
    double fuselage_area = 0.038;     // m^2
    double drag_coeff = 0.9;
    double rotor_disc_area = 0.06;    // m^2, per rotor
    double profile_drag_coeff = 0.002;
    double rotor_solidity = 0.05;
    double altitude = 100.0;          // m

    void validate() const {
        if (weight_total <= 0 || n_rotors <= 0 || v_tip <= 0 || fuselage_area <= 0 ||
            drag_coeff <= 0 || rotor_disc_area <= 0 || profile_drag_coeff <= 0 ||
            rotor_solidity <= 0)
            throw std::invalid_argument("UavParams: all parameters must be strictly positive");
    }
};

struct PowerBreakdown {
    double blade = 0.0;     // W
    double fuselage = 0.0;  // W
    double induced = 0.0;   // W
    double total = 0.0;     // W
};

/// Relative air density at altitude h (dimensionless, 1 at sea level).
inline double air_density(double altitude_m) {
    constexpr double k = 2.2558e-5;
    if (altitude_m < 0.0 || altitude_m >= 1.0 / k)
        throw std::domain_error("air_density: altitude out of model range");
    return std::pow(1.0 - k * altitude_m, 4.2577);
}

/// Propulsion power for level flight at horizontal speed v.
/// Hover is v = 0. The three terms are blade profile drag, fuselage drag and
/// induced (lift) power.
inline PowerBreakdown propulsion_power(const UavParams& p, double v) {
    if (v < 0.0) throw std::domain_error("propulsion_power: v must be >= 0");
    const double rho = air_density(p.altitude);
    const double p_b =
        p.profile_drag_coeff / 8.0 * rho * p.rotor_solidity * p.rotor_disc_area *
        p.v_tip * p.v_tip * p.v_tip;

    PowerBreakdown out;
    out.blade = p.n_rotors * p_b * (1.0 + 3.0 * v * v / (p.v_tip * p.v_tip));
    out.fuselage = 0.5 * p.drag_coeff * p.fuselage_area * rho * v * v * v;
    const double w = p.weight_total;
    const double t = w * w / (4.0 * p.n_rotors * p.n_rotors * rho * rho *
                              p.rotor_disc_area * p.rotor_disc_area);
    out.induced = w * std::sqrt(std::sqrt(t + v * v * v * v / 4.0) - v * v / 2.0);
    out.total = out.blade + out.fuselage + out.induced;
    return out;
}

/// Energy spent traversing a segment of length seg_len in time t at constant
/// speed seg_len / t.
inline double segment_energy(const UavParams& p, double seg_len, double t) {
    if (t <= 0.0) throw std::domain_error("segment_energy: t must be > 0");
    if (seg_len < 0.0) throw std::domain_error("segment_energy: seg_len must be >= 0");
    return t * propulsion_power(p, seg_len / t).total;
}

}  // namespace geeplan
