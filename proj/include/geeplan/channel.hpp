#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "geeplan/geometry.hpp"

namespace geeplan {

constexpr double kSpeedOfLight = 3e8;  // m/s

/// Radio parameters. Defaults are the suburban air-to-ground set used in the
/// experiments; carrier frequency is configurable (2 GHz by default).
struct ChannelParams {
    double carrier_freq = 2e9;        // Hz
    double bandwidth_per_gn = 20e6;   // Hz
    double noise_dbm = -101.0;
    double tx_power_dbm = 23.0;
    double los_a = 4.88;              // elevation-angle sigmoid, degrees domain
    double los_b = 0.43;
    double eta_los_db = 0.2;
    double eta_nlos_db = 24.0;
    double beamwidth_half = std::numbers::pi / 4.0;  // rad
    double sidelobe_gain = 0.1;
    bool force_nlos_direct = false;   // model a blocked (NLoS) user

    double wavelength() const { return kSpeedOfLight / carrier_freq; }
    double tx_power_w() const { return std::pow(10.0, (tx_power_dbm - 30.0) / 10.0); }
    double noise_w() const { return std::pow(10.0, (noise_dbm - 30.0) / 10.0); }
    double main_lobe_gain() const { return 2.2846 / (beamwidth_half * beamwidth_half); }

    void validate() const {
        if (carrier_freq <= 0) throw std::invalid_argument("ChannelParams: frequency");
        if (eta_nlos_db < eta_los_db) throw std::invalid_argument("ChannelParams: eta order");
        if (beamwidth_half <= 0 || beamwidth_half >= std::numbers::pi / 2)
            throw std::invalid_argument("ChannelParams: beamwidth");
    }
};

struct MeanLoss {
    double loss_db = 0.0;
    double p_los = 0.0;
    bool validity_warning = false;
};

/// Directional antenna gain: main lobe inside the +-beamwidth cone in both
/// planes (boundary inclusive), sidelobe outside.
inline double antenna_gain(double beamwidth_half, double offaxis_az, double offaxis_el,
                           double sidelobe) {
    if (std::fabs(offaxis_az) <= beamwidth_half && std::fabs(offaxis_el) <= beamwidth_half)
        return 2.2846 / (beamwidth_half * beamwidth_half);
    return sidelobe;
}

namespace detail {
inline double log10p(double x) { return std::log10(x); }
}

/// Aerial-to-rooftop mean path loss (urban aerial model). Valid for platform
/// heights in (22.5, 100] m with the reflector mounted at 10 m.
inline MeanLoss pap_irs_loss(double d3d_m, double d2d_m, double h_p, double f_hz) {
    using detail::log10p;
    MeanLoss out;
    if (h_p <= 22.5 || h_p > 100.0) out.validity_warning = true;
    const double f_ghz = f_hz / 1e9;
    const double F = 20.0 * log10p(f_ghz);
    const double l1 = 30.9 + (22.25 - 0.5 * log10p(h_p)) * log10p(d3d_m) + F;
    const double l2 = std::max(l1, 32.4 + (43.2 - 7.6 * log10p(h_p)) * log10p(d3d_m) + F);
    const double p1 = 233.98 * log10p(h_p) - 0.95;
    const double d1 = std::max(294.05 * log10p(h_p) - 432.94, 18.0);
    double p_los = 1.0;
    if (d2d_m > d1)
        p_los = d1 / d2d_m + std::exp(-d2d_m / p1) * (1.0 - d1 / d2d_m);
    out.p_los = p_los;
    out.loss_db = p_los * l1 + (1.0 - p_los) * l2;
    return out;
}

/// Rooftop-to-ground mean path loss (two-slope street model with breakpoint
/// distance 18 f / c). 2D distances below 10 m are clamped with a warning.
inline MeanLoss irs_gn_loss(double d3d_m, double d2d_m, double f_hz) {
    using detail::log10p;
    MeanLoss out;
    if (d2d_m < 10.0) {
        out.validity_warning = true;
        d2d_m = 10.0;
        d3d_m = std::max(d3d_m, 10.0);
    }
    if (d2d_m > 5000.0) out.validity_warning = true;
    const double f_ghz = f_hz / 1e9;
    const double F = 20.0 * log10p(f_ghz);
    const double d_bp = 18.0 * f_hz / kSpeedOfLight;
    double l1;
    if (d2d_m <= d_bp)
        l1 = 32.4 + 21.0 * log10p(d3d_m) + F;
    else
        l1 = 32.4 + 40.0 * log10p(d3d_m) + F - 9.5 * log10p(d_bp * d_bp + 72.25);
    const double l2p = 35.3 * log10p(d3d_m) + 22.4 + 21.3 * log10p(f_ghz);
    const double l2 = std::max(l1, l2p);
    double p_los = 1.0;
    if (d2d_m > 18.0)
        p_los = 18.0 / d2d_m + std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
    out.p_los = p_los;
    out.loss_db = p_los * l1 + (1.0 - p_los) * l2;
    return out;
}

/// Air-to-ground mean path loss: free space plus excess terms blended by an
/// elevation-angle sigmoid LoS probability (angle in degrees).
inline MeanLoss pap_gn_loss(double d3d_m, double elevation_deg, const ChannelParams& cp) {
    using detail::log10p;
    if (d3d_m <= 0.0) throw std::domain_error("pap_gn_loss: zero distance");
    MeanLoss out;
    const double f_ghz = cp.carrier_freq / 1e9;
    const double fspl = 20.0 * log10p(d3d_m) + 20.0 * log10p(f_ghz) +
                        20.0 * log10p(4.0 * std::numbers::pi * 1e9 / kSpeedOfLight);
    double p_los =
        1.0 / (1.0 + cp.los_a * std::exp(-cp.los_b * (elevation_deg - cp.los_a)));
    if (cp.force_nlos_direct) p_los = 0.0;
    out.p_los = p_los;
    out.loss_db = p_los * (fspl + cp.eta_los_db) + (1.0 - p_los) * (fspl + cp.eta_nlos_db);
    return out;
}

/// Deterministic complex gain from a mean loss: amplitude from the loss and
/// antenna gain, phase from the exact propagation distance.
inline std::complex<double> complex_channel(double loss_db, double gain, double d3d_m,
                                            double lambda_m, bool visible) {
    if (lambda_m <= 0.0) throw std::domain_error("complex_channel: lambda must be > 0");
    const double mag = visible ? std::sqrt(gain * std::pow(10.0, -loss_db / 10.0)) : 0.0;
    const double phase = wrap_pi(-2.0 * std::numbers::pi * d3d_m / lambda_m);
    return std::polar(mag, phase);
}

}  // namespace geeplan
