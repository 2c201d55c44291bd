#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "geeplan/channel.hpp"
#include "geeplan/geometry.hpp"

namespace geeplan {

/// Amplitude-phase coupling constants of a reflecting element.
struct AmpPhaseParams {
    double mu_min = 0.2;
    double varrho = 0.43 * std::numbers::pi;  // rad
    double zeta = 1.6;

    void validate() const {
        if (mu_min < 0 || mu_min > 1 || varrho < 0 || zeta < 0)
            throw std::invalid_argument("AmpPhaseParams: out of range");
    }
};

/// Reflection amplitude as a function of the applied phase shift.
inline double amp_response(double theta, const AmpPhaseParams& p) {
    return (1.0 - p.mu_min) *
               std::pow((std::sin(theta - p.varrho) + 1.0) / 2.0, p.zeta) +
           p.mu_min;
}

/// A vertical uniform linear array of reflecting elements. The reference
/// element center is the top; element k sits (k-1)*elem_dz below it.
struct IrsModule {
    Vec3 ref_position;        // element-1 center, z = mounting height
    int n_elements = 16;
    double elem_dx = 0.0375;  // m
    double elem_dz = 0.0375;  // m
    Vec2 normal{1.0, 0.0};    // facing direction in the XY plane, unit

    Vec3 element_center(int k) const {
        return {ref_position.x, ref_position.y, ref_position.z - (k - 1) * elem_dz};
    }
    void validate() const {
        if (n_elements < 1) throw std::invalid_argument("IrsModule: K >= 1");
        if (std::fabs(normal.norm() - 1.0) > 1e-6)
            throw std::invalid_argument("IrsModule: normal must be unit length");
    }
};

/// Half-plane visibility: strictly in front of the surface; the surface plane
/// itself and everything behind it is not visible.
inline bool visible(const Vec3& observer, const IrsModule& irs) {
    const Vec2 off = observer.xy() - irs.ref_position.xy();
    return off.dot(irs.normal) > 0.0;
}

struct ReflectionConfig {
    std::vector<double> phases;      // rad, in [-pi, pi)
    std::vector<double> amplitudes;  // coupled, amp_response(phase)

    void set(size_t k, double theta, const AmpPhaseParams& p) {
        phases[k] = theta;
        amplitudes[k] = amp_response(theta, p);
    }
};

inline ReflectionConfig make_config(int k_elements, double theta0, const AmpPhaseParams& p) {
    ReflectionConfig c;
    c.phases.assign(k_elements, theta0);
    c.amplitudes.assign(k_elements, amp_response(theta0, p));
    return c;
}

/// Per-reflector cascade: element-wise incident and reflected channel gains.
struct CascadeChannel {
    std::vector<std::complex<double>> incident;   // transmitter -> element k
    std::vector<std::complex<double>> reflected;  // element k -> receiver
};

/// Combined complex field at the receiver for one direct gain plus the
/// reflected contributions of every cascade under the given configurations.
inline std::complex<double> combined_field(std::complex<double> direct,
                                           std::span<const CascadeChannel> cascades,
                                           std::span<const ReflectionConfig> configs) {
    if (cascades.size() != configs.size())
        throw std::invalid_argument("combined_field: cascade/config count mismatch");
    std::complex<double> total = direct;
    for (size_t i = 0; i < cascades.size(); ++i) {
        const auto& cc = cascades[i];
        const auto& cf = configs[i];
        if (cc.incident.size() != cc.reflected.size() ||
            cf.phases.size() != cc.incident.size())
            throw std::invalid_argument("combined_field: element count mismatch");
        for (size_t k = 0; k < cc.incident.size(); ++k) {
            total += std::conj(cc.reflected[k]) *
                     std::polar(cf.amplitudes[k], cf.phases[k]) * cc.incident[k];
        }
    }
    return total;
}

inline double received_snr(std::complex<double> direct,
                           std::span<const CascadeChannel> cascades,
                           std::span<const ReflectionConfig> configs, double tx_power_w,
                           double noise_w) {
    const double mag = std::abs(combined_field(direct, cascades, configs));
    return tx_power_w * mag * mag / noise_w;
}

inline double rate_bps(double snr, double bandwidth_hz) {
    if (snr < 0) throw std::domain_error("rate_bps: snr must be >= 0");
    return bandwidth_hz * std::log2(1.0 + snr);
}

struct AoResult {
    std::vector<ReflectionConfig> configs;
    double snr = 0.0;        // with true coupled amplitudes
    int sweeps = 0;          // of the best start
};

namespace detail {

// One coordinate-ascent run from a fixed starting phase assignment.
// Returns |field|^2 under the selection objective.
inline double ao_run(std::complex<double> direct,
                     std::span<const CascadeChannel> cascades,
                     std::span<const double> phase_set, const AmpPhaseParams& params,
                     bool amplitude_aware, std::vector<ReflectionConfig>& cfg,
                     int& sweeps_out) {
    std::vector<double> mu_sel(phase_set.size());
    for (size_t s = 0; s < phase_set.size(); ++s)
        mu_sel[s] = amplitude_aware ? amp_response(phase_set[s], params) : 1.0;

    // running total under the selection amplitudes
    auto eval_total = [&]() {
        std::complex<double> t = direct;
        for (size_t i = 0; i < cascades.size(); ++i)
            for (size_t k = 0; k < cascades[i].incident.size(); ++k) {
                const double mu = amplitude_aware ? cfg[i].amplitudes[k] : 1.0;
                t += std::conj(cascades[i].reflected[k]) *
                     std::polar(mu, cfg[i].phases[k]) * cascades[i].incident[k];
            }
        return t;
    };

    std::complex<double> total = eval_total();
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        bool changed = false;
        for (size_t i = 0; i < cascades.size(); ++i) {
            for (size_t k = 0; k < cascades[i].incident.size(); ++k) {
                const std::complex<double> chain =
                    std::conj(cascades[i].reflected[k]) * cascades[i].incident[k];
                const double mu_cur = amplitude_aware ? cfg[i].amplitudes[k] : 1.0;
                const std::complex<double> rest =
                    total - std::polar(mu_cur, cfg[i].phases[k]) * chain;
                double best = -1.0;
                size_t best_s = 0;
                for (size_t s = 0; s < phase_set.size(); ++s) {
                    const double v =
                        std::abs(rest + std::polar(mu_sel[s], phase_set[s]) * chain);
                    if (v > best) {
                        best = v;
                        best_s = s;
                    }
                }
                if (phase_set[best_s] != cfg[i].phases[k]) changed = true;
                cfg[i].set(k, phase_set[best_s], params);
                total = rest + std::polar(mu_sel[best_s], phase_set[best_s]) * chain;
            }
        }
        if (!changed) break;
    }
    sweeps_out = sweep + 1;
    const double m = std::abs(total);
    return m * m;
}

}  // namespace detail

/// Discrete per-element phase selection by coordinate ascent, restarted from
/// each uniform phase assignment plus a per-element aligned start; the best
/// run wins. Selection may ignore the amplitude coupling (amplitude_aware =
/// false) but the reported SNR always uses the true coupled amplitudes.
inline AoResult alternate_optimize(std::complex<double> direct,
                                   std::span<const CascadeChannel> cascades,
                                   std::span<const double> phase_set,
                                   const AmpPhaseParams& params, bool amplitude_aware,
                                   double tx_power_w, double noise_w) {
    if (phase_set.empty()) throw std::invalid_argument("alternate_optimize: empty phase set");
    AoResult out;

    std::vector<std::vector<ReflectionConfig>> starts;
    for (double th : phase_set) {
        std::vector<ReflectionConfig> cfg;
        for (const auto& c : cascades)
            cfg.push_back(make_config(static_cast<int>(c.incident.size()), th, params));
        starts.push_back(std::move(cfg));
    }
    {
        // aligned start: per element, the option maximizing its projection on
        // the direct path (or on the real axis if there is none)
        std::vector<ReflectionConfig> cfg;
        const std::complex<double> ref =
            std::abs(direct) > 0 ? direct / std::abs(direct) : std::complex<double>(1, 0);
        for (const auto& c : cascades) {
            auto rc = make_config(static_cast<int>(c.incident.size()), phase_set[0], params);
            for (size_t k = 0; k < c.incident.size(); ++k) {
                double best = -1e300;
                double best_th = phase_set[0];
                for (double th : phase_set) {
                    const double mu = amplitude_aware ? amp_response(th, params) : 1.0;
                    const std::complex<double> v = std::conj(c.reflected[k]) *
                                                   std::polar(mu, th) * c.incident[k];
                    const double proj = (v * std::conj(ref)).real();
                    if (proj > best) {
                        best = proj;
                        best_th = th;
                    }
                }
                rc.set(k, best_th, params);
            }
            cfg.push_back(std::move(rc));
        }
        starts.push_back(std::move(cfg));
    }

    double best_sel = -1.0;
    for (auto& cfg : starts) {
        int sweeps = 0;
        const double sel =
            detail::ao_run(direct, cascades, phase_set, params, amplitude_aware, cfg, sweeps);
        if (sel > best_sel) {
            best_sel = sel;
            out.configs = cfg;
            out.sweeps = sweeps;
        }
    }
    out.snr = received_snr(direct, cascades, out.configs, tx_power_w, noise_w);
    return out;
}

inline std::vector<double> default_phase_set() {
    return {0.0, std::numbers::pi / 2.0, -std::numbers::pi / 2.0, std::numbers::pi};
}

/// Element-wise cascade channel between a transmitter position, one
/// reflector, and a ground receiver. Visibility zeros are folded into the
/// element gains on both hops.
inline CascadeChannel build_cascade(const Vec3& pap, const IrsModule& irs, const Vec3& gn,
                                    const ChannelParams& cp) {
    CascadeChannel cc;
    const bool b_pr = visible(pap, irs);
    const bool b_rg = visible(gn, irs);
    const double lambda = cp.wavelength();
    const double d2_pr = dist2d(pap, irs.ref_position);
    const double d2_rg_ref = dist2d(gn, irs.ref_position);
    for (int k = 1; k <= irs.n_elements; ++k) {
        const Vec3 ek = irs.element_center(k);
        const double d3_pr = dist3d(pap, ek);
        const auto ml_pr = pap_irs_loss(d3_pr, d2_pr, pap.z, cp.carrier_freq);
        const double elev = std::atan2(std::fabs(ek.z - pap.z), d2_pr);
        const double g = antenna_gain(cp.beamwidth_half, 0.0, elev, cp.sidelobe_gain);
        cc.incident.push_back(complex_channel(ml_pr.loss_db, g, d3_pr, lambda, b_pr));

        const double d3_rg = dist3d(gn, ek);
        const auto ml_rg = irs_gn_loss(d3_rg, d2_rg_ref, cp.carrier_freq);
        cc.reflected.push_back(complex_channel(ml_rg.loss_db, 1.0, d3_rg, lambda, b_rg));
    }
    return cc;
}

/// Direct air-to-ground complex gain.
inline std::complex<double> build_direct(const Vec3& pap, const Vec3& gn,
                                         const ChannelParams& cp) {
    const double d3 = dist3d(pap, gn);
    const double d2 = dist2d(pap, gn);
    const double elev = std::atan2(pap.z - gn.z, d2);
    const auto ml = pap_gn_loss(d3, elev * 180.0 / std::numbers::pi, cp);
    const double g = antenna_gain(cp.beamwidth_half, 0.0, elev, cp.sidelobe_gain);
    return complex_channel(ml.loss_db, g, d3, cp.wavelength(), true);
}

}  // namespace geeplan
