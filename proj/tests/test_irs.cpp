#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "geeplan/irs.hpp"

using namespace geeplan;
using std::numbers::pi;

namespace {

std::vector<CascadeChannel> random_cascades(std::mt19937_64& rng, int n_irs, int k_max,
                                            double scale = 1.0) {
    std::uniform_real_distribution<double> mag(0.1, 1.0), ph(-pi, pi);
    std::uniform_int_distribution<int> kd(1, k_max);
    std::vector<CascadeChannel> out(n_irs);
    for (auto& cc : out) {
        const int k = kd(rng);
        for (int i = 0; i < k; ++i) {
            cc.incident.push_back(std::polar(scale * mag(rng), ph(rng)));
            cc.reflected.push_back(std::polar(mag(rng), ph(rng)));
        }
    }
    return out;
}

// exhaustive search over every phase assignment of a single cascade
double brute_force_best(std::complex<double> direct, const CascadeChannel& cc,
                        std::span<const double> set, const AmpPhaseParams& p,
                        bool amplitude_aware) {
    const size_t k = cc.incident.size();
    size_t total = 1;
    for (size_t i = 0; i < k; ++i) total *= set.size();
    double best = -1.0;
    std::vector<ReflectionConfig> cfg{make_config(static_cast<int>(k), set[0], p)};
    for (size_t code = 0; code < total; ++code) {
        size_t c = code;
        for (size_t i = 0; i < k; ++i) {
            cfg[0].set(i, set[c % set.size()], p);
            c /= set.size();
        }
        std::complex<double> t = direct;
        for (size_t i = 0; i < k; ++i) {
            const double mu = amplitude_aware ? cfg[0].amplitudes[i] : 1.0;
            t += std::conj(cc.reflected[i]) * std::polar(mu, cfg[0].phases[i]) * cc.incident[i];
        }
        best = std::max(best, std::norm(t));
    }
    return best;
}

}  // namespace

TEST_CASE("amplitude response endpoints") {
    AmpPhaseParams p;
    CHECK(amp_response(p.varrho + pi / 2.0, p) == Catch::Approx(1.0));
    CHECK(amp_response(p.varrho - pi / 2.0, p) == Catch::Approx(p.mu_min));
    AmpPhaseParams flat = p;
    flat.zeta = 0.0;
    for (double th = -pi; th < pi; th += 0.3) CHECK(amp_response(th, flat) == Catch::Approx(1.0));
    for (double th = -pi; th < pi; th += 0.1) {
        CHECK(amp_response(th, p) >= p.mu_min - 1e-12);
        CHECK(amp_response(th, p) <= 1.0 + 1e-12);
    }
}

TEST_CASE("half-plane visibility") {
    IrsModule irs;
    irs.ref_position = {10.0, 5.0, 10.0};
    irs.normal = {1.0, 0.0};
    CHECK(visible({20.0, 5.0, 100.0}, irs));
    CHECK_FALSE(visible({0.0, 5.0, 100.0}, irs));
    CHECK_FALSE(visible({10.0, 30.0, 100.0}, irs));  // in the surface plane
    CHECK_FALSE(visible({10.0, 5.0, 50.0}, irs));    // coincident in XY
}

TEST_CASE("received SNR basic identities") {
    const double ptx = 0.199526, noise = 7.943e-14;
    const std::complex<double> direct{3e-6, 4e-6};
    CHECK(received_snr(direct, {}, {}, ptx, noise) ==
          Catch::Approx(ptx * std::norm(direct) / noise));

    // single element, no direct path: SNR independent of the phase
    AmpPhaseParams unit{0.0, 0.0, 0.0};  // mu == 1 everywhere
    CascadeChannel cc;
    cc.incident = {std::polar(2e-4, 0.7)};
    cc.reflected = {std::polar(3e-4, -1.1)};
    std::vector<CascadeChannel> cs{cc};
    double first = -1.0;
    for (double th : {-2.0, 0.0, 1.2, 3.0}) {
        std::vector<ReflectionConfig> cfg{make_config(1, th, unit)};
        const double s = received_snr(0.0, cs, cfg, ptx, noise);
        if (first < 0) first = s;
        CHECK(s == Catch::Approx(first));
        CHECK(s == Catch::Approx(ptx * std::norm(cc.incident[0]) * std::norm(cc.reflected[0]) / noise));
    }

    // two equal-magnitude elements with opposite total phases cancel
    CascadeChannel two;
    two.incident = {std::polar(1e-4, 0.3), std::polar(1e-4, 0.3)};
    two.reflected = {std::polar(1e-4, 0.5), std::polar(1e-4, 0.5)};
    std::vector<CascadeChannel> cs2{two};
    std::vector<ReflectionConfig> cfg{make_config(2, 0.0, unit)};
    cfg[0].set(0, 0.0, unit);
    cfg[0].set(1, -pi, unit);
    CHECK(received_snr(0.0, cs2, cfg, ptx, noise) < 1e-20);

    std::vector<ReflectionConfig> bad{make_config(1, 0.0, unit)};
    CHECK_THROWS_AS(received_snr(0.0, cs2, bad, ptx, noise), std::invalid_argument);
}

TEST_CASE("rate identities") {
    CHECK(rate_bps(0.0, 20e6) == 0.0);
    CHECK(rate_bps(1.0, 20e6) == Catch::Approx(20e6));
    CHECK(rate_bps(3.0, 20e6) == Catch::Approx(40e6));
    CHECK_THROWS_AS(rate_bps(-0.1, 20e6), std::domain_error);
}

TEST_CASE("single dark element picks the amplitude peak when aware") {
    AmpPhaseParams p;
    const auto set = default_phase_set();
    CascadeChannel cc;
    cc.incident = {std::polar(1e-4, 0.9)};
    cc.reflected = {std::polar(1e-4, -0.4)};
    std::vector<CascadeChannel> cs{cc};
    const auto res = alternate_optimize(0.0, cs, set, p, true, 1.0, 1.0);
    double best_mu = -1.0, best_th = 0.0;
    for (double th : set)
        if (amp_response(th, p) > best_mu) {
            best_mu = amp_response(th, p);
            best_th = th;
        }
    CHECK(res.configs[0].phases[0] == best_th);
}

TEST_CASE("coordinate ascent matches brute force on small instances") {
    AmpPhaseParams p;
    const auto set = default_phase_set();
    std::mt19937_64 rng(2024);
    for (int inst = 0; inst < 60; ++inst) {
        auto cs = random_cascades(rng, 1, 3);
        std::uniform_real_distribution<double> mag(0.0, 0.8), ph(-pi, pi);
        const std::complex<double> direct = std::polar(mag(rng), ph(rng));
        for (bool aware : {true, false}) {
            const auto res = alternate_optimize(direct, cs, set, p, aware, 1.0, 1.0);
            const double bf = brute_force_best(direct, cs[0], set, p, aware);
            double got;
            if (aware) {
                got = res.snr;  // ptx == noise == 1
            } else {
                std::vector<ReflectionConfig> blind = res.configs;
                for (auto& c : blind)
                    for (auto& a : c.amplitudes) a = 1.0;
                got = received_snr(direct, cs, blind, 1.0, 1.0);
            }
            CHECK(got == Catch::Approx(bf).epsilon(1e-9));
        }
    }
}

TEST_CASE("amplitude-aware selection never loses to blind selection") {
    AmpPhaseParams p;
    const auto set = default_phase_set();
    std::mt19937_64 rng(7);
    int wins = 0;
    for (int inst = 0; inst < 100; ++inst) {
        auto cs = random_cascades(rng, 2, 6);
        std::uniform_real_distribution<double> mag(0.0, 0.5), ph(-pi, pi);
        const std::complex<double> direct = std::polar(mag(rng), ph(rng));
        const auto aware = alternate_optimize(direct, cs, set, p, true, 1.0, 1.0);
        const auto blind = alternate_optimize(direct, cs, set, p, false, 1.0, 1.0);
        if (aware.snr >= blind.snr * (1.0 - 1e-12)) ++wins;
    }
    CHECK(wins >= 95);
}

TEST_CASE("AO terminates quickly and is order invariant") {
    AmpPhaseParams p;
    const auto set = default_phase_set();
    std::mt19937_64 rng(99);
    for (int inst = 0; inst < 20; ++inst) {
        auto cs = random_cascades(rng, 3, 8);
        const auto res = alternate_optimize(0.0, cs, set, p, true, 1.0, 1.0);
        CHECK(res.sweeps <= 100);
        std::vector<CascadeChannel> rev(cs.rbegin(), cs.rend());
        const auto res2 = alternate_optimize(0.0, rev, set, p, true, 1.0, 1.0);
        CHECK(res2.snr == Catch::Approx(res.snr).epsilon(1e-9));
    }
}

TEST_CASE("continuous aligned phases reach the coherent upper bound") {
    AmpPhaseParams unit{0.0, 0.0, 0.0};
    std::mt19937_64 rng(5);
    for (int inst = 0; inst < 20; ++inst) {
        auto cs = random_cascades(rng, 2, 4);
        std::uniform_real_distribution<double> mag(0.1, 1.0), ph(-pi, pi);
        const std::complex<double> direct = std::polar(mag(rng), ph(rng));
        double bound = std::abs(direct);
        std::vector<ReflectionConfig> cfg;
        for (const auto& cc : cs) {
            auto c = make_config(static_cast<int>(cc.incident.size()), 0.0, unit);
            for (size_t k = 0; k < cc.incident.size(); ++k) {
                const std::complex<double> chain =
                    std::conj(cc.reflected[k]) * cc.incident[k];
                // choose the phase so that the cascade term aligns with direct
                c.set(k, wrap_pi(std::arg(direct) - std::arg(chain)), unit);
                bound += std::abs(chain);
            }
            cfg.push_back(std::move(c));
        }
        const double got = std::abs(combined_field(direct, cs, cfg));
        CHECK(got == Catch::Approx(bound).epsilon(1e-9));
    }
}
