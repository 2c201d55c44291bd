#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "geeplan/geometry.hpp"

namespace geeplan {

/// One covering pattern: u discs of radius R/lambda placed at the given
/// offsets (fractions of R) cover a disc of radius R.
struct PackingPattern {
    int u = 1;
    double lambda = 1.0;
    std::vector<Vec2> centers;
};

namespace detail {

inline std::vector<PackingPattern> build_pattern_table() {
    using std::numbers::pi;
    std::vector<PackingPattern> t;
    t.push_back({1, 1.0, {{0.0, 0.0}}});
    t.push_back({2, 1.0, {{0.0, 0.0}, {0.0, 0.0}}});

    PackingPattern p3{3, 2.0 / std::sqrt(3.0), {}};
    for (int k = 0; k < 3; ++k) {
        const double a = pi / 2.0 + k * 2.0 * pi / 3.0;
        p3.centers.push_back({0.5 * std::cos(a), 0.5 * std::sin(a)});
    }
    t.push_back(p3);

    t.push_back({4, std::sqrt(2.0), {{0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}}});

    // 5- and 6-disc optimal coverings (numerically refined maximin layouts)
    t.push_back({5, 1.641, {
        {-0.010684190901, +0.580735834183},
        {+0.377292708465, -0.507143074074},
        {-0.358556273234, -0.521234925465},
        {+0.745723109040, +0.268043796292},
        {-0.755853727057, +0.240679534172}}});
    t.push_back({6, 1.7988, {
        {-0.572546895383, +0.354955644319},
        {+0.572546895383, +0.354955644319},
        {+0.000000000000, +0.561784565963},
        {-0.690763009195, -0.462407705896},
        {+0.690763009195, -0.462407705896},
        {+0.000000000000, -0.520043106289}}});

    PackingPattern p7{7, 2.0, {{0.0, 0.0}}};
    for (int k = 0; k < 6; ++k) {
        const double a = k * pi / 3.0;
        p7.centers.push_back({std::sqrt(3.0) / 2.0 * std::cos(a),
                              std::sqrt(3.0) / 2.0 * std::sin(a)});
    }
    t.push_back(p7);

    t.push_back({8, 1.0 + 2.0 * std::cos(2.0 * pi / 7.0), {
        {+0.000000016017, +0.000000000000},
        {+0.801937765799, +0.000000000000},
        {+0.499999989051, +0.626980163610},
        {+0.499999989051, -0.626980163610},
        {-0.178447944819, +0.781831496588},
        {-0.178447944818, -0.781831496588},
        {-0.722520911659, +0.347947726160},
        {-0.722520911659, -0.347947726161}}});

    // 9 and 10: one central disc plus a ring, tight by construction
    for (int u : {9, 10}) {
        const int m = u - 1;
        const double lam = 1.0 + 2.0 * std::cos(2.0 * pi / m);
        const double d = 2.0 * std::cos(pi / m) / lam;
        PackingPattern p{u, lam, {{0.0, 0.0}}};
        for (int k = 0; k < m; ++k)
            p.centers.push_back({d * std::cos(2.0 * pi * k / m),
                                 d * std::sin(2.0 * pi * k / m)});
        t.push_back(p);
    }
    return t;
}

}  // namespace detail

inline const PackingPattern& packing_pattern(int u) {
    static const std::vector<PackingPattern> table = detail::build_pattern_table();
    if (u < 1 || u > 10) throw std::invalid_argument("packing_pattern: u in 1..10");
    return table[u - 1];
}

inline double pattern_lambda(int u) { return packing_pattern(u).lambda; }

/// Least-circles pattern estimate: argmin over u of u^(mu(u)) where mu(u) is
/// the fractional tier count log(ratio)/log(lambda(u)). Patterns with
/// lambda = 1 cannot make progress and are excluded for ratios above 1.
inline int optimal_pattern(double r_target, double r_small) {
    if (r_target <= 0 || r_small <= 0)
        throw std::invalid_argument("optimal_pattern: radii must be > 0");
    if (r_target <= r_small) return 1;
    const double lr = std::log2(r_target / r_small);
    int best_u = 3;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int u = 3; u <= 10; ++u) {
        const double mu = lr / std::log2(pattern_lambda(u));
        const double cost = std::pow(static_cast<double>(u), mu);
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_u = u;
        }
    }
    return best_u;
}

struct CoverSet {
    std::vector<Vec2> circle_centers;
    double radius_small = 0.0;  // final-tier disc radius
    int tiers = 0;
    std::vector<int> tier_patterns;
};

namespace detail {

struct TierPlan {
    long long count = 0;
    std::vector<int> seq;
};

// Minimal total circle count over mixed pattern sequences. The fractional
// estimate of optimal_pattern ignores the integer tier boundary, so the tier
// sequence itself is chosen by exact search (memoized, area-bound pruned).
inline TierPlan best_tier_plan(double ratio) {
    std::unordered_map<long long, TierPlan> memo;
    long long best_known = std::numeric_limits<long long>::max();

    // greedy upper bound: largest pattern every tier
    {
        long long c = 1;
        double r = ratio;
        while (r > 1.0 + 1e-12) {
            c *= 10;
            r /= pattern_lambda(10);
        }
        best_known = c;
    }

    std::function<TierPlan(double)> rec = [&](double r) -> TierPlan {
        if (r <= 1.0 + 1e-12) return {1, {}};
        const long long key = llround(r * 1e6);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        TierPlan best;
        best.count = std::numeric_limits<long long>::max();
        for (int u = 3; u <= 10; ++u) {
            const double nr = r / pattern_lambda(u);
            // area lower bound on the subproblem
            const double lb = nr <= 1.0 ? 1.0 : nr * nr;
            if (static_cast<double>(u) * lb >= static_cast<double>(best.count)) continue;
            TierPlan sub = rec(nr);
            if (u * sub.count < best.count) {
                best.count = u * sub.count;
                best.seq.assign(1, u);
                best.seq.insert(best.seq.end(), sub.seq.begin(), sub.seq.end());
            }
        }
        memo[key] = best;
        return best;
    };
    (void)best_known;
    return rec(ratio);
}

}  // namespace detail

/// Multi-tier packing: recursively replace every disc by the tier's pattern
/// until the disc radius drops to r_small, using the least-circles tier
/// sequence.
inline CoverSet multi_tier_pack(double r_geo, double r_small) {
    if (r_geo <= 0 || r_small <= 0)
        throw std::invalid_argument("multi_tier_pack: radii must be > 0");
    CoverSet out;
    if (r_geo <= r_small) {
        out.circle_centers = {{0.0, 0.0}};
        out.radius_small = r_geo;
        return out;
    }
    const auto plan = detail::best_tier_plan(r_geo / r_small);
    std::vector<std::pair<Vec2, double>> circles{{{0.0, 0.0}, r_geo}};
    for (int u : plan.seq) {
        const auto& pat = packing_pattern(u);
        std::vector<std::pair<Vec2, double>> next;
        next.reserve(circles.size() * pat.centers.size());
        for (const auto& [c, r] : circles)
            for (const auto& off : pat.centers)
                next.push_back({c + off * r, r / pat.lambda});
        circles = std::move(next);
    }
    out.tiers = static_cast<int>(plan.seq.size());
    out.tier_patterns = plan.seq;
    out.radius_small = circles.empty() ? r_geo : circles.front().second;
    for (const auto& [c, r] : circles) out.circle_centers.push_back(c);
    return out;
}

/// Total circle count of the fixed-pattern multi-level variant (the same
/// pattern applied at every tier).
inline long long fixed_multilevel_count(int u, double r_geo, double r_small) {
    long long c = 1;
    double r = r_geo;
    while (r > r_small * (1.0 + 1e-12)) {
        c *= u;
        r /= pattern_lambda(u);
    }
    return c;
}

/// Sampled coverage check: every sample of the radius-R disc must lie within
/// `radius` (closed disc, tiny relative tolerance) of some center.
inline bool verify_coverage(const std::vector<Vec2>& centers, double radius, double r_target,
                            int n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double tol2 = radius * radius * (1.0 + 1e-8);
    for (int i = 0; i < n_samples; ++i) {
        const double a = 2.0 * std::numbers::pi * u01(rng);
        const double r = r_target * std::sqrt(u01(rng));
        const Vec2 p{r * std::cos(a), r * std::sin(a)};
        bool covered = false;
        for (const auto& c : centers) {
            const Vec2 d = p - c;
            if (d.dot(d) <= tol2) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

/// Locations of interest: a greedy minimal subset of cover centers whose
/// radius-`membership_radius` discs (closed) jointly contain every node.
inline std::vector<Vec2> select_lois(const CoverSet& cover, const std::vector<Vec3>& gns,
                                     double membership_radius = 20.0) {
    std::vector<std::vector<int>> contains(cover.circle_centers.size());
    for (size_t c = 0; c < cover.circle_centers.size(); ++c)
        for (size_t g = 0; g < gns.size(); ++g)
            if ((gns[g].xy() - cover.circle_centers[c]).norm() <=
                membership_radius * (1.0 + 1e-12))
                contains[c].push_back(static_cast<int>(g));

    std::vector<bool> covered(gns.size(), false);
    size_t remaining = gns.size();
    std::vector<Vec2> lois;
    while (remaining > 0) {
        size_t best = 0, best_gain = 0;
        for (size_t c = 0; c < contains.size(); ++c) {
            size_t gain = 0;
            for (int g : contains[c])
                if (!covered[g]) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best_gain == 0)
            throw std::runtime_error("select_lois: a node lies outside the cover");
        for (int g : contains[best])
            if (!covered[g]) {
                covered[g] = true;
                --remaining;
            }
        lois.push_back(cover.circle_centers[best]);
    }
    return lois;
}

}  // namespace geeplan
