#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geeplan/geometry.hpp"
#include "geeplan/irs.hpp"
#include "geeplan/packing.hpp"

namespace geeplan {

struct FlightPath {
    std::vector<Vec3> waypoints;     // first = p_I, last = p_F, z = h_p
    std::vector<double> seg_len;     // waypoints.size() - 1, each in (0, delta]
    std::vector<int> loi_order;      // visit order into the LoI list
    double delta = 1.0;

    int segments() const { return static_cast<int>(seg_len.size()); }
    double length() const { return std::accumulate(seg_len.begin(), seg_len.end(), 0.0); }
    Vec3 segment_midpoint(int m) const {
        return (waypoints[m] + waypoints[m + 1]) * 0.5;
    }
};

namespace detail {

inline double tour_length(const std::vector<Vec2>& pts, const Vec2& a, const Vec2& b,
                          const std::vector<int>& order) {
    double len = 0.0;
    Vec2 cur = a;
    for (int i : order) {
        len += (pts[i] - cur).norm();
        cur = pts[i];
    }
    return len + (b - cur).norm();
}

inline std::vector<int> exact_order(const std::vector<Vec2>& pts, const Vec2& a, const Vec2& b) {
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> best = order;
    double best_len = tour_length(pts, a, b, order);
    while (std::next_permutation(order.begin(), order.end())) {
        const double len = tour_length(pts, a, b, order);
        if (len < best_len) {
            best_len = len;
            best = order;
        }
    }
    return best;
}

inline std::vector<int> heuristic_order(const std::vector<Vec2>& pts, const Vec2& a,
                                        const Vec2& b) {
    // nearest neighbour from the start point
    std::vector<bool> used(pts.size(), false);
    std::vector<int> order;
    Vec2 cur = a;
    for (size_t step = 0; step < pts.size(); ++step) {
        int best = -1;
        double bd = 1e300;
        for (size_t i = 0; i < pts.size(); ++i) {
            if (used[i]) continue;
            const double d = (pts[i] - cur).norm();
            if (d < bd) {
                bd = d;
                best = static_cast<int>(i);
            }
        }
        used[best] = true;
        order.push_back(best);
        cur = pts[best];
    }
    // 2-opt on the open tour
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t i = 0; i + 1 < order.size(); ++i) {
            for (size_t j = i + 1; j < order.size(); ++j) {
                std::vector<int> cand = order;
                std::reverse(cand.begin() + i, cand.begin() + j + 1);
                if (tour_length(pts, a, b, cand) + 1e-12 < tour_length(pts, a, b, order)) {
                    order = cand;
                    improved = true;
                }
            }
        }
    }
    return order;
}

}  // namespace detail

/// Shortest route through the LoIs from p_start to p_end (exact for up to 10
/// stops, nearest-neighbour + 2-opt beyond), each leg discretized into
/// segments no longer than delta.
inline FlightPath build_path(const std::vector<Vec2>& lois, const Vec2& p_start,
                             const Vec2& p_end, double delta, double h_p) {
    if (delta <= 0) throw std::invalid_argument("build_path: delta must be > 0");
    FlightPath fp;
    fp.delta = delta;
    fp.loi_order = lois.size() <= 10 ? detail::exact_order(lois, p_start, p_end)
                                     : detail::heuristic_order(lois, p_start, p_end);
    std::vector<Vec2> stops{p_start};
    for (int i : fp.loi_order) stops.push_back(lois[i]);
    stops.push_back(p_end);

    fp.waypoints.push_back({p_start.x, p_start.y, h_p});
    for (size_t s = 0; s + 1 < stops.size(); ++s) {
        const Vec2 a = stops[s], b = stops[s + 1];
        const double len = (b - a).norm();
        if (len < 1e-12) continue;
        const int n = static_cast<int>(std::ceil(len / delta - 1e-12));
        for (int k = 1; k <= n; ++k) {
            const Vec2 p = a + (b - a) * (static_cast<double>(k) / n);
            fp.waypoints.push_back({p.x, p.y, h_p});
            fp.seg_len.push_back(len / n);
        }
    }
    if (fp.waypoints.size() < 2) {  // degenerate: start == end, no stops
        fp.waypoints.push_back({p_end.x, p_end.y, h_p});
        fp.seg_len.push_back(0.0);
    }
    return fp;
}

struct IrsPlacementRules {
    double height = 10.0;      // m, reference element mount
    double gn_offset = 20.0;   // m, 2D distance from the anchor node
    int n_elements = 16;
    double elem_dx = 0.0375;
    double elem_dz = 0.0375;
};

/// One reflector per LoI, placed gn_offset meters from the node nearest the
/// LoI center, pushed away from the local node centroid and facing it.
inline std::vector<IrsModule> place_irs(const std::vector<Vec2>& lois,
                                        const std::vector<Vec3>& gns,
                                        const IrsPlacementRules& rules,
                                        double membership_radius = 20.0) {
    std::vector<IrsModule> out;
    if (gns.empty()) return out;
    for (const auto& loi : lois) {
        std::vector<const Vec3*> mine;
        for (const auto& g : gns)
            if ((g.xy() - loi).norm() <= membership_radius * (1.0 + 1e-12))
                mine.push_back(&g);
        if (mine.empty()) continue;
        Vec2 centroid{0.0, 0.0};
        for (auto* g : mine) centroid = centroid + g->xy();
        centroid = centroid * (1.0 / static_cast<double>(mine.size()));
        const Vec3* anchor = *std::min_element(
            mine.begin(), mine.end(), [&](const Vec3* a, const Vec3* b) {
                return (a->xy() - loi).norm() < (b->xy() - loi).norm();
            });
        Vec2 dir = anchor->xy() - centroid;
        if (dir.norm() < 1e-9) dir = {1.0, 0.0};
        dir = dir * (1.0 / dir.norm());

        IrsModule irs;
        irs.ref_position = {anchor->x + rules.gn_offset * dir.x,
                            anchor->y + rules.gn_offset * dir.y, rules.height};
        irs.normal = dir * -1.0;  // face the centroid
        irs.n_elements = rules.n_elements;
        irs.elem_dx = rules.elem_dx;
        irs.elem_dz = rules.elem_dz;
        out.push_back(irs);
    }
    return out;
}

}  // namespace geeplan
