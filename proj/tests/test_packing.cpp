#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "geeplan/packing.hpp"

using namespace geeplan;

TEST_CASE("enlargement factors") {
    CHECK(pattern_lambda(1) == 1.0);
    CHECK(pattern_lambda(2) == 1.0);
    CHECK(pattern_lambda(3) == Catch::Approx(2.0 / std::sqrt(3.0)));
    CHECK(pattern_lambda(4) == Catch::Approx(std::sqrt(2.0)));
    CHECK(pattern_lambda(5) == Catch::Approx(1.641));
    CHECK(pattern_lambda(6) == Catch::Approx(1.7988));
    CHECK(pattern_lambda(7) == 2.0);
    CHECK(pattern_lambda(9) == Catch::Approx(1.0 + std::sqrt(2.0)));
    CHECK(pattern_lambda(10) == Catch::Approx(2.532088886));
    CHECK_THROWS_AS(packing_pattern(11), std::invalid_argument);
}

TEST_CASE("every pattern covers the unit disc at its own ratio") {
    for (int u = 1; u <= 10; ++u) {
        const auto& p = packing_pattern(u);
        REQUIRE(static_cast<int>(p.centers.size()) == u);
        std::vector<Vec2> centers = p.centers;
        CHECK(verify_coverage(centers, 1.0 / p.lambda, 1.0, 10000, 1234 + u));
    }
}

TEST_CASE("pattern choice by fractional tier cost") {
    CHECK(optimal_pattern(10.0, 10.0) == 1);
    CHECK(optimal_pattern(5.0, 10.0) == 1);
    // ratio 3: exhaustive evaluation of u^(mu(u)) picks u = 10
    {
        double best = 1e18;
        int ubest = 0;
        for (int u = 3; u <= 10; ++u) {
            const double mu = std::log2(3.0) / std::log2(pattern_lambda(u));
            const double c = std::pow(u, mu);
            if (c < best) {
                best = c;
                ubest = u;
            }
        }
        CHECK(ubest == 10);
        CHECK(optimal_pattern(30.0, 10.0) == 10);
    }
    // ratio exactly lambda(7) = 2: mu(7) = 1, cost 7
    const double mu7 = std::log2(2.0) / std::log2(pattern_lambda(7));
    CHECK(mu7 == Catch::Approx(1.0));
    CHECK(std::pow(7.0, mu7) == Catch::Approx(7.0));
}

TEST_CASE("multi-tier pack covers and needs no more circles than fixed variants") {
    // experiment geometry: 60 m region, 20 m discs
    const auto cover = multi_tier_pack(60.0, 20.0);
    CHECK(cover.radius_small <= 20.0 * (1.0 + 1e-9));
    CHECK(verify_coverage(cover.circle_centers, cover.radius_small, 60.0, 10000, 77));
    CHECK(verify_coverage(cover.circle_centers, 20.0, 60.0, 10000, 78));

    for (int ratio = 2; ratio <= 10; ++ratio) {
        const auto cs = multi_tier_pack(100.0 * ratio, 100.0);
        const auto n = static_cast<long long>(cs.circle_centers.size());
        CHECK(n <= fixed_multilevel_count(5, 100.0 * ratio, 100.0));
        CHECK(n <= fixed_multilevel_count(7, 100.0 * ratio, 100.0));
        CHECK(n <= fixed_multilevel_count(10, 100.0 * ratio, 100.0));
        CHECK(verify_coverage(cs.circle_centers, cs.radius_small, 100.0 * ratio, 10000,
                              1000 + ratio));
    }
}

TEST_CASE("single circle suffices at ratio one") {
    const auto cover = multi_tier_pack(15.0, 20.0);
    REQUIRE(cover.circle_centers.size() == 1);
    CHECK(cover.circle_centers[0].norm() == 0.0);
    CHECK(cover.tiers == 0);
}

TEST_CASE("LoI selection") {
    const auto cover = multi_tier_pack(60.0, 20.0);
    SECTION("all nodes at the center collapse to one LoI") {
        std::vector<Vec3> gns(6, Vec3{0.0, 0.0, 0.0});
        CHECK(select_lois(cover, gns).size() == 1);
    }
    SECTION("boundary membership is closed") {
        // place a node exactly on a circle boundary
        const Vec2 c = cover.circle_centers.front();
        std::vector<Vec3> gns{{c.x + 20.0, c.y, 0.0}};
        CHECK_FALSE(select_lois(cover, gns, 20.0).empty());
    }
    SECTION("node outside every circle is a contract error") {
        std::vector<Vec3> gns{{500.0, 500.0, 0.0}};
        CHECK_THROWS_AS(select_lois(cover, gns), std::runtime_error);
    }
    SECTION("six uniform nodes in the 60 m disc need three LoIs") {
        const auto gns = sample_disc(6, 60.0, 8);  // default experiment seed
        const auto lois = select_lois(cover, gns);
        CHECK(lois.size() == 3);
        for (const auto& g : gns) {
            bool ok = false;
            for (const auto& l : lois)
                if ((g.xy() - l).norm() <= 20.0 * (1.0 + 1e-12)) ok = true;
            CHECK(ok);
        }
    }
}
