#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "pace/rink.hpp"
#include "test_util.hpp"

using namespace pace;

TEST_CASE("normalize keeps or flips both coordinates") {
    const RinkSpec nhl = nhl_rink();
    auto p = normalize(30, 10, +1, nhl);
    CHECK(p.x_north == 30.0);
    CHECK(p.y_east == 10.0);
    auto q = normalize(30, 10, -1, nhl);
    CHECK(q.x_north == -30.0);
    CHECK(q.y_east == -10.0);
}

TEST_CASE("normalize rejects points outside the rounded corners") {
    const RinkSpec nhl = nhl_rink();
    // Inside the bounding box but outside the 28 ft corner arc:
    // corner-frame offsets are (99-72, 41-14.5) = (27, 26.5), radius ~37.8.
    CHECK(std::hypot(99.0 - 72.0, 41.0 - 14.5) > nhl.corner_radius_ft);
    CHECK_THROWS_AS(normalize(-99, 41, +1, nhl), std::runtime_error);
    CHECK_THROWS(normalize(0, 45, +1, nhl));
    CHECK_NOTHROW(normalize(-99, 0, +1, nhl));
    CHECK_THROWS(normalize(0, 0, 2, nhl));
}

TEST_CASE("zone_of splits at the blue lines, boundary to NZ") {
    const RinkSpec nhl = nhl_rink();
    CHECK(zone_of({0, 0}, nhl) == Zone::NZ);
    CHECK(zone_of({-30, 0}, nhl) == Zone::DZ);
    CHECK(zone_of({25, 0}, nhl) == Zone::NZ);
    CHECK(zone_of({-25, 0}, nhl) == Zone::NZ);
    CHECK(zone_of({25.0001, 0}, nhl) == Zone::OZ);
}

TEST_CASE("normalize is an involution under sign flip; zones mirror") {
    const RinkSpec nhl = nhl_rink();
    std::mt19937_64 rng(11);
    auto u = [&](double a, double b) {
        return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
    };
    int tested = 0;
    while (tested < 500) {
        const double x = u(-100, 100), y = u(-42.5, 42.5);
        if (!nhl.contains(x, y)) continue;
        ++tested;
        for (int s : {+1, -1}) {
            auto p = normalize(x, y, s, nhl);
            auto back = normalize(p.x_north, p.y_east, s, nhl);
            CHECK(back.x_north == x);
            CHECK(back.y_east == y);
        }
        const Zone z = zone_of({x, y}, nhl);
        const Zone mz = zone_of({-x, -y}, nhl);
        if (z == Zone::DZ) CHECK(mz == Zone::OZ);
        if (z == Zone::OZ) CHECK(mz == Zone::DZ);
        if (z == Zone::NZ) CHECK(mz == Zone::NZ);
    }
}

TEST_CASE("in-rink area matches length*width - (4-pi)r^2") {
    for (const RinkSpec& spec : {nhl_rink(), shl_rink()}) {
        const double analytic = spec.length_ft * spec.width_ft -
                                (4.0 - 3.14159265358979323846) * spec.corner_radius_ft *
                                    spec.corner_radius_ft;
        const double measured = test_util::oracle::rink_area_from_predicate(spec);
        CHECK(std::fabs(measured - analytic) / analytic < 1e-9);
    }
}

TEST_CASE("presets") {
    const RinkSpec nhl = nhl_rink();
    CHECK(nhl.length_ft == 200.0);
    CHECK(nhl.width_ft == 85.0);
    CHECK(nhl.corner_radius_ft == 28.0);
    CHECK(nhl.blue_line_offset_ft == 25.0);
    CHECK(rink_preset("ahl") == nhl);

    const RinkSpec shl = shl_rink();
    CHECK(shl.width_ft == 98.5);
    CHECK(shl.blue_line_offset_ft == 29.0);
    // Blue-to-goal distance 6 ft shorter than the NHL's 64.
    CHECK((shl.half_length() - shl.goal_line_offset_ft) - shl.blue_line_offset_ft == 58.0);

    CHECK_THROWS_AS(rink_preset("khl"), std::invalid_argument);
}

TEST_CASE("rink config file round trip") {
    const std::string path = "test_rink_config.txt";
    {
        std::ofstream out(path);
        out << "# custom sheet\n";
        out << "length_ft = 180\n";
        out << "width_ft=90\n";
        out << "corner_radius_ft=20\n";
        out << "blue_line_offset_ft=22\n";
        out << "goal_line_offset_ft=10\n";
        out << "cell_size_ft=5\n";
    }
    const RinkSpec r = resolve_rink(path);
    CHECK(r.length_ft == 180.0);
    CHECK(r.width_ft == 90.0);
    CHECK(r.corner_radius_ft == 20.0);
    std::remove(path.c_str());

    CHECK_THROWS(load_rink_file("does_not_exist.txt"));
}
