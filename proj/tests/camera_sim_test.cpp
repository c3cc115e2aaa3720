#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cyborg/camera_sim.hpp"
#include "cyborg/synthetic.hpp"

using namespace cyborg;

namespace {

double tan_half_deg(double deg) { return std::tan(deg * std::numbers::pi / 360.0); }

SceneModel gradient_scene(int w, int h, double wall_w) {
    RasterImage img(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(x * 255 / (w - 1));
            img.at(x, y, 1) = static_cast<std::uint8_t>(y * 255 / (h - 1));
            img.at(x, y, 2) = static_cast<std::uint8_t>((x + y) % 256);
        }
    return {img, wall_w};
}

CameraPose centred(const SceneModel& s, double distance) {
    CameraPose p;
    p.distance_m = distance;
    p.aim_x_m = s.wall_width_m / 2;
    p.aim_y_m = s.wall_height_m() / 2;
    return p;
}

}  // namespace

TEST_CASE("visible window follows 2 D tan(hfov/2)") {
    CameraPose p;
    p.distance_m = 60;
    const double w60 = visible_window(p).width_m;
    CHECK(w60 == doctest::Approx(2 * 60 * tan_half_deg(45)));
    p.distance_m = 30;
    CHECK(visible_window(p).width_m == doctest::Approx(w60 / 2));
    p.distance_m = 60;
    p.zoom = 2;
    CHECK(visible_window(p).width_m == doctest::Approx(2 * 60 * tan_half_deg(22.5)));
    CHECK(visible_window(p).height_m == doctest::Approx(visible_window(p).width_m * 288 / 360));
    p.zoom = 0.5;
    CHECK_THROWS_AS(visible_window(p), std::invalid_argument);
    p.zoom = 1;
    p.distance_m = 0;
    CHECK_THROWS_AS(visible_window(p), std::invalid_argument);
}

TEST_CASE("full-frame view resamples the whole wall") {
    auto scene = gradient_scene(720, 576, 72.0);
    auto pose = centred(scene, 36.0 / tan_half_deg(45));
    auto sub = acquire_subimage(scene, pose);
    CHECK(sub.off_wall_fraction == 0.0);
    // Bilinear samples at 2x2 block centres equal the block mean up to rounding.
    auto reference = downsample(scene.raster, 2, 2);
    int worst = 0;
    for (std::size_t i = 0; i < reference.samples().size(); ++i)
        worst = std::max(worst, std::abs(reference.samples()[i] - sub.image.samples()[i]));
    CHECK(worst <= 1);
}

TEST_CASE("off-wall views are gray and flagged") {
    auto scene = gradient_scene(100, 80, 10.0);
    CameraPose p = centred(scene, 5.0);
    p.aim_x_m = 500.0;
    auto sub = acquire_subimage(scene, p);
    CHECK(sub.off_wall_fraction == 1.0);
    CHECK(sub.image == RasterImage(360, 288, 3, 128));

    p.aim_x_m = 0.0;  // left half off the wall
    auto half = acquire_subimage(scene, p);
    CHECK(half.off_wall_fraction == doctest::Approx(0.5));
}

TEST_CASE("a wall feature lands at the predicted sub-image pixel") {
    const double wall_w = 40.0;
    RasterImage img(800, 600, 3, 0);
    // 3x3 white square centred on scene pixel (503, 201) -> wall (25.175, 10.075) m.
    for (int y = 200; y < 203; ++y)
        for (int x = 502; x < 505; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = 255;
    SceneModel scene{img, wall_w};
    const double fx = 503.5 / scene.pixels_per_meter(), fy = 201.5 / scene.pixels_per_meter();

    CameraPose p;
    p.distance_m = 12.0;
    p.aim_x_m = 21.0;
    p.aim_y_m = 12.0;
    p.pan_deg = 3.0;
    p.tilt_deg = 2.0;
    auto win = visible_window(p);
    const double u = (fx - (win.center_x_m - win.width_m / 2)) / win.width_m * 360;
    const double v = (fy - (win.center_y_m - win.height_m / 2)) / win.height_m * 288;

    auto sub = acquire_subimage(scene, p).image;
    double sx = 0, sy = 0, sw = 0;
    for (int y = 0; y < 288; ++y)
        for (int x = 0; x < 360; ++x) {
            const double w = sub.at(x, y, 0);
            sx += w * (x + 0.5);
            sy += w * (y + 0.5);
            sw += w;
        }
    REQUIRE(sw > 0);
    CHECK(std::abs(sx / sw - u) < 1.0);
    CHECK(std::abs(sy / sw - v) < 1.0);
}

TEST_CASE("acquisition is deterministic") {
    auto scene = gradient_scene(300, 200, 30.0);
    auto p = centred(scene, 20.0);
    p.pan_deg = 7.3;
    CHECK(acquire_subimage(scene, p).image == acquire_subimage(scene, p).image);
}

TEST_CASE("mosaic geometry") {
    auto scene = gradient_scene(400, 300, 200.0);
    auto pose = centred(scene, 60.0);

    SUBCASE("3x4 at factor 8") {
        auto m = acquire_mosaic(scene, pose, 3, 4, 8);
        CHECK(m.grid.tile_w == 45);
        CHECK(m.grid.tile_h == 36);
        CHECK(m.mosaic.width() == 180);
        CHECK(m.mosaic.height() == 108);
        CHECK(m.tile_angles.size() == 12);
    }
    SUBCASE("1x1 at factor 1 is the sub-image") {
        auto m = acquire_mosaic(scene, pose, 1, 1, 1);
        CHECK(m.mosaic == acquire_subimage(scene, pose).image);
    }
    SUBCASE("field geometries") {
        auto a = acquire_mosaic(scene, pose, 3, 9, 8);
        CHECK(a.mosaic.width() == 9 * 45);
        CHECK(a.mosaic.height() == 3 * 36);
        auto b = acquire_mosaic(scene, pose, 11, 4, 6);
        CHECK(b.mosaic.width() == 4 * 60);
        CHECK(b.mosaic.height() == 11 * 48);
    }
    SUBCASE("invalid grid") {
        CHECK_THROWS_AS(acquire_mosaic(scene, pose, 0, 4, 8), std::invalid_argument);
        CHECK_THROWS_AS(acquire_mosaic(scene, pose, 3, 4, 0), std::invalid_argument);
    }
    SUBCASE("adjacent tiles abut on the wall") {
        auto m = acquire_mosaic(scene, pose, 3, 4, 8);
        const double wall_px = 1.0 / scene.pixels_per_meter();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) {
                CameraPose tp = pose;
                tp.pan_deg = m.tile_angles[r * 4 + c].pan_deg;
                tp.tilt_deg = m.tile_angles[r * 4 + c].tilt_deg;
                auto w = visible_window(tp);
                if (c + 1 < 4) {
                    CameraPose np = pose;
                    np.pan_deg = m.tile_angles[r * 4 + c + 1].pan_deg;
                    np.tilt_deg = m.tile_angles[r * 4 + c + 1].tilt_deg;
                    auto nw = visible_window(np);
                    CHECK(std::abs((w.center_x_m + w.width_m / 2) - (nw.center_x_m - nw.width_m / 2)) < wall_px);
                    CHECK(m.tile_angles[r * 4 + c + 1].pan_deg - m.tile_angles[r * 4 + c].pan_deg ==
                          doctest::Approx(pose.hfov_deg()));
                }
                if (r + 1 < 3) {
                    CameraPose np = pose;
                    np.pan_deg = m.tile_angles[(r + 1) * 4 + c].pan_deg;
                    np.tilt_deg = m.tile_angles[(r + 1) * 4 + c].tilt_deg;
                    auto nw = visible_window(np);
                    CHECK(std::abs((w.center_y_m + w.height_m / 2) - (nw.center_y_m - nw.height_m / 2)) < wall_px);
                }
            }
    }
}

TEST_CASE("pixel_to_pantilt") {
    auto scene = gradient_scene(400, 300, 200.0);
    auto pose = centred(scene, 60.0);
    pose.pan_deg = 4.0;
    pose.tilt_deg = -3.0;
    auto m = acquire_mosaic(scene, pose, 3, 4, 8);

    auto centre = pixel_to_pantilt(m, m.mosaic.width() / 2.0, m.mosaic.height() / 2.0);
    CHECK(centre.pan_deg == doctest::Approx(4.0));
    CHECK(centre.tilt_deg == doctest::Approx(-3.0));

    auto left = pixel_to_pantilt(m, 0.0, 50.0);
    CHECK(left.pan_deg == doctest::Approx(m.tile_angles[0].pan_deg - pose.hfov_deg() / 2));
    auto top = pixel_to_pantilt(m, 10.0, 0.0);
    CHECK(top.tilt_deg == doctest::Approx(m.tile_angles[0].tilt_deg + pose.vfov_deg() / 2));

    for (double x : {0.0, 17.0, 44.9, 45.0, 100.25, 179.0})
        for (double y : {0.0, 35.5, 36.0, 107.0}) {
            auto px = pantilt_to_pixel(m, pixel_to_pantilt(m, x, y));
            CHECK(std::abs(px[0] - x) < 1e-6);
            CHECK(std::abs(px[1] - y) < 1e-6);
            auto wall = pixel_to_wall(m, x, y);
            auto back = wall_to_pixel(m, wall);
            CHECK(std::abs(back[0] - x) < 1.0);
            CHECK(std::abs(back[1] - y) < 1.0);
        }

    CHECK_THROWS_AS(pixel_to_pantilt(m, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(pixel_to_pantilt(m, 0, 108), std::invalid_argument);
}

TEST_CASE("chips") {
    const double wall_w = 120.0;
    std::vector<synthetic::Ellipse> blob{{900, 400, 12, 12, synthetic::kDarkWet}};
    SceneModel scene{synthetic::painted_wall(1600, 900, synthetic::kTan, blob, 0.0, 1), wall_w};
    auto pose = centred(scene, 60.0);
    auto m = acquire_mosaic(scene, pose, 3, 4, 8);

    SUBCASE("centre point re-acquires the central view") {
        InterestPoint centre{m.mosaic.width() / 2, m.mosaic.height() / 2, 0, 1};
        CHECK(acquire_chip(scene, m, centre).image == acquire_subimage(scene, pose).image);
    }
    SUBCASE("chip of a planted blob contains the blob") {
        const WallPoint blob_wall{900 / scene.pixels_per_meter(), 400 / scene.pixels_per_meter()};
        auto px = wall_to_pixel(m, blob_wall);
        InterestPoint p{static_cast<int>(px[0]), static_cast<int>(px[1]), 0, 1};
        auto chip = acquire_chip(scene, m, p).image;
        // Project the blob centre into the chip window.
        auto angles = pixel_to_pantilt(m, p.x, p.y);
        CameraPose cp = pose;
        cp.pan_deg = angles.pan_deg;
        cp.tilt_deg = angles.tilt_deg;
        auto win = visible_window(cp);
        const int u = static_cast<int>((blob_wall.x_m - (win.center_x_m - win.width_m / 2)) / win.width_m * 360);
        const int v = static_cast<int>((blob_wall.y_m - (win.center_y_m - win.height_m / 2)) / win.height_m * 288);
        REQUIRE(u >= 0);
        REQUIRE(u < 360);
        CHECK(chip.at(u, v, 0) == synthetic::kDarkWet[0]);
        CHECK(std::abs(u - 180) <= 8);
        CHECK(std::abs(v - 144) <= 8);
    }
}

TEST_CASE("approach") {
    CameraPose p;
    p.distance_m = 300;
    p.pan_deg = 5;
    p.zoom = 2;
    auto a = approach(p, {10, 20}, 60);
    CHECK(a.distance_m == 60);
    CHECK(a.aim_x_m == 10);
    CHECK(a.aim_y_m == 20);
    CHECK(a.pan_deg == 0);
    CHECK(a.zoom == 2);
    auto b = approach(a, {11, 21}, 10);
    CHECK(b.distance_m == 10);
    CHECK_THROWS_AS(approach(b, {0, 0}, 10), std::invalid_argument);
    CHECK_THROWS_AS(approach(b, {0, 0}, 20), std::invalid_argument);

    // Halving the distance halves metres per image pixel.
    CameraPose far = p, near = p;
    far.distance_m = 60;
    near = approach(far, {0, 0}, 30);
    CHECK(visible_window(near).width_m / 360 == doctest::Approx(visible_window(far).width_m / 360 / 2));
    double last = 1e9;
    for (double d : {300.0, 120.0, 60.0, 10.0, 1.0}) {
        CameraPose q = p;
        q.distance_m = d;
        const double mpp = visible_window(q).width_m / 360;
        CHECK(mpp < last);
        last = mpp;
    }
}

TEST_CASE("coarse mask basics") {
    auto scene = gradient_scene(400, 300, 200.0);
    auto pose = centred(scene, 60.0);
    auto coarse = acquire_mosaic(scene, pose, 3, 4, 8);
    auto fine = acquire_mosaic(scene, approach(pose, {100, 75}, 30), 3, 4, 8);
    UncommonMap ones{coarse.mosaic.width(), coarse.mosaic.height(),
                     std::vector<std::uint8_t>(coarse.mosaic.pixel_count(), 1)};
    std::array<UncommonMap, 3> maps{ones, ones, ones};

    SUBCASE("m_thresh 0 masks nothing") {
        auto mask = register_coarse_mask(coarse, maps, fine, 0);
        CHECK(mask.overlaps);
        CHECK(std::count(mask.masked.begin(), mask.masked.end(), 1) == 0);
    }
    SUBCASE("all-common coarse view masks the overlap") {
        auto mask = register_coarse_mask(coarse, maps, fine, 2);
        CHECK(std::count(mask.masked.begin(), mask.masked.end(), 1) == static_cast<long>(mask.masked.size()));
    }
    SUBCASE("disjoint footprints") {
        auto far = acquire_mosaic(scene, approach(pose, {5000, 75}, 30), 3, 4, 8);
        auto mask = register_coarse_mask(coarse, maps, far, 2);
        CHECK_FALSE(mask.overlaps);
        CHECK(std::count(mask.masked.begin(), mask.masked.end(), 1) == 0);
    }
    SUBCASE("mismatched maps rejected") {
        std::array<UncommonMap, 3> bad{UncommonMap{1, 1, {1}}, ones, ones};
        CHECK_THROWS_AS(register_coarse_mask(coarse, bad, fine, 2), std::invalid_argument);
    }
}
