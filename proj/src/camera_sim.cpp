#include "cyborg/camera_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cyborg {
namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

// Metres on the wall per degree of pan or tilt.
double meters_per_degree(const CameraPose& pose) {
    return visible_window({pose.distance_m, 0, 0, 0, 0, pose.zoom, pose.base_hfov_deg}).width_m / pose.hfov_deg();
}

std::uint8_t sample_bilinear(const RasterImage& img, double sx, double sy, int c) {
    const int w = img.width();
    const int h = img.height();
    sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
    const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
    return static_cast<std::uint8_t>(std::lround(top * (1.0 - fy) + bottom * fy));
}

}  // namespace

void validate_pose(const CameraPose& pose) {
    if (!(pose.distance_m > 0.0)) throw std::invalid_argument("camera distance must be positive");
    if (!(pose.zoom >= 1.0)) throw std::invalid_argument("zoom must be >= 1");
    if (!(pose.base_hfov_deg > 0.0 && pose.base_hfov_deg < 180.0))
        throw std::invalid_argument("base hfov must be in (0, 180) degrees");
}

WallWindow visible_window(const CameraPose& pose) {
    validate_pose(pose);
    WallWindow win;
    win.width_m = 2.0 * pose.distance_m * std::tan(deg2rad(pose.hfov_deg()) / 2.0);
    win.height_m = win.width_m * kSubImageHeight / kSubImageWidth;
    win.center_x_m = pose.aim_x_m + pose.pan_deg / pose.hfov_deg() * win.width_m;
    win.center_y_m = pose.aim_y_m - pose.tilt_deg / pose.vfov_deg() * win.height_m;
    return win;
}

SubImage acquire_subimage(const SceneModel& scene, const CameraPose& pose) {
    if (scene.raster.empty() || !(scene.wall_width_m > 0.0)) throw std::invalid_argument("scene is empty");
    const auto win = visible_window(pose);
    const double ppm = scene.pixels_per_meter();
    const double wall_w = scene.wall_width_m;
    const double wall_h = scene.wall_height_m();
    const double left = win.center_x_m - win.width_m / 2.0;
    const double top = win.center_y_m - win.height_m / 2.0;
    const double step_x = win.width_m / kSubImageWidth;
    const double step_y = win.height_m / kSubImageHeight;
    const int ch = scene.raster.channels();

    SubImage out{RasterImage(kSubImageWidth, kSubImageHeight, ch), 0.0};
    std::size_t off_wall = 0;
    for (int v = 0; v < kSubImageHeight; ++v) {
        const double wy = top + (v + 0.5) * step_y;
        for (int u = 0; u < kSubImageWidth; ++u) {
            const double wx = left + (u + 0.5) * step_x;
            if (wx < 0.0 || wy < 0.0 || wx >= wall_w || wy >= wall_h) {
                for (int c = 0; c < ch; ++c) out.image.at(u, v, c) = 128;
                ++off_wall;
                continue;
            }
            const double sx = wx * ppm - 0.5;
            const double sy = wy * ppm - 0.5;
            for (int c = 0; c < ch; ++c) out.image.at(u, v, c) = sample_bilinear(scene.raster, sx, sy, c);
        }
    }
    out.off_wall_fraction = static_cast<double>(off_wall) / out.image.pixel_count();
    return out;
}

MosaicProduct acquire_mosaic(const SceneModel& scene, const CameraPose& pose, int rows, int cols,
                             int downsample_f) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("mosaic grid must be at least 1x1");
    if (downsample_f < 1 || downsample_f > kSubImageHeight)
        throw std::invalid_argument("downsample factor out of range");
    validate_pose(pose);

    MosaicProduct product;
    product.pose = pose;
    product.downsample = downsample_f;
    product.grid = {rows, cols, kSubImageWidth / downsample_f, kSubImageHeight / downsample_f};

    const double hfov = pose.hfov_deg();
    const double vfov = pose.vfov_deg();
    std::vector<RasterImage> tiles;
    tiles.reserve(static_cast<std::size_t>(rows) * cols);
    double off_wall = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            TileAngles angles{pose.pan_deg + (c - (cols - 1) / 2.0) * hfov,
                              pose.tilt_deg + ((rows - 1) / 2.0 - r) * vfov};
            CameraPose tile_pose = pose;
            tile_pose.pan_deg = angles.pan_deg;
            tile_pose.tilt_deg = angles.tilt_deg;
            auto sub = acquire_subimage(scene, tile_pose);
            off_wall += sub.off_wall_fraction;
            tiles.push_back(downsample(sub.image, downsample_f, downsample_f));
            product.tile_angles.push_back(angles);
        }
    }
    product.off_wall_fraction = off_wall / static_cast<double>(tiles.size());
    product.mosaic = assemble_mosaic(tiles, product.grid);
    return product;
}

TileAngles pixel_to_pantilt(const MosaicProduct& product, double x, double y) {
    const auto& g = product.grid;
    if (!(x >= 0.0 && y >= 0.0 && x < g.width() && y < g.height()))
        throw std::invalid_argument("pixel outside mosaic");

    const int c = std::min(static_cast<int>(x / g.tile_w), g.cols - 1);
    const int r = std::min(static_cast<int>(y / g.tile_h), g.rows - 1);
    const auto& tile = product.tile_angles[static_cast<std::size_t>(r) * g.cols + c];
    const double hfov = product.pose.hfov_deg();
    const double vfov = product.pose.vfov_deg();
    const double lx = (x - c * g.tile_w) * product.downsample;
    const double ly = (y - r * g.tile_h) * product.downsample;
    return {tile.pan_deg - hfov / 2.0 + lx * hfov / kSubImageWidth,
            tile.tilt_deg + vfov / 2.0 - ly * vfov / kSubImageHeight};
}

std::array<double, 2> pantilt_to_pixel(const MosaicProduct& product, const TileAngles& angles) {
    const auto& g = product.grid;
    const double hfov = product.pose.hfov_deg();
    const double vfov = product.pose.vfov_deg();
    const auto& first = product.tile_angles.front();
    const double pan_left = first.pan_deg - hfov / 2.0;
    const double tilt_top = first.tilt_deg + vfov / 2.0;

    const int c = std::clamp(static_cast<int>(std::floor((angles.pan_deg - pan_left) / hfov)), 0, g.cols - 1);
    const int r = std::clamp(static_cast<int>(std::floor((tilt_top - angles.tilt_deg) / vfov)), 0, g.rows - 1);
    const auto& tile = product.tile_angles[static_cast<std::size_t>(r) * g.cols + c];
    const double lx = (angles.pan_deg - (tile.pan_deg - hfov / 2.0)) * kSubImageWidth / hfov;
    const double ly = ((tile.tilt_deg + vfov / 2.0) - angles.tilt_deg) * kSubImageHeight / vfov;
    return {c * g.tile_w + lx / product.downsample, r * g.tile_h + ly / product.downsample};
}

WallPoint pantilt_to_wall(const CameraPose& pose, const TileAngles& angles) {
    const double mpd = meters_per_degree(pose);
    return {pose.aim_x_m + angles.pan_deg * mpd, pose.aim_y_m - angles.tilt_deg * mpd};
}

TileAngles wall_to_pantilt(const CameraPose& pose, const WallPoint& p) {
    const double mpd = meters_per_degree(pose);
    return {(p.x_m - pose.aim_x_m) / mpd, (pose.aim_y_m - p.y_m) / mpd};
}

WallPoint pixel_to_wall(const MosaicProduct& product, double x, double y) {
    return pantilt_to_wall(product.pose, pixel_to_pantilt(product, x, y));
}

std::array<double, 2> wall_to_pixel(const MosaicProduct& product, const WallPoint& p) {
    return pantilt_to_pixel(product, wall_to_pantilt(product.pose, p));
}

SubImage acquire_chip(const SceneModel& scene, const MosaicProduct& product, const InterestPoint& point) {
    const auto angles = pixel_to_pantilt(product, point.x, point.y);
    CameraPose pose = product.pose;
    pose.pan_deg = angles.pan_deg;
    pose.tilt_deg = angles.tilt_deg;
    return acquire_subimage(scene, pose);
}

CameraPose approach(const CameraPose& pose, const WallPoint& target, double new_distance_m) {
    if (!(new_distance_m > 0.0) || !(new_distance_m < pose.distance_m))
        throw std::invalid_argument("approach distance must be positive and closer than the current station");
    CameraPose next = pose;
    next.aim_x_m = target.x_m;
    next.aim_y_m = target.y_m;
    next.pan_deg = 0.0;
    next.tilt_deg = 0.0;
    next.distance_m = new_distance_m;
    return next;
}

CoarseMask register_coarse_mask(const MosaicProduct& coarse, const std::array<UncommonMap, 3>& coarse_maps,
                                const MosaicProduct& fine, int m_thresh) {
    const auto& fg = fine.grid;
    const auto& cg = coarse.grid;
    for (const auto& m : coarse_maps) {
        if (m.width != cg.width() || m.height != cg.height())
            throw std::invalid_argument("coarse uncommon maps do not match the coarse mosaic");
    }

    CoarseMask out{std::vector<std::uint8_t>(static_cast<std::size_t>(fg.width()) * fg.height(), 0), false};
    const int limit = 3 * m_thresh;
    for (int y = 0; y < fg.height(); ++y) {
        for (int x = 0; x < fg.width(); ++x) {
            const auto wall = pixel_to_wall(fine, x + 0.5, y + 0.5);
            const auto [cx, cy] = wall_to_pixel(coarse, wall);
            if (cx < 0.0 || cy < 0.0 || cx >= cg.width() || cy >= cg.height()) continue;
            out.overlaps = true;
            const int px = static_cast<int>(cx);
            const int py = static_cast<int>(cy);
            const int sum = coarse_maps[0].at(px, py) + coarse_maps[1].at(px, py) + coarse_maps[2].at(px, py);
            if (sum < limit) out.masked[static_cast<std::size_t>(y) * fg.width() + x] = 1;
        }
    }
    return out;
}

}  // namespace cyborg
