#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cyborg/imaging.hpp"
#include "cyborg/interest.hpp"

namespace cyborg {

inline constexpr int kSubImageWidth = 360;
inline constexpr int kSubImageHeight = 288;

/// A planar wall (cliff face) backed by a high-resolution RGB raster.
/// Wall coordinates are metres from the top-left corner, y pointing down.
struct SceneModel {
    RasterImage raster;
    double wall_width_m = 1.0;

    double pixels_per_meter() const { return raster.width() / wall_width_m; }
    double wall_height_m() const { return raster.height() / pixels_per_meter(); }
};

struct WallPoint {
    double x_m = 0.0;
    double y_m = 0.0;
};

/// Pan is positive to the right, tilt positive upward, both relative to the aim point.
struct CameraPose {
    double distance_m = 60.0;
    double aim_x_m = 0.0;
    double aim_y_m = 0.0;
    double pan_deg = 0.0;
    double tilt_deg = 0.0;
    double zoom = 1.0;
    double base_hfov_deg = 45.0;

    double hfov_deg() const { return base_hfov_deg / zoom; }
    double vfov_deg() const { return hfov_deg() * kSubImageHeight / kSubImageWidth; }
    bool operator==(const CameraPose&) const = default;
};

struct WallWindow {
    double center_x_m = 0.0;
    double center_y_m = 0.0;
    double width_m = 0.0;
    double height_m = 0.0;
};

struct SubImage {
    RasterImage image;
    double off_wall_fraction = 0.0;
};

struct TileAngles {
    double pan_deg = 0.0;
    double tilt_deg = 0.0;
};

struct MosaicProduct {
    RasterImage mosaic;
    MosaicGrid grid;
    CameraPose pose;   // pan/tilt of the grid centre
    int downsample = 1;
    std::vector<TileAngles> tile_angles;  // row-major
    double off_wall_fraction = 0.0;
};

void validate_pose(const CameraPose& pose);

// Visible width 2·D·tan(hfov/2); pan/tilt shift the window by angle/fov window extents.
WallWindow visible_window(const CameraPose& pose);

SubImage acquire_subimage(const SceneModel& scene, const CameraPose& pose);

MosaicProduct acquire_mosaic(const SceneModel& scene, const CameraPose& pose, int rows, int cols,
                             int downsample_f);

// Mosaic coordinates use the pixel-edge convention: (0,0) is the top-left corner.
TileAngles pixel_to_pantilt(const MosaicProduct& product, double x, double y);
std::array<double, 2> pantilt_to_pixel(const MosaicProduct& product, const TileAngles& angles);

WallPoint pantilt_to_wall(const CameraPose& pose, const TileAngles& angles);
TileAngles wall_to_pantilt(const CameraPose& pose, const WallPoint& p);

WallPoint pixel_to_wall(const MosaicProduct& product, double x, double y);
std::array<double, 2> wall_to_pixel(const MosaicProduct& product, const WallPoint& p);

SubImage acquire_chip(const SceneModel& scene, const MosaicProduct& product, const InterestPoint& point);

CameraPose approach(const CameraPose& pose, const WallPoint& target, double new_distance_m);

struct CoarseMask {
    std::vector<std::uint8_t> masked;  // 1 = suppressed, fine-mosaic row-major
    bool overlaps = true;
};

// A fine pixel is masked when the coarse pixel under it has summed uncommonness < 3·m_thresh.
CoarseMask register_coarse_mask(const MosaicProduct& coarse, const std::array<UncommonMap, 3>& coarse_maps,
                                const MosaicProduct& fine, int m_thresh);

}  // namespace cyborg
