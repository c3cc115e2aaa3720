#include "cyborg/session.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>

#include "cyborg/raster_io.hpp"

namespace cyborg {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Palette index = area rank of the class (1 = largest), 0 = unsegmented.
constexpr std::array<Rgb, 9> kSegmentPalette{{
    {0, 0, 0},        // unsegmented
    {255, 0, 0},      // red
    {0, 0, 255},      // blue
    {128, 0, 128},    // purple
    {0, 255, 0},      // green
    {0, 255, 255},    // cyan
    {255, 255, 0},    // yellow
    {255, 255, 255},  // white
    {255, 165, 0},    // orange
}};

constexpr double kUncommonScale = 255.0 / kMaxClasses;
constexpr double kInterestRawScale = 255.0 / (3 * kMaxClasses);

RasterImage weights_to_gray(const UncommonMap& m, double scale) {
    RasterImage img(m.width, m.height, 1);
    auto out = img.samples();
    for (std::size_t p = 0; p < m.weights.size(); ++p)
        out[p] = static_cast<std::uint8_t>(std::min(255L, std::lround(m.weights[p] * scale)));
    return img;
}

RasterImage values_to_gray(const InterestMap& m, double scale) {
    RasterImage img(m.width, m.height, 1);
    auto out = img.samples();
    for (std::size_t p = 0; p < m.values.size(); ++p)
        out[p] = static_cast<std::uint8_t>(std::clamp(std::lround(m.values[p] * scale), 0L, 255L));
    return img;
}

RasterImage weights_to_indices(const UncommonMap& m) {
    return RasterImage(m.width, m.height, 1, m.weights);
}

double blur_scale(const InterestMap& m) {
    const double mx = m.values.empty() ? 0.0 : *std::max_element(m.values.begin(), m.values.end());
    return mx > 0.0 ? 255.0 / mx : 0.0;
}

json pose_json(const CameraPose& p) {
    return {{"distance_m", p.distance_m}, {"aim_x_m", p.aim_x_m}, {"aim_y_m", p.aim_y_m},
            {"pan_deg", p.pan_deg},       {"tilt_deg", p.tilt_deg}, {"zoom", p.zoom},
            {"base_hfov_deg", p.base_hfov_deg}};
}

json step_params_json(const StepRecord& step) {
    json j;
    j["step"] = step.index;
    j["config"] = step.config;
    j["mosaic"] = {{"width", step.mosaic.width()}, {"height", step.mosaic.height()}};
    if (step.product) {
        const auto& p = *step.product;
        j["pose"] = pose_json(p.pose);
        j["grid"] = {{"rows", p.grid.rows}, {"cols", p.grid.cols}, {"tile_w", p.grid.tile_w},
                     {"tile_h", p.grid.tile_h}};
        j["downsample"] = p.downsample;
        j["off_wall_fraction"] = p.off_wall_fraction;
        auto angles = json::array();
        for (const auto& a : p.tile_angles) angles.push_back({{"pan_deg", a.pan_deg}, {"tilt_deg", a.tilt_deg}});
        j["tile_angles"] = angles;
    } else {
        j["pose"] = nullptr;
    }
    j["png_scales"] = {{"uncommon", kUncommonScale},
                       {"interest_raw", kInterestRawScale},
                       {"interest_blur", blur_scale(step.chain.interest_blur)}};
    j["regions_per_plane"] = {step.chain.segmentation[0].regions.size(), step.chain.segmentation[1].regions.size(),
                              step.chain.segmentation[2].regions.size()};
    j["mask_applied"] = step.chain.mask.has_value();
    auto wall = json::array();
    for (const auto& w : step.wall_points) wall.push_back({{"x_m", w.x_m}, {"y_m", w.y_m}});
    j["wall_points"] = wall;
    return j;
}

std::vector<std::uint8_t> to_bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::map<std::string, std::vector<std::uint8_t>> render_step_files(const StepRecord& step) {
    const auto& c = step.chain;
    std::map<std::string, std::vector<std::uint8_t>> files;
    files["mosaic.png"] = encode_png(step.mosaic);
    const char* planes[] = {"h", "s", "i"};
    for (int p = 0; p < 3; ++p) {
        files[std::string("seg_") + planes[p] + ".png"] =
            encode_indexed_png(weights_to_indices(c.uncommon[p]), kSegmentPalette);
        files[std::string("uncommon_") + planes[p] + ".png"] = encode_png(weights_to_gray(c.uncommon[p], kUncommonScale));
    }
    files["interest_raw.png"] = encode_png(values_to_gray(c.interest_raw, kInterestRawScale));
    files["interest_blur.png"] = encode_png(values_to_gray(c.interest_blur, blur_scale(c.interest_blur)));
    if (c.mask) {
        RasterImage m(step.mosaic.width(), step.mosaic.height(), 1);
        auto out = m.samples();
        for (std::size_t p = 0; p < c.mask->size(); ++p) out[p] = (*c.mask)[p] ? 255 : 0;
        files["mask.png"] = encode_png(m);
    }
    for (std::size_t k = 0; k < step.chips.size(); ++k)
        files["chip_" + std::to_string(k + 1) + ".png"] = encode_png(step.chips[k]);
    files["points.json"] = to_bytes(points_to_json(c.points).dump(2) + "\n");
    files["params.json"] = to_bytes(step_params_json(step).dump(2) + "\n");
    return files;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename F>
auto with_path(const fs::path& path, F&& f) {
    try {
        return f();
    } catch (const fs::filesystem_error& e) {
        throw IoError(path, e.code().message());
    }
}

double json_number(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError(key, "expected a number");
    return it->get<double>();
}

}  // namespace

std::vector<std::string> step_image_names(const StepRecord& step) {
    std::vector<std::string> names{"mosaic", "seg_h", "seg_s", "seg_i", "uncommon_h", "uncommon_s",
                                   "uncommon_i", "interest_raw", "interest_blur"};
    if (step.chain.mask) names.push_back("mask");
    for (std::size_t k = 0; k < step.chips.size(); ++k) names.push_back("chip_" + std::to_string(k + 1));
    return names;
}

StepManifest persist_step(const StepRecord& step, const fs::path& root) {
    const auto files = render_step_files(step);
    const fs::path steps_dir = root / "steps";
    const fs::path final_dir = steps_dir / std::to_string(step.index);
    const fs::path tmp_dir = steps_dir / ("." + std::to_string(step.index) + ".tmp");

    with_path(steps_dir, [&] { return fs::create_directories(steps_dir); });
    with_path(tmp_dir, [&] {
        fs::remove_all(tmp_dir);
        return fs::create_directory(tmp_dir);
    });

    StepManifest manifest{step.index, {}};
    try {
        for (const auto& [name, bytes] : files) {
            write_bytes(tmp_dir / name, bytes);
            manifest.files.push_back({name, sha256_hex(bytes)});
        }
        with_path(final_dir, [&] {
            fs::remove_all(final_dir);
            fs::rename(tmp_dir, final_dir);
            return 0;
        });
    } catch (...) {
        std::error_code ec;
        fs::remove_all(tmp_dir, ec);
        throw;
    }
    return manifest;
}

void write_session_manifest(const fs::path& root, const std::vector<StepManifest>& steps) {
    json arr = json::array();
    for (const auto& s : steps) {
        json files = json::object();
        for (const auto& f : s.files) files[f.name] = f.sha256;
        arr.push_back({{"index", s.index}, {"directory", "steps/" + std::to_string(s.index)}, {"files", files}});
    }
    write_text(root / "manifest.json", json{{"steps", arr}}.dump(2) + "\n");
}

StepRecord analyse_image(const RasterImage& rgb, const PipelineConfig& config, int index) {
    if (rgb.channels() != 3) throw std::invalid_argument("input image must be RGB");
    StepRecord step;
    step.index = index;
    step.config = config;
    step.mosaic = rgb;
    step.chain = run_interest_chain(rgb, config);
    for (const auto& p : step.chain.points)
        step.chips.push_back(crop_chip(rgb, p.x, p.y, config.chip_w, config.chip_h).image);
    return step;
}

std::string to_string(SessionStatus s) {
    switch (s) {
        case SessionStatus::Ready: return "ready";
        case SessionStatus::AwaitingChoice: return "awaiting-choice";
        case SessionStatus::Finished: return "finished";
    }
    return "unknown";
}

Scenario scenario_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("scenario", "expected a JSON object");
    Scenario s;
    s.id = j.value("id", std::string("scenario"));

    auto scene = j.find("scene");
    if (scene == j.end() || !scene->is_string()) throw ConfigError("scene", "missing scene raster path");
    s.scene_path = scene->get<std::string>();
    if (s.scene_path.is_relative()) s.scene_path = base_dir / s.scene_path;

    auto width = j.find("wall_width_m");
    if (width == j.end() || !width->is_number()) throw ConfigError("wall_width_m", "missing wall width");
    s.scene.wall_width_m = width->get<double>();
    if (!(s.scene.wall_width_m > 0.0)) throw ConfigError("wall_width_m", "must be positive");

    try {
        s.scene.raster = read_image(s.scene_path);
    } catch (const IoError& e) {
        throw ConfigError("scene", e.what());
    }
    if (s.scene.raster.channels() != 3) throw ConfigError("scene", "scene raster must be RGB");

    const json pose = j.value("initial_pose", json::object());
    if (!pose.is_object()) throw ConfigError("initial_pose", "expected an object");
    s.initial_pose.aim_x_m = json_number(pose, "aim_x_m", s.scene.wall_width_m / 2.0);
    s.initial_pose.aim_y_m = json_number(pose, "aim_y_m", s.scene.wall_height_m() / 2.0);
    s.initial_pose.pan_deg = json_number(pose, "pan_deg", 0.0);
    s.initial_pose.tilt_deg = json_number(pose, "tilt_deg", 0.0);
    s.initial_pose.zoom = json_number(pose, "zoom", 1.0);
    s.initial_pose.base_hfov_deg = json_number(pose, "base_hfov_deg", 45.0);
    s.initial_pose.distance_m = json_number(pose, "distance_m", s.initial_pose.distance_m);

    if (auto w = j.find("waypoints"); w != j.end()) {
        if (!w->is_array()) throw ConfigError("waypoints", "expected an array of distances");
        s.waypoints_m.clear();
        for (const auto& d : *w) {
            if (!d.is_number()) throw ConfigError("waypoints", "distances must be numbers");
            s.waypoints_m.push_back(d.get<double>());
        }
    }
    if (auto p = j.find("params"); p != j.end()) s.config = config_from_json(*p);

    validate_scenario(s);
    return s;
}

Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open scenario");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario", e.what());
    }
    return scenario_from_json(j, path.parent_path());
}

void validate_scenario(const Scenario& s) {
    s.config.validate();
    if (s.scene.raster.empty()) throw ConfigError("scene", "scene raster is empty");
    if (!(s.scene.wall_width_m > 0.0)) throw ConfigError("wall_width_m", "must be positive");
    for (std::size_t i = 0; i < s.waypoints_m.size(); ++i) {
        if (!(s.waypoints_m[i] > 0.0)) throw ConfigError("waypoints", "distances must be positive");
        if (i > 0 && !(s.waypoints_m[i] < s.waypoints_m[i - 1]))
            throw ConfigError("waypoints", "distances must strictly decrease");
    }
    try {
        CameraPose p = s.initial_pose;
        if (!s.waypoints_m.empty()) p.distance_m = s.waypoints_m.front();
        validate_pose(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("initial_pose", e.what());
    }
}

Session::Session(Scenario scenario, fs::path root) : scenario_(std::move(scenario)), root_(std::move(root)) {
    validate_scenario(scenario_);
    pose_ = scenario_.initial_pose;
    if (scenario_.waypoints_m.empty()) {
        status_ = SessionStatus::Finished;
    } else {
        pose_.distance_m = scenario_.waypoints_m.front();
    }
    with_path(root_, [&] { return fs::create_directories(root_); });
}

std::shared_ptr<const StepRecord> Session::run_step() {
    if (status_ != SessionStatus::Ready) throw StateError("session is " + to_string(status_) + ", not ready");

    const auto& cfg = scenario_.config;
    auto step = std::make_shared<StepRecord>();
    step->index = static_cast<int>(steps_.size());
    step->config = cfg;
    step->product = acquire_mosaic(scenario_.scene, pose_, cfg.mosaic_rows, cfg.mosaic_cols, cfg.downsample_f);
    step->mosaic = step->product->mosaic;

    std::optional<CoarseMask> mask;
    if (cfg.coarse_memory && !steps_.empty() && steps_.back()->product) {
        const auto& prev = *steps_.back();
        mask = register_coarse_mask(*prev.product, prev.chain.uncommon, *step->product, cfg.m_thresh);
        if (!mask->overlaps) {
            std::cerr << "warning: step " << step->index << " does not overlap the previous view; no coarse mask\n";
            mask.reset();
        }
    }
    step->chain = run_interest_chain(step->mosaic, cfg, mask ? &mask->masked : nullptr);

    for (const auto& p : step->chain.points) {
        step->chips.push_back(acquire_chip(scenario_.scene, *step->product, p).image);
        step->wall_points.push_back(pixel_to_wall(*step->product, p.x, p.y));
    }

    step->manifest = persist_step(*step, root_);
    std::vector<StepManifest> manifests;
    for (const auto& s : steps_) manifests.push_back(s->manifest);
    manifests.push_back(step->manifest);
    try {
        write_session_manifest(root_, manifests);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(root_ / "steps" / std::to_string(step->index), ec);
        throw;
    }

    steps_.push_back(step);
    status_ = SessionStatus::AwaitingChoice;
    return step;
}

CameraPose Session::select_target(std::optional<int> rank) {
    if (status_ != SessionStatus::AwaitingChoice)
        throw StateError("no pending choice: session is " + to_string(status_));
    const auto& step = *steps_.back();
    const int chosen = rank.value_or(1);
    if (chosen < 1 || chosen > static_cast<int>(step.chain.points.size()))
        throw std::invalid_argument("rank " + std::to_string(chosen) + " is not an offered interest point");

    const auto target = step.wall_points.at(chosen - 1);
    ChoiceRecord record{step.index, chosen, utc_timestamp()};
    {
        std::ofstream log(root_ / "choices.jsonl", std::ios::app);
        if (!log) throw IoError(root_ / "choices.jsonl", "cannot append to choice log");
        log << json{{"step", record.step}, {"rank", record.rank}, {"timestamp", record.timestamp}}.dump() << "\n";
    }
    choices_.push_back(record);

    if (waypoint_ + 1 >= scenario_.waypoints_m.size()) {
        pose_.aim_x_m = target.x_m;
        pose_.aim_y_m = target.y_m;
        pose_.pan_deg = 0.0;
        pose_.tilt_deg = 0.0;
        status_ = SessionStatus::Finished;
        return pose_;
    }
    ++waypoint_;
    pose_ = approach(pose_, target, scenario_.waypoints_m[waypoint_]);
    status_ = SessionStatus::Ready;
    return pose_;
}

json Session::summary() const {
    json steps = json::array();
    for (const auto& s : steps_) {
        steps.push_back({{"index", s->index},
                         {"distance_m", s->product ? s->product->pose.distance_m : 0.0},
                         {"aim_x_m", s->product ? s->product->pose.aim_x_m : 0.0},
                         {"aim_y_m", s->product ? s->product->pose.aim_y_m : 0.0},
                         {"points", points_to_json(s->chain.points)}});
    }
    json choices = json::array();
    for (const auto& c : choices_) choices.push_back({{"step", c.step}, {"rank", c.rank}, {"timestamp", c.timestamp}});
    json pending = json::array();
    if (status_ == SessionStatus::AwaitingChoice) pending = points_to_json(steps_.back()->chain.points);
    return {{"scenario", scenario_.id},
            {"status", to_string(status_)},
            {"step_count", steps_.size()},
            {"steps", steps},
            {"pose", pose_json(pose_)},
            {"current_distance_m", pose_.distance_m},
            {"waypoints_m", scenario_.waypoints_m},
            {"waypoint_index", waypoint_},
            {"pending_points", pending},
            {"choices", choices}};
}

void run_session(Session& session, const std::vector<int>& ranks) {
    while (session.status() != SessionStatus::Finished) {
        if (session.status() == SessionStatus::Ready) session.run_step();
        const std::size_t n = session.choices().size();
        session.select_target(n < ranks.size() ? std::optional<int>(ranks[n]) : std::nullopt);
    }
}

std::vector<ChoiceRecord> load_choice_log(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open choice log");
    std::vector<ChoiceRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            out.push_back({j.at("step").get<int>(), j.at("rank").get<int>(), j.value("timestamp", std::string())});
        } catch (const json::exception& e) {
            throw IoError(path, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<InterestPoint> points_in_scene_pixels(const StepRecord& step, const SceneModel& scene) {
    std::vector<InterestPoint> out;
    const double ppm = scene.pixels_per_meter();
    for (std::size_t k = 0; k < step.chain.points.size() && k < step.wall_points.size(); ++k) {
        InterestPoint p = step.chain.points[k];
        p.x = static_cast<int>(std::floor(step.wall_points[k].x_m * ppm));
        p.y = static_cast<int>(std::floor(step.wall_points[k].y_m * ppm));
        out.push_back(p);
    }
    return out;
}

json step_metadata(const StepRecord& step) {
    json pts = points_to_json(step.chain.points);
    for (std::size_t k = 0; k < pts.size() && k < step.wall_points.size(); ++k) {
        pts[k]["wall_x_m"] = step.wall_points[k].x_m;
        pts[k]["wall_y_m"] = step.wall_points[k].y_m;
    }
    json files = json::object();
    for (const auto& f : step.manifest.files) files[f.name] = f.sha256;
    json meta{{"index", step.index},
              {"mosaic", {{"width", step.mosaic.width()}, {"height", step.mosaic.height()}}},
              {"points", pts},
              {"images", step_image_names(step)},
              {"files", files},
              {"mask_applied", step.chain.mask.has_value()}};
    if (step.product) {
        meta["pose"] = pose_json(step.product->pose);
        meta["grid"] = {{"rows", step.product->grid.rows}, {"cols", step.product->grid.cols},
                        {"tile_w", step.product->grid.tile_w}, {"tile_h", step.product->grid.tile_h}};
    }
    return meta;
}

std::map<std::string, std::string> hash_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = sha256_file(e.path());
    }
    return out;
}

}  // namespace cyborg
