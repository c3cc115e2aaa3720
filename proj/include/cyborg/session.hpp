#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyborg/camera_sim.hpp"
#include "cyborg/evaluation.hpp"
#include "cyborg/pipeline.hpp"

namespace cyborg {

/// Raised when an operation is not allowed in the current session status.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Scenario {
    std::string id = "scenario";
    std::filesystem::path scene_path;  // empty when the scene was built in memory
    SceneModel scene;
    CameraPose initial_pose;           // distance is replaced by the first waypoint
    std::vector<double> waypoints_m{300.0, 60.0, 10.0};
    PipelineConfig config;
};

// Relative scene paths resolve against the scenario file's directory.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
void validate_scenario(const Scenario& s);

struct ManifestEntry {
    std::string name;
    std::string sha256;
};

struct StepManifest {
    int index = 0;
    std::vector<ManifestEntry> files;  // sorted by name
};

/// Everything produced by one acquire -> analyse -> chips pass. Immutable once recorded.
struct StepRecord {
    int index = 0;
    PipelineConfig config;
    std::optional<MosaicProduct> product;  // absent for single-image runs
    RasterImage mosaic;
    ChainProducts chain;
    std::vector<RasterImage> chips;        // rank order
    std::vector<WallPoint> wall_points;    // rank order; empty without a camera
    StepManifest manifest;
};

// The image names a step directory may contain, without extension.
std::vector<std::string> step_image_names(const StepRecord& step);

// Writes steps/<index>/ under root atomically (temp dir + rename) and returns the hashes.
StepManifest persist_step(const StepRecord& step, const std::filesystem::path& root);

// Single-image chain with crop chips, used by the batch CLI.
StepRecord analyse_image(const RasterImage& rgb, const PipelineConfig& config, int index = 0);

void write_session_manifest(const std::filesystem::path& root, const std::vector<StepManifest>& steps);

enum class SessionStatus { Ready, AwaitingChoice, Finished };
std::string to_string(SessionStatus s);

struct ChoiceRecord {
    int step = 0;
    int rank = 0;
    std::string timestamp;
};

/// The machine-proposes / operator-chooses loop. Not internally synchronised:
/// callers serialise mutations; published steps are shared immutable values.
class Session {
public:
    Session(Scenario scenario, std::filesystem::path root);

    const Scenario& scenario() const { return scenario_; }
    const std::filesystem::path& root() const { return root_; }
    SessionStatus status() const { return status_; }
    const CameraPose& pose() const { return pose_; }
    std::size_t waypoint_index() const { return waypoint_; }
    const std::vector<std::shared_ptr<const StepRecord>>& steps() const { return steps_; }
    const std::vector<ChoiceRecord>& choices() const { return choices_; }

    std::shared_ptr<const StepRecord> run_step();

    // nullopt selects rank 1.
    CameraPose select_target(std::optional<int> rank);

    nlohmann::json summary() const;

private:
    Scenario scenario_;
    std::filesystem::path root_;
    CameraPose pose_;
    std::size_t waypoint_ = 0;
    SessionStatus status_ = SessionStatus::Ready;
    std::vector<std::shared_ptr<const StepRecord>> steps_;
    std::vector<ChoiceRecord> choices_;
};

// Runs steps until finished, taking ranks from the list (missing entries -> rank 1).
void run_session(Session& session, const std::vector<int>& ranks = {});

std::vector<ChoiceRecord> load_choice_log(const std::filesystem::path& path);

// Interest points re-expressed in scene-raster pixels, for ground-truth comparison.
std::vector<InterestPoint> points_in_scene_pixels(const StepRecord& step, const SceneModel& scene);

nlohmann::json step_metadata(const StepRecord& step);

// sha256 of every regular file below dir, keyed by relative path.
std::map<std::string, std::string> hash_tree(const std::filesystem::path& dir);

}  // namespace cyborg
