#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "cyborg/evaluation.hpp"
#include "cyborg/raster_io.hpp"
#include "cyborg/service.hpp"
#include "cyborg/session.hpp"
#include "cyborg/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cyborg;

namespace {

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path, e.what());
    }
}

PipelineConfig load_config(const std::string& path, PipelineConfig base = {}) {
    if (path.empty()) return base;
    return config_from_json(read_json_file(path), base);
}

Scenario load_scenario_with(const std::string& path, const std::string& config_path) {
    auto scenario = load_scenario(path);
    scenario.config = load_config(config_path, scenario.config);
    return scenario;
}

int cmd_pipeline(const std::string& input, const std::string& config_path, const std::string& out) {
    const auto config = load_config(config_path);
    RasterImage rgb = read_image(input);
    if (rgb.channels() != 3) throw IoError(input, "expected an RGB image");
    const auto step = analyse_image(rgb, config);
    fs::create_directories(out);
    const auto manifest = persist_step(step, out);
    write_session_manifest(out, {manifest});
    std::cout << points_to_json(step.chain.points).dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& policy, const std::string& config_path,
                 const std::string& out, const std::string& choices, const std::string& bind,
                 const std::string& static_dir) {
    Session session(load_scenario_with(scenario_path, config_path), out);
    if (policy == "interactive") {
        serve(session, bind, static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
        return 0;
    }
    std::vector<int> ranks;
    if (!choices.empty()) {
        for (const auto& c : load_choice_log(choices)) ranks.push_back(c.rank);
    }
    run_session(session, ranks);
    std::cout << session.summary().dump(2) << "\n";
    return 0;
}

int cmd_evaluate(const std::string& points_path, const std::string& mask_path, double tolerance,
                 const std::string& out) {
    const auto points = points_from_json(read_json_file(points_path));
    const auto truth = load_ground_truth(mask_path);
    const auto report = to_json(evaluate_agreement(points, truth, tolerance)).dump(2) + "\n";
    if (!out.empty()) {
        fs::create_directories(out);
        write_text(fs::path(out) / "report.json", report);
    }
    std::cout << report;
    return 0;
}

int cmd_synth(const std::string& out, unsigned seed, int width, int height, double wall_width_m) {
    fs::create_directories(out);
    const auto spots = synthetic::two_wet_spots(width, height);
    write_png(fs::path(out) / "scene.png", synthetic::painted_wall(width, height, synthetic::kTan, spots, 5.0, seed));
    write_png(fs::path(out) / "truth.png", synthetic::ellipse_labels(width, height, spots));
    json scenario{{"id", "two-wet-spots"},
                  {"scene", "scene.png"},
                  {"wall_width_m", wall_width_m},
                  {"initial_pose", {{"aim_x_m", wall_width_m / 2.0}, {"aim_y_m", wall_width_m * height / width / 2.0}}},
                  {"waypoints", {300.0, 60.0, 10.0}},
                  {"params", PipelineConfig{}}};
    write_text(fs::path(out) / "scenario.json", scenario.dump(2) + "\n");
    std::cout << (fs::path(out) / "scenario.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interest-driven exploration pipeline and camera simulator"};
    app.require_subcommand(1);

    std::string config_path, out = "out";

    auto* pipeline = app.add_subcommand("pipeline", "Run the interest chain on one RGB image");
    std::string input;
    pipeline->add_option("input", input, "RGB image (.png/.ppm)")->required();
    pipeline->add_option("--config", config_path, "Pipeline parameters (JSON)");
    pipeline->add_option("--out", out, "Output directory");

    auto* simulate = app.add_subcommand("simulate", "Run an approach scenario in the camera simulator");
    std::string scenario_path, policy = "auto", choices, bind = default_bind_address(), static_dir;
    simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
    simulate->add_option("--policy", policy, "auto | interactive")->check(CLI::IsMember({"auto", "interactive"}));
    simulate->add_option("--config", config_path, "Parameter overrides (JSON)");
    simulate->add_option("--out", out, "Session directory");
    simulate->add_option("--choices", choices, "Choice log (JSON lines) to replay");
    simulate->add_option("--bind", bind, "host:port for the interactive service");
    simulate->add_option("--static", static_dir, "Directory of UI assets to serve");

    auto* evaluate = app.add_subcommand("evaluate", "Score interest points against a ground-truth label mask");
    std::string points_path, mask_path;
    double tolerance = PipelineConfig{}.tolerance_px;
    bool tolerance_set = false;
    evaluate->add_option("points", points_path, "points.json")->required();
    evaluate->add_option("mask", mask_path, "Label PNG (0 = background)")->required();
    auto* tol_opt = evaluate->add_option("--tolerance", tolerance, "Hit radius in mask pixels");
    evaluate->add_option("--config", config_path, "Take tolerance_px from a config file");
    evaluate->add_option("--out", out, "Also write report.json here");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the session API for a scenario");
    serve_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
    serve_cmd->add_option("--config", config_path, "Parameter overrides (JSON)");
    serve_cmd->add_option("--out", out, "Session directory");
    serve_cmd->add_option("--bind", bind, "host:port (default $EXPLORER_BIND or 127.0.0.1:8080)");
    serve_cmd->add_option("--static", static_dir, "Directory of UI assets to serve");

    auto* synth = app.add_subcommand("synth", "Write a synthetic two-wet-spot scene, truth mask and scenario");
    unsigned seed = 1;
    int synth_w = 1600, synth_h = 900;
    double wall_w = 1000.0;
    synth->add_option("--out", out, "Output directory");
    synth->add_option("--seed", seed, "Noise seed");
    synth->add_option("--width", synth_w, "Scene width in pixels");
    synth->add_option("--height", synth_h, "Scene height in pixels");
    synth->add_option("--wall-width", wall_w, "Wall width in metres");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pipeline) return cmd_pipeline(input, config_path, out);
        if (*simulate) return cmd_simulate(scenario_path, policy, config_path, out, choices, bind, static_dir);
        if (*evaluate) {
            tolerance_set = tol_opt->count() > 0;
            if (!tolerance_set && !config_path.empty()) tolerance = load_config(config_path).tolerance_px;
            return cmd_evaluate(points_path, mask_path, tolerance, out);
        }
        if (*serve_cmd) {
            Session session(load_scenario_with(scenario_path, config_path), out);
            serve(session, bind, static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
            return 0;
        }
        if (*synth) return cmd_synth(out, seed, synth_w, synth_h, wall_w);
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
