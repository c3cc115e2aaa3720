#include "cyborg/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "cyborg/raster_io.hpp"

namespace cyborg {
using nlohmann::json;

ApiResponse api_error(int status, const std::string& code, const std::string& message) {
    return {status, "application/json", json{{"error", {{"code", code}, {"message", message}}}}.dump()};
}

namespace {

ApiResponse ok_json(const json& j, int status = 200) { return {status, "application/json", j.dump()}; }

}  // namespace

ExplorerService::ExplorerService(Session& session) : session_(session) { publish(); }

std::shared_ptr<const ExplorerService::Snapshot> ExplorerService::snapshot() const {
    std::lock_guard lock(publish_);
    return current_;
}

void ExplorerService::publish() {
    auto snap = std::make_shared<Snapshot>(Snapshot{session_.summary(), session_.steps()});
    std::lock_guard lock(publish_);
    current_ = std::move(snap);
}

ApiResponse ExplorerService::get_session() const { return ok_json(snapshot()->summary); }

ApiResponse ExplorerService::get_step(int index) const {
    const auto snap = snapshot();
    if (index < 0 || index >= static_cast<int>(snap->steps.size()))
        return api_error(404, "not_found", "no step " + std::to_string(index));
    return ok_json(step_metadata(*snap->steps[index]));
}

ApiResponse ExplorerService::get_step_image(int index, const std::string& name) const {
    const auto snap = snapshot();
    if (index < 0 || index >= static_cast<int>(snap->steps.size()))
        return api_error(404, "not_found", "no step " + std::to_string(index));
    const auto names = step_image_names(*snap->steps[index]);
    if (std::find(names.begin(), names.end(), name) == names.end())
        return api_error(404, "not_found", "step " + std::to_string(index) + " has no image '" + name + "'");
    try {
        const auto bytes = read_bytes(session_.root() / "steps" / std::to_string(index) / (name + ".png"));
        return {200, "image/png", std::string(bytes.begin(), bytes.end())};
    } catch (const IoError& e) {
        return api_error(500, "io_error", e.what());
    }
}

ApiResponse ExplorerService::post_step() {
    std::lock_guard lock(mutate_);
    try {
        auto step = session_.run_step();
        publish();
        return ok_json(step_metadata(*step), 201);
    } catch (const StateError& e) {
        return api_error(409, "conflict", e.what());
    } catch (const IoError& e) {
        return api_error(500, "io_error", e.what());
    } catch (const std::exception& e) {
        return api_error(500, "internal", e.what());
    }
}

ApiResponse ExplorerService::post_choice(const std::string& body) {
    std::optional<int> rank;
    try {
        const auto j = json::parse(body.empty() ? "{}" : body);
        auto it = j.find("rank");
        if (it == j.end() || (it->is_string() && it->get<std::string>() == "auto")) {
            rank.reset();
        } else if (it->is_number_integer()) {
            rank = it->get<int>();
        } else {
            return api_error(400, "invalid_argument", "rank must be an integer or \"auto\"");
        }
    } catch (const json::exception& e) {
        return api_error(400, "bad_request", e.what());
    }

    std::lock_guard lock(mutate_);
    try {
        const auto pose = session_.select_target(rank);
        publish();
        return ok_json({{"status", to_string(session_.status())},
                        {"pose", {{"distance_m", pose.distance_m}, {"aim_x_m", pose.aim_x_m},
                                  {"aim_y_m", pose.aim_y_m}}}});
    } catch (const StateError& e) {
        return api_error(409, "conflict", e.what());
    } catch (const std::invalid_argument& e) {
        return api_error(400, "invalid_argument", e.what());
    } catch (const IoError& e) {
        return api_error(500, "io_error", e.what());
    }
}

void ExplorerService::register_routes(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir) {
    auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };

    server.Get("/api/session", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, get_session());
    });
    server.Get(R"(/api/steps/(\d+))", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, get_step(std::stoi(req.matches[1])));
    });
    server.Get(R"(/api/steps/(\d+)/image/([A-Za-z0-9_]+))",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                   send(res, get_step_image(std::stoi(req.matches[1]), req.matches[2]));
               });
    server.Post("/api/steps", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, post_step());
    });
    server.Post("/api/choice", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_choice(req.body));
    });
    if (static_dir && !server.set_mount_point("/", static_dir->string())) {
        std::cerr << "warning: static directory " << *static_dir << " not found\n";
    }
}

std::pair<std::string, int> parse_bind_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == address.size())
        throw std::invalid_argument("bind address must be host:port, got '" + address + "'");
    int port = 0;
    try {
        port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid port in '" + address + "'");
    }
    if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + address + "'");
    return {address.substr(0, colon), port};
}

std::string default_bind_address() {
    if (const char* env = std::getenv("EXPLORER_BIND"); env && *env) return env;
    return "127.0.0.1:8080";
}

void serve(Session& session, const std::string& bind, const std::optional<std::filesystem::path>& static_dir) {
    const auto [host, port] = parse_bind_address(bind);
    ExplorerService service(session);
    httplib::Server server;
    service.register_routes(server, static_dir);
    std::cerr << "serving session '" << session.scenario().id << "' on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + bind);
}

}  // namespace cyborg
