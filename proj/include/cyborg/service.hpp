#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "cyborg/session.hpp"

namespace httplib {
class Server;
}

namespace cyborg {

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// HTTP/JSON front of a Session. Mutations are serialised on one mutex; reads
/// are served from an immutable snapshot published after every mutation.
class ExplorerService {
public:
    explicit ExplorerService(Session& session);

    ApiResponse get_session() const;
    ApiResponse get_step(int index) const;
    ApiResponse get_step_image(int index, const std::string& name) const;
    ApiResponse post_step();
    ApiResponse post_choice(const std::string& body);

    void register_routes(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir = {});

private:
    struct Snapshot {
        nlohmann::json summary;
        std::vector<std::shared_ptr<const StepRecord>> steps;
    };

    std::shared_ptr<const Snapshot> snapshot() const;
    void publish();

    Session& session_;
    std::mutex mutate_;
    mutable std::mutex publish_;
    std::shared_ptr<const Snapshot> current_;
};

ApiResponse api_error(int status, const std::string& code, const std::string& message);

// "host:port", default from the EXPLORER_BIND environment variable, else 127.0.0.1:8080.
std::pair<std::string, int> parse_bind_address(const std::string& address);
std::string default_bind_address();

// Blocks until the server stops.
void serve(Session& session, const std::string& bind, const std::optional<std::filesystem::path>& static_dir = {});

}  // namespace cyborg
