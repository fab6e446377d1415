#pragma once

// HTTP service over a directory of clips. Each subdirectory of the root holding a
// manifest.json is a clip; its id is the directory name.
//
//   GET  /clips
//   GET  /clips/{id}/frames/{k}
//   GET  /clips/{id}/unwrap?frame&yaw&pitch&roll&hfov&vfov&w&h   (degrees)
//   GET  /clips/{id}/annotations
//   POST /clips/{id}/annotations
//
// Every response carries X-Schema-Version. Annotation writes are last-write-wins;
// each accepted write bumps X-Annotation-Revision.

#include "pano/geometry.hpp"
#include "pano/raster.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace pano {

/// A perspective view request in boundary units (degrees).
struct ViewRequest {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
    double hfov_deg = 90.0;
    std::optional<double> vfov_deg; ///< derived from hfov and the aspect ratio when absent
    int width = 256;
    int height = 256;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    EulerPose pose() const;
    FieldOfView fov() const;
};

/// The single unwrap path shared by the CLI and the service.
PerspectiveFrame unwrap_view(const EquirectFrame& frame, const ViewRequest& view);

/// Clip ids are directory names made of [A-Za-z0-9_.-], not starting with a dot.
bool valid_clip_id(const std::string& id);

class Service {
public:
    explicit Service(std::filesystem::path root);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to host:port (port 0 picks a free port) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace pano
