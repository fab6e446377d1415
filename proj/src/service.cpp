#include "pano/service.hpp"

#include "pano/formats.hpp"
#include "pano/png_io.hpp"
#include "pano/projection.hpp"

#include "httplib.h"
#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pano {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void ViewRequest::validate() const
{
    auto finite = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " must be finite");
        }
    };
    finite(yaw_deg, "yaw");
    finite(pitch_deg, "pitch");
    finite(roll_deg, "roll");
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0)) {
        throw std::invalid_argument("hfov must be in (0, 180) degrees");
    }
    if (vfov_deg && !(*vfov_deg > 0.0 && *vfov_deg < 180.0)) {
        throw std::invalid_argument("vfov must be in (0, 180) degrees");
    }
    if (width < 1 || width > 8192) {
        throw std::invalid_argument("w must be in [1, 8192]");
    }
    if (height < 1 || height > 8192) {
        throw std::invalid_argument("h must be in [1, 8192]");
    }
}

EulerPose ViewRequest::pose() const
{
    return EulerPose::from_degrees(roll_deg, pitch_deg, yaw_deg);
}

FieldOfView ViewRequest::fov() const
{
    const double h = deg_to_rad(hfov_deg);
    const double v = vfov_deg ? deg_to_rad(*vfov_deg)
                              : 2.0 * std::atan(std::tan(h / 2.0) * static_cast<double>(height) / width);
    return FieldOfView(h, v);
}

PerspectiveFrame unwrap_view(const EquirectFrame& frame, const ViewRequest& view)
{
    view.validate();
    return unwrap_to_perspective(frame, view.pose(), view.fov(), view.width, view.height);
}

bool valid_clip_id(const std::string& id)
{
    if (id.empty() || id.size() > 128 || id.front() == '.') {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
               c == '.';
    });
}

namespace {

constexpr const char* kAnnotationName = "annotations.json";
constexpr const char* kRevisionName = "annotations.revision";

struct HttpError : std::runtime_error {
    HttpError(int status, std::string kind, const std::string& detail)
        : std::runtime_error(detail), status(status), kind(std::move(kind))
    {
    }
    int status;
    std::string kind;
};

void send_json(httplib::Response& res, int status, const Json& body)
{
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& detail)
{
    Json err;
    err["schema_version"] = kSchemaVersion;
    err["error"] = {{"kind", kind}, {"detail", detail}};
    send_json(res, status, err);
}

double number_param(const httplib::Request& req, const char* name, std::optional<double> fallback)
{
    if (!req.has_param(name)) {
        if (!fallback) {
            throw HttpError(400, "validation", std::string("missing parameter ") + name);
        }
        return *fallback;
    }
    const std::string text = req.get_param_value(name);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw HttpError(400, "validation", std::string("parameter ") + name + " is not a finite number");
    }
    return v;
}

int int_param(const httplib::Request& req, const char* name, std::optional<int> fallback)
{
    const double v = number_param(req, name, fallback ? std::optional<double>(*fallback) : std::nullopt);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw HttpError(400, "validation", std::string("parameter ") + name + " must be an integer");
    }
    return static_cast<int>(v);
}

long long read_revision(const fs::path& file)
{
    if (!fs::exists(file)) {
        return 0;
    }
    const std::string text = read_text(file);
    return std::strtoll(text.c_str(), nullptr, 10);
}

} // namespace

struct Service::Impl {
    fs::path root;
    httplib::Server server;
    std::mutex locks_mutex;
    std::map<std::string, std::unique_ptr<std::mutex>> locks;

    std::mutex& clip_lock(const std::string& id)
    {
        std::lock_guard<std::mutex> guard(locks_mutex);
        auto& m = locks[id];
        if (!m) {
            m = std::make_unique<std::mutex>();
        }
        return *m;
    }

    fs::path clip_dir(const std::string& id) const
    {
        if (!valid_clip_id(id)) {
            throw HttpError(404, "not_found", "unknown clip " + id);
        }
        const fs::path dir = root / id;
        if (!fs::is_regular_file(dir / kManifestName)) {
            throw HttpError(404, "not_found", "unknown clip " + id);
        }
        return dir;
    }

    ClipManifest manifest(const fs::path& dir) const
    {
        try {
            return read_clip_manifest(dir / kManifestName);
        } catch (const FormatError& e) {
            throw HttpError(500, "format", e.what());
        }
    }

    static int frame_index(const std::string& text, const ClipManifest& m)
    {
        if (text.size() > 9) {
            throw HttpError(404, "not_found", "unknown frame " + text);
        }
        const int k = std::stoi(text);
        if (k >= m.frames) {
            throw HttpError(404, "not_found", "unknown frame " + text);
        }
        return k;
    }

    void list(httplib::Response& res) const
    {
        std::vector<std::string> ids;
        if (fs::is_directory(root)) {
            for (const auto& e : fs::directory_iterator(root)) {
                const std::string id = e.path().filename().string();
                if (e.is_directory() && valid_clip_id(id) && fs::is_regular_file(e.path() / kManifestName)) {
                    ids.push_back(id);
                }
            }
        }
        std::sort(ids.begin(), ids.end());
        Json clips = Json::array();
        for (const auto& id : ids) {
            Json c;
            c["id"] = id;
            try {
                const ClipManifest m = read_clip_manifest(root / id / kManifestName);
                c["kind"] = m.kind == RasterKind::equirect ? "equirect" : "perspective";
                c["frames"] = m.frames;
                c["fps"] = m.fps;
                c["width"] = m.width;
                c["height"] = m.height;
                c["annotated"] = fs::exists(root / id / kAnnotationName);
            } catch (const FormatError& e) {
                c["error"] = e.what();
            }
            clips.push_back(std::move(c));
        }
        Json body;
        body["schema_version"] = kSchemaVersion;
        body["clips"] = std::move(clips);
        send_json(res, 200, body);
    }

    void frame(const std::string& id, const std::string& k_text, httplib::Response& res) const
    {
        const fs::path dir = clip_dir(id);
        const ClipManifest m = manifest(dir);
        const int k = frame_index(k_text, m);
        const auto bytes = read_bytes(dir / expand_frame_pattern(m.frame_pattern, k));
        res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
    }

    void unwrap(const std::string& id, const httplib::Request& req, httplib::Response& res) const
    {
        const fs::path dir = clip_dir(id);
        const ClipManifest m = manifest(dir);
        if (m.kind != RasterKind::equirect) {
            throw HttpError(400, "validation", "clip " + id + " is not equirectangular");
        }
        const int k = frame_index(std::to_string(int_param(req, "frame", 0)), m);
        if (k < 0) {
            throw HttpError(404, "not_found", "unknown frame");
        }
        ViewRequest view;
        view.yaw_deg = number_param(req, "yaw", 0.0);
        view.pitch_deg = number_param(req, "pitch", 0.0);
        view.roll_deg = number_param(req, "roll", 0.0);
        view.hfov_deg = number_param(req, "hfov", 90.0);
        if (req.has_param("vfov")) {
            view.vfov_deg = number_param(req, "vfov", std::nullopt);
        }
        view.width = int_param(req, "w", 256);
        view.height = int_param(req, "h", 256);
        try {
            view.validate();
        } catch (const std::invalid_argument& e) {
            throw HttpError(400, "validation", e.what());
        }
        const Image img = read_png(dir / expand_frame_pattern(m.frame_pattern, k));
        const EquirectFrame frame = m.mask_pattern
                                        ? EquirectFrame(img, read_png_mask(dir / expand_frame_pattern(*m.mask_pattern, k)))
                                        : EquirectFrame(img);
        const auto png = encode_png(unwrap_view(frame, view).image());
        res.set_header("Cache-Control", "public, max-age=31536000, immutable");
        res.set_content(std::string(png.begin(), png.end()), "image/png");
    }

    void get_annotations(const std::string& id, httplib::Response& res)
    {
        const fs::path dir = clip_dir(id);
        std::lock_guard<std::mutex> guard(clip_lock(id));
        if (!fs::exists(dir / kAnnotationName)) {
            throw HttpError(404, "not_found", "clip " + id + " has no annotations");
        }
        res.set_header("X-Annotation-Revision", std::to_string(read_revision(dir / kRevisionName)));
        res.set_content(read_text(dir / kAnnotationName), "application/json");
    }

    void post_annotations(const std::string& id, const httplib::Request& req, httplib::Response& res)
    {
        const fs::path dir = clip_dir(id);
        AnnotationFile a;
        try {
            a = parse_annotations(req.body, "request body");
        } catch (const FormatError& e) {
            Json err;
            err["schema_version"] = kSchemaVersion;
            err["error"] = {{"kind", "validation"}, {"location", e.location()}, {"detail", e.detail()}};
            send_json(res, 400, err);
            return;
        }
        const std::string canonical = serialize(a);
        std::lock_guard<std::mutex> guard(clip_lock(id));
        const long long revision = read_revision(dir / kRevisionName) + 1;
        write_text(dir / kAnnotationName, canonical);
        write_text(dir / kRevisionName, std::to_string(revision) + "\n");
        res.set_header("X-Annotation-Revision", std::to_string(revision));
        res.set_content(canonical, "application/json");
    }
};

Service::Service(fs::path root) : impl_(std::make_unique<Impl>())
{
    impl_->root = std::move(root);
    auto& s = impl_->server;
    s.set_default_headers({{"X-Schema-Version", std::to_string(kSchemaVersion)}});
    s.set_payload_max_length(4u << 20);

    auto guarded = [](auto body) {
        return [body](const httplib::Request& req, httplib::Response& res) {
            try {
                body(req, res);
            } catch (const HttpError& e) {
                send_error(res, e.status, e.kind, e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "internal", e.what());
            }
        };
    };
    Impl* impl = impl_.get();
    s.Get("/clips", guarded([impl](const httplib::Request&, httplib::Response& res) { impl->list(res); }));
    s.Get(R"(/clips/([^/]+)/frames/(\d+))", guarded([impl](const httplib::Request& req, httplib::Response& res) {
              impl->frame(req.matches[1], req.matches[2], res);
          }));
    s.Get(R"(/clips/([^/]+)/unwrap)", guarded([impl](const httplib::Request& req, httplib::Response& res) {
              impl->unwrap(req.matches[1], req, res);
          }));
    s.Get(R"(/clips/([^/]+)/annotations)", guarded([impl](const httplib::Request& req, httplib::Response& res) {
              impl->get_annotations(req.matches[1], res);
          }));
    s.Post(R"(/clips/([^/]+)/annotations)", guarded([impl](const httplib::Request& req, httplib::Response& res) {
               impl->post_annotations(req.matches[1], req, res);
           }));
    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            send_error(res, res.status, res.status == 404 ? "not_found" : "http", httplib::status_message(res.status));
        }
    });
}

Service::~Service()
{
    stop();
}

int Service::bind(const std::string& host, int port)
{
    if (port == 0) {
        return impl_->server.bind_to_any_port(host);
    }
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen()
{
    return impl_->server.listen_after_bind();
}

void Service::stop()
{
    impl_->server.stop();
}

void Service::wait_until_ready() const
{
    impl_->server.wait_until_ready();
}

} // namespace pano
