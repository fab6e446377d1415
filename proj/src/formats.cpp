#include "pano/formats.hpp"

#include "pano/png_io.hpp"

#include "json.hpp"
#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <initializer_list>
#include <regex>
#include <set>

namespace pano {

using Json = nlohmann::ordered_json;

FormatError::FormatError(std::string source, std::string location, std::string detail)
    : std::runtime_error(source + ": " + location + ": " + detail),
      source_(std::move(source)),
      location_(std::move(location)),
      detail_(std::move(detail))
{
}

double round_angle(double radians)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", radians);
    return std::strtod(buf, nullptr);
}

namespace {

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

// Typed, path-tracking access to a parsed document.
class Node {
public:
    Node(const Json& j, std::string path, const std::string& source) : j_(j), path_(std::move(path)), source_(source) {}

    [[noreturn]] void fail(const std::string& detail) const { throw FormatError(source_, path_, detail); }

    const std::string& path() const { return path_; }

    bool has(const char* key) const { return j_.contains(key); }

    Node operator[](const char* key) const
    {
        if (!j_.is_object()) {
            fail("expected an object");
        }
        const auto it = j_.find(key);
        if (it == j_.end()) {
            throw FormatError(source_, path_, std::string("missing field \"") + key + "\"");
        }
        return {*it, path_ + "." + key, source_};
    }

    Node at(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]", source_}; }

    std::size_t size() const
    {
        if (!j_.is_array()) {
            fail("expected an array");
        }
        return j_.size();
    }

    void only(std::initializer_list<const char*> keys) const
    {
        if (!j_.is_object()) {
            fail("expected an object");
        }
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j_.items()) {
            if (!allowed.count(k)) {
                throw FormatError(source_, path_ + "." + k, "unknown field");
            }
        }
    }

    double number() const
    {
        if (!j_.is_number()) {
            fail("expected a number");
        }
        const double v = j_.get<double>();
        if (!std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }

    double positive() const
    {
        const double v = number();
        if (!(v > 0.0)) {
            fail("must be positive");
        }
        return v;
    }

    long long integer() const
    {
        if (!j_.is_number_integer()) {
            fail("expected an integer");
        }
        if (j_.is_number_unsigned() && j_.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            fail("integer out of range");
        }
        return j_.get<long long>();
    }

    int int32(long long lo, long long hi) const
    {
        const long long v = integer();
        if (v < lo || v > hi) {
            fail("must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return static_cast<int>(v);
    }

    std::uint64_t uint64() const
    {
        if (!j_.is_number_unsigned()) {
            if (j_.is_number_integer() && j_.get<long long>() >= 0) {
                return static_cast<std::uint64_t>(j_.get<long long>());
            }
            fail("expected a non-negative integer");
        }
        return j_.get<std::uint64_t>();
    }

    bool boolean() const
    {
        if (!j_.is_boolean()) {
            fail("expected true or false");
        }
        return j_.get<bool>();
    }

    std::string string() const
    {
        if (!j_.is_string()) {
            fail("expected a string");
        }
        return j_.get<std::string>();
    }

private:
    const Json& j_;
    std::string path_;
    const std::string& source_;
};

Json parse_json(std::string_view text, const std::string& source)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // byte is the 1-based offset of the offending character
        const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string detail = e.what();
        const auto colon = detail.rfind(": ");
        if (colon != std::string::npos) {
            detail = detail.substr(colon + 2);
        }
        throw FormatError(source, "line " + std::to_string(line) + ", column " + std::to_string(column), detail);
    }
}

Node root(const Json& j, const std::string& source)
{
    Node n(j, "$", source);
    if (!j.is_object()) {
        n.fail("expected an object");
    }
    const Node v = n["schema_version"];
    if (v.integer() != kSchemaVersion) {
        v.fail("unsupported schema version " + std::to_string(v.integer()));
    }
    return n;
}

Json fov_json(const FieldOfView& f)
{
    Json j;
    j["horizontal"] = round_angle(f.horizontal);
    j["vertical"] = round_angle(f.vertical);
    return j;
}

FieldOfView read_fov(const Node& n)
{
    n.only({"horizontal", "vertical"});
    const double h = n["horizontal"].number();
    const double v = n["vertical"].number();
    try {
        return FieldOfView(h, v);
    } catch (const std::invalid_argument& e) {
        n.fail(e.what());
    }
}

Json pose_json(const EulerPose& p)
{
    Json j;
    j["roll"] = round_angle(p.roll);
    j["pitch"] = round_angle(p.pitch);
    j["yaw"] = round_angle(p.yaw);
    return j;
}

EulerPose read_pose(const Node& n)
{
    return EulerPose(n["roll"].number(), n["pitch"].number(), n["yaw"].number());
}

const char* kind_name(RasterKind k)
{
    return k == RasterKind::equirect ? "equirect" : "perspective";
}

void check_pattern(const Node& n, const std::string& pattern)
{
    static const std::regex re(R"(^[^%]*%0[1-9]d[^%]*$)");
    if (!std::regex_match(pattern, re)) {
        n.fail("pattern must contain exactly one zero-padded %0Nd field");
    }
}

} // namespace

std::string expand_frame_pattern(const std::string& pattern, int index)
{
    const auto pos = pattern.find('%');
    if (pos == std::string::npos || pos + 3 >= pattern.size() + 1) {
        throw std::invalid_argument("frame pattern needs a %0Nd field: " + pattern);
    }
    const auto d = pattern.find('d', pos);
    if (d == std::string::npos) {
        throw std::invalid_argument("frame pattern needs a %0Nd field: " + pattern);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, pattern.substr(pos, d - pos + 1).c_str(), index);
    return pattern.substr(0, pos) + buf + pattern.substr(d + 1);
}

std::string serialize(const ClipManifest& m)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind_name(m.kind);
    j["frame_pattern"] = m.frame_pattern;
    if (m.mask_pattern) {
        j["mask_pattern"] = *m.mask_pattern;
    }
    j["frames"] = m.frames;
    j["fps"] = m.fps;
    j["width"] = m.width;
    j["height"] = m.height;
    if (m.fov) {
        j["fov"] = fov_json(*m.fov);
    }
    if (m.trajectory) {
        j["trajectory"] = *m.trajectory;
    }
    return dump(j);
}

ClipManifest parse_clip_manifest(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "kind", "frame_pattern", "mask_pattern", "frames", "fps", "width", "height", "fov",
            "trajectory"});
    ClipManifest m;
    const std::string kind = n["kind"].string();
    if (kind == "equirect") {
        m.kind = RasterKind::equirect;
    } else if (kind != "perspective") {
        n["kind"].fail("expected \"perspective\" or \"equirect\"");
    }
    m.frame_pattern = n["frame_pattern"].string();
    check_pattern(n["frame_pattern"], m.frame_pattern);
    if (n.has("mask_pattern")) {
        m.mask_pattern = n["mask_pattern"].string();
        check_pattern(n["mask_pattern"], *m.mask_pattern);
        if (m.kind != RasterKind::equirect) {
            n["mask_pattern"].fail("masks are only defined for equirect clips");
        }
    }
    m.frames = n["frames"].int32(1, 10000000);
    m.fps = n["fps"].positive();
    m.width = n["width"].int32(1, 1 << 16);
    m.height = n["height"].int32(1, 1 << 16);
    if (m.kind == RasterKind::equirect && m.width != 2 * m.height) {
        n["width"].fail("equirect width must be twice the height");
    }
    if (n.has("fov")) {
        m.fov = read_fov(n["fov"]);
    }
    if (n.has("trajectory")) {
        m.trajectory = n["trajectory"].string();
    }
    return m;
}

namespace {

Json motion_json(const MotionParams& p)
{
    Json j;
    j["omega"] = round_angle(p.omega);
    j["tau_roll"] = round_angle(p.tau_roll);
    j["tau_pitch"] = round_angle(p.tau_pitch);
    j["tau_yaw"] = round_angle(p.tau_yaw);
    j["amp_roll"] = round_angle(p.amp_roll);
    j["amp_pitch"] = round_angle(p.amp_pitch);
    j["amp_yaw"] = round_angle(p.amp_yaw);
    j["noise_roll"] = round_angle(p.noise_roll);
    j["noise_pitch"] = round_angle(p.noise_pitch);
    j["noise_yaw"] = round_angle(p.noise_yaw);
    j["drift_pitch"] = round_angle(p.drift_pitch);
    j["drift_yaw"] = round_angle(p.drift_yaw);
    j["yaw_offset"] = round_angle(p.yaw_offset);
    j["seed"] = p.seed;
    return j;
}

MotionParams read_motion(const Node& n)
{
    n.only({"omega", "tau_roll", "tau_pitch", "tau_yaw", "amp_roll", "amp_pitch", "amp_yaw", "noise_roll",
            "noise_pitch", "noise_yaw", "drift_pitch", "drift_yaw", "yaw_offset", "seed"});
    MotionParams p;
    p.omega = n["omega"].number();
    p.tau_roll = n["tau_roll"].number();
    p.tau_pitch = n["tau_pitch"].number();
    p.tau_yaw = n["tau_yaw"].number();
    p.amp_roll = n["amp_roll"].number();
    p.amp_pitch = n["amp_pitch"].number();
    p.amp_yaw = n["amp_yaw"].number();
    p.noise_roll = n["noise_roll"].number();
    p.noise_pitch = n["noise_pitch"].number();
    p.noise_yaw = n["noise_yaw"].number();
    p.drift_pitch = n["drift_pitch"].number();
    p.drift_yaw = n["drift_yaw"].number();
    p.yaw_offset = n["yaw_offset"].number();
    p.seed = n["seed"].uint64();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        n.fail(e.what());
    }
    return p;
}

} // namespace

std::string serialize(const TrajectoryFile& t)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["fov"] = fov_json(t.trajectory.fov);
    Json frames = Json::array();
    for (std::size_t k = 0; k < t.trajectory.poses.size(); ++k) {
        Json f;
        f["index"] = k;
        const Json p = pose_json(t.trajectory.poses[k]);
        f["roll"] = p["roll"];
        f["pitch"] = p["pitch"];
        f["yaw"] = p["yaw"];
        frames.push_back(std::move(f));
    }
    j["frames"] = std::move(frames);
    if (t.motion) {
        j["motion"] = motion_json(*t.motion);
    }
    return dump(j);
}

TrajectoryFile parse_trajectory(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "fov", "frames", "motion"});
    TrajectoryFile t;
    t.trajectory.fov = read_fov(n["fov"]);
    const Node frames = n["frames"];
    const std::size_t count = frames.size();
    if (count == 0) {
        frames.fail("a trajectory needs at least one frame");
    }
    for (std::size_t k = 0; k < count; ++k) {
        const Node f = frames.at(k);
        f.only({"index", "roll", "pitch", "yaw"});
        if (f["index"].integer() != static_cast<long long>(k)) {
            f["index"].fail("indices must be contiguous from 0; expected " + std::to_string(k));
        }
        t.trajectory.poses.push_back(read_pose(f));
    }
    if (n.has("motion")) {
        t.motion = read_motion(n["motion"]);
    }
    return t;
}

std::string serialize(const AnnotationFile& a)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["image"] = a.image;
    j["width"] = a.width;
    j["height"] = a.height;
    if (a.view) {
        Json v;
        v["frame"] = a.view->frame;
        v["pose"] = pose_json(a.view->pose);
        v["fov"] = fov_json(a.view->fov);
        j["view"] = std::move(v);
    }
    Json lines = Json::array();
    for (const auto& l : a.lines) {
        Json e;
        e["label"] = l.label;
        e["x1"] = l.segment.p1.x;
        e["y1"] = l.segment.p1.y;
        e["x2"] = l.segment.p2.x;
        e["y2"] = l.segment.p2.y;
        lines.push_back(std::move(e));
    }
    j["lines"] = std::move(lines);
    return dump(j);
}

AnnotationFile parse_annotations(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "image", "width", "height", "view", "lines"});
    AnnotationFile a;
    a.image = n["image"].string();
    a.width = n["width"].int32(1, 1 << 16);
    a.height = n["height"].int32(1, 1 << 16);
    if (n.has("view")) {
        const Node v = n["view"];
        v.only({"frame", "pose", "fov"});
        AnnotationView view;
        view.frame = v["frame"].int32(0, 10000000);
        v["pose"].only({"roll", "pitch", "yaw"});
        view.pose = read_pose(v["pose"]);
        view.fov = read_fov(v["fov"]);
        a.view = view;
    }
    const Node lines = n["lines"];
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Node l = lines.at(i);
        l.only({"label", "x1", "y1", "x2", "y2"});
        AnnotatedLine line;
        line.label = l["label"].string();
        const char* keys[] = {"x1", "y1", "x2", "y2"};
        double v[4];
        for (int k = 0; k < 4; ++k) {
            const Node c = l[keys[k]];
            v[k] = c.number();
            const double limit = (k % 2 == 0) ? a.width - 1.0 : a.height - 1.0;
            if (v[k] < 0.0 || v[k] > limit) {
                c.fail("endpoint outside the image bounds [0, " + std::to_string(static_cast<int>(limit)) + "]");
            }
        }
        line.segment = {{v[0], v[1]}, {v[2], v[3]}};
        if (line.segment.degenerate()) {
            l.fail("segment endpoints coincide");
        }
        a.lines.push_back(std::move(line));
    }
    return a;
}

std::string serialize(const CorpusManifest& c)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json videos = Json::array();
    for (const auto& v : c.videos) {
        Json e;
        e["id"] = v.id;
        e["path"] = v.path;
        e["fps"] = v.fps;
        if (v.likes) {
            e["likes"] = *v.likes;
        }
        videos.push_back(std::move(e));
    }
    j["videos"] = std::move(videos);
    return dump(j);
}

CorpusManifest parse_corpus_manifest(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "videos"});
    CorpusManifest c;
    const Node videos = n["videos"];
    std::set<std::string> ids;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const Node v = videos.at(i);
        v.only({"id", "path", "fps", "likes"});
        CorpusEntry e;
        e.id = v["id"].string();
        if (e.id.empty() || !ids.insert(e.id).second) {
            v["id"].fail("ids must be nonempty and unique");
        }
        e.path = v["path"].string();
        e.fps = v["fps"].positive();
        if (v.has("likes")) {
            e.likes = v["likes"].int32(0, INT32_MAX);
        }
        c.videos.push_back(std::move(e));
    }
    return c;
}

std::string serialize(const FilterConfig& c)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["clip_seconds"] = c.clip_seconds;
    j["sample_fps"] = c.sample_fps;
    j["coarse_downsample"] = c.coarse_downsample;
    j["cut_aware_split"] = c.cut_aware_split;
    j["seed"] = c.seed;
    j["likes"] = {{"enabled", c.likes.enabled}, {"min_likes", c.likes.min_likes}};
    j["format"] = {{"enabled", c.format.enabled},
                   {"band_fraction", c.format.band_fraction},
                   {"boundary_fraction", c.format.boundary_fraction},
                   {"min_line_fraction", c.format.min_line_fraction},
                   {"persistence", c.format.persistence}};
    j["half_similarity"] = {{"enabled", c.half_similarity.enabled}, {"threshold", c.half_similarity.threshold}};
    j["static"] = {{"enabled", c.static_check.enabled},
                   {"threshold", c.static_check.threshold},
                   {"subtract_mean", c.static_check.subtract_mean},
                   {"samples", c.static_check.samples}};
    j["motion"] = {{"enabled", c.motion.enabled},
                   {"threshold", c.motion.threshold},
                   {"min_confidence", c.motion.min_confidence},
                   {"min_reliable_fraction", c.motion.min_reliable_fraction}};
    j["cut"] = {{"enabled", c.cut.enabled}, {"threshold", c.cut.threshold}};
    j["blackness"] = {{"enabled", c.blackness.enabled}, {"threshold", c.blackness.threshold}};
    j["variance"] = {{"enabled", c.variance.enabled}, {"threshold", c.variance.threshold}};
    j["text"] = {{"enabled", c.text_enabled}};
    return dump(j);
}

namespace {

void read_gate(const Node& n, const char* key, ThresholdParams& g)
{
    if (!n.has(key)) {
        return;
    }
    const Node s = n[key];
    s.only({"enabled", "threshold"});
    if (s.has("enabled")) {
        g.enabled = s["enabled"].boolean();
    }
    if (s.has("threshold")) {
        g.threshold = s["threshold"].number();
    }
}

} // namespace

FilterConfig parse_filter_config(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "clip_seconds", "sample_fps", "coarse_downsample", "cut_aware_split", "seed", "likes",
            "format", "half_similarity", "static", "motion", "cut", "blackness", "variance", "text"});
    FilterConfig c;
    if (n.has("clip_seconds")) {
        c.clip_seconds = n["clip_seconds"].number();
    }
    if (n.has("sample_fps")) {
        c.sample_fps = n["sample_fps"].number();
    }
    if (n.has("coarse_downsample")) {
        c.coarse_downsample = n["coarse_downsample"].int32(-1000, 1000);
    }
    if (n.has("cut_aware_split")) {
        c.cut_aware_split = n["cut_aware_split"].boolean();
    }
    if (n.has("seed")) {
        c.seed = n["seed"].uint64();
    }
    if (n.has("likes")) {
        const Node s = n["likes"];
        s.only({"enabled", "min_likes"});
        if (s.has("enabled")) {
            c.likes.enabled = s["enabled"].boolean();
        }
        if (s.has("min_likes")) {
            c.likes.min_likes = s["min_likes"].int32(INT32_MIN, INT32_MAX);
        }
    }
    if (n.has("format")) {
        const Node s = n["format"];
        s.only({"enabled", "band_fraction", "boundary_fraction", "min_line_fraction", "persistence"});
        if (s.has("enabled")) {
            c.format.enabled = s["enabled"].boolean();
        }
        if (s.has("band_fraction")) {
            c.format.band_fraction = s["band_fraction"].number();
        }
        if (s.has("boundary_fraction")) {
            c.format.boundary_fraction = s["boundary_fraction"].number();
        }
        if (s.has("min_line_fraction")) {
            c.format.min_line_fraction = s["min_line_fraction"].number();
        }
        if (s.has("persistence")) {
            c.format.persistence = s["persistence"].number();
        }
    }
    read_gate(n, "half_similarity", c.half_similarity);
    if (n.has("static")) {
        const Node s = n["static"];
        s.only({"enabled", "threshold", "subtract_mean", "samples"});
        if (s.has("enabled")) {
            c.static_check.enabled = s["enabled"].boolean();
        }
        if (s.has("threshold")) {
            c.static_check.threshold = s["threshold"].number();
        }
        if (s.has("subtract_mean")) {
            c.static_check.subtract_mean = s["subtract_mean"].boolean();
        }
        if (s.has("samples")) {
            c.static_check.samples = s["samples"].int32(INT32_MIN, INT32_MAX);
        }
    }
    if (n.has("motion")) {
        const Node s = n["motion"];
        s.only({"enabled", "threshold", "min_confidence", "min_reliable_fraction"});
        if (s.has("enabled")) {
            c.motion.enabled = s["enabled"].boolean();
        }
        if (s.has("threshold")) {
            c.motion.threshold = s["threshold"].number();
        }
        if (s.has("min_confidence")) {
            c.motion.min_confidence = s["min_confidence"].number();
        }
        if (s.has("min_reliable_fraction")) {
            c.motion.min_reliable_fraction = s["min_reliable_fraction"].number();
        }
    }
    read_gate(n, "cut", c.cut);
    read_gate(n, "blackness", c.blackness);
    read_gate(n, "variance", c.variance);
    if (n.has("text")) {
        const Node s = n["text"];
        s.only({"enabled"});
        if (s.has("enabled")) {
            c.text_enabled = s["enabled"].boolean();
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        // "filter config: <field> <reason>"
        std::string msg = e.what();
        const std::string prefix = "filter config: ";
        if (msg.rfind(prefix, 0) == 0) {
            msg = msg.substr(prefix.size());
        }
        const auto space = msg.find(' ');
        throw FormatError(source, "$." + msg.substr(0, space), msg.substr(space + 1));
    }
    return c;
}

std::string serialize(const VerdictFile& v)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json clips = Json::array();
    for (const auto& c : v.clips) {
        Json e;
        e["source"] = c.source;
        e["start"] = c.range.start;
        e["end"] = c.range.end;
        e["fps"] = c.fps;
        if (c.likes) {
            e["likes"] = *c.likes;
        }
        e["accepted"] = c.accepted();
        e["first_failure"] = c.first_failure();
        if (!c.error.empty()) {
            e["error"] = c.error;
        }
        Json verdicts = Json::array();
        for (const auto& f : c.verdicts) {
            verdicts.push_back({{"filter", f.filter}, {"pass", f.pass}, {"score", f.score}});
        }
        e["verdicts"] = std::move(verdicts);
        clips.push_back(std::move(e));
    }
    j["clips"] = std::move(clips);
    Json rejected;
    for (const auto& [name, count] : v.summary.rejected_by) {
        rejected[name] = count;
    }
    j["summary"] = {{"videos", v.summary.videos},
                    {"clips", v.summary.clips},
                    {"accepted", v.summary.accepted},
                    {"rejected_by", rejected.is_null() ? Json::object() : rejected}};
    return dump(j);
}

VerdictFile parse_verdicts(std::string_view text, const std::string& source)
{
    const Json j = parse_json(text, source);
    const Node n = root(j, source);
    n.only({"schema_version", "clips", "summary"});
    VerdictFile v;
    const Node clips = n["clips"];
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const Node e = clips.at(i);
        e.only({"source", "start", "end", "fps", "likes", "accepted", "first_failure", "error", "verdicts"});
        ClipRecord c;
        c.source = e["source"].string();
        c.range.start = e["start"].int32(0, INT32_MAX);
        c.range.end = e["end"].int32(c.range.start, INT32_MAX);
        c.fps = e["fps"].number();
        if (e.has("likes")) {
            c.likes = e["likes"].int32(0, INT32_MAX);
        }
        if (e.has("error")) {
            c.error = e["error"].string();
        }
        const Node verdicts = e["verdicts"];
        for (std::size_t k = 0; k < verdicts.size(); ++k) {
            const Node f = verdicts.at(k);
            f.only({"filter", "pass", "score"});
            c.verdicts.push_back({f["filter"].string(), f["pass"].boolean(), f["score"].number()});
        }
        if (e["accepted"].boolean() != c.accepted()) {
            e["accepted"].fail("disagrees with the verdicts");
        }
        if (e["first_failure"].string() != c.first_failure()) {
            e["first_failure"].fail("disagrees with the verdicts");
        }
        v.clips.push_back(std::move(c));
    }
    const Node s = n["summary"];
    s.only({"videos", "clips", "accepted", "rejected_by"});
    v.summary.videos = s["videos"].int32(0, INT32_MAX);
    v.summary.clips = s["clips"].int32(0, INT32_MAX);
    v.summary.accepted = s["accepted"].int32(0, INT32_MAX);
    const Node r = s["rejected_by"];
    if (!j["summary"]["rejected_by"].is_object()) {
        r.fail("expected an object");
    }
    for (const auto& [name, count] : j["summary"]["rejected_by"].items()) {
        v.summary.rejected_by.emplace_back(name, r[name.c_str()].int32(0, INT32_MAX));
    }
    return v;
}

std::string read_text(const std::filesystem::path& path)
{
    const auto bytes = read_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    write_bytes_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

namespace {

template <typename F>
auto read_document(const std::filesystem::path& path, F parse)
{
    std::string text;
    try {
        text = read_text(path);
    } catch (const std::runtime_error& e) {
        throw FormatError(path.string(), "file", "cannot be read");
    }
    return parse(text, path.string());
}

} // namespace

ClipManifest read_clip_manifest(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_clip_manifest(t, s); });
}

TrajectoryFile read_trajectory(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_trajectory(t, s); });
}

AnnotationFile read_annotations(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_annotations(t, s); });
}

CorpusManifest read_corpus_manifest(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_corpus_manifest(t, s); });
}

FilterConfig read_filter_config(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_filter_config(t, s); });
}

VerdictFile read_verdicts(const std::filesystem::path& path)
{
    return read_document(path, [](std::string_view t, const std::string& s) { return parse_verdicts(t, s); });
}

namespace {

void check_png(const std::filesystem::path& file, int width, int height)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!std::filesystem::exists(file)) {
        throw FormatError(file.string(), "file", "missing");
    }
    if (!png_image_begin_read_from_file(&image, file.string().c_str())) {
        throw FormatError(file.string(), "file", std::string("not a readable png: ") + image.message);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    png_image_free(&image);
    if (w != width || h != height) {
        throw FormatError(file.string(), "file",
                          "is " + std::to_string(w) + "x" + std::to_string(h) + ", manifest declares " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

} // namespace

void validate_clip_files(const ClipManifest& m, const std::filesystem::path& dir)
{
    for (int k = 0; k < m.frames; ++k) {
        check_png(dir / expand_frame_pattern(m.frame_pattern, k), m.width, m.height);
        if (m.mask_pattern) {
            check_png(dir / expand_frame_pattern(*m.mask_pattern, k), m.width, m.height);
        }
    }
}

LoadedClip read_clip(const std::filesystem::path& dir)
{
    LoadedClip c;
    c.manifest = read_clip_manifest(dir / kManifestName);
    validate_clip_files(c.manifest, dir);
    for (int k = 0; k < c.manifest.frames; ++k) {
        c.images.push_back(read_png(dir / expand_frame_pattern(c.manifest.frame_pattern, k)));
        if (c.manifest.mask_pattern) {
            c.masks.push_back(read_png_mask(dir / expand_frame_pattern(*c.manifest.mask_pattern, k)));
        }
    }
    return c;
}

PerspectiveClip to_perspective_clip(const LoadedClip& c)
{
    PerspectiveClip out;
    out.fps = c.manifest.fps;
    for (const auto& img : c.images) {
        out.frames.emplace_back(img);
    }
    return out;
}

EquirectClip to_equirect_clip(const LoadedClip& c)
{
    if (c.manifest.kind != RasterKind::equirect) {
        throw std::invalid_argument("clip is not equirectangular");
    }
    EquirectClip out;
    out.fps = c.manifest.fps;
    for (std::size_t k = 0; k < c.images.size(); ++k) {
        if (c.masks.empty()) {
            out.frames.emplace_back(c.images[k]);
        } else {
            out.frames.emplace_back(c.images[k], c.masks[k]);
        }
    }
    return out;
}

ClipManifest write_clip(const std::filesystem::path& dir, const PerspectiveClip& clip,
                        const std::optional<FieldOfView>& fov, const std::optional<std::string>& trajectory)
{
    clip.validate();
    std::filesystem::create_directories(dir);
    ClipManifest m;
    m.kind = RasterKind::perspective;
    m.frames = static_cast<int>(clip.size());
    m.fps = clip.fps;
    m.width = clip.frames.front().width();
    m.height = clip.frames.front().height();
    m.fov = fov;
    m.trajectory = trajectory;
    for (int k = 0; k < m.frames; ++k) {
        write_png(dir / expand_frame_pattern(m.frame_pattern, k), clip.frames[static_cast<std::size_t>(k)].image());
    }
    write_document(dir / kManifestName, m);
    return m;
}

ClipManifest write_clip(const std::filesystem::path& dir, const EquirectClip& clip)
{
    clip.validate();
    std::filesystem::create_directories(dir);
    ClipManifest m;
    m.kind = RasterKind::equirect;
    m.mask_pattern = "mask_%05d.png";
    m.frames = static_cast<int>(clip.size());
    m.fps = clip.fps;
    m.width = clip.frames.front().width();
    m.height = clip.frames.front().height();
    for (int k = 0; k < m.frames; ++k) {
        const auto& f = clip.frames[static_cast<std::size_t>(k)];
        write_png(dir / expand_frame_pattern(m.frame_pattern, k), f.image());
        write_png(dir / expand_frame_pattern(*m.mask_pattern, k), f.mask());
    }
    write_document(dir / kManifestName, m);
    return m;
}

std::vector<VideoInput> load_corpus(const std::filesystem::path& manifest_path)
{
    const CorpusManifest corpus = read_corpus_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<VideoInput> out;
    for (const auto& e : corpus.videos) {
        VideoInput v;
        v.id = e.id;
        v.fps = e.fps;
        v.likes = e.likes;
        try {
            const LoadedClip c = read_clip(base / e.path);
            if (std::abs(c.manifest.fps - e.fps) > 1e-9) {
                throw FormatError((base / e.path / kManifestName).string(), "$.fps",
                                  "disagrees with the corpus manifest");
            }
            v.frames = c.images;
        } catch (const std::exception& ex) {
            v.load_error = ex.what();
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace pano
