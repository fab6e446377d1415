#pragma once

// On-disk documents. Every structured document is JSON with a fixed key order,
// two-space indentation and a trailing newline; serialize(parse(text)) == text for
// canonical text. Angles are radians rounded to 9 significant digits.

#include "pano/camera_sim.hpp"
#include "pano/filters.hpp"
#include "pano/lines.hpp"
#include "pano/projection.hpp"
#include "pano/raster.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pano {

inline constexpr int kSchemaVersion = 1;

/// Parse or validation failure. `location` is "line L, column C" for syntax errors
/// and a JSON path such as "$.frames[3].index" for validation errors.
class FormatError : public std::runtime_error {
public:
    FormatError(std::string source, std::string location, std::string detail);

    const std::string& source() const { return source_; }
    const std::string& location() const { return location_; }
    const std::string& detail() const { return detail_; }

private:
    std::string source_;
    std::string location_;
    std::string detail_;
};

/// Rounds to 9 significant digits, the precision used for serialized angles.
double round_angle(double radians);

enum class RasterKind { perspective, equirect };

struct ClipManifest {
    RasterKind kind = RasterKind::perspective;
    std::string frame_pattern = "frame_%05d.png";
    std::optional<std::string> mask_pattern; ///< equirect only
    int frames = 0;
    double fps = 0.0;
    int width = 0;
    int height = 0;
    std::optional<FieldOfView> fov;
    std::optional<std::string> trajectory; ///< path relative to the manifest

    friend bool operator==(const ClipManifest&, const ClipManifest&) = default;
};

/// Expands a pattern with exactly one %0Nd field.
std::string expand_frame_pattern(const std::string& pattern, int index);

struct TrajectoryFile {
    Trajectory trajectory;
    std::optional<MotionParams> motion;
};

struct AnnotatedLine {
    std::string label;
    LineSegment segment;

    friend bool operator==(const AnnotatedLine&, const AnnotatedLine&) = default;
};

/// The perspective view the lines were drawn in.
struct AnnotationView {
    int frame = 0;
    EulerPose pose;
    FieldOfView fov;
};

struct AnnotationFile {
    std::string image;
    int width = 0;
    int height = 0;
    std::optional<AnnotationView> view;
    std::vector<AnnotatedLine> lines;
};

struct CorpusEntry {
    std::string id;
    std::string path; ///< clip directory relative to the corpus manifest
    double fps = 0.0;
    std::optional<int> likes;

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct CorpusManifest {
    std::vector<CorpusEntry> videos;

    friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

struct VerdictFile {
    std::vector<ClipRecord> clips;
    PipelineSummary summary;
};

std::string serialize(const ClipManifest& m);
std::string serialize(const TrajectoryFile& t);
std::string serialize(const AnnotationFile& a);
std::string serialize(const CorpusManifest& c);
std::string serialize(const FilterConfig& c);
std::string serialize(const VerdictFile& v);

// `source` names the document in error messages.
ClipManifest parse_clip_manifest(std::string_view text, const std::string& source = "<memory>");
TrajectoryFile parse_trajectory(std::string_view text, const std::string& source = "<memory>");
AnnotationFile parse_annotations(std::string_view text, const std::string& source = "<memory>");
CorpusManifest parse_corpus_manifest(std::string_view text, const std::string& source = "<memory>");
/// Missing fields take their defaults.
FilterConfig parse_filter_config(std::string_view text, const std::string& source = "<memory>");
VerdictFile parse_verdicts(std::string_view text, const std::string& source = "<memory>");

std::string read_text(const std::filesystem::path& path);
/// Atomic replace of `path`.
void write_text(const std::filesystem::path& path, const std::string& text);

template <typename T>
void write_document(const std::filesystem::path& path, const T& value)
{
    write_text(path, serialize(value));
}

ClipManifest read_clip_manifest(const std::filesystem::path& path);
TrajectoryFile read_trajectory(const std::filesystem::path& path);
AnnotationFile read_annotations(const std::filesystem::path& path);
CorpusManifest read_corpus_manifest(const std::filesystem::path& path);
FilterConfig read_filter_config(const std::filesystem::path& path);
VerdictFile read_verdicts(const std::filesystem::path& path);

inline constexpr const char* kManifestName = "manifest.json";

/// Checks that every frame (and mask) file exists and has the declared size.
/// Throws FormatError naming the first offending file.
void validate_clip_files(const ClipManifest& m, const std::filesystem::path& dir);

struct LoadedClip {
    ClipManifest manifest;
    std::vector<Image> images;
    std::vector<Mask> masks; ///< empty unless the manifest has a mask pattern
};

/// Reads dir/manifest.json, validates the files and loads every frame.
LoadedClip read_clip(const std::filesystem::path& dir);
PerspectiveClip to_perspective_clip(const LoadedClip& c);
EquirectClip to_equirect_clip(const LoadedClip& c);

/// Writes frames, masks and manifest.json into `dir` (created if needed).
ClipManifest write_clip(const std::filesystem::path& dir, const PerspectiveClip& clip,
                        const std::optional<FieldOfView>& fov = std::nullopt,
                        const std::optional<std::string>& trajectory = std::nullopt);
ClipManifest write_clip(const std::filesystem::path& dir, const EquirectClip& clip);

/// Loads every video of a corpus; unreadable videos carry a load error instead of frames.
std::vector<VideoInput> load_corpus(const std::filesystem::path& manifest_path);

} // namespace pano
