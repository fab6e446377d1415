#include "doctest.h"

#include "pano/camera_sim.hpp"
#include "pano/formats.hpp"
#include "pano/png_io.hpp"
#include "pano/rng.hpp"
#include "synthetic.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unistd.h>

using namespace pano;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(PANO_TEST_DATA_DIR) / "golden";

class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("pano_formats_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

template <typename Parse>
FormatError parse_error(Parse parse, const std::string& text)
{
    try {
        parse(text, "doc.json");
    } catch (const FormatError& e) {
        return e;
    }
    FAIL("document was accepted: " << text);
    return FormatError("", "", "");
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("golden documents round-trip byte for byte")
{
    SUBCASE("clip manifests")
    {
        for (const char* name : {"clip_perspective.json", "clip_equirect.json"}) {
            const std::string text = read_text(kGolden / name);
            CHECK(serialize(parse_clip_manifest(text)) == text);
        }
    }
    SUBCASE("trajectory")
    {
        const std::string text = read_text(kGolden / "trajectory.json");
        const TrajectoryFile t = parse_trajectory(text);
        CHECK(t.trajectory.size() == 25);
        REQUIRE(t.motion);
        CHECK(t.motion->seed == 7);
        CHECK(serialize(t) == text);
    }
    SUBCASE("annotations")
    {
        const std::string text = read_text(kGolden / "annotations.json");
        const AnnotationFile a = parse_annotations(text);
        CHECK(a.lines.size() == 2);
        CHECK(a.lines[0].label == "roofline");
        CHECK(serialize(a) == text);
    }
    SUBCASE("corpus")
    {
        const std::string text = read_text(kGolden / "corpus.json");
        const CorpusManifest c = parse_corpus_manifest(text);
        CHECK(c.videos.size() == 2);
        CHECK_FALSE(c.videos[1].likes);
        CHECK(serialize(c) == text);
    }
    SUBCASE("filter config")
    {
        const std::string text = read_text(kGolden / "filter_config.json");
        CHECK(serialize(parse_filter_config(text)) == text);
        CHECK(serialize(FilterConfig{}) == text);
    }
    SUBCASE("verdicts")
    {
        const std::string text = read_text(kGolden / "verdicts.json");
        const VerdictFile v = parse_verdicts(text);
        CHECK(v.clips.size() == 3);
        CHECK(v.clips[2].first_failure() == "read");
        CHECK(serialize(v) == text);
    }
}

TEST_CASE("a simulated 25-frame trajectory round-trips to identical bytes")
{
    const auto [params, fov] = sample_params(ParamRanges{}, 11);
    TrajectoryFile t;
    t.trajectory.poses = simulate_trajectory(params, 25);
    t.trajectory.fov = fov;
    t.motion = params;
    const std::string first = serialize(t);
    const TrajectoryFile back = parse_trajectory(first);
    CHECK(serialize(back) == first);
    CHECK(back.trajectory.size() == 25);
    for (std::size_t k = 0; k < 25; ++k) {
        CHECK(back.trajectory.poses[k].yaw == doctest::Approx(t.trajectory.poses[k].yaw).epsilon(1e-8));
    }
}

TEST_CASE("angle rounding keeps nine significant digits")
{
    CHECK(round_angle(kPi) == 3.14159265);
    CHECK(round_angle(-1.23456789012e-5) == -1.23456789e-5);
    SplitMix64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-kPi, kPi);
        CHECK(round_angle(round_angle(v)) == round_angle(v));
        CHECK(std::abs(round_angle(v) - v) <= 5e-9 * std::abs(v));
    }
}

TEST_CASE("filter config fills in defaults")
{
    const FilterConfig c = parse_filter_config(R"({"schema_version": 1, "motion": {"threshold": 1.5}})");
    CHECK(c.motion.threshold == 1.5);
    CHECK(c.motion.min_confidence == FilterConfig{}.motion.min_confidence);
    CHECK(c.clip_seconds == 10.0);
}

TEST_CASE("syntax errors carry line and column")
{
    const std::string text = "{\n  \"schema_version\": 1,\n  \"frames\": [1, 2,, 3]\n}\n";
    const FormatError e = parse_error([](auto t, auto s) { return parse_trajectory(t, s); }, text);
    CHECK(e.source() == "doc.json");
    CHECK(e.location() == "line 3, column 19");

    const std::string golden = read_text(kGolden / "corpus.json");
    const FormatError trailing =
        parse_error([](auto t, auto s) { return parse_corpus_manifest(t, s); }, golden + "{}");
    CHECK(trailing.location().rfind("line ", 0) == 0);
    CHECK(trailing.location().find(std::to_string(std::count(golden.begin(), golden.end(), '\n') + 1)) !=
          std::string::npos);

    CHECK_THROWS_AS(parse_annotations(""), FormatError);
}

TEST_CASE("validation errors carry a document path")
{
    const std::string traj = read_text(kGolden / "trajectory.json");
    auto parse_t = [](auto t, auto s) { return parse_trajectory(t, s); };

    SUBCASE("non-contiguous indices")
    {
        const FormatError e = parse_error(parse_t, replace(traj, "\"index\": 3,", "\"index\": 4,"));
        CHECK(e.location() == "$.frames[3].index");
    }
    SUBCASE("unknown schema version")
    {
        const FormatError e = parse_error(parse_t, replace(traj, "\"schema_version\": 1", "\"schema_version\": 2"));
        CHECK(e.location() == "$.schema_version");
    }
    SUBCASE("unknown field")
    {
        const FormatError e = parse_error(parse_t, replace(traj, "\"index\": 2,", "\"index\": 2, \"speed\": 1,"));
        CHECK(e.location() == "$.frames[2].speed");
    }
    SUBCASE("wrong type")
    {
        const FormatError e = parse_error(parse_t, replace(traj, "\"yaw\": 0.527290683", "\"yaw\": \"east\""));
        CHECK(e.location() == "$.frames[0].yaw");
    }
    SUBCASE("fov out of range")
    {
        const FormatError e = parse_error(parse_t, replace(traj, "\"horizontal\": 1.30899694", "\"horizontal\": 3.5"));
        CHECK(e.location() == "$.fov");
    }
    SUBCASE("annotation endpoint outside the image")
    {
        const std::string ann = read_text(kGolden / "annotations.json");
        const FormatError e = parse_error([](auto t, auto s) { return parse_annotations(t, s); },
                                          replace(ann, "\"x2\": 200.0", "\"x2\": 256.0"));
        CHECK(e.location() == "$.lines[0].x2");
    }
    SUBCASE("equirect manifest must be 2:1")
    {
        const std::string m = read_text(kGolden / "clip_equirect.json");
        const FormatError e = parse_error([](auto t, auto s) { return parse_clip_manifest(t, s); },
                                          replace(m, "\"height\": 512", "\"height\": 500"));
        CHECK(e.location() == "$.width");
    }
    SUBCASE("missing field")
    {
        const std::string m = read_text(kGolden / "clip_perspective.json");
        const FormatError e = parse_error([](auto t, auto s) { return parse_clip_manifest(t, s); },
                                          replace(m, "  \"frames\": 25,\n", ""));
        CHECK(e.location() == "$");
        CHECK(e.detail().find("frames") != std::string::npos);
    }
    SUBCASE("filter config range")
    {
        const FormatError e = parse_error([](auto t, auto s) { return parse_filter_config(t, s); },
                                          R"({"schema_version": 1, "blackness": {"threshold": 2}})");
        CHECK(e.location() == "$.blackness.threshold");
    }
    SUBCASE("verdicts that disagree with their summary fields")
    {
        const std::string v = read_text(kGolden / "verdicts.json");
        const FormatError e = parse_error([](auto t, auto s) { return parse_verdicts(t, s); },
                                          replace(v, "\"accepted\": true", "\"accepted\": false"));
        CHECK(e.location() == "$.clips[0].accepted");
    }
}

TEST_CASE("frame pattern expansion")
{
    CHECK(expand_frame_pattern("frame_%05d.png", 7) == "frame_00007.png");
    CHECK(expand_frame_pattern("m%03d", 12345) == "m12345");
    CHECK_THROWS_AS(expand_frame_pattern("frame.png", 1), std::invalid_argument);
}

TEST_CASE("png encode and decode")
{
    const Image img = quantize(testing::noise_image(37, 19, 8));
    const Image back = decode_png(encode_png(img));
    CHECK(back == img);
    CHECK(encode_png(back) == encode_png(img));

    Mask m(20, 10, false);
    m.set(3, 4, true);
    m.set(19, 9, true);
    CHECK(decode_png_mask(encode_png(m)) == m);

    CHECK_THROWS_AS(decode_png({1, 2, 3, 4}), std::runtime_error);
    CHECK(quantize(Image(2, 2, {0.5f, 1.5f, -1.0f})).at(0, 0) == Rgb{128 / 255.0f, 1.0f, 0.0f});
}

TEST_CASE("clip directories")
{
    TempDir dir;

    SUBCASE("equirect round trip")
    {
        EquirectClip clip;
        clip.fps = 2;
        for (int k = 0; k < 3; ++k) {
            Mask mask(64, 32, false);
            for (int x = 0; x < 10 + k; ++x) {
                mask.set(x, 5, true);
            }
            clip.frames.emplace_back(quantize(testing::smooth_pattern(64, 32, static_cast<std::uint64_t>(k))), mask);
        }
        const ClipManifest m = write_clip(dir.path(), clip);
        CHECK(fs::exists(dir.path() / "frame_00002.png"));
        CHECK(fs::exists(dir.path() / "mask_00000.png"));
        const LoadedClip loaded = read_clip(dir.path());
        CHECK(loaded.manifest == m);
        const EquirectClip back = to_equirect_clip(loaded);
        CHECK(back.frames == clip.frames);
        CHECK_THROWS_AS(to_equirect_clip(LoadedClip{ClipManifest{}, {}, {}}), std::invalid_argument);
    }

    SUBCASE("missing frame file is named")
    {
        PerspectiveClip clip;
        clip.fps = 1;
        for (int k = 0; k < 3; ++k) {
            clip.frames.emplace_back(quantize(testing::smooth_pattern(16, 16, static_cast<std::uint64_t>(k))));
        }
        write_clip(dir.path(), clip, FieldOfView::from_degrees(60, 60));
        fs::remove(dir.path() / "frame_00001.png");
        try {
            read_clip(dir.path());
            FAIL("missing frame accepted");
        } catch (const FormatError& e) {
            CHECK(e.source() == (dir.path() / "frame_00001.png").string());
        }
    }

    SUBCASE("dimension mismatch is a validation error")
    {
        PerspectiveClip clip;
        clip.fps = 1;
        clip.frames.emplace_back(16, 16);
        write_clip(dir.path(), clip);
        write_png(dir.path() / "frame_00000.png", Image(16, 15));
        try {
            read_clip(dir.path());
            FAIL("mismatched frame accepted");
        } catch (const FormatError& e) {
            CHECK(e.detail().find("16x15") != std::string::npos);
        }
    }
}

TEST_CASE("corpus loading records unreadable videos")
{
    TempDir dir;
    PerspectiveClip clip;
    clip.fps = 1;
    clip.frames.emplace_back(quantize(testing::smooth_pattern(32, 16, 1)));
    clip.frames.emplace_back(quantize(testing::smooth_pattern(32, 16, 2)));
    write_clip(dir.path() / "good", clip);
    CorpusManifest c;
    c.videos = {{"good", "good", 1.0, 80}, {"gone", "gone", 1.0, std::nullopt}};
    write_document(dir.path() / "corpus.json", c);

    const auto videos = load_corpus(dir.path() / "corpus.json");
    REQUIRE(videos.size() == 2);
    CHECK(videos[0].frames.size() == 2);
    CHECK(videos[0].likes == 80);
    CHECK(videos[0].load_error.empty());
    CHECK(videos[1].frames.empty());
    CHECK(videos[1].load_error.find("gone") != std::string::npos);
}

TEST_CASE("atomic writes replace the whole file")
{
    TempDir dir;
    const fs::path p = dir.path() / "doc.json";
    write_text(p, "first\n");
    write_text(p, "second\n");
    CHECK(read_text(p) == "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) {
        ++entries;
    }
    CHECK(entries == 1);
}
