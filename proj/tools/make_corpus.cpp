// Writes the adversarial filter corpus: one clean video and one video per violation.
//   make_corpus <out-dir>

#include "pano/formats.hpp"
#include "pano/png_io.hpp"
#include "synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

using namespace pano;
namespace fs = std::filesystem;

namespace {

constexpr int kWidth = 512;
constexpr int kHeight = 256;
constexpr int kFrames = 21;
constexpr int kStep = 12;

Image scene(std::uint64_t seed, int w = kWidth, int h = kHeight)
{
    testing::SceneStyle s;
    s.seed = seed;
    return testing::scene_panorama(w, h, s);
}

Image stacked_frame(int k)
{
    const Image top = circular_shift(scene(201, kWidth, kHeight / 2), k * kStep);
    testing::SceneStyle dusk;
    dusk.seed = 202;
    dusk.sky_top = {0.9f, 0.6f, 0.3f};
    dusk.sky_horizon = {0.95f, 0.8f, 0.5f};
    const Image bottom = circular_shift(testing::scene_panorama(kWidth, kHeight / 2, dusk), k * kStep);
    Image out(kWidth, kHeight);
    for (int y = 0; y < kHeight; ++y) {
        for (int x = 0; x < kWidth; ++x) {
            out.set(x, y, y < kHeight / 2 ? top.at(x, y) : bottom.at(x, y - kHeight / 2));
        }
    }
    return out;
}

Image mirrored_frame(int k)
{
    Image out = circular_shift(scene(301), k * kStep);
    for (int y = 0; y < kHeight; ++y) {
        for (int x = 0; x < kWidth / 2; ++x) {
            out.set(kWidth - 1 - x, y, out.at(x, y));
        }
    }
    return out;
}

Image cut_frame(int k)
{
    testing::SceneStyle night;
    night.seed = 402;
    night.sky_top = {0.02f, 0.02f, 0.1f};
    night.sky_horizon = {0.2f, 0.1f, 0.3f};
    night.ground = {0.12f, 0.1f, 0.1f};
    if (k >= 4 && k < 14) {
        return circular_shift(testing::scene_panorama(kWidth, kHeight, night), k * kStep);
    }
    return circular_shift(scene(401), k * kStep);
}

Image dark_frame(int k)
{
    Image out = circular_shift(scene(501), k * kStep);
    for (int x = 0; x < kWidth; ++x) {
        const double edge = kHeight * (0.5 + 0.03 * std::sin(kTwoPi * 3 * x / kWidth));
        for (int y = static_cast<int>(std::ceil(edge)); y < kHeight; ++y) {
            out.set(x, y, {0, 0, 0});
        }
    }
    return out;
}

void write_video(const fs::path& dir, const std::function<Image(int)>& frame)
{
    fs::create_directories(dir);
    ClipManifest m;
    m.kind = RasterKind::equirect;
    m.frames = kFrames;
    m.fps = 1.0;
    m.width = kWidth;
    m.height = kHeight;
    for (int k = 0; k < kFrames; ++k) {
        write_png(dir / expand_frame_pattern(m.frame_pattern, k), frame(k));
    }
    write_document(dir / kManifestName, m);
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::fprintf(stderr, "usage: make_corpus <out-dir>\n");
        return 2;
    }
    const fs::path out = argv[1];
    const Image clean = scene(101);
    const Image still = scene(601);

    struct Video {
        const char* id;
        std::function<Image(int)> frame;
    };
    const Video videos[] = {
        {"clean", [&](int k) { return circular_shift(clean, k * kStep); }},
        {"stacked", stacked_frame},
        {"mirrored", mirrored_frame},
        {"static", [&](int) { return still; }},
        {"cut", cut_frame},
        {"dark", dark_frame},
    };
    CorpusManifest corpus;
    for (const auto& v : videos) {
        write_video(out / v.id, v.frame);
        corpus.videos.push_back({v.id, v.id, 1.0, 120});
    }
    write_document(out / "corpus.json", corpus);
    return 0;
}
