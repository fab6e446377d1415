// pano: command-line entry points. Angles are degrees on the command line.

#include "pano/blend.hpp"
#include "pano/camera_sim.hpp"
#include "pano/filters.hpp"
#include "pano/formats.hpp"
#include "pano/metrics.hpp"
#include "pano/png_io.hpp"
#include "pano/projection.hpp"
#include "pano/service.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace pano;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct CliError : std::runtime_error {
    CliError(std::string kind, const std::string& detail) : std::runtime_error(detail), kind(std::move(kind)) {}
    std::string kind;
};

int report(const std::string& kind, const std::string& detail, int code)
{
    std::string escaped;
    for (char c : detail) {
        if (c == '"' || c == '\\') {
            escaped += '\\';
            escaped += c;
        } else if (c == '\n') {
            escaped += "\\n";
        } else {
            escaped += c;
        }
    }
    std::fprintf(stderr, "error kind=%s detail=\"%s\"\n", kind.c_str(), escaped.c_str());
    return code;
}

void require_dir(const fs::path& p, const char* flag)
{
    if (!fs::is_directory(p)) {
        throw CliError("io", std::string(flag) + " " + p.string() + " is not a directory");
    }
}

void require_file(const fs::path& p, const char* flag)
{
    if (!fs::is_regular_file(p)) {
        throw CliError("io", std::string(flag) + " " + p.string() + " does not exist");
    }
}

void require_output_parent(const fs::path& p, const char* flag)
{
    const fs::path parent = fs::absolute(p).parent_path();
    if (!fs::is_directory(parent)) {
        throw CliError("io", std::string(flag) + " parent directory " + parent.string() + " does not exist");
    }
}

void print_json(const Json& j)
{
    std::cout << j.dump(2) << "\n";
}

struct ClipIo {
    fs::path in;
    fs::path traj;
    fs::path out;
    int height = kDefaultEquirectHeight;
};

void add_projection(CLI::App& app, const char* name, const char* help, bool relative)
{
    auto* cmd = app.add_subcommand(name, help);
    auto opts = std::make_shared<ClipIo>();
    cmd->add_option("--in", opts->in, "perspective clip directory")->required();
    cmd->add_option("--traj", opts->traj, "trajectory file")->required();
    cmd->add_option("--height", opts->height, "equirect height")->check(CLI::Range(64, 8192));
    cmd->add_option("--out", opts->out, "output clip directory")->required();
    cmd->callback([opts, relative] {
        require_dir(opts->in, "--in");
        require_file(opts->traj, "--traj");
        require_output_parent(opts->out, "--out");
        const PerspectiveClip clip = to_perspective_clip(read_clip(opts->in));
        const TrajectoryFile t = read_trajectory(opts->traj);
        if (t.trajectory.size() != clip.size()) {
            throw CliError("validation", "trajectory has " + std::to_string(t.trajectory.size()) + " poses, clip has " +
                                             std::to_string(clip.size()) + " frames");
        }
        const EquirectClip out = relative ? align_clip(clip, t.trajectory, opts->height)
                                          : project_clip(clip, t.trajectory, opts->height);
        write_clip(opts->out, out);
    });
}

struct UnwrapOpts {
    fs::path in;
    fs::path out;
    int frame = 0;
    ViewRequest view;
    double vfov = 0.0;
};

void add_unwrap(CLI::App& app)
{
    auto* cmd = app.add_subcommand("unwrap", "render a perspective view of one equirect frame");
    auto o = std::make_shared<UnwrapOpts>();
    cmd->add_option("--in", o->in, "equirect clip directory")->required();
    cmd->add_option("--frame", o->frame, "frame index")->check(CLI::NonNegativeNumber);
    cmd->add_option("--yaw", o->view.yaw_deg, "degrees");
    cmd->add_option("--pitch", o->view.pitch_deg, "degrees");
    cmd->add_option("--roll", o->view.roll_deg, "degrees");
    cmd->add_option("--hfov", o->view.hfov_deg, "degrees");
    auto* vfov = cmd->add_option("--vfov", o->vfov, "degrees; derived from the aspect ratio when absent");
    cmd->add_option("--width", o->view.width, "pixels");
    cmd->add_option("--height", o->view.height, "pixels");
    cmd->add_option("--out", o->out, "output PNG")->required();
    cmd->callback([o, vfov] {
        require_dir(o->in, "--in");
        require_output_parent(o->out, "--out");
        if (vfov->count() > 0) {
            o->view.vfov_deg = o->vfov;
        }
        try {
            o->view.validate();
        } catch (const std::invalid_argument& e) {
            throw CliError("validation", e.what());
        }
        const LoadedClip c = read_clip(o->in);
        if (o->frame >= c.manifest.frames) {
            throw CliError("validation", "--frame " + std::to_string(o->frame) + " is past the last frame");
        }
        const EquirectClip clip = to_equirect_clip(c);
        write_png(o->out, unwrap_view(clip.frames[static_cast<std::size_t>(o->frame)], o->view).image());
    });
}

struct SimulateOpts {
    int frames = 25;
    std::uint64_t seed = 0;
    fs::path motion;
    fs::path out;
    std::vector<double> fov;
};

void add_simulate(CLI::App& app)
{
    auto* cmd = app.add_subcommand("simulate", "simulate a camera trajectory");
    auto o = std::make_shared<SimulateOpts>();
    cmd->add_option("--frames", o->frames, "number of frames")->check(CLI::Range(1, 10000000));
    auto* seed = cmd->add_option("--seed", o->seed, "draws motion parameters and FoV");
    auto* motion = cmd->add_option("--motion", o->motion, "trajectory file whose motion block is replayed");
    seed->excludes(motion);
    cmd->add_option("--fov", o->fov, "horizontal and vertical FoV in degrees")->expected(2);
    cmd->add_option("--out", o->out, "output trajectory file")->required();
    cmd->callback([o, seed, motion] {
        require_output_parent(o->out, "--out");
        TrajectoryFile t;
        if (motion->count() > 0) {
            require_file(o->motion, "--motion");
            const TrajectoryFile src = read_trajectory(o->motion);
            if (!src.motion) {
                throw CliError("validation", "--motion " + o->motion.string() + " has no motion block");
            }
            t.motion = src.motion;
            t.trajectory.fov = src.trajectory.fov;
        } else {
            if (seed->count() == 0) {
                throw CliError("usage", "simulate needs --seed or --motion");
            }
            auto [params, fov] = sample_params(ParamRanges{}, o->seed);
            t.motion = params;
            t.trajectory.fov = fov;
        }
        if (!o->fov.empty()) {
            try {
                t.trajectory.fov = FieldOfView::from_degrees(o->fov[0], o->fov[1]);
            } catch (const std::invalid_argument& e) {
                throw CliError("validation", std::string("--fov ") + e.what());
            }
        }
        t.trajectory.poses = simulate_trajectory(*t.motion, o->frames);
        write_document(o->out, t);
    });
}

struct BlendOpts {
    fs::path primary;
    fs::path rotated;
    fs::path out;
};

void add_blend(CLI::App& app)
{
    auto* cmd = app.add_subcommand("blend", "seam-blend a clip with its 180-degree re-generation");
    auto o = std::make_shared<BlendOpts>();
    cmd->add_option("--primary", o->primary, "equirect clip directory")->required();
    cmd->add_option("--rotated", o->rotated, "equirect clip directory generated at a 180-degree offset")->required();
    cmd->add_option("--out", o->out, "output clip directory")->required();
    cmd->callback([o] {
        require_dir(o->primary, "--primary");
        require_dir(o->rotated, "--rotated");
        require_output_parent(o->out, "--out");
        write_clip(o->out, blend_clips(to_equirect_clip(read_clip(o->primary)), to_equirect_clip(read_clip(o->rotated))));
    });
}

struct WeightmapOpts {
    int height = kDefaultEquirectHeight;
    double delta = kDefaultLatitudeDelta;
    std::string kind = "latitude";
    fs::path out;
};

void add_weightmap(CLI::App& app)
{
    auto* cmd = app.add_subcommand("weightmap", "write a latitude or seam weight map as a PNG");
    auto o = std::make_shared<WeightmapOpts>();
    cmd->add_option("--height", o->height, "equirect height")->check(CLI::Range(2, 8192));
    cmd->add_option("--delta", o->delta, "latitude weight floor");
    cmd->add_option("--kind", o->kind, "latitude or seam")->check(CLI::IsMember({"latitude", "seam"}));
    cmd->add_option("--out", o->out, "output PNG")->required();
    cmd->callback([o] {
        require_output_parent(o->out, "--out");
        if (!(o->delta > 0.0) || !std::isfinite(o->delta)) {
            throw CliError("validation", "--delta must be positive");
        }
        const int h = o->height;
        const int w = 2 * h;
        Image img(w, h);
        Json summary;
        if (o->kind == "latitude") {
            const LatitudeWeightMap m = latitude_weights(h, o->delta);
            const double top = 0.25 + o->delta;
            for (int r = 0; r < h; ++r) {
                const auto v = static_cast<float>(m.weights[static_cast<std::size_t>(r)] / top);
                for (int c = 0; c < w; ++c) {
                    img.set(c, r, {v, v, v});
                }
            }
            summary["kind"] = "latitude";
            summary["delta"] = o->delta;
            summary["min"] = *std::min_element(m.weights.begin(), m.weights.end());
            summary["max"] = *std::max_element(m.weights.begin(), m.weights.end());
            summary["scale"] = top;
        } else {
            const SeamWeightProfile p = seam_profile(w);
            for (int c = 0; c < w; ++c) {
                const auto v = static_cast<float>(p.weights[static_cast<std::size_t>(c)]);
                for (int r = 0; r < h; ++r) {
                    img.set(c, r, {v, v, v});
                }
            }
            summary["kind"] = "seam";
        }
        summary["width"] = w;
        summary["height"] = h;
        write_png(o->out, img);
        print_json(summary);
    });
}

struct FilterOpts {
    fs::path corpus;
    fs::path config;
    fs::path out;
    std::uint64_t seed = 0;
};

void add_filter(CLI::App& app)
{
    auto* cmd = app.add_subcommand("filter", "run the data-filter pipeline over a corpus");
    auto o = std::make_shared<FilterOpts>();
    cmd->add_option("--corpus", o->corpus, "corpus manifest")->required();
    cmd->add_option("--config", o->config, "filter config overrides");
    auto* seed = cmd->add_option("--seed", o->seed, "seed for random frame sampling");
    cmd->add_option("--out", o->out, "verdict file")->required();
    cmd->callback([o, seed] {
        require_file(o->corpus, "--corpus");
        if (!o->config.empty()) {
            require_file(o->config, "--config");
        }
        require_output_parent(o->out, "--out");
        FilterConfig config = o->config.empty() ? FilterConfig{} : read_filter_config(o->config);
        if (seed->count() > 0) {
            config.seed = o->seed;
        }
        const PipelineResult r = run_pipeline(load_corpus(o->corpus), config);
        write_document(o->out, VerdictFile{r.clips, r.summary});
        Json summary;
        summary["videos"] = r.summary.videos;
        summary["clips"] = r.summary.clips;
        summary["accepted"] = r.summary.accepted;
        for (const auto& [name, count] : r.summary.rejected_by) {
            summary["rejected_by"][name] = count;
        }
        print_json(summary);
    });
}

struct MetricOpts {
    std::string which;
    fs::path gt;
    fs::path pred;
    fs::path annotations;
    fs::path pano;
    std::vector<double> neighbor_yaw{-10.0, 10.0};
    double min_score = kDefaultMinMatchScore;
    fs::path out;
};

void add_metric(CLI::App& app)
{
    auto* cmd = app.add_subcommand("metric", "masked PSNR or line consistency");
    auto o = std::make_shared<MetricOpts>();
    cmd->add_option("kind", o->which, "psnr or lines")->required()->check(CLI::IsMember({"psnr", "lines"}));
    cmd->add_option("--gt", o->gt, "psnr: reference equirect clip (its masks select pixels)");
    cmd->add_option("--pred", o->pred, "psnr: predicted equirect clip");
    cmd->add_option("--annotations", o->annotations, "lines: annotation file with a view block");
    cmd->add_option("--pano", o->pano, "lines: equirect clip to evaluate");
    cmd->add_option("--neighbor-yaw", o->neighbor_yaw, "lines: neighbour yaw offsets in degrees");
    cmd->add_option("--min-score", o->min_score, "lines: EA scores below this are unmatched");
    cmd->add_option("--out", o->out, "also write the report here");
    cmd->callback([o] {
        Json report;
        report["schema_version"] = kSchemaVersion;
        if (o->which == "psnr") {
            if (o->gt.empty() || o->pred.empty()) {
                throw CliError("usage", "metric psnr needs --gt and --pred");
            }
            require_dir(o->gt, "--gt");
            require_dir(o->pred, "--pred");
            if (!o->out.empty()) {
                require_output_parent(o->out, "--out");
            }
            report["metric"] = "masked_psnr";
            report["psnr_db"] = masked_psnr(to_equirect_clip(read_clip(o->gt)), to_equirect_clip(read_clip(o->pred)));
        } else {
            if (o->annotations.empty() || o->pano.empty()) {
                throw CliError("usage", "metric lines needs --annotations and --pano");
            }
            require_file(o->annotations, "--annotations");
            require_dir(o->pano, "--pano");
            if (!o->out.empty()) {
                require_output_parent(o->out, "--out");
            }
            const AnnotationFile a = read_annotations(o->annotations);
            if (!a.view) {
                throw CliError("validation", o->annotations.string() + " has no view block");
            }
            LineConsistencyInput in;
            for (const auto& l : a.lines) {
                in.annotations.push_back(l.segment);
            }
            in.width = a.width;
            in.height = a.height;
            in.input_pose = a.view->pose;
            in.fov = a.view->fov;
            in.min_score = o->min_score;
            for (double d : o->neighbor_yaw) {
                in.neighbor_poses.emplace_back(in.input_pose.roll, in.input_pose.pitch,
                                               in.input_pose.yaw + deg_to_rad(d));
            }
            const LineConsistencyReport r = line_consistency(in, to_equirect_clip(read_clip(o->pano)));
            report["metric"] = "line_consistency";
            report["mean_score"] = r.mean_score;
            report["penalized_mean"] = r.penalized_mean;
            report["evaluations"] = r.evaluations;
            report["transferred"] = r.transferred;
            report["dropped_transfers"] = r.dropped_transfers;
            report["matched"] = r.matched;
            report["detected"] = r.detected;
        }
        if (!o->out.empty()) {
            write_text(o->out, report.dump(2) + "\n");
        }
        print_json(report);
    });
}

struct SweepOpts {
    fs::path in;
    fs::path out;
    double from = -90.0;
    double to = 90.0;
    double pitch = 0.0;
    double hfov = 90.0;
    double vfov = 90.0;
    int width = 256;
    int height = 256;
};

void add_sweep(CLI::App& app)
{
    auto* cmd = app.add_subcommand("sweep", "unwrap an equirect clip along a yaw sweep");
    auto o = std::make_shared<SweepOpts>();
    cmd->add_option("--in", o->in, "equirect clip directory")->required();
    cmd->add_option("--from", o->from, "start yaw, degrees");
    cmd->add_option("--to", o->to, "end yaw, degrees");
    cmd->add_option("--pitch", o->pitch, "degrees");
    cmd->add_option("--hfov", o->hfov, "degrees");
    cmd->add_option("--vfov", o->vfov, "degrees");
    cmd->add_option("--width", o->width, "pixels")->check(CLI::Range(1, 8192));
    cmd->add_option("--height", o->height, "pixels")->check(CLI::Range(1, 8192));
    cmd->add_option("--out", o->out, "output perspective clip directory")->required();
    cmd->callback([o] {
        require_dir(o->in, "--in");
        require_output_parent(o->out, "--out");
        FieldOfView fov;
        try {
            fov = FieldOfView::from_degrees(o->hfov, o->vfov);
        } catch (const std::invalid_argument& e) {
            throw CliError("validation", std::string("--hfov/--vfov ") + e.what());
        }
        const SweepResult r = yaw_sweep_unwrap(to_equirect_clip(read_clip(o->in)), deg_to_rad(o->from),
                                               deg_to_rad(o->to), fov, o->width, o->height, deg_to_rad(o->pitch));
        write_clip(o->out, r.views, fov, std::string("trajectory.json"));
        write_document(o->out / "trajectory.json", TrajectoryFile{r.trajectory, std::nullopt});
    });
}

struct PlanOpts {
    int total = 25;
    int window = 25;
    int context = 5;
};

void add_plan(CLI::App& app)
{
    auto* cmd = app.add_subcommand("plan", "print the overlapping window plan");
    auto o = std::make_shared<PlanOpts>();
    cmd->add_option("--total", o->total, "total frames")->required();
    cmd->add_option("--window", o->window, "window length T");
    cmd->add_option("--context", o->context, "context frames S");
    cmd->callback([o] {
        WindowPlan p;
        try {
            p = plan_windows(o->total, o->window, o->context);
        } catch (const std::invalid_argument& e) {
            throw CliError("validation", e.what());
        }
        std::ostringstream line;
        for (std::size_t i = 0; i < p.windows.size(); ++i) {
            line << (i ? " " : "") << "[" << p.windows[i].start << "," << p.windows[i].end << ")";
        }
        std::cout << line.str() << "\n";
    });
}

struct ServeOpts {
    fs::path root;
    std::string host = "127.0.0.1";
    int port = 8080;
};

Service* g_service = nullptr;

void add_serve(CLI::App& app)
{
    auto* cmd = app.add_subcommand("serve", "serve clips and annotations over HTTP");
    auto o = std::make_shared<ServeOpts>();
    cmd->add_option("--root", o->root, "directory of clip directories")->required();
    cmd->add_option("--host", o->host, "bind address");
    cmd->add_option("--port", o->port, "port, 0 picks a free one")->check(CLI::Range(0, 65535));
    cmd->callback([o] {
        require_dir(o->root, "--root");
        Service service(o->root);
        const int port = service.bind(o->host, o->port);
        if (port < 0) {
            throw CliError("io", "cannot bind " + o->host + ":" + std::to_string(o->port));
        }
        std::cout << "listening on http://" << o->host << ":" << port << std::endl;
        g_service = &service;
        std::signal(SIGINT, [](int) {
            if (g_service) {
                g_service->stop();
            }
        });
        std::signal(SIGTERM, [](int) {
            if (g_service) {
                g_service->stop();
            }
        });
        service.listen();
        g_service = nullptr;
    });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"panoramic video geometry toolkit"};
    app.require_subcommand(1);
    add_projection(app, "project", "project a perspective clip at its absolute poses", false);
    add_projection(app, "align", "project a perspective clip at poses relative to frame 0", true);
    add_unwrap(app);
    add_simulate(app);
    add_blend(app);
    add_weightmap(app);
    add_filter(app);
    add_metric(app);
    add_sweep(app);
    add_plan(app);
    add_serve(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), 2);
    } catch (const CliError& e) {
        return report(e.kind, e.what(), e.kind == "usage" ? 2 : 1);
    } catch (const FormatError& e) {
        return report("format", e.what(), 1);
    } catch (const std::invalid_argument& e) {
        return report("validation", e.what(), 1);
    } catch (const std::exception& e) {
        return report("io", e.what(), 1);
    }
    return 0;
}
