#include "spkocc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spkocc/rng.hpp"

namespace spkocc {

std::vector<uint8_t> simulate_pixel(const std::vector<double> &currents,
                                    double threshold)
{
    if (threshold <= 0.0) {
        throw std::invalid_argument("simulate_pixel: threshold must be positive");
    }
    for (double c : currents) {
        if (c < 0.0) {
            throw std::invalid_argument("simulate_pixel: negative current");
        }
    }
    SpikePixelState state{0.0, threshold};
    std::vector<uint8_t> spikes(currents.size(), 0);
    for (std::size_t t = 0; t < currents.size(); ++t) {
        spikes[t] = state.step(currents[t]) ? 1 : 0;
    }
    return spikes;
}

SpikeStream simulate_stream(const std::vector<IntensityImage> &video,
                            double threshold, double gain)
{
    if (video.empty()) {
        throw std::invalid_argument("simulate_stream: empty video");
    }
    const int h = video[0].height();
    const int w = video[0].width();
    for (const auto &frame : video) {
        if (frame.height() != h || frame.width() != w) {
            throw std::invalid_argument("simulate_stream: frame size mismatch");
        }
    }
    return simulate_stream(
        [&](int t, IntensityImage &out) { out = video[t]; }, h, w,
        static_cast<int>(video.size()), threshold, gain);
}

SpikeStream simulate_stream(const std::function<void(int, IntensityImage &)> &frame_at,
                            int height, int width, int num_steps,
                            double threshold, double gain,
                            double jitter_std, uint64_t jitter_seed)
{
    if (threshold <= 0.0 || gain <= 0.0) {
        throw std::invalid_argument("simulate_stream: threshold and gain must be positive");
    }
    SpikeStream stream(height, width, num_steps);
    const std::size_t n = stream.plane_size();
    std::vector<double> voltage(n, 0.0);
    IntensityImage frame(height, width);

    for (int t = 0; t < num_steps; ++t) {
        frame_at(t, frame);
        const double *in = frame.values().data();
        uint8_t *out = stream.step_data(t);
#pragma omp parallel for schedule(static)
        for (int y = 0; y < height; ++y) {
            const std::size_t row = static_cast<std::size_t>(y) * width;
            for (int x = 0; x < width; ++x) {
                const std::size_t i = row + x;
                double current = gain * in[i];
                if (jitter_std > 0.0) {
                    // Counter-based noise: per (pixel, step), independent of
                    // the traversal order so threads cannot change results.
                    uint64_t bits = mix_seed(jitter_seed,
                                             static_cast<uint64_t>(t) * n + i);
                    std::mt19937_64 g(bits);
                    current = std::max(0.0, current + jitter_std * rand_normal(g));
                }
                if (current < 0.0) {
                    current = 0.0;
                }
                voltage[i] += current;
                if (voltage[i] >= threshold) {
                    voltage[i] = 0.0;
                    out[i] = 1;
                } else {
                    out[i] = 0;
                }
            }
        }
    }
    return stream;
}

// ---------------------------------------------------------------------------
// Occluder patterns
// ---------------------------------------------------------------------------

const std::vector<std::string> &occluder_pattern_names()
{
    static const std::vector<std::string> names = {
        "square_mesh", "hexagonal_mesh", "dense_frame", "fence", "fabric_net"};
    return names;
}

std::string to_string(OccluderPattern p)
{
    return occluder_pattern_names()[static_cast<int>(p)];
}

std::optional<OccluderPattern> parse_occluder_pattern(const std::string &name)
{
    const auto &names = occluder_pattern_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return static_cast<OccluderPattern>(i);
        }
    }
    return std::nullopt;
}

namespace {

double wrap_mod(double v, double period)
{
    double m = std::fmod(v, period);
    return m < 0.0 ? m + period : m;
}

IntensityImage make_grid_tile(double cell, double bar)
{
    const int n = std::max(2, static_cast<int>(std::lround(cell)));
    IntensityImage tile(n, n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const bool on = wrap_mod(x, cell) < bar || wrap_mod(y, cell) < bar;
            tile.at(y, x) = on ? 1.0 : 0.0;
        }
    }
    return tile;
}

IntensityImage make_fence_tile(double cell, double bar)
{
    const int w = std::max(2, static_cast<int>(std::lround(cell)));
    const int h = std::max(2, static_cast<int>(std::lround(4.0 * cell)));
    IntensityImage tile(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool slat = wrap_mod(x, cell) < bar;
            const bool rail = wrap_mod(y, 4.0 * cell) < 0.8 * bar;
            tile.at(y, x) = (slat || rail) ? 1.0 : 0.0;
        }
    }
    return tile;
}

IntensityImage make_hex_tile(double cell, double bar)
{
    // Flat-top honeycomb with pitch ~cell; a pixel is on the mesh when it is
    // within bar/2 of the boundary between the two nearest cell centers.
    const double s = cell / std::sqrt(3.0);
    const double px = 3.0 * s;             // horizontal period
    const double py = std::sqrt(3.0) * s;  // vertical period
    const int w = std::max(2, static_cast<int>(std::lround(px)));
    const int h = std::max(2, static_cast<int>(std::lround(py)));
    IntensityImage tile(h, w);
    const double centers[2][2] = {{0.0, 0.0}, {0.5 * py, 1.5 * s}};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double d1 = 1e30, d2 = 1e30;
            for (int ty = -1; ty <= 1; ++ty) {
                for (int tx = -1; tx <= 1; ++tx) {
                    for (const auto &c : centers) {
                        const double cy = c[0] + ty * h;
                        const double cx = c[1] + tx * w;
                        const double d = std::hypot(y - cy, x - cx);
                        if (d < d1) {
                            d2 = d1;
                            d1 = d;
                        } else if (d < d2) {
                            d2 = d;
                        }
                    }
                }
            }
            tile.at(y, x) = (0.5 * (d2 - d1) < 0.5 * bar) ? 1.0 : 0.0;
        }
    }
    return tile;
}

IntensityImage make_fabric_tile(double cell, double bar, uint64_t seed)
{
    // Irregular web: random nodes joined to their nearest neighbours on the
    // torus, rasterized with the given thread thickness.
    const int n = std::max(8, static_cast<int>(std::lround(4.0 * cell)));
    std::mt19937_64 g(mix_seed(seed, 0x0fabul));
    const int num_nodes = 10;
    std::vector<std::pair<double, double>> nodes;
    nodes.reserve(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
        nodes.emplace_back(rand_uniform(g, 0.0, n), rand_uniform(g, 0.0, n));
    }
    auto torus_delta = [&](double a, double b) {
        double d = a - b;
        if (d > 0.5 * n) d -= n;
        if (d < -0.5 * n) d += n;
        return d;
    };
    struct Segment {
        double y0, x0, dy, dx;
    };
    std::vector<Segment> segments;
    for (int i = 0; i < num_nodes; ++i) {
        std::vector<std::pair<double, int>> dist;
        for (int j = 0; j < num_nodes; ++j) {
            if (j == i) continue;
            const double dy = torus_delta(nodes[j].first, nodes[i].first);
            const double dx = torus_delta(nodes[j].second, nodes[i].second);
            dist.emplace_back(std::hypot(dy, dx), j);
        }
        std::sort(dist.begin(), dist.end());
        for (int k = 0; k < 3 && k < static_cast<int>(dist.size()); ++k) {
            const int j = dist[k].second;
            const double dy = torus_delta(nodes[j].first, nodes[i].first);
            const double dx = torus_delta(nodes[j].second, nodes[i].second);
            segments.push_back({nodes[i].first, nodes[i].second, dy, dx});
        }
    }
    IntensityImage tile(n, n);
    const double r = 0.5 * bar;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double best = 1e30;
            for (const auto &s : segments) {
                // Distance on the torus: test the 9 wrapped copies of p.
                for (int ty = -1; ty <= 1 && best > r; ++ty) {
                    for (int tx = -1; tx <= 1; ++tx) {
                        const double pyy = y + ty * n - s.y0;
                        const double pxx = x + tx * n - s.x0;
                        const double len2 = s.dy * s.dy + s.dx * s.dx;
                        double u = len2 > 0 ? (pyy * s.dy + pxx * s.dx) / len2 : 0.0;
                        u = std::clamp(u, 0.0, 1.0);
                        const double d = std::hypot(pyy - u * s.dy, pxx - u * s.dx);
                        best = std::min(best, d);
                    }
                }
                if (best <= r) break;
            }
            tile.at(y, x) = best <= r ? 1.0 : 0.0;
        }
    }
    return tile;
}

double sample_tile_wrapped(const IntensityImage &tile, double y, double x)
{
    const int h = tile.height();
    const int w = tile.width();
    const double fy = wrap_mod(y, h);
    const double fx = wrap_mod(x, w);
    const int y0 = static_cast<int>(fy);
    const int x0 = static_cast<int>(fx);
    const int y1 = (y0 + 1) % h;
    const int x1 = (x0 + 1) % w;
    const double ay = fy - y0;
    const double ax = fx - x0;
    return (1 - ay) * ((1 - ax) * tile.at(y0, x0) + ax * tile.at(y0, x1)) +
           ay * ((1 - ax) * tile.at(y1, x0) + ax * tile.at(y1, x1));
}

double sample_canvas(const IntensityImage &canvas, int y, double x)
{
    if (x < 0.0 || x > canvas.width() - 1.0) {
        throw std::out_of_range(
            "render: background shift runs off the canvas (pad the background)");
    }
    const int x0 = static_cast<int>(x);
    const int x1 = std::min(x0 + 1, canvas.width() - 1);
    const double ax = x - x0;
    return (1 - ax) * canvas.at(y, x0) + ax * canvas.at(y, x1);
}

} // namespace

IntensityImage make_occluder_tile(OccluderPattern pattern, double cell_px,
                                  double bar_px, uint64_t seed)
{
    switch (pattern) {
    case OccluderPattern::kSquareMesh:
        return make_grid_tile(cell_px, bar_px);
    case OccluderPattern::kHexagonalMesh:
        return make_hex_tile(cell_px, bar_px);
    case OccluderPattern::kDenseFrame:
        // Same lattice, dominated by bars instead of holes.
        return make_grid_tile(cell_px, std::max(bar_px, 0.55 * cell_px));
    case OccluderPattern::kFence:
        return make_fence_tile(cell_px, bar_px);
    case OccluderPattern::kFabricNet:
        return make_fabric_tile(cell_px, bar_px, seed);
    }
    throw std::invalid_argument("unknown occluder pattern");
}

IntensityImage make_background_texture(int height, int width, uint64_t seed,
                                       double low, double high)
{
    IntensityImage img(height, width);
    const int periods[] = {48, 24, 12, 6, 3};
    const double weights[] = {1.0, 0.55, 0.3, 0.18, 0.08};
    for (int o = 0; o < 5; ++o) {
        const int p = periods[o];
        const int gh = height / p + 2;
        const int gw = width / p + 2;
        std::mt19937_64 g(mix_seed(seed, 100 + o));
        std::vector<double> lattice(static_cast<std::size_t>(gh) * gw);
        for (auto &v : lattice) {
            v = rand_uniform(g);
        }
        for (int y = 0; y < height; ++y) {
            const double fy = static_cast<double>(y) / p;
            const int y0 = static_cast<int>(fy);
            const double ay = fy - y0;
            for (int x = 0; x < width; ++x) {
                const double fx = static_cast<double>(x) / p;
                const int x0 = static_cast<int>(fx);
                const double ax = fx - x0;
                const double v00 = lattice[y0 * gw + x0];
                const double v01 = lattice[y0 * gw + x0 + 1];
                const double v10 = lattice[(y0 + 1) * gw + x0];
                const double v11 = lattice[(y0 + 1) * gw + x0 + 1];
                img.at(y, x) += weights[o] * ((1 - ay) * ((1 - ax) * v00 + ax * v01) +
                                              ay * ((1 - ax) * v10 + ax * v11));
            }
        }
    }
    const auto [mn, mx] =
        std::minmax_element(img.values().begin(), img.values().end());
    const double span = std::max(1e-9, *mx - *mn);
    for (auto &v : img.values()) {
        v = low + (high - low) * (v - *mn) / span;
    }
    return img;
}

void prepare_scene(SceneSpec &scene)
{
    if (scene.height <= 0 || scene.width <= 0 || scene.duration <= 0) {
        throw std::invalid_argument("scene: dimensions and duration must be positive");
    }
    if (!(scene.depth_occ < scene.depth_bg)) {
        throw std::invalid_argument("scene: occluder must be nearer than background");
    }
    const double end_shift = scene.background_displacement(scene.duration - 1);
    const int margin_left = static_cast<int>(std::ceil(std::max(0.0, -end_shift))) + 1;
    const int needed = scene.width + margin_left +
                       static_cast<int>(std::ceil(std::max(0.0, end_shift))) + 1;
    if (scene.background.height() != scene.height ||
        scene.background.width() < needed) {
        scene.background = make_background_texture(
            scene.height, needed, mix_seed(scene.background_seed, 0xb6));
        scene.background_origin_x = margin_left;
    }
}

namespace {

const IntensityImage &scene_tile(const SceneSpec &scene)
{
    // Tiles are cheap; rebuild per call sites that render many steps cache it.
    thread_local IntensityImage cache;
    thread_local uint64_t cache_key = ~0ull;
    const uint64_t key =
        mix_seed(scene.seed, 0x71e + static_cast<uint64_t>(scene.occluder) * 1315423911ull +
                                 static_cast<uint64_t>(scene.occluder_cell_px * 64) * 2654435761ull +
                                 static_cast<uint64_t>(scene.occluder_bar_px * 64));
    if (cache_key != key) {
        cache = make_occluder_tile(scene.occluder, scene.occluder_cell_px,
                                   scene.occluder_bar_px, mix_seed(scene.seed, 5));
        cache_key = key;
    }
    return cache;
}

void render_into(const SceneSpec &scene, double t, bool with_occluder,
                 IntensityImage &out)
{
    if (t < 0.0 || t > scene.duration - 1.0) {
        throw std::out_of_range("render: step outside capture duration");
    }
    if (scene.background.height() != scene.height ||
        scene.background.width() < scene.width) {
        throw std::invalid_argument("render: scene background not prepared");
    }
    if (out.height() != scene.height || out.width() != scene.width) {
        out = IntensityImage(scene.height, scene.width);
    }
    const double bg_shift = scene.background_origin_x + scene.background_displacement(t);
    const double occ_x = scene.occluder_displacement_x(t);
    const double occ_y = scene.occluder_displacement_y(t);
    const IntensityImage *tile = with_occluder ? &scene_tile(scene) : nullptr;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < scene.height; ++y) {
        for (int x = 0; x < scene.width; ++x) {
            double v = sample_canvas(scene.background, y, x + bg_shift);
            if (tile) {
                const double alpha = sample_tile_wrapped(*tile, y + occ_y, x + occ_x);
                v = alpha * scene.occluder_intensity + (1.0 - alpha) * v;
            }
            out.at(y, x) = v;
        }
    }
}

} // namespace

IntensityImage render_occluded_scene(const SceneSpec &scene, double t)
{
    IntensityImage out;
    render_into(scene, t, true, out);
    return out;
}

IntensityImage render_background(const SceneSpec &scene, double t)
{
    IntensityImage out;
    render_into(scene, t, false, out);
    return out;
}

double quantize_u16(double v)
{
    const double q = std::lround(std::clamp(v, 0.0, 1.0) * 65535.0);
    return q / 65535.0;
}

Sample generate_sample(const SceneSpec &scene_in)
{
    SceneSpec scene = scene_in;
    prepare_scene(scene);

    Sample sample;
    sample.stream = simulate_stream(
        [&](int t, IntensityImage &frame) { render_into(scene, t, true, frame); },
        scene.height, scene.width, scene.duration, scene.threshold, scene.gain,
        scene.noise_std, mix_seed(scene.seed, 3));

    IntensityImage gt = render_background(scene, scene.center_time());
    for (auto &v : gt.values()) {
        v = quantize_u16(v);
    }
    sample.ground_truth = std::move(gt);
    sample.scene = std::move(scene);
    return sample;
}

} // namespace spkocc
