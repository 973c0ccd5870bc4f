#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spkocc/stream.hpp"

namespace spkocc {

/// One pixel of the integrating sensor. Charge accumulates every readout
/// step; reaching the dispatch threshold emits a spike and hard-resets the
/// voltage to zero (residual charge above the threshold is discarded).
struct SpikePixelState {
    double voltage = 0.0;
    double threshold = 1.0;

    bool step(double current)
    {
        voltage += current;
        if (voltage >= threshold) {
            voltage = 0.0;
            return true;
        }
        return false;
    }
};

/// Simulates one pixel over a current sequence. Rejects negative currents
/// and non-positive thresholds.
std::vector<uint8_t> simulate_pixel(const std::vector<double> &currents,
                                    double threshold);

/// Simulates every pixel independently over a frame sequence with
/// current = gain * intensity. Results are identical no matter the pixel
/// evaluation order.
SpikeStream simulate_stream(const std::vector<IntensityImage> &video,
                            double threshold, double gain);

/// Streaming variant: frames are produced on demand, so long captures never
/// materialize the whole video. `jitter_std` > 0 adds seeded per-step current
/// noise (clamped at zero charge); it is off by default.
SpikeStream simulate_stream(const std::function<void(int, IntensityImage &)> &frame_at,
                            int height, int width, int num_steps,
                            double threshold, double gain,
                            double jitter_std = 0.0, uint64_t jitter_seed = 0);

enum class OccluderPattern {
    kSquareMesh,
    kHexagonalMesh,
    kDenseFrame,
    kFence,
    kFabricNet,
};

const std::vector<std::string> &occluder_pattern_names();
std::string to_string(OccluderPattern p);
std::optional<OccluderPattern> parse_occluder_pattern(const std::string &name);

/// Periodic opacity tile for an occluder pattern; alpha in [0, 1].
IntensityImage make_occluder_tile(OccluderPattern pattern, double cell_px,
                                  double bar_px, uint64_t seed);

/// Parametric description of a synthetic capture: a textured background
/// plane, a nearer periodic occluder, and a horizontally translating camera.
/// Displacement on the image plane is inversely proportional to depth, so
/// the occluder sweeps faster than the background it hides.
struct SceneSpec {
    int height = kDefaultHeight;
    int width = kDefaultWidth;
    int duration = kDefaultSteps;

    // Background canvas; wider than the output crop to absorb camera travel.
    // The crop at zero shift starts at background_origin_x.
    IntensityImage background;
    int background_origin_x = 0;
    uint64_t background_seed = 1; // procedural recipe; canvas rebuilt from it

    OccluderPattern occluder = OccluderPattern::kSquareMesh;
    double occluder_intensity = 0.08;
    double occluder_cell_px = 14.0;
    double occluder_bar_px = 4.0;

    double depth_bg = 10.0;
    double depth_occ = 1.0;
    double camera_velocity = 0.0;  // px per step at unit depth
    double occluder_vx = 0.0;      // own motion, px per step
    double occluder_vy = 0.0;

    double threshold = 1.0;
    double gain = 1.0;
    double noise_std = 0.0; // per-step current jitter; 0 disables

    uint64_t seed = 1;

    double background_displacement(double t) const
    {
        return camera_velocity * t / depth_bg;
    }
    double occluder_displacement_x(double t) const
    {
        return camera_velocity * t / depth_occ + occluder_vx * t;
    }
    double occluder_displacement_y(double t) const { return occluder_vy * t; }
    double center_time() const { return 0.5 * (duration - 1); }
};

/// Fills in the procedural background canvas (and validates geometry).
/// Canvas width covers the full camera travel plus a bilinear margin.
void prepare_scene(SceneSpec &scene);

/// Procedural multi-scale texture in [low, high].
IntensityImage make_background_texture(int height, int width, uint64_t seed,
                                       double low = 0.1, double high = 0.95);

/// Composites occluder over the shifted background at step t:
/// value = alpha * occluder_intensity + (1 - alpha) * background.
/// Throws if the background shift runs off the canvas.
IntensityImage render_occluded_scene(const SceneSpec &scene, double t);

/// Background-only view at time t (what a clean capture would see).
IntensityImage render_background(const SceneSpec &scene, double t);

struct Sample {
    SpikeStream stream;
    std::optional<IntensityImage> ground_truth;
    std::optional<SceneSpec> scene;
};

/// Quantizes to the 16-bit fixed-point grid used by the sample container.
double quantize_u16(double v);

/// Renders and simulates the full capture. Ground truth is the clean
/// background at the temporal center viewpoint, quantized to the container's
/// 16-bit grid. Deterministic per scene seed.
Sample generate_sample(const SceneSpec &scene);

} // namespace spkocc
