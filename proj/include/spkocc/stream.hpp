#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spkocc {

// Default capture geometry of the sensor model.
inline constexpr int kDefaultHeight = 250;
inline constexpr int kDefaultWidth = 400;
inline constexpr int kDefaultSteps = 2100;
inline constexpr int kDefaultAuxWindow = 300;
inline constexpr double kReadoutPeriodUs = 25.0;

/// Raw readout volume of the integrating sensor: one binary value per
/// (y, x, t). Stored one byte per element so malformed (non-binary) data is
/// representable and can be caught by validate_stream.
class SpikeStream {
public:
    SpikeStream() = default;
    SpikeStream(int height, int width, int num_steps);

    int height() const { return height_; }
    int width() const { return width_; }
    int num_steps() const { return num_steps_; }
    std::size_t plane_size() const
    {
        return static_cast<std::size_t>(height_) * width_;
    }

    uint8_t at(int y, int x, int t) const
    {
        return data_[index(y, x, t)];
    }
    void set(int y, int x, int t, uint8_t v) { data_[index(y, x, t)] = v; }

    // Time-major layout: step t occupies [t * plane_size, (t+1) * plane_size).
    const uint8_t *step_data(int t) const
    {
        return data_.data() + static_cast<std::size_t>(t) * plane_size();
    }
    uint8_t *step_data(int t)
    {
        return data_.data() + static_cast<std::size_t>(t) * plane_size();
    }

    const std::vector<uint8_t> &data() const { return data_; }
    std::vector<uint8_t> &data() { return data_; }

    bool operator==(const SpikeStream &) const = default;

private:
    std::size_t index(int y, int x, int t) const
    {
        return (static_cast<std::size_t>(t) * height_ + y) * width_ + x;
    }

    int height_ = 0;
    int width_ = 0;
    int num_steps_ = 0;
    std::vector<uint8_t> data_;
};

/// Grayscale image with values in [0, 1].
class IntensityImage {
public:
    IntensityImage() = default;
    IntensityImage(int height, int width, double fill = 0.0);

    int height() const { return height_; }
    int width() const { return width_; }
    double at(int y, int x) const
    {
        return values_[static_cast<std::size_t>(y) * width_ + x];
    }
    double &at(int y, int x)
    {
        return values_[static_cast<std::size_t>(y) * width_ + x];
    }
    const std::vector<double> &values() const { return values_; }
    std::vector<double> &values() { return values_; }

    bool operator==(const IntensityImage &) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> values_;
};

/// The (s_minus, s_center, s_plus) triple cut from one stream. Concatenating
/// the three pieces along time reproduces the source exactly.
struct WindowSplit {
    SpikeStream s_minus;
    SpikeStream s_center;
    SpikeStream s_plus;
    int w_aux = 0;
};

/// Network input representation: B temporal bins of per-pixel firing rates,
/// each plane H x W with values in [0, 1]. Layout bin-major.
struct VoxelTensor {
    int bins = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values;

    double at(int b, int y, int x) const
    {
        return values[(static_cast<std::size_t>(b) * height + y) * width + x];
    }
    double &at(int b, int y, int x)
    {
        return values[(static_cast<std::size_t>(b) * height + y) * width + x];
    }
};

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> failures;
};

/// Checks the stream invariants and reports each violation; never throws.
/// Pass w_aux to additionally check that the stream is long enough to split.
ValidationReport validate_stream(const SpikeStream &s,
                                 std::optional<int> w_aux = std::nullopt);

/// Cuts the stream into (w_aux, T - 2 w_aux, w_aux) along time.
/// Rejects w_aux <= 0 or 2 w_aux >= T.
WindowSplit split_windows(const SpikeStream &s, int w_aux);

/// Exact inverse of split_windows.
SpikeStream concat_windows(const WindowSplit &split);

/// Per-pixel spike count over [t0, t1) divided by the interval length.
IntensityImage firing_rate_image(const SpikeStream &s, int t0, int t1);

/// Firing rate over the whole stream. On long windows a moving foreground
/// smears into intermediate values while the background stays crisp.
IntensityImage accumulate_window(const SpikeStream &s);

/// Segment lengths for voxelize: B contiguous near-equal segments, the
/// remainder going to the earliest bins.
std::vector<int> voxel_segment_lengths(int num_steps, int bins);

/// Bins the stream into `bins` temporal segments of per-pixel rates.
VoxelTensor voxelize(const SpikeStream &s, int bins);

} // namespace spkocc
