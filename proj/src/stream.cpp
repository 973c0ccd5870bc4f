#include "spkocc/stream.hpp"

#include <cstring>
#include <stdexcept>

namespace spkocc {

SpikeStream::SpikeStream(int height, int width, int num_steps)
    : height_(height), width_(width), num_steps_(num_steps)
{
    if (height <= 0 || width <= 0 || num_steps <= 0) {
        throw std::invalid_argument("SpikeStream: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * width * num_steps, 0);
}

IntensityImage::IntensityImage(int height, int width, double fill)
    : height_(height), width_(width)
{
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("IntensityImage: dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(height) * width, fill);
}

ValidationReport validate_stream(const SpikeStream &s, std::optional<int> w_aux)
{
    ValidationReport report;
    auto fail = [&](std::string msg) {
        report.pass = false;
        report.failures.push_back(std::move(msg));
    };

    if (s.height() <= 0 || s.width() <= 0 || s.num_steps() <= 0) {
        fail("non-positive dimensions");
    }
    for (std::size_t i = 0; i < s.data().size(); ++i) {
        if (s.data()[i] > 1) {
            fail("non-binary element at flat index " + std::to_string(i) +
                 " (value " + std::to_string(int(s.data()[i])) + ")");
            break;
        }
    }
    if (w_aux) {
        if (*w_aux <= 0) {
            fail("w_aux must be positive");
        } else if (s.num_steps() < 2 * *w_aux + 1) {
            fail("num_steps must be >= 2*w_aux + 1 for splitting");
        }
    }
    return report;
}

namespace {

SpikeStream slice_steps(const SpikeStream &s, int t0, int t1)
{
    SpikeStream out(s.height(), s.width(), t1 - t0);
    std::memcpy(out.step_data(0), s.step_data(t0),
                out.plane_size() * static_cast<std::size_t>(t1 - t0));
    return out;
}

} // namespace

WindowSplit split_windows(const SpikeStream &s, int w_aux)
{
    const int t = s.num_steps();
    if (w_aux <= 0 || 2 * w_aux >= t) {
        throw std::out_of_range("split_windows: need 0 < 2*w_aux < num_steps (w_aux=" +
                                std::to_string(w_aux) + ", T=" + std::to_string(t) + ")");
    }
    WindowSplit split;
    split.w_aux = w_aux;
    split.s_minus = slice_steps(s, 0, w_aux);
    split.s_center = slice_steps(s, w_aux, t - w_aux);
    split.s_plus = slice_steps(s, t - w_aux, t);
    return split;
}

SpikeStream concat_windows(const WindowSplit &split)
{
    const SpikeStream &a = split.s_minus;
    const SpikeStream &b = split.s_center;
    const SpikeStream &c = split.s_plus;
    SpikeStream out(a.height(), a.width(),
                    a.num_steps() + b.num_steps() + c.num_steps());
    std::memcpy(out.step_data(0), a.step_data(0), a.data().size());
    std::memcpy(out.step_data(a.num_steps()), b.step_data(0), b.data().size());
    std::memcpy(out.step_data(a.num_steps() + b.num_steps()), c.step_data(0),
                c.data().size());
    return out;
}

IntensityImage firing_rate_image(const SpikeStream &s, int t0, int t1)
{
    if (t0 < 0 || t1 > s.num_steps() || t0 >= t1) {
        throw std::invalid_argument("firing_rate_image: empty or out-of-range interval");
    }
    IntensityImage img(s.height(), s.width());
    std::vector<uint32_t> counts(s.plane_size(), 0);
    for (int t = t0; t < t1; ++t) {
        const uint8_t *plane = s.step_data(t);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            counts[i] += plane[i];
        }
    }
    const double inv = 1.0 / (t1 - t0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        img.values()[i] = counts[i] * inv;
    }
    return img;
}

IntensityImage accumulate_window(const SpikeStream &s)
{
    if (s.num_steps() <= 0) {
        throw std::invalid_argument("accumulate_window: empty stream");
    }
    return firing_rate_image(s, 0, s.num_steps());
}

std::vector<int> voxel_segment_lengths(int num_steps, int bins)
{
    std::vector<int> lengths(bins, num_steps / bins);
    for (int b = 0; b < num_steps % bins; ++b) {
        ++lengths[b];
    }
    return lengths;
}

VoxelTensor voxelize(const SpikeStream &s, int bins)
{
    if (bins < 1 || bins > s.num_steps()) {
        throw std::invalid_argument("voxelize: bins must be in [1, num_steps]");
    }
    VoxelTensor v;
    v.bins = bins;
    v.height = s.height();
    v.width = s.width();
    v.values.assign(static_cast<std::size_t>(bins) * s.plane_size(), 0.0);

    const auto lengths = voxel_segment_lengths(s.num_steps(), bins);
    int t = 0;
    for (int b = 0; b < bins; ++b) {
        double *out = v.values.data() + static_cast<std::size_t>(b) * s.plane_size();
        for (int k = 0; k < lengths[b]; ++k, ++t) {
            const uint8_t *plane = s.step_data(t);
            for (std::size_t i = 0; i < s.plane_size(); ++i) {
                out[i] += plane[i];
            }
        }
        const double inv = 1.0 / lengths[b];
        for (std::size_t i = 0; i < s.plane_size(); ++i) {
            out[i] *= inv;
        }
    }
    return v;
}

} // namespace spkocc
