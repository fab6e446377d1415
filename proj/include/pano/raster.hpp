#pragma once

// Frame buffers. Pixel values are linear floats in [0, 1]; 8-bit conversion only
// happens in png_io. Pixel (c, r) has its centre at the integer coordinate (c, r).

#include "pano/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace pano {

struct Rgb {
    float r = 0.0f;
    float g = 0.0f;
    float b = 0.0f;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Interleaved RGB raster.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    Rgb at(int col, int row) const
    {
        const std::size_t i = index(col, row);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int col, int row, Rgb v)
    {
        const std::size_t i = index(col, row);
        data_[i] = v.r;
        data_[i + 1] = v.g;
        data_[i + 2] = v.b;
    }

    float* row_ptr(int row) { return data_.data() + static_cast<std::size_t>(row) * width_ * 3; }
    const float* row_ptr(int row) const { return data_.data() + static_cast<std::size_t>(row) * width_ * 3; }

    std::span<float> values() { return data_; }
    std::span<const float> values() const { return data_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int col, int row) const
    {
        return (static_cast<std::size_t>(row) * width_ + col) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

/// Boolean per-pixel mask stored as bytes (0 or 1).
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int col, int row) const { return bits_[static_cast<std::size_t>(row) * width_ + col] != 0; }
    void set(int col, int row, bool v) { bits_[static_cast<std::size_t>(row) * width_ + col] = v ? 1 : 0; }

    std::size_t count() const;
    std::span<const std::uint8_t> bits() const { return bits_; }
    std::span<std::uint8_t> bits() { return bits_; }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Perspective frame, W and H at least 8.
class PerspectiveFrame {
public:
    PerspectiveFrame() = default;
    explicit PerspectiveFrame(Image image);
    PerspectiveFrame(int width, int height, Rgb fill = {});

    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    const Image& image() const { return image_; }
    Image& image() { return image_; }

    friend bool operator==(const PerspectiveFrame&, const PerspectiveFrame&) = default;

private:
    Image image_;
};

/// Equirectangular frame with W = 2H and an observation mask (true = observed).
class EquirectFrame {
public:
    EquirectFrame() = default;
    /// Fully observed frame.
    explicit EquirectFrame(Image image);
    EquirectFrame(Image image, Mask mask);
    explicit EquirectFrame(int height, Rgb fill = {}, bool observed = true);

    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    const Image& image() const { return image_; }
    Image& image() { return image_; }
    const Mask& mask() const { return mask_; }
    Mask& mask() { return mask_; }

    friend bool operator==(const EquirectFrame&, const EquirectFrame&) = default;

private:
    Image image_;
    Mask mask_;
};

template <typename Frame>
struct VideoClip {
    std::vector<Frame> frames;
    double fps = 25.0;

    std::size_t size() const { return frames.size(); }

    /// Throws unless the clip is nonempty and every frame shares the first frame's size.
    void validate() const
    {
        if (frames.empty()) {
            throw std::invalid_argument("clip must contain at least one frame");
        }
        for (const auto& f : frames) {
            if (f.width() != frames.front().width() || f.height() != frames.front().height()) {
                throw std::invalid_argument("clip frames must share dimensions");
            }
        }
    }
};

using PerspectiveClip = VideoClip<PerspectiveFrame>;
using EquirectClip = VideoClip<EquirectFrame>;

/// Bilinear sample with horizontal wraparound and vertical clamping.
Rgb sample_bilinear_wrapped(const Image& img, double u, double v);
inline Rgb sample_bilinear_wrapped(const EquirectFrame& f, const EquirectCoord& c)
{
    return sample_bilinear_wrapped(f.image(), c.u, c.v);
}

/// Bilinear sample clamped to the image border on both axes.
Rgb sample_bilinear_clamped(const Image& img, double u, double v);

/// Rotates columns so that column 0 lands on column `offset mod W`.
EquirectFrame circular_shift(const EquirectFrame& f, long long offset);
Image circular_shift(const Image& img, long long offset);

/// Shift by W/2; throws on odd widths.
EquirectFrame rotate_180(const EquirectFrame& f);

inline float luminance(const Rgb& c) { return 0.299f * c.r + 0.587f * c.g + 0.114f * c.b; }

/// Row-major luminance plane.
std::vector<float> luminance_plane(const Image& img);

/// Box-filter downsample by an integer factor (trailing partial blocks dropped).
Image downsample(const Image& img, int factor);

} // namespace pano
