#include "pano/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pano {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw std::invalid_argument("image dimensions must be positive, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
    }
    data_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw std::invalid_argument("mask dimensions must be positive");
    }
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t Mask::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PerspectiveFrame::PerspectiveFrame(Image image) : image_(std::move(image))
{
    if (image_.width() < 8 || image_.height() < 8) {
        throw std::invalid_argument("perspective frames must be at least 8x8");
    }
}

PerspectiveFrame::PerspectiveFrame(int width, int height, Rgb fill)
    : PerspectiveFrame(Image(width, height, fill))
{
}

EquirectFrame::EquirectFrame(Image image) : EquirectFrame(std::move(image), Mask())
{
}

EquirectFrame::EquirectFrame(Image image, Mask mask) : image_(std::move(image)), mask_(std::move(mask))
{
    if (image_.width() != 2 * image_.height()) {
        throw std::invalid_argument("equirectangular frames must have width == 2 * height, got " +
                                    std::to_string(image_.width()) + "x" + std::to_string(image_.height()));
    }
    if (mask_.width() == 0) {
        mask_ = Mask(image_.width(), image_.height(), true);
    } else if (mask_.width() != image_.width() || mask_.height() != image_.height()) {
        throw std::invalid_argument("mask dimensions do not match the image");
    }
}

EquirectFrame::EquirectFrame(int height, Rgb fill, bool observed)
    : image_(2 * height, height, fill), mask_(2 * height, height, observed)
{
}

namespace {

inline Rgb lerp4(const Image& img, int c0, int c1, int r0, int r1, float fu, float fv)
{
    const float* row0 = img.row_ptr(r0);
    const float* row1 = img.row_ptr(r1);
    const float w00 = (1.0f - fu) * (1.0f - fv);
    const float w10 = fu * (1.0f - fv);
    const float w01 = (1.0f - fu) * fv;
    const float w11 = fu * fv;
    Rgb out;
    out.r = w00 * row0[c0 * 3] + w10 * row0[c1 * 3] + w01 * row1[c0 * 3] + w11 * row1[c1 * 3];
    out.g = w00 * row0[c0 * 3 + 1] + w10 * row0[c1 * 3 + 1] + w01 * row1[c0 * 3 + 1] + w11 * row1[c1 * 3 + 1];
    out.b = w00 * row0[c0 * 3 + 2] + w10 * row0[c1 * 3 + 2] + w01 * row1[c0 * 3 + 2] + w11 * row1[c1 * 3 + 2];
    return out;
}

inline void clamp_rows(double v, int height, int& r0, int& r1, float& fv)
{
    if (v <= 0.0) {
        r0 = r1 = 0;
        fv = 0.0f;
    } else if (v >= height - 1) {
        r0 = r1 = height - 1;
        fv = 0.0f;
    } else {
        const double fl = std::floor(v);
        r0 = static_cast<int>(fl);
        r1 = r0 + 1;
        fv = static_cast<float>(v - fl);
    }
}

} // namespace

Rgb sample_bilinear_wrapped(const Image& img, double u, double v)
{
    const int w = img.width();
    int r0, r1;
    float fv;
    clamp_rows(v, img.height(), r0, r1, fv);
    const double fl = std::floor(u);
    const float fu = static_cast<float>(u - fl);
    long long c0 = static_cast<long long>(fl) % w;
    if (c0 < 0) {
        c0 += w;
    }
    const long long c1 = c0 + 1 == w ? 0 : c0 + 1;
    return lerp4(img, static_cast<int>(c0), static_cast<int>(c1), r0, r1, fu, fv);
}

Rgb sample_bilinear_clamped(const Image& img, double u, double v)
{
    int r0, r1, c0, c1;
    float fv, fu;
    clamp_rows(v, img.height(), r0, r1, fv);
    clamp_rows(u, img.width(), c0, c1, fu);
    return lerp4(img, c0, c1, r0, r1, fu, fv);
}

Image circular_shift(const Image& img, long long offset)
{
    const long long w = img.width();
    const long long s = ((offset % w) + w) % w;
    if (s == 0) {
        return img;
    }
    Image out = img;
    const std::size_t row_floats = static_cast<std::size_t>(w) * 3;
    for (int r = 0; r < img.height(); ++r) {
        const float* src = img.row_ptr(r);
        float* dst = out.row_ptr(r);
        // out[c] = in[c - s]
        std::copy(src, src + (w - s) * 3, dst + s * 3);
        std::copy(src + (w - s) * 3, src + row_floats, dst);
    }
    return out;
}

EquirectFrame circular_shift(const EquirectFrame& f, long long offset)
{
    const long long w = f.width();
    const long long s = ((offset % w) + w) % w;
    Image img = circular_shift(f.image(), s);
    Mask mask = f.mask();
    if (s != 0) {
        for (int r = 0; r < f.height(); ++r) {
            auto src = f.mask().bits().subspan(static_cast<std::size_t>(r) * w, static_cast<std::size_t>(w));
            auto dst = mask.bits().subspan(static_cast<std::size_t>(r) * w, static_cast<std::size_t>(w));
            std::copy(src.begin(), src.end() - s, dst.begin() + s);
            std::copy(src.end() - s, src.end(), dst.begin());
        }
    }
    return EquirectFrame(std::move(img), std::move(mask));
}

EquirectFrame rotate_180(const EquirectFrame& f)
{
    if (f.width() % 2 != 0) {
        throw std::invalid_argument("rotate_180 requires an even width");
    }
    return circular_shift(f, f.width() / 2);
}

std::vector<float> luminance_plane(const Image& img)
{
    std::vector<float> out(img.pixel_count());
    const auto v = img.values();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = 0.299f * v[3 * i] + 0.587f * v[3 * i + 1] + 0.114f * v[3 * i + 2];
    }
    return out;
}

Image downsample(const Image& img, int factor)
{
    if (factor < 1) {
        throw std::invalid_argument("downsample factor must be positive");
    }
    if (factor == 1) {
        return img;
    }
    const int w = std::max(1, img.width() / factor);
    const int h = std::max(1, img.height() / factor);
    Image out(w, h);
    const float inv = 1.0f / static_cast<float>(factor * factor);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            Rgb acc;
            for (int dy = 0; dy < factor; ++dy) {
                const int sr = std::min(img.height() - 1, r * factor + dy);
                for (int dx = 0; dx < factor; ++dx) {
                    const Rgb p = img.at(std::min(img.width() - 1, c * factor + dx), sr);
                    acc.r += p.r;
                    acc.g += p.g;
                    acc.b += p.b;
                }
            }
            out.set(c, r, {acc.r * inv, acc.g * inv, acc.b * inv});
        }
    }
    return out;
}

} // namespace pano
