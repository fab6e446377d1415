#include "pano/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unistd.h>

namespace pano {

namespace {

std::uint8_t to_byte(float v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

std::vector<std::uint8_t> encode(png_image& image, const std::vector<std::uint8_t>& pixels)
{
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> decode(const std::vector<std::uint8_t>& bytes, png_uint_32 format, int& width, int& height)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw std::runtime_error(std::string("malformed png: ") + image.message);
    }
    image.format = format;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw std::runtime_error(std::string("malformed png: ") + image.message);
    }
    width = static_cast<int>(image.width);
    height = static_cast<int>(image.height);
    return pixels;
}

} // namespace

std::vector<std::uint8_t> encode_png(const Image& img)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> pixels(img.values().size());
    std::transform(img.values().begin(), img.values().end(), pixels.begin(), to_byte);
    return encode(image, pixels);
}

std::vector<std::uint8_t> encode_png(const Mask& mask)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(mask.width());
    image.height = static_cast<png_uint_32>(mask.height());
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(mask.width()) * mask.height());
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            pixels[static_cast<std::size_t>(r) * mask.width() + c] = mask.at(c, r) ? 255 : 0;
        }
    }
    return encode(image, pixels);
}

Image decode_png(const std::vector<std::uint8_t>& bytes)
{
    int w = 0;
    int h = 0;
    const auto pixels = decode(bytes, PNG_FORMAT_RGB, w, h);
    Image img(w, h);
    auto values = img.values();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        values[i] = static_cast<float>(pixels[i]) / 255.0f;
    }
    return img;
}

Mask decode_png_mask(const std::vector<std::uint8_t>& bytes)
{
    int w = 0;
    int h = 0;
    const auto pixels = decode(bytes, PNG_FORMAT_GRAY, w, h);
    Mask m(w, h, false);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            m.set(c, r, pixels[static_cast<std::size_t>(r) * w + c] >= 128);
        }
    }
    return m;
}

void write_png(const std::filesystem::path& path, const Image& img)
{
    write_bytes_atomic(path, encode_png(img));
}

void write_png(const std::filesystem::path& path, const Mask& mask)
{
    write_bytes_atomic(path, encode_png(mask));
}

Image read_png(const std::filesystem::path& path)
{
    try {
        return decode_png(read_bytes(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

Mask read_png_mask(const std::filesystem::path& path)
{
    try {
        return decode_png_mask(read_bytes(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

Image quantize(const Image& img)
{
    Image out = img;
    for (float& v : out.values()) {
        v = static_cast<float>(to_byte(v)) / 255.0f;
    }
    return out;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(path.string() + ": cannot open for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    static std::atomic<unsigned> counter{0};
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(path.string() + ": cannot open for writing");
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error(path.string() + ": write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error(path.string() + ": " + ec.message());
    }
}

} // namespace pano
