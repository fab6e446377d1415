#pragma once

// 8-bit PNG encoding. Values are quantized as round(clamp(v, 0, 1) * 255) and
// decoded as byte / 255, so write(read(file)) reproduces the file's pixels.

#include "pano/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace pano {

std::vector<std::uint8_t> encode_png(const Image& img);
std::vector<std::uint8_t> encode_png(const Mask& mask);

/// Decodes any PNG as RGB; throws std::runtime_error on malformed data.
Image decode_png(const std::vector<std::uint8_t>& bytes);
/// Decodes any PNG as a mask: a pixel is set when its gray value is at least 128.
Mask decode_png_mask(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const Image& img);
void write_png(const std::filesystem::path& path, const Mask& mask);
Image read_png(const std::filesystem::path& path);
Mask read_png_mask(const std::filesystem::path& path);

/// Image whose values are exactly representable after 8-bit quantization.
Image quantize(const Image& img);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it into place.
void write_bytes_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

} // namespace pano
