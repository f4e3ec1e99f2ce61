#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lcmwarp/image.hpp"

namespace lcmwarp {

enum class ImageFormat { Png, Ppm };

// Chooses by extension (.png, .ppm; case-insensitive). Throws IoError.
ImageFormat format_from_path(const std::filesystem::path& path);

// 8-bit samples map to v / 255 and back to round(v * 255) clamped.
std::uint8_t to_byte(double v);

// Binary PPM (P6). Decoding accepts comments in the header and any maxval
// up to 255; encoding always writes "P6\n<w> <h>\n255\n". Single-channel
// images are written as gray RGB and alpha is dropped.
ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img);

// 8-bit gray, gray+alpha (decoded as RGBA), RGB or RGBA PNG.
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

ImageBuffer read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace lcmwarp
