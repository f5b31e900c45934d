/**
 * @file image_io.hpp
 * @brief PNG / JPEG reading and PNG writing (8-bit, 1 or 3 channels).
 */
#pragma once

#include "cfsep/raster.hpp"

#include <filesystem>
#include <utility>

namespace cfsep {

/// Decodes a PNG or JPEG file. Alpha is dropped, 16-bit PNG is reduced to 8 bit.
/// Throws MissingAsset if the file does not exist, InvalidImage if it
/// cannot be decoded.
Rgb8Image read_image(const std::filesystem::path& path);

/// read_image followed by to_grayscale.
GrayImage load_gray(const std::filesystem::path& path);

/// Width and height from the file header without decoding pixels.
std::pair<int, int> probe_image_size(const std::filesystem::path& path);

/// Writes an 8-bit PNG; intensities are rounded to the nearest level.
void write_png(const GrayImage& img, const std::filesystem::path& path);
void write_png(const Rgb8Image& img, const std::filesystem::path& path);

Rgb8Image to_rgb8(const GrayImage& img);

}  // namespace cfsep
