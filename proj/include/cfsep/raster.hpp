/**
 * @file raster.hpp
 * @brief Grayscale and binary rasters plus the pixel primitives shared by
 *        feature extraction and separator detection.
 *
 * Every function here is a pure function of its inputs.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cfsep {

/// Orientation of a pixel line. A Vertical line is a column; Vertical
/// separators split an image into a left and a right part.
enum class Direction { Vertical, Horizontal };

inline Direction orthogonal(Direction d) {
    return d == Direction::Vertical ? Direction::Horizontal : Direction::Vertical;
}

enum class LineStat { Mean, Variance };

/// Row-major grayscale raster with intensities in [0,1].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    /// Throws InvalidImage on size mismatch or intensities outside [0,1].
    GrayImage(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    /// Caller keeps the value inside [0,1].
    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> pixels() const { return data_; }
    std::span<const double> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    /// Extent of the image measured across lines of direction `d`
    /// (width for Vertical lines, height for Horizontal lines).
    int extent_across(Direction d) const { return d == Direction::Vertical ? width_ : height_; }
    /// Length of a single line of direction `d`.
    int line_length(Direction d) const { return d == Direction::Vertical ? height_ : width_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::size_t count() const;
    double fill_ratio() const;

    bool operator==(const BinaryImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// 8-bit raster with 1 (gray) or 3 (interleaved RGB) channels.
struct Rgb8Image {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> data;
};

/// Integer pixel bounding box; (x, y) is the top-left pixel.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long long area() const { return static_cast<long long>(w) * h; }
    int right() const { return x + w; }
    int bottom() const { return y + h; }
    bool operator==(const Rect&) const = default;
};

inline Rect full_rect(const GrayImage& img) { return {0, 0, img.width(), img.height()}; }

/// True when `inner` lies completely inside `outer`.
bool contains(const Rect& outer, const Rect& inner);

std::optional<Rect> intersect(const Rect& a, const Rect& b);

/// Number of pixels shared by `a` and `b`.
long long overlap_area(const Rect& a, const Rect& b);

/// BT.601 luma scaled to [0,1]. Single-channel input is scaled directly.
GrayImage to_grayscale(const Rgb8Image& rgb);

/// Output pixel is true iff input pixel > threshold.
BinaryImage binarize(const GrayImage& img, double threshold);

double mean_intensity(const GrayImage& img);

/// One value per line of direction `dir`: Vertical yields one value per
/// column. Variance is the population variance of the line.
std::vector<double> line_projection(const GrayImage& img, Direction dir, LineStat stat);

/// Thresholded magnitude of the 3x3 Sobel response normalised by 1/8.
/// Vertical selects the kernel responding to vertical edges (horizontal
/// gradient). Border pixels where the kernel does not fit stay false.
BinaryImage sobel_edges(const GrayImage& img, Direction dir, double threshold);

/// Count of true pixels on every full-length line of direction `dir`.
std::vector<int> hough_1d(const BinaryImage& edges, Direction dir);

GrayImage crop(const GrayImage& img, const Rect& r);
GrayImage transpose(const GrayImage& img);

}  // namespace cfsep
