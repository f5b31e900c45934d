#include "cfsep/raster.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cfsep {

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw InvalidImage("negative image size");
    }
    if (fill < 0.0 || fill > 1.0) {
        throw InvalidImage("fill intensity outside [0,1]");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 || data_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidImage("pixel buffer does not match " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidImage("intensity outside [0,1]");
        }
    }
}

BinaryImage::BinaryImage(int width, int height, bool fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}

std::size_t BinaryImage::count() const {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

double BinaryImage::fill_ratio() const {
    if (data_.empty()) {
        return 0.0;
    }
    return static_cast<double>(count()) / static_cast<double>(data_.size());
}

bool contains(const Rect& outer, const Rect& inner) {
    return inner.x >= outer.x && inner.y >= outer.y && inner.right() <= outer.right() &&
           inner.bottom() <= outer.bottom();
}

std::optional<Rect> intersect(const Rect& a, const Rect& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) {
        return std::nullopt;
    }
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

long long overlap_area(const Rect& a, const Rect& b) {
    const auto r = intersect(a, b);
    return r ? r->area() : 0;
}

GrayImage to_grayscale(const Rgb8Image& rgb) {
    if (rgb.width <= 0 || rgb.height <= 0) {
        throw InvalidImage("zero-sized image");
    }
    if (rgb.channels != 1 && rgb.channels != 3) {
        throw InvalidImage("unsupported channel count " + std::to_string(rgb.channels));
    }
    const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
    if (rgb.data.size() != n * rgb.channels) {
        throw InvalidImage("channel buffers do not match image size");
    }
    std::vector<double> out(n);
    if (rgb.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = rgb.data[i] / 255.0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = rgb.data[3 * i];
            const double g = rgb.data[3 * i + 1];
            const double b = rgb.data[3 * i + 2];
            out[i] = std::clamp((0.299 * r + 0.587 * g + 0.114 * b) / 255.0, 0.0, 1.0);
        }
    }
    return GrayImage(rgb.width, rgb.height, std::move(out));
}

BinaryImage binarize(const GrayImage& img, double threshold) {
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.set(x, y, img.at(x, y) > threshold);
        }
    }
    return out;
}

double mean_intensity(const GrayImage& img) {
    if (img.empty()) {
        throw InvalidImage("mean of empty image");
    }
    double sum = 0.0;
    for (double v : img.pixels()) {
        sum += v;
    }
    return sum / static_cast<double>(img.pixels().size());
}

std::vector<double> line_projection(const GrayImage& img, Direction dir, LineStat stat) {
    if (img.empty()) {
        throw InvalidImage("projection of empty image");
    }
    const int w = img.width();
    const int h = img.height();
    const int count = img.extent_across(dir);
    const int len = img.line_length(dir);
    std::vector<double> sum(count, 0.0);
    std::vector<double> sq(count, 0.0);

    // Both directions accumulate line elements in increasing index order so
    // that a transposed image yields bit-identical projections.
    if (dir == Direction::Vertical) {
        for (int y = 0; y < h; ++y) {
            const auto r = img.row(y);
            for (int x = 0; x < w; ++x) {
                sum[x] += r[x];
            }
        }
    } else {
        for (int y = 0; y < h; ++y) {
            const auto r = img.row(y);
            double s = 0.0;
            for (int x = 0; x < w; ++x) {
                s += r[x];
            }
            sum[y] = s;
        }
    }
    std::vector<double> mean(count);
    for (int i = 0; i < count; ++i) {
        mean[i] = sum[i] / len;
    }
    if (stat == LineStat::Mean) {
        return mean;
    }

    if (dir == Direction::Vertical) {
        for (int y = 0; y < h; ++y) {
            const auto r = img.row(y);
            for (int x = 0; x < w; ++x) {
                const double d = r[x] - mean[x];
                sq[x] += d * d;
            }
        }
    } else {
        for (int y = 0; y < h; ++y) {
            const auto r = img.row(y);
            double s = 0.0;
            for (int x = 0; x < w; ++x) {
                const double d = r[x] - mean[y];
                s += d * d;
            }
            sq[y] = s;
        }
    }
    for (int i = 0; i < count; ++i) {
        sq[i] /= len;
    }
    return sq;
}

BinaryImage sobel_edges(const GrayImage& img, Direction dir, double threshold) {
    const int w = img.width();
    const int h = img.height();
    BinaryImage out(w, h);
    if (w < 3 || h < 3) {
        return out;
    }
    for (int y = 1; y < h - 1; ++y) {
        const auto up = img.row(y - 1);
        const auto mid = img.row(y);
        const auto dn = img.row(y + 1);
        for (int x = 1; x < w - 1; ++x) {
            double g;
            if (dir == Direction::Vertical) {
                g = (up[x + 1] + 2.0 * mid[x + 1] + dn[x + 1]) - (up[x - 1] + 2.0 * mid[x - 1] + dn[x - 1]);
            } else {
                g = (dn[x - 1] + 2.0 * dn[x] + dn[x + 1]) - (up[x - 1] + 2.0 * up[x] + up[x + 1]);
            }
            if (std::abs(g) / 8.0 > threshold) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

std::vector<int> hough_1d(const BinaryImage& edges, Direction dir) {
    const int w = edges.width();
    const int h = edges.height();
    std::vector<int> bins(dir == Direction::Vertical ? w : h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (edges.at(x, y)) {
                ++bins[dir == Direction::Vertical ? x : y];
            }
        }
    }
    return bins;
}

GrayImage crop(const GrayImage& img, const Rect& r) {
    if (r.w <= 0 || r.h <= 0 || !contains(full_rect(img), r)) {
        throw DomainError("crop rectangle outside image");
    }
    GrayImage out(r.w, r.h);
    for (int y = 0; y < r.h; ++y) {
        const auto src = img.row(r.y + y);
        for (int x = 0; x < r.w; ++x) {
            out.at(x, y) = src[r.x + x];
        }
    }
    return out;
}

GrayImage transpose(const GrayImage& img) {
    GrayImage out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.at(y, x) = img.at(x, y);
        }
    }
    return out;
}

}  // namespace cfsep
