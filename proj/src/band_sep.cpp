#include "cfsep/band_sep.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace cfsep {

std::vector<Run> max_runs(std::span<const bool> bits) {
    std::vector<Run> runs;
    const int n = static_cast<int>(bits.size());
    int i = 0;
    while (i < n) {
        if (!bits[i]) {
            ++i;
            continue;
        }
        const int start = i;
        while (i < n && bits[i]) {
            ++i;
        }
        runs.push_back({start, i - start});
    }
    return runs;
}

std::vector<Run> max_runs(const std::vector<bool>& bits) {
    // std::vector<bool> has no contiguous storage.
    const std::unique_ptr<bool[]> tmp(new bool[bits.size()]);
    std::copy(bits.begin(), bits.end(), tmp.get());
    return max_runs(std::span<const bool>(tmp.get(), bits.size()));
}

std::vector<SeparatorLine> detect_band_separators(const GrayImage& img, Direction dir, const CfsParams& params) {
    if (img.empty()) {
        return {};
    }
    // A uniform image is one band spanning everything; strict thresholding
    // at its mean would otherwise leave no white pixel.
    const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    const BinaryImage bin = *lo == *hi ? BinaryImage(img.width(), img.height(), true)
                                       : binarize(img, mean_intensity(img));
    const int extent = img.extent_across(dir);
    const int len = img.line_length(dir);

    // A line's mean over the binary image is 1 iff every pixel is white.
    const auto counts = hough_1d(bin, dir);
    std::vector<bool> white(extent);
    for (int i = 0; i < extent; ++i) {
        white[i] = counts[i] == len;
    }

    const int min_width = std::max(1, static_cast<int>(std::ceil(params.band_minsepwidth * extent - 1e-9)));
    std::vector<Run> bands;
    for (const Run& r : max_runs(white)) {
        if (r.length >= min_width) {
            bands.push_back(r);
        }
    }
    // Wider bands are stronger candidates.
    std::stable_sort(bands.begin(), bands.end(), [](const Run& a, const Run& b) { return a.length > b.length; });
    std::vector<int> centers;
    for (const Run& r : bands) {
        centers.push_back(r.start + r.length / 2);
    }
    centers = regularity_prune(std::move(centers), extent, params.band_maxdistvar);

    std::vector<SeparatorLine> lines;
    const double min_dist = params.band_minborderdist * extent;
    for (int c : centers) {
        if (c <= 0 || c >= extent) {
            continue;
        }
        if (std::min(c, extent - c) < min_dist) {
            continue;
        }
        lines.push_back({dir, c});
    }
    std::sort(lines.begin(), lines.end(), [](const SeparatorLine& a, const SeparatorLine& b) {
        return a.position < b.position;
    });
    return lines;
}

}  // namespace cfsep
