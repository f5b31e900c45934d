#include "cfsep/edge_sep.hpp"

#include "cfsep/band_sep.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace cfsep {

double peak_threshold(const HoughContext& ctx, double alpha, double beta) {
    const double h = std::min(1.0, alpha * std::pow(beta, ctx.depth));
    return ctx.max * (h + (1.0 - h) * std::sqrt(ctx.fill_ratio));
}

GrayImage add_artificial_border(const GrayImage& img) {
    const int b = kArtificialBorder;
    GrayImage out(img.width() + 2 * b, img.height() + 2 * b, 0.0);
    for (int y = 1; y < out.height() - 1; ++y) {
        for (int x = 1; x < out.width() - 1; ++x) {
            out.at(x, y) = 1.0;
        }
    }
    for (int y = 0; y < img.height(); ++y) {
        const auto src = img.row(y);
        for (int x = 0; x < img.width(); ++x) {
            out.at(x + b, y + b) = src[x];
        }
    }
    return out;
}

int consolidated_length(std::span<const bool> line, double max_gap, double min_segment) {
    std::vector<Run> segments;
    for (const Run& r : max_runs(line)) {
        if (r.length >= min_segment) {
            segments.push_back(r);
        }
    }
    int best = 0;
    std::size_t i = 0;
    while (i < segments.size()) {
        const int start = segments[i].start;
        int end = segments[i].start + segments[i].length;
        std::size_t j = i + 1;
        while (j < segments.size() && segments[j].start - end <= max_gap) {
            end = segments[j].start + segments[j].length;
            ++j;
        }
        best = std::max(best, end - start);
        i = j;
    }
    return best;
}

std::vector<bool> edge_line(const BinaryImage& framed_edges, Direction dir, int position) {
    const int b = kArtificialBorder;
    const int p = position + b;
    std::vector<bool> out;
    if (dir == Direction::Vertical) {
        const int len = framed_edges.height() - 2 * b;
        out.resize(len);
        for (int i = 0; i < len; ++i) {
            out[i] = framed_edges.at(p, i + b);
        }
    } else {
        const int len = framed_edges.width() - 2 * b;
        out.resize(len);
        for (int i = 0; i < len; ++i) {
            out[i] = framed_edges.at(i + b, p);
        }
    }
    return out;
}

EdgeDetection detect_edge_separators_traced(const GrayImage& img, Direction dir, int depth, const CfsParams& params) {
    EdgeDetection det;
    if (img.empty()) {
        return det;
    }
    const int extent = img.extent_across(dir);
    const int len = img.line_length(dir);

    det.edges = sobel_edges(add_artificial_border(img), dir, params.edge_sobelthresh);
    det.hough = hough_1d(det.edges, dir);
    HoughContext ctx;
    ctx.depth = depth;
    ctx.max = *std::max_element(det.hough.begin(), det.hough.end());
    ctx.fill_ratio = det.edges.fill_ratio();
    det.threshold = peak_threshold(ctx, params.edge_houghratio_min, params.edge_houghratio_base);
    if (ctx.max <= 0) {
        return det;
    }

    // Adjacent lines above the threshold form one peak; its position is the
    // upper median of the lines sharing the peak's maximum.
    struct Peak {
        int pos;
        int value;
    };
    std::vector<Peak> peaks;
    const int n = static_cast<int>(det.hough.size());
    int i = 0;
    while (i < n) {
        if (det.hough[i] < det.threshold) {
            ++i;
            continue;
        }
        int j = i;
        int best = det.hough[i];
        while (j < n && det.hough[j] >= det.threshold) {
            best = std::max(best, det.hough[j]);
            ++j;
        }
        int lo = -1;
        int hi = -1;
        for (int k = i; k < j; ++k) {
            if (det.hough[k] == best) {
                if (lo < 0) lo = k;
                hi = k;
            }
        }
        const int pos = (lo + hi + 1) / 2 - kArtificialBorder;
        if (pos > 0 && pos < extent) {
            peaks.push_back({pos, best});
        }
        i = j;
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
    for (const Peak& p : peaks) {
        det.candidates.push_back(p.pos);
    }
    det.regular = regularity_prune(det.candidates, extent, params.edge_maxdistvar);

    const double min_length = params.edge_minseplength * len;
    const double min_dist = params.edge_minborderdist * extent;
    for (int pos : det.regular) {
        if (std::min(pos, extent - pos) < min_dist) {
            continue;
        }
        const std::vector<bool> line = edge_line(det.edges, dir, pos);
        const std::unique_ptr<bool[]> bits(new bool[line.size()]);
        std::copy(line.begin(), line.end(), bits.get());
        const int length = consolidated_length(std::span<const bool>(bits.get(), line.size()),
                                               params.edge_gapratio * len, params.edge_lenratio * len);
        if (length >= min_length) {
            det.lines.push_back({dir, pos});
        }
    }
    std::sort(det.lines.begin(), det.lines.end(),
              [](const SeparatorLine& a, const SeparatorLine& b) { return a.position < b.position; });
    return det;
}

std::vector<SeparatorLine> detect_edge_separators(const GrayImage& img, Direction dir, int depth,
                                                  const CfsParams& params) {
    return detect_edge_separators_traced(img, dir, depth, params).lines;
}

}  // namespace cfsep
