/**
 * @file edge_sep.hpp
 * @brief Edge-based separator detection.
 *
 * Pipeline per direction: artificial high-contrast frame, directional Sobel
 * edge map, 1-D Hough count per line, adaptive peak threshold, regularity
 * pruning, gap-filling consolidation, then length and border filters.
 */
#pragma once

#include "cfsep/cfs_params.hpp"
#include "cfsep/raster.hpp"

#include <span>
#include <vector>

namespace cfsep {

/// Frame thickness added by add_artificial_border().
inline constexpr int kArtificialBorder = 2;

struct HoughContext {
    int depth = 0;           ///< zero-based recursion depth
    double max = 0.0;        ///< largest Hough count
    double fill_ratio = 0.0; ///< fraction of edge pixels in the edge map
};

/// h = min(1, alpha * beta^depth);  t = max * (h + (1 - h) * sqrt(fill_ratio)).
double peak_threshold(const HoughContext& ctx, double alpha, double beta);

/// Two-pixel frame: outer ring 0, inner ring 1. Output grows by 4 per axis.
GrayImage add_artificial_border(const GrayImage& img);

/// Longest span covered by edge segments of length >= min_segment after
/// bridging gaps of length <= max_gap between consecutive segments.
int consolidated_length(std::span<const bool> line, double max_gap, double min_segment);

/// Intermediate results, exposed for debugging and post-hoc checks.
struct EdgeDetection {
    std::vector<SeparatorLine> lines;
    BinaryImage edges;             ///< edge map of the framed image
    std::vector<int> hough;        ///< counts per line of the framed image
    double threshold = 0.0;
    std::vector<int> candidates;   ///< peak positions (original coordinates), ranked
    std::vector<int> regular;      ///< candidates surviving the regularity criterion
};

EdgeDetection detect_edge_separators_traced(const GrayImage& img, Direction dir, int depth, const CfsParams& params);

std::vector<SeparatorLine> detect_edge_separators(const GrayImage& img, Direction dir, int depth,
                                                  const CfsParams& params);

/// Edge pixels along one line of the framed edge map, restricted to the
/// original image extent. `position` is in original coordinates.
std::vector<bool> edge_line(const BinaryImage& framed_edges, Direction dir, int position);

}  // namespace cfsep
