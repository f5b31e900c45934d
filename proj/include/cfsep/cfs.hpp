/**
 * @file cfs.hpp
 * @brief Recursive compound figure separation.
 *
 * Each level removes homogeneous border bands, searches both directions for
 * separator lines with the detector chosen by the illustration classifier,
 * picks the more regular direction, splits and recurses. Leaves are the
 * subfigure bounding boxes in original image coordinates.
 */
#pragma once

#include "cfsep/cfs_params.hpp"
#include "cfsep/illustration.hpp"
#include "cfsep/raster.hpp"

#include <optional>
#include <vector>

namespace cfsep {

/// Maximal intensity range of a line that still counts as homogeneous.
inline constexpr double kBorderTolerance = 0.02;

enum class Variant { ClassifyOnce, ClassifyPerSubfigure };

struct SeparationResult {
    std::vector<Rect> rects;
    Routing routing = Routing::BandBased;  ///< routing of the whole image
    int depth_reached = 0;
};

/// Bounding box left after peeling homogeneous lines off every side;
/// std::nullopt when nothing remains.
std::optional<Rect> remove_border_bands(const GrayImage& img);
/// Same, restricted to `region` of `img`; the result is in image coordinates.
std::optional<Rect> remove_border_bands(const GrayImage& img, const Rect& region);

/// Direction whose separators (plus both borders) have the smaller normalised
/// gap variance. Throws NoSeparators when both lists are empty.
Direction decide_direction(const std::vector<SeparatorLine>& v_lines, const std::vector<SeparatorLine>& h_lines,
                           const Rect& bounds);

/// Tiles `bounds` at the given lines (positions local to `bounds`). The pixel
/// line of a separator belongs to the following rect.
std::vector<Rect> split(const Rect& bounds, const std::vector<SeparatorLine>& lines, Direction dir);

/// Separator lines found by the routing's detector in `img`.
std::vector<SeparatorLine> detect_separators(const GrayImage& img, Direction dir, int depth, Routing routing,
                                             const CfsParams& params);

SeparationResult separate(const GrayImage& img, const CfsParams& params, const IlluModel& illu,
                          Variant variant = Variant::ClassifyOnce);

/// Separation with a fixed routing at every level.
SeparationResult separate(const GrayImage& img, const CfsParams& params, Routing routing);

/// Copy of `img` with every rect outlined in green.
Rgb8Image draw_overlay(const GrayImage& img, const std::vector<Rect>& rects);

}  // namespace cfsep
