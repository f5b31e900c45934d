/**
 * @file band_sep.hpp
 * @brief Band-based separator detection: full-length runs of light pixel
 *        lines after mean-threshold binarisation.
 */
#pragma once

#include "cfsep/cfs_params.hpp"
#include "cfsep/raster.hpp"

#include <span>
#include <vector>

namespace cfsep {

struct Run {
    int start = 0;
    int length = 0;

    bool operator==(const Run&) const = default;
};

/// Maximal runs of true values, in order.
std::vector<Run> max_runs(std::span<const bool> bits);
std::vector<Run> max_runs(const std::vector<bool>& bits);

/// Centre lines of separator bands of direction `dir`. Band centres are
/// start + length / 2 (integer division).
std::vector<SeparatorLine> detect_band_separators(const GrayImage& img, Direction dir, const CfsParams& params);

}  // namespace cfsep
