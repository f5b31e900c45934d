/**
 * @file cfc_features.hpp
 * @brief Projection-profile features for compound figure classification.
 *
 * Three projection types (line mean, line variance, 1-D Hough count) are
 * computed for horizontal and vertical pixel lines, quantized on a
 * logarithmic scale and summarised by one of six spatial profile methods.
 * The final vector holds the horizontal profiles of the three types followed
 * by the vertical profiles in the same order.
 */
#pragma once

#include "cfsep/raster.hpp"

#include <array>
#include <string>
#include <vector>

namespace cfsep {

struct QuantizationParams {
    int p = 5;  ///< mean bins
    int q = 8;  ///< variance bins
    int h = 3;  ///< Hough bins
};

/// Profile methods per projection type, written as the three digits "xyz"
/// (mean, variance, Hough). Digit 0 drops the component.
struct FeatureSetSpec {
    int mean_profile = 4;
    int variance_profile = 3;
    int hough_profile = 4;
    int k = 8;  ///< spatial bins

    /// Parses "434" style codes. Throws DomainError.
    static FeatureSetSpec parse(const std::string& code, int k);
    std::string code() const;
    void validate() const;
};

using FeatureVector = std::vector<double>;

/// Gradient threshold used to build the Hough edge map.
inline constexpr double kCfcSobelThreshold = 0.02;

/// Bin index in 1..p for a mean intensity (bin 1 holds the brightest values).
int quantize_mean(double v, int p);
/// Bin index in 1..q for a line variance (bin 1 holds the lowest variances).
int quantize_variance(double v, int q);
/// Bin index in 1..h for a normalised Hough count (bin 1 holds the strongest lines).
int quantize_hough(double v, int h);

/// Segment lengths for splitting `n` positions into `k` adjacent bins; the
/// first n mod k bins are one element longer. Throws InputTooSmall if n < k.
std::vector<int> spatial_bins(int n, int k);

/// Spatial profile of a projection vector.
///
/// Methods 1-5 take quantized values in 1..bins where larger means more
/// separator-like; method 6 takes the raw projection values.
std::vector<double> profile(const std::vector<double>& vec, int method, int k, int bins);

/// Expected feature vector length for a set.
int feature_dimensionality(const FeatureSetSpec& spec, const QuantizationParams& qp);

/// Throws InputTooSmall when the image is smaller than k in either dimension.
FeatureVector extract_cfc_features(const GrayImage& img, const FeatureSetSpec& spec,
                                   const QuantizationParams& qp = {});

}  // namespace cfsep
