/**
 * @file cfs_params.hpp
 * @brief Tunable parameters of the separation engine and the separator
 *        line type shared by the detectors.
 *
 * Parameters ending in "ratio", "dist", "length", "width" or "area" are
 * fractions of the image width, height or area of the sub-image being
 * processed (area: of the original image).
 */
#pragma once

#include "cfsep/illustration.hpp"
#include "cfsep/raster.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace cfsep {

struct CfsParams {
    MappingStrategy classifier_model = MappingStrategy::Greedy;
    double decision_threshold = 0.1;
    int mindim = 200;
    double elim_area = 0.03;

    int edge_maxdepth = 10;
    double edge_sobelthresh = 0.02;
    double edge_houghratio_min = 0.2;   ///< alpha of the peak threshold
    double edge_houghratio_base = 1.5;  ///< beta of the peak threshold
    double edge_maxdistvar = 0.1;
    double edge_gapratio = 0.3;
    double edge_lenratio = 0.03;
    double edge_minseplength = 0.5;
    double edge_minborderdist = 0.05;

    int band_maxdepth = 4;
    double band_minsepwidth = 0.0001;
    double band_maxdistvar = 0.2;
    double band_minborderdist = 0.01;

    /// Values found by parameter optimisation (the defaults).
    static CfsParams optimal();
    /// Hand-picked starting values used before optimisation.
    static CfsParams initial();

    /// Throws DomainError when an invariant is violated.
    void validate() const;

    bool operator==(const CfsParams&) const = default;
};

nlohmann::json to_json(const CfsParams& p);
/// Missing keys keep their defaults; unknown keys are rejected.
CfsParams params_from_json(const nlohmann::json& j, const CfsParams& base = CfsParams::optimal());

/// Flat numeric view used by the tuner; classifier_model maps to 0..3.
using ParamSet = std::map<std::string, double>;
ParamSet to_param_set(const CfsParams& p);
CfsParams from_param_set(const ParamSet& s, const CfsParams& base = CfsParams::optimal());

struct SeparatorLine {
    Direction direction = Direction::Vertical;
    int position = 0;  ///< pixel coordinate inside the current sub-image

    bool operator==(const SeparatorLine&) const = default;
};

/// Population variance of consecutive gaps between the sorted positions,
/// with both borders included as virtual lines; positions are normalised by
/// `extent` first.
double normalized_gap_variance(std::vector<double> positions, double extent);

/// Regularity criterion: `ranked` holds candidate positions ordered by
/// decreasing strength; entries are dropped from the end until the gap
/// variance is at most `max_var`. A single candidate is always kept.
std::vector<int> regularity_prune(std::vector<int> ranked, int extent, double max_var);

}  // namespace cfsep
