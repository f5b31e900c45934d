/**
 * @file illustration.hpp
 * @brief Illustration-vs-other classifier that routes compound images to
 *        band-based or edge-based separator detection.
 */
#pragma once

#include "cfsep/learn.hpp"
#include "cfsep/raster.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfsep {

enum class MetaLabel { Illustration, NonIllustration };

enum class MappingStrategy { First, Majority, Unanimous, Greedy };

enum class MappedLabel { Illustration, NonIllustration, Dropped };

enum class IlluFeatureKind { Simple2, Simple11, External };

enum class Routing { BandBased, EdgeBased };

/// [entropy in bits of the 256-bin intensity histogram, mean intensity]
std::vector<double> simple2(const GrayImage& img);

/// simple2 followed by the nearest-rank deciles 10%..90% of the intensities.
std::vector<double> simple11(const GrayImage& img);

/// Collapses the meta labels of a multi-label image to one label.
/// Throws DomainError on an empty list.
MappedLabel map_labels(std::span<const MetaLabel> labels, MappingStrategy strategy);

struct IlluModel {
    AnyModel inner;
    IlluFeatureKind feature_kind = IlluFeatureKind::Simple2;
    double decision_threshold = 0.5;

    /// Illustration probability (LogReg) or 0/1 class (SVM) for a feature vector.
    double illustration_score(std::span<const double> features) const;
};

std::vector<double> illustration_features(const GrayImage& img, IlluFeatureKind kind);

/// BandBased iff the illustration probability is strictly greater than the
/// decision threshold, or, for margin models, the predicted class is
/// Illustration. External-feature models need route_features().
Routing route(const IlluModel& model, const GrayImage& img);
Routing route_features(const IlluModel& model, std::span<const double> features);

/// Trains an illustration model on labelled images; class 1 = Illustration.
IlluModel train_illustration(const std::vector<GrayImage>& images, std::span<const MappedLabel> labels,
                             IlluFeatureKind kind, bool use_svm, double decision_threshold);

std::string to_string(MappingStrategy s);
std::string to_string(IlluFeatureKind k);
std::string to_string(Routing r);
MappingStrategy parse_strategy(const std::string& s);
IlluFeatureKind parse_feature_kind(const std::string& s);
MetaLabel parse_meta_label(const std::string& s);
std::string to_string(MetaLabel m);

nlohmann::json illu_model_to_json(const IlluModel& m);
IlluModel illu_model_from_json(const nlohmann::json& j);

}  // namespace cfsep
