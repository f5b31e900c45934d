/**
 * @file eval.hpp
 * @brief Subfigure evaluation protocols (ImageCLEF accuracy and NLM
 *        precision/recall) and the classification-then-separation chain
 *        convention.
 */
#pragma once

#include "cfsep/raster.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cfsep {

/// Subfigure boxes of one figure. width/height give the image size when
/// known (0 otherwise); they are not part of the annotation file format.
struct FigureAnnotation {
    std::string image_id;
    bool is_compound = true;
    std::vector<Rect> rects;
    int width = 0;
    int height = 0;

    bool operator==(const FigureAnnotation&) const = default;
};

enum class Protocol { ImageClef, Nlm };

std::string to_string(Protocol p);
Protocol parse_protocol(const std::string& s);

/// |g ∩ f| / |g|
double overlap_g(const Rect& g, const Rect& f);
/// |g ∩ f| / |f|
double overlap_f(const Rect& g, const Rect& f);

/// Number of associations made by the ImageCLEF rule.
int imageclef_associations(const std::vector<Rect>& gt, const std::vector<Rect>& det);
/// C / max(N_G, N_D); 0 for an empty detection list.
double imageclef_score(const std::vector<Rect>& gt, const std::vector<Rect>& det);

/// Detections overlapping exactly one ground-truth box by more than 75% of
/// that box and every other ground-truth box by less than 5%.
int nlm_true_positives(const std::vector<Rect>& gt, const std::vector<Rect>& det);

struct NlmAggregate {
    double precision_pct = 0.0;
    double recall_pct = 0.0;
    double f1_pct = 0.0;
    bool precision_undefined = false;  ///< D == 0
};

NlmAggregate nlm_aggregate(long long g, long long d, long long t);

struct ImageScore {
    std::string image_id;
    double score = 0.0;  ///< ImageCLEF accuracy, or T for NLM
    int n_gt = 0;
    int n_det = 0;
};

struct EvalReport {
    Protocol protocol = Protocol::ImageClef;
    std::vector<ImageScore> per_image;  ///< sorted by image id
    double accuracy_pct = 0.0;          ///< ImageCLEF
    long long g = 0;                    ///< NLM counts
    long long d = 0;
    long long t = 0;
    NlmAggregate nlm;
};

/// Applies the single-subfigure convention: a figure that is not compound,
/// or has at most one box, becomes one box covering the whole image.
/// `size_hint` supplies the image size when `a` lacks it.
std::vector<Rect> chain_rects(const FigureAnnotation& a, const FigureAnnotation& size_hint);

/// Scores `outputs` against `annotations`, matched by image id. Throws
/// AlignmentError when an annotated id has no output.
EvalReport chain_evaluate(const std::vector<FigureAnnotation>& annotations,
                          const std::vector<FigureAnnotation>& outputs, Protocol protocol);

nlohmann::json to_json(const EvalReport& r);
/// Human-readable one-table summary.
std::string summary_table(const EvalReport& r);

}  // namespace cfsep
