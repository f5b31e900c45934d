/**
 * @file pipeline.hpp
 * @brief Corpus-level glue shared by the command line and the tests:
 *        compound classification, separation of single figures and a
 *        deterministic worker pool.
 */
#pragma once

#include "cfsep/cfc_features.hpp"
#include "cfsep/cfs.hpp"
#include "cfsep/eval.hpp"
#include "cfsep/illustration.hpp"
#include "cfsep/learn.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace cfsep {

/// Worker count from CFSEP_WORKERS, else the hardware concurrency (>= 1).
int default_workers();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Illustration models keyed by the label mapping they were trained with.
struct IlluModels {
    std::map<MappingStrategy, IlluModel> by_strategy;

    /// The model for `s`, or the only model when just one is loaded.
    const IlluModel& select(MappingStrategy s) const;
    bool empty() const { return by_strategy.empty(); }
};

/// Feature set, k and quantisation recorded in a CFC model.
FeatureSetSpec feature_spec_of(const AnyModel& model);
QuantizationParams quantization_of(const AnyModel& model);

/// Class-1 (compound) decision: expected-loss rule for probabilistic models,
/// sign of the margin otherwise.
bool predict_compound(const AnyModel& model, std::span<const double> features, const LossMatrix& loss);

/// Separation output for one figure. Figures not predicted compound yield a
/// single whole-image box. `routing` forces the detector when set; otherwise
/// the illustration model selected by params.classifier_model decides, with
/// its threshold replaced by params.decision_threshold.
FigureAnnotation separate_figure(const GrayImage& img, const std::string& image_id, bool predicted_compound,
                                 const CfsParams& params, const IlluModels* illu, Variant variant,
                                 std::optional<Routing> routing);

}  // namespace cfsep
