/**
 * @file learn.hpp
 * @brief Binary linear classifiers and the misclassification-loss decision rule.
 *
 * Both learners standardise features with statistics recorded at training
 * time and run deterministic full-batch descent from a zero start, so the
 * same data always yields the same model.
 */
#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cfsep {

/// Row-major sample matrix; every row has the same length.
using FeatureMatrix = std::vector<std::vector<double>>;

struct Standardizer {
    std::vector<double> means;
    std::vector<double> scales;  ///< all > 0; constant columns get scale 1

    static Standardizer fit(const FeatureMatrix& x);
    std::vector<double> apply(std::span<const double> x) const;
    std::size_t dim() const { return means.size(); }
};

struct ModelMetadata {
    std::string spec;  ///< feature set code or illustration feature kind
    int k = 0;
    int p = 0;
    int q = 0;
    int h = 0;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    Standardizer standardizer;
    ModelMetadata metadata;
};

struct LinearSvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    Standardizer standardizer;
    ModelMetadata metadata;
};

struct LogRegOptions {
    double l2 = 1e-4;
    int epochs = 500;
    double learning_rate = 0.1;
};

struct SvmOptions {
    double c = 1.0;
    int epochs = 500;
    double learning_rate = 0.1;
};

/// Labels are 0 (class C0) or 1 (class C1). Throws DegenerateTrainingSet
/// when only one class is present, ShapeError on ragged input.
LogRegModel train_logreg(const FeatureMatrix& x, std::span<const int> labels, const LogRegOptions& opt = {});

/// p(C1 | x). Throws ShapeError on dimensionality mismatch.
double predict_proba(const LogRegModel& model, std::span<const double> x);

/// Minimises ||w||^2 / 2 + c * mean(hinge) by subgradient descent with a
/// 1/sqrt(t) step schedule, keeping the best iterate.
LinearSvmModel train_linear_svm(const FeatureMatrix& x, std::span<const int> labels, const SvmOptions& opt = {});

/// Signed distance-like score; positive means C1.
double decision_value(const LinearSvmModel& model, std::span<const double> x);

/// Loss matrix [[0, 1], [alpha, 0]]: rows are true classes, columns predictions.
struct LossMatrix {
    double alpha = 1.0;

    /// Probability threshold 1 / (1 + alpha).
    double threshold() const { return 1.0 / (1.0 + alpha); }
    /// Loss weight whose threshold equals `d` (inverse of threshold()).
    static LossMatrix from_threshold(double d);
};

/// Returns 1 (C1) iff p1 >= 1 / (1 + alpha).
int decide(double p1, const LossMatrix& loss);

struct ClassifierMetrics {
    double accuracy_pct = 0.0;
    double fp_pct = 0.0;  ///< predicted C1, truly C0
    double fn_pct = 0.0;  ///< predicted C0, truly C1
    std::size_t correct = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
};

ClassifierMetrics classifier_metrics(std::span<const int> predictions, std::span<const int> truth);

using AnyModel = std::variant<LogRegModel, LinearSvmModel>;

/// Class-1 probability for LogReg; SVM models yield 1 or 0 from the sign of
/// the decision value.
double score_class1(const AnyModel& model, std::span<const double> x);
bool has_probabilities(const AnyModel& model);
const ModelMetadata& metadata_of(const AnyModel& model);

nlohmann::json model_to_json(const AnyModel& model);
AnyModel model_from_json(const nlohmann::json& j);
void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

namespace detail {

/// Mean negative log-likelihood plus l2/2 * ||w||^2 on already standardised
/// features, with its gradient. Exposed for gradient checks.
double logreg_objective(const FeatureMatrix& z, std::span<const int> labels, std::span<const double> w, double b,
                        double l2, std::vector<double>* grad_w, double* grad_b);

}  // namespace detail

}  // namespace cfsep
