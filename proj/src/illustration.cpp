#include "cfsep/illustration.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cfsep {

std::vector<double> simple2(const GrayImage& img) {
    if (img.empty()) {
        throw InvalidImage("simple2 of empty image");
    }
    std::array<std::size_t, 256> hist{};
    double sum = 0.0;
    for (double v : img.pixels()) {
        ++hist[std::min(255, static_cast<int>(v * 256.0))];
        sum += v;
    }
    const double n = static_cast<double>(img.pixels().size());
    double entropy = 0.0;
    for (std::size_t c : hist) {
        if (c > 0) {
            const double p = c / n;
            entropy -= p * std::log2(p);
        }
    }
    return {entropy, sum / n};
}

std::vector<double> simple11(const GrayImage& img) {
    auto out = simple2(img);
    std::vector<double> sorted(img.pixels().begin(), img.pixels().end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t pct = 10; pct <= 90; pct += 10) {
        const std::size_t rank = std::max<std::size_t>(1, (pct * n + 99) / 100);
        out.push_back(sorted[rank - 1]);
    }
    return out;
}

MappedLabel map_labels(std::span<const MetaLabel> labels, MappingStrategy strategy) {
    if (labels.empty()) {
        throw DomainError("cannot map an empty label list");
    }
    auto as_mapped = [](MetaLabel m) {
        return m == MetaLabel::Illustration ? MappedLabel::Illustration : MappedLabel::NonIllustration;
    };
    const auto ill = std::count(labels.begin(), labels.end(), MetaLabel::Illustration);
    const auto non = static_cast<std::ptrdiff_t>(labels.size()) - ill;
    switch (strategy) {
        case MappingStrategy::First:
            return as_mapped(labels.front());
        case MappingStrategy::Majority:
            if (ill == non) {
                return MappedLabel::Dropped;
            }
            return ill > non ? MappedLabel::Illustration : MappedLabel::NonIllustration;
        case MappingStrategy::Unanimous:
            if (ill > 0 && non > 0) {
                return MappedLabel::Dropped;
            }
            return as_mapped(labels.front());
        case MappingStrategy::Greedy:
            return ill > 0 ? MappedLabel::Illustration : MappedLabel::NonIllustration;
    }
    throw DomainError("unknown mapping strategy");
}

double IlluModel::illustration_score(std::span<const double> features) const {
    return score_class1(inner, features);
}

std::vector<double> illustration_features(const GrayImage& img, IlluFeatureKind kind) {
    switch (kind) {
        case IlluFeatureKind::Simple2:
            return simple2(img);
        case IlluFeatureKind::Simple11:
            return simple11(img);
        case IlluFeatureKind::External:
            break;
    }
    throw DomainError("external illustration features must be supplied by the caller");
}

Routing route_features(const IlluModel& model, std::span<const double> features) {
    if (has_probabilities(model.inner)) {
        return model.illustration_score(features) > model.decision_threshold ? Routing::BandBased
                                                                            : Routing::EdgeBased;
    }
    return model.illustration_score(features) > 0.5 ? Routing::BandBased : Routing::EdgeBased;
}

Routing route(const IlluModel& model, const GrayImage& img) {
    return route_features(model, illustration_features(img, model.feature_kind));
}

IlluModel train_illustration(const std::vector<GrayImage>& images, std::span<const MappedLabel> labels,
                             IlluFeatureKind kind, bool use_svm, double decision_threshold) {
    if (images.size() != labels.size()) {
        throw ShapeError("images and labels differ in length");
    }
    FeatureMatrix x;
    std::vector<int> y;
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (labels[i] == MappedLabel::Dropped) {
            continue;
        }
        x.push_back(illustration_features(images[i], kind));
        y.push_back(labels[i] == MappedLabel::Illustration ? 1 : 0);
    }
    IlluModel model;
    model.feature_kind = kind;
    model.decision_threshold = decision_threshold;
    if (use_svm) {
        model.inner = train_linear_svm(x, y);
    } else {
        model.inner = train_logreg(x, y);
    }
    std::visit([&](auto& m) { m.metadata.spec = to_string(kind); }, model.inner);
    return model;
}

std::string to_string(MappingStrategy s) {
    switch (s) {
        case MappingStrategy::First:
            return "first";
        case MappingStrategy::Majority:
            return "majority";
        case MappingStrategy::Unanimous:
            return "unanimous";
        case MappingStrategy::Greedy:
            return "greedy";
    }
    return "?";
}

std::string to_string(IlluFeatureKind k) {
    switch (k) {
        case IlluFeatureKind::Simple2:
            return "simple2";
        case IlluFeatureKind::Simple11:
            return "simple11";
        case IlluFeatureKind::External:
            return "external";
    }
    return "?";
}

std::string to_string(Routing r) { return r == Routing::BandBased ? "band" : "edge"; }

std::string to_string(MetaLabel m) { return m == MetaLabel::Illustration ? "ILL" : "NON"; }

MappingStrategy parse_strategy(const std::string& s) {
    if (s == "first") return MappingStrategy::First;
    if (s == "majority") return MappingStrategy::Majority;
    if (s == "unanimous") return MappingStrategy::Unanimous;
    if (s == "greedy") return MappingStrategy::Greedy;
    throw DomainError("unknown mapping strategy '" + s + "'");
}

IlluFeatureKind parse_feature_kind(const std::string& s) {
    if (s == "simple2") return IlluFeatureKind::Simple2;
    if (s == "simple11") return IlluFeatureKind::Simple11;
    if (s == "external") return IlluFeatureKind::External;
    throw DomainError("unknown illustration feature kind '" + s + "'");
}

MetaLabel parse_meta_label(const std::string& s) {
    if (s == "ILL" || s == "illustration") return MetaLabel::Illustration;
    if (s == "NON" || s == "non-illustration") return MetaLabel::NonIllustration;
    throw DomainError("unknown meta label '" + s + "'");
}

nlohmann::json illu_model_to_json(const IlluModel& m) {
    nlohmann::json j = model_to_json(m.inner);
    j["feature_kind"] = to_string(m.feature_kind);
    j["decision_threshold"] = m.decision_threshold;
    return j;
}

IlluModel illu_model_from_json(const nlohmann::json& j) {
    IlluModel m;
    m.inner = model_from_json(j);
    try {
        m.feature_kind = parse_feature_kind(j.value("feature_kind", std::string("simple2")));
        m.decision_threshold = j.value("decision_threshold", 0.5);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
    if (!(m.decision_threshold >= 0.0 && m.decision_threshold <= 1.0)) {
        throw ParseError("decision_threshold outside [0,1]", 0);
    }
    return m;
}

}  // namespace cfsep
