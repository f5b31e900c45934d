#include "cfsep/pipeline.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace cfsep {

int default_workers() {
    if (const char* env = std::getenv("CFSEP_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

const IlluModel& IlluModels::select(MappingStrategy s) const {
    if (const auto it = by_strategy.find(s); it != by_strategy.end()) {
        return it->second;
    }
    if (by_strategy.size() == 1) {
        return by_strategy.begin()->second;
    }
    throw DomainError("no illustration model for strategy '" + to_string(s) + "'");
}

FeatureSetSpec feature_spec_of(const AnyModel& model) {
    const ModelMetadata& m = metadata_of(model);
    return FeatureSetSpec::parse(m.spec, m.k);
}

QuantizationParams quantization_of(const AnyModel& model) {
    const ModelMetadata& m = metadata_of(model);
    return {m.p, m.q, m.h};
}

bool predict_compound(const AnyModel& model, std::span<const double> features, const LossMatrix& loss) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) {
        return decide(predict_proba(*lr, features), loss) == 1;
    }
    return decision_value(std::get<LinearSvmModel>(model), features) > 0.0;
}

FigureAnnotation separate_figure(const GrayImage& img, const std::string& image_id, bool predicted_compound,
                                 const CfsParams& params, const IlluModels* illu, Variant variant,
                                 std::optional<Routing> routing) {
    FigureAnnotation out;
    out.image_id = image_id;
    out.width = img.width();
    out.height = img.height();
    if (!predicted_compound) {
        out.is_compound = false;
        out.rects = {full_rect(img)};
        return out;
    }
    SeparationResult res;
    if (routing) {
        res = separate(img, params, *routing);
    } else {
        if (illu == nullptr || illu->empty()) {
            throw DomainError("separation needs an illustration model or a fixed routing");
        }
        IlluModel model = illu->select(params.classifier_model);
        model.decision_threshold = params.decision_threshold;
        res = separate(img, params, model, variant);
    }
    out.rects = std::move(res.rects);
    out.is_compound = out.rects.size() > 1;
    return out;
}

}  // namespace cfsep
