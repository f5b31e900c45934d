#include "cfsep/learn.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace cfsep {

namespace {

void check_training_input(const FeatureMatrix& x, std::span<const int> labels) {
    if (x.empty() || x.size() != labels.size()) {
        throw ShapeError("feature rows and labels differ in length");
    }
    const std::size_t d = x.front().size();
    bool has0 = false;
    bool has1 = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != d) {
            throw ShapeError("ragged feature matrix");
        }
        for (double v : x[i]) {
            if (std::isnan(v)) {
                throw DomainError("NaN feature value");
            }
        }
        if (labels[i] == 0) {
            has0 = true;
        } else if (labels[i] == 1) {
            has1 = true;
        } else {
            throw DomainError("labels must be 0 or 1");
        }
    }
    if (!has0 || !has1) {
        throw DegenerateTrainingSet("training set contains a single class");
    }
}

double sigmoid(double s) {
    if (s >= 0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    const double e = std::exp(s);
    return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

FeatureMatrix standardize_all(const Standardizer& st, const FeatureMatrix& x) {
    FeatureMatrix z;
    z.reserve(x.size());
    for (const auto& row : x) {
        z.push_back(st.apply(row));
    }
    return z;
}

}  // namespace

Standardizer Standardizer::fit(const FeatureMatrix& x) {
    Standardizer st;
    if (x.empty()) {
        return st;
    }
    const std::size_t d = x.front().size();
    const double n = static_cast<double>(x.size());
    st.means.assign(d, 0.0);
    st.scales.assign(d, 0.0);
    for (const auto& row : x) {
        for (std::size_t j = 0; j < d; ++j) {
            st.means[j] += row[j];
        }
    }
    for (auto& m : st.means) {
        m /= n;
    }
    for (const auto& row : x) {
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = row[j] - st.means[j];
            st.scales[j] += dv * dv;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(st.scales[j] / n);
        // Relative cutoff: a column that is constant up to rounding noise.
        const double tiny = 1e-12 * std::max(1.0, std::abs(st.means[j]));
        st.scales[j] = sd > tiny ? sd : 1.0;
    }
    return st;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    if (x.size() != means.size()) {
        throw ShapeError("expected " + std::to_string(means.size()) + " features, got " + std::to_string(x.size()));
    }
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        z[j] = (x[j] - means[j]) / scales[j];
    }
    return z;
}

namespace detail {

double logreg_objective(const FeatureMatrix& z, std::span<const int> labels, std::span<const double> w, double b,
                        double l2, std::vector<double>* grad_w, double* grad_b) {
    const double n = static_cast<double>(z.size());
    double loss = 0.0;
    if (grad_w) {
        grad_w->assign(w.size(), 0.0);
    }
    double gb = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double s = dot(z[i], w) + b;
        // log(1 + exp(-y s)) with y in {-1, +1}, evaluated stably.
        const double ys = labels[i] == 1 ? s : -s;
        loss += ys > 0 ? std::log1p(std::exp(-ys)) : -ys + std::log1p(std::exp(ys));
        const double r = sigmoid(s) - labels[i];
        if (grad_w) {
            for (std::size_t j = 0; j < w.size(); ++j) {
                (*grad_w)[j] += r * z[i][j];
            }
        }
        gb += r;
    }
    loss /= n;
    double reg = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        reg += w[j] * w[j];
        if (grad_w) {
            (*grad_w)[j] = (*grad_w)[j] / n + l2 * w[j];
        }
    }
    if (grad_b) {
        *grad_b = gb / n;
    }
    return loss + 0.5 * l2 * reg;
}

}  // namespace detail

LogRegModel train_logreg(const FeatureMatrix& x, std::span<const int> labels, const LogRegOptions& opt) {
    check_training_input(x, labels);
    LogRegModel model;
    model.standardizer = Standardizer::fit(x);
    const FeatureMatrix z = standardize_all(model.standardizer, x);
    model.weights.assign(model.standardizer.dim(), 0.0);
    std::vector<double> gw;
    double gb = 0.0;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        detail::logreg_objective(z, labels, model.weights, model.bias, opt.l2, &gw, &gb);
        for (std::size_t j = 0; j < gw.size(); ++j) {
            model.weights[j] -= opt.learning_rate * gw[j];
        }
        model.bias -= opt.learning_rate * gb;
    }
    return model;
}

double predict_proba(const LogRegModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size()) {
        throw ShapeError("model expects " + std::to_string(model.weights.size()) + " features, got " +
                         std::to_string(x.size()));
    }
    const auto z = model.standardizer.apply(x);
    return sigmoid(dot(z, model.weights) + model.bias);
}

LinearSvmModel train_linear_svm(const FeatureMatrix& x, std::span<const int> labels, const SvmOptions& opt) {
    check_training_input(x, labels);
    if (!(opt.c > 0.0)) {
        throw DomainError("SVM c must be positive");
    }
    LinearSvmModel model;
    model.standardizer = Standardizer::fit(x);
    const FeatureMatrix z = standardize_all(model.standardizer, x);
    const std::size_t d = model.standardizer.dim();
    const double n = static_cast<double>(z.size());

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> gw(d);
    auto objective = [&](std::span<const double> wv, double bv) {
        double hinge = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double y = labels[i] == 1 ? 1.0 : -1.0;
            hinge += std::max(0.0, 1.0 - y * (dot(z[i], wv) + bv));
        }
        return 0.5 * dot(wv, wv) + opt.c * hinge / n;
    };

    double best = objective(w, b);
    model.weights = w;
    model.bias = b;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        gw = w;
        double gb = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double y = labels[i] == 1 ? 1.0 : -1.0;
            if (y * (dot(z[i], w) + b) < 1.0) {
                for (std::size_t j = 0; j < d; ++j) {
                    gw[j] -= opt.c * y * z[i][j] / n;
                }
                gb -= opt.c * y / n;
            }
        }
        const double step = opt.learning_rate / std::sqrt(epoch + 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            w[j] -= step * gw[j];
        }
        b -= step * gb;
        const double obj = objective(w, b);
        if (obj < best) {
            best = obj;
            model.weights = w;
            model.bias = b;
        }
    }
    return model;
}

double decision_value(const LinearSvmModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size()) {
        throw ShapeError("model expects " + std::to_string(model.weights.size()) + " features, got " +
                         std::to_string(x.size()));
    }
    const auto z = model.standardizer.apply(x);
    return dot(z, model.weights) + model.bias;
}

LossMatrix LossMatrix::from_threshold(double d) {
    if (!(d > 0.0 && d <= 1.0)) {
        throw DomainError("decision threshold must lie in (0,1]");
    }
    return {1.0 / d - 1.0};
}

int decide(double p1, const LossMatrix& loss) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw DomainError("probability outside [0,1]");
    }
    if (!(loss.alpha > 0.0)) {
        throw DomainError("loss weight alpha must be positive");
    }
    return p1 >= loss.threshold() ? 1 : 0;
}

ClassifierMetrics classifier_metrics(std::span<const int> predictions, std::span<const int> truth) {
    if (predictions.size() != truth.size() || predictions.empty()) {
        throw ShapeError("predictions and truth must be non-empty and equally long");
    }
    std::size_t correct = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predictions[i] == truth[i]) {
            ++correct;
        } else if (predictions[i] == 1) {
            ++fp;
        } else {
            ++fn;
        }
    }
    const double n = static_cast<double>(truth.size());
    ClassifierMetrics m;
    m.correct = correct;
    m.false_positives = fp;
    m.false_negatives = fn;
    m.accuracy_pct = 100.0 * static_cast<double>(correct) / n;
    m.fp_pct = 100.0 * static_cast<double>(fp) / n;
    m.fn_pct = 100.0 * static_cast<double>(fn) / n;
    return m;
}

double score_class1(const AnyModel& model, std::span<const double> x) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) {
        return predict_proba(*lr, x);
    }
    return decision_value(std::get<LinearSvmModel>(model), x) > 0.0 ? 1.0 : 0.0;
}

bool has_probabilities(const AnyModel& model) { return std::holds_alternative<LogRegModel>(model); }

const ModelMetadata& metadata_of(const AnyModel& model) {
    return std::visit([](const auto& m) -> const ModelMetadata& { return m.metadata; }, model);
}

nlohmann::json model_to_json(const AnyModel& model) {
    return std::visit(
        [&](const auto& m) {
            nlohmann::json j;
            j["kind"] = has_probabilities(model) ? "logreg" : "linear_svm";
            j["weights"] = m.weights;
            j["bias"] = m.bias;
            j["means"] = m.standardizer.means;
            j["scales"] = m.standardizer.scales;
            j["metadata"] = {{"spec", m.metadata.spec},
                             {"k", m.metadata.k},
                             {"p", m.metadata.p},
                             {"q", m.metadata.q},
                             {"h", m.metadata.h}};
            return j;
        },
        model);
}

AnyModel model_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        auto fill = [&](auto m) {
            m.weights = j.at("weights").get<std::vector<double>>();
            m.bias = j.at("bias").get<double>();
            m.standardizer.means = j.at("means").get<std::vector<double>>();
            m.standardizer.scales = j.at("scales").get<std::vector<double>>();
            if (m.standardizer.means.size() != m.weights.size() || m.standardizer.scales.size() != m.weights.size()) {
                throw ParseError("model vectors differ in length", 0);
            }
            for (double s : m.standardizer.scales) {
                if (!(s > 0.0)) {
                    throw ParseError("model scales must be positive", 0);
                }
            }
            if (j.contains("metadata")) {
                const auto& md = j.at("metadata");
                m.metadata.spec = md.value("spec", std::string{});
                m.metadata.k = md.value("k", 0);
                m.metadata.p = md.value("p", 0);
                m.metadata.q = md.value("q", 0);
                m.metadata.h = md.value("h", 0);
            }
            return m;
        };
        if (kind == "logreg") {
            return fill(LogRegModel{});
        }
        if (kind == "linear_svm") {
            return fill(LinearSvmModel{});
        }
        throw ParseError("unknown model kind '" + kind + "'", 0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model: ") + e.what(), 0);
    }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << model_to_json(model).dump(2) << '\n';
}

AnyModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingAsset("cannot open model " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed model JSON: ") + e.what(), 0);
    }
    return model_from_json(j);
}

}  // namespace cfsep
