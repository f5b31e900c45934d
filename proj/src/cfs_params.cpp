#include "cfsep/cfs_params.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cmath>

namespace cfsep {

CfsParams CfsParams::optimal() { return CfsParams{}; }

CfsParams CfsParams::initial() {
    CfsParams p;
    p.classifier_model = MappingStrategy::First;
    p.decision_threshold = 0.5;
    p.mindim = 50;
    p.elim_area = 0.0;
    p.edge_maxdepth = 10;
    p.edge_sobelthresh = 0.05;
    p.edge_houghratio_min = 0.25;
    p.edge_houghratio_base = 1.2;
    p.edge_maxdistvar = 0.0001;
    p.edge_gapratio = 0.2;
    p.edge_lenratio = 0.05;
    p.edge_minseplength = 0.7;
    p.edge_minborderdist = 0.1;
    p.band_maxdepth = 2;
    p.band_minsepwidth = 0.03;
    p.band_maxdistvar = 0.0003;
    p.band_minborderdist = 0.1;
    return p;
}

void CfsParams::validate() const {
    auto fraction = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError(std::string(name) + " must lie in [0,1]");
        }
    };
    fraction(decision_threshold, "decision_threshold");
    fraction(elim_area, "elim_area");
    fraction(edge_gapratio, "edge_gapratio");
    fraction(edge_lenratio, "edge_lenratio");
    fraction(edge_minseplength, "edge_minseplength");
    fraction(edge_minborderdist, "edge_minborderdist");
    fraction(band_minsepwidth, "band_minsepwidth");
    fraction(band_minborderdist, "band_minborderdist");
    if (mindim < 1) throw DomainError("mindim must be >= 1");
    if (edge_maxdepth < 1 || band_maxdepth < 1) throw DomainError("maximal depths must be >= 1");
    if (!(edge_houghratio_min > 0.0)) throw DomainError("edge_houghratio_min must be positive");
    if (!(edge_houghratio_base >= 1.0)) throw DomainError("edge_houghratio_base must be >= 1");
    if (!(edge_sobelthresh >= 0.0)) throw DomainError("edge_sobelthresh must be >= 0");
    if (!(edge_maxdistvar >= 0.0) || !(band_maxdistvar >= 0.0)) throw DomainError("distance variances must be >= 0");
}

ParamSet to_param_set(const CfsParams& p) {
    return {
        {"classifier_model", static_cast<double>(p.classifier_model)},
        {"decision_threshold", p.decision_threshold},
        {"mindim", static_cast<double>(p.mindim)},
        {"elim_area", p.elim_area},
        {"edge_maxdepth", static_cast<double>(p.edge_maxdepth)},
        {"edge_sobelthresh", p.edge_sobelthresh},
        {"edge_houghratio_min", p.edge_houghratio_min},
        {"edge_houghratio_base", p.edge_houghratio_base},
        {"edge_maxdistvar", p.edge_maxdistvar},
        {"edge_gapratio", p.edge_gapratio},
        {"edge_lenratio", p.edge_lenratio},
        {"edge_minseplength", p.edge_minseplength},
        {"edge_minborderdist", p.edge_minborderdist},
        {"band_maxdepth", static_cast<double>(p.band_maxdepth)},
        {"band_minsepwidth", p.band_minsepwidth},
        {"band_maxdistvar", p.band_maxdistvar},
        {"band_minborderdist", p.band_minborderdist},
    };
}

CfsParams from_param_set(const ParamSet& s, const CfsParams& base) {
    CfsParams p = base;
    for (const auto& [name, v] : s) {
        if (name == "classifier_model") {
            const int idx = static_cast<int>(std::lround(v));
            if (idx < 0 || idx > 3) throw DomainError("classifier_model index out of range");
            p.classifier_model = static_cast<MappingStrategy>(idx);
        } else if (name == "decision_threshold") p.decision_threshold = v;
        else if (name == "mindim") p.mindim = static_cast<int>(std::lround(v));
        else if (name == "elim_area") p.elim_area = v;
        else if (name == "edge_maxdepth") p.edge_maxdepth = static_cast<int>(std::lround(v));
        else if (name == "edge_sobelthresh") p.edge_sobelthresh = v;
        else if (name == "edge_houghratio_min") p.edge_houghratio_min = v;
        else if (name == "edge_houghratio_base") p.edge_houghratio_base = v;
        else if (name == "edge_maxdistvar") p.edge_maxdistvar = v;
        else if (name == "edge_gapratio") p.edge_gapratio = v;
        else if (name == "edge_lenratio") p.edge_lenratio = v;
        else if (name == "edge_minseplength") p.edge_minseplength = v;
        else if (name == "edge_minborderdist") p.edge_minborderdist = v;
        else if (name == "band_maxdepth") p.band_maxdepth = static_cast<int>(std::lround(v));
        else if (name == "band_minsepwidth") p.band_minsepwidth = v;
        else if (name == "band_maxdistvar") p.band_maxdistvar = v;
        else if (name == "band_minborderdist") p.band_minborderdist = v;
        else throw DomainError("unknown parameter '" + name + "'");
    }
    return p;
}

nlohmann::json to_json(const CfsParams& p) {
    nlohmann::json j;
    for (const auto& [name, v] : to_param_set(p)) {
        if (name == "classifier_model") {
            j[name] = to_string(p.classifier_model);
        } else if (name == "mindim" || name == "edge_maxdepth" || name == "band_maxdepth") {
            j[name] = static_cast<int>(v);
        } else {
            j[name] = v;
        }
    }
    return j;
}

CfsParams params_from_json(const nlohmann::json& j, const CfsParams& base) {
    if (!j.is_object()) {
        throw ParseError("parameter file must hold a JSON object", 0);
    }
    ParamSet s;
    CfsParams p = base;
    try {
        for (const auto& [name, v] : j.items()) {
            if (name == "classifier_model") {
                p.classifier_model = parse_strategy(v.get<std::string>());
                s[name] = static_cast<double>(p.classifier_model);
            } else {
                s[name] = v.get<double>();
            }
        }
        p = from_param_set(s, p);
        p.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed parameter value: ") + e.what(), 0);
    }
    return p;
}

double normalized_gap_variance(std::vector<double> positions, double extent) {
    std::sort(positions.begin(), positions.end());
    std::vector<double> pts;
    pts.reserve(positions.size() + 2);
    pts.push_back(0.0);
    for (double v : positions) {
        pts.push_back(v / extent);
    }
    pts.push_back(1.0);
    const std::size_t n = pts.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += pts[i + 1] - pts[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pts[i + 1] - pts[i] - mean;
        var += d * d;
    }
    return var / static_cast<double>(n);
}

std::vector<int> regularity_prune(std::vector<int> ranked, int extent, double max_var) {
    auto variance = [&] {
        return normalized_gap_variance(std::vector<double>(ranked.begin(), ranked.end()), extent);
    };
    while (ranked.size() > 1 && variance() > max_var) {
        ranked.pop_back();
    }
    return ranked;
}

}  // namespace cfsep
