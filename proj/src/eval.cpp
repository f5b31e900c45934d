#include "cfsep/eval.hpp"

#include "cfsep/error.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace cfsep {

std::string to_string(Protocol p) { return p == Protocol::ImageClef ? "imageclef" : "nlm"; }

Protocol parse_protocol(const std::string& s) {
    if (s == "imageclef") return Protocol::ImageClef;
    if (s == "nlm") return Protocol::Nlm;
    throw DomainError("unknown protocol '" + s + "'");
}

double overlap_g(const Rect& g, const Rect& f) {
    return static_cast<double>(overlap_area(g, f)) / static_cast<double>(g.area());
}

double overlap_f(const Rect& g, const Rect& f) {
    return static_cast<double>(overlap_area(g, f)) / static_cast<double>(f.area());
}

int imageclef_associations(const std::vector<Rect>& gt, const std::vector<Rect>& det) {
    std::vector<bool> used(det.size(), false);
    int c = 0;
    for (const Rect& g : gt) {
        int best = -1;
        double best_ratio = 0.0;
        for (std::size_t j = 0; j < det.size(); ++j) {
            if (used[j]) continue;
            const double r = overlap_f(g, det[j]);
            if (best < 0 || r > best_ratio) {
                best = static_cast<int>(j);
                best_ratio = r;
            }
        }
        if (best >= 0 && best_ratio > 2.0 / 3.0) {
            used[best] = true;
            ++c;
        }
    }
    return c;
}

double imageclef_score(const std::vector<Rect>& gt, const std::vector<Rect>& det) {
    if (det.empty() || gt.empty()) {
        return 0.0;
    }
    const auto n = std::max(gt.size(), det.size());
    return static_cast<double>(imageclef_associations(gt, det)) / static_cast<double>(n);
}

int nlm_true_positives(const std::vector<Rect>& gt, const std::vector<Rect>& det) {
    int t = 0;
    for (const Rect& f : det) {
        int strong = 0;
        int weak_violations = 0;
        for (const Rect& g : gt) {
            const double r = overlap_g(g, f);
            if (r > 0.75) {
                ++strong;
            } else if (r >= 0.05) {
                ++weak_violations;
            }
        }
        if (strong == 1 && weak_violations == 0) {
            ++t;
        }
    }
    return t;
}

NlmAggregate nlm_aggregate(long long g, long long d, long long t) {
    NlmAggregate a;
    double p = 0.0;
    double r = 0.0;
    if (d == 0) {
        a.precision_undefined = true;
    } else {
        p = static_cast<double>(t) / static_cast<double>(d);
    }
    if (g > 0) {
        r = static_cast<double>(t) / static_cast<double>(g);
    }
    a.precision_pct = 100.0 * p;
    a.recall_pct = 100.0 * r;
    a.f1_pct = p + r > 0.0 ? 100.0 * 2.0 * p * r / (p + r) : 0.0;
    return a;
}

std::vector<Rect> chain_rects(const FigureAnnotation& a, const FigureAnnotation& size_hint) {
    if (a.is_compound && a.rects.size() > 1) {
        return a.rects;
    }
    int w = a.width;
    int h = a.height;
    if (w <= 0 || h <= 0) {
        w = size_hint.width;
        h = size_hint.height;
    }
    if (w <= 0 || h <= 0) {
        // Fall back to the extent of all known boxes.
        w = 0;
        h = 0;
        for (const auto* src : {&a, &size_hint}) {
            for (const Rect& r : src->rects) {
                w = std::max(w, r.right());
                h = std::max(h, r.bottom());
            }
        }
    }
    if (w <= 0 || h <= 0) {
        throw DomainError("image size unknown for figure '" + a.image_id + "'");
    }
    return {Rect{0, 0, w, h}};
}

EvalReport chain_evaluate(const std::vector<FigureAnnotation>& annotations,
                          const std::vector<FigureAnnotation>& outputs, Protocol protocol) {
    std::map<std::string, const FigureAnnotation*> by_id;
    for (const auto& o : outputs) {
        if (!by_id.emplace(o.image_id, &o).second) {
            throw AlignmentError("duplicate output for image '" + o.image_id + "'");
        }
    }
    std::map<std::string, const FigureAnnotation*> gt_by_id;
    for (const auto& a : annotations) {
        if (!gt_by_id.emplace(a.image_id, &a).second) {
            throw AlignmentError("duplicate annotation for image '" + a.image_id + "'");
        }
        if (!by_id.contains(a.image_id)) {
            throw AlignmentError("no output for image '" + a.image_id + "'");
        }
    }
    if (by_id.size() != gt_by_id.size()) {
        throw AlignmentError("outputs contain images without annotation");
    }

    EvalReport report;
    report.protocol = protocol;
    double acc_sum = 0.0;
    for (const auto& [id, gt_ann] : gt_by_id) {
        const FigureAnnotation& out = *by_id.at(id);
        const std::vector<Rect> gt = chain_rects(*gt_ann, out);
        const std::vector<Rect> det = chain_rects(out, *gt_ann);
        ImageScore s{id, 0.0, static_cast<int>(gt.size()), static_cast<int>(det.size())};
        if (protocol == Protocol::ImageClef) {
            s.score = imageclef_score(gt, det);
            acc_sum += s.score;
        } else {
            const int t = nlm_true_positives(gt, det);
            s.score = t;
            report.t += t;
        }
        report.g += s.n_gt;
        report.d += s.n_det;
        report.per_image.push_back(s);
    }
    if (!report.per_image.empty()) {
        report.accuracy_pct = 100.0 * acc_sum / static_cast<double>(report.per_image.size());
    }
    if (protocol == Protocol::Nlm) {
        report.nlm = nlm_aggregate(report.g, report.d, report.t);
    }
    return report;
}

nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json j;
    j["protocol"] = to_string(r.protocol);
    nlohmann::json per = nlohmann::json::array();
    for (const auto& s : r.per_image) {
        per.push_back({{"image_id", s.image_id}, {"score", s.score}, {"n_gt", s.n_gt}, {"n_det", s.n_det}});
    }
    j["per_image"] = per;
    if (r.protocol == Protocol::ImageClef) {
        j["aggregate"] = {{"accuracy_pct", r.accuracy_pct}};
    } else {
        j["aggregate"] = {{"G", r.g},
                          {"D", r.d},
                          {"T", r.t},
                          {"precision_pct", r.nlm.precision_pct},
                          {"recall_pct", r.nlm.recall_pct},
                          {"f1_pct", r.nlm.f1_pct},
                          {"precision_undefined", r.nlm.precision_undefined}};
    }
    return j;
}

std::string summary_table(const EvalReport& r) {
    std::ostringstream os;
    char buf[160];
    if (r.protocol == Protocol::ImageClef) {
        std::snprintf(buf, sizeof buf, "%-10s %8s %10s\n%-10s %8zu %9.1f%%\n", "protocol", "figures", "accuracy",
                      "imageclef", r.per_image.size(), r.accuracy_pct);
    } else {
        std::snprintf(buf, sizeof buf, "%-10s %8s %8s %8s %8s %8s %8s\n%-10s %8lld %8lld %8lld %8.1f %8.1f %8.1f\n",
                      "protocol", "G", "D", "T", "P%", "R%", "F1%", "nlm", r.g, r.d, r.t, r.nlm.precision_pct,
                      r.nlm.recall_pct, r.nlm.f1_pct);
    }
    os << buf;
    return os.str();
}

}  // namespace cfsep
