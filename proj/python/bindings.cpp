#include "cfsep/cfc_features.hpp"
#include "cfsep/cfs.hpp"
#include "cfsep/cli.hpp"
#include "cfsep/edge_sep.hpp"
#include "cfsep/error.hpp"
#include "cfsep/eval.hpp"
#include "cfsep/image_io.hpp"
#include "cfsep/learn.hpp"
#include "cfsep/synth.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace cfsep;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using RectTuple = std::tuple<int, int, int, int>;

GrayImage to_gray(const Array& a) {
    if (a.ndim() != 2) throw ShapeError("expected a 2-D array of intensities");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    return GrayImage(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const GrayImage& img) {
    Array out({img.height(), img.width()});
    std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
    return out;
}

std::vector<Rect> to_rects(const std::vector<RectTuple>& ts) {
    std::vector<Rect> out;
    for (const auto& [x, y, w, h] : ts) out.push_back({x, y, w, h});
    return out;
}

std::vector<RectTuple> to_tuples(const std::vector<Rect>& rs) {
    std::vector<RectTuple> out;
    for (const auto& r : rs) out.emplace_back(r.x, r.y, r.w, r.h);
    return out;
}

Routing parse_routing(const std::string& s) {
    if (s == "band") return Routing::BandBased;
    if (s == "edge") return Routing::EdgeBased;
    throw DomainError("routing must be 'band' or 'edge'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compound figure classification and separation";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def("load_gray", [](const std::string& path) { return to_array(load_gray(path)); }, py::arg("path"));

    m.def(
        "extract_cfc_features",
        [](const Array& img, const std::string& set, int k, int p, int q, int h) {
            return extract_cfc_features(to_gray(img), FeatureSetSpec::parse(set, k), {p, q, h});
        },
        py::arg("image"), py::arg("set") = "434", py::arg("k") = 8, py::arg("p") = 5, py::arg("q") = 8,
        py::arg("h") = 3);

    m.def(
        "feature_dimensionality",
        [](const std::string& set, int k, int p, int q, int h) {
            return feature_dimensionality(FeatureSetSpec::parse(set, k), {p, q, h});
        },
        py::arg("set"), py::arg("k"), py::arg("p") = 5, py::arg("q") = 8, py::arg("h") = 3);

    m.def(
        "peak_threshold",
        [](int depth, double max, double fill_ratio, double alpha, double beta) {
            return peak_threshold({depth, max, fill_ratio}, alpha, beta);
        },
        py::arg("depth"), py::arg("max"), py::arg("fill_ratio"), py::arg("alpha") = 0.2, py::arg("beta") = 1.5);

    m.def("loss_threshold", [](double alpha) { return LossMatrix{alpha}.threshold(); }, py::arg("alpha"));
    m.def("decide", [](double p1, double alpha) { return decide(p1, LossMatrix{alpha}); }, py::arg("p1"),
          py::arg("alpha") = 1.0);

    m.def(
        "imageclef_score",
        [](const std::vector<RectTuple>& gt, const std::vector<RectTuple>& det) {
            return imageclef_score(to_rects(gt), to_rects(det));
        },
        py::arg("gt"), py::arg("det"));
    m.def(
        "nlm_true_positives",
        [](const std::vector<RectTuple>& gt, const std::vector<RectTuple>& det) {
            return nlm_true_positives(to_rects(gt), to_rects(det));
        },
        py::arg("gt"), py::arg("det"));
    m.def(
        "nlm_aggregate",
        [](long long g, long long d, long long t) {
            const auto a = nlm_aggregate(g, d, t);
            return std::make_tuple(a.precision_pct, a.recall_pct, a.f1_pct);
        },
        py::arg("g"), py::arg("d"), py::arg("t"));

    m.def(
        "default_params_json",
        [](const std::string& preset) {
            return to_json(preset == "initial" ? CfsParams::initial() : CfsParams::optimal()).dump();
        },
        py::arg("preset") = "optimal");

    m.def(
        "separate",
        [](const Array& img, const std::string& routing, const std::string& params_json) {
            const CfsParams params = params_from_json(nlohmann::json::parse(params_json));
            const GrayImage g = to_gray(img);
            py::gil_scoped_release release;
            return to_tuples(separate(g, params, parse_routing(routing)).rects);
        },
        py::arg("image"), py::arg("routing"), py::arg("params_json") = "{}");

    m.def(
        "synth_figure",
        [](const std::string& spec_json, int index) {
            const auto f = synth_figure(synth_spec_from_json(nlohmann::json::parse(spec_json)), index);
            return py::make_tuple(to_array(f.image), to_tuples(f.annotation.rects), f.annotation.is_compound);
        },
        py::arg("spec_json"), py::arg("index"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
