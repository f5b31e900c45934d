/**
 * @file synth.hpp
 * @brief Seeded generator of synthetic compound figures with exact
 *        subfigure ground truth.
 */
#pragma once

#include "cfsep/data.hpp"
#include "cfsep/eval.hpp"
#include "cfsep/illustration.hpp"
#include "cfsep/raster.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cfsep {

enum class SeparatorKind { WhiteBand, BorderEdge, Stitched, None };

enum class ContentKind { Noise, Chart, Mixed };

struct IntRange {
    int min = 0;
    int max = 0;
};

struct SynthSpec {
    int count = 10;
    IntRange rows{1, 2};
    IntRange cols{1, 3};
    /// Kinds are drawn uniformly per figure.
    std::vector<SeparatorKind> separator_kinds{SeparatorKind::WhiteBand};
    IntRange band_width{8, 24};
    IntRange outer_margin{0, 16};    ///< white margin of WhiteBand figures
    IntRange panel_size{120, 260};   ///< panel width and height
    ContentKind content = ContentKind::Mixed;
    double markup_noise = 0.0;       ///< probability of a dark mark in each gutter
    /// Fraction of single figures containing a sharp internal intensity step.
    double hard_single_fraction = 0.0;
    std::uint64_t seed = 1;
    std::string id_prefix = "fig";

    void validate() const;
};

struct SynthFigure {
    GrayImage image;
    FigureAnnotation annotation;
    std::vector<MetaLabel> labels;  ///< one per panel: ILL for charts, NON for noise
    SeparatorKind kind = SeparatorKind::None;
};

std::string to_string(SeparatorKind k);
SeparatorKind parse_separator_kind(const std::string& s);
std::string to_string(ContentKind k);
ContentKind parse_content_kind(const std::string& s);

nlohmann::json to_json(const SynthSpec& s);
/// Missing keys keep their defaults.
SynthSpec synth_spec_from_json(const nlohmann::json& j);

/// Figure `index` of the corpus; depends only on (spec, index).
SynthFigure synth_figure(const SynthSpec& spec, int index);
std::vector<SynthFigure> synth_generate(const SynthSpec& spec);

/// Writes images as PNG under `dir/images` and the corpus file.
Corpus write_synth_corpus(const std::vector<SynthFigure>& figures, const std::filesystem::path& dir);

}  // namespace cfsep
