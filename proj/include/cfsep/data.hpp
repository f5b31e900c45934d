/**
 * @file data.hpp
 * @brief Corpus directories and annotation files.
 *
 * A corpus directory holds `corpus.jsonl`, one record per line:
 *
 *     {"image_id": "...", "image_path": "images/a.png", "is_compound": true,
 *      "rects": [{"x":0,"y":0,"w":10,"h":10}], "labels": ["ILL", "NON"]}
 *
 * `image_path` is relative to the directory; `labels` is optional.
 * Annotation and prediction files use the same record without
 * `image_path` and `labels`.
 */
#pragma once

#include "cfsep/eval.hpp"
#include "cfsep/illustration.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace cfsep {

inline constexpr const char* kCorpusFile = "corpus.jsonl";

struct CorpusEntry {
    std::string image_id;
    std::filesystem::path image_path;  ///< relative to the corpus root
    FigureAnnotation annotation;       ///< width/height filled from the image
    std::vector<MetaLabel> labels;

    bool operator==(const CorpusEntry&) const = default;
};

struct Corpus {
    std::filesystem::path root;
    std::vector<CorpusEntry> entries;

    std::filesystem::path image_file(const CorpusEntry& e) const { return root / e.image_path; }
    std::vector<FigureAnnotation> annotations() const;
};

/// Throws ParseError (with line number) on malformed records, duplicate ids
/// or boxes outside the image, MissingAsset when an image file is absent.
/// A directory without a corpus file is an empty corpus.
Corpus load_corpus(const std::filesystem::path& dir);
/// Writes the corpus file; images are expected to be in place already.
void save_corpus(const Corpus& corpus);

nlohmann::json annotation_to_json(const FigureAnnotation& a);
/// `line` is used for error reporting only.
FigureAnnotation annotation_from_json(const nlohmann::json& j, int line = 0);

void save_annotations(const std::vector<FigureAnnotation>& annotations, const std::filesystem::path& path);
std::vector<FigureAnnotation> load_annotations(const std::filesystem::path& path);

/// Reads non-empty lines of a JSON Lines file, reporting parse errors with
/// their 1-based line number.
std::vector<std::pair<int, nlohmann::json>> read_jsonl(const std::filesystem::path& path);

}  // namespace cfsep
