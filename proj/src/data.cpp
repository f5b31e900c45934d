#include "cfsep/data.hpp"

#include "cfsep/error.hpp"
#include "cfsep/image_io.hpp"

#include <fstream>
#include <set>

namespace cfsep {

namespace fs = std::filesystem;

std::vector<FigureAnnotation> Corpus::annotations() const {
    std::vector<FigureAnnotation> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        out.push_back(e.annotation);
    }
    return out;
}

std::vector<std::pair<int, nlohmann::json>> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingAsset("cannot open '" + path.string() + "'");
    }
    std::vector<std::pair<int, nlohmann::json>> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.emplace_back(n, nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what(), n);
        }
    }
    return out;
}

nlohmann::json annotation_to_json(const FigureAnnotation& a) {
    nlohmann::json rects = nlohmann::json::array();
    for (const Rect& r : a.rects) {
        rects.push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
    }
    return {{"image_id", a.image_id}, {"is_compound", a.is_compound}, {"rects", rects}};
}

FigureAnnotation annotation_from_json(const nlohmann::json& j, int line) {
    FigureAnnotation a;
    try {
        a.image_id = j.at("image_id").get<std::string>();
        a.is_compound = j.at("is_compound").get<bool>();
        for (const auto& r : j.at("rects")) {
            Rect rect{r.at("x").get<int>(), r.at("y").get<int>(), r.at("w").get<int>(), r.at("h").get<int>()};
            if (rect.w <= 0 || rect.h <= 0 || rect.x < 0 || rect.y < 0) {
                throw ParseError("degenerate rect in record '" + a.image_id + "'", line);
            }
            a.rects.push_back(rect);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed annotation record: ") + e.what(), line);
    }
    if (a.image_id.empty()) {
        throw ParseError("empty image_id", line);
    }
    return a;
}

Corpus load_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw MissingAsset("corpus directory '" + dir.string() + "' does not exist");
    }
    Corpus corpus;
    corpus.root = dir;
    const fs::path file = dir / kCorpusFile;
    if (!fs::exists(file)) {
        return corpus;
    }
    std::set<std::string> ids;
    for (const auto& [line, j] : read_jsonl(file)) {
        CorpusEntry e;
        e.annotation = annotation_from_json(j, line);
        e.image_id = e.annotation.image_id;
        if (!ids.insert(e.image_id).second) {
            throw ParseError("duplicate image_id '" + e.image_id + "'", line);
        }
        try {
            e.image_path = j.at("image_path").get<std::string>();
            if (j.contains("labels")) {
                for (const auto& l : j.at("labels")) {
                    e.labels.push_back(parse_meta_label(l.get<std::string>()));
                }
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("malformed corpus record: ") + ex.what(), line);
        } catch (const DomainError& ex) {
            throw ParseError(ex.what(), line);
        }
        const fs::path img = corpus.image_file(e);
        if (!fs::exists(img)) {
            throw MissingAsset("image '" + img.string() + "' not found");
        }
        const auto [w, h] = probe_image_size(img);
        e.annotation.width = w;
        e.annotation.height = h;
        const Rect bounds{0, 0, w, h};
        for (const Rect& r : e.annotation.rects) {
            if (!contains(bounds, r)) {
                throw ParseError("rect outside image bounds in record '" + e.image_id + "'", line);
            }
        }
        corpus.entries.push_back(std::move(e));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus) {
    fs::create_directories(corpus.root);
    std::ofstream out(corpus.root / kCorpusFile);
    if (!out) {
        throw Error("cannot write corpus file in '" + corpus.root.string() + "'");
    }
    for (const auto& e : corpus.entries) {
        nlohmann::json j = annotation_to_json(e.annotation);
        j["image_path"] = e.image_path.generic_string();
        if (!e.labels.empty()) {
            nlohmann::json labels = nlohmann::json::array();
            for (MetaLabel l : e.labels) {
                labels.push_back(to_string(l));
            }
            j["labels"] = labels;
        }
        out << j.dump() << '\n';
    }
}

void save_annotations(const std::vector<FigureAnnotation>& annotations, const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    for (const auto& a : annotations) {
        out << annotation_to_json(a).dump() << '\n';
    }
}

std::vector<FigureAnnotation> load_annotations(const fs::path& path) {
    std::vector<FigureAnnotation> out;
    for (const auto& [line, j] : read_jsonl(path)) {
        out.push_back(annotation_from_json(j, line));
    }
    return out;
}

}  // namespace cfsep
