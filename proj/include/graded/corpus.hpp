// Corpus ingestion (JSONL / CSV), class balancing and deterministic fold
// splitting.
//
// JSONL: one object per line, required keys "id" and "text", optional
// "label" in {none,weak,strong} and optional string-valued "meta" object.
// CSV: header row `id,text[,label]`, RFC 4180 quoting.
#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "graded/core.hpp"
#include "graded/csv.hpp"
#include "graded/rng.hpp"

namespace graded {

enum class CorpusFormat { Jsonl, Csv };

inline CorpusFormat format_from_path(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return CorpusFormat::Csv;
    return CorpusFormat::Jsonl;
}

namespace detail {

struct RawRecord {
    Document doc;
    std::optional<Label> label;
};

inline RawRecord parse_jsonl_record(const std::string& line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("line " + std::to_string(line_no) +
                        ": malformed JSON record: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text") ||
        !j["id"].is_string() || !j["text"].is_string())
        throw DataError("line " + std::to_string(line_no) +
                        ": record must be an object with string \"id\" and \"text\"");
    RawRecord r;
    r.doc.id = j["id"].get<std::string>();
    r.doc.text = j["text"].get<std::string>();
    if (r.doc.text.empty())
        throw DataError("line " + std::to_string(line_no) + ": empty text for id '" +
                        r.doc.id + "'");
    if (j.contains("meta")) {
        if (!j["meta"].is_object())
            throw DataError("line " + std::to_string(line_no) +
                            ": \"meta\" must be an object");
        for (auto& [k, v] : j["meta"].items()) {
            if (!v.is_string())
                throw DataError("line " + std::to_string(line_no) +
                                ": meta values must be strings");
            r.doc.meta[k] = v.get<std::string>();
        }
    }
    if (j.contains("label")) {
        if (!j["label"].is_string())
            throw DataError("line " + std::to_string(line_no) +
                            ": \"label\" must be a string");
        auto l = label_from_string(j["label"].get<std::string>());
        if (!l)
            throw DataError("line " + std::to_string(line_no) + ": unknown label '" +
                            j["label"].get<std::string>() + "'");
        r.label = *l;
    }
    return r;
}

inline std::vector<RawRecord> load_raw(const std::string& path, CorpusFormat fmt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path);
    std::vector<RawRecord> records;
    std::unordered_set<std::string> seen_ids;

    auto check_id = [&](const std::string& id, std::size_t line_no) {
        if (!seen_ids.insert(id).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate id '" +
                            id + "'");
    };

    if (fmt == CorpusFormat::Jsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            line_no++;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            RawRecord r = parse_jsonl_record(line, line_no);
            check_id(r.doc.id, line_no);
            records.push_back(std::move(r));
        }
    } else {
        std::size_t line_no = 1;
        auto header = csv::read_record(in, line_no);
        if (!header) return records;
        auto& h = *header;
        if (h.size() < 2 || h[0] != "id" || h[1] != "text")
            throw DataError("line 1: CSV header must be id,text[,label]");
        bool has_label = h.size() >= 3 && h[2] == "label";
        while (auto rec = csv::read_record(in, line_no)) {
            if (rec->size() == 1 && (*rec)[0].empty()) continue;  // blank line
            if (rec->size() < 2)
                throw DataError("line " + std::to_string(line_no - 1) +
                                ": expected at least id,text");
            RawRecord r;
            r.doc.id = (*rec)[0];
            r.doc.text = (*rec)[1];
            if (r.doc.text.empty())
                throw DataError("line " + std::to_string(line_no - 1) +
                                ": empty text for id '" + r.doc.id + "'");
            if (has_label && rec->size() >= 3 && !(*rec)[2].empty())
                r.label = parse_label((*rec)[2]);
            check_id(r.doc.id, line_no - 1);
            records.push_back(std::move(r));
        }
    }
    return records;
}

}  // namespace detail

// Loads documents, ignoring any label column. One Document per record,
// order preserved.
inline std::vector<Document> load_documents(const std::string& path,
                                            CorpusFormat fmt) {
    std::vector<Document> docs;
    for (auto& r : detail::load_raw(path, fmt)) docs.push_back(std::move(r.doc));
    return docs;
}

inline std::vector<Document> load_documents(const std::string& path) {
    return load_documents(path, format_from_path(path));
}

// Loads a labeled dataset; every record must carry a label.
inline LabeledDataset load_labeled(const std::string& path, CorpusFormat fmt) {
    LabeledDataset ds;
    std::size_t n = 0;
    for (auto& r : detail::load_raw(path, fmt)) {
        n++;
        if (!r.label)
            throw DataError("record " + std::to_string(n) + " (id '" + r.doc.id +
                            "') has no label");
        ds.documents.push_back(std::move(r.doc));
        ds.labels.push_back(*r.label);
    }
    return ds;
}

inline LabeledDataset load_labeled(const std::string& path) {
    return load_labeled(path, format_from_path(path));
}

inline void save_labeled_jsonl(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write: " + path);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        nlohmann::ordered_json j;
        j["id"] = ds.documents[i].id;
        j["text"] = ds.documents[i].text;
        j["label"] = to_string(ds.labels[i]);
        if (!ds.documents[i].meta.empty()) j["meta"] = ds.documents[i].meta;
        out << j.dump() << '\n';
    }
}

// Downsamples the most frequent class to floor(mean of the other class
// counts), without replacement, seeded. Other classes are untouched; if the
// majority already sits at or below the target the dataset is returned
// unchanged. With the reported class counts (3106, 484, 410) this yields
// (447, 484, 410).
inline LabeledDataset downsample_balance(const LabeledDataset& ds,
                                         std::uint64_t seed) {
    auto counts = ds.class_counts();
    std::size_t present = 0;
    for (auto c : counts)
        if (c > 0) present++;
    if (present < 2)
        throw DataError("downsample_balance requires at least 2 classes present");

    std::size_t majority = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[majority]) majority = c;

    std::size_t others_total = 0, others_n = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (c == majority || counts[c] == 0) continue;
        others_total += counts[c];
        others_n++;
    }
    std::size_t target = others_total / others_n;
    if (counts[majority] <= target) return ds;

    // Choose which majority-class items survive.
    std::vector<std::size_t> majority_positions;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (static_cast<std::size_t>(ds.labels[i]) == majority)
            majority_positions.push_back(i);

    Rng rng(seed);
    auto keep_order = rng.sample_without_replacement(majority_positions.size(), target);
    std::vector<bool> keep(ds.size(), true);
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (static_cast<std::size_t>(ds.labels[i]) == majority) keep[i] = false;
    for (std::size_t k : keep_order) keep[majority_positions[k]] = true;

    LabeledDataset out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!keep[i]) continue;
        out.documents.push_back(ds.documents[i]);
        out.labels.push_back(ds.labels[i]);
    }
    return out;
}

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Deterministic stratified k-fold split. Per-class proportions in each test
// fold are within one item of the global proportion. Set `stratified` to
// false for a plain shuffled split.
inline std::vector<FoldSplit> stratified_kfold(const LabeledDataset& ds, int k,
                                               std::uint64_t seed,
                                               bool stratified = true) {
    if (k < 2) throw ConfigError("k must be at least 2");
    const std::size_t n = ds.size();
    std::vector<std::vector<std::size_t>> test_folds(k);

    if (stratified) {
        auto counts = ds.class_counts();
        for (Label l : kAllLabels) {
            auto c = static_cast<std::size_t>(l);
            if (counts[c] > 0 && counts[c] < static_cast<std::size_t>(k))
                throw DataError(std::string("class '") + to_string(l) + "' has " +
                                std::to_string(counts[c]) + " members, fewer than k=" +
                                std::to_string(k));
        }
        // Deal each class round-robin from a rotating start so the remainder
        // items land on different folds for different classes.
        std::size_t start = 0;
        for (Label l : kAllLabels) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (ds.labels[i] == l) members.push_back(i);
            if (members.empty()) continue;
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(l)));
            rng.shuffle(members);
            for (std::size_t j = 0; j < members.size(); ++j)
                test_folds[(start + j) % k].push_back(members[j]);
            start = (start + members.size()) % k;
        }
    } else {
        if (n < static_cast<std::size_t>(k))
            throw DataError("dataset smaller than k");
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(seed);
        rng.shuffle(order);
        for (std::size_t j = 0; j < n; ++j) test_folds[j % k].push_back(order[j]);
    }

    std::vector<FoldSplit> folds(k);
    for (int f = 0; f < k; ++f) {
        std::sort(test_folds[f].begin(), test_folds[f].end());
        std::vector<bool> in_test(n, false);
        for (std::size_t i : test_folds[f]) in_test[i] = true;
        folds[f].test = test_folds[f];
        for (std::size_t i = 0; i < n; ++i)
            if (!in_test[i]) folds[f].train.push_back(i);
    }
    return folds;
}

}  // namespace graded
