// Core data model: documents, the three-point label scale, labeled datasets
// and the error taxonomy shared by all modules.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace graded {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration (missing resource, invalid hyperparameter).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or contradictory input data.
struct DataError : Error {
    using Error::Error;
};

// Training failed (divergence, degenerate training set).
struct TrainingError : Error {
    using Error::Error;
};

// An agreement statistic whose denominator vanishes (e.g. a single category
// used everywhere) has no defined value.
struct UndefinedStatistic : DataError {
    using DataError::DataError;
};

// Graded label scale. The ordering None < Weak < Strong is for reporting
// only; no ordinal semantics are attached during training.
enum class Label : int { None = 0, Weak = 1, Strong = 2 };

inline constexpr std::array<Label, 3> kAllLabels{Label::None, Label::Weak,
                                                 Label::Strong};
inline constexpr std::size_t kNumLabels = kAllLabels.size();

inline const char* to_string(Label l) {
    switch (l) {
        case Label::None: return "none";
        case Label::Weak: return "weak";
        case Label::Strong: return "strong";
    }
    return "?";
}

inline std::optional<Label> label_from_string(std::string_view s) {
    if (s == "none") return Label::None;
    if (s == "weak") return Label::Weak;
    if (s == "strong") return Label::Strong;
    return std::nullopt;
}

inline Label parse_label(std::string_view s) {
    auto l = label_from_string(s);
    if (!l) throw DataError("unknown label '" + std::string(s) +
                            "' (expected none|weak|strong)");
    return *l;
}

struct Document {
    std::string id;
    std::string text;
    std::map<std::string, std::string> meta;
};

// Parallel documents/labels. Immutable by convention once built.
struct LabeledDataset {
    std::vector<Document> documents;
    std::vector<Label> labels;

    LabeledDataset() = default;
    LabeledDataset(std::vector<Document> docs, std::vector<Label> ls)
        : documents(std::move(docs)), labels(std::move(ls)) {
        if (documents.size() != labels.size())
            throw DataError("dataset has " + std::to_string(documents.size()) +
                            " documents but " + std::to_string(labels.size()) +
                            " labels");
    }

    std::size_t size() const { return documents.size(); }
    bool empty() const { return documents.empty(); }

    std::array<std::size_t, kNumLabels> class_counts() const {
        std::array<std::size_t, kNumLabels> counts{};
        for (Label l : labels) counts[static_cast<std::size_t>(l)]++;
        return counts;
    }

    LabeledDataset subset(const std::vector<std::size_t>& indices) const {
        LabeledDataset out;
        out.documents.reserve(indices.size());
        out.labels.reserve(indices.size());
        for (std::size_t i : indices) {
            out.documents.push_back(documents.at(i));
            out.labels.push_back(labels.at(i));
        }
        return out;
    }
};

}  // namespace graded
