// Multi-annotator label matrices, chance-corrected agreement statistics and
// majority-vote adjudication. Matrices are complete by construction: every
// item is labeled by every annotator.
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graded/core.hpp"
#include "graded/csv.hpp"

namespace graded {

class AnnotationMatrix {
public:
    AnnotationMatrix(std::vector<std::string> item_ids,
                     std::vector<std::string> annotator_ids,
                     std::vector<Label> cells)
        : item_ids_(std::move(item_ids)),
          annotator_ids_(std::move(annotator_ids)),
          cells_(std::move(cells)) {
        if (annotator_ids_.size() < 2)
            throw DataError("annotation matrix needs at least 2 annotators");
        if (cells_.size() != item_ids_.size() * annotator_ids_.size())
            throw DataError("annotation matrix is incomplete: expected " +
                            std::to_string(item_ids_.size() * annotator_ids_.size()) +
                            " cells, got " + std::to_string(cells_.size()));
    }

    std::size_t items() const { return item_ids_.size(); }
    std::size_t annotators() const { return annotator_ids_.size(); }
    const std::vector<std::string>& item_ids() const { return item_ids_; }
    const std::vector<std::string>& annotator_ids() const { return annotator_ids_; }

    Label at(std::size_t item, std::size_t annotator) const {
        return cells_.at(item * annotator_ids_.size() + annotator);
    }

    // Category count tallies per item, over the fixed label set.
    std::vector<std::array<std::size_t, kNumLabels>> tallies() const {
        std::vector<std::array<std::size_t, kNumLabels>> t(items());
        for (std::size_t i = 0; i < items(); ++i) {
            t[i].fill(0);
            for (std::size_t a = 0; a < annotators(); ++a)
                t[i][static_cast<std::size_t>(at(i, a))]++;
        }
        return t;
    }

    // Loads the long-format CSV `item_id,annotator_id,label` and pivots it.
    // Incomplete grids (an item missing some annotator's label) and
    // duplicate cells are rejected.
    static AnnotationMatrix from_csv(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open annotation file: " + path);
        std::size_t line_no = 1;
        auto header = csv::read_record(in, line_no);
        if (!header || header->size() < 3 || (*header)[0] != "item_id" ||
            (*header)[1] != "annotator_id" || (*header)[2] != "label")
            throw DataError("annotation CSV header must be item_id,annotator_id,label");

        std::vector<std::string> items, annotators;
        std::map<std::string, std::size_t> item_idx, annot_idx;
        std::map<std::pair<std::size_t, std::size_t>, Label> cells;
        while (auto rec = csv::read_record(in, line_no)) {
            if (rec->size() == 1 && (*rec)[0].empty()) continue;
            if (rec->size() < 3)
                throw DataError("line " + std::to_string(line_no - 1) +
                                ": expected item_id,annotator_id,label");
            auto [it_i, ins_i] = item_idx.try_emplace((*rec)[0], items.size());
            if (ins_i) items.push_back((*rec)[0]);
            auto [it_a, ins_a] = annot_idx.try_emplace((*rec)[1], annotators.size());
            if (ins_a) annotators.push_back((*rec)[1]);
            Label l = parse_label((*rec)[2]);
            if (!cells.emplace(std::make_pair(it_i->second, it_a->second), l).second)
                throw DataError("line " + std::to_string(line_no - 1) +
                                ": duplicate cell for item '" + (*rec)[0] +
                                "', annotator '" + (*rec)[1] + "'");
        }
        if (cells.size() != items.size() * annotators.size()) {
            for (std::size_t i = 0; i < items.size(); ++i)
                for (std::size_t a = 0; a < annotators.size(); ++a)
                    if (!cells.count({i, a}))
                        throw DataError("incomplete annotation grid: item '" + items[i] +
                                        "' has no label from annotator '" +
                                        annotators[a] + "'");
        }
        std::vector<Label> flat(items.size() * annotators.size());
        for (auto& [key, l] : cells)
            flat[key.first * annotators.size() + key.second] = l;
        return AnnotationMatrix(std::move(items), std::move(annotators),
                                std::move(flat));
    }

private:
    std::vector<std::string> item_ids_;
    std::vector<std::string> annotator_ids_;
    std::vector<Label> cells_;  // items x annotators, row major
};

enum class AgreementMode {
    Pairwise,   // mean over items of the fraction of agreeing annotator pairs
    Unanimous,  // fraction of items on which all annotators agree
};

inline double percent_agreement(const AnnotationMatrix& m,
                                AgreementMode mode = AgreementMode::Pairwise) {
    if (m.items() == 0) throw DataError("empty annotation matrix");
    const double n = static_cast<double>(m.annotators());
    double total = 0.0;
    for (const auto& tally : m.tallies()) {
        if (mode == AgreementMode::Unanimous) {
            for (auto c : tally)
                if (c == m.annotators()) {
                    total += 1.0;
                    break;
                }
        } else {
            double agreeing = 0.0;
            for (auto c : tally) agreeing += static_cast<double>(c) * (c - 1) / 2.0;
            total += agreeing / (n * (n - 1) / 2.0);
        }
    }
    return total / static_cast<double>(m.items());
}

namespace detail {

// Fleiss' kappa over explicit per-item category tallies (n annotators per
// item). Shared by the full and the binarized (per-category) variants.
inline double fleiss_kappa_from_tallies(
    const std::vector<std::vector<std::size_t>>& tallies, std::size_t n_annotators) {
    const std::size_t n_items = tallies.size();
    if (n_items < 2) throw DataError("Fleiss' kappa needs at least 2 items");
    const std::size_t n_cats = tallies.front().size();
    const double n = static_cast<double>(n_annotators);

    double p_bar = 0.0;
    std::vector<double> p_cat(n_cats, 0.0);
    for (const auto& t : tallies) {
        double sum_sq = 0.0;
        for (std::size_t c = 0; c < n_cats; ++c) {
            sum_sq += static_cast<double>(t[c]) * static_cast<double>(t[c]);
            p_cat[c] += static_cast<double>(t[c]);
        }
        p_bar += (sum_sq - n) / (n * (n - 1));
    }
    p_bar /= static_cast<double>(n_items);

    double pe = 0.0;
    for (double& p : p_cat) {
        p /= static_cast<double>(n_items) * n;
        pe += p * p;
    }
    if (pe >= 1.0 - 1e-15)
        throw UndefinedStatistic(
            "Fleiss' kappa is undefined: a single category is used everywhere "
            "(expected agreement = 1)");
    return (p_bar - pe) / (1.0 - pe);
}

}  // namespace detail

inline double fleiss_kappa(const AnnotationMatrix& m) {
    std::vector<std::vector<std::size_t>> tallies;
    for (const auto& t : m.tallies())
        tallies.emplace_back(t.begin(), t.end());
    return detail::fleiss_kappa_from_tallies(tallies, m.annotators());
}

// Kappa of the matrix binarized as `category` vs not-`category`.
inline double fleiss_kappa_by_category(const AnnotationMatrix& m, Label category) {
    std::vector<std::vector<std::size_t>> tallies;
    for (const auto& t : m.tallies()) {
        std::size_t in_cat = t[static_cast<std::size_t>(category)];
        tallies.push_back({in_cat, m.annotators() - in_cat});
    }
    try {
        return detail::fleiss_kappa_from_tallies(tallies, m.annotators());
    } catch (const UndefinedStatistic&) {
        throw UndefinedStatistic(std::string("Fleiss' kappa for category '") +
                                 to_string(category) +
                                 "' is undefined: the binarized matrix uses a "
                                 "single category everywhere");
    }
}

// Krippendorff's alpha, nominal metric, via the coincidence-matrix
// formulation: alpha = 1 - Do/De. Complete matrices only.
inline double krippendorff_alpha(const AnnotationMatrix& m) {
    if (m.items() < 2) throw DataError("Krippendorff's alpha needs at least 2 items");
    const std::size_t k = kNumLabels;
    const double unit_size = static_cast<double>(m.annotators());

    // Coincidence counts: each ordered pair of values within a unit
    // contributes 1/(m_u - 1).
    std::array<std::array<double, kNumLabels>, kNumLabels> coincidence{};
    for (const auto& t : m.tallies()) {
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t d = 0; d < k; ++d) {
                double pairs = (c == d)
                                   ? static_cast<double>(t[c]) * (t[c] - 1)
                                   : static_cast<double>(t[c]) * static_cast<double>(t[d]);
                coincidence[c][d] += pairs / (unit_size - 1.0);
            }
        }
    }
    std::array<double, kNumLabels> totals{};
    double n = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < k; ++d) totals[c] += coincidence[c][d];
        n += totals[c];
    }
    double observed_disagreement = 0.0;
    double expected_pairs = 0.0;
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < k; ++d)
            if (c != d) {
                observed_disagreement += coincidence[c][d];
                expected_pairs += totals[c] * totals[d];
            }
    if (expected_pairs <= 0.0)
        throw UndefinedStatistic(
            "Krippendorff's alpha is undefined: no label variation (expected "
            "disagreement = 0)");
    return 1.0 - (n - 1.0) * observed_disagreement / expected_pairs;
}

struct AdjudicatedItem {
    std::string item_id;
    std::optional<Label> label;  // nullopt when no strict majority exists
};

// Per item, the label chosen by a strict majority of annotators; items with
// no strict majority stay unresolved (a value, not an error).
inline std::vector<AdjudicatedItem> majority_vote(const AnnotationMatrix& m) {
    std::vector<AdjudicatedItem> out;
    out.reserve(m.items());
    auto tallies = m.tallies();
    for (std::size_t i = 0; i < m.items(); ++i) {
        AdjudicatedItem item{m.item_ids()[i], std::nullopt};
        for (std::size_t c = 0; c < kNumLabels; ++c) {
            if (2 * tallies[i][c] > m.annotators()) {
                item.label = static_cast<Label>(c);
                break;
            }
        }
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace graded
