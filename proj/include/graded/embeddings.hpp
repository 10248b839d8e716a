// Embedding tables in the standard text format (token then d reals per
// line) and document vectors by token averaging.
#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graded/core.hpp"
#include "graded/tokenizer.hpp"

namespace graded {

class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(int dim) : dim_(dim) {
        if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
    }

    int dim() const { return dim_; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    void add(std::string token, std::vector<double> vec) {
        if (dim_ == 0) dim_ = static_cast<int>(vec.size());
        if (static_cast<int>(vec.size()) != dim_)
            throw DataError("embedding for '" + token + "' has dimension " +
                            std::to_string(vec.size()) + ", expected " +
                            std::to_string(dim_));
        for (double v : vec)
            if (!std::isfinite(v))
                throw DataError("non-finite embedding value for '" + token + "'");
        auto [it, inserted] = index_.try_emplace(token, tokens_.size());
        if (!inserted)
            throw DataError("duplicate embedding token '" + token + "'");
        tokens_.push_back(std::move(token));
        data_.insert(data_.end(), vec.begin(), vec.end());
    }

    const double* find(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return nullptr;
        return data_.data() + it->second * static_cast<std::size_t>(dim_);
    }

    const double* vector_at(std::size_t i) const {
        return data_.data() + i * static_cast<std::size_t>(dim_);
    }

private:
    int dim_ = 0;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;  // size() * dim_, row major
};

inline EmbeddingTable load_embedding_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open embedding file: " + path);
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        std::vector<double> vec;
        std::string field;
        while (ss >> field) {
            try {
                std::size_t pos = 0;
                double v = std::stod(field, &pos);
                if (pos != field.size()) throw std::invalid_argument(field);
                vec.push_back(v);
            } catch (const std::exception&) {
                throw DataError("line " + std::to_string(line_no) +
                                ": non-numeric embedding value '" + field + "'");
            }
        }
        if (vec.empty())
            throw DataError("line " + std::to_string(line_no) +
                            ": no vector values for token '" + token + "'");
        if (table.dim() != 0 && static_cast<int>(vec.size()) != table.dim())
            throw DataError("line " + std::to_string(line_no) + ": dimension " +
                            std::to_string(vec.size()) + " does not match " +
                            std::to_string(table.dim()) + " from the first line");
        table.add(std::move(token), std::move(vec));
    }
    if (table.empty()) throw DataError("embedding file is empty: " + path);
    return table;
}

inline void save_embedding_text(const EmbeddingTable& table, const std::string& path,
                                int precision = 6) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embedding file: " + path);
    out << std::fixed << std::setprecision(precision);
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.tokens()[i];
        const double* v = table.vector_at(i);
        for (int d = 0; d < table.dim(); ++d) out << ' ' << v[d];
        out << '\n';
    }
}

enum class DocVectorMode {
    MeanOverTokens,  // every in-vocabulary occurrence contributes
    MeanOverTypes,   // each distinct in-vocabulary token contributes once
};

// Mean of in-vocabulary token vectors; the zero vector when no token is
// covered, so downstream classifiers always receive a valid input.
inline std::vector<double> embed_document(const TokenSequence& doc,
                                          const EmbeddingTable& table,
                                          DocVectorMode mode = DocVectorMode::MeanOverTokens) {
    std::vector<double> acc(static_cast<std::size_t>(table.dim()), 0.0);
    std::size_t hits = 0;
    auto accumulate = [&](const std::string& tok) {
        const double* v = table.find(tok);
        if (!v) return;
        for (int d = 0; d < table.dim(); ++d) acc[static_cast<std::size_t>(d)] += v[d];
        hits++;
    };
    if (mode == DocVectorMode::MeanOverTokens) {
        for (const auto& tok : doc) accumulate(tok);
    } else {
        std::vector<std::string> seen;
        for (const auto& tok : doc) {
            bool dup = false;
            for (const auto& s : seen)
                if (s == tok) {
                    dup = true;
                    break;
                }
            if (!dup) {
                seen.push_back(tok);
                accumulate(tok);
            }
        }
    }
    if (hits > 0)
        for (double& v : acc) v /= static_cast<double>(hits);
    return acc;
}

}  // namespace graded
