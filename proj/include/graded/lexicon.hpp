// Phrase lexicons (1-3 token entries) with greedy longest-match counting
// over token sequences. Files are UTF-8, one lowercase phrase per line,
// "#" starts a comment.
#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "graded/core.hpp"
#include "graded/tokenizer.hpp"

namespace graded {

class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    int max_len() const { return max_len_; }

    // Normalizes through the tokenizer so lexicon matching and text
    // tokenization can never drift apart.
    void add(std::string_view phrase) {
        TokenSequence toks = tokenize(phrase);
        if (toks.empty()) return;
        if (toks.size() > 3)
            throw DataError("lexicon '" + name_ + "': entry '" + std::string(phrase) +
                            "' has more than 3 tokens");
        std::string key;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (i) key += ' ';
            key += toks[i];
        }
        entries_.insert(std::move(key));
        max_len_ = std::max<int>(max_len_, static_cast<int>(toks.size()));
    }

    bool contains_ngram(const std::string& joined) const {
        return entries_.count(joined) > 0;
    }

    // Non-overlapping occurrence count, longest match first.
    std::size_t count_matches(const TokenSequence& doc) const {
        if (entries_.empty()) return 0;
        std::size_t count = 0;
        std::size_t i = 0;
        while (i < doc.size()) {
            std::size_t matched = 0;
            for (int len = std::min<int>(max_len_, static_cast<int>(doc.size() - i));
                 len >= 1; --len) {
                std::string joined = doc[i];
                for (int k = 1; k < len; ++k) {
                    joined += ' ';
                    joined += doc[i + k];
                }
                if (contains_ngram(joined)) {
                    matched = static_cast<std::size_t>(len);
                    break;
                }
            }
            if (matched) {
                count++;
                i += matched;
            } else {
                i++;
            }
        }
        return count;
    }

    static Lexicon from_file(const std::string& path, std::string name) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open lexicon file: " + path);
        Lexicon lex(std::move(name));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            // trim
            auto b = line.find_first_not_of(" \t");
            auto e = line.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            lex.add(line.substr(b, e - b + 1));
        }
        if (lex.empty())
            throw ConfigError("lexicon file has no entries: " + path);
        return lex;
    }

    static Lexicon from_phrases(std::string name,
                                const std::vector<std::string>& phrases) {
        Lexicon lex(std::move(name));
        for (const auto& p : phrases) lex.add(p);
        return lex;
    }

private:
    std::string name_;
    std::set<std::string> entries_;
    int max_len_ = 0;
};

}  // namespace graded
