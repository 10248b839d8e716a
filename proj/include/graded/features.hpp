// Feature schemas and vectors, bag-of-words vocabulary/encoding, and the
// surface/derived non-text feature extractor. The default non-text schema
// has exactly 50 features; it is data, not code, and any subset can be
// selected by name.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graded/core.hpp"
#include "graded/lexicon.hpp"
#include "graded/taggers.hpp"
#include "graded/tokenizer.hpp"

namespace graded {

enum class FeatureKind { Binary, Count, Real };

inline const char* to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::Binary: return "binary";
        case FeatureKind::Count: return "count";
        case FeatureKind::Real: return "real";
    }
    return "?";
}

inline FeatureKind feature_kind_from_string(std::string_view s) {
    if (s == "binary") return FeatureKind::Binary;
    if (s == "count") return FeatureKind::Count;
    if (s == "real") return FeatureKind::Real;
    throw DataError("unknown feature kind '" + std::string(s) + "'");
}

// Ordered, named feature layout. The order is fixed for the lifetime of a
// trained model.
class FeatureSchema {
public:
    FeatureSchema() = default;

    void add(std::string name, FeatureKind kind) {
        if (index_.count(name))
            throw ConfigError("duplicate feature name '" + name + "'");
        index_[name] = names_.size();
        names_.push_back(std::move(name));
        kinds_.push_back(kind);
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    FeatureKind kind(std::size_t i) const { return kinds_.at(i); }

    std::optional<std::size_t> index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void append(const FeatureSchema& other) {
        for (std::size_t i = 0; i < other.size(); ++i)
            add(other.names()[i], other.kind(i));
    }

    bool operator==(const FeatureSchema& o) const {
        return names_ == o.names_ && kinds_ == o.kinds_;
    }

private:
    std::vector<std::string> names_;
    std::vector<FeatureKind> kinds_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct FeatureVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Schema conformance: length, finiteness and per-kind constraints.
inline void validate(const FeatureSchema& schema, const FeatureVector& v) {
    if (v.size() != schema.size())
        throw DataError("feature vector length " + std::to_string(v.size()) +
                        " does not match schema length " +
                        std::to_string(schema.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        double x = v.values[i];
        if (!std::isfinite(x))
            throw DataError("non-finite value for feature '" + schema.names()[i] + "'");
        switch (schema.kind(i)) {
            case FeatureKind::Binary:
                if (x != 0.0 && x != 1.0)
                    throw DataError("binary feature '" + schema.names()[i] +
                                    "' has value " + std::to_string(x));
                break;
            case FeatureKind::Count:
                if (x < 0.0 || std::floor(x) != x)
                    throw DataError("count feature '" + schema.names()[i] +
                                    "' has value " + std::to_string(x));
                break;
            case FeatureKind::Real:
                break;
        }
    }
}

// ---------------------------------------------------------------------------
// Bag of words

class Vocabulary {
public:
    Vocabulary() = default;

    // Deterministic order: descending count, ties lexicographic. Terms
    // below min_count are dropped.
    static Vocabulary build(const std::vector<TokenSequence>& docs,
                            std::size_t min_count) {
        std::unordered_map<std::string, std::size_t> counts;
        for (const auto& doc : docs)
            for (const auto& tok : doc) counts[tok]++;
        std::vector<std::pair<std::string, std::size_t>> sorted;
        for (auto& [tok, c] : counts)
            if (c >= min_count) sorted.emplace_back(tok, c);
        if (sorted.empty())
            throw DataError("vocabulary is empty after min_count=" +
                            std::to_string(min_count) + " filtering");
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        Vocabulary v;
        for (auto& [tok, c] : sorted) {
            v.index_[tok] = v.terms_.size();
            v.terms_.push_back(tok);
        }
        return v;
    }

    static Vocabulary from_terms(const std::vector<std::string>& terms) {
        Vocabulary v;
        for (const auto& t : terms) {
            if (v.index_.count(t)) throw DataError("duplicate vocabulary term '" + t + "'");
            v.index_[t] = v.terms_.size();
            v.terms_.push_back(t);
        }
        return v;
    }

    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<std::string>& terms() const { return terms_; }

    std::optional<std::size_t> index_of(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline Vocabulary build_vocabulary(const LabeledDataset& ds, std::size_t min_count) {
    if (ds.empty()) throw DataError("cannot build a vocabulary from an empty dataset");
    std::vector<TokenSequence> docs;
    docs.reserve(ds.size());
    for (const auto& d : ds.documents) docs.push_back(tokenize(d.text));
    return Vocabulary::build(docs, min_count);
}

// Binary presence by default; per-term occurrence counts when `counts` is
// set. Out-of-vocabulary tokens are ignored.
inline FeatureVector encode_onehot(const TokenSequence& doc, const Vocabulary& vocab,
                                   bool counts = false) {
    FeatureVector v;
    v.values.assign(vocab.size(), 0.0);
    for (const auto& tok : doc) {
        if (auto idx = vocab.index_of(tok)) {
            if (counts)
                v.values[*idx] += 1.0;
            else
                v.values[*idx] = 1.0;
        }
    }
    return v;
}

inline FeatureSchema bow_schema(const Vocabulary& vocab, bool counts = false) {
    FeatureSchema s;
    for (const auto& term : vocab.terms())
        s.add("bow_" + term, counts ? FeatureKind::Count : FeatureKind::Binary);
    return s;
}

// ---------------------------------------------------------------------------
// Surface / derived non-text features

struct Lexicons {
    Lexicon swear;
    Lexicon mosques;
    Lexicon muslim_names;
    Lexicon positive;
    Lexicon negative;
};

// The fixed 50-feature non-text schema, in declaration order.
inline FeatureSchema default_surface_schema() {
    FeatureSchema s;
    auto B = FeatureKind::Binary, C = FeatureKind::Count, R = FeatureKind::Real;
    s.add("presence_html", B);
    s.add("presence_rt", B);
    s.add("count_swear", C);
    s.add("count_mosque_mentions", C);
    s.add("count_muslim_names", C);
    s.add("count_positive_words", C);
    s.add("count_negative_words", C);
    s.add("sentiment_score", R);
    s.add("polarity", R);
    s.add("pos_conjunction_count", C);
    s.add("pos_determiner_count", C);
    s.add("pos_pronoun_count", C);
    s.add("pos_preposition_count", C);
    s.add("pos_noun_count", C);
    s.add("pos_verb_count", C);
    s.add("pos_adjective_count", C);
    s.add("pos_adverb_count", C);
    s.add("ner_location_count", C);
    s.add("ner_organization_count", C);
    s.add("ner_person_count", C);
    s.add("token_count", C);
    s.add("count_unique_tokens", C);
    s.add("count_urls", C);
    s.add("count_mentions", C);
    s.add("count_hashtags", C);
    s.add("count_emoji", C);
    s.add("count_allcaps_tokens", C);
    s.add("count_elongated_tokens", C);
    s.add("count_negations", C);
    s.add("count_numeric_tokens", C);
    s.add("char_length", C);
    s.add("count_uppercase_chars", C);
    s.add("count_digit_chars", C);
    s.add("count_punctuation_chars", C);
    s.add("count_exclamations", C);
    s.add("count_questions", C);
    s.add("count_commas", C);
    s.add("count_quotes", C);
    s.add("count_ellipses", C);
    s.add("uppercase_ratio", R);
    s.add("digit_ratio", R);
    s.add("punctuation_ratio", R);
    s.add("avg_token_length", R);
    s.add("max_token_length", C);
    s.add("type_token_ratio", R);
    s.add("count_sentences", C);
    s.add("avg_sentence_length", R);
    s.add("count_long_words", C);
    s.add("avg_syllables_per_token", R);
    s.add("flesch_reading_ease", R);
    return s;
}

// The six extra features of the final tuned input model.
inline const std::vector<std::string>& tuned_extra_features() {
    static const std::vector<std::string> names = {
        "count_mosque_mentions", "presence_html",
        "presence_rt",           "pos_conjunction_count",
        "ner_location_count",    "ner_organization_count"};
    return names;
}

namespace detail {

inline bool is_negation_token(const std::string& t) {
    static const std::unordered_set<std::string> negations = {
        "no",    "not",    "never",  "none",    "nothing", "nobody",
        "nowhere", "neither", "nor",  "cannot",  "cant",    "dont",
        "wont",  "isnt",   "arent",  "wasnt",   "werent",  "didnt",
        "doesnt", "couldnt", "shouldnt", "wouldnt", "aint"};
    if (negations.count(t)) return true;
    return t.size() > 3 && t.substr(t.size() - 3) == "n't";
}

inline bool is_elongated(const std::string& t) {
    std::size_t run = 1;
    for (std::size_t i = 1; i < t.size(); ++i) {
        run = (t[i] == t[i - 1]) ? run + 1 : 1;
        if (run >= 3 && ((t[i] >= 'a' && t[i] <= 'z') || (t[i] >= 'A' && t[i] <= 'Z')))
            return true;
    }
    return false;
}

inline bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

// Vowel-group heuristic with a silent-e adjustment; at least 1 per word.
inline std::size_t syllables(const std::string& word) {
    std::size_t groups = 0;
    bool in_group = false;
    for (char c : word) {
        if (is_vowel(c)) {
            if (!in_group) groups++;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    if (groups > 1 && word.size() >= 2 && word.back() == 'e' &&
        !is_vowel(word[word.size() - 2]))
        groups--;
    return std::max<std::size_t>(groups, 1);
}

inline bool is_word_token(const std::string& t) {
    if (is_url_token(t) || is_mention_token(t) || is_hashtag_token(t) ||
        is_emoji_token(t))
        return false;
    for (char c : t)
        if ((c >= 'a' && c <= 'z')) return true;
    return false;
}

}  // namespace detail

// Computes the full default non-text schema for one document. Lexicon
// matching runs on the tokenized (lowercased) text, so counts are case
// insensitive; character statistics use the raw text.
class SurfaceFeatureExtractor {
public:
    SurfaceFeatureExtractor(Lexicons lexicons,
                            std::shared_ptr<const PosTagger> pos,
                            std::shared_ptr<const NerTagger> ner)
        : lexicons_(std::move(lexicons)),
          pos_(std::move(pos)),
          ner_(std::move(ner)),
          schema_(default_surface_schema()) {
        const Lexicon* all[] = {&lexicons_.swear, &lexicons_.mosques,
                                &lexicons_.muslim_names, &lexicons_.positive,
                                &lexicons_.negative};
        const char* names[] = {"swear", "mosques", "muslim_names", "positive",
                               "negative"};
        for (std::size_t i = 0; i < 5; ++i)
            if (all[i]->empty())
                throw ConfigError(std::string("missing lexicon: ") + names[i]);
        if (!pos_ || !ner_) throw ConfigError("POS and NER taggers are required");
    }

    const FeatureSchema& schema() const { return schema_; }

    FeatureVector extract(const Document& doc) const {
        const std::string& raw = doc.text;
        TokenSequence toks = tokenize(raw);

        // Character statistics over the raw text.
        std::size_t chars = 0, upper = 0, lower = 0, digits = 0, punct = 0;
        std::size_t excl = 0, quest = 0, commas = 0, quotes = 0, ellipses = 0;
        std::size_t dot_run = 0;
        {
            std::size_t i = 0;
            while (i < raw.size()) {
                char32_t cp = utf8::decode(raw, i);
                chars++;
                if (cp == '.') {
                    dot_run++;
                    if (dot_run == 3) ellipses++;
                } else {
                    dot_run = 0;
                }
                if (cp == 0x2026) ellipses++;  // horizontal ellipsis
                if (cp < 0x80) {
                    char c = static_cast<char>(cp);
                    if (c >= 'A' && c <= 'Z') upper++;
                    else if (c >= 'a' && c <= 'z') lower++;
                    else if (c >= '0' && c <= '9') digits++;
                    else if (std::ispunct(static_cast<unsigned char>(c))) punct++;
                    if (c == '!') excl++;
                    if (c == '?') quest++;
                    if (c == ',') commas++;
                    if (c == '"') quotes++;
                } else if (cp == 0x201C || cp == 0x201D) {
                    quotes++;
                    punct++;
                }
            }
        }

        // All-caps runs over raw whitespace chunks.
        std::size_t allcaps = 0;
        {
            std::size_t i = 0;
            while (i < raw.size()) {
                while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) i++;
                std::size_t j = i;
                std::size_t letters = 0, uppers = 0;
                while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) {
                    char c = raw[j];
                    if (c >= 'A' && c <= 'Z') {
                        letters++;
                        uppers++;
                    } else if (c >= 'a' && c <= 'z') {
                        letters++;
                    }
                    j++;
                }
                if (letters >= 2 && letters == uppers) allcaps++;
                i = j;
            }
        }

        // Sentences: [.!?]+ delimited segments containing an alphanumeric.
        std::size_t sentences = 0;
        {
            bool has_content = false;
            for (char c : raw) {
                if (c == '.' || c == '!' || c == '?') {
                    if (has_content) sentences++;
                    has_content = false;
                } else if (std::isalnum(static_cast<unsigned char>(c))) {
                    has_content = true;
                }
            }
            if (has_content) sentences++;
        }

        // Token statistics.
        std::size_t urls = 0, mentions = 0, hashtags = 0, emoji = 0;
        std::size_t elongated = 0, negations = 0, numeric = 0;
        std::size_t rt = 0;
        std::unordered_set<std::string> unique;
        std::size_t token_len_sum = 0, token_len_max = 0;
        std::size_t words = 0, long_words = 0, syllable_sum = 0;
        for (const auto& t : toks) {
            unique.insert(t);
            std::size_t len = utf8::count_codepoints(t);
            token_len_sum += len;
            token_len_max = std::max(token_len_max, len);
            if (is_url_token(t)) urls++;
            else if (is_mention_token(t)) mentions++;
            else if (is_hashtag_token(t)) hashtags++;
            else if (is_emoji_token(t)) emoji++;
            if (t == "rt") rt++;
            if (detail::is_elongated(t)) elongated++;
            if (detail::is_negation_token(t)) negations++;
            bool all_digits = !t.empty();
            for (char c : t)
                if (c < '0' || c > '9') all_digits = false;
            if (all_digits) numeric++;
            if (detail::is_word_token(t)) {
                words++;
                if (len >= 7) long_words++;
                syllable_sum += detail::syllables(t);
            }
        }

        double swear = static_cast<double>(lexicons_.swear.count_matches(toks));
        double mosques = static_cast<double>(lexicons_.mosques.count_matches(toks));
        double names = static_cast<double>(lexicons_.muslim_names.count_matches(toks));
        double pos_hits = static_cast<double>(lexicons_.positive.count_matches(toks));
        double neg_hits = static_cast<double>(lexicons_.negative.count_matches(toks));
        double sentiment = pos_hits - neg_hits;
        double polarity =
            (pos_hits + neg_hits > 0) ? sentiment / (pos_hits + neg_hits) : 0.0;

        auto pos_counts = pos_->tag_counts(toks);
        auto ner_counts = ner_->entity_counts(toks);
        auto pos_count = [&](PosTag t) {
            auto it = pos_counts.find(t);
            return it == pos_counts.end() ? 0.0 : static_cast<double>(it->second);
        };
        auto ner_count = [&](NerType t) {
            auto it = ner_counts.find(t);
            return it == ner_counts.end() ? 0.0 : static_cast<double>(it->second);
        };

        const double ntok = static_cast<double>(toks.size());
        const double letters = static_cast<double>(upper + lower);

        FeatureVector v;
        v.values = {
            urls > 0 ? 1.0 : 0.0,
            rt > 0 ? 1.0 : 0.0,
            swear,
            mosques,
            names,
            pos_hits,
            neg_hits,
            sentiment,
            polarity,
            pos_count(PosTag::Conjunction),
            pos_count(PosTag::Determiner),
            pos_count(PosTag::Pronoun),
            pos_count(PosTag::Preposition),
            pos_count(PosTag::Noun),
            pos_count(PosTag::Verb),
            pos_count(PosTag::Adjective),
            pos_count(PosTag::Adverb),
            ner_count(NerType::Location),
            ner_count(NerType::Organization),
            ner_count(NerType::Person),
            ntok,
            static_cast<double>(unique.size()),
            static_cast<double>(urls),
            static_cast<double>(mentions),
            static_cast<double>(hashtags),
            static_cast<double>(emoji),
            static_cast<double>(allcaps),
            static_cast<double>(elongated),
            static_cast<double>(negations),
            static_cast<double>(numeric),
            static_cast<double>(chars),
            static_cast<double>(upper),
            static_cast<double>(digits),
            static_cast<double>(punct),
            static_cast<double>(excl),
            static_cast<double>(quest),
            static_cast<double>(commas),
            static_cast<double>(quotes),
            static_cast<double>(ellipses),
            letters > 0 ? static_cast<double>(upper) / letters : 0.0,
            chars > 0 ? static_cast<double>(digits) / static_cast<double>(chars) : 0.0,
            chars > 0 ? static_cast<double>(punct) / static_cast<double>(chars) : 0.0,
            ntok > 0 ? static_cast<double>(token_len_sum) / ntok : 0.0,
            static_cast<double>(token_len_max),
            ntok > 0 ? static_cast<double>(unique.size()) / ntok : 0.0,
            static_cast<double>(sentences),
            sentences > 0 ? ntok / static_cast<double>(sentences) : 0.0,
            static_cast<double>(long_words),
            words > 0 ? static_cast<double>(syllable_sum) / static_cast<double>(words)
                      : 0.0,
            (words > 0 && sentences > 0)
                ? 206.835 -
                      1.015 * (static_cast<double>(words) / static_cast<double>(sentences)) -
                      84.6 * (static_cast<double>(syllable_sum) / static_cast<double>(words))
                : 0.0,
        };
        validate(schema_, v);
        return v;
    }

private:
    Lexicons lexicons_;
    std::shared_ptr<const PosTagger> pos_;
    std::shared_ptr<const NerTagger> ner_;
    FeatureSchema schema_;
};

// Embedding dimensions as schema entries.
inline FeatureSchema embedding_schema(int dim) {
    FeatureSchema s;
    for (int i = 0; i < dim; ++i)
        s.add("emb_" + std::to_string(i), FeatureKind::Real);
    return s;
}

// Input-model schema selection:
//   1 = bag of words only            2 = non-text only
//   3 = bag of words + non-text     4,5 = embeddings only
//   6 = embeddings + all non-text    7 = embeddings + six tuned extras
inline FeatureSchema select_model_features(int model_id, const Vocabulary* vocab,
                                           int embedding_dim,
                                           const FeatureSchema& surface,
                                           bool bow_counts = false) {
    auto need_vocab = [&]() {
        if (!vocab || vocab->empty())
            throw ConfigError("feature model " + std::to_string(model_id) +
                              " needs a fitted vocabulary");
    };
    auto need_emb = [&]() {
        if (embedding_dim < 1)
            throw ConfigError("feature model " + std::to_string(model_id) +
                              " needs an embedding table");
    };
    FeatureSchema s;
    switch (model_id) {
        case 1:
            need_vocab();
            return bow_schema(*vocab, bow_counts);
        case 2:
            return surface;
        case 3:
            need_vocab();
            s = bow_schema(*vocab, bow_counts);
            s.append(surface);
            return s;
        case 4:
        case 5:
            need_emb();
            return embedding_schema(embedding_dim);
        case 6:
            need_emb();
            s = embedding_schema(embedding_dim);
            s.append(surface);
            return s;
        case 7: {
            need_emb();
            s = embedding_schema(embedding_dim);
            for (const auto& name : tuned_extra_features()) {
                auto idx = surface.index_of(name);
                if (!idx) throw ConfigError("surface schema lacks feature '" + name + "'");
                s.add(name, surface.kind(*idx));
            }
            return s;
        }
        default:
            throw ConfigError("unknown feature model id " + std::to_string(model_id) +
                              " (expected 1..7)");
    }
}

}  // namespace graded
