// Pluggable part-of-speech and named-entity annotators. The defaults are
// rule based: POS from closed-class word lists plus suffix heuristics, NER
// from gazetteers. Downstream features only consume aggregate tag counts,
// which is all these need to supply.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "graded/lexicon.hpp"
#include "graded/tokenizer.hpp"

namespace graded {

enum class PosTag {
    Conjunction,
    Determiner,
    Pronoun,
    Preposition,
    Noun,
    Verb,
    Adjective,
    Adverb,
    Number,
    Other,
};

inline constexpr std::array<PosTag, 10> kAllPosTags{
    PosTag::Conjunction, PosTag::Determiner, PosTag::Pronoun,
    PosTag::Preposition, PosTag::Noun,       PosTag::Verb,
    PosTag::Adjective,   PosTag::Adverb,     PosTag::Number,
    PosTag::Other};

enum class NerType { Location, Organization, Person };

class PosTagger {
public:
    virtual ~PosTagger() = default;
    virtual std::vector<PosTag> tag(const TokenSequence& doc) const = 0;

    std::map<PosTag, std::size_t> tag_counts(const TokenSequence& doc) const {
        std::map<PosTag, std::size_t> counts;
        for (PosTag t : tag(doc)) counts[t]++;
        return counts;
    }
};

class NerTagger {
public:
    virtual ~NerTagger() = default;
    virtual std::map<NerType, std::size_t> entity_counts(const TokenSequence& doc) const = 0;
};

class RuleBasedPosTagger final : public PosTagger {
public:
    RuleBasedPosTagger() {
        conjunctions_ = {"and", "or",  "but",     "nor",    "so",      "yet",
                         "for", "because", "although", "though", "since",
                         "unless",  "while",   "whereas", "if",  "than",
                         "whether", "once",    "until",   "when", "whenever",
                         "wherever", "as"};
        determiners_ = {"the",  "a",     "an",    "this",  "that",   "these",
                        "those", "my",   "your",  "his",   "her",    "its",
                        "our",  "their", "some",  "any",   "no",     "every",
                        "each", "either", "neither", "all", "both",  "few",
                        "many", "much",  "most",  "several", "enough", "such"};
        pronouns_ = {"i",    "you",   "he",    "she",    "it",     "we",
                     "they", "me",    "him",   "us",     "them",   "myself",
                     "yourself", "himself", "herself", "itself", "ourselves",
                     "themselves", "who",  "whom",  "whose",  "which", "what",
                     "anyone", "anybody", "anything", "someone", "somebody",
                     "something", "everyone", "everybody", "everything",
                     "nobody", "nothing", "mine", "yours", "hers", "ours",
                     "theirs"};
        prepositions_ = {"in",   "on",     "at",      "by",      "with",
                         "about", "against", "between", "into",   "through",
                         "during", "before", "after",  "above",   "below",
                         "to",   "from",   "up",      "down",    "of",
                         "off",  "over",   "under",   "again",   "near",
                         "across", "behind", "beyond", "among",   "around",
                         "toward", "towards", "upon",  "within",  "without"};
    }

    std::vector<PosTag> tag(const TokenSequence& doc) const override {
        std::vector<PosTag> tags;
        tags.reserve(doc.size());
        for (const auto& tok : doc) tags.push_back(tag_token(tok));
        return tags;
    }

private:
    PosTag tag_token(const std::string& tok) const {
        if (tok.empty()) return PosTag::Other;
        if (is_url_token(tok) || is_mention_token(tok) || is_hashtag_token(tok) ||
            is_emoji_token(tok))
            return PosTag::Other;
        bool all_digits = true;
        bool any_alpha = false;
        for (char c : tok) {
            if (c < '0' || c > '9') all_digits = false;
            if ((c >= 'a' && c <= 'z')) any_alpha = true;
        }
        if (all_digits) return PosTag::Number;
        if (!any_alpha) return PosTag::Other;
        if (conjunctions_.count(tok)) return PosTag::Conjunction;
        if (determiners_.count(tok)) return PosTag::Determiner;
        if (pronouns_.count(tok)) return PosTag::Pronoun;
        if (prepositions_.count(tok)) return PosTag::Preposition;
        return suffix_tag(tok);
    }

    static bool ends_with(const std::string& s, std::string_view suf) {
        return s.size() >= suf.size() &&
               std::string_view(s).substr(s.size() - suf.size()) == suf;
    }

    static PosTag suffix_tag(const std::string& tok) {
        if (tok.size() > 3 && ends_with(tok, "ly")) return PosTag::Adverb;
        for (auto suf : {"ous", "ful", "ive", "able", "ible", "ic", "ish", "less"})
            if (tok.size() > 4 && ends_with(tok, suf)) return PosTag::Adjective;
        for (auto suf : {"ing", "ed", "ise", "ize", "ify"})
            if (tok.size() > 4 && ends_with(tok, suf)) return PosTag::Verb;
        // default open class
        return PosTag::Noun;
    }

    std::unordered_set<std::string> conjunctions_, determiners_, pronouns_,
        prepositions_;
};

// Counts gazetteer phrase matches per entity type.
class GazetteerNerTagger final : public NerTagger {
public:
    GazetteerNerTagger(Lexicon locations, Lexicon organizations, Lexicon persons)
        : locations_(std::move(locations)),
          organizations_(std::move(organizations)),
          persons_(std::move(persons)) {}

    std::map<NerType, std::size_t> entity_counts(const TokenSequence& doc) const override {
        return {{NerType::Location, locations_.count_matches(doc)},
                {NerType::Organization, organizations_.count_matches(doc)},
                {NerType::Person, persons_.count_matches(doc)}};
    }

private:
    Lexicon locations_, organizations_, persons_;
};

}  // namespace graded
