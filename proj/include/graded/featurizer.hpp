// Binds resources (lexicons, taggers, embeddings) and a feature-model
// choice into a fit/transform pipeline. Fitting only touches what has a
// fitting step (the bag-of-words vocabulary); a featurizer can also be
// reconstructed transform-only from a saved model's schema.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "graded/embeddings.hpp"
#include "graded/features.hpp"

namespace graded {

struct FeatureResources {
    Lexicons lexicons;
    std::shared_ptr<const PosTagger> pos;
    std::shared_ptr<const NerTagger> ner;
    std::shared_ptr<const EmbeddingTable> embeddings;  // models 4-7 and custom
};

struct FeaturizerConfig {
    int model_id = 5;  // 1..7; 0 = custom (embeddings + named extras)
    std::vector<std::string> custom_features;
    std::size_t min_count = 1;
    bool bow_counts = false;
    DocVectorMode doc_vector_mode = DocVectorMode::MeanOverTokens;
};

class Featurizer {
public:
    Featurizer(FeaturizerConfig cfg, FeatureResources res)
        : cfg_(std::move(cfg)),
          res_(std::move(res)),
          surface_(std::make_shared<SurfaceFeatureExtractor>(res_.lexicons, res_.pos,
                                                             res_.ner)) {
        if (cfg_.model_id < 0 || cfg_.model_id > 7)
            throw ConfigError("feature model id must be 0..7");
        if (needs_embeddings() && (!res_.embeddings || res_.embeddings->empty()))
            throw ConfigError("feature model " + std::to_string(cfg_.model_id) +
                              " requires an embedding table");
        if (!needs_fit()) build_schema();
    }

    bool needs_fit() const { return cfg_.model_id == 1 || cfg_.model_id == 3; }
    bool needs_embeddings() const {
        return cfg_.model_id == 0 || cfg_.model_id >= 4;
    }

    void fit(const std::vector<Document>& train_docs) {
        if (needs_fit()) {
            std::vector<TokenSequence> toks;
            toks.reserve(train_docs.size());
            for (const auto& d : train_docs) toks.push_back(tokenize(d.text));
            vocab_ = Vocabulary::build(toks, cfg_.min_count);
        }
        build_schema();
    }

    const FeatureSchema& schema() const {
        if (schema_.size() == 0)
            throw ConfigError("featurizer not fitted (schema is empty)");
        return schema_;
    }

    FeatureVector transform(const Document& doc) const {
        const FeatureSchema& s = schema();
        TokenSequence toks = tokenize(doc.text);

        FeatureVector surface_vec;
        if (uses_surface_) surface_vec = surface_->extract(doc);
        std::vector<double> docvec;
        if (needs_embeddings())
            docvec = embed_document(toks, *res_.embeddings, cfg_.doc_vector_mode);
        std::unordered_map<std::string, double> token_counts;
        for (const auto& t : toks) token_counts[t] += 1.0;

        FeatureVector out;
        out.values.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string& name = s.names()[i];
            if (name.rfind("bow_", 0) == 0) {
                auto it = token_counts.find(name.substr(4));
                double v = it == token_counts.end()
                               ? 0.0
                               : (cfg_.bow_counts ? it->second : 1.0);
                out.values.push_back(v);
            } else if (name.rfind("emb_", 0) == 0) {
                std::size_t d = std::stoul(name.substr(4));
                out.values.push_back(docvec.at(d));
            } else {
                auto idx = surface_->schema().index_of(name);
                if (!idx)
                    throw ConfigError("schema feature '" + name +
                                      "' is not a known surface feature");
                out.values.push_back(surface_vec.values.at(*idx));
            }
        }
        validate(s, out);
        return out;
    }

    std::vector<FeatureVector> transform(const std::vector<Document>& docs) const {
        std::vector<FeatureVector> out;
        out.reserve(docs.size());
        for (const auto& d : docs) out.push_back(transform(d));
        return out;
    }

    // Transform-only featurizer for a saved model: part boundaries are
    // recovered from the schema's feature names.
    static Featurizer from_schema(const FeatureSchema& schema, FeatureResources res,
                                  const FeaturizerConfig& hints = {}) {
        FeaturizerConfig cfg = hints;
        std::vector<std::string> bow_terms;
        int emb_dims = 0;
        std::vector<std::string> extras;
        bool bow_is_count = false;
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const std::string& name = schema.names()[i];
            if (name.rfind("bow_", 0) == 0) {
                bow_terms.push_back(name.substr(4));
                if (schema.kind(i) == FeatureKind::Count) bow_is_count = true;
            } else if (name.rfind("emb_", 0) == 0) {
                emb_dims++;
            } else {
                extras.push_back(name);
            }
        }
        cfg.model_id = 0;
        cfg.custom_features = extras;
        cfg.bow_counts = bow_is_count;
        if (emb_dims > 0) {
            if (!res.embeddings || res.embeddings->empty())
                throw ConfigError("model schema uses embeddings but no embedding "
                                  "table was provided");
            if (res.embeddings->dim() != emb_dims)
                throw ConfigError("model schema has " + std::to_string(emb_dims) +
                                  " embedding dimensions but the table has " +
                                  std::to_string(res.embeddings->dim()));
        }
        Featurizer f(cfg, std::move(res));
        if (!bow_terms.empty()) f.vocab_ = Vocabulary::from_terms(bow_terms);
        f.schema_ = schema;
        f.uses_surface_ = !extras.empty();
        return f;
    }

private:
    void build_schema() {
        if (cfg_.model_id == 0) {
            FeatureSchema s = res_.embeddings ? embedding_schema(res_.embeddings->dim())
                                              : FeatureSchema{};
            for (const auto& name : cfg_.custom_features) {
                auto idx = surface_->schema().index_of(name);
                if (!idx)
                    throw ConfigError("unknown surface feature '" + name + "'");
                s.add(name, surface_->schema().kind(*idx));
            }
            schema_ = s;
            uses_surface_ = !cfg_.custom_features.empty();
        } else {
            int dim = res_.embeddings ? res_.embeddings->dim() : 0;
            schema_ = select_model_features(cfg_.model_id,
                                            vocab_.empty() ? nullptr : &vocab_, dim,
                                            surface_->schema(), cfg_.bow_counts);
            uses_surface_ = cfg_.model_id == 2 || cfg_.model_id == 3 ||
                            cfg_.model_id == 6 || cfg_.model_id == 7;
        }
    }

    FeaturizerConfig cfg_;
    FeatureResources res_;
    std::shared_ptr<SurfaceFeatureExtractor> surface_;
    Vocabulary vocab_;
    FeatureSchema schema_;
    bool uses_surface_ = false;
};

}  // namespace graded
