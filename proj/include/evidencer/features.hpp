#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "evidencer/corpus.hpp"
#include "evidencer/errors.hpp"
#include "evidencer/lingua.hpp"
#include "evidencer/sentiment.hpp"

namespace evidencer::features {

// Term multiset of one document: space-joined lowercased n-grams -> count.
using TermCounts = std::unordered_map<std::string, int>;

// Lowercased contiguous n-grams for n in [n_min, n_max] over the word tokens;
// punctuation-only tokens are skipped before n-grams are formed, so n-grams
// bridge commas the way the reference vectorizers do.
TermCounts extract_ngrams(const std::vector<std::string>& tokens, int n_min = 1, int n_max = 3);
TermCounts extract_ngrams_text(const std::string& text, int n_min = 1, int n_max = 3);

struct Vocabulary {
    std::vector<std::string> terms;  // lexicographic; index is the column
    std::vector<int> df;             // documents containing the term
    std::unordered_map<std::string, int> index;
    int n_docs = 0;

    int size() const { return static_cast<int>(terms.size()); }
};

Vocabulary fit_vocabulary(const std::vector<TermCounts>& docs, int min_df = 1);

enum class VectorizerMode { Count, Tfidf };

VectorizerMode parse_mode(const std::string& name);
std::string mode_name(VectorizerMode mode);

struct SparseVector {
    std::vector<std::pair<int, double>> entries;  // strictly increasing indices, non-zero values
    int dimension = 0;
};

// Count mode: raw term frequency. Tfidf mode: tf * ln(N / df), no smoothing;
// a term present in every document therefore weighs exactly zero.
SparseVector transform(const TermCounts& doc, const Vocabulary& vocab, VectorizerMode mode);

enum class TextSource { Citances, Abstract, Both };

TextSource parse_source(const std::string& name);
std::string source_name(TextSource source);

struct FeatureVector {
    SparseVector ngram_block;
    std::vector<double> pos_block;  // tag frequencies in tagset order
    double compound = 0;
    TextSource provenance = TextSource::Citances;
};

struct AssembleOptions {
    int window_months = 24;
    int n_min = 1;
    int n_max = 3;
    VectorizerMode mode = VectorizerMode::Count;
    bool pos_counts = false;  // raw tag counts instead of relative frequencies
    sentiment::ScoreOptions sentiment;
};

// The text a source selects: windowed-concatenated citances, the abstract,
// or both joined with a space.
std::string source_text(const corpus::ArticleRecord& article, TextSource source,
                        int window_months = 24);

// Term multiset for fitting/transforming. For Both, each text contributes its
// own n-grams (no terms bridge the citances/abstract boundary), which keeps
// counts additive across sources.
TermCounts doc_terms(const corpus::ArticleRecord& article, TextSource source,
                     const AssembleOptions& options = {});

FeatureVector assemble(const corpus::ArticleRecord& article, TextSource source,
                       const Vocabulary& vocab, const lingua::TaggerModel& tagger,
                       const sentiment::SentimentLexicon& lexicon,
                       const AssembleOptions& options = {});

// Column names for the combined matrix: vocabulary terms, then "__POS_<TAG>"
// per tagset entry, then "__COMPOUND".
std::vector<std::string> feature_names(const Vocabulary& vocab,
                                       const std::vector<std::string>& tagset);

// Sparse triplet export ("row col value" lines) with a sidecar vocabulary
// file "index<TAB>term<TAB>df"; reserved POS/compound columns carry df 0.
void export_matrix(const std::vector<FeatureVector>& rows, const Vocabulary& vocab,
                   const std::vector<std::string>& tagset, const std::string& matrix_path,
                   const std::string& vocab_path);

}  // namespace evidencer::features
