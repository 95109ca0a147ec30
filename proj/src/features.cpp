#include "evidencer/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace evidencer::features {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_punct_token(const std::string& s) {
    if (s.empty()) return true;
    for (char c : s)
        if (!std::ispunct(static_cast<unsigned char>(c))) return false;
    return true;
}

void accumulate_ngrams(const std::vector<std::string>& words, int n_min, int n_max,
                       TermCounts& out) {
    const int n_words = static_cast<int>(words.size());
    for (int n = n_min; n <= n_max; ++n) {
        for (int i = 0; i + n <= n_words; ++i) {
            std::string term = words[i];
            for (int k = 1; k < n; ++k) {
                term += ' ';
                term += words[i + k];
            }
            out[term] += 1;
        }
    }
}

}  // namespace

TermCounts extract_ngrams(const std::vector<std::string>& tokens, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max)
        throw Error(ErrorKind::Validation, "require 1 <= n_min <= n_max");
    std::vector<std::string> words;
    words.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!is_punct_token(t)) words.push_back(lower(t));
    TermCounts counts;
    accumulate_ngrams(words, n_min, n_max, counts);
    return counts;
}

TermCounts extract_ngrams_text(const std::string& text, int n_min, int n_max) {
    auto tokens = lingua::tokenize(text);
    std::vector<std::string> surfaces(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) surfaces[i] = tokens[i].surface;
    return extract_ngrams(surfaces, n_min, n_max);
}

Vocabulary fit_vocabulary(const std::vector<TermCounts>& docs, int min_df) {
    if (docs.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot fit vocabulary on zero documents");

    std::map<std::string, int> df;  // ordered map gives the lexicographic column order
    for (const auto& doc : docs)
        for (const auto& [term, count] : doc)
            if (count > 0) df[term] += 1;

    Vocabulary vocab;
    vocab.n_docs = static_cast<int>(docs.size());
    for (const auto& [term, d] : df) {
        if (d < min_df) continue;
        vocab.index.emplace(term, static_cast<int>(vocab.terms.size()));
        vocab.terms.push_back(term);
        vocab.df.push_back(d);
    }
    return vocab;
}

VectorizerMode parse_mode(const std::string& name) {
    std::string k = lower(name);
    if (k == "count") return VectorizerMode::Count;
    if (k == "tfidf" || k == "tf-idf") return VectorizerMode::Tfidf;
    throw Error(ErrorKind::Validation, "unknown vectorizer mode: '" + name + "'");
}

std::string mode_name(VectorizerMode mode) {
    return mode == VectorizerMode::Count ? "count" : "tfidf";
}

SparseVector transform(const TermCounts& doc, const Vocabulary& vocab, VectorizerMode mode) {
    SparseVector vec;
    vec.dimension = vocab.size();
    vec.entries.reserve(doc.size());
    for (const auto& [term, tf] : doc) {
        if (tf <= 0) continue;
        auto it = vocab.index.find(term);
        if (it == vocab.index.end()) continue;
        double value = static_cast<double>(tf);
        if (mode == VectorizerMode::Tfidf)
            value *= std::log(static_cast<double>(vocab.n_docs) /
                              static_cast<double>(vocab.df[it->second]));
        if (value != 0.0) vec.entries.emplace_back(it->second, value);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    return vec;
}

TextSource parse_source(const std::string& name) {
    std::string k = lower(name);
    if (k == "citances" || k == "citing" || k == "citing_sentences") return TextSource::Citances;
    if (k == "abstract") return TextSource::Abstract;
    if (k == "both" || k == "citances+abstract") return TextSource::Both;
    throw Error(ErrorKind::Validation, "unknown text source: '" + name + "'");
}

std::string source_name(TextSource source) {
    switch (source) {
        case TextSource::Citances: return "citances";
        case TextSource::Abstract: return "abstract";
        case TextSource::Both: return "both";
    }
    return "citances";
}

std::string source_text(const corpus::ArticleRecord& article, TextSource source,
                        int window_months) {
    std::string citance_text;
    if (source != TextSource::Abstract)
        citance_text = corpus::concat_citances(corpus::window_citances(article, window_months));
    switch (source) {
        case TextSource::Citances:
            return citance_text;
        case TextSource::Abstract:
            return article.abstract;
        case TextSource::Both:
            if (citance_text.empty()) return article.abstract;
            if (article.abstract.empty()) return citance_text;
            return citance_text + " " + article.abstract;
    }
    return {};
}

TermCounts doc_terms(const corpus::ArticleRecord& article, TextSource source,
                     const AssembleOptions& options) {
    if (source == TextSource::Both) {
        TermCounts counts =
            extract_ngrams_text(source_text(article, TextSource::Citances, options.window_months),
                                options.n_min, options.n_max);
        for (const auto& [term, c] :
             extract_ngrams_text(article.abstract, options.n_min, options.n_max))
            counts[term] += c;
        return counts;
    }
    return extract_ngrams_text(source_text(article, source, options.window_months), options.n_min,
                               options.n_max);
}

FeatureVector assemble(const corpus::ArticleRecord& article, TextSource source,
                       const Vocabulary& vocab, const lingua::TaggerModel& tagger,
                       const sentiment::SentimentLexicon& lexicon,
                       const AssembleOptions& options) {
    const std::string text = source_text(article, source, options.window_months);
    if (text.empty())
        throw Error(ErrorKind::EmptyText,
                    "article " + article.pmid + " has no text for source " + source_name(source));

    FeatureVector fv;
    fv.provenance = source;
    fv.ngram_block = transform(doc_terms(article, source, options), vocab, options.mode);

    auto tagged = lingua::tag_text(text, tagger);
    auto hist = options.pos_counts ? lingua::tag_counts(tagged, tagger.tagset)
                                   : lingua::tag_histogram(tagged, tagger.tagset);
    fv.pos_block.reserve(tagger.tagset.size());
    for (const auto& tag : tagger.tagset) fv.pos_block.push_back(hist.at(tag));

    fv.compound = sentiment::compound_of(text, lexicon, options.sentiment);
    return fv;
}

std::vector<std::string> feature_names(const Vocabulary& vocab,
                                       const std::vector<std::string>& tagset) {
    std::vector<std::string> names = vocab.terms;
    names.reserve(vocab.terms.size() + tagset.size() + 1);
    for (const auto& tag : tagset) names.push_back("__POS_" + tag);
    names.push_back("__COMPOUND");
    return names;
}

void export_matrix(const std::vector<FeatureVector>& rows, const Vocabulary& vocab,
                   const std::vector<std::string>& tagset, const std::string& matrix_path,
                   const std::string& vocab_path) {
    std::ofstream mat(matrix_path, std::ios::binary | std::ios::trunc);
    if (!mat) throw Error(ErrorKind::IoError, "cannot open " + matrix_path + " for writing");
    char buf[64];
    const int pos_base = vocab.size();
    const int compound_col = pos_base + static_cast<int>(tagset.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const FeatureVector& fv = rows[r];
        for (const auto& [col, value] : fv.ngram_block.entries) {
            std::snprintf(buf, sizeof(buf), "%.17g", value);
            mat << r << ' ' << col << ' ' << buf << '\n';
        }
        for (std::size_t t = 0; t < fv.pos_block.size(); ++t) {
            if (fv.pos_block[t] == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%.17g", fv.pos_block[t]);
            mat << r << ' ' << pos_base + t << ' ' << buf << '\n';
        }
        if (fv.compound != 0.0) {
            std::snprintf(buf, sizeof(buf), "%.17g", fv.compound);
            mat << r << ' ' << compound_col << ' ' << buf << '\n';
        }
    }
    if (!mat) throw Error(ErrorKind::IoError, "write failed: " + matrix_path);

    std::ofstream voc(vocab_path, std::ios::binary | std::ios::trunc);
    if (!voc) throw Error(ErrorKind::IoError, "cannot open " + vocab_path + " for writing");
    for (int i = 0; i < vocab.size(); ++i)
        voc << i << '\t' << vocab.terms[i] << '\t' << vocab.df[i] << '\n';
    for (std::size_t t = 0; t < tagset.size(); ++t)
        voc << pos_base + t << '\t' << "__POS_" + tagset[t] << '\t' << 0 << '\n';
    voc << compound_col << '\t' << "__COMPOUND" << '\t' << 0 << '\n';
    if (!voc) throw Error(ErrorKind::IoError, "write failed: " + vocab_path);
}

}  // namespace evidencer::features
