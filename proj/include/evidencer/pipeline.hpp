#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evidencer/corpus.hpp"
#include "evidencer/features.hpp"
#include "evidencer/models.hpp"

namespace evidencer::pipeline {

struct FoldAssignment {
    std::vector<int> fold;  // per item, 0..k-1
    int k = 0;
    std::uint64_t seed = 0;
};

// Within each class: seeded shuffle, then round-robin deal. Per-fold class
// counts stay within one of perfect proportionality.
FoldAssignment stratified_folds(const std::vector<int>& labels, int k = 10,
                                std::uint64_t seed = 0);

// Mann-Whitney rank statistic with midranks for ties; exactly the pairwise
// concordance count with ties worth one half.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct CellConfig {
    features::TextSource source = features::TextSource::Citances;
    features::VectorizerMode mode = features::VectorizerMode::Count;
    models::EnsembleKind classifier = models::EnsembleKind::RandomForest;
};

std::string cell_name(const CellConfig& cell);
std::vector<CellConfig> full_grid();

struct PipelineOptions {
    int k = 10;
    std::uint64_t seed = 42;
    int window_months = 24;
    int min_df = 2;
    int n_min = 1;
    int n_max = 3;
    bool pos_counts = false;  // raw POS counts instead of frequencies
    bool merge_auc = false;
    models::EnsembleParams model;  // class weights are re-balanced per training split
    sentiment::ScoreOptions sentiment;
};

struct ScoredItem {
    std::string pmid;
    int truth = 0;
    double score = 0;
    int fold = 0;
};

struct CvReport {
    CellConfig cell;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<double> fold_aucs;
    double auc_avg = 0;
    double auc_min = 0;
    double auc_max = 0;
    std::optional<double> auc_merge;
    std::vector<ScoredItem> scored;         // every held-out prediction
    std::vector<ScoredItem> misclassified;  // 0.5-thresholded mistakes
    std::string fingerprint;                // canonical hash; timing excluded
    double elapsed_seconds = 0;
    int n_total = 0;     // records seen
    int n_labeled = 0;   // carried a clean T/I label
    int n_used = 0;      // survived the abstract/citance availability filter
};

// A record prepared for modeling: label plus the per-source text features
// that do not depend on a fitted vocabulary.
struct PreparedDoc {
    std::string pmid;
    int label = 0;  // 1 = transformative
    features::TermCounts terms;
    std::vector<double> pos_block;
    double compound = 0;
};

struct PrepareResult {
    std::vector<PreparedDoc> docs;
    int n_total = 0;
    int n_labeled = 0;
    int n_used = 0;
};

// Labels records, drops excluded ones, then drops records with a missing
// abstract or no citance inside the window (the availability filter applied
// before modeling, whatever the source), and precomputes text features.
PrepareResult prepare_docs(const std::vector<corpus::ArticleRecord>& records,
                           features::TextSource source, const PipelineOptions& options,
                           const lingua::TaggerModel& tagger,
                           const sentiment::SentimentLexicon& lexicon);

// Vocabulary fitted on the training side of one fold only; the leakage seam
// cross_validate uses, exposed for direct testing.
features::Vocabulary fit_fold_vocabulary(const std::vector<PreparedDoc>& docs,
                                         const FoldAssignment& folds, int test_fold, int min_df);

// Combined design matrix (n-gram block, POS block, compound column) for a
// subset of prepared docs under a fitted vocabulary.
models::DataMatrix build_matrix(const std::vector<PreparedDoc>& docs,
                                const std::vector<int>& indices,
                                const features::Vocabulary& vocab,
                                features::VectorizerMode mode,
                                const std::vector<std::string>& tagset);

CvReport cross_validate(const std::vector<corpus::ArticleRecord>& records,
                        const CellConfig& cell, const PipelineOptions& options,
                        const lingua::TaggerModel& tagger,
                        const sentiment::SentimentLexicon& lexicon);

// Like cross_validate but also returns the importance ranking of a model
// trained on all prepared docs (the Table-5-style view).
struct CellOutcome {
    CvReport report;
    std::vector<models::FeatureImportance> importances;
};
CellOutcome evaluate_cell(const std::vector<corpus::ArticleRecord>& records,
                          const CellConfig& cell, const PipelineOptions& options,
                          const lingua::TaggerModel& tagger,
                          const sentiment::SentimentLexicon& lexicon);

struct MeshRow {
    std::string term;
    int count = 0;
};

struct MisclassifiedExample {
    std::string pmid;
    int truth = 0;
    int predicted = 0;
    double score = 0;
    std::vector<std::string> citances;  // up to two windowed examples
};

struct ErrorAnalysis {
    std::vector<MeshRow> correct;        // major MeSH terms, ranked
    std::vector<MeshRow> misclassified;  // same for the error cohort
    std::vector<MisclassifiedExample> examples;
};

ErrorAnalysis error_analysis(const CvReport& report,
                             const std::vector<corpus::ArticleRecord>& records,
                             int window_months = 24);

struct ClassStats {
    int n = 0;
    std::vector<std::pair<std::string, int>> year_buckets;  // "2005-2008" -> count
    std::vector<std::pair<std::string, int>> journals;      // ranked by count
    double mean_recommendations = 0;
    double median_recommendations = 0;
    double mean_citances = 0;  // windowed
    double median_citances = 0;
};

struct DescriptiveStats {
    ClassStats incremental;
    ClassStats transformative;
};

DescriptiveStats descriptive_stats(const std::vector<corpus::ArticleRecord>& records,
                                   int window_months = 24);

// Per-fold ROC staircase as CSV (one point per held-out item plus the origin,
// per fold) and an SVG overlay. Byte-deterministic for a given report.
void emit_roc(const CvReport& report, const std::string& csv_path, const std::string& svg_path);

void write_report_json(const CvReport& report, const std::string& path);
CvReport read_report_json(const std::string& path);

// FNV-1a over the canonical serialization (config + fold AUCs + scores).
std::string report_fingerprint(const CvReport& report, const PipelineOptions& options);

}  // namespace evidencer::pipeline
