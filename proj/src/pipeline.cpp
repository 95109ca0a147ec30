#include "evidencer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

#include "evidencer/rng.hpp"

namespace evidencer::pipeline {

using json = nlohmann::ordered_json;

FoldAssignment stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorKind::TooFewSamples, "k must be at least 2");

    std::map<int, std::vector<int>> by_class;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [cls, members] : by_class) {
        if (static_cast<int>(members.size()) < k)
            throw Error(ErrorKind::TooFewSamples,
                        "class " + std::to_string(cls) + " has " +
                            std::to_string(members.size()) + " members, need >= " +
                            std::to_string(k));
    }

    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold.assign(labels.size(), 0);
    int class_index = 0;
    for (auto& [cls, members] : by_class) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(class_index++)));
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i)
            fa.fold[members[i]] = static_cast<int>(i % k);
    }
    return fa;
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw Error(ErrorKind::ShapeMismatch, "scores and labels must align");
    double n_pos = 0, n_neg = 0;
    for (int l : labels) (l ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw Error(ErrorKind::SingleClass, "roc_auc needs both classes");

    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return scores[a] < scores[b]; });

    // Midranks over tie groups; ranks are 1-based.
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (labels[order[t]]) rank_sum_pos += midrank;
        i = j;
    }
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
}

std::string cell_name(const CellConfig& cell) {
    return features::source_name(cell.source) + "_" + features::mode_name(cell.mode) + "_" +
           models::kind_name(cell.classifier);
}

std::vector<CellConfig> full_grid() {
    std::vector<CellConfig> grid;
    for (auto source : {features::TextSource::Citances, features::TextSource::Abstract,
                        features::TextSource::Both})
        for (auto mode : {features::VectorizerMode::Count, features::VectorizerMode::Tfidf})
            for (auto clf : {models::EnsembleKind::RandomForest, models::EnsembleKind::AdaBoost,
                             models::EnsembleKind::GradientBoosted})
                grid.push_back({source, mode, clf});
    return grid;
}

PrepareResult prepare_docs(const std::vector<corpus::ArticleRecord>& records,
                           features::TextSource source, const PipelineOptions& options,
                           const lingua::TaggerModel& tagger,
                           const sentiment::SentimentLexicon& lexicon) {
    PrepareResult out;
    out.n_total = static_cast<int>(records.size());

    features::AssembleOptions assemble_opts;
    assemble_opts.window_months = options.window_months;
    assemble_opts.n_min = options.n_min;
    assemble_opts.n_max = options.n_max;
    assemble_opts.sentiment = options.sentiment;

    for (const auto& rec : records) {
        corpus::Label label = corpus::assign_label(rec.recommendations);
        if (label.is_excluded()) continue;
        ++out.n_labeled;

        // Availability filter: the comparison across sources runs on the same
        // records, so both text sources must exist.
        if (rec.abstract.empty() || !rec.pub_date) continue;
        std::string citance_text =
            features::source_text(rec, features::TextSource::Citances, options.window_months);
        if (citance_text.empty()) continue;
        ++out.n_used;

        PreparedDoc doc;
        doc.pmid = rec.pmid;
        doc.label = label.is_transformative() ? 1 : 0;
        doc.terms = features::doc_terms(rec, source, assemble_opts);

        const std::string text = features::source_text(rec, source, options.window_months);
        auto tagged = lingua::tag_text(text, tagger);
        auto hist = options.pos_counts ? lingua::tag_counts(tagged, tagger.tagset)
                                       : lingua::tag_histogram(tagged, tagger.tagset);
        doc.pos_block.reserve(tagger.tagset.size());
        for (const auto& tag : tagger.tagset) doc.pos_block.push_back(hist.at(tag));
        doc.compound = sentiment::compound_of(text, lexicon, options.sentiment);

        out.docs.push_back(std::move(doc));
    }
    return out;
}

features::Vocabulary fit_fold_vocabulary(const std::vector<PreparedDoc>& docs,
                                         const FoldAssignment& folds, int test_fold, int min_df) {
    std::vector<features::TermCounts> train_docs;
    for (std::size_t i = 0; i < docs.size(); ++i)
        if (folds.fold[i] != test_fold) train_docs.push_back(docs[i].terms);
    return features::fit_vocabulary(train_docs, min_df);
}

models::DataMatrix build_matrix(const std::vector<PreparedDoc>& docs,
                                const std::vector<int>& indices,
                                const features::Vocabulary& vocab,
                                features::VectorizerMode mode,
                                const std::vector<std::string>& tagset) {
    models::DataMatrix x;
    x.feature_names = features::feature_names(vocab, tagset);
    x.n_cols = static_cast<int>(x.feature_names.size());
    const int pos_base = vocab.size();
    const int compound_col = pos_base + static_cast<int>(tagset.size());

    for (int idx : indices) {
        const PreparedDoc& doc = docs[idx];
        std::vector<std::pair<int, double>> entries =
            features::transform(doc.terms, vocab, mode).entries;
        for (std::size_t t = 0; t < doc.pos_block.size(); ++t)
            if (doc.pos_block[t] != 0.0)
                entries.emplace_back(pos_base + static_cast<int>(t), doc.pos_block[t]);
        if (doc.compound != 0.0) entries.emplace_back(compound_col, doc.compound);
        x.rows.push_back(std::move(entries));
    }
    return x;
}

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string report_fingerprint(const CvReport& report, const PipelineOptions& options) {
    std::string s = "cell=" + cell_name(report.cell) + ";k=" + std::to_string(report.k) +
                    ";seed=" + std::to_string(report.seed) +
                    ";window=" + std::to_string(options.window_months) +
                    ";min_df=" + std::to_string(options.min_df) +
                    ";ngrams=" + std::to_string(options.n_min) + "-" + std::to_string(options.n_max) +
                    ";trees=" + std::to_string(options.model.n_trees) +
                    ";lr=" + fmt17(options.model.learning_rate) +
                    ";depth=" + std::to_string(options.model.max_depth) +
                    ";maxf=" + std::to_string(options.model.max_features) +
                    ";pos=" + (options.pos_counts ? std::string("counts") : std::string("freq")) +
                    ";used=" + std::to_string(report.n_used) + ";";
    for (double a : report.fold_aucs) s += "auc=" + fmt17(a) + ";";
    for (const auto& item : report.scored)
        s += item.pmid + "," + std::to_string(item.truth) + "," + fmt17(item.score) + "," +
             std::to_string(item.fold) + ";";
    return fnv1a_hex(s);
}

CvReport cross_validate(const std::vector<corpus::ArticleRecord>& records,
                        const CellConfig& cell, const PipelineOptions& options,
                        const lingua::TaggerModel& tagger,
                        const sentiment::SentimentLexicon& lexicon) {
    const auto t0 = std::chrono::steady_clock::now();

    PrepareResult prep = prepare_docs(records, cell.source, options, tagger, lexicon);
    const auto& docs = prep.docs;

    std::vector<int> labels(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) labels[i] = docs[i].label;
    FoldAssignment folds = stratified_folds(labels, options.k, options.seed);

    CvReport report;
    report.cell = cell;
    report.k = options.k;
    report.seed = options.seed;
    report.n_total = prep.n_total;
    report.n_labeled = prep.n_labeled;
    report.n_used = prep.n_used;

    for (int f = 0; f < options.k; ++f) {
        std::vector<int> train_idx, test_idx;
        for (std::size_t i = 0; i < docs.size(); ++i)
            (folds.fold[i] == f ? test_idx : train_idx).push_back(static_cast<int>(i));

        features::Vocabulary vocab = fit_fold_vocabulary(docs, folds, f, options.min_df);
        models::DataMatrix x_train =
            build_matrix(docs, train_idx, vocab, cell.mode, tagger.tagset);
        models::DataMatrix x_test = build_matrix(docs, test_idx, vocab, cell.mode, tagger.tagset);

        std::vector<int> y_train(train_idx.size()), y_test(test_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) y_train[i] = docs[train_idx[i]].label;
        for (std::size_t i = 0; i < test_idx.size(); ++i) y_test[i] = docs[test_idx[i]].label;

        models::EnsembleParams params = options.model;
        params.class_weights = models::balanced_weights(y_train);
        params.seed = Rng::mix(options.seed, 0xF01D0000ULL + static_cast<std::uint64_t>(f));

        models::EnsembleModel model = models::fit_ensemble(cell.classifier, x_train, y_train, params);
        std::vector<double> scores = models::predict_proba(model, x_test);

        report.fold_aucs.push_back(roc_auc(scores, y_test));
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            ScoredItem item{docs[test_idx[i]].pmid, y_test[i], scores[i], f};
            report.scored.push_back(item);
            if ((scores[i] >= 0.5 ? 1 : 0) != y_test[i]) report.misclassified.push_back(item);
        }
    }

    report.auc_avg = std::accumulate(report.fold_aucs.begin(), report.fold_aucs.end(), 0.0) /
                     static_cast<double>(report.fold_aucs.size());
    report.auc_min = *std::min_element(report.fold_aucs.begin(), report.fold_aucs.end());
    report.auc_max = *std::max_element(report.fold_aucs.begin(), report.fold_aucs.end());

    if (options.merge_auc) {
        std::vector<double> all_scores;
        std::vector<int> all_labels;
        for (const auto& item : report.scored) {
            all_scores.push_back(item.score);
            all_labels.push_back(item.truth);
        }
        report.auc_merge = roc_auc(all_scores, all_labels);
    }

    report.fingerprint = report_fingerprint(report, options);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

CellOutcome evaluate_cell(const std::vector<corpus::ArticleRecord>& records,
                          const CellConfig& cell, const PipelineOptions& options,
                          const lingua::TaggerModel& tagger,
                          const sentiment::SentimentLexicon& lexicon) {
    CellOutcome outcome;
    outcome.report = cross_validate(records, cell, options, tagger, lexicon);

    // One model over all prepared docs for the importance ranking.
    PrepareResult prep = prepare_docs(records, cell.source, options, tagger, lexicon);
    std::vector<features::TermCounts> all_terms;
    for (const auto& d : prep.docs) all_terms.push_back(d.terms);
    features::Vocabulary vocab = features::fit_vocabulary(all_terms, options.min_df);

    std::vector<int> indices(prep.docs.size());
    std::iota(indices.begin(), indices.end(), 0);
    models::DataMatrix x = build_matrix(prep.docs, indices, vocab, cell.mode, tagger.tagset);
    std::vector<int> y(prep.docs.size());
    for (std::size_t i = 0; i < prep.docs.size(); ++i) y[i] = prep.docs[i].label;

    models::EnsembleParams params = options.model;
    params.class_weights = models::balanced_weights(y);
    params.seed = Rng::mix(options.seed, 0xA11D0C5ULL);
    models::EnsembleModel model = models::fit_ensemble(cell.classifier, x, y, params);
    outcome.importances = models::feature_importances(model);
    return outcome;
}

namespace {

std::vector<MeshRow> ranked_major_mesh(const std::vector<const corpus::ArticleRecord*>& cohort) {
    std::map<std::string, int> counts;
    for (const corpus::ArticleRecord* rec : cohort)
        for (const auto& mesh : rec->mesh_terms)
            if (mesh.major) counts[mesh.term] += 1;
    std::vector<MeshRow> rows;
    for (const auto& [term, count] : counts) rows.push_back({term, count});
    std::sort(rows.begin(), rows.end(), [](const MeshRow& a, const MeshRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.term < b.term;
    });
    return rows;
}

}  // namespace

ErrorAnalysis error_analysis(const CvReport& report,
                             const std::vector<corpus::ArticleRecord>& records,
                             int window_months) {
    std::map<std::string, const corpus::ArticleRecord*> by_pmid;
    for (const auto& rec : records) by_pmid[rec.pmid] = &rec;

    std::set<std::string> wrong;
    for (const auto& item : report.misclassified) wrong.insert(item.pmid);

    std::vector<const corpus::ArticleRecord*> correct_cohort, wrong_cohort;
    for (const auto& item : report.scored) {
        auto it = by_pmid.find(item.pmid);
        if (it == by_pmid.end()) continue;
        (wrong.count(item.pmid) ? wrong_cohort : correct_cohort).push_back(it->second);
    }

    ErrorAnalysis out;
    out.correct = ranked_major_mesh(correct_cohort);
    out.misclassified = ranked_major_mesh(wrong_cohort);

    for (const auto& item : report.misclassified) {
        MisclassifiedExample ex;
        ex.pmid = item.pmid;
        ex.truth = item.truth;
        ex.predicted = item.score >= 0.5 ? 1 : 0;
        ex.score = item.score;
        auto it = by_pmid.find(item.pmid);
        if (it != by_pmid.end()) {
            auto windowed = corpus::window_citances(*it->second, window_months);
            for (std::size_t i = 0; i < windowed.size() && i < 2; ++i)
                ex.citances.push_back(windowed[i].text);
        }
        out.examples.push_back(std::move(ex));
    }
    return out;
}

namespace {

double median_of(std::vector<double> values) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

ClassStats stats_for(const std::vector<const corpus::ArticleRecord*>& cohort, int anchor_year,
                     int window_months) {
    ClassStats stats;
    stats.n = static_cast<int>(cohort.size());

    std::map<std::string, int> buckets;
    std::map<std::string, int> journals;
    std::vector<double> rec_counts, cit_counts;
    for (const corpus::ArticleRecord* rec : cohort) {
        if (rec->pub_date) {
            int offset = (rec->pub_date->year - anchor_year) / 4;
            int lo = anchor_year + offset * 4;
            buckets[std::to_string(lo) + "-" + std::to_string(lo + 3)] += 1;
        } else {
            buckets["unknown"] += 1;
        }
        if (!rec->journal.empty()) journals[rec->journal] += 1;
        rec_counts.push_back(static_cast<double>(rec->recommendations.size()));
        double windowed = 0;
        if (rec->pub_date)
            windowed = static_cast<double>(corpus::window_citances(*rec, window_months).size());
        cit_counts.push_back(windowed);
    }

    stats.year_buckets.assign(buckets.begin(), buckets.end());
    for (const auto& [journal, count] : journals) stats.journals.push_back({journal, count});
    std::sort(stats.journals.begin(), stats.journals.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });

    stats.mean_recommendations =
        rec_counts.empty() ? 0
                           : std::accumulate(rec_counts.begin(), rec_counts.end(), 0.0) /
                                 static_cast<double>(rec_counts.size());
    stats.median_recommendations = median_of(rec_counts);
    stats.mean_citances = cit_counts.empty()
                              ? 0
                              : std::accumulate(cit_counts.begin(), cit_counts.end(), 0.0) /
                                    static_cast<double>(cit_counts.size());
    stats.median_citances = median_of(cit_counts);
    return stats;
}

}  // namespace

DescriptiveStats descriptive_stats(const std::vector<corpus::ArticleRecord>& records,
                                   int window_months) {
    std::vector<const corpus::ArticleRecord*> incremental, transformative;
    int anchor_year = 0;
    for (const auto& rec : records) {
        corpus::Label label = corpus::assign_label(rec.recommendations);
        if (label.is_excluded()) continue;
        (label.is_transformative() ? transformative : incremental).push_back(&rec);
        if (rec.pub_date && (anchor_year == 0 || rec.pub_date->year < anchor_year))
            anchor_year = rec.pub_date->year;
    }
    if (incremental.empty() || transformative.empty())
        throw Error(ErrorKind::SingleClass, "descriptive stats need both classes");

    DescriptiveStats out;
    out.incremental = stats_for(incremental, anchor_year, window_months);
    out.transformative = stats_for(transformative, anchor_year, window_months);
    return out;
}

void emit_roc(const CvReport& report, const std::string& csv_path, const std::string& svg_path) {
    // Group held-out items per fold, ordered by descending score (pmid breaks
    // ties) so two runs emit identical bytes.
    std::vector<std::vector<const ScoredItem*>> folds(report.k);
    for (const auto& item : report.scored) folds[item.fold].push_back(&item);
    for (auto& fold : folds)
        std::sort(fold.begin(), fold.end(), [](const ScoredItem* a, const ScoredItem* b) {
            if (a->score != b->score) return a->score > b->score;
            return a->pmid < b->pmid;
        });

    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw Error(ErrorKind::IoError, "cannot open " + csv_path + " for writing");
    csv << "fold,fpr,tpr\n";

    std::vector<std::vector<std::pair<double, double>>> curves;
    char buf[64];
    for (int f = 0; f < report.k; ++f) {
        double n_pos = 0, n_neg = 0;
        for (const ScoredItem* item : folds[f]) (item->truth ? n_pos : n_neg) += 1;
        std::vector<std::pair<double, double>> curve{{0.0, 0.0}};
        double tp = 0, fp = 0;
        csv << f << ",0.000000,0.000000\n";
        for (const ScoredItem* item : folds[f]) {
            (item->truth ? tp : fp) += 1;
            double fpr = n_neg > 0 ? fp / n_neg : 0.0;
            double tpr = n_pos > 0 ? tp / n_pos : 0.0;
            std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", f, fpr, tpr);
            csv << buf;
            curve.emplace_back(fpr, tpr);
        }
        curves.push_back(std::move(curve));
    }
    if (!csv) throw Error(ErrorKind::IoError, "write failed: " + csv_path);

    static const char* palette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    const double size = 440.0, margin = 50.0;
    auto px = [&](double v) { return margin + v * size; };
    auto py = [&](double v) { return margin + (1.0 - v) * size; };

    std::ofstream svg(svg_path, std::ios::binary | std::ios::trunc);
    if (!svg) throw Error(ErrorKind::IoError, "cannot open " + svg_path + " for writing");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"540\" height=\"540\" "
           "viewBox=\"0 0 540 540\">\n";
    svg << "<rect x=\"50\" y=\"50\" width=\"440\" height=\"440\" fill=\"white\" "
           "stroke=\"black\"/>\n";
    svg << "<line x1=\"50\" y1=\"490\" x2=\"490\" y2=\"50\" stroke=\"#999999\" "
           "stroke-dasharray=\"6,4\"/>\n";
    for (std::size_t f = 0; f < curves.size(); ++f) {
        svg << "<polyline fill=\"none\" stroke=\"" << palette[f % 10]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : curves[f]) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x), py(y));
            svg << buf;
        }
        svg << "\"/>\n";
    }
    svg << "<text x=\"250\" y=\"525\" font-size=\"14\">false positive rate</text>\n";
    svg << "<text x=\"18\" y=\"290\" font-size=\"14\" transform=\"rotate(-90 18 290)\">"
           "true positive rate</text>\n";
    std::snprintf(buf, sizeof(buf), "%.3f", report.auc_avg);
    svg << "<text x=\"300\" y=\"470\" font-size=\"14\">mean AUC " << buf << "</text>\n";
    svg << "</svg>\n";
    if (!svg) throw Error(ErrorKind::IoError, "write failed: " + svg_path);
}

void write_report_json(const CvReport& report, const std::string& path) {
    json j;
    j["cell"] = {{"source", features::source_name(report.cell.source)},
                 {"mode", features::mode_name(report.cell.mode)},
                 {"classifier", models::kind_name(report.cell.classifier)}};
    j["k"] = report.k;
    j["seed"] = report.seed;
    j["fold_aucs"] = report.fold_aucs;
    j["auc_avg"] = report.auc_avg;
    j["auc_min"] = report.auc_min;
    j["auc_max"] = report.auc_max;
    if (report.auc_merge) j["auc_merge"] = *report.auc_merge;
    j["n_total"] = report.n_total;
    j["n_labeled"] = report.n_labeled;
    j["n_used"] = report.n_used;
    j["fingerprint"] = report.fingerprint;
    j["elapsed_seconds"] = report.elapsed_seconds;
    j["scored"] = json::array();
    for (const auto& item : report.scored)
        j["scored"].push_back({{"pmid", item.pmid},
                               {"truth", item.truth},
                               {"score", item.score},
                               {"fold", item.fold}});
    j["misclassified"] = json::array();
    for (const auto& item : report.misclassified)
        j["misclassified"].push_back({{"pmid", item.pmid},
                                      {"truth", item.truth},
                                      {"score", item.score},
                                      {"fold", item.fold}});

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

CvReport read_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, "report " + path + ": " + e.what());
    }

    CvReport report;
    try {
        report.cell.source = features::parse_source(j.at("cell").at("source").get<std::string>());
        report.cell.mode = features::parse_mode(j.at("cell").at("mode").get<std::string>());
        report.cell.classifier =
            models::parse_kind(j.at("cell").at("classifier").get<std::string>());
        report.k = j.at("k").get<int>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.fold_aucs = j.at("fold_aucs").get<std::vector<double>>();
        report.auc_avg = j.at("auc_avg").get<double>();
        report.auc_min = j.at("auc_min").get<double>();
        report.auc_max = j.at("auc_max").get<double>();
        if (j.contains("auc_merge")) report.auc_merge = j.at("auc_merge").get<double>();
        report.n_total = j.at("n_total").get<int>();
        report.n_labeled = j.at("n_labeled").get<int>();
        report.n_used = j.at("n_used").get<int>();
        report.fingerprint = j.at("fingerprint").get<std::string>();
        report.elapsed_seconds = j.at("elapsed_seconds").get<double>();
        for (const auto& item : j.at("scored"))
            report.scored.push_back({item.at("pmid").get<std::string>(),
                                     item.at("truth").get<int>(),
                                     item.at("score").get<double>(),
                                     item.at("fold").get<int>()});
        for (const auto& item : j.at("misclassified"))
            report.misclassified.push_back({item.at("pmid").get<std::string>(),
                                            item.at("truth").get<int>(),
                                            item.at("score").get<double>(),
                                            item.at("fold").get<int>()});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, "report " + path + ": " + e.what());
    }
    return report;
}

}  // namespace evidencer::pipeline
