// evidencer: transformative-vs-incremental clinical study classification.
//
// Subcommands: ingest (PubMed/Colil acquisition), annotate (expert-tag
// labeling), featurize (matrix export), evaluate (cross-validated AUC over
// the vectorizer/source/classifier grid), report (MeSH and stats tables).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "evidencer/acquire.hpp"
#include "evidencer/corpus.hpp"
#include "evidencer/pipeline.hpp"

using namespace evidencer;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTransport = 3;

struct TextOptions {
    std::string lexicon_path = "data/vader_lexicon.txt";
    std::string tagger_model_path;  // pre-trained model file, optional
    std::string tagged_corpus_path = "data/pos/train.txt";
};

void add_text_options(CLI::App* cmd, TextOptions& opts) {
    cmd->add_option("--lexicon", opts.lexicon_path,
                    "valence lexicon file (env EVIDENCER_LEXICON)")
        ->envname("EVIDENCER_LEXICON")
        ->capture_default_str();
    cmd->add_option("--tagger-model", opts.tagger_model_path,
                    "pre-trained tagger model file; otherwise the tagger is trained "
                    "from --tagged-corpus");
    cmd->add_option("--tagged-corpus", opts.tagged_corpus_path,
                    "tagged sentences (token_TAG) for tagger training")
        ->capture_default_str();
}

lingua::TaggerModel load_or_train_tagger(const TextOptions& opts) {
    if (!opts.tagger_model_path.empty()) return lingua::load_tagger(opts.tagger_model_path);
    return lingua::train_tagger(lingua::read_tagged_file(opts.tagged_corpus_path));
}

std::vector<std::string> read_pmids(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::vector<std::string> pmids;
    std::string line;
    while (std::getline(in, line)) {
        std::string token;
        std::istringstream iss(line);
        if (!(iss >> token) || token[0] == '#') continue;
        pmids.push_back(token);
    }
    return pmids;
}

// pmid -> recommendations, parsed from a JSONL tag file.
std::map<std::string, std::vector<corpus::ExpertRecommendation>> read_tags(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::map<std::string, std::vector<corpus::ExpertRecommendation>> tags;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError,
                        "tags line " + std::to_string(line_number) + ": " + e.what());
        }
        std::string pmid = j.at("pmid").get<std::string>();
        std::vector<corpus::ExpertRecommendation> recs;
        for (const auto& r : j.at("recommendations")) {
            corpus::ExpertRecommendation er;
            er.expert_id = r.at("expert_id").get<std::string>();
            for (const auto& t : r.at("tags"))
                er.tags.push_back(corpus::parse_tag(t.get<std::string>()));
            if (er.tags.empty())
                throw Error(ErrorKind::SchemaError,
                            "tags line " + std::to_string(line_number) + ": empty tags");
            if (r.contains("date") && r.at("date").is_string() &&
                !r.at("date").get<std::string>().empty())
                er.date = parse_date(r.at("date").get<std::string>());
            recs.push_back(std::move(er));
        }
        tags[pmid] = std::move(recs);
    }
    return tags;
}

int run_ingest(const std::string& pmids_path, const std::string& out_path,
               const std::string& fixtures_dir, const std::string& tags_path,
               acquire::FetchConfig config, bool clinical_only) {
    auto pmids = read_pmids(pmids_path);
    std::map<std::string, std::vector<corpus::ExpertRecommendation>> tags;
    if (!tags_path.empty()) tags = read_tags(tags_path);

    std::unique_ptr<acquire::HttpClient> http =
        fixtures_dir.empty() ? acquire::make_default_http_client(config.timeout_seconds)
                             : acquire::make_fixture_http_client(fixtures_dir);
    auto clock = acquire::make_steady_clock();
    acquire::Fetcher fetcher(config, *http, *clock);

    std::vector<corpus::ArticleRecord> records;
    int missing = 0, dropped_dateless = 0, nonclinical = 0;
    for (const auto& pmid : pmids) {
        corpus::ArticleRecord rec;
        try {
            rec = fetcher.fetch_article(pmid);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotFound) {
                std::fprintf(stderr, "warning: pmid %s not found, skipped\n", pmid.c_str());
                ++missing;
                continue;
            }
            throw;
        }
        acquire::CitanceFetch cits = fetcher.fetch_citances(pmid);
        rec.citances = std::move(cits.citances);
        dropped_dateless += cits.dropped_missing_date;
        if (auto it = tags.find(pmid); it != tags.end()) rec.recommendations = it->second;
        if (clinical_only && !corpus::is_clinical(rec)) {
            ++nonclinical;
            continue;
        }
        records.push_back(std::move(rec));
    }
    acquire::save_corpus(records, out_path);
    std::printf("ingested %zu articles (%d not found, %d non-clinical dropped, "
                "%d dateless citances dropped) -> %s\n",
                records.size(), missing, nonclinical, dropped_dateless, out_path.c_str());
    return kExitOk;
}

int run_annotate(const std::string& in_path, const std::string& out_path, bool drop_excluded) {
    auto records = acquire::load_corpus(in_path);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + out_path + " for writing");

    int labeled = 0, conflict = 0, insufficient = 0, untagged = 0;
    for (const auto& rec : records) {
        corpus::Label label = corpus::assign_label(rec.recommendations);
        if (!label.is_excluded()) ++labeled;
        else if (label.reason == corpus::ExclusionReason::Conflict) ++conflict;
        else if (label.reason == corpus::ExclusionReason::InsufficientExperts) ++insufficient;
        else ++untagged;
        if (drop_excluded && label.is_excluded()) continue;

        auto j = nlohmann::ordered_json::parse(acquire::record_to_json(rec));
        j["label"] = corpus::label_name(label);
        out << j.dump() << "\n";
    }
    std::printf("annotated %zu records: %d labeled, %d conflict, %d single-expert, "
                "%d without labeling tags -> %s\n",
                records.size(), labeled, conflict, insufficient, untagged, out_path.c_str());
    return kExitOk;
}

int run_featurize(const std::string& in_path, const std::string& out_dir,
                  const std::string& source_name, const std::string& mode_name,
                  pipeline::PipelineOptions options, const TextOptions& text_opts) {
    auto records = acquire::load_corpus(in_path);
    auto tagger = load_or_train_tagger(text_opts);
    auto lexicon = sentiment::load_lexicon(text_opts.lexicon_path);

    features::TextSource source = features::parse_source(source_name);
    features::VectorizerMode mode = features::parse_mode(mode_name);

    pipeline::PrepareResult prep =
        pipeline::prepare_docs(records, source, options, tagger, lexicon);
    if (prep.docs.empty()) throw Error(ErrorKind::EmptyCorpus, "no usable documents");

    std::vector<features::TermCounts> terms;
    for (const auto& d : prep.docs) terms.push_back(d.terms);
    features::Vocabulary vocab = features::fit_vocabulary(terms, options.min_df);

    std::vector<features::FeatureVector> rows;
    for (const auto& d : prep.docs) {
        features::FeatureVector fv;
        fv.ngram_block = features::transform(d.terms, vocab, mode);
        fv.pos_block = d.pos_block;
        fv.compound = d.compound;
        rows.push_back(std::move(fv));
    }

    fs::create_directories(out_dir);
    features::export_matrix(rows, vocab, tagger.tagset, out_dir + "/matrix.txt",
                            out_dir + "/vocabulary.tsv");
    std::ofstream rows_file(out_dir + "/rows.tsv", std::ios::binary | std::ios::trunc);
    for (std::size_t i = 0; i < prep.docs.size(); ++i)
        rows_file << i << '\t' << prep.docs[i].pmid << '\t' << prep.docs[i].label << '\n';

    std::printf("featurized %d/%d records (%s, %s): %d n-gram columns + %zu pos + 1 -> %s\n",
                prep.n_used, prep.n_total, source_name.c_str(), mode_name.c_str(), vocab.size(),
                tagger.tagset.size(), out_dir.c_str());
    return kExitOk;
}

void write_importances(const std::vector<models::FeatureImportance>& imp,
                       const std::string& path, std::size_t top_n) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << "rank\tfeature\tmean_importance\tstd\n";
    char buf[160];
    for (std::size_t i = 0; i < imp.size() && i < top_n; ++i) {
        std::snprintf(buf, sizeof(buf), "%zu\t%s\t%.6f\t%.6f\n", i + 1, imp[i].name.c_str(),
                      imp[i].mean, imp[i].std_dev);
        out << buf;
    }
}

int run_evaluate(const std::string& in_path, const std::string& report_dir,
                 const std::string& grid_kind, const std::string& source_name,
                 const std::string& mode_name, const std::string& classifier_name,
                 pipeline::PipelineOptions options, const TextOptions& text_opts) {
    auto records = acquire::load_corpus(in_path);
    auto tagger = load_or_train_tagger(text_opts);
    auto lexicon = sentiment::load_lexicon(text_opts.lexicon_path);

    std::vector<pipeline::CellConfig> cells;
    if (grid_kind == "full") {
        cells = pipeline::full_grid();
    } else if (grid_kind == "cell") {
        pipeline::CellConfig cell;
        cell.source = features::parse_source(source_name);
        cell.mode = features::parse_mode(mode_name);
        cell.classifier = models::parse_kind(classifier_name);
        cells.push_back(cell);
    } else {
        throw Error(ErrorKind::Validation, "--grid must be 'full' or 'cell'");
    }

    fs::create_directories(report_dir);
    for (const auto& cell : cells) {
        pipeline::CellOutcome outcome =
            pipeline::evaluate_cell(records, cell, options, tagger, lexicon);
        const pipeline::CvReport& report = outcome.report;

        std::string cell_dir = report_dir + "/" + pipeline::cell_name(cell);
        fs::create_directories(cell_dir);
        pipeline::write_report_json(report, cell_dir + "/report.json");
        pipeline::emit_roc(report, cell_dir + "/roc.csv", cell_dir + "/roc.svg");
        write_importances(outcome.importances, cell_dir + "/importances.tsv", 50);

        if (report.auc_merge) {
            std::printf("%-36s auc_avg %.3f (%.3f-%.3f)  merge %.3f  used %d/%d  %.1fs\n",
                        pipeline::cell_name(cell).c_str(), report.auc_avg, report.auc_min,
                        report.auc_max, *report.auc_merge, report.n_used, report.n_total,
                        report.elapsed_seconds);
        } else {
            std::printf("%-36s auc_avg %.3f (%.3f-%.3f)  used %d/%d  %.1fs\n",
                        pipeline::cell_name(cell).c_str(), report.auc_avg, report.auc_min,
                        report.auc_max, report.n_used, report.n_total, report.elapsed_seconds);
        }
    }
    return kExitOk;
}

int run_report(const std::string& in_path, const std::string& report_dir,
               const std::string& cell, const std::string& tables, bool roc,
               int window_months) {
    auto records = acquire::load_corpus(in_path);
    std::string cell_dir = report_dir + "/" + cell;
    pipeline::CvReport report = pipeline::read_report_json(cell_dir + "/report.json");

    bool want_mesh = tables.find("mesh") != std::string::npos;
    bool want_stats = tables.find("stats") != std::string::npos;

    if (want_mesh) {
        pipeline::ErrorAnalysis ea = pipeline::error_analysis(report, records, window_months);
        std::ofstream mesh(cell_dir + "/mesh.csv", std::ios::binary | std::ios::trunc);
        mesh << "cohort,term,count\n";
        for (const auto& row : ea.correct)
            mesh << "correct,\"" << row.term << "\"," << row.count << "\n";
        for (const auto& row : ea.misclassified)
            mesh << "misclassified,\"" << row.term << "\"," << row.count << "\n";

        std::ofstream examples(cell_dir + "/misclassified.tsv",
                               std::ios::binary | std::ios::trunc);
        examples << "pmid\ttruth\tpredicted\tscore\tcitance\n";
        char buf[32];
        for (const auto& ex : ea.examples) {
            std::snprintf(buf, sizeof(buf), "%.4f", ex.score);
            examples << ex.pmid << '\t' << ex.truth << '\t' << ex.predicted << '\t' << buf
                     << '\t' << (ex.citances.empty() ? "" : ex.citances[0]) << '\n';
        }
        std::printf("mesh tables: %zu correct terms, %zu misclassified terms -> %s\n",
                    ea.correct.size(), ea.misclassified.size(),
                    (cell_dir + "/mesh.csv").c_str());
    }

    if (want_stats) {
        pipeline::DescriptiveStats stats = pipeline::descriptive_stats(records, window_months);
        std::ofstream out(cell_dir + "/stats.csv", std::ios::binary | std::ios::trunc);
        out << "class,metric,key,value\n";
        auto dump = [&](const char* cls, const pipeline::ClassStats& s) {
            out << cls << ",count,," << s.n << "\n";
            for (const auto& [bucket, n] : s.year_buckets)
                out << cls << ",year_bucket," << bucket << "," << n << "\n";
            for (std::size_t i = 0; i < s.journals.size() && i < 10; ++i)
                out << cls << ",journal,\"" << s.journals[i].first << "\","
                    << s.journals[i].second << "\n";
            out << cls << ",recommendations_mean,," << s.mean_recommendations << "\n";
            out << cls << ",recommendations_median,," << s.median_recommendations << "\n";
            out << cls << ",citances_mean,," << s.mean_citances << "\n";
            out << cls << ",citances_median,," << s.median_citances << "\n";
        };
        dump("incremental", stats.incremental);
        dump("transformative", stats.transformative);
        std::printf("descriptive stats -> %s\n", (cell_dir + "/stats.csv").c_str());
    }

    if (roc) {
        pipeline::emit_roc(report, cell_dir + "/roc.csv", cell_dir + "/roc.svg");
        std::printf("roc -> %s\n", (cell_dir + "/roc.csv").c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transformative vs incremental clinical evidence classifier"};
    app.set_config("--config", "", "key=value config file; command-line flags win");
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "fetch abstracts and citing sentences");
    std::string pmids_path, ingest_out, fixtures_dir, tags_path;
    acquire::FetchConfig fetch_config = acquire::config_from_env();
    std::string api_key;
    bool clinical_only = false;
    ingest->add_option("--pmids", pmids_path, "file with one pmid per line")->required();
    ingest->add_option("--out", ingest_out, "output corpus jsonl")->required();
    ingest->add_option("--fixtures", fixtures_dir,
                       "serve responses from a fixture directory instead of the network");
    ingest->add_option("--tags", tags_path, "jsonl with expert recommendations per pmid");
    ingest->add_option("--eutils-url", fetch_config.eutils_base_url, "E-utilities base url")
        ->capture_default_str();
    ingest->add_option("--colil-url", fetch_config.colil_endpoint_url, "Colil SPARQL endpoint")
        ->capture_default_str();
    ingest->add_option("--api-key", api_key, "NCBI api key (env EVIDENCER_EUTILS_KEY)");
    ingest->add_option("--rate", fetch_config.rate_limit, "requests per second (0 = default)");
    ingest->add_option("--retries", fetch_config.retries, "retries on 429/5xx")
        ->capture_default_str();
    ingest->add_option("--timeout", fetch_config.timeout_seconds, "request timeout seconds")
        ->capture_default_str();
    ingest->add_flag("--clinical-only", clinical_only,
                     "drop records failing the clinical filter");

    // annotate
    auto* annotate = app.add_subcommand("annotate", "assign transformative/incremental labels");
    std::string annotate_in, annotate_out;
    bool drop_excluded = false;
    annotate->add_option("--in", annotate_in, "corpus jsonl")->required();
    annotate->add_option("--out", annotate_out, "labeled jsonl")->required();
    annotate->add_flag("--drop-excluded", drop_excluded,
                       "omit excluded records from the output");

    // shared modeling options
    pipeline::PipelineOptions options;
    TextOptions text_opts;
    auto add_model_options = [&](CLI::App* cmd) {
        cmd->add_option("--window-months", options.window_months, "citation window")
            ->capture_default_str();
        cmd->add_option("--min-df", options.min_df, "minimum document frequency")
            ->capture_default_str();
        cmd->add_option("--ngram-min", options.n_min)->capture_default_str();
        cmd->add_option("--ngram-max", options.n_max)->capture_default_str();
        cmd->add_flag("--pos-counts", options.pos_counts,
                      "use raw POS tag counts instead of relative frequencies");
        cmd->add_flag("--but-clause", options.sentiment.but_clause,
                      "enable the but-clause sentiment rule");
        cmd->add_flag("--sentence-average", options.sentiment.per_sentence_average,
                      "average per-sentence compound scores instead of whole-text scoring");
        add_text_options(cmd, text_opts);
    };

    // featurize
    auto* featurize = app.add_subcommand("featurize", "export the feature matrix");
    std::string feat_in, feat_dir, feat_source = "citances", feat_mode = "count";
    featurize->add_option("--in", feat_in, "labeled corpus jsonl")->required();
    featurize->add_option("--source", feat_source, "citances|abstract|both")
        ->capture_default_str();
    featurize->add_option("--mode", feat_mode, "count|tfidf")->capture_default_str();
    featurize->add_option("--out-dir", feat_dir, "output directory")->required();
    add_model_options(featurize);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "cross-validated AUC over the grid");
    std::string eval_in, eval_report = "reports", eval_grid = "cell";
    std::string eval_source = "citances", eval_mode = "count", eval_classifier = "rf";
    evaluate->add_option("--in", eval_in, "labeled corpus jsonl")->required();
    evaluate->add_option("--grid", eval_grid, "full|cell")->capture_default_str();
    evaluate->add_option("--source", eval_source, "citances|abstract|both (grid=cell)")
        ->capture_default_str();
    evaluate->add_option("--mode", eval_mode, "count|tfidf (grid=cell)")->capture_default_str();
    evaluate->add_option("--classifier", eval_classifier, "rf|ada|gbt (grid=cell)")
        ->capture_default_str();
    evaluate->add_option("--k", options.k, "number of folds")->capture_default_str();
    evaluate->add_option("--seed", options.seed, "master seed")->capture_default_str();
    evaluate->add_option("--report", eval_report, "report output directory")
        ->capture_default_str();
    evaluate->add_flag("--merge-auc", options.merge_auc,
                       "also pool fold scores into a single merged AUC");
    evaluate->add_option("--trees", options.model.n_trees, "ensemble size")
        ->capture_default_str();
    evaluate->add_option("--learning-rate", options.model.learning_rate, "boosting shrinkage")
        ->capture_default_str();
    evaluate->add_option("--max-depth", options.model.max_depth,
                         "tree depth (0 = per-classifier default)")
        ->capture_default_str();
    evaluate->add_option("--max-features", options.model.max_features,
                         "features per split (0 = per-classifier default)")
        ->capture_default_str();
    add_model_options(evaluate);

    // report
    auto* report = app.add_subcommand("report", "mesh/stats tables and roc re-emission");
    std::string rep_in, rep_dir = "reports", rep_cell = "citances_count_random_forest";
    std::string rep_tables = "mesh,stats";
    bool rep_roc = false;
    int rep_window = 24;
    report->add_option("--in", rep_in, "labeled corpus jsonl")->required();
    report->add_option("--report", rep_dir, "report directory from evaluate")
        ->capture_default_str();
    report->add_option("--cell", rep_cell, "grid cell name")->capture_default_str();
    report->add_option("--tables", rep_tables, "comma list: mesh,stats")->capture_default_str();
    report->add_flag("--roc", rep_roc, "re-emit roc csv/svg");
    report->add_option("--window-months", rep_window, "citation window")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*ingest) {
            if (!api_key.empty()) fetch_config.api_key = api_key;
            return run_ingest(pmids_path, ingest_out, fixtures_dir, tags_path, fetch_config,
                              clinical_only);
        }
        if (*annotate) return run_annotate(annotate_in, annotate_out, drop_excluded);
        if (*featurize)
            return run_featurize(feat_in, feat_dir, feat_source, feat_mode, options, text_opts);
        if (*evaluate)
            return run_evaluate(eval_in, eval_report, eval_grid, eval_source, eval_mode,
                                eval_classifier, options, text_opts);
        if (*report)
            return run_report(rep_in, rep_dir, rep_cell, rep_tables, rep_roc, rep_window);
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", error_kind_name(e.kind()), e.what());
        return e.kind() == ErrorKind::Transport ? kExitTransport : kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
