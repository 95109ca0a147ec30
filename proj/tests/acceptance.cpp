// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evidencer/acquire.hpp"
#include "evidencer/features.hpp"
#include "evidencer/lingua.hpp"
#include "evidencer/models.hpp"
#include "evidencer/pipeline.hpp"
#include "evidencer/rng.hpp"
#include "evidencer/sentiment.hpp"
#include "evidencer/synth.hpp"

using namespace evidencer;

namespace {

const std::string kData = EVIDENCER_DATA_DIR;
const std::string kFixtures = EVIDENCER_FIXTURE_DIR "/net";

int g_failures_in_criterion = 0;

#define CHECK_THAT(cond, ...)                                        \
    do {                                                             \
        if (!(cond)) {                                               \
            ++g_failures_in_criterion;                               \
            std::printf("    check failed: " __VA_ARGS__);           \
            std::printf("  [%s:%d]\n", __FILE__, __LINE__);          \
        }                                                            \
    } while (0)

const lingua::TaggerModel& tagger() {
    static auto model = lingua::train_tagger(lingua::read_tagged_file(kData + "/pos/train.txt"));
    return model;
}

const sentiment::SentimentLexicon& lexicon() {
    static auto lex = sentiment::load_lexicon(kData + "/vader_lexicon.txt");
    return lex;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// ---------------------------------------------------------------------------
// 1. AUC oracle equivalence
// ---------------------------------------------------------------------------

double auc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            pairs += 1;
            if (scores[i] > scores[j]) concordant += 1;
            else if (scores[i] == scores[j]) concordant += 0.5;
        }
    }
    return concordant / pairs;
}

void criterion_auc_oracle() {
    const double t0 = now_seconds();
    Rng rng(101);
    int exact = 0;
    const int sets = 1000;
    for (int s = 0; s < sets; ++s) {
        int n = 2 + static_cast<int>(rng.uniform_int(499));
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        // Every third set quantizes scores hard, forcing heavy ties.
        int levels = (s % 3 == 0) ? 4 : 1000;
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.uniform_int(levels)) /
                        static_cast<double>(levels - 1 ? levels - 1 : 1);
            labels[i] = static_cast<int>(rng.uniform_int(2));
            (labels[i] ? has1 : has0) = true;
        }
        if (!has0) labels[0] = 0;
        if (!has1) labels[n - 1] = 1;
        double fast = pipeline::roc_auc(scores, labels);
        double slow = auc_bruteforce(scores, labels);
        if (fast == slow) ++exact;
    }
    const double elapsed = now_seconds() - t0;
    CHECK_THAT(exact == sets, "rank AUC matched brute force on %d/%d sets", exact, sets);
    CHECK_THAT(elapsed < 5.0, "runtime %.2fs exceeds 5s", elapsed);
    std::printf("    (%d sets, %.2fs)\n", sets, elapsed);
}

// ---------------------------------------------------------------------------
// 2. TF-IDF exactness
// ---------------------------------------------------------------------------

void criterion_tfidf_exactness() {
    features::TermCounts d1 = {{"shared", 2}, {"pair", 3}, {"solo", 1}};
    features::TermCounts d2 = {{"shared", 5}, {"pair", 1}};
    features::TermCounts d3 = {{"shared", 1}, {"uniq", 4}};
    std::vector<features::TermCounts> docs = {d1, d2, d3};
    features::Vocabulary vocab = features::fit_vocabulary(docs, 1);

    for (const auto& doc : docs) {
        auto sparse = features::transform(doc, vocab, features::VectorizerMode::Tfidf);
        std::vector<double> dense(vocab.size(), 0.0);
        for (auto& [i, v] : sparse.entries) dense[i] = v;
        for (int i = 0; i < vocab.size(); ++i) {
            auto it = doc.find(vocab.terms[i]);
            double tf = it == doc.end() ? 0.0 : static_cast<double>(it->second);
            double expected = tf * std::log(3.0 / static_cast<double>(vocab.df[i]));
            CHECK_THAT(std::fabs(dense[i] - expected) <= 1e-9,
                       "entry %s: got %.12f want %.12f", vocab.terms[i].c_str(), dense[i],
                       expected);
        }
    }

    // A term present in all documents weighs exactly zero.
    auto everywhere = features::transform(d1, vocab, features::VectorizerMode::Tfidf);
    int shared_col = vocab.index.at("shared");
    for (auto& [i, v] : everywhere.entries)
        CHECK_THAT(i != shared_col, "all-document term has non-zero weight %.17g", v);
}

// ---------------------------------------------------------------------------
// 3. Table 1 feature reproduction
// ---------------------------------------------------------------------------

void criterion_table1() {
    const std::string s1 =
        "This is supported by the recent AspECT clinical trial which found aspirin intake may "
        "have chemopreventative effects in Barrett's patients.";
    const std::string s2 =
        "However, despite these data, evidence to suggest failure in secondary prevention of "
        "CRC by total colonoscopy and polypectomy is emerging.";

    auto g1 = features::extract_ngrams_text(s1);
    for (const char* g :
         {"this", "is", "supported", "by", "the", "recent", "aspect", "clinical", "trial",
          "this is", "is supported", "supported by", "by the", "the recent", "recent aspect",
          "aspect clinical", "clinical trial", "this is supported", "is supported by",
          "supported by the", "by the recent", "the recent aspect", "recent aspect clinical",
          "aspect clinical trial", "clinical trial which"})
        CHECK_THAT(g1.count(g) == 1, "sentence 1 missing n-gram '%s'", g);

    auto g2 = features::extract_ngrams_text(s2);
    for (const char* g :
         {"however", "despite", "these", "data", "evidence", "to", "suggest", "failure", "in",
          "secondary", "however despite", "despite these", "these data", "data evidence",
          "evidence to", "to suggest", "suggest failure", "however despite these",
          "despite these data", "these data evidence", "data evidence to"})
        CHECK_THAT(g2.count(g) == 1, "sentence 2 missing n-gram '%s'", g);

    sentiment::PolarityScores p1 = sentiment::score(s1, lexicon());
    sentiment::PolarityScores p2 = sentiment::score(s2, lexicon());
    CHECK_THAT(std::fabs(p1.compound - 0.3182) <= 0.02, "s1 compound %.4f vs 0.3182",
               p1.compound);
    CHECK_THAT(std::fabs(p2.compound - (-0.5106)) <= 0.02, "s2 compound %.4f vs -0.5106",
               p2.compound);

    sentiment::ScoreOptions with_but;
    with_but.but_clause = true;
    CHECK_THAT(std::fabs(sentiment::compound_of(s1, lexicon(), with_but) - 0.3182) <= 0.005,
               "s1 compound (but rule) outside 0.005");
    CHECK_THAT(std::fabs(sentiment::compound_of(s2, lexicon(), with_but) - (-0.5106)) <= 0.005,
               "s2 compound (but rule) outside 0.005");
    std::printf("    (compound %.4f / %.4f)\n", p1.compound, p2.compound);
}

// ---------------------------------------------------------------------------
// 4. Labeling rules over every branch, with permutation invariance
// ---------------------------------------------------------------------------

void criterion_labeling() {
    using corpus::ExpertRecommendation;
    using corpus::Label;
    using corpus::RecommendationTag;
    namespace cp = corpus;

    struct Case {
        std::vector<ExpertRecommendation> recs;
        cp::Label expected;
    };
    const RecommendationTag t_tags[] = {RecommendationTag::Refutation,
                                        RecommendationTag::ChangesClinicalPractice,
                                        RecommendationTag::Controversial};
    const RecommendationTag noise[] = {RecommendationTag::GoodForTeaching,
                                       RecommendationTag::NewFinding,
                                       RecommendationTag::InterestingHypothesis,
                                       RecommendationTag::NovelDrugTarget,
                                       RecommendationTag::TechnicalAdvance};

    std::vector<Case> cases;
    Rng rng(404);
    auto expert = [](int i) { return "e" + std::to_string(i); };
    int e = 0;
    while (cases.size() < 50) {
        int branch = static_cast<int>(cases.size()) % 5;
        Case c;
        switch (branch) {
            case 0: {  // clean transformative: >=2 experts with T tags
                int n = 2 + static_cast<int>(rng.uniform_int(3));
                for (int i = 0; i < n; ++i) {
                    std::vector<RecommendationTag> tags{t_tags[rng.uniform_int(3)]};
                    if (rng.uniform_int(2)) tags.push_back(noise[rng.uniform_int(5)]);
                    c.recs.push_back({expert(e++), tags, std::nullopt});
                }
                c.expected = Label::transformative();
                break;
            }
            case 1: {  // clean incremental
                int n = 2 + static_cast<int>(rng.uniform_int(2));
                for (int i = 0; i < n; ++i) {
                    std::vector<RecommendationTag> tags{RecommendationTag::Confirmation};
                    if (rng.uniform_int(2)) tags.push_back(noise[rng.uniform_int(5)]);
                    c.recs.push_back({expert(e++), tags, std::nullopt});
                }
                c.expected = Label::incremental();
                break;
            }
            case 2: {  // conflict: both tag sets appear somewhere
                if (rng.uniform_int(2)) {
                    c.recs.push_back({expert(e++),
                                      {RecommendationTag::Confirmation, t_tags[rng.uniform_int(3)]},
                                      std::nullopt});
                } else {
                    c.recs.push_back({expert(e++), {RecommendationTag::Confirmation}, std::nullopt});
                    c.recs.push_back({expert(e++), {t_tags[rng.uniform_int(3)]}, std::nullopt});
                    c.recs.push_back({expert(e++), {RecommendationTag::Confirmation}, std::nullopt});
                }
                c.expected = Label::excluded(cp::ExclusionReason::Conflict);
                break;
            }
            case 3: {  // single expert only (or one expert repeated)
                std::string one = expert(e++);
                c.recs.push_back({one, {t_tags[rng.uniform_int(3)]}, std::nullopt});
                if (rng.uniform_int(2))
                    c.recs.push_back({one, {t_tags[rng.uniform_int(3)]}, std::nullopt});
                c.expected = Label::excluded(cp::ExclusionReason::InsufficientExperts);
                break;
            }
            default: {  // no labeling tags at all
                int n = static_cast<int>(rng.uniform_int(3));
                for (int i = 0; i < n; ++i)
                    c.recs.push_back({expert(e++), {noise[rng.uniform_int(5)]}, std::nullopt});
                c.expected = Label::excluded(cp::ExclusionReason::NoLabelingTags);
                break;
            }
        }
        cases.push_back(std::move(c));
    }

    int wrong = 0;
    for (const auto& c : cases)
        if (!(cp::assign_label(c.recs) == c.expected)) ++wrong;
    CHECK_THAT(wrong == 0, "%d/50 fixture articles mislabeled", wrong);

    int permutation_breaks = 0;
    for (int shuffle = 0; shuffle < 100; ++shuffle) {
        const Case& c = cases[shuffle % cases.size()];
        auto recs = c.recs;
        rng.shuffle(recs);
        for (auto& r : recs) rng.shuffle(r.tags);
        if (!(cp::assign_label(recs) == c.expected)) ++permutation_breaks;
    }
    CHECK_THAT(permutation_breaks == 0, "%d/100 permutations changed a label",
               permutation_breaks);
}

// ---------------------------------------------------------------------------
// 5. Synthetic end-to-end experiment
// ---------------------------------------------------------------------------

void criterion_end_to_end() {
    const double t0 = now_seconds();

    synth::SynthConfig cfg;
    cfg.n_docs = 600;
    cfg.transformative_fraction = 0.45;  // 55/45 imbalance
    cfg.seed = 20240601;
    auto records = synth::generate_corpus(cfg);

    pipeline::PipelineOptions opt;
    opt.k = 10;
    opt.seed = 7;
    opt.model.n_trees = 200;

    pipeline::CellConfig citances_cell;  // citances + count + random forest

    pipeline::CellOutcome main_outcome =
        pipeline::evaluate_cell(records, citances_cell, opt, tagger(), lexicon());
    const pipeline::CvReport& main_report = main_outcome.report;
    CHECK_THAT(main_report.auc_avg >= 0.90, "citances AUC_avg %.3f below 0.90",
               main_report.auc_avg);

    // Label-shuffled control.
    auto shuffled = synth::shuffle_labels(records, 909);
    pipeline::CvReport null_report =
        pipeline::cross_validate(shuffled, citances_cell, opt, tagger(), lexicon());
    CHECK_THAT(null_report.auc_avg >= 0.40 && null_report.auc_avg <= 0.60,
               "shuffled control AUC_avg %.3f outside [0.40, 0.60]", null_report.auc_avg);

    // Source ordering: the signal lives in the citances only.
    pipeline::CellConfig abstract_cell;
    abstract_cell.source = features::TextSource::Abstract;
    pipeline::CvReport abstract_report =
        pipeline::cross_validate(records, abstract_cell, opt, tagger(), lexicon());
    pipeline::CellConfig both_cell;
    both_cell.source = features::TextSource::Both;
    pipeline::CvReport both_report =
        pipeline::cross_validate(records, both_cell, opt, tagger(), lexicon());
    CHECK_THAT(main_report.auc_avg > abstract_report.auc_avg,
               "AUC(citances)=%.3f not above AUC(abstract)=%.3f", main_report.auc_avg,
               abstract_report.auc_avg);
    CHECK_THAT(main_report.auc_avg > both_report.auc_avg,
               "AUC(citances)=%.3f not above AUC(both)=%.3f", main_report.auc_avg,
               both_report.auc_avg);
    CHECK_THAT(both_report.auc_avg > abstract_report.auc_avg,
               "AUC(both)=%.3f not above AUC(abstract)=%.3f", both_report.auc_avg,
               abstract_report.auc_avg);

    // Importance ranking: planted cue n-grams and POS tags in the top 20.
    const auto& imp = main_outcome.importances;
    bool cue_in_top = false, pos_in_top = false;
    for (std::size_t i = 0; i < imp.size() && i < 20; ++i) {
        if (imp[i].name == "however" || imp[i].name == "question" ||
            imp[i].name == "questioned" || imp[i].name == "not")
            cue_in_top = true;
        if (imp[i].name.rfind("__POS_", 0) == 0) pos_in_top = true;
    }
    CHECK_THAT(cue_in_top, "no planted cue unigram in the top-20 importances");
    CHECK_THAT(pos_in_top, "no POS column in the top-20 importances");

    const double elapsed = now_seconds() - t0;
    CHECK_THAT(elapsed < 60.0, "runtime %.1fs exceeds 60s", elapsed);
    std::printf("    (auc citances %.3f | both %.3f | abstract %.3f | shuffled %.3f; %.1fs)\n",
                main_report.auc_avg, both_report.auc_avg, abstract_report.auc_avg,
                null_report.auc_avg, elapsed);
}

// ---------------------------------------------------------------------------
// 6. Determinism of evaluate outputs
// ---------------------------------------------------------------------------

std::string file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    synth::SynthConfig cfg;
    cfg.n_docs = 140;
    cfg.seed = 515;
    auto records = synth::generate_corpus(cfg);

    pipeline::PipelineOptions opt;
    opt.k = 7;
    opt.seed = 3;
    opt.model.n_trees = 60;
    pipeline::CellConfig cell;

    auto tmp = std::filesystem::temp_directory_path();
    std::string csv1 = (tmp / "acc_roc1.csv").string(), svg1 = (tmp / "acc_roc1.svg").string();
    std::string csv2 = (tmp / "acc_roc2.csv").string(), svg2 = (tmp / "acc_roc2.svg").string();

    pipeline::CvReport a = pipeline::cross_validate(records, cell, opt, tagger(), lexicon());
    pipeline::emit_roc(a, csv1, svg1);
    pipeline::CvReport b = pipeline::cross_validate(records, cell, opt, tagger(), lexicon());
    pipeline::emit_roc(b, csv2, svg2);

    CHECK_THAT(a.fingerprint == b.fingerprint, "fingerprints differ: %s vs %s",
               a.fingerprint.c_str(), b.fingerprint.c_str());
    CHECK_THAT(file_text(csv1) == file_text(csv2), "roc csv bytes differ");
    CHECK_THAT(file_text(svg1) == file_text(svg2), "roc svg bytes differ");
    for (const auto& p : {csv1, svg1, csv2, svg2}) std::filesystem::remove(p);
}

// ---------------------------------------------------------------------------
// 7. Class weights
// ---------------------------------------------------------------------------

void criterion_class_weights() {
    Rng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        int n0 = 1 + static_cast<int>(rng.uniform_int(400));
        int n1 = 1 + static_cast<int>(rng.uniform_int(400));
        std::vector<int> labels(n0, 0);
        labels.insert(labels.end(), n1, 1);
        models::ClassWeights w = models::balanced_weights(labels);
        double mass0 = n0 * w.w0, mass1 = n1 * w.w1;
        CHECK_THAT(std::fabs(mass0 - mass1) <= 1e-9 * std::max(mass0, mass1),
                   "unequal class mass %.17g vs %.17g", mass0, mass1);
    }

    // 9:1 planted set: weighting must not lower minority recall.
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<int> y;
    for (int i = 0; i < 300; ++i) {
        int label = i % 10 == 0 ? 1 : 0;
        std::vector<std::pair<int, double>> row;
        double signal = label ? 0.55 + 0.45 * rng.uniform_real() : rng.uniform_real() * 0.75;
        row.emplace_back(0, signal);
        for (int j = 1; j < 8; ++j) row.emplace_back(j, rng.uniform_real());
        rows.push_back(row);
        y.push_back(label);
    }
    models::DataMatrix x;
    x.n_cols = 8;
    x.rows = rows;

    auto minority_recall = [&](const models::EnsembleParams& params) {
        auto model = models::fit_ensemble(models::EnsembleKind::RandomForest, x, y, params);
        auto scores = models::predict_proba(model, x);
        int hit = 0, total = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!y[i]) continue;
            ++total;
            hit += scores[i] >= 0.5 ? 1 : 0;
        }
        return static_cast<double>(hit) / total;
    };
    models::EnsembleParams plain;
    plain.n_trees = 50;
    plain.seed = 4;
    plain.max_depth = 4;
    models::EnsembleParams weighted = plain;
    weighted.class_weights = models::balanced_weights(y);
    double ur = minority_recall(plain);
    double wr = minority_recall(weighted);
    CHECK_THAT(wr >= ur, "weighted recall %.3f below unweighted %.3f", wr, ur);
    std::printf("    (minority recall %.3f weighted vs %.3f unweighted)\n", wr, ur);
}

// ---------------------------------------------------------------------------
// 8. Tagger quality bar
// ---------------------------------------------------------------------------

void criterion_tagger() {
    auto heldout = lingua::read_tagged_file(kData + "/pos/heldout.txt");
    double acc = lingua::tagging_accuracy(tagger(), heldout);
    CHECK_THAT(acc >= 0.90, "held-out accuracy %.4f below 0.90", acc);

    auto tags_of = [&](const std::string& text) {
        std::vector<std::string> tags;
        for (const auto& tt : lingua::tag_text(text, tagger())) tags.push_back(tt.tag);
        return tags;
    };
    auto t1 = tags_of(
        "This is supported by the recent AspECT clinical trial which found aspirin intake may "
        "have chemopreventative effects in Barrett's patients.");
    const char* want1[] = {"DT", "VBZ", "VBN", "IN", "DT", "JJ"};
    for (int i = 0; i < 6; ++i)
        CHECK_THAT(t1[i] == want1[i], "sentence 1 tag %d: got %s want %s", i, t1[i].c_str(),
                   want1[i]);

    auto t2 = tags_of(
        "However, despite these data, evidence to suggest failure in secondary prevention of "
        "CRC by total colonoscopy and polypectomy is emerging.");
    const char* want2[] = {"RB", ",", "IN", "DT", "NNS"};
    for (int i = 0; i < 5; ++i)
        CHECK_THAT(t2[i] == want2[i], "sentence 2 tag %d: got %s want %s", i, t2[i].c_str(),
                   want2[i]);
    std::printf("    (held-out accuracy %.4f)\n", acc);
}

// ---------------------------------------------------------------------------
// 9. Acquisition clients offline
// ---------------------------------------------------------------------------

class AccFakeClock : public acquire::Clock {
public:
    double now() override { return t; }
    void sleep_for(double seconds) override {
        if (seconds > 0) t += seconds;
    }
    double t = 0;
};

void criterion_acquisition() {
    auto http = acquire::make_fixture_http_client(kFixtures);
    AccFakeClock clock;
    acquire::FetchConfig cfg;
    cfg.rate_limit = 100;
    acquire::Fetcher fetcher(cfg, *http, clock);

    auto rec = fetcher.fetch_article("16765760");
    CHECK_THAT(rec.title == "Antenatal steroids and neonatal outcomes in preterm infants",
               "fixture article title mismatch: '%s'", rec.title.c_str());
    CHECK_THAT(rec.mesh_terms.size() == 4, "expected 4 mesh terms, got %zu",
               rec.mesh_terms.size());

    auto cits = fetcher.fetch_citances("16765760");
    CHECK_THAT(cits.citances.size() == 2, "expected 2 deduplicated citances, got %zu",
               cits.citances.size());

    auto fallback = acquire::parse_sparql_results(file_text(kFixtures + "/10000004.srj"));
    CHECK_THAT(fallback.citances.size() == 1 && fallback.dropped_missing_date == 1,
               "year fallback/drop bookkeeping wrong");

    bool not_found = false;
    try {
        fetcher.fetch_article("99999999");
    } catch (const Error& e) {
        not_found = e.kind() == ErrorKind::NotFound;
    }
    CHECK_THAT(not_found, "missing fixture should surface NotFound");

    // Rate budget under a fake clock.
    AccFakeClock budget_clock;
    acquire::RateLimiter limiter(5.0, budget_clock);
    std::vector<double> times;
    for (int i = 0; i < 40; ++i) {
        limiter.acquire();
        times.push_back(budget_clock.now());
        if (i % 7 == 0) budget_clock.t += 0.003;
    }
    int worst = 0;
    for (double t0 : times) {
        int in_window = 0;
        for (double t : times)
            if (t >= t0 && t < t0 + 1.0) ++in_window;
        worst = std::max(worst, in_window);
    }
    CHECK_THAT(worst <= 5, "rate limiter let %d requests into a 1s window (budget 5)", worst);
}

struct Criterion {
    const char* label;
    void (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"AUC rank statistic equals the pairwise brute force", criterion_auc_oracle},
        {"TF-IDF entries equal tf*ln(N/df) exactly", criterion_tfidf_exactness},
        {"Table-1 n-grams and compound scores reproduce", criterion_table1},
        {"labeling rules cover every branch, order-independent", criterion_labeling},
        {"synthetic end-to-end experiment reproduces the qualitative structure",
         criterion_end_to_end},
        {"evaluate runs are byte-deterministic", criterion_determinism},
        {"balanced class weights equalize mass and help minority recall",
         criterion_class_weights},
        {"tagger meets the quality bar on the bundled fixture", criterion_tagger},
        {"acquisition clients run offline within the rate budget", criterion_acquisition},
    };

    int failed = 0;
    int index = 0;
    for (const auto& criterion : criteria) {
        ++index;
        g_failures_in_criterion = 0;
        try {
            criterion.run();
        } catch (const std::exception& e) {
            ++g_failures_in_criterion;
            std::printf("    exception: %s\n", e.what());
        }
        const bool ok = g_failures_in_criterion == 0;
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", index, criterion.label);
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d/9 acceptance criteria FAILED\n", failed);
    else std::printf("all 9 acceptance criteria passed\n");
    return failed == 0 ? 0 : 1;
}
