#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "evidencer/features.hpp"
#include "evidencer/rng.hpp"

using namespace evidencer;
using namespace evidencer::features;

namespace {

const std::string kData = EVIDENCER_DATA_DIR;

const lingua::TaggerModel& tagger() {
    static auto model = lingua::train_tagger(lingua::read_tagged_file(kData + "/pos/train.txt"));
    return model;
}

const sentiment::SentimentLexicon& lexicon() {
    static auto lex = sentiment::load_lexicon(kData + "/vader_lexicon.txt");
    return lex;
}

corpus::ArticleRecord article_with(const std::string& abstract,
                                   std::vector<std::string> citances) {
    corpus::ArticleRecord rec;
    rec.pmid = "42";
    rec.abstract = abstract;
    rec.pub_date = parse_date("2010-01");
    int i = 0;
    for (auto& text : citances)
        rec.citances.push_back({text, std::to_string(100 + i++), parse_date("2010-06")});
    return rec;
}

}  // namespace

TEST_CASE("n-gram listings match the printed examples after lowercasing") {
    auto c1 = extract_ngrams_text(
        "This is supported by the recent AspECT clinical trial which found aspirin intake may "
        "have chemopreventative effects in Barrett's patients.");
    // Uni-grams
    for (const char* g : {"this", "is", "supported", "by", "the", "recent", "aspect",
                          "clinical", "trial"})
        CHECK_MESSAGE(c1.count(g) == 1, "missing unigram ", g);
    // Bi-grams
    for (const char* g : {"this is", "is supported", "supported by", "by the", "the recent",
                          "recent aspect", "aspect clinical", "clinical trial"})
        CHECK_MESSAGE(c1.count(g) == 1, "missing bigram ", g);
    // Tri-grams
    for (const char* g : {"this is supported", "is supported by", "supported by the",
                          "by the recent", "the recent aspect", "recent aspect clinical",
                          "aspect clinical trial", "clinical trial which"})
        CHECK_MESSAGE(c1.count(g) == 1, "missing trigram ", g);
    // No n-gram may contain the final period.
    for (const auto& [term, n] : c1) CHECK(term.find('.') == std::string::npos);

    auto c2 = extract_ngrams_text(
        "However, despite these data, evidence to suggest failure in secondary prevention of "
        "CRC by total colonoscopy and polypectomy is emerging.");
    for (const char* g : {"however", "despite", "these", "data", "evidence", "to", "suggest",
                          "failure", "in", "secondary"})
        CHECK_MESSAGE(c2.count(g) == 1, "missing unigram ", g);
    // The comma is skipped, so n-grams bridge it.
    for (const char* g : {"however despite", "despite these", "these data", "data evidence",
                          "evidence to", "to suggest", "suggest failure"})
        CHECK_MESSAGE(c2.count(g) == 1, "missing bigram ", g);
    for (const char* g : {"however despite these", "despite these data", "these data evidence",
                          "data evidence to"})
        CHECK_MESSAGE(c2.count(g) == 1, "missing trigram ", g);
}

TEST_CASE("extract_ngrams bounds and edge cases") {
    CHECK(extract_ngrams({"a", "b"}, 1, 3).count("a b") == 1);
    CHECK(extract_ngrams({"a", "b"}, 1, 3).size() == 3);  // no trigram from two tokens
    CHECK(extract_ngrams({}, 1, 3).empty());
    CHECK(extract_ngrams({"Word"}, 1, 1).count("word") == 1);
    CHECK_THROWS_AS(extract_ngrams({"a"}, 0, 2), Error);
    CHECK_THROWS_AS(extract_ngrams({"a"}, 3, 2), Error);

    // Repeated tokens accumulate counts.
    auto c = extract_ngrams({"x", "x", "x"}, 1, 2);
    CHECK(c.at("x") == 3);
    CHECK(c.at("x x") == 2);
}

TEST_CASE("fit_vocabulary: df counts, min_df threshold, determinism") {
    TermCounts d1 = {{"shared", 2}, {"only1", 1}};
    TermCounts d2 = {{"shared", 1}, {"only2", 5}};
    Vocabulary v = fit_vocabulary({d1, d2}, 1);
    CHECK(v.n_docs == 2);
    REQUIRE(v.index.count("shared"));
    CHECK(v.df[v.index.at("shared")] == 2);
    CHECK(v.df[v.index.at("only1")] == 1);

    Vocabulary v2 = fit_vocabulary({d1, d2}, 2);
    CHECK(v2.size() == 1);
    CHECK(v2.terms[0] == "shared");

    // Lexicographic column order, stable across runs.
    Vocabulary va = fit_vocabulary({d1, d2}, 1);
    CHECK(va.terms == v.terms);
    CHECK(std::is_sorted(v.terms.begin(), v.terms.end()));

    CHECK_THROWS_AS(fit_vocabulary({}, 1), Error);
}

TEST_CASE("transform implements tf * ln(N/df) with no smoothing") {
    // Three-document hand corpus.
    TermCounts d1 = {{"everywhere", 1}, {"pair", 3}, {"solo", 2}};
    TermCounts d2 = {{"everywhere", 4}, {"pair", 1}};
    TermCounts d3 = {{"everywhere", 2}};
    Vocabulary v = fit_vocabulary({d1, d2, d3}, 1);

    SparseVector count = transform(d1, v, VectorizerMode::Count);
    auto value_at = [&](const SparseVector& vec, const std::string& term) {
        int idx = v.index.at(term);
        for (const auto& [i, val] : vec.entries)
            if (i == idx) return val;
        return 0.0;
    };
    CHECK(value_at(count, "pair") == 3.0);
    CHECK(value_at(count, "solo") == 2.0);
    CHECK(value_at(count, "everywhere") == 1.0);

    SparseVector tfidf = transform(d1, v, VectorizerMode::Tfidf);
    CHECK(value_at(tfidf, "pair") == doctest::Approx(3.0 * std::log(3.0 / 2.0)).epsilon(1e-12));
    CHECK(value_at(tfidf, "solo") == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));
    // A term in every document weighs exactly zero (and is dropped from the
    // sparse entries).
    CHECK(value_at(tfidf, "everywhere") == 0.0);
    for (const auto& [i, val] : tfidf.entries) CHECK(val != 0.0);

    // N=2, df=1, tf=3 -> 3 ln 2.
    Vocabulary w = fit_vocabulary({TermCounts{{"t", 3}}, TermCounts{{"u", 1}}}, 1);
    SparseVector x = transform(TermCounts{{"t", 3}}, w, VectorizerMode::Tfidf);
    REQUIRE(x.entries.size() == 1);
    CHECK(x.entries[0].second == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));

    // Out-of-vocabulary terms are dropped.
    SparseVector y = transform(TermCounts{{"zzz", 9}}, w, VectorizerMode::Count);
    CHECK(y.entries.empty());
}

TEST_CASE("cross-mode consistency: tfidf equals count times ln(N/df) elementwise") {
    Rng rng(5);
    std::vector<TermCounts> docs;
    const char* pool[] = {"a", "b", "c", "d", "e", "f", "g"};
    for (int d = 0; d < 12; ++d) {
        TermCounts doc;
        int n = 1 + static_cast<int>(rng.uniform_int(6));
        for (int i = 0; i < n; ++i) doc[pool[rng.uniform_int(7)]] += 1;
        docs.push_back(doc);
    }
    Vocabulary v = fit_vocabulary(docs, 1);
    for (const auto& doc : docs) {
        SparseVector c = transform(doc, v, VectorizerMode::Count);
        SparseVector t = transform(doc, v, VectorizerMode::Tfidf);
        std::vector<double> dense_c(v.size(), 0), dense_t(v.size(), 0);
        for (auto& [i, val] : c.entries) dense_c[i] = val;
        for (auto& [i, val] : t.entries) dense_t[i] = val;
        for (int i = 0; i < v.size(); ++i) {
            double expect = dense_c[i] * std::log(static_cast<double>(v.n_docs) / v.df[i]);
            CHECK(dense_t[i] == doctest::Approx(expect).epsilon(1e-12));
        }
        // Count-mode values sum to the in-vocabulary token count.
        double total = 0;
        for (auto& [term, n] : doc)
            if (v.index.count(term)) total += n;
        double got = 0;
        for (auto& [i, val] : c.entries) got += val;
        CHECK(got == doctest::Approx(total));
    }
}

TEST_CASE("no all-zero rows after fitting unless every term is sub-threshold") {
    TermCounts d1 = {{"aa", 1}, {"bb", 1}};
    TermCounts d2 = {{"aa", 1}};
    TermCounts d3 = {{"cc", 1}};  // survives only at min_df=1
    Vocabulary v = fit_vocabulary({d1, d2, d3}, 2);
    CHECK_FALSE(transform(d1, v, VectorizerMode::Count).entries.empty());
    CHECK_FALSE(transform(d2, v, VectorizerMode::Count).entries.empty());
    CHECK(transform(d3, v, VectorizerMode::Count).entries.empty());  // only sub-min_df terms
}

TEST_CASE("source_text selects and joins the right text") {
    auto rec = article_with("the abstract text.", {"first citance.", "second citance."});
    CHECK(source_text(rec, TextSource::Abstract) == "the abstract text.");
    CHECK(source_text(rec, TextSource::Citances) == "first citance. second citance.");
    CHECK(source_text(rec, TextSource::Both) ==
          "first citance. second citance. the abstract text.");

    auto late = article_with("abs.", {});
    late.citances.push_back({"too late.", "7", parse_date("2013-06")});
    CHECK(source_text(late, TextSource::Citances).empty());
    CHECK(source_text(late, TextSource::Both) == "abs.");
}

TEST_CASE("assemble: empty source text is an error") {
    auto rec = article_with("", {"a citance."});
    Vocabulary v = fit_vocabulary({doc_terms(rec, TextSource::Citances, {})}, 1);
    try {
        assemble(rec, TextSource::Abstract, v, tagger(), lexicon());
        FAIL("expected EmptyText");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyText);
    }
}

TEST_CASE("assemble both-source n-gram counts are additive") {
    auto rec = article_with("the trial supports the benefit of aspirin.",
                            {"however, the trial failed.", "these results confirm it."});
    AssembleOptions opts;

    TermCounts both = doc_terms(rec, TextSource::Both, opts);
    TermCounts cit = doc_terms(rec, TextSource::Citances, opts);
    TermCounts abs = doc_terms(rec, TextSource::Abstract, opts);

    // Brute-force recount: merged multiset equals per-source sum, term by term.
    TermCounts merged = cit;
    for (const auto& [term, n] : abs) merged[term] += n;
    CHECK(both.size() == merged.size());
    for (const auto& [term, n] : merged) {
        CHECK_MESSAGE(both.count(term) == 1, "term lost: ", term);
        CHECK(both.at(term) == n);
    }

    // With a shared vocabulary the sparse vectors are additive too.
    Vocabulary v = fit_vocabulary({both}, 1);
    auto dense = [&](const SparseVector& x) {
        std::vector<double> d(v.size(), 0);
        for (auto& [i, val] : x.entries) d[i] = val;
        return d;
    };
    auto db = dense(transform(both, v, VectorizerMode::Count));
    auto dc = dense(transform(cit, v, VectorizerMode::Count));
    auto da = dense(transform(abs, v, VectorizerMode::Count));
    for (int i = 0; i < v.size(); ++i) CHECK(db[i] == doctest::Approx(dc[i] + da[i]));
}

TEST_CASE("assemble is deterministic and fills every block") {
    auto rec = article_with("the trial supports the benefit of aspirin.",
                            {"however, the trial failed."});
    AssembleOptions opts;
    Vocabulary v = fit_vocabulary({doc_terms(rec, TextSource::Both, opts)}, 1);

    FeatureVector a = assemble(rec, TextSource::Both, v, tagger(), lexicon(), opts);
    FeatureVector b = assemble(rec, TextSource::Both, v, tagger(), lexicon(), opts);
    CHECK(a.ngram_block.entries == b.ngram_block.entries);
    CHECK(a.pos_block == b.pos_block);
    CHECK(a.compound == b.compound);

    CHECK(a.pos_block.size() == tagger().tagset.size());
    double pos_sum = 0;
    for (double x : a.pos_block) pos_sum += x;
    CHECK(pos_sum == doctest::Approx(1.0));
    CHECK(a.compound != 0.0);  // "failed" and "supports" are in the lexicon
}

TEST_CASE("feature names and matrix export") {
    TermCounts d1 = {{"alpha", 1}, {"beta", 2}};
    TermCounts d2 = {{"beta", 1}};
    Vocabulary v = fit_vocabulary({d1, d2}, 1);
    std::vector<std::string> tagset = {"DT", "NN"};

    auto names = feature_names(v, tagset);
    REQUIRE(names.size() == 5);
    CHECK(names[0] == "alpha");
    CHECK(names[1] == "beta");
    CHECK(names[2] == "__POS_DT");
    CHECK(names[3] == "__POS_NN");
    CHECK(names[4] == "__COMPOUND");

    FeatureVector fv;
    fv.ngram_block = transform(d1, v, VectorizerMode::Count);
    fv.pos_block = {0.5, 0.0};
    fv.compound = -0.25;

    auto tmp = std::filesystem::temp_directory_path();
    std::string mpath = (tmp / "evidencer_matrix.txt").string();
    std::string vpath = (tmp / "evidencer_vocab.tsv").string();
    export_matrix({fv}, v, tagset, mpath, vpath);

    std::ifstream mat(mpath);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(mat, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);  // alpha, beta, one pos cell, compound
    CHECK(lines[0] == "0 0 1");
    CHECK(lines[1] == "0 1 2");
    CHECK(lines[2] == "0 2 0.5");
    CHECK(lines[3] == "0 4 -0.25");

    std::ifstream voc(vpath);
    lines.clear();
    while (std::getline(voc, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "0\talpha\t1");
    CHECK(lines[1] == "1\tbeta\t2");
    CHECK(lines[2] == "2\t__POS_DT\t0");
    CHECK(lines[4] == "4\t__COMPOUND\t0");

    std::filesystem::remove(mpath);
    std::filesystem::remove(vpath);
}
