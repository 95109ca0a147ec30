#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "evidencer/lingua.hpp"

using namespace evidencer;
using namespace evidencer::lingua;

namespace {

const std::string kData = EVIDENCER_DATA_DIR;

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

std::vector<std::string> tags_of(const std::vector<TaggedToken>& tagged) {
    std::vector<std::string> out;
    for (const auto& t : tagged) out.push_back(t.tag);
    return out;
}

const TaggerModel& bundled_tagger() {
    static TaggerModel model = train_tagger(read_tagged_file(kData + "/pos/train.txt"));
    return model;
}

}  // namespace

TEST_CASE("tokenize splits punctuation but keeps words intact") {
    CHECK(surfaces(tokenize("Barrett's patients.")) ==
          std::vector<std::string>{"Barrett's", "patients", "."});
    CHECK(tokenize("").empty());
    CHECK(surfaces(tokenize("32+0-33+6 weeks")) ==
          std::vector<std::string>{"32+0-33+6", "weeks"});
    CHECK(surfaces(tokenize("However, despite these data,")) ==
          std::vector<std::string>{"However", ",", "despite", "these", "data", ","});
    CHECK(surfaces(tokenize("(a 3.5 mg/kg dose).")) ==
          std::vector<std::string>{"(", "a", "3.5", "mg/kg", "dose", ")", "."});
    CHECK(surfaces(tokenize("one-third remained")) ==
          std::vector<std::string>{"one-third", "remained"});
    CHECK(surfaces(tokenize("...")) == std::vector<std::string>{".", ".", "."});
    CHECK(surfaces(tokenize("  spaced\tout \n")) == std::vector<std::string>{"spaced", "out"});
}

TEST_CASE("tokenize offsets re-slice the source exactly") {
    const std::string texts[] = {
        "This is supported by the recent AspECT clinical trial.",
        "However, despite these data, evidence to suggest failure in secondary prevention "
        "of CRC by total colonoscopy and polypectomy is emerging.",
        "a b (non-breaking space), quotes: \"q\" and 'r'.",
        "unicode: ±3 µg/dl — dashes",
    };
    for (const auto& text : texts) {
        auto tokens = tokenize(text);
        std::size_t prev_end = 0;
        for (const auto& t : tokens) {
            CHECK(t.end > t.start);
            CHECK(t.end <= text.size());
            CHECK(t.start >= prev_end);
            CHECK(text.substr(t.start, t.end - t.start) == t.surface);
            prev_end = t.end;
        }
    }
}

TEST_CASE("train_tagger validates preconditions") {
    CHECK_THROWS_AS(train_tagger({}), Error);
    auto corpus = read_tagged_file(kData + "/pos/train.txt");
    TrainOptions zero;
    zero.iterations = 0;
    try {
        train_tagger(corpus, zero);
        FAIL("expected EmptyTraining");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyTraining);
    }

    std::vector<std::vector<TaggedToken>> bad = {{{{"word", 0, 0}, "XX"}}};
    CHECK_THROWS_AS(train_tagger(bad), Error);
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto corpus = read_tagged_file(kData + "/pos/train.txt");
    TrainOptions opt;
    opt.iterations = 3;
    opt.seed = 42;
    TaggerModel a = train_tagger(corpus, opt);
    TaggerModel b = train_tagger(corpus, opt);
    CHECK(a.weights == b.weights);
    CHECK(a.tag_dict == b.tag_dict);
}

TEST_CASE("50-sentence fixture reaches 95 percent on its own training set") {
    auto corpus = read_tagged_file(kData + "/pos/train.txt");
    REQUIRE(corpus.size() >= 50);
    corpus.resize(50);
    TrainOptions opt;
    opt.iterations = 5;
    TaggerModel model = train_tagger(corpus, opt);
    CHECK(tagging_accuracy(model, corpus) >= 0.95);
}

TEST_CASE("bundled fixture: held-out accuracy is at least 90 percent") {
    const TaggerModel& model = bundled_tagger();
    auto heldout = read_tagged_file(kData + "/pos/heldout.txt");
    double acc = tagging_accuracy(model, heldout);
    INFO("held-out accuracy ", acc);
    CHECK(acc >= 0.90);
}

TEST_CASE("closed-class words go through the dictionary") {
    const TaggerModel& model = bundled_tagger();
    REQUIRE(model.tag_dict.count("the"));
    CHECK(model.tag_dict.at("the") == "DT");
    auto tagged = tag_text("the", model);
    REQUIRE(tagged.size() == 1);
    CHECK(tagged[0].tag == "DT");
}

TEST_CASE("table-style sentence prefixes come out right") {
    const TaggerModel& model = bundled_tagger();

    auto s1 = tag_text(
        "This is supported by the recent AspECT clinical trial which found aspirin intake "
        "may have chemopreventative effects in Barrett's patients.",
        model);
    auto t1 = tags_of(s1);
    REQUIRE(t1.size() >= 6);
    CHECK(t1[0] == "DT");
    CHECK(t1[1] == "VBZ");
    CHECK(t1[2] == "VBN");
    CHECK(t1[3] == "IN");
    CHECK(t1[4] == "DT");
    CHECK(t1[5] == "JJ");

    auto s2 = tag_text("However, despite these data, evidence to suggest failure in secondary "
                       "prevention of CRC by total colonoscopy and polypectomy is emerging.",
                       model);
    auto t2 = tags_of(s2);
    REQUIRE(t2.size() >= 5);
    CHECK(t2[0] == "RB");
    CHECK(t2[1] == ",");
    CHECK(t2[2] == "IN");
    CHECK(t2[3] == "DT");
    CHECK(t2[4] == "NNS");
}

TEST_CASE("pos_tag output aligns with input and stays inside the tagset") {
    const TaggerModel& model = bundled_tagger();
    auto tokens = tokenize("An entirely unseen zweihander misclassifies gracefully.");
    auto tagged = pos_tag(tokens, model);
    REQUIRE(tagged.size() == tokens.size());
    for (const auto& tt : tagged) {
        bool known = std::find(model.tagset.begin(), model.tagset.end(), tt.tag) !=
                     model.tagset.end();
        CHECK(known);
    }

    TaggerModel untrained;
    CHECK_THROWS_AS(pos_tag(tokens, untrained), Error);
}

TEST_CASE("tag_histogram normalizes to one and zero-fills") {
    std::vector<std::string> tagset = {"DT", "NN", "VBZ"};
    std::vector<TaggedToken> tagged = {
        {{"the", 0, 0}, "DT"}, {{"dog", 0, 0}, "NN"}, {{"house", 0, 0}, "NN"}};
    auto hist = tag_histogram(tagged, tagset);
    CHECK(hist.at("DT") == doctest::Approx(1.0 / 3));
    CHECK(hist.at("NN") == doctest::Approx(2.0 / 3));
    CHECK(hist.at("VBZ") == 0.0);

    auto empty = tag_histogram({}, tagset);
    for (const auto& [tag, v] : empty) CHECK(v == 0.0);

    // Sums to one whenever input is non-empty.
    const TaggerModel& model = bundled_tagger();
    auto tokens = tag_text("The trial failed to confirm the claimed benefit.", model);
    auto h = tag_histogram(tokens, model.tagset);
    double sum = 0;
    for (const auto& [tag, v] : h) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tag_counts returns raw counts in the same shape") {
    std::vector<std::string> tagset = {"DT", "NN", "VBZ"};
    std::vector<TaggedToken> tagged = {
        {{"the", 0, 0}, "DT"}, {{"dog", 0, 0}, "NN"}, {{"house", 0, 0}, "NN"}};
    auto counts = tag_counts(tagged, tagset);
    CHECK(counts.at("DT") == 1.0);
    CHECK(counts.at("NN") == 2.0);
    CHECK(counts.at("VBZ") == 0.0);
    double total = 0;
    for (const auto& [tag, v] : counts) total += v;
    CHECK(total == doctest::Approx(3.0));
}

TEST_CASE("tagger model file round-trips") {
    const TaggerModel& model = bundled_tagger();
    auto path = (std::filesystem::temp_directory_path() / "evidencer_tagger.model").string();
    save_tagger(model, path);
    TaggerModel loaded = load_tagger(path);
    CHECK(loaded.iterations == model.iterations);
    CHECK(loaded.tagset == model.tagset);
    CHECK(loaded.tag_dict == model.tag_dict);
    REQUIRE(loaded.weights.size() == model.weights.size());

    // Same behavior end to end.
    auto a = tag_text("The recent trial failed to confirm the benefit.", model);
    auto b = tag_text("The recent trial failed to confirm the benefit.", loaded);
    CHECK(tags_of(a) == tags_of(b));
    std::remove(path.c_str());
}

TEST_CASE("pre-tagged line format parses and rejects junk") {
    auto sentence = parse_tagged_line("The_DT trial_NN ._.");
    REQUIRE(sentence.size() == 3);
    CHECK(sentence[0].token.surface == "The");
    CHECK(sentence[0].tag == "DT");
    CHECK(sentence[2].tag == ".");
    CHECK_THROWS_AS(parse_tagged_line("notag"), Error);
    CHECK_THROWS_AS(parse_tagged_line("word_"), Error);
}
