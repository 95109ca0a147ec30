#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "evidencer/errors.hpp"

namespace evidencer::lingua {

struct Token {
    std::string surface;
    std::size_t start = 0;  // byte offsets into the source text
    std::size_t end = 0;
};

// Whitespace split with leading/trailing punctuation peeled into single-char
// tokens. Hyphenated words, decimal numbers and internal apostrophes stay
// intact. Offsets re-slice the source exactly.
std::vector<Token> tokenize(const std::string& text);

struct TaggedToken {
    Token token;
    std::string tag;
};

// One sentence per line, whitespace-separated "token_TAG" items.
std::vector<std::vector<TaggedToken>> read_tagged_file(const std::string& path);
std::vector<TaggedToken> parse_tagged_line(const std::string& line);

// The closed Penn Treebank tagset shipped with the artifact.
const std::vector<std::string>& default_tagset();
std::vector<std::string> load_tagset(const std::string& path);

struct TaggerModel {
    // feature -> tag -> averaged weight
    std::unordered_map<std::string, std::unordered_map<std::string, double>> weights;
    // words that always carried the same tag in training; they bypass scoring
    std::unordered_map<std::string, std::string> tag_dict;
    std::vector<std::string> tagset;
    int iterations = 0;

    bool trained() const { return iterations > 0; }
};

struct TrainOptions {
    int iterations = 5;
    std::uint64_t seed = 1;
    // A word enters tag_dict when seen at least this often, always with one tag.
    int dict_min_count = 2;
};

// Averaged perceptron, greedy left-to-right, per-epoch shuffling from the
// seed. Reproducible given (corpus, options).
TaggerModel train_tagger(const std::vector<std::vector<TaggedToken>>& tagged_corpus,
                         const TrainOptions& options = {});

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TaggerModel& model);

// Convenience: tokenize + tag.
std::vector<TaggedToken> tag_text(const std::string& text, const TaggerModel& model);

// Relative frequency per tag over the model tagset; all tags present, zeros
// explicit. Empty input gives the all-zero map.
std::map<std::string, double> tag_histogram(const std::vector<TaggedToken>& tagged,
                                            const std::vector<std::string>& tagset);

// Raw per-tag counts, same shape as tag_histogram.
std::map<std::string, double> tag_counts(const std::vector<TaggedToken>& tagged,
                                         const std::vector<std::string>& tagset);

// Line-oriented text model file; save/load round-trips exactly.
void save_tagger(const TaggerModel& model, const std::string& path);
TaggerModel load_tagger(const std::string& path);

double tagging_accuracy(const TaggerModel& model,
                        const std::vector<std::vector<TaggedToken>>& gold);

}  // namespace evidencer::lingua
