#pragma once

#include <cstdint>
#include <vector>

#include "evidencer/corpus.hpp"

namespace evidencer::synth {

// Seeded generator for experiment corpora. Transformative documents get
// contrast cues planted into their citing sentences only (however/question,
// negation, past-tense verbs, negative-valence words); abstracts are neutral
// for both classes.
struct SynthConfig {
    int n_docs = 600;
    double transformative_fraction = 0.45;
    std::uint64_t seed = 7;
    int min_citances = 3;
    int max_citances = 7;
    int abstract_sentences = 12;
    double cue_rate_t = 0.65;       // chance a T citance carries a contrast cue
    double cue_rate_i = 0.10;       // leak rate into the I class
    double excluded_fraction = 0.0; // extra conflict/single-expert records on top
};

std::vector<corpus::ArticleRecord> generate_corpus(const SynthConfig& config);

// Permutes the expert recommendation sets across records (texts stay put), so
// downstream labels are shuffled end to end.
std::vector<corpus::ArticleRecord> shuffle_labels(std::vector<corpus::ArticleRecord> records,
                                                  std::uint64_t seed);

}  // namespace evidencer::synth
