#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evidencer/errors.hpp"

namespace evidencer::sentiment {

struct SentimentLexicon {
    std::unordered_map<std::string, double> valence;  // token -> mean rating
    std::unordered_map<std::string, double> boosters; // token -> scalar increment
    std::unordered_set<std::string> negations;
    int malformed_lines = 0;   // skipped while loading
    int duplicate_tokens = 0;  // last occurrence wins
};

// Tab-separated "token<TAB>mean<TAB>stddev<TAB>ratings" lines; only the mean
// is kept. Booster and negation tables are the published rule constants and
// are filled in here.
SentimentLexicon load_lexicon(const std::string& path);

// Lexicon with the built-in rule tables but caller-provided valences; handy
// for tests.
SentimentLexicon make_lexicon(std::unordered_map<std::string, double> valence);

struct PolarityScores {
    double neg = 0;
    double neu = 0;
    double pos = 0;
    double compound = 0;
};

struct ScoreOptions {
    // Halves valences before "but" and boosts the ones after. Off by default;
    // enabling it tightens fidelity to the reference scorer.
    bool but_clause = false;
    // Score each '.'-terminated sentence separately and average compounds.
    bool per_sentence_average = false;
};

// Rule-based valence scoring: lexicon lookups adjusted by ALL-CAPS emphasis,
// booster words over a three-token window (damped with distance), negation
// flips, and !/? amplification; compound = S / sqrt(S^2 + 15).
PolarityScores score(const std::string& text, const SentimentLexicon& lex,
                     const ScoreOptions& options = {});

double compound_of(const std::string& text, const SentimentLexicon& lex,
                   const ScoreOptions& options = {});

}  // namespace evidencer::sentiment
