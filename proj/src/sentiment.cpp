#include "evidencer/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace evidencer::sentiment {

namespace {

// Published constants of the rule-based method.
constexpr double kBoostIncr = 0.293;
constexpr double kCapsIncr = 0.733;
constexpr double kNegScalar = -0.74;
constexpr double kAlpha = 15.0;
constexpr double kExclaimIncr = 0.292;

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_all_caps(const std::string& s) {
    bool has_alpha = false;
    for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            has_alpha = true;
            if (!std::isupper(static_cast<unsigned char>(c))) return false;
        }
    }
    return has_alpha;
}

// Whitespace split; outer punctuation stripped unless that would leave fewer
// than three characters.
std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok) {
        std::size_t b = 0, e = tok.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
        std::string stripped = tok.substr(b, e - b);
        words.push_back(stripped.size() <= 2 ? tok : stripped);
    }
    return words;
}

const std::unordered_map<std::string, double>& booster_table() {
    static const std::unordered_map<std::string, double> table = {
        {"absolutely", kBoostIncr}, {"amazingly", kBoostIncr},  {"awfully", kBoostIncr},
        {"completely", kBoostIncr}, {"considerably", kBoostIncr}, {"decidedly", kBoostIncr},
        {"deeply", kBoostIncr},     {"enormously", kBoostIncr}, {"entirely", kBoostIncr},
        {"especially", kBoostIncr}, {"exceptionally", kBoostIncr}, {"extremely", kBoostIncr},
        {"greatly", kBoostIncr},    {"highly", kBoostIncr},     {"hugely", kBoostIncr},
        {"incredibly", kBoostIncr}, {"intensely", kBoostIncr},  {"majorly", kBoostIncr},
        {"markedly", kBoostIncr},   {"particularly", kBoostIncr}, {"purely", kBoostIncr},
        {"quite", kBoostIncr},      {"really", kBoostIncr},     {"remarkably", kBoostIncr},
        {"so", kBoostIncr},         {"substantially", kBoostIncr}, {"thoroughly", kBoostIncr},
        {"totally", kBoostIncr},    {"tremendously", kBoostIncr}, {"unbelievably", kBoostIncr},
        {"unusually", kBoostIncr},  {"utterly", kBoostIncr},    {"very", kBoostIncr},
        {"almost", -kBoostIncr},    {"barely", -kBoostIncr},    {"hardly", -kBoostIncr},
        {"kinda", -kBoostIncr},     {"less", -kBoostIncr},      {"little", -kBoostIncr},
        {"marginally", -kBoostIncr}, {"occasionally", -kBoostIncr}, {"partly", -kBoostIncr},
        {"scarcely", -kBoostIncr},  {"slightly", -kBoostIncr},  {"somewhat", -kBoostIncr},
    };
    return table;
}

const std::unordered_set<std::string>& negation_table() {
    static const std::unordered_set<std::string> table = {
        "aint",     "arent",    "cannot",  "cant",     "couldnt",  "darent",   "didnt",
        "doesnt",   "ain't",    "aren't",  "can't",    "couldn't", "daren't",  "didn't",
        "doesn't",  "dont",     "hadnt",   "hasnt",    "havent",   "isnt",     "mightnt",
        "mustnt",   "neither",  "don't",   "hadn't",   "hasn't",   "haven't",  "isn't",
        "mightn't", "mustn't",  "neednt",  "needn't",  "never",    "no",       "none",
        "nope",     "nor",      "not",     "nothing",  "nowhere",  "oughtnt",  "shant",
        "shouldnt", "uhuh",     "wasnt",   "werent",   "oughtn't", "shan't",   "shouldn't",
        "uh-uh",    "wasn't",   "weren't", "without",  "wont",     "wouldnt",  "won't",
        "wouldn't", "rarely",   "seldom",  "despite",
    };
    return table;
}

bool is_negation(const std::string& lw, const SentimentLexicon& lex) {
    if (lex.negations.count(lw)) return true;
    return lw.find("n't") != std::string::npos;
}

double normalize(double s) {
    double v = s / std::sqrt(s * s + kAlpha);
    return std::clamp(v, -1.0, 1.0);
}

PolarityScores score_words(const std::vector<std::string>& words, const std::string& text,
                           const SentimentLexicon& lex, const ScoreOptions& options) {
    PolarityScores out;
    if (words.empty()) return out;

    // Mixed case in the document switches on the ALL-CAPS emphasis rule.
    int caps = 0;
    for (const auto& w : words) caps += is_all_caps(w) ? 1 : 0;
    const bool cap_diff = caps > 0 && caps < static_cast<int>(words.size());

    std::vector<std::string> lowered(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) lowered[i] = lower(words[i]);

    std::vector<double> sentiments(words.size(), 0.0);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string& lw = lowered[i];
        if (lex.boosters.count(lw)) continue;  // boosters carry no valence of their own
        auto hit = lex.valence.find(lw);
        if (hit == lex.valence.end()) continue;

        double valence = hit->second;
        if (cap_diff && is_all_caps(words[i]))
            valence += valence > 0 ? kCapsIncr : -kCapsIncr;

        // Window of up to three preceding tokens: boosters scale, negations flip.
        for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
            const std::string& prev = lowered[i - back];
            if (lex.valence.count(prev)) continue;  // lexicon words handled on their own
            auto booster = lex.boosters.find(prev);
            if (booster != lex.boosters.end()) {
                double s = booster->second;
                if (valence < 0) s = -s;
                if (cap_diff && is_all_caps(words[i - back])) s += valence > 0 ? kCapsIncr : -kCapsIncr;
                if (back == 2) s *= 0.95;
                if (back == 3) s *= 0.90;
                valence += s;
            }
            if (is_negation(prev, lex)) valence *= kNegScalar;
        }
        sentiments[i] = valence;
    }

    if (options.but_clause) {
        auto but = std::find(lowered.begin(), lowered.end(), "but");
        if (but != lowered.end()) {
            std::size_t idx = static_cast<std::size_t>(but - lowered.begin());
            for (std::size_t i = 0; i < sentiments.size(); ++i) {
                if (i < idx) sentiments[i] *= 0.5;
                else if (i > idx) sentiments[i] *= 1.5;
            }
        }
    }

    double sum = 0;
    for (double s : sentiments) sum += s;

    int exclaims = static_cast<int>(std::count(text.begin(), text.end(), '!'));
    double punct = std::min(exclaims, 4) * kExclaimIncr;
    int questions = static_cast<int>(std::count(text.begin(), text.end(), '?'));
    if (questions > 1) punct += questions <= 3 ? questions * 0.18 : 0.96;

    if (sum > 0) sum += punct;
    else if (sum < 0) sum -= punct;
    out.compound = normalize(sum);

    double pos_sum = 0, neg_sum = 0;
    int neutral = 0;
    for (double s : sentiments) {
        if (s > 0) pos_sum += s + 1.0;
        else if (s < 0) neg_sum += s - 1.0;
        else ++neutral;
    }
    if (pos_sum > std::fabs(neg_sum)) pos_sum += punct;
    else if (pos_sum < std::fabs(neg_sum)) neg_sum -= punct;

    const double total = pos_sum + std::fabs(neg_sum) + neutral;
    if (total > 0) {
        out.pos = std::fabs(pos_sum / total);
        out.neg = std::fabs(neg_sum / total);
        out.neu = std::fabs(neutral / total);
    }
    return out;
}

}  // namespace

SentimentLexicon make_lexicon(std::unordered_map<std::string, double> valence) {
    SentimentLexicon lex;
    lex.valence = std::move(valence);
    lex.boosters = booster_table();
    lex.negations = negation_table();
    return lex;
}

SentimentLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);

    SentimentLexicon lex = make_lexicon({});
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            ++lex.malformed_lines;
            continue;
        }
        std::string token = lower(line.substr(0, tab));
        auto rest = line.substr(tab + 1);
        double mean = 0;
        try {
            std::size_t used = 0;
            mean = std::stod(rest, &used);
            (void)used;
        } catch (const std::exception&) {
            ++lex.malformed_lines;
            continue;
        }
        if (lex.valence.count(token)) ++lex.duplicate_tokens;
        lex.valence[token] = mean;  // last occurrence wins
    }
    if (lex.valence.empty()) throw Error(ErrorKind::EmptyLexicon, "no usable entries in " + path);
    return lex;
}

PolarityScores score(const std::string& text, const SentimentLexicon& lex,
                     const ScoreOptions& options) {
    if (!options.per_sentence_average) return score_words(split_words(text), text, lex, options);

    // Alternative mode: mean of per-sentence compounds; proportions pooled
    // over the whole text.
    std::vector<std::string> sentences;
    std::string cur;
    for (char c : text) {
        cur += c;
        if (c == '.' || c == '!' || c == '?') {
            sentences.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) sentences.push_back(cur);

    PolarityScores whole = score_words(split_words(text), text, lex, ScoreOptions{options.but_clause, false});
    double sum = 0;
    int used = 0;
    for (const auto& s : sentences) {
        auto words = split_words(s);
        if (words.empty()) continue;
        sum += score_words(words, s, lex, ScoreOptions{options.but_clause, false}).compound;
        ++used;
    }
    whole.compound = used == 0 ? 0.0 : sum / used;
    return whole;
}

double compound_of(const std::string& text, const SentimentLexicon& lex,
                   const ScoreOptions& options) {
    return score(text, lex, options).compound;
}

}  // namespace evidencer::sentiment
