#include "evidencer/lingua.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evidencer/rng.hpp"

namespace evidencer::lingua {

namespace {

bool is_split_punct(char c) {
    switch (c) {
        case '.': case ',': case ';': case ':': case '!': case '?':
        case '(': case ')': case '[': case ']': case '"': case '\'':
            return true;
        default:
            return false;
    }
}

// Decodes one UTF-8 codepoint; advances len. Invalid bytes fall back to a
// single-byte step so offsets never desync.
unsigned long decode_utf8(const std::string& s, std::size_t pos, std::size_t& len) {
    unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c < 0x80) {
        len = 1;
        return c;
    }
    std::size_t need = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 1;
    if (need == 1 || pos + need > s.size()) {
        len = 1;
        return c;
    }
    unsigned long cp = c & (0x7F >> need);
    for (std::size_t i = 1; i < need; ++i) {
        unsigned char cc = static_cast<unsigned char>(s[pos + i]);
        if ((cc & 0xC0) != 0x80) {
            len = 1;
            return c;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    len = need;
    return cp;
}

bool is_unicode_space(unsigned long cp) {
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f')
        return true;
    if (cp == 0xA0 || cp == 0x1680 || cp == 0x202F || cp == 0x205F || cp == 0x3000 ||
        cp == 0x2028 || cp == 0x2029 || cp == 0x200B)
        return true;
    return cp >= 0x2000 && cp <= 0x200A;
}

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        std::size_t len = 0;
        unsigned long cp = decode_utf8(text, i, len);
        if (is_unicode_space(cp)) {
            i += len;
            continue;
        }
        // Collect a whitespace-delimited span.
        std::size_t start = i;
        while (i < n) {
            cp = decode_utf8(text, i, len);
            if (is_unicode_space(cp)) break;
            i += len;
        }
        std::size_t s = start, e = i;
        while (s < e && is_split_punct(text[s])) {
            tokens.push_back({text.substr(s, 1), s, s + 1});
            ++s;
        }
        std::size_t trail = e;
        while (trail > s && is_split_punct(text[trail - 1])) --trail;
        if (trail > s) tokens.push_back({text.substr(s, trail - s), s, trail});
        for (std::size_t p = trail; p < e; ++p)
            tokens.push_back({text.substr(p, 1), p, p + 1});
    }
    return tokens;
}

std::vector<TaggedToken> parse_tagged_line(const std::string& line) {
    std::vector<TaggedToken> sentence;
    std::istringstream iss(line);
    std::string item;
    while (iss >> item) {
        auto sep = item.rfind('_');
        if (sep == std::string::npos || sep == 0 || sep + 1 == item.size())
            throw Error(ErrorKind::SchemaError, "bad token_TAG item: '" + item + "'");
        sentence.push_back({{item.substr(0, sep), 0, 0}, item.substr(sep + 1)});
    }
    return sentence;
}

std::vector<std::vector<TaggedToken>> read_tagged_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::vector<std::vector<TaggedToken>> corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto sentence = parse_tagged_line(line);
        if (!sentence.empty()) corpus.push_back(std::move(sentence));
    }
    return corpus;
}

const std::vector<std::string>& default_tagset() {
    static const std::vector<std::string> tags = {
        "CC", "CD", "DT",  "EX",  "FW",  "IN", "JJ",  "JJR", "JJS", "LS",  "MD",  "NN",
        "NNP", "NNPS", "NNS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM",
        "TO", "UH", "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
        ".",  ",",  ":",   "(",   ")",   "''",  "``",  "#",   "$",
    };
    return tags;
}

std::vector<std::string> load_tagset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::vector<std::string> tags;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        std::string tag;
        iss >> tag;
        if (!tag.empty()) tags.push_back(tag);
    }
    if (tags.empty()) throw Error(ErrorKind::SchemaError, "tagset file is empty: " + path);
    return tags;
}

namespace {

struct Shape {
    bool capitalized;
    bool has_digit;
    bool has_hyphen;
};

Shape shape_of(const std::string& word) {
    Shape s{false, false, false};
    if (!word.empty()) s.capitalized = std::isupper(static_cast<unsigned char>(word[0])) != 0;
    for (char c : word) {
        if (std::isdigit(static_cast<unsigned char>(c))) s.has_digit = true;
        if (c == '-') s.has_hyphen = true;
    }
    return s;
}

// Feature set: the word itself, its lowercase form, suffixes of length 1-3,
// the two previous (predicted) tags, the neighbouring words, and shape flags.
std::vector<std::string> extract_features(const std::vector<std::string>& words, std::size_t i,
                                          const std::string& prev_tag,
                                          const std::string& prev2_tag) {
    const std::string& word = words[i];
    const std::string lw = lower_ascii(word);
    std::vector<std::string> feats;
    feats.reserve(12);
    feats.push_back("bias");
    feats.push_back("w=" + word);
    feats.push_back("lw=" + lw);
    for (std::size_t k = 1; k <= 3; ++k)
        if (lw.size() >= k) feats.push_back("suf" + std::to_string(k) + "=" + lw.substr(lw.size() - k));
    feats.push_back("t-1=" + prev_tag);
    feats.push_back("t-2=" + prev2_tag);
    feats.push_back("w-1=" + (i > 0 ? lower_ascii(words[i - 1]) : std::string("<s>")));
    feats.push_back("w+1=" + (i + 1 < words.size() ? lower_ascii(words[i + 1]) : std::string("</s>")));
    Shape sh = shape_of(word);
    feats.push_back(std::string("shape=") + (sh.capitalized ? 'C' : 'x') +
                    (sh.has_digit ? 'D' : 'x') + (sh.has_hyphen ? 'H' : 'x'));
    return feats;
}

struct Cell {
    double weight = 0;
    double total = 0;
    int stamp = 0;
};

using WeightTable = std::unordered_map<std::string, std::unordered_map<std::string, Cell>>;

std::string argmax_tag(const WeightTable& table, const std::vector<std::string>& feats,
                       const std::vector<std::string>& tagset, bool averaged_field) {
    std::unordered_map<std::string, double> scores;
    for (const auto& f : feats) {
        auto it = table.find(f);
        if (it == table.end()) continue;
        for (const auto& [tag, cell] : it->second)
            scores[tag] += averaged_field ? cell.total : cell.weight;
    }
    // First maximum in tagset order keeps decoding deterministic.
    const std::string* best = nullptr;
    double best_score = 0;
    for (const auto& tag : tagset) {
        auto it = scores.find(tag);
        double s = it == scores.end() ? 0.0 : it->second;
        if (!best || s > best_score) {
            best = &tag;
            best_score = s;
        }
    }
    return best ? *best : std::string();
}

std::string score_tag(const TaggerModel& model, const std::vector<std::string>& feats) {
    std::unordered_map<std::string, double> scores;
    for (const auto& f : feats) {
        auto it = model.weights.find(f);
        if (it == model.weights.end()) continue;
        for (const auto& [tag, w] : it->second) scores[tag] += w;
    }
    const std::string* best = nullptr;
    double best_score = 0;
    for (const auto& tag : model.tagset) {
        auto it = scores.find(tag);
        double s = it == scores.end() ? 0.0 : it->second;
        if (!best || s > best_score) {
            best = &tag;
            best_score = s;
        }
    }
    return best ? *best : std::string();
}

}  // namespace

TaggerModel train_tagger(const std::vector<std::vector<TaggedToken>>& tagged_corpus,
                         const TrainOptions& options) {
    if (options.iterations < 1)
        throw Error(ErrorKind::EmptyTraining, "iterations must be >= 1");
    std::size_t token_count = 0;
    for (const auto& s : tagged_corpus) token_count += s.size();
    if (tagged_corpus.empty() || token_count == 0)
        throw Error(ErrorKind::EmptyCorpus, "training corpus is empty");

    TaggerModel model;
    model.tagset = default_tagset();
    auto in_tagset = [&](const std::string& t) {
        return std::find(model.tagset.begin(), model.tagset.end(), t) != model.tagset.end();
    };

    // Unambiguous-word dictionary, keyed on the lowercased surface form.
    std::unordered_map<std::string, std::unordered_map<std::string, int>> word_tags;
    for (const auto& sentence : tagged_corpus) {
        for (const auto& tt : sentence) {
            if (!in_tagset(tt.tag))
                throw Error(ErrorKind::SchemaError, "tag '" + tt.tag + "' not in the closed tagset");
            word_tags[lower_ascii(tt.token.surface)][tt.tag] += 1;
        }
    }
    for (const auto& [word, tags] : word_tags) {
        if (tags.size() != 1) continue;
        const auto& [tag, count] = *tags.begin();
        if (count >= options.dict_min_count) model.tag_dict[word] = tag;
    }

    WeightTable table;
    int steps = 0;
    auto update = [&](const std::string& truth, const std::string& guess,
                      const std::vector<std::string>& feats) {
        ++steps;
        if (truth == guess) return;
        for (const auto& f : feats) {
            for (const std::string* tag : {&truth, &guess}) {
                Cell& cell = table[f][*tag];
                cell.total += (steps - cell.stamp) * cell.weight;
                cell.stamp = steps;
                cell.weight += (tag == &truth) ? 1.0 : -1.0;
            }
        }
    };

    std::vector<std::size_t> order(tagged_corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(options.seed);

    for (int iter = 0; iter < options.iterations; ++iter) {
        for (std::size_t si : order) {
            const auto& sentence = tagged_corpus[si];
            std::vector<std::string> words(sentence.size());
            for (std::size_t i = 0; i < sentence.size(); ++i) words[i] = sentence[i].token.surface;

            std::string prev = "<S>", prev2 = "<S>";
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                std::string guess;
                auto dict_it = model.tag_dict.find(lower_ascii(words[i]));
                if (dict_it != model.tag_dict.end()) {
                    guess = dict_it->second;
                } else {
                    auto feats = extract_features(words, i, prev, prev2);
                    guess = argmax_tag(table, feats, model.tagset, false);
                    update(sentence[i].tag, guess, feats);
                }
                prev2 = prev;
                prev = guess;
            }
        }
        rng.shuffle(order);
    }

    // Averaging: fold in the pending spans and divide by the step count.
    for (auto& [feat, tags] : table) {
        for (auto& [tag, cell] : tags) {
            double avg = (cell.total + (steps - cell.stamp) * cell.weight) / std::max(steps, 1);
            if (avg != 0.0) model.weights[feat][tag] = avg;
        }
    }
    model.iterations = options.iterations;
    return model;
}

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TaggerModel& model) {
    if (!model.trained()) throw Error(ErrorKind::UntrainedModel, "tagger model is not trained");
    std::vector<std::string> words(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) words[i] = tokens[i].surface;

    std::vector<TaggedToken> out;
    out.reserve(tokens.size());
    std::string prev = "<S>", prev2 = "<S>";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string tag;
        auto dict_it = model.tag_dict.find(lower_ascii(words[i]));
        if (dict_it != model.tag_dict.end()) {
            tag = dict_it->second;
        } else {
            tag = score_tag(model, extract_features(words, i, prev, prev2));
        }
        out.push_back({tokens[i], tag});
        prev2 = prev;
        prev = tag;
    }
    return out;
}

std::vector<TaggedToken> tag_text(const std::string& text, const TaggerModel& model) {
    return pos_tag(tokenize(text), model);
}

std::map<std::string, double> tag_histogram(const std::vector<TaggedToken>& tagged,
                                            const std::vector<std::string>& tagset) {
    std::map<std::string, double> hist;
    for (const auto& tag : tagset) hist[tag] = 0.0;
    if (tagged.empty()) return hist;
    const double unit = 1.0 / static_cast<double>(tagged.size());
    for (const auto& tt : tagged) {
        auto it = hist.find(tt.tag);
        if (it != hist.end()) it->second += unit;
    }
    return hist;
}

std::map<std::string, double> tag_counts(const std::vector<TaggedToken>& tagged,
                                         const std::vector<std::string>& tagset) {
    std::map<std::string, double> counts;
    for (const auto& tag : tagset) counts[tag] = 0.0;
    for (const auto& tt : tagged) {
        auto it = counts.find(tt.tag);
        if (it != counts.end()) it->second += 1.0;
    }
    return counts;
}

void save_tagger(const TaggerModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << "evidencer-tagger v1\n";
    out << "iterations " << model.iterations << "\n";
    out << "tagset";
    for (const auto& t : model.tagset) out << ' ' << t;
    out << "\n";

    std::vector<std::pair<std::string, std::string>> dict(model.tag_dict.begin(),
                                                          model.tag_dict.end());
    std::sort(dict.begin(), dict.end());
    out << "dict " << dict.size() << "\n";
    for (const auto& [w, t] : dict) out << w << '\t' << t << '\n';

    std::vector<std::pair<std::string, std::pair<std::string, double>>> rows;
    for (const auto& [f, tags] : model.weights)
        for (const auto& [t, w] : tags) rows.push_back({f, {t, w}});
    std::sort(rows.begin(), rows.end());
    out << "weights " << rows.size() << "\n";
    char buf[64];
    for (const auto& [f, tw] : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", tw.second);
        out << f << '\t' << tw.first << '\t' << buf << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

TaggerModel load_tagger(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    auto fail = [&](const std::string& why) {
        return Error(ErrorKind::SchemaError, "tagger model " + path + ": " + why);
    };

    std::string line;
    if (!std::getline(in, line) || line != "evidencer-tagger v1") throw fail("bad header");

    TaggerModel model;
    std::string word;
    if (!(in >> word >> model.iterations) || word != "iterations") throw fail("bad iterations");
    if (!(in >> word) || word != "tagset") throw fail("bad tagset");
    std::getline(in, line);
    {
        std::istringstream iss(line);
        std::string tag;
        while (iss >> tag) model.tagset.push_back(tag);
    }
    if (model.tagset.empty()) throw fail("empty tagset");

    std::size_t n = 0;
    if (!(in >> word >> n) || word != "dict") throw fail("bad dict count");
    std::getline(in, line);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw fail("truncated dict");
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw fail("bad dict line: " + line);
        model.tag_dict[line.substr(0, tab)] = line.substr(tab + 1);
    }

    if (!(in >> word >> n) || word != "weights") throw fail("bad weights count");
    std::getline(in, line);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw fail("truncated weights");
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw fail("bad weight line: " + line);
        model.weights[line.substr(0, t1)][line.substr(t1 + 1, t2 - t1 - 1)] =
            std::stod(line.substr(t2 + 1));
    }
    return model;
}

double tagging_accuracy(const TaggerModel& model,
                        const std::vector<std::vector<TaggedToken>>& gold) {
    std::size_t correct = 0, total = 0;
    for (const auto& sentence : gold) {
        std::vector<Token> tokens(sentence.size());
        for (std::size_t i = 0; i < sentence.size(); ++i) tokens[i] = sentence[i].token;
        auto tagged = pos_tag(tokens, model);
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            total += 1;
            if (tagged[i].tag == sentence[i].tag) correct += 1;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace evidencer::lingua
