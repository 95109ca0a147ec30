#include "evidencer/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <string>

namespace evidencer::corpus {

namespace {

const char* kTagNames[kRecommendationTagCount] = {
    "Confirmation",
    "Changes Clinical Practice",
    "Controversial",
    "Refutation",
    "Good for Teaching",
    "Interesting Hypothesis",
    "New Finding",
    "Novel Drug Target",
    "Technical Advance",
};

std::string normalize_key(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_t_tag(RecommendationTag t) {
    return t == RecommendationTag::Refutation ||
           t == RecommendationTag::ChangesClinicalPractice ||
           t == RecommendationTag::Controversial;
}

bool is_i_tag(RecommendationTag t) { return t == RecommendationTag::Confirmation; }

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle_lower) {
    return lower(haystack).find(needle_lower) != std::string::npos;
}

// "Anti-Bacterial Agents/therapeutic use*" -> descriptor + qualifier, the
// trailing '*' (major-topic marker in printed tables) stripped.
void split_mesh(const std::string& term, std::string& descriptor, std::string& qualifier) {
    std::string t = term;
    if (!t.empty() && t.back() == '*') t.pop_back();
    auto slash = t.find('/');
    if (slash == std::string::npos) {
        descriptor = lower(t);
        qualifier.clear();
    } else {
        descriptor = lower(t.substr(0, slash));
        qualifier = lower(t.substr(slash + 1));
    }
}

}  // namespace

std::string tag_name(RecommendationTag tag) { return kTagNames[static_cast<int>(tag)]; }

RecommendationTag parse_tag(const std::string& name) {
    const std::string key = normalize_key(name);
    for (int i = 0; i < kRecommendationTagCount; ++i) {
        if (key == normalize_key(kTagNames[i])) return static_cast<RecommendationTag>(i);
    }
    throw Error(ErrorKind::SchemaError, "unknown recommendation tag: '" + name + "'");
}

std::string label_name(const Label& label) {
    switch (label.cls) {
        case LabelClass::Transformative: return "transformative";
        case LabelClass::Incremental: return "incremental";
        case LabelClass::Excluded:
            switch (label.reason) {
                case ExclusionReason::Conflict: return "excluded:conflict";
                case ExclusionReason::InsufficientExperts: return "excluded:insufficient_experts";
                case ExclusionReason::NoLabelingTags: return "excluded:no_labeling_tags";
            }
    }
    return "excluded:no_labeling_tags";
}

Label assign_label(const std::vector<ExpertRecommendation>& recs) {
    bool any_t = false;
    bool any_i = false;
    std::set<std::string> t_experts;
    std::set<std::string> i_experts;

    for (const auto& rec : recs) {
        bool rec_t = false;
        bool rec_i = false;
        for (RecommendationTag tag : rec.tags) {
            rec_t = rec_t || is_t_tag(tag);
            rec_i = rec_i || is_i_tag(tag);
        }
        any_t = any_t || rec_t;
        any_i = any_i || rec_i;
        if (rec_t) t_experts.insert(rec.expert_id);
        if (rec_i) i_experts.insert(rec.expert_id);
    }

    if (any_t && any_i) return Label::excluded(ExclusionReason::Conflict);
    if (t_experts.size() >= 2) return Label::transformative();
    if (i_experts.size() >= 2) return Label::incremental();
    if (any_t || any_i) return Label::excluded(ExclusionReason::InsufficientExperts);
    return Label::excluded(ExclusionReason::NoLabelingTags);
}

std::vector<CitingSentence> window_citances(const ArticleRecord& article, int window_months) {
    if (window_months <= 0)
        throw Error(ErrorKind::Validation, "window_months must be positive");
    if (!article.pub_date)
        throw Error(ErrorKind::MissingDate, "article " + article.pmid + " has no pub_date");

    const CalendarDate pub = *article.pub_date;
    std::vector<CitingSentence> kept;
    for (const auto& c : article.citances) {
        const CalendarDate& cit = c.citing_date;
        bool inside = false;
        if (!pub.has_month() || !cit.has_month()) {
            // Year-only on either side: whole-year arithmetic.
            int diff = cit.year - pub.year;
            inside = diff >= 0 && diff <= window_months / 12;
        } else if (pub.has_day() && cit.has_day()) {
            CalendarDate end = pub;
            end.month += window_months;
            end.year += (end.month - 1) / 12;
            end.month = (end.month - 1) % 12 + 1;
            inside = !(cit < pub) && cit < end;
        } else {
            int diff = cit.months_since_epoch() - pub.months_since_epoch();
            inside = diff >= 0 && diff < window_months;
        }
        if (inside) kept.push_back(c);
    }
    return kept;
}

std::string concat_citances(const std::vector<CitingSentence>& citances) {
    std::vector<std::size_t> order(citances.size());
    std::iota(order.begin(), order.end(), 0);

    // Digit-string pmids compare numerically via (length, lexicographic).
    auto pmid_less = [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (citances[a].citing_date != citances[b].citing_date)
            return citances[a].citing_date < citances[b].citing_date;
        if (citances[a].citing_pmid != citances[b].citing_pmid)
            return pmid_less(citances[a].citing_pmid, citances[b].citing_pmid);
        return false;  // stable sort keeps input order
    });

    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += ' ';
        out += citances[order[i]].text;
    }
    return out;
}

bool is_clinical(const ArticleRecord& article) {
    const std::string text = lower(article.title) + " " + lower(article.abstract);

    if (text.find("clinical") != std::string::npos && text.find("trial") != std::string::npos)
        return true;
    if (text.find("random") != std::string::npos) return true;

    for (const auto& pt : article.publication_types) {
        if (contains_ci(pt, "clinical trial")) return true;
    }

    for (const auto& mesh : article.mesh_terms) {
        std::string descriptor, qualifier;
        split_mesh(mesh.term, descriptor, qualifier);
        if (descriptor.find("clinical trials") != std::string::npos) return true;
        if (descriptor == "random allocation") return true;
        if (qualifier == "therapeutic use") return true;
    }
    return false;
}

}  // namespace evidencer::corpus
