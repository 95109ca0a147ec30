#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evidencer/dates.hpp"
#include "evidencer/errors.hpp"

namespace evidencer::corpus {

// The nine Faculty Opinions recommendation tags. Only four of them take part
// in labeling; the rest are carried through untouched.
enum class RecommendationTag {
    Confirmation,
    ChangesClinicalPractice,
    Controversial,
    Refutation,
    GoodForTeaching,
    InterestingHypothesis,
    NewFinding,
    NovelDrugTarget,
    TechnicalAdvance,
};

constexpr int kRecommendationTagCount = 9;

std::string tag_name(RecommendationTag tag);
RecommendationTag parse_tag(const std::string& name);

struct ExpertRecommendation {
    std::string expert_id;
    std::vector<RecommendationTag> tags;  // non-empty, duplicates ignored
    std::optional<CalendarDate> date;
};

struct CitingSentence {
    std::string text;
    std::string citing_pmid;
    CalendarDate citing_date;
};

struct MeshTerm {
    std::string term;  // "Descriptor" or "Descriptor/qualifier"
    bool major = false;
};

struct ArticleRecord {
    std::string pmid;
    std::string title;
    std::string abstract;  // empty string marks an unavailable abstract
    std::optional<CalendarDate> pub_date;
    std::string journal;
    std::vector<std::string> publication_types;
    std::vector<MeshTerm> mesh_terms;
    std::vector<ExpertRecommendation> recommendations;
    std::vector<CitingSentence> citances;
};

enum class LabelClass { Transformative, Incremental, Excluded };
enum class ExclusionReason { Conflict, InsufficientExperts, NoLabelingTags };

struct Label {
    LabelClass cls = LabelClass::Excluded;
    ExclusionReason reason = ExclusionReason::NoLabelingTags;  // meaningful only when Excluded

    bool is_transformative() const { return cls == LabelClass::Transformative; }
    bool is_incremental() const { return cls == LabelClass::Incremental; }
    bool is_excluded() const { return cls == LabelClass::Excluded; }

    static Label transformative() { return {LabelClass::Transformative, {}}; }
    static Label incremental() { return {LabelClass::Incremental, {}}; }
    static Label excluded(ExclusionReason r) { return {LabelClass::Excluded, r}; }

    friend bool operator==(const Label& a, const Label& b) {
        if (a.cls != b.cls) return false;
        return a.cls != LabelClass::Excluded || a.reason == b.reason;
    }
};

std::string label_name(const Label& label);

// Transformative / incremental / excluded from the expert tags.
// Any article-level mixture of T-set and I-set tags excludes the study; a
// clean class label additionally needs two or more distinct experts backing
// the same class. Deterministic and order-independent.
Label assign_label(const std::vector<ExpertRecommendation>& recs);

// Citances whose date falls inside [pub_date, pub_date + window_months).
// When either side is year-only the comparison degrades to whole years
// (difference of at most window_months/12). Input order preserved.
std::vector<CitingSentence> window_citances(const ArticleRecord& article,
                                            int window_months = 24);

// Date-ordered concatenation with single spaces; ties broken by citing pmid
// then input order.
std::string concat_citances(const std::vector<CitingSentence>& citances);

// Mirrors the PubMed clinical-study filter query over the fields we hold.
bool is_clinical(const ArticleRecord& article);

}  // namespace evidencer::corpus
