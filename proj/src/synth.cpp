#include "evidencer/synth.hpp"

#include <string>

#include "evidencer/rng.hpp"

namespace evidencer::synth {

using corpus::ArticleRecord;
using corpus::CitingSentence;
using corpus::ExpertRecommendation;
using corpus::RecommendationTag;

namespace {

const char* kTopics[] = {
    "aspirin",     "statin",      "propofol",    "insulin",     "heparin",
    "antibiotic",  "probiotic",   "vaccination", "colonoscopy", "angioplasty",
    "ventilation", "transfusion", "dialysis",    "chemotherapy", "screening",
    "stenting",    "anesthesia",  "sedation",    "rehydration", "monitoring",
};

const char* kConditions[] = {
    "sepsis",       "pneumonia",   "stroke",        "diabetes",     "hypertension",
    "arrhythmia",   "anemia",      "delirium",      "thrombosis",   "infection",
    "heart failure", "colitis",    "migraine",      "obesity",      "asthma",
};

// Citance templates; %T topic, %C condition. The incremental pool leans on
// present-tense agreement verbs, the transformative pool on contrast cues.
const char* kNeutralCitances[] = {
    "the findings support the use of %T in patients with %C .",
    "this is supported by the recent trial of %T for %C .",
    "these results confirm the benefit of %T therapy in %C .",
    "the trial supports earlier reports on %T for %C .",
    "subsequent studies agree with the reported effect of %T on %C .",
    "the evidence supports %T as standard care for %C .",
    "this large trial validates the role of %T in %C management .",
    "the data are consistent with the benefit of %T in %C .",
    "current guidelines endorse %T for patients with %C .",
    "the study strengthens the case for %T in %C .",
};

const char* kCueCitances[] = {
    "however , the trial failed to confirm the benefit of %T in %C .",
    "these findings were questioned by subsequent trials of %T .",
    "however , later studies contradicted the reported effect of %T on %C .",
    "the study did not demonstrate any improvement with %T in %C .",
    "this finding was refuted by a larger trial of %T .",
    "the results challenged the established role of %T in %C .",
    "however , the claimed benefit of %T remains in question .",
    "a subsequent trial raised the question whether %T helps in %C .",
    "the reported effect of %T was not replicated in %C cohorts .",
    "however , critics questioned whether %T improved %C outcomes .",
};

const char* kAbstractSentences[] = {
    "we enrolled patients in a randomized clinical trial of %T for %C .",
    "patients were randomly assigned to %T or placebo .",
    "the primary outcome was mortality at thirty days .",
    "secondary outcomes included length of stay and adverse events .",
    "enrollment took place at twelve academic centers .",
    "analyses followed the intention to treat principle .",
    "baseline characteristics were similar between the groups .",
    "the trial protocol was approved at each center .",
    "we report the primary results of the %T trial in %C .",
    "visits occurred at one month and at six months .",
};

const char* kMeshPool[] = {
    "Anti-Bacterial Agents/therapeutic use",
    "Antineoplastic Combined Chemotherapy Protocols/therapeutic use",
    "Critical Illness/therapy",
    "Respiration, Artificial",
    "Propofol/administration & dosage",
    "Hospital Mortality",
    "Fluid Therapy/methods",
    "Probiotics/therapeutic use",
    "Cardiac Surgical Procedures",
    "Cross Infection/prevention & control",
    "Anticoagulants/administration & dosage",
    "Atrial Fibrillation/drug therapy",
};

const char* kJournals[] = {
    "The New England Journal of Medicine",
    "The Lancet",
    "The Journal of the American Medical Association",
    "Anesthesiology",
    "Critical Care Medicine",
    "Circulation",
    "BMJ",
};

const RecommendationTag kTSet[] = {RecommendationTag::Refutation,
                                   RecommendationTag::ChangesClinicalPractice,
                                   RecommendationTag::Controversial};

const RecommendationTag kNeutralTags[] = {RecommendationTag::GoodForTeaching,
                                          RecommendationTag::NewFinding,
                                          RecommendationTag::InterestingHypothesis,
                                          RecommendationTag::TechnicalAdvance,
                                          RecommendationTag::NovelDrugTarget};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&pool)[N]) {
    return pool[rng.uniform_int(N)];
}

std::string fill(std::string tmpl, const std::string& topic, const std::string& condition) {
    for (std::string::size_type p; (p = tmpl.find("%T")) != std::string::npos;)
        tmpl.replace(p, 2, topic);
    for (std::string::size_type p; (p = tmpl.find("%C")) != std::string::npos;)
        tmpl.replace(p, 2, condition);
    return tmpl;
}

CalendarDate month_offset(const CalendarDate& base, int months) {
    CalendarDate d = base;
    int m = (d.month - 1) + months;
    d.year += m / 12;
    d.month = m % 12 + 1;
    d.precision = DatePrecision::YearMonth;
    return d;
}

}  // namespace

std::vector<ArticleRecord> generate_corpus(const SynthConfig& config) {
    Rng rng(config.seed);
    std::vector<ArticleRecord> records;
    const int n_transformative =
        static_cast<int>(config.n_docs * config.transformative_fraction + 0.5);

    int next_pmid = 90000001;
    int next_citing = 95000001;
    int next_expert = 100;

    auto make_doc = [&](bool transformative, int kind /*0 labeled,1 conflict,2 single*/) {
        ArticleRecord rec;
        rec.pmid = std::to_string(next_pmid++);
        const std::string topic = pick(rng, kTopics);
        const std::string condition = pick(rng, kConditions);
        rec.title = "a randomized trial of " + topic + " in " + condition;
        rec.journal = pick(rng, kJournals);
        rec.publication_types = {"Randomized Controlled Trial"};

        CalendarDate pub;
        pub.year = 2005 + static_cast<int>(rng.uniform_int(11));
        pub.month = 1 + static_cast<int>(rng.uniform_int(12));
        pub.precision = DatePrecision::YearMonth;
        rec.pub_date = pub;

        std::string abstract;
        for (int s = 0; s < config.abstract_sentences; ++s) {
            if (s > 0) abstract += ' ';
            abstract += fill(pick(rng, kAbstractSentences), topic, condition);
        }
        rec.abstract = abstract;

        int n_mesh = 1 + static_cast<int>(rng.uniform_int(3));
        for (int m = 0; m < n_mesh; ++m)
            rec.mesh_terms.push_back({pick(rng, kMeshPool), rng.uniform_real() < 0.6});

        const double cue_rate = transformative ? config.cue_rate_t : config.cue_rate_i;
        int n_citances = config.min_citances +
                         static_cast<int>(rng.uniform_int(
                             static_cast<std::uint64_t>(config.max_citances - config.min_citances + 1)));
        for (int c = 0; c < n_citances; ++c) {
            const bool cue = rng.uniform_real() < cue_rate;
            CitingSentence cs;
            cs.text = fill(cue ? pick(rng, kCueCitances) : pick(rng, kNeutralCitances), topic,
                           condition);
            cs.citing_pmid = std::to_string(next_citing++);
            cs.citing_date = month_offset(pub, 1 + static_cast<int>(rng.uniform_int(22)));
            rec.citances.push_back(std::move(cs));
        }
        // An occasional late citance the window filter must drop.
        if (rng.uniform_real() < 0.3) {
            CitingSentence late;
            late.text = fill(pick(rng, kNeutralCitances), topic, condition);
            late.citing_pmid = std::to_string(next_citing++);
            late.citing_date = month_offset(pub, 30 + static_cast<int>(rng.uniform_int(24)));
            rec.citances.push_back(std::move(late));
        }

        auto expert = [&]() { return "expert-" + std::to_string(next_expert++); };
        if (kind == 1) {
            // Conflicting tags: one expert mixes both classes.
            rec.recommendations.push_back(
                {expert(), {RecommendationTag::Confirmation, RecommendationTag::Controversial}, pub});
        } else if (kind == 2) {
            rec.recommendations.push_back(
                {expert(),
                 {transformative ? RecommendationTag::Refutation : RecommendationTag::Confirmation},
                 pub});
        } else if (transformative) {
            for (int e = 0; e < 2; ++e) {
                std::vector<RecommendationTag> tags{pick(rng, kTSet)};
                if (rng.uniform_real() < 0.25) tags.push_back(pick(rng, kNeutralTags));
                rec.recommendations.push_back({expert(), tags, pub});
            }
        } else {
            for (int e = 0; e < 2; ++e) {
                std::vector<RecommendationTag> tags{RecommendationTag::Confirmation};
                if (rng.uniform_real() < 0.25) tags.push_back(pick(rng, kNeutralTags));
                rec.recommendations.push_back({expert(), tags, pub});
            }
        }
        records.push_back(std::move(rec));
    };

    for (int i = 0; i < config.n_docs; ++i) make_doc(i < n_transformative, 0);
    const int extra = static_cast<int>(config.n_docs * config.excluded_fraction);
    for (int i = 0; i < extra; ++i) make_doc(i % 2 == 0, 1 + i % 2);

    // Shuffle so class membership is not positional.
    rng.shuffle(records);
    return records;
}

std::vector<ArticleRecord> shuffle_labels(std::vector<ArticleRecord> records,
                                          std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<ExpertRecommendation>> recs;
    recs.reserve(records.size());
    for (auto& r : records) recs.push_back(std::move(r.recommendations));
    rng.shuffle(recs);
    for (std::size_t i = 0; i < records.size(); ++i) records[i].recommendations = std::move(recs[i]);
    return records;
}

}  // namespace evidencer::synth
