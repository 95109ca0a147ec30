#include "evidencer/acquire.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include "evidencer/xml.hpp"

namespace evidencer::acquire {

using corpus::ArticleRecord;
using corpus::CitingSentence;
using corpus::ExpertRecommendation;
using corpus::MeshTerm;
using json = nlohmann::ordered_json;

namespace {

std::string collapse_ws(const std::string& s) {
    std::string out;
    bool in_space = true;  // also trims leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out += ' ';
            out += c;
            in_space = false;
        }
    }
    return out;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

int month_from_string(const std::string& raw) {
    static const char* names[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                                    "jul", "aug", "sep", "oct", "nov", "dec"};
    std::string m;
    for (char c : raw) m += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (all_digits(m)) {
        int v = std::stoi(m);
        return (v >= 1 && v <= 12) ? v : 0;
    }
    for (int i = 0; i < 12; ++i) {
        if (m.rfind(names[i], 0) == 0) return i + 1;
    }
    return 0;
}

std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

std::string url_decode(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
            i += 2;
        } else if (s[i] == '+') {
            out += ' ';
        } else {
            out += s[i];
        }
    }
    return out;
}

class SteadyClock : public Clock {
public:
    double now() override {
        auto t = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double>(t).count();
    }
    void sleep_for(double seconds) override {
        if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
};

class HttplibClient : public HttpClient {
public:
    explicit HttplibClient(double timeout_seconds) : timeout_(timeout_seconds) {}

    HttpResponse get(const std::string& url) override {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw Error(ErrorKind::Transport, "bad url: " + url);
        auto path_start = url.find('/', scheme_end + 3);
        std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client cli(base);
        cli.set_connection_timeout(std::chrono::duration<double>(timeout_));
        cli.set_read_timeout(std::chrono::duration<double>(timeout_));
        cli.set_follow_location(true);
        auto res = cli.Get(path, {{"Accept", "application/sparql-results+json, text/xml, */*"}});
        if (!res)
            throw Error(ErrorKind::Transport,
                        "request failed: " + httplib::to_string(res.error()) + " (" + url + ")");
        return {res->status, res->body};
    }

private:
    double timeout_;
};

class FixtureClient : public HttpClient {
public:
    explicit FixtureClient(std::string dir) : dir_(std::move(dir)) {}

    HttpResponse get(const std::string& url) override {
        const std::string decoded = url_decode(url);
        const bool sparql = decoded.find("query=") != std::string::npos ||
                            decoded.find("sparql") != std::string::npos;
        const std::string pmid = extract_pmid(decoded);
        if (pmid.empty()) throw Error(ErrorKind::Transport, "fixture: no pmid in url " + url);
        const std::string path = dir_ + "/" + pmid + (sparql ? ".srj" : ".xml");
        std::ifstream in(path, std::ios::binary);
        if (!in) return {404, ""};
        std::ostringstream body;
        body << in.rdbuf();
        return {200, body.str()};
    }

private:
    static std::string extract_pmid(const std::string& decoded) {
        std::size_t start = std::string::npos;
        if (auto q = decoded.find("bibo:pmid \""); q != std::string::npos) {
            start = q + 11;
        } else if (auto id = decoded.find("id="); id != std::string::npos) {
            start = id + 3;
        } else {
            // First run of 3+ digits anywhere in the decoded url.
            for (std::size_t i = 0; i + 2 < decoded.size(); ++i) {
                if (std::isdigit(static_cast<unsigned char>(decoded[i])) &&
                    std::isdigit(static_cast<unsigned char>(decoded[i + 1])) &&
                    std::isdigit(static_cast<unsigned char>(decoded[i + 2]))) {
                    start = i;
                    break;
                }
            }
        }
        if (start == std::string::npos) return {};
        std::string pmid;
        while (start < decoded.size() &&
               std::isdigit(static_cast<unsigned char>(decoded[start])))
            pmid += decoded[start++];
        return pmid;
    }

    std::string dir_;
};

}  // namespace

FetchConfig config_from_env(FetchConfig base) {
    if (const char* key = std::getenv("EVIDENCER_EUTILS_KEY"); key && *key)
        base.api_key = key;
    if (const char* url = std::getenv("EVIDENCER_COLIL_URL"); url && *url)
        base.colil_endpoint_url = url;
    return base;
}

std::unique_ptr<HttpClient> make_default_http_client(double timeout_seconds) {
    return std::make_unique<HttplibClient>(timeout_seconds);
}

std::unique_ptr<HttpClient> make_fixture_http_client(const std::string& dir) {
    return std::make_unique<FixtureClient>(dir);
}

std::unique_ptr<Clock> make_steady_clock() { return std::make_unique<SteadyClock>(); }

RateLimiter::RateLimiter(double rate_per_second, Clock& clock)
    // A nanosecond of over-spacing keeps accumulated rounding from ever
    // letting `rate` requests plus one slip into a one-second window.
    : interval_(1.0 / rate_per_second + 1e-9), clock_(clock), next_allowed_(-1e300) {
    if (rate_per_second <= 0)
        throw Error(ErrorKind::Validation, "rate_limit must be positive");
}

void RateLimiter::acquire() {
    std::lock_guard lock(mutex_);
    double t = clock_.now();
    if (t < next_allowed_) {
        clock_.sleep_for(next_allowed_ - t);
        t = next_allowed_;
    }
    next_allowed_ = t + interval_;
}

Fetcher::Fetcher(FetchConfig config, HttpClient& http, Clock& clock, std::uint64_t jitter_seed)
    : config_(std::move(config)),
      http_(http),
      clock_(clock),
      limiter_(config_.effective_rate(), clock),
      jitter_state_(jitter_seed * 2654435761ULL + 1) {}

HttpResponse Fetcher::get_with_retry(const std::string& url) {
    const int attempts = config_.retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        limiter_.acquire();
        HttpResponse resp;
        bool transport_failed = false;
        std::string transport_msg;
        try {
            resp = http_.get(url);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Transport) throw;
            transport_failed = true;
            transport_msg = e.what();
        }
        if (!transport_failed && resp.status != 429 && resp.status < 500) return resp;
        if (attempt + 1 == attempts) {
            if (transport_failed) throw Error(ErrorKind::Transport, transport_msg);
            throw Error(ErrorKind::Transport,
                        "http " + std::to_string(resp.status) + " after " +
                            std::to_string(attempts) + " attempts: " + url);
        }
        double jitter;
        {
            std::lock_guard lock(jitter_mutex_);
            jitter_state_ ^= jitter_state_ << 13;
            jitter_state_ ^= jitter_state_ >> 7;
            jitter_state_ ^= jitter_state_ << 17;
            jitter = static_cast<double>(jitter_state_ >> 11) * 0x1.0p-53;
        }
        const double base_delay = 1.0 / config_.effective_rate();
        clock_.sleep_for(base_delay * static_cast<double>(1 << attempt) * (1.0 + jitter));
    }
    throw Error(ErrorKind::Transport, "unreachable");
}

RawFetchResult Fetcher::fetch_raw(const std::string& pmid, RawFetchResult::Source source) {
    if (!all_digits(pmid))
        throw Error(ErrorKind::Validation, "pmid must be decimal digits: '" + pmid + "'");
    std::string url;
    if (source == RawFetchResult::Source::Eutils) {
        url = config_.eutils_base_url + "/efetch.fcgi?db=pubmed&id=" + pmid +
              "&retmode=xml&rettype=abstract";
        if (config_.api_key) url += "&api_key=" + url_encode(*config_.api_key);
    } else {
        url = config_.colil_endpoint_url + "?query=" + url_encode(sparql_query(pmid)) +
              "&format=json&output=json";
    }
    HttpResponse resp = get_with_retry(url);
    if (resp.status == 404) throw Error(ErrorKind::NotFound, "pmid " + pmid + " not found");
    if (resp.status != 200)
        throw Error(ErrorKind::Transport,
                    "http " + std::to_string(resp.status) + " for pmid " + pmid);
    if (resp.body.empty())
        throw Error(ErrorKind::MalformedResponse, "empty payload for pmid " + pmid);
    return {pmid, resp.body, clock_.now(), source};
}

corpus::ArticleRecord Fetcher::fetch_article(const std::string& pmid) {
    RawFetchResult raw = fetch_raw(pmid, RawFetchResult::Source::Eutils);
    return parse_efetch_xml(pmid, raw.payload);
}

std::string Fetcher::sparql_query(const std::string& pmid) {
    // Shape assumed from the Colil RDF export: one citation-context resource
    // per citing sentence, carrying the sentence text, the citing article's
    // pmid and (when present) its publication date or year.
    return "PREFIX colil: <http://purl.jp/bio/10/colil/ontology/201303#>\n"
           "PREFIX bibo: <http://purl.org/ontology/bibo/>\n"
           "PREFIX dcterms: <http://purl.org/dc/terms/>\n"
           "SELECT ?text ?citing_pmid ?citing_date ?citing_year WHERE {\n"
           "  ?ctx colil:refersTo ?ref ; rdfs:label ?text ; colil:appearsIn ?citing .\n"
           "  ?ref bibo:pmid \"" + pmid + "\" .\n"
           "  ?citing bibo:pmid ?citing_pmid .\n"
           "  OPTIONAL { ?citing dcterms:issued ?citing_date }\n"
           "  OPTIONAL { ?citing dcterms:date ?citing_year }\n"
           "}";
}

CitanceFetch Fetcher::fetch_citances(const std::string& pmid) {
    RawFetchResult raw = fetch_raw(pmid, RawFetchResult::Source::Colil);
    return parse_sparql_results(raw.payload);
}

corpus::ArticleRecord parse_efetch_xml(const std::string& pmid, const std::string& xml_body) {
    xml::Node root = xml::parse(xml_body);

    const xml::Node* article_node = nullptr;
    if (root.name == "PubmedArticleSet") {
        article_node = root.child("PubmedArticle");
    } else if (root.name == "PubmedArticle") {
        article_node = &root;
    }
    if (!article_node) {
        if (root.find("ERROR") || root.name == "ERROR")
            throw Error(ErrorKind::NotFound, "pmid " + pmid + ": " + root.text_content());
        throw Error(ErrorKind::NotFound, "pmid " + pmid + " not in response");
    }

    const xml::Node* citation = article_node->child("MedlineCitation");
    const xml::Node* art = citation ? citation->child("Article") : nullptr;
    if (!art) throw Error(ErrorKind::ParseError, "pmid " + pmid + ": no Article element");

    ArticleRecord rec;
    rec.pmid = pmid;
    if (const xml::Node* id = citation->child("PMID"); id && !id->text().empty())
        rec.pmid = collapse_ws(id->text());

    if (const xml::Node* t = art->child("ArticleTitle"))
        rec.title = collapse_ws(t->text_content());

    // Labeled sections (BACKGROUND:, METHODS:, ...) lose the label, keep the
    // prose, joined with single spaces.
    if (const xml::Node* abst = art->child("Abstract")) {
        std::string joined;
        for (const xml::Node* sec : abst->children_named("AbstractText")) {
            std::string part = collapse_ws(sec->text_content());
            if (part.empty()) continue;
            if (!joined.empty()) joined += ' ';
            joined += part;
        }
        rec.abstract = joined;
    }

    if (const xml::Node* journal = art->child("Journal")) {
        if (const xml::Node* jt = journal->child("Title")) rec.journal = collapse_ws(jt->text());
        if (const xml::Node* pd = journal->find("JournalIssue/PubDate")) {
            CalendarDate d;
            bool have_year = false;
            if (const xml::Node* y = pd->child("Year"); y && all_digits(collapse_ws(y->text()))) {
                d.year = std::stoi(y->text());
                d.precision = DatePrecision::Year;
                have_year = true;
                if (const xml::Node* m = pd->child("Month")) {
                    int month = month_from_string(collapse_ws(m->text()));
                    if (month > 0) {
                        d.month = month;
                        d.precision = DatePrecision::YearMonth;
                        if (const xml::Node* dd = pd->child("Day");
                            dd && all_digits(collapse_ws(dd->text()))) {
                            d.day = std::stoi(dd->text());
                            d.precision = DatePrecision::Day;
                        }
                    }
                }
            } else if (const xml::Node* ml = pd->child("MedlineDate")) {
                // e.g. "2010 Mar-Apr" or "2009-2010": leading year, maybe month.
                std::string text = collapse_ws(ml->text());
                if (text.size() >= 4 && all_digits(text.substr(0, 4))) {
                    d.year = std::stoi(text.substr(0, 4));
                    d.precision = DatePrecision::Year;
                    have_year = true;
                    if (text.size() >= 8) {
                        int month = month_from_string(text.substr(5, 3));
                        if (month > 0) {
                            d.month = month;
                            d.precision = DatePrecision::YearMonth;
                        }
                    }
                }
            }
            if (have_year) rec.pub_date = d;
        }
    }

    if (const xml::Node* ptl = art->child("PublicationTypeList")) {
        for (const xml::Node* pt : ptl->children_named("PublicationType"))
            rec.publication_types.push_back(collapse_ws(pt->text_content()));
    }

    if (const xml::Node* mhl = citation->child("MeshHeadingList")) {
        for (const xml::Node* mh : mhl->children_named("MeshHeading")) {
            const xml::Node* desc = mh->child("DescriptorName");
            if (!desc) continue;
            const std::string dname = collapse_ws(desc->text_content());
            const bool dmajor = desc->attr("MajorTopicYN") == "Y";
            auto qualifiers = mh->children_named("QualifierName");
            if (qualifiers.empty()) {
                rec.mesh_terms.push_back({dname, dmajor});
            } else {
                for (const xml::Node* q : qualifiers) {
                    const bool qmajor = q->attr("MajorTopicYN") == "Y";
                    rec.mesh_terms.push_back(
                        {dname + "/" + collapse_ws(q->text_content()), dmajor || qmajor});
                }
            }
        }
    }

    return rec;
}

CitanceFetch parse_sparql_results(const std::string& json_body) {
    json doc;
    try {
        doc = json::parse(json_body);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedResponse, std::string("sparql json: ") + e.what());
    }
    if (!doc.contains("results") || !doc["results"].contains("bindings"))
        throw Error(ErrorKind::MalformedResponse, "sparql json: missing results.bindings");

    auto value_of = [](const json& binding, std::initializer_list<const char*> names)
        -> std::optional<std::string> {
        for (const char* n : names) {
            if (binding.contains(n) && binding[n].contains("value"))
                return binding[n]["value"].get<std::string>();
        }
        return std::nullopt;
    };

    CitanceFetch out;
    std::vector<std::pair<std::string, std::string>> seen;
    for (const auto& b : doc["results"]["bindings"]) {
        auto text = value_of(b, {"text", "context", "ctx"});
        auto citing = value_of(b, {"citing_pmid", "pmid", "citing"});
        if (!text || !citing) continue;
        std::string trimmed = collapse_ws(*text);
        if (trimmed.empty()) continue;

        std::optional<CalendarDate> date;
        if (auto ds = value_of(b, {"citing_date", "date", "issued"}))
            date = try_parse_date(*ds);
        if (!date) {
            // Fall back to a bare year from the citing article metadata.
            if (auto ys = value_of(b, {"citing_year", "year"})) {
                std::string y = *ys;
                if (y.size() >= 4 && all_digits(y.substr(0, 4)))
                    date = CalendarDate{std::stoi(y.substr(0, 4)), 0, 0, DatePrecision::Year};
            }
        }
        if (!date) {
            ++out.dropped_missing_date;
            continue;
        }

        std::pair<std::string, std::string> key{trimmed, *citing};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        out.citances.push_back({trimmed, *citing, *date});
    }
    return out;
}

namespace {

json date_to_json(const std::optional<CalendarDate>& d) {
    return d ? json(format_date(*d)) : json("");
}

std::optional<CalendarDate> date_from_json(const json& j, const std::string& field, int line) {
    if (!j.is_string())
        throw Error(ErrorKind::SchemaError,
                    "line " + std::to_string(line) + ": field '" + field + "' must be a string");
    const std::string s = j.get<std::string>();
    if (s.empty()) return std::nullopt;
    auto d = try_parse_date(s);
    if (!d)
        throw Error(ErrorKind::SchemaError,
                    "line " + std::to_string(line) + ": field '" + field + "' has invalid date '" +
                        s + "'");
    return d;
}

[[noreturn]] void schema_fail(int line, const std::string& field, const std::string& why) {
    throw Error(ErrorKind::SchemaError,
                "line " + std::to_string(line) + ": field '" + field + "' " + why);
}

const json& require(const json& obj, const std::string& field, int line) {
    if (!obj.contains(field)) schema_fail(line, field, "is missing");
    return obj.at(field);
}

std::string require_string(const json& obj, const std::string& field, int line) {
    const json& v = require(obj, field, line);
    if (!v.is_string()) schema_fail(line, field, "must be a string");
    return v.get<std::string>();
}

}  // namespace

std::string record_to_json(const ArticleRecord& rec) {
    json j;
    j["pmid"] = rec.pmid;
    j["title"] = rec.title;
    j["abstract"] = rec.abstract;
    j["pub_date"] = date_to_json(rec.pub_date);
    j["journal"] = rec.journal;
    j["publication_types"] = rec.publication_types;
    j["mesh_terms"] = json::array();
    for (const auto& m : rec.mesh_terms)
        j["mesh_terms"].push_back({{"term", m.term}, {"major", m.major}});
    j["recommendations"] = json::array();
    for (const auto& r : rec.recommendations) {
        json tags = json::array();
        for (auto t : r.tags) tags.push_back(corpus::tag_name(t));
        j["recommendations"].push_back(
            {{"expert_id", r.expert_id}, {"tags", tags}, {"date", date_to_json(r.date)}});
    }
    j["citances"] = json::array();
    for (const auto& c : rec.citances)
        j["citances"].push_back({{"text", c.text},
                                 {"citing_pmid", c.citing_pmid},
                                 {"citing_date", format_date(c.citing_date)}});
    return j.dump();
}

ArticleRecord record_from_json(const std::string& line, int line_number) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError,
                    "line " + std::to_string(line_number) + ": invalid json: " + e.what());
    }
    if (!j.is_object()) schema_fail(line_number, "<record>", "must be a json object");

    ArticleRecord rec;
    rec.pmid = require_string(j, "pmid", line_number);
    if (rec.pmid.empty()) schema_fail(line_number, "pmid", "must be non-empty");
    rec.title = require_string(j, "title", line_number);
    rec.abstract = require_string(j, "abstract", line_number);
    rec.pub_date = date_from_json(require(j, "pub_date", line_number), "pub_date", line_number);
    if (j.contains("journal")) rec.journal = require_string(j, "journal", line_number);
    if (j.contains("publication_types")) {
        const json& pts = j.at("publication_types");
        if (!pts.is_array()) schema_fail(line_number, "publication_types", "must be an array");
        for (const auto& pt : pts) rec.publication_types.push_back(pt.get<std::string>());
    }

    const json& mesh = require(j, "mesh_terms", line_number);
    if (!mesh.is_array()) schema_fail(line_number, "mesh_terms", "must be an array");
    for (const auto& m : mesh) {
        MeshTerm term;
        term.term = require_string(m, "term", line_number);
        const json& major = require(m, "major", line_number);
        if (!major.is_boolean()) schema_fail(line_number, "major", "must be a boolean");
        term.major = major.get<bool>();
        rec.mesh_terms.push_back(term);
    }

    const json& recs = require(j, "recommendations", line_number);
    if (!recs.is_array()) schema_fail(line_number, "recommendations", "must be an array");
    for (const auto& r : recs) {
        ExpertRecommendation er;
        er.expert_id = require_string(r, "expert_id", line_number);
        const json& tags = require(r, "tags", line_number);
        if (!tags.is_array() || tags.empty()) schema_fail(line_number, "tags", "must be a non-empty array");
        for (const auto& t : tags) {
            try {
                er.tags.push_back(corpus::parse_tag(t.get<std::string>()));
            } catch (const Error&) {
                schema_fail(line_number, "tags", "contains unknown tag '" + t.get<std::string>() + "'");
            }
        }
        if (r.contains("date")) er.date = date_from_json(r.at("date"), "date", line_number);
        rec.recommendations.push_back(std::move(er));
    }

    const json& cits = require(j, "citances", line_number);
    if (!cits.is_array()) schema_fail(line_number, "citances", "must be an array");
    for (const auto& c : cits) {
        CitingSentence cs;
        cs.text = require_string(c, "text", line_number);
        if (collapse_ws(cs.text).empty()) schema_fail(line_number, "text", "must be non-empty");
        cs.citing_pmid = require_string(c, "citing_pmid", line_number);
        auto d = date_from_json(require(c, "citing_date", line_number), "citing_date", line_number);
        if (!d) schema_fail(line_number, "citing_date", "must be a date");
        cs.citing_date = *d;
        rec.citances.push_back(std::move(cs));
    }

    return rec;
}

std::vector<ArticleRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::vector<ArticleRecord> records;
    std::set<std::string> seen;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (collapse_ws(line).empty()) continue;
        records.push_back(record_from_json(line, line_number));
        if (!seen.insert(records.back().pmid).second)
            throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_number) +
                                                    ": field 'pmid' duplicates " +
                                                    records.back().pmid);
    }
    return records;
}

void save_corpus(const std::vector<ArticleRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    for (const auto& rec : records) out << record_to_json(rec) << '\n';
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

}  // namespace evidencer::acquire
