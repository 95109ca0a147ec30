#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "evidencer/corpus.hpp"
#include "evidencer/errors.hpp"

namespace evidencer::acquire {

struct FetchConfig {
    std::string eutils_base_url = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
    std::string colil_endpoint_url = "https://colil.dbcls.jp/sparql";
    std::optional<std::string> api_key;
    double rate_limit = 0.0;  // requests/second; 0 picks the NCBI default below
    int retries = 3;
    double timeout_seconds = 30.0;

    // 3 req/s anonymous, 10 req/s with an API key (NCBI usage guidance).
    double effective_rate() const {
        if (rate_limit > 0) return rate_limit;
        return api_key ? 10.0 : 3.0;
    }
};

// Reads FetchConfig overrides from EVIDENCER_EUTILS_KEY / EVIDENCER_COLIL_URL.
FetchConfig config_from_env(FetchConfig base = {});

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Transport seam: production code talks to libcurl-less cpp-httplib, tests
// inject canned responses. get() may throw Error(Transport) for network
// failures; HTTP-level errors come back as status codes.
class HttpClient {
public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& url) = 0;
};

std::unique_ptr<HttpClient> make_default_http_client(double timeout_seconds);

// Serves fixture files from a directory: {pmid}.xml and {pmid}.srj.
std::unique_ptr<HttpClient> make_fixture_http_client(const std::string& dir);

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;               // seconds, monotonic
    virtual void sleep_for(double seconds) = 0;
};

std::unique_ptr<Clock> make_steady_clock();

// Enforces a minimum spacing of 1/rate seconds between acquisitions, so no
// half-open one-second window ever sees more than `rate` requests.
class RateLimiter {
public:
    RateLimiter(double rate_per_second, Clock& clock);
    void acquire();

private:
    double interval_;
    Clock& clock_;
    double next_allowed_;
    std::mutex mutex_;
};

struct RawFetchResult {
    std::string pmid;
    std::string payload;
    double fetched_at = 0;
    enum class Source { Eutils, Colil } source = Source::Eutils;
};

struct CitanceFetch {
    std::vector<corpus::CitingSentence> citances;
    int dropped_missing_date = 0;
};

// PubMed + Colil client sharing one rate limiter. Thread-safe: the limiter is
// the only mutable state.
class Fetcher {
public:
    Fetcher(FetchConfig config, HttpClient& http, Clock& clock, std::uint64_t jitter_seed = 0);

    // E-utilities efetch: title, abstract, dates, MeSH terms, publication
    // types, journal. Recommendations are not populated here; expert tags
    // arrive as separate input data.
    corpus::ArticleRecord fetch_article(const std::string& pmid);

    // Colil SPARQL: citation context sentences with citing pmid and date.
    // Duplicate (text, citing_pmid) pairs are collapsed; bindings without any
    // date information are dropped and counted.
    CitanceFetch fetch_citances(const std::string& pmid);

    // Verbatim payload with retry/rate-limit handling applied; what the two
    // typed fetches parse.
    RawFetchResult fetch_raw(const std::string& pmid, RawFetchResult::Source source);

private:
    HttpResponse get_with_retry(const std::string& url);
    static std::string sparql_query(const std::string& pmid);

    FetchConfig config_;
    HttpClient& http_;
    Clock& clock_;
    RateLimiter limiter_;
    std::uint64_t jitter_state_;
    std::mutex jitter_mutex_;
};

// Parsers are exposed separately so fixture payloads can be tested without a
// client in the loop.
corpus::ArticleRecord parse_efetch_xml(const std::string& pmid, const std::string& xml_body);
CitanceFetch parse_sparql_results(const std::string& json_body);

// JSON Lines corpus store; save followed by load is the identity.
std::vector<corpus::ArticleRecord> load_corpus(const std::string& path);
void save_corpus(const std::vector<corpus::ArticleRecord>& records, const std::string& path);

// Single-record (de)serialization used by the store and the CLI.
std::string record_to_json(const corpus::ArticleRecord& record);
corpus::ArticleRecord record_from_json(const std::string& line, int line_number = 0);

}  // namespace evidencer::acquire
