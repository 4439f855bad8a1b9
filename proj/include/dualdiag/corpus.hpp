#pragma once
// The regression corpus: problem files with expected verdicts, embedded in
// the library at build time.

#include "dualdiag/problem.hpp"

namespace dualdiag {

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CorpusEntry {
    std::string id;
    std::string source;  // file text
    ProblemFile problem;
};

// Entries sorted by id.
const std::vector<CorpusEntry>& corpus();
std::vector<std::string> corpus_list();
// Exact id, or a prefix that names exactly one entry.
const CorpusEntry& corpus_entry(const std::string& id);

struct QueryOutcome {
    SetQuery query;
    Inference result;
};

struct RunResult {
    std::string id;
    bool pass = true;
    std::vector<std::string> diffs;
    std::optional<Diagnosis> diagnosis;  // instance files
    std::vector<QueryOutcome> queries;   // sets files
    double seconds = 0;
};

// Compares a diagnosis (or the query answers) against the file's expectations.
RunResult run_problem(const ProblemFile& p);
RunResult corpus_run(const std::string& id);

}  // namespace dualdiag
