#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expcost/certificate.hpp"
#include "expcost/engine.hpp"
#include "expcost/montecarlo.hpp"

namespace expcost {

// --- analytic oracles -----------------------------------------------------------

// H(n) = sum_{i=1..n} 1/i; rejects n = 0.
double oracle_harmonic(unsigned n);
Rational harmonic_exact(unsigned n);

// log2(n!) = sum_{i=2..n} log2 i.
double oracle_log_factorial(unsigned n);

// t_m(0) = 0; t_m(n) = m*n + (2/n) * sum_{i<n} t_m(i).
double oracle_quicksort_t(double m, unsigned n);
Rational quicksort_t_exact(const Rational& m, unsigned n);

// e(0) = 0; e(n) = log2(n) + (2/n) * sum_{i<n} e(i).
double oracle_quicksort_entropy(unsigned n);

// t_meld(0) = 0; t_meld(n) = 2k(1 + log2 n).
double oracle_meld(double k, unsigned n);

// amortized per-query entropy budget of the batch sampler, 256*8/(243*5)
Rational oracle_batch_amortized();

// closed bound companion: t_m(n) <= (n+1) * sum_{i=1..n} 2m/(i+1)
bool quicksort_closed_bound_holds(const Rational& m, unsigned n);

// --- corpus entries ---------------------------------------------------------------

enum class OracleKind { Exact, UpperBound };

struct CorpusEntry {
    std::string name;
    std::string source;                 // file in the corpus directory
    std::vector<std::string> includes;  // files textually prepended (prelude etc.)
    std::vector<std::string> args;      // RandML literals applied to the file's function
    std::string model;
    OracleKind kind = OracleKind::Exact;
    double oracle_value = 0.0;  // reported expected value
    std::optional<Rational> oracle_exact;
    double bound = 0.0;  // engine <= bound and certificate budget (defaults to oracle)
    std::optional<Rational> bound_exact;
    double tolerance = 1e-9;
    std::shared_ptr<CreditAnnotation> certificate;  // null: no certificate registered
    std::function<bool(const Value&)> postcondition;
    std::uint64_t depth = 1u << 14;
    std::size_t node_budget = 1u << 21;
    std::uint64_t mc_trials = 20000;
    std::uint64_t mc_step_limit = 1u << 16;
};

// Directory holding the .rml sources; EXPCOST_CORPUS_DIR overrides the baked-in
// source-tree default.
std::string corpus_dir();

// includes + source applied to the args, as program text / parsed.
std::string assemble_source(const CorpusEntry& e);
ExprPtr corpus_program(const CorpusEntry& e);

const std::vector<CorpusEntry>& corpus_entries();
const CorpusEntry* find_entry(const std::string& name);

// --- harness ----------------------------------------------------------------------

struct EntryResult {
    std::string name;
    bool engine_ok = false;
    bool cert_ok = true;      // true when no certificate registered
    bool post_ok = true;      // true when no postcondition registered
    bool mc_ok = true;        // true when Monte Carlo is skipped
    bool stuck_free = false;
    double ec_lower = 0.0;
    std::optional<Rational> ec_exact;
    double mc_mean = 0.0;
    std::string detail;       // failure explanation, empty on pass

    bool pass() const { return engine_ok && cert_ok && post_ok && mc_ok && stuck_free; }
};

// Runs the engine check, the certificate check, the postcondition, and (when
// run_mc) a seeded Monte Carlo smoke test for one entry.
EntryResult run_entry(const CorpusEntry& e, bool run_mc, std::uint64_t mc_seed = 424242);

// Manifest-style description of all entries (names, params, expected values,
// tolerances) for the CLI.
nlohmann::ordered_json corpus_manifest_json();

}  // namespace expcost
