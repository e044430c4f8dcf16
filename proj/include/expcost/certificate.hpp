#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expcost/engine.hpp"

namespace expcost {

// Context handed to a rand-site credit rule. `available` is the budget left
// after paying the rand's own cost; the rule answers how much of it each
// outcome receives. The full pre-step configuration is exposed because
// potentials may live in expression values (pivot lists, heap trees), not
// just the store.
struct SiteRuleCtx {
    const Config& cfg;
    std::uint64_t outcome = 0;
    std::uint64_t bound = 0;  // rand N
    double available = 0.0;
    std::optional<Rational> available_exact;
};

using SiteRule = std::function<CostVal(const SiteRuleCtx&)>;

// Per-configuration credit policy: a starting budget, one credit-split rule
// per labeled rand site, and the implicit rule that deterministic steps carry
// (available - cost) to their unique successor.
struct CreditAnnotation {
    CostVal initial_credit;
    std::map<std::string, SiteRule> site_rules;
    bool rational = false;  // all rule outputs carry exact rationals
};

SiteRule const_rule(Rational credit);
SiteRule table_rule(std::vector<Rational> by_outcome);

// Minimum budget with which each reachable node was ever assigned credit.
struct Certificate {
    std::vector<std::optional<CostVal>> phi;  // by graph node id
    std::vector<std::int64_t> parent;         // BFS predecessor, -1 at root
    std::optional<Rational> phi_exact(std::uint32_t node) const {
        return phi[node] ? phi[node]->exact : std::nullopt;
    }
};

enum class Verdict { Certified, Refuted, Inconclusive };

struct CheckReport {
    Verdict verdict = Verdict::Inconclusive;
    double bound = 0.0;                      // certified budget (initial credit)
    std::optional<Rational> bound_exact;
    std::uint64_t nodes_explored = 0;
    bool postcondition_ok = true;
    std::uint64_t stuck_nodes = 0;
    double residual_mass = 0.0;              // mass reaching the frontier (Inconclusive)
    double deficit = 0.0;                    // by how much the inequality failed (Refuted)
    std::string violated_node;
    std::vector<std::string> counter_trace;  // root .. violating node, pretty-printed
    std::string error;                       // missing site rule and similar hard errors
};

struct ExploreResult {
    ConfigGraph graph;
    Certificate cert;
    std::optional<std::string> error;           // missing rule for a reached rand site
    std::vector<std::uint32_t> negative_carry;  // nodes where the carry went negative
};

// BFS with credits from the canonical initial config. Deterministic steps
// carry the remainder; labeled rand sites split it per the annotation.
// phi(node) is the minimum credit over all incoming assignments, which closes
// loops soundly; propagation stops below zero (recorded as tentative
// violations for verify to refute).
ExploreResult explore_and_assign(const Config& rho0, const CreditAnnotation& ann, const CostModel& m,
                                 std::size_t budget);

// ht-rand-exp side condition: cost + (sum credits)/(N+1) <= available + slack.
// `available` here is the budget before paying the rand's cost. Exact when all
// inputs carry rationals.
bool check_rand_split(std::uint64_t n_bound, const CostVal& cost_here, const CostVal& available,
                      const std::vector<CostVal>& credits, double slack);

// Checks the weighted-sum inequality cost(rho) + sum p * phi(succ) <= phi(rho)
// at every non-value node, phi >= 0 everywhere, and the optional value
// postcondition. Certified only when the frontier is empty.
CheckReport verify_supermartingale(const ConfigGraph& g, const Certificate& cert, const CostModel& m,
                                   double slack, bool exact_mode,
                                   const std::function<bool(const Value&)>* postcondition = nullptr,
                                   const CostVal* initial_credit = nullptr);

bool check_postcondition(const ConfigGraph& g, const std::function<bool(const Value&)>& phi);

// explore + verify + postcondition in one call.
CheckReport check_certificate(const Config& rho0, const CreditAnnotation& ann, const CostModel& m,
                              std::size_t budget = 1u << 20, double slack = 1e-9,
                              const std::function<bool(const Value&)>* postcondition = nullptr);

// JSON certificate file: { program, model, initial_credit, rules: [ {site,
// kind: "const"|"table", ...} ] }. Returns the annotation plus the model and
// program path named in the file.
struct JsonCertificate {
    std::string program;
    std::string model;
    CreditAnnotation annotation;
};
JsonCertificate certificate_from_json_text(const std::string& text);

}  // namespace expcost
