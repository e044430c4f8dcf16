#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "expcost/cost_model.hpp"
#include "expcost/dist.hpp"
#include "expcost/semantics.hpp"
#include "expcost/syntax.hpp"

namespace expcost {

// --- reachable configuration graph --------------------------------------------

struct GraphNode {
    Config cfg;  // canonical
    ConfigClass cls = ConfigClass::Reducible;
    bool frontier = false;  // discovered but not expanded (node budget hit)
    ExprPtr redex;          // head redex when reducible (for cost queries)
    std::string stuck_reason;
    std::vector<std::pair<std::uint32_t, Rational>> succs;
};

struct ConfigGraph {
    std::vector<GraphNode> nodes;
    std::unordered_map<Config, std::uint32_t, ConfigHash> index;
    std::uint32_t root = 0;
    bool budget_exhausted = false;

    std::size_t size() const { return nodes.size(); }
    bool complete() const { return !budget_exhausted; }
};

// BFS over canonical configs, deterministic, up to `budget` expanded nodes.
ConfigGraph reachable_graph(const Config& rho, std::size_t budget);

// True when the graph has no cycle among reducible nodes.
bool graph_acyclic(const ConfigGraph& g);

// Per-node cost under a model, in node-id order.
std::vector<CostVal> node_costs(const ConfigGraph& g, const CostModel& m);

// --- stratified execution -------------------------------------------------------

using ValueDist = Dist<Value, ValueHash>;

// exec_n: probability of reaching each value within n steps. Exact rationals.
ValueDist exec_n(const Config& rho, std::uint64_t n, std::size_t budget = 1u << 20);

// mass(exec_n): exact termination probability within n steps.
Prob termination_prob(const Config& rho, std::uint64_t n, std::size_t budget = 1u << 20);

// --- expected cost ----------------------------------------------------------------

// EC_n of Eq. 1 at the root. Exact rationals when the model is rational.
CostVal expected_cost_n(const Config& rho, std::uint64_t n, const CostModel& m,
                        std::size_t budget = 1u << 20);

// EC_k for k = 0..n in one pass (doubles), on an existing graph.
std::vector<double> ec_rows(const ConfigGraph& g, const CostModel& m, std::uint64_t n);

// Exact expected cost on a complete acyclic graph (one backward pass).
// Returns nullopt when the graph is incomplete or cyclic.
std::optional<CostVal> ec_exact_dag(const ConfigGraph& g, const CostModel& m);

struct SeriesRow {
    std::uint64_t depth = 0;
    double ec_lower = 0.0;
    double value_mass = 0.0;
    double stuck_mass = 0.0;
    double residual_mass = 1.0;
};

struct ConvergenceOpts {
    std::uint64_t max_depth = 1u << 16;
    double tol = 1e-6;
    std::size_t max_nodes = 1u << 20;
};

struct ConvergenceReport {
    std::string model;
    std::vector<SeriesRow> series;
    bool converged = false;
    bool acyclic = false;
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
    double ec_lower = 0.0;                 // sound lower bound on EC
    std::optional<Rational> ec_exact;      // set on complete acyclic graphs with rational costs
    double stuck_mass = 0.0;
    double value_mass = 0.0;
    double residual_mass = 1.0;
};

// Doubling depth schedule; converged when |EC_2n - EC_n| < tol and the
// residual mass is < tol. On complete acyclic graphs the limit is computed
// exactly instead. ec_lower is always a sound lower bound on EC.
ConvergenceReport expected_cost(const Config& rho, const CostModel& m, const ConvergenceOpts& opts = {});

// Convenience: parse nothing, just wrap a program expression with an empty heap.
inline Config initial_config(ExprPtr program) { return canonicalize(Config{std::move(program), State{}}); }

}  // namespace expcost
