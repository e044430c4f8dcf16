#include "expcost/engine.hpp"

#include <algorithm>
#include <deque>

namespace expcost {

ConfigGraph reachable_graph(const Config& rho, std::size_t budget) {
    ConfigGraph g;
    Config root = canonicalize(rho);
    g.nodes.push_back(GraphNode{root});
    g.index.emplace(root, 0);
    g.root = 0;

    std::deque<std::uint32_t> todo{0};
    std::size_t expanded = 0;
    while (!todo.empty()) {
        std::uint32_t id = todo.front();
        todo.pop_front();
        if (g.nodes[id].cfg.expr->is_value) {
            g.nodes[id].cls = ConfigClass::Value;
            continue;
        }
        if (expanded >= budget) {
            g.nodes[id].frontier = true;
            g.budget_exhausted = true;
            continue;
        }
        ++expanded;

        Config cfg = g.nodes[id].cfg;
        Decomposition d = decompose(cfg.expr);
        if (auto* st = std::get_if<DecompStuck>(&d)) {
            g.nodes[id].cls = ConfigClass::Stuck;
            g.nodes[id].stuck_reason = st->reason;
            continue;
        }
        auto& r = std::get<DecompRedex>(d);
        StepOutcome head = head_step(r.head, cfg.state);
        if (head.stuck_reason) {
            g.nodes[id].cls = ConfigClass::Stuck;
            g.nodes[id].stuck_reason = *head.stuck_reason;
            continue;
        }
        g.nodes[id].cls = ConfigClass::Reducible;
        g.nodes[id].redex = r.head;
        for (const auto& [succ, w] : head.dist.entries()) {
            Config next = canonicalize(Config{fill_context(r.frames, succ.expr), succ.state});
            auto [it, fresh] = g.index.emplace(next, static_cast<std::uint32_t>(g.nodes.size()));
            if (fresh) {
                g.nodes.push_back(GraphNode{std::move(next)});
                todo.push_back(it->second);
            }
            // merge parallel edges to the same successor
            bool merged = false;
            for (auto& [tid, tw] : g.nodes[id].succs)
                if (tid == it->second) {
                    tw += w;
                    merged = true;
                    break;
                }
            if (!merged) g.nodes[id].succs.emplace_back(it->second, w);
        }
    }
    return g;
}

bool graph_acyclic(const ConfigGraph& g) {
    // Kahn's algorithm
    std::vector<std::uint32_t> indeg(g.size(), 0);
    for (const auto& n : g.nodes)
        for (const auto& [t, w] : n.succs) ++indeg[t];
    std::deque<std::uint32_t> q;
    for (std::uint32_t i = 0; i < g.size(); ++i)
        if (indeg[i] == 0) q.push_back(i);
    std::size_t seen = 0;
    while (!q.empty()) {
        std::uint32_t i = q.front();
        q.pop_front();
        ++seen;
        for (const auto& [t, w] : g.nodes[i].succs)
            if (--indeg[t] == 0) q.push_back(t);
    }
    return seen == g.size();
}

std::vector<CostVal> node_costs(const ConfigGraph& g, const CostModel& m) {
    std::vector<CostVal> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const GraphNode& n = g.nodes[i];
        if (n.cls == ConfigClass::Value) {
            out[i] = CostVal::of_rational(Rational(0));
        } else if (n.redex) {
            out[i] = m.cost_of_redex(n.redex);
        } else {
            // stuck or unexpanded frontier: query on the whole expression
            out[i] = m.cost(n.cfg.expr);
        }
    }
    return out;
}

// --- exec_n -------------------------------------------------------------------

namespace {

// Absorbing forward propagation; value/stuck/frontier nodes hold their mass.
std::vector<Rational> forward_mass(const ConfigGraph& g, std::uint64_t n) {
    std::vector<Rational> cur(g.size(), Rational(0));
    cur[g.root] = 1;
    for (std::uint64_t k = 0; k < n; ++k) {
        std::vector<Rational> next(g.size(), Rational(0));
        bool moved = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (cur[i] == 0) continue;
            const GraphNode& node = g.nodes[i];
            if (node.cls != ConfigClass::Reducible || node.frontier) {
                next[i] += cur[i];
                continue;
            }
            moved = true;
            for (const auto& [t, w] : node.succs) next[t] += cur[i] * w;
        }
        cur.swap(next);
        if (!moved) break;  // everything absorbed; further steps are identity
    }
    return cur;
}

}  // namespace

ValueDist exec_n(const Config& rho, std::uint64_t n, std::size_t budget) {
    ConfigGraph g = reachable_graph(rho, budget);
    std::vector<Rational> mass = forward_mass(g, n);
    ValueDist out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (mass[i] == 0) continue;
        if (g.nodes[i].cls == ConfigClass::Value) out.add(Value(g.nodes[i].cfg.expr), mass[i]);
    }
    return out;
}

Prob termination_prob(const Config& rho, std::uint64_t n, std::size_t budget) {
    return exec_n(rho, n, budget).mass();
}

// --- expected cost ----------------------------------------------------------------

CostVal expected_cost_n(const Config& rho, std::uint64_t n, const CostModel& m, std::size_t budget) {
    ConfigGraph g = reachable_graph(rho, budget);
    std::vector<CostVal> costs = node_costs(g, m);
    if (m.rational()) {
        std::vector<Rational> prev(g.size(), Rational(0));
        for (std::uint64_t k = 1; k <= n; ++k) {
            std::vector<Rational> cur(g.size(), Rational(0));
            for (std::size_t i = 0; i < g.size(); ++i) {
                const GraphNode& node = g.nodes[i];
                if (node.cls == ConfigClass::Value || node.frontier) continue;
                Rational acc = *costs[i].exact;
                for (const auto& [t, w] : node.succs) acc += w * prev[t];
                cur[i] = std::move(acc);
            }
            prev.swap(cur);
        }
        return CostVal::of_rational(prev[g.root]);
    }
    std::vector<double> prev(g.size(), 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) {
        std::vector<double> cur(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const GraphNode& node = g.nodes[i];
            if (node.cls == ConfigClass::Value || node.frontier) continue;
            double acc = costs[i].approx;
            for (const auto& [t, w] : node.succs) acc += to_double(w) * prev[t];
            cur[i] = acc;
        }
        prev.swap(cur);
    }
    return CostVal::of_double(prev[g.root]);
}

std::vector<double> ec_rows(const ConfigGraph& g, const CostModel& m, std::uint64_t n) {
    std::vector<CostVal> costs = node_costs(g, m);
    std::vector<double> edgew;  // flattened, deterministic order
    std::vector<double> rows;
    rows.reserve(n + 1);
    rows.push_back(0.0);
    std::vector<double> prev(g.size(), 0.0), cur(g.size(), 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const GraphNode& node = g.nodes[i];
            if (node.cls == ConfigClass::Value || node.frontier) {
                cur[i] = 0.0;
                continue;
            }
            double acc = costs[i].approx;
            for (const auto& [t, w] : node.succs) acc += to_double(w) * prev[t];
            cur[i] = acc;
        }
        prev.swap(cur);
        rows.push_back(prev[g.root]);
    }
    return rows;
}

std::optional<CostVal> ec_exact_dag(const ConfigGraph& g, const CostModel& m) {
    if (!g.complete() || !graph_acyclic(g)) return std::nullopt;
    // reverse topological order via Kahn on out-degrees
    std::vector<std::uint32_t> order;
    order.reserve(g.size());
    std::vector<std::uint32_t> outdeg(g.size(), 0);
    std::vector<std::vector<std::uint32_t>> preds(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        outdeg[i] = static_cast<std::uint32_t>(g.nodes[i].succs.size());
        for (const auto& [t, w] : g.nodes[i].succs) preds[t].push_back(i);
    }
    std::deque<std::uint32_t> q;
    for (std::uint32_t i = 0; i < g.size(); ++i)
        if (outdeg[i] == 0) q.push_back(i);
    while (!q.empty()) {
        std::uint32_t i = q.front();
        q.pop_front();
        order.push_back(i);
        for (std::uint32_t p : preds[i])
            if (--outdeg[p] == 0) q.push_back(p);
    }

    std::vector<CostVal> costs = node_costs(g, m);
    if (m.rational()) {
        std::vector<Rational> ec(g.size(), Rational(0));
        for (std::uint32_t i : order) {
            const GraphNode& node = g.nodes[i];
            if (node.cls == ConfigClass::Value) continue;
            Rational acc = *costs[i].exact;
            for (const auto& [t, w] : node.succs) acc += w * ec[t];
            ec[i] = std::move(acc);
        }
        return CostVal::of_rational(ec[g.root]);
    }
    std::vector<double> ec(g.size(), 0.0);
    for (std::uint32_t i : order) {
        const GraphNode& node = g.nodes[i];
        if (node.cls == ConfigClass::Value) continue;
        double acc = costs[i].approx;
        for (const auto& [t, w] : node.succs) acc += to_double(w) * ec[t];
        ec[i] = acc;
    }
    return CostVal::of_double(ec[g.root]);
}

ConvergenceReport expected_cost(const Config& rho, const CostModel& m, const ConvergenceOpts& opts) {
    ConvergenceReport rep;
    rep.model = m.name();
    ConfigGraph g = reachable_graph(rho, opts.max_nodes);
    rep.nodes = g.size();
    rep.budget_exhausted = g.budget_exhausted;
    rep.acyclic = graph_acyclic(g);

    std::vector<CostVal> costs = node_costs(g, m);

    // synchronous sweeps for EC_n and the three masses; doubles here, exact
    // limits recovered separately on complete acyclic graphs
    std::vector<double> ec(g.size(), 0.0), ec_next(g.size(), 0.0);
    std::vector<double> vm(g.size(), 0.0), vm_next(g.size(), 0.0);
    std::vector<double> sm(g.size(), 0.0), sm_next(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.nodes[i].cls == ConfigClass::Value) vm[i] = 1.0;
        if (g.nodes[i].cls == ConfigClass::Stuck && !g.nodes[i].frontier) sm[i] = 1.0;
    }

    auto row_at = [&](std::uint64_t depth) {
        SeriesRow row;
        row.depth = depth;
        row.ec_lower = ec[g.root];
        row.value_mass = vm[g.root];
        row.stuck_mass = sm[g.root];
        row.residual_mass = std::max(0.0, 1.0 - row.value_mass - row.stuck_mass);
        return row;
    };

    rep.series.push_back(row_at(0));

    double prev_row_ec = 0.0;
    bool have_prev_row = false;
    std::uint64_t next_row = 1;
    bool stable = false;
    std::uint64_t depth = 0;
    while (depth < opts.max_depth && !rep.converged && !stable) {
        ++depth;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const GraphNode& node = g.nodes[i];
            if (node.cls == ConfigClass::Value) {
                ec_next[i] = 0.0;
                vm_next[i] = 1.0;
                sm_next[i] = 0.0;
                continue;
            }
            if (node.frontier) {  // unexplored: EC contribution 0 keeps the lower bound sound
                ec_next[i] = 0.0;
                vm_next[i] = 0.0;
                sm_next[i] = 0.0;
                continue;
            }
            if (node.cls == ConfigClass::Stuck) {
                ec_next[i] = costs[i].approx;
                vm_next[i] = 0.0;
                sm_next[i] = 1.0;
                continue;
            }
            double eacc = costs[i].approx, vacc = 0.0, sacc = 0.0;
            for (const auto& [t, w] : node.succs) {
                double wd = to_double(w);
                eacc += wd * ec[t];
                vacc += wd * vm[t];
                sacc += wd * sm[t];
            }
            ec_next[i] = eacc;
            vm_next[i] = vacc;
            sm_next[i] = sacc;
        }
        bool changed = false;
        for (std::size_t i = 0; i < g.size() && !changed; ++i)
            changed = ec_next[i] != ec[i] || vm_next[i] != vm[i] || sm_next[i] != sm[i];
        ec.swap(ec_next);
        vm.swap(vm_next);
        sm.swap(sm_next);
        if (!changed) stable = true;  // exact fixpoint (always happens on DAGs)

        if (depth == next_row || stable || depth == opts.max_depth) {
            SeriesRow row = row_at(depth);
            rep.series.push_back(row);
            if (have_prev_row) {
                double delta = row.ec_lower - prev_row_ec;
                if (std::abs(delta) < opts.tol && row.residual_mass < opts.tol && g.complete())
                    rep.converged = true;
            }
            have_prev_row = true;
            prev_row_ec = row.ec_lower;
            while (next_row <= depth) next_row *= 2;
        }
    }

    const SeriesRow& last = rep.series.back();
    rep.ec_lower = last.ec_lower;
    rep.value_mass = last.value_mass;
    rep.stuck_mass = last.stuck_mass;
    rep.residual_mass = last.residual_mass;
    if (stable && g.complete() && last.residual_mass < opts.tol) rep.converged = true;

    if (rep.acyclic && g.complete()) {
        if (auto exact = ec_exact_dag(g, m)) {
            rep.ec_lower = exact->approx;
            rep.ec_exact = exact->exact;
        }
    }
    return rep;
}

}  // namespace expcost
