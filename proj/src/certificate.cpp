#include "expcost/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

namespace expcost {

namespace {

using nlohmann::json;

CostVal sub(const CostVal& a, const CostVal& b) {
    CostVal out;
    out.approx = a.approx - b.approx;
    if (a.exact && b.exact) out.exact = *a.exact - *b.exact;
    return out;
}

bool cv_less(const CostVal& a, const CostVal& b) {
    if (a.exact && b.exact) return *a.exact < *b.exact;
    return a.approx < b.approx;
}

bool cv_negative(const CostVal& a, double slack) {
    if (a.exact) return *a.exact < 0;
    return a.approx < -slack;
}

}  // namespace

SiteRule const_rule(Rational credit) {
    CostVal c = CostVal::of_rational(std::move(credit));
    return [c](const SiteRuleCtx&) { return c; };
}

SiteRule table_rule(std::vector<Rational> by_outcome) {
    std::vector<CostVal> tab;
    tab.reserve(by_outcome.size());
    for (auto& q : by_outcome) tab.push_back(CostVal::of_rational(std::move(q)));
    return [tab](const SiteRuleCtx& ctx) {
        if (ctx.outcome >= tab.size())
            throw std::runtime_error("table rule has no entry for outcome " + std::to_string(ctx.outcome));
        return tab[ctx.outcome];
    };
}

ExploreResult explore_and_assign(const Config& rho0, const CreditAnnotation& ann, const CostModel& m,
                                 std::size_t budget) {
    ExploreResult res;
    res.graph = reachable_graph(rho0, budget);
    ConfigGraph& g = res.graph;
    res.cert.phi.assign(g.size(), std::nullopt);
    res.cert.parent.assign(g.size(), -1);
    res.cert.phi[g.root] = ann.initial_credit;

    std::vector<CostVal> costs = node_costs(g, m);

    std::deque<std::uint32_t> work{g.root};
    std::vector<bool> queued(g.size(), false);
    queued[g.root] = true;
    std::size_t steps = 0;
    const std::size_t cap = 64 * (g.size() + 1);

    auto relax = [&](std::uint32_t from, std::uint32_t to, const CostVal& credit) {
        if (!res.cert.phi[to] || cv_less(credit, *res.cert.phi[to])) {
            res.cert.phi[to] = credit;
            res.cert.parent[to] = from;
            if (!queued[to]) {
                queued[to] = true;
                work.push_back(to);
            }
        }
    };

    while (!work.empty()) {
        if (++steps > cap)
            throw std::runtime_error("credit relaxation did not stabilize (budget-leaking loop?)");
        std::uint32_t u = work.front();
        work.pop_front();
        queued[u] = false;
        const GraphNode& node = g.nodes[u];
        if (node.cls != ConfigClass::Reducible || node.frontier) continue;

        CostVal avail = *res.cert.phi[u];
        CostVal rem = sub(avail, costs[u]);
        if (cv_negative(rem, 0.0)) {
            res.negative_carry.push_back(u);
            continue;  // tentative violation; verify reports the deficit
        }

        // rand: split per site rule; anything else: carry to the unique successor
        if (node.redex && node.redex->kind == ExprKind::Rand) {
            const std::string& label = node.redex->name;
            auto it = ann.site_rules.find(label);
            if (label.empty() || it == ann.site_rules.end()) {
                res.error = "no site rule for rand site '" + (label.empty() ? "<unlabeled>" : label) +
                            "' reached at: " + expr_str(node.redex);
                return res;
            }
            Decomposition d = decompose(node.cfg.expr);
            auto& rx = std::get<DecompRedex>(d);
            std::uint64_t bound = node.redex->kids[0]->int_val.convert_to<std::uint64_t>();
            for (std::uint64_t b = 0; b <= bound; ++b) {
                SiteRuleCtx ctx{node.cfg, b, bound, rem.approx, rem.exact};
                CostVal credit = it->second(ctx);
                Config succ = canonicalize(
                    Config{fill_context(rx.frames, mk_int(BigInt(b))), node.cfg.state});
                relax(u, g.index.at(succ), credit);
            }
        } else {
            for (const auto& [t, w] : node.succs) relax(u, t, rem);
        }
    }
    return res;
}

bool check_rand_split(std::uint64_t n_bound, const CostVal& cost_here, const CostVal& available,
                      const std::vector<CostVal>& credits, double slack) {
    bool exact = cost_here.exact && available.exact;
    Rational sum_exact = 0;
    double sum = 0.0;
    for (const auto& c : credits) {
        sum += c.approx;
        if (c.exact && exact)
            sum_exact += *c.exact;
        else
            exact = false;
    }
    Rational np1 = Rational(BigInt(n_bound) + 1);
    if (exact) return *cost_here.exact + sum_exact / np1 <= *available.exact;
    return cost_here.approx + sum / (static_cast<double>(n_bound) + 1.0) <= available.approx + slack;
}

bool check_postcondition(const ConfigGraph& g, const std::function<bool(const Value&)>& phi) {
    for (const auto& n : g.nodes)
        if (n.cls == ConfigClass::Value && !phi(Value(n.cfg.expr))) return false;
    return true;
}

namespace {

// Probability of eventually reaching a frontier node, by monotone iteration.
double frontier_reach_mass(const ConfigGraph& g) {
    std::vector<double> r(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.nodes[i].frontier) r[i] = 1.0;
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double delta = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const GraphNode& n = g.nodes[i];
            if (n.frontier || n.cls != ConfigClass::Reducible) continue;
            double acc = 0.0;
            for (const auto& [t, w] : n.succs) acc += to_double(w) * r[t];
            delta = std::max(delta, acc - r[i]);
            r[i] = acc;
        }
        if (delta < 1e-15) break;
    }
    return r[g.root];
}

std::vector<std::string> trace_to(const ConfigGraph& g, const Certificate& cert, std::uint32_t node) {
    std::vector<std::string> out;
    std::int64_t cur = node;
    while (cur >= 0) {
        out.push_back(config_str(g.nodes[cur].cfg));
        cur = cert.parent[cur];
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

CheckReport verify_supermartingale(const ConfigGraph& g, const Certificate& cert, const CostModel& m,
                                   double slack, bool exact_mode,
                                   const std::function<bool(const Value&)>* postcondition,
                                   const CostVal* initial_credit) {
    CheckReport rep;
    rep.nodes_explored = g.size();
    if (initial_credit) {
        rep.bound = initial_credit->approx;
        rep.bound_exact = initial_credit->exact;
    } else if (cert.phi[g.root]) {
        rep.bound = cert.phi[g.root]->approx;
        rep.bound_exact = cert.phi[g.root]->exact;
    }
    for (const auto& n : g.nodes)
        if (n.cls == ConfigClass::Stuck) ++rep.stuck_nodes;

    if (postcondition) rep.postcondition_ok = check_postcondition(g, *postcondition);

    if (g.budget_exhausted) {
        rep.verdict = Verdict::Inconclusive;
        rep.residual_mass = frontier_reach_mass(g);
        return rep;
    }

    const double eff_slack = exact_mode ? 0.0 : slack;
    std::vector<CostVal> costs = node_costs(g, m);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        const GraphNode& node = g.nodes[i];
        auto fail = [&](double deficit) {
            rep.verdict = Verdict::Refuted;
            rep.deficit = deficit;
            rep.violated_node = config_str(node.cfg);
            rep.counter_trace = trace_to(g, cert, i);
        };
        if (!cert.phi[i]) {
            // reachable but never assigned credit: a predecessor ran dry
            fail(0.0);
            return rep;
        }
        const CostVal& phi = *cert.phi[i];
        if (exact_mode) {
            if (!phi.exact) {
                rep.error = "exact mode but non-rational credit at node " + std::to_string(i);
                rep.verdict = Verdict::Inconclusive;
                return rep;
            }
            if (*phi.exact < 0) {
                fail(to_double(-*phi.exact));
                return rep;
            }
        } else if (phi.approx < -eff_slack) {
            fail(-phi.approx);
            return rep;
        }
        if (node.cls == ConfigClass::Value) continue;

        const CostVal& cost = costs[i];

        if (exact_mode) {
            Rational lhs = *cost.exact;
            for (const auto& [t, w] : node.succs) {
                if (!cert.phi[t] || !cert.phi[t]->exact) {
                    fail(0.0);
                    return rep;
                }
                lhs += w * *cert.phi[t]->exact;
            }
            if (lhs > *phi.exact) {
                fail(to_double(lhs - *phi.exact));
                return rep;
            }
        } else {
            double lhs = cost.approx;
            for (const auto& [t, w] : node.succs) {
                if (!cert.phi[t]) {
                    fail(0.0);
                    return rep;
                }
                lhs += to_double(w) * cert.phi[t]->approx;
            }
            if (lhs > phi.approx + eff_slack) {
                fail(lhs - phi.approx);
                return rep;
            }
        }
    }
    rep.verdict = Verdict::Certified;
    return rep;
}

CheckReport check_certificate(const Config& rho0, const CreditAnnotation& ann, const CostModel& m,
                              std::size_t budget, double slack,
                              const std::function<bool(const Value&)>* postcondition) {
    ExploreResult ex = explore_and_assign(rho0, ann, m, budget);
    if (ex.error) {
        CheckReport rep;
        rep.error = *ex.error;
        rep.verdict = Verdict::Inconclusive;
        rep.nodes_explored = ex.graph.size();
        return rep;
    }
    bool exact_mode = m.rational() && ann.rational;
    return verify_supermartingale(ex.graph, ex.cert, m, slack, exact_mode, postcondition,
                                  &ann.initial_credit);
}

JsonCertificate certificate_from_json_text(const std::string& text) {
    json j = json::parse(text);
    JsonCertificate out;
    out.program = j.value("program", "");
    out.model = j.value("model", "");
    auto parse_q = [&](const json& v) -> Rational {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        auto q = parse_rational(s);
        if (!q) throw std::runtime_error("bad rational in certificate: " + s);
        return *q;
    };
    out.annotation.initial_credit = CostVal::of_rational(parse_q(j.at("initial_credit")));
    out.annotation.rational = true;
    if (j.contains("rules")) {
        for (const auto& r : j.at("rules")) {
            std::string site = r.at("site").get<std::string>();
            std::string kind = r.at("kind").get<std::string>();
            if (kind == "const") {
                out.annotation.site_rules.emplace(site, const_rule(parse_q(r.at("value"))));
            } else if (kind == "table") {
                std::vector<Rational> tab;
                for (const auto& v : r.at("values")) tab.push_back(parse_q(v));
                out.annotation.site_rules.emplace(site, table_rule(std::move(tab)));
            } else {
                throw std::runtime_error("unknown rule kind '" + kind + "'");
            }
        }
    }
    return out;
}

}  // namespace expcost
