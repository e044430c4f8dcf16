#include "expcost/report.hpp"

#include <cstdio>
#include <sstream>

namespace expcost {

using nlohmann::ordered_json;

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::Refuted: return "refuted";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

ordered_json convergence_json(const ConvergenceReport& rep) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["model"] = rep.model;
    j["converged"] = rep.converged;
    j["acyclic"] = rep.acyclic;
    j["budget_exhausted"] = rep.budget_exhausted;
    j["nodes"] = rep.nodes;
    j["ec_lower"] = fmt_real(rep.ec_lower);
    if (rep.ec_exact) j["ec_exact"] = rational_str(*rep.ec_exact);
    j["value_mass"] = fmt_real(rep.value_mass);
    j["stuck_mass"] = fmt_real(rep.stuck_mass);
    j["residual_mass"] = fmt_real(rep.residual_mass);
    ordered_json series = ordered_json::array();
    for (const auto& row : rep.series) {
        ordered_json r;
        r["depth"] = row.depth;
        r["ec_lower"] = fmt_real(row.ec_lower);
        r["value_mass"] = fmt_real(row.value_mass);
        r["residual_mass"] = fmt_real(row.residual_mass);
        series.push_back(std::move(r));
    }
    j["series"] = std::move(series);
    return j;
}

std::string convergence_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "depth,ec_lower,value_mass,residual_mass\n";
    for (const auto& row : rep.series)
        os << row.depth << "," << fmt_real(row.ec_lower) << "," << fmt_real(row.value_mass) << ","
           << fmt_real(row.residual_mass) << "\n";
    return os.str();
}

ordered_json check_json(const CheckReport& rep) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["verdict"] = verdict_name(rep.verdict);
    j["bound"] = fmt_real(rep.bound);
    if (rep.bound_exact) j["bound_exact"] = rational_str(*rep.bound_exact);
    j["nodes_explored"] = rep.nodes_explored;
    j["postcondition_ok"] = rep.postcondition_ok;
    j["stuck_nodes"] = rep.stuck_nodes;
    if (rep.verdict == Verdict::Inconclusive) j["residual_mass"] = fmt_real(rep.residual_mass);
    if (rep.verdict == Verdict::Refuted) {
        j["deficit"] = fmt_real(rep.deficit);
        j["violated_node"] = rep.violated_node;
        j["counter_trace"] = rep.counter_trace;
    }
    if (!rep.error.empty()) j["error"] = rep.error;
    return j;
}

ordered_json estimate_json(const Estimate& est) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["trials"] = est.trials;
    j["mean"] = fmt_real(est.mean);
    j["variance"] = fmt_real(est.variance);
    j["ci95_halfwidth"] = fmt_real(est.ci95_halfwidth);
    j["timeouts"] = est.timeouts;
    j["stuck"] = est.stuck;
    j["seed"] = est.seed;
    return j;
}

}  // namespace expcost
