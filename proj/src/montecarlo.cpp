#include "expcost/montecarlo.hpp"

#include <cmath>

#include "expcost/semantics.hpp"

namespace expcost {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() {
    // xorshift128+
    std::uint64_t x = s0_;
    const std::uint64_t y = s1_;
    s0_ = y;
    x ^= x << 23;
    s1_ = x ^ y ^ (x >> 17) ^ (y >> 26);
    return s1_ + y;
}

std::uint64_t RngStream::uniform(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t span = n + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    while (true) {
        std::uint64_t r = next_u64();
        if (r < limit) return r % span;
    }
}

RngStream trial_stream(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t a = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    std::uint64_t b = splitmix64(a ^ splitmix64(trial));
    std::uint64_t c = splitmix64(b ^ 0x13198a2e03707344ULL);
    if (b == 0 && c == 0) b = 1;
    return RngStream(b, c);
}

TraceResult sample_trace(const Config& rho, const CostModel& m, RngStream& rng,
                         std::uint64_t step_limit) {
    TraceResult res;
    Config cur = rho;
    for (std::uint64_t k = 0; k < step_limit; ++k) {
        Decomposition d = decompose(cur.expr);
        if (auto* v = std::get_if<DecompValue>(&d)) {
            res.kind = TraceResult::Kind::Finished;
            res.value = v->v;
            res.steps = k;
            return res;
        }
        if (auto* st = std::get_if<DecompStuck>(&d)) {
            res.kind = TraceResult::Kind::Stuck;
            res.stuck_reason = st->reason;
            res.steps = k;
            return res;
        }
        auto& r = std::get<DecompRedex>(d);
        res.cost += m.cost_of_redex(r.head).approx;

        if (r.head->kind == ExprKind::Rand) {
            const BigInt& n = r.head->kids[0]->int_val;
            if (n < 0) {
                res.kind = TraceResult::Kind::Stuck;
                res.stuck_reason = "rand with negative bound";
                res.steps = k;
                return res;
            }
            std::uint64_t outcome = rng.uniform(n.convert_to<std::uint64_t>());
            cur.expr = fill_context(r.frames, mk_int(BigInt(outcome)));
            continue;
        }
        StepOutcome out = head_step(r.head, cur.state);
        if (out.stuck_reason) {
            res.kind = TraceResult::Kind::Stuck;
            res.stuck_reason = *out.stuck_reason;
            res.steps = k;
            return res;
        }
        const auto& [succ, w] = out.dist.entries().front();
        cur.expr = fill_context(r.frames, succ.expr);
        cur.state = succ.state;
    }
    res.kind = TraceResult::Kind::Timeout;
    res.steps = step_limit;
    return res;
}

Estimate estimate(const Config& rho, const CostModel& m, std::uint64_t trials, std::uint64_t seed,
                  std::uint64_t step_limit) {
    Estimate est;
    est.trials = trials;
    est.seed = seed;

    // compensated summation in trial order
    double sum = 0.0, comp = 0.0;
    double sumsq = 0.0, compsq = 0.0;
    std::uint64_t finished = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream rng = trial_stream(seed, t);
        TraceResult tr = sample_trace(rho, m, rng, step_limit);
        if (tr.kind == TraceResult::Kind::Timeout) {
            ++est.timeouts;
            continue;
        }
        if (tr.kind == TraceResult::Kind::Stuck) {
            ++est.stuck;
            continue;
        }
        ++finished;
        double y = tr.cost - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        double y2 = tr.cost * tr.cost - compsq;
        double s2 = sumsq + y2;
        compsq = (s2 - sumsq) - y2;
        sumsq = s2;
    }
    if (finished > 0) {
        est.mean = sum / static_cast<double>(finished);
        if (finished > 1) {
            double n = static_cast<double>(finished);
            est.variance = std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1.0));
        }
        est.ci95_halfwidth = 1.96 * std::sqrt(est.variance / static_cast<double>(finished));
    }
    return est;
}

}  // namespace expcost
