#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expcost/semantics.hpp"
#include "expcost/syntax.hpp"

namespace expcost {

// A cost, in double precision, with the exact rational carried alongside when
// one exists (it always does except for cost_rand on non-power-of-two bounds).
struct CostVal {
    double approx = 0.0;
    std::optional<Rational> exact;

    static CostVal of_rational(Rational q) { return CostVal{to_double(q), std::move(q)}; }
    static CostVal of_double(double d) { return CostVal{d, std::nullopt}; }
};

// Cost model: nonnegative function on expressions, invariant under evaluation
// contexts. Built-in models are defined on the decomposed head redex, which
// gives context-invariance by construction.
class CostModel {
public:
    using RedexFn = std::function<CostVal(const ExprPtr& redex)>;

    CostModel(std::string name, bool rational, RedexFn fn)
        : name_(std::move(name)), rational_(rational), fn_(std::move(fn)) {}

    const std::string& name() const { return name_; }

    // True when every cost this model produces carries an exact rational.
    bool rational() const { return rational_; }

    // Cost of the next reduction step of e. Values cost nothing (never queried
    // by the engine); expressions with no head redex cost nothing under the
    // decomp-defined models.
    CostVal cost(const ExprPtr& e) const;

    // Cost given an already-computed decomposition result, avoiding repeat work.
    CostVal cost_of_redex(const ExprPtr& redex) const { return fn_(redex); }

private:
    std::string name_;
    bool rational_;
    RedexFn fn_;
};

CostModel cost_all();
CostModel cost_app();
CostModel cost_rand();
CostModel cost_tick();
// Charges 1 per rand and 0 elsewhere (the coupon-collector model).
CostModel cost_randcount();

// Looks up "all", "app", "rand", "tick", "randcount".
std::optional<CostModel> find_model(const std::string& name);
std::vector<std::string> model_names();

// Builds a model from a custom head-redex function; context-invariant by
// construction.
CostModel custom_model(std::string name, bool rational, CostModel::RedexFn fn);

// True iff cost(K[e]) = cost(e) for every sample (frames, reducible e).
bool check_context_invariance(const CostModel& m,
                              const std::vector<std::pair<std::vector<Frame>, ExprPtr>>& samples);

// Deterministic generator of (context, redex) samples for invariance checks.
std::vector<std::pair<std::vector<Frame>, ExprPtr>> random_context_samples(std::size_t count,
                                                                           std::uint64_t seed);

}  // namespace expcost
