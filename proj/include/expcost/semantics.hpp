#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "expcost/dist.hpp"
#include "expcost/syntax.hpp"

namespace expcost {

// Capture-avoiding substitution e[var := v]; v must be closed.
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& v);

std::set<std::string> free_vars(const ExprPtr& e);

// --- evaluation contexts ------------------------------------------------------

// One evaluation-context frame; `hole` marks which child slot the hole sits in.
// Arguments evaluate right to left, per the context grammar (e K | K v and
// friends), so `hole` walks from the last operand towards the first.
struct Frame {
    ExprKind kind;
    BinOpKind op = BinOpKind::Add;
    std::string name;           // rand label; match binders via arg/arg2
    std::string arg;
    std::string arg2;
    std::size_t hole = 0;       // index of the hole in kids
    std::vector<ExprPtr> kids;  // all children; kids[hole] ignored when plugging
};

ExprPtr fill_frame(const Frame& f, const ExprPtr& e);

// Outermost-first frame list: fill_context(frames, e) = frames[0][frames[1][... e]].
ExprPtr fill_context(const std::vector<Frame>& frames, const ExprPtr& e);

struct DecompValue {
    Value v;
};
struct DecompRedex {
    std::vector<Frame> frames;  // outermost first
    ExprPtr head;
};
struct DecompStuck {
    std::string reason;
};
using Decomposition = std::variant<DecompValue, DecompRedex, DecompStuck>;

// Unique maximal evaluation context: value, head redex + context, or stuck.
// Stuck here means no head rule can match the value shapes (e.g. fst of a
// non-pair); state-dependent failures are head_step's to report.
Decomposition decompose(const ExprPtr& e);

// The decomp function of the cost-model section: just the head redex, if any.
std::optional<ExprPtr> decomp_redex(const ExprPtr& e);

// --- stepping -----------------------------------------------------------------

struct StepOutcome {
    Dist<Config, ConfigHash> dist;
    std::optional<std::string> stuck_reason;  // set when dist is empty because of stuckness
};

// One head reduction of a redex under state sigma.
StepOutcome head_step(const ExprPtr& redex, const State& sigma);

// One step of a whole configuration: decompose, head-step, re-plug.
// Values and stuck configurations yield the empty distribution.
StepOutcome step(const Config& rho);

enum class ConfigClass { Value, Reducible, Stuck };
struct Classified {
    ConfigClass cls;
    std::string stuck_reason;
};
Classified classify(const Config& rho);

// Renames locations to 0,1,2,... preserving the ascending order of the heap
// domain (keeps allocN blocks contiguous, hence offset arithmetic intact).
// Idempotent; identity on heaps that are already 0..m-1.
Config canonicalize(const Config& rho);

}  // namespace expcost
