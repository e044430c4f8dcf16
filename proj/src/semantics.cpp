#include "expcost/semantics.hpp"

#include <algorithm>
#include <unordered_map>

namespace expcost {

// --- substitution -------------------------------------------------------------

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& v) {
    switch (e->kind) {
        case ExprKind::Var:
            return e->name == var ? v : e;
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::UnitLit:
        case ExprKind::LocLit:
            return e;
        case ExprKind::Rec:
            if (e->name == var || e->arg == var) return e;  // shadowed
            {
                ExprPtr b = substitute(e->kids[0], var, v);
                return b == e->kids[0] ? e : mk_rec(e->name, e->arg, b);
            }
        case ExprKind::Match: {
            ExprPtr s = substitute(e->kids[0], var, v);
            ExprPtr l = e->arg == var ? e->kids[1] : substitute(e->kids[1], var, v);
            ExprPtr r = e->arg2 == var ? e->kids[2] : substitute(e->kids[2], var, v);
            if (s == e->kids[0] && l == e->kids[1] && r == e->kids[2]) return e;
            return mk_match(s, e->arg, l, e->arg2, r);
        }
        default: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            bool changed = false;
            for (const auto& k : e->kids) {
                ExprPtr nk = substitute(k, var, v);
                changed = changed || nk != k;
                kids.push_back(std::move(nk));
            }
            if (!changed) return e;
            Expr copy = *e;
            copy.kids = std::move(kids);
            switch (e->kind) {
                case ExprKind::App: return mk_app(copy.kids[0], copy.kids[1]);
                case ExprKind::BinOp: return mk_binop(e->op, copy.kids[0], copy.kids[1]);
                case ExprKind::If: return mk_if(copy.kids[0], copy.kids[1], copy.kids[2]);
                case ExprKind::Pair: return mk_pair(copy.kids[0], copy.kids[1]);
                case ExprKind::Fst: return mk_fst(copy.kids[0]);
                case ExprKind::Snd: return mk_snd(copy.kids[0]);
                case ExprKind::Inl: return mk_inl(copy.kids[0]);
                case ExprKind::Inr: return mk_inr(copy.kids[0]);
                case ExprKind::AllocN: return mk_allocn(copy.kids[0], copy.kids[1]);
                case ExprKind::Load: return mk_load(copy.kids[0]);
                case ExprKind::Store: return mk_store(copy.kids[0], copy.kids[1]);
                case ExprKind::Offset: return mk_offset(copy.kids[0], copy.kids[1]);
                case ExprKind::Rand: return mk_rand(copy.kids[0], e->name);
                case ExprKind::Tick: return mk_tick(copy.kids[0]);
                default: break;
            }
            return e;  // unreachable
        }
    }
}

namespace {
void free_vars_into(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (e->kind) {
        case ExprKind::Var:
            if (!bound.count(e->name)) out.insert(e->name);
            return;
        case ExprKind::Rec: {
            bool f_new = !e->name.empty() && bound.insert(e->name).second;
            bool x_new = !e->arg.empty() && e->arg != e->name && bound.insert(e->arg).second;
            free_vars_into(e->kids[0], bound, out);
            if (f_new) bound.erase(e->name);
            if (x_new) bound.erase(e->arg);
            return;
        }
        case ExprKind::Match: {
            free_vars_into(e->kids[0], bound, out);
            bool l_new = !e->arg.empty() && bound.insert(e->arg).second;
            free_vars_into(e->kids[1], bound, out);
            if (l_new) bound.erase(e->arg);
            bool r_new = !e->arg2.empty() && bound.insert(e->arg2).second;
            free_vars_into(e->kids[2], bound, out);
            if (r_new) bound.erase(e->arg2);
            return;
        }
        default:
            for (const auto& k : e->kids) free_vars_into(k, bound, out);
            return;
    }
}
}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
    std::set<std::string> bound, out;
    free_vars_into(e, bound, out);
    return out;
}

// --- evaluation contexts -------------------------------------------------------

ExprPtr fill_frame(const Frame& f, const ExprPtr& e) {
    std::vector<ExprPtr> kids = f.kids;
    kids[f.hole] = e;
    switch (f.kind) {
        case ExprKind::App: return mk_app(kids[0], kids[1]);
        case ExprKind::BinOp: return mk_binop(f.op, kids[0], kids[1]);
        case ExprKind::If: return mk_if(kids[0], kids[1], kids[2]);
        case ExprKind::Pair: return mk_pair(kids[0], kids[1]);
        case ExprKind::Fst: return mk_fst(kids[0]);
        case ExprKind::Snd: return mk_snd(kids[0]);
        case ExprKind::Inl: return mk_inl(kids[0]);
        case ExprKind::Inr: return mk_inr(kids[0]);
        case ExprKind::Match: return mk_match(kids[0], f.arg, kids[1], f.arg2, kids[2]);
        case ExprKind::AllocN: return mk_allocn(kids[0], kids[1]);
        case ExprKind::Load: return mk_load(kids[0]);
        case ExprKind::Store: return mk_store(kids[0], kids[1]);
        case ExprKind::Offset: return mk_offset(kids[0], kids[1]);
        case ExprKind::Rand: return mk_rand(kids[0], f.name);
        case ExprKind::Tick: return mk_tick(kids[0]);
        default: break;
    }
    throw std::logic_error("fill_frame: bad frame kind");
}

ExprPtr fill_context(const std::vector<Frame>& frames, const ExprPtr& e) {
    ExprPtr cur = e;
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) cur = fill_frame(*it, cur);
    return cur;
}

namespace {

Frame frame_of(const ExprPtr& e, std::size_t hole) {
    Frame f;
    f.kind = e->kind;
    f.op = e->op;
    f.name = e->name;
    f.arg = e->arg;
    f.arg2 = e->arg2;
    f.hole = hole;
    f.kids = e->kids;
    return f;
}

bool int_shaped(const ExprPtr& v) { return v->kind == ExprKind::IntLit; }

// Checks whether a fully-evaluated candidate can match some head rule by
// value shape alone.
std::optional<std::string> head_shape_error(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::App:
            if (e->kids[0]->kind != ExprKind::Rec) return "application of a non-function value";
            return std::nullopt;
        case ExprKind::BinOp: {
            const ExprPtr& a = e->kids[0];
            const ExprPtr& b = e->kids[1];
            switch (e->op) {
                case BinOpKind::Add:
                case BinOpKind::Sub:
                case BinOpKind::Mul:
                case BinOpKind::Quot:
                case BinOpKind::Rem:
                case BinOpKind::Lt:
                case BinOpKind::Le:
                    if (!int_shaped(a) || !int_shaped(b))
                        return std::string("arithmetic on non-integers: ") + expr_str(e);
                    return std::nullopt;
                case BinOpKind::Eq:
                    if (a->kind != b->kind) return "equality on values of different shapes";
                    switch (a->kind) {
                        case ExprKind::IntLit:
                        case ExprKind::BoolLit:
                        case ExprKind::UnitLit:
                        case ExprKind::LocLit:
                            return std::nullopt;
                        default:
                            return "equality on compound or closure values";
                    }
            }
            return std::nullopt;
        }
        case ExprKind::If:
            if (e->kids[0]->kind != ExprKind::BoolLit) return "if on a non-boolean";
            return std::nullopt;
        case ExprKind::Fst:
        case ExprKind::Snd:
            if (e->kids[0]->kind != ExprKind::Pair) return "projection of a non-pair";
            return std::nullopt;
        case ExprKind::Match:
            if (e->kids[0]->kind != ExprKind::Inl && e->kids[0]->kind != ExprKind::Inr)
                return "match on a non-sum value";
            return std::nullopt;
        case ExprKind::AllocN:
            if (!int_shaped(e->kids[0])) return "allocN with a non-integer length";
            return std::nullopt;
        case ExprKind::Load:
            if (e->kids[0]->kind != ExprKind::LocLit) return "load from a non-location";
            return std::nullopt;
        case ExprKind::Store:
            if (e->kids[0]->kind != ExprKind::LocLit) return "store to a non-location";
            return std::nullopt;
        case ExprKind::Offset:
            if (e->kids[0]->kind != ExprKind::LocLit || !int_shaped(e->kids[1]))
                return "offset needs a location and an integer";
            return std::nullopt;
        case ExprKind::Rand:
            if (!int_shaped(e->kids[0])) return "rand with a non-integer bound";
            return std::nullopt;
        case ExprKind::Tick:
            if (!int_shaped(e->kids[0])) return "tick of a non-integer";
            return std::nullopt;
        case ExprKind::Var:
            return "free variable";
        default:
            return "no head rule";
    }
}

// Right-to-left: index of the last non-value child that participates in
// evaluation order, or nullopt when all evaluated positions hold values.
std::optional<std::size_t> next_hole(const ExprPtr& e) {
    auto scan = [&](std::initializer_list<std::size_t> order) -> std::optional<std::size_t> {
        for (std::size_t i : order)
            if (!e->kids[i]->is_value) return i;
        return std::nullopt;
    };
    switch (e->kind) {
        case ExprKind::App:
        case ExprKind::BinOp:
        case ExprKind::Pair:
        case ExprKind::AllocN:
        case ExprKind::Store:
        case ExprKind::Offset:
            return scan({1, 0});
        case ExprKind::If:
        case ExprKind::Match:
            return scan({0});
        case ExprKind::Fst:
        case ExprKind::Snd:
        case ExprKind::Inl:
        case ExprKind::Inr:
        case ExprKind::Load:
        case ExprKind::Rand:
        case ExprKind::Tick:
            return scan({0});
        default:
            return std::nullopt;
    }
}

}  // namespace

Decomposition decompose(const ExprPtr& e) {
    if (e->is_value) return DecompValue{Value(e)};
    std::vector<Frame> frames;
    ExprPtr cur = e;
    while (true) {
        if (cur->kind == ExprKind::Var) return DecompStuck{"free variable '" + cur->name + "'"};
        auto hole = next_hole(cur);
        if (!hole) {
            if (auto err = head_shape_error(cur)) return DecompStuck{*err};
            return DecompRedex{std::move(frames), cur};
        }
        frames.push_back(frame_of(cur, *hole));
        cur = cur->kids[*hole];
        if (cur->is_value) throw std::logic_error("decompose: descended into a value");
    }
}

std::optional<ExprPtr> decomp_redex(const ExprPtr& e) {
    Decomposition d = decompose(e);
    if (auto* r = std::get_if<DecompRedex>(&d)) return r->head;
    return std::nullopt;
}

// --- head reduction -------------------------------------------------------------

namespace {

StepOutcome stuck(std::string why) { return StepOutcome{{}, std::move(why)}; }

StepOutcome det(ExprPtr e, State s) {
    StepOutcome o;
    o.dist.add(Config{std::move(e), std::move(s)}, Rational(1));
    return o;
}

}  // namespace

StepOutcome head_step(const ExprPtr& e, const State& sigma) {
    switch (e->kind) {
        case ExprKind::App: {
            const ExprPtr& fn = e->kids[0];
            if (fn->kind != ExprKind::Rec) return stuck("application of a non-function value");
            ExprPtr body = fn->kids[0];
            if (!fn->arg.empty()) body = substitute(body, fn->arg, e->kids[1]);
            if (!fn->name.empty()) body = substitute(body, fn->name, fn);
            return det(std::move(body), sigma);
        }
        case ExprKind::BinOp: {
            const ExprPtr& a = e->kids[0];
            const ExprPtr& b = e->kids[1];
            switch (e->op) {
                case BinOpKind::Add: return det(mk_int(a->int_val + b->int_val), sigma);
                case BinOpKind::Sub: return det(mk_int(a->int_val - b->int_val), sigma);
                case BinOpKind::Mul: return det(mk_int(a->int_val * b->int_val), sigma);
                case BinOpKind::Quot:
                    if (b->int_val == 0) return stuck("division by zero");
                    return det(mk_int(a->int_val / b->int_val), sigma);
                case BinOpKind::Rem:
                    if (b->int_val == 0) return stuck("remainder by zero");
                    return det(mk_int(a->int_val % b->int_val), sigma);
                case BinOpKind::Lt: return det(mk_bool(a->int_val < b->int_val), sigma);
                case BinOpKind::Le: return det(mk_bool(a->int_val <= b->int_val), sigma);
                case BinOpKind::Eq:
                    switch (a->kind) {
                        case ExprKind::IntLit: return det(mk_bool(a->int_val == b->int_val), sigma);
                        case ExprKind::BoolLit: return det(mk_bool(a->bool_val == b->bool_val), sigma);
                        case ExprKind::UnitLit: return det(mk_bool(true), sigma);
                        case ExprKind::LocLit: return det(mk_bool(a->loc == b->loc), sigma);
                        default: return stuck("equality on compound or closure values");
                    }
            }
            return stuck("bad binop");
        }
        case ExprKind::If:
            return det(e->kids[0]->bool_val ? e->kids[1] : e->kids[2], sigma);
        case ExprKind::Fst:
            return det(e->kids[0]->kids[0], sigma);
        case ExprKind::Snd:
            return det(e->kids[0]->kids[1], sigma);
        case ExprKind::Match: {
            const ExprPtr& s = e->kids[0];
            if (s->kind == ExprKind::Inl)
                return det(substitute(e->kids[1], e->arg, s->kids[0]), sigma);
            return det(substitute(e->kids[2], e->arg2, s->kids[0]), sigma);
        }
        case ExprKind::AllocN: {
            const BigInt& n = e->kids[0]->int_val;
            if (n <= 0) return stuck("allocN with non-positive length");
            std::uint64_t count = n.convert_to<std::uint64_t>();
            // smallest base with `count` consecutive free cells
            std::uint64_t base = 0;
            while (true) {
                bool ok = true;
                for (std::uint64_t i = 0; i < count; ++i)
                    if (sigma.has(base + i)) {
                        base = base + i + 1;
                        ok = false;
                        break;
                    }
                if (ok) break;
            }
            State s2 = sigma;
            Value init(e->kids[1]);
            for (std::uint64_t i = 0; i < count; ++i) s2.cells.emplace(base + i, init);
            return det(mk_loc(base), std::move(s2));
        }
        case ExprKind::Load: {
            auto it = sigma.cells.find(e->kids[0]->loc);
            if (it == sigma.cells.end()) return stuck("load from unallocated location");
            return det(it->second.expr(), sigma);
        }
        case ExprKind::Store: {
            std::uint64_t l = e->kids[0]->loc;
            if (!sigma.has(l)) return stuck("store to unallocated location");
            State s2 = sigma;
            s2.cells.insert_or_assign(l, Value(e->kids[1]));
            return det(mk_unit(), std::move(s2));
        }
        case ExprKind::Offset: {
            const BigInt& i = e->kids[1]->int_val;
            BigInt target = BigInt(e->kids[0]->loc) + i;
            if (target < 0) return stuck("offset to a negative location");
            return det(mk_loc(target.convert_to<std::uint64_t>()), sigma);
        }
        case ExprKind::Rand: {
            const BigInt& n = e->kids[0]->int_val;
            if (n < 0) return stuck("rand with negative bound");
            std::uint64_t bound = n.convert_to<std::uint64_t>();
            StepOutcome o;
            Rational w(1, BigInt(bound) + 1);
            for (std::uint64_t k = 0; k <= bound; ++k)
                o.dist.add(Config{mk_int(BigInt(k)), sigma}, w);
            return o;
        }
        case ExprKind::Tick:
            return det(mk_unit(), sigma);
        default:
            return stuck("not a head redex");
    }
}

StepOutcome step(const Config& rho) {
    Decomposition d = decompose(rho.expr);
    if (std::holds_alternative<DecompValue>(d)) return StepOutcome{};
    if (auto* st = std::get_if<DecompStuck>(&d)) return StepOutcome{{}, st->reason};
    auto& r = std::get<DecompRedex>(d);
    StepOutcome head = head_step(r.head, rho.state);
    if (head.stuck_reason) return head;
    StepOutcome out;
    for (const auto& [cfg, w] : head.dist.entries())
        out.dist.add(Config{fill_context(r.frames, cfg.expr), cfg.state}, w);
    return out;
}

Classified classify(const Config& rho) {
    Decomposition d = decompose(rho.expr);
    if (std::holds_alternative<DecompValue>(d)) return {ConfigClass::Value, ""};
    if (auto* st = std::get_if<DecompStuck>(&d)) return {ConfigClass::Stuck, st->reason};
    StepOutcome head = head_step(std::get<DecompRedex>(d).head, rho.state);
    if (head.stuck_reason) return {ConfigClass::Stuck, *head.stuck_reason};
    return {ConfigClass::Reducible, ""};
}

// --- canonicalization -----------------------------------------------------------

namespace {

ExprPtr rename_locs(const ExprPtr& e, const std::unordered_map<std::uint64_t, std::uint64_t>& pi) {
    if (e->kind == ExprKind::LocLit) {
        auto it = pi.find(e->loc);
        return it == pi.end() || it->second == e->loc ? e : mk_loc(it->second);
    }
    if (e->kids.empty()) return e;
    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (const auto& k : e->kids) {
        ExprPtr nk = rename_locs(k, pi);
        changed = changed || nk != k;
        kids.push_back(std::move(nk));
    }
    if (!changed) return e;
    Expr copy = *e;
    copy.kids = kids;
    switch (e->kind) {
        case ExprKind::Rec: return mk_rec(e->name, e->arg, kids[0]);
        case ExprKind::App: return mk_app(kids[0], kids[1]);
        case ExprKind::BinOp: return mk_binop(e->op, kids[0], kids[1]);
        case ExprKind::If: return mk_if(kids[0], kids[1], kids[2]);
        case ExprKind::Pair: return mk_pair(kids[0], kids[1]);
        case ExprKind::Fst: return mk_fst(kids[0]);
        case ExprKind::Snd: return mk_snd(kids[0]);
        case ExprKind::Inl: return mk_inl(kids[0]);
        case ExprKind::Inr: return mk_inr(kids[0]);
        case ExprKind::Match: return mk_match(kids[0], e->arg, kids[1], e->arg2, kids[2]);
        case ExprKind::AllocN: return mk_allocn(kids[0], kids[1]);
        case ExprKind::Load: return mk_load(kids[0]);
        case ExprKind::Store: return mk_store(kids[0], kids[1]);
        case ExprKind::Offset: return mk_offset(kids[0], kids[1]);
        case ExprKind::Rand: return mk_rand(kids[0], e->name);
        case ExprKind::Tick: return mk_tick(kids[0]);
        default: return e;
    }
}

}  // namespace

namespace {
void collect_locs(const ExprPtr& e, std::vector<std::uint64_t>& out) {
    if (e->kind == ExprKind::LocLit) {
        out.push_back(e->loc);
        return;
    }
    for (const auto& k : e->kids) collect_locs(k, out);
}
}  // namespace

Config canonicalize(const Config& rho) {
    bool identity = true;
    std::uint64_t expect = 0;
    for (const auto& [l, v] : rho.state.cells) {
        if (l != expect++) {
            identity = false;
            break;
        }
    }
    if (identity) return rho;

    std::unordered_map<std::uint64_t, std::uint64_t> pi;
    std::uint64_t next = 0;
    for (const auto& [l, v] : rho.state.cells) pi.emplace(l, next++);

    // Dangling locations (mentioned but unallocated) keep their relative
    // pre-order and land past the heap, so they stay unallocated.
    std::vector<std::uint64_t> mentioned;
    collect_locs(rho.expr, mentioned);
    for (const auto& [l, v] : rho.state.cells) collect_locs(v.expr(), mentioned);
    for (std::uint64_t l : mentioned)
        if (!pi.count(l)) pi.emplace(l, next++);

    Config out;
    out.expr = rename_locs(rho.expr, pi);
    for (const auto& [l, v] : rho.state.cells)
        out.state.cells.emplace(pi.at(l), Value(rename_locs(v.expr(), pi)));
    return out;
}

}  // namespace expcost
