#include "expcost/cost_model.hpp"

#include <cmath>
#include <random>

namespace expcost {

CostVal CostModel::cost(const ExprPtr& e) const {
    if (name_ == "all") return CostVal::of_rational(Rational(1));
    if (e->is_value) return CostVal::of_rational(Rational(0));
    auto redex = decomp_redex(e);
    if (!redex) return name_ == "all" ? CostVal::of_rational(Rational(1)) : CostVal::of_rational(Rational(0));
    return fn_(*redex);
}

CostModel cost_all() {
    return CostModel("all", true, [](const ExprPtr&) { return CostVal::of_rational(Rational(1)); });
}

CostModel cost_app() {
    return CostModel("app", true, [](const ExprPtr& r) {
        return CostVal::of_rational(Rational(r->kind == ExprKind::App ? 1 : 0));
    });
}

CostModel cost_rand() {
    return CostModel("rand", false, [](const ExprPtr& r) {
        if (r->kind != ExprKind::Rand) return CostVal::of_rational(Rational(0));
        const BigInt& n = r->kids[0]->int_val;
        if (n < 0) return CostVal::of_rational(Rational(0));
        BigInt outcomes = n + 1;
        if (auto k = exact_log2(outcomes)) return CostVal::of_rational(Rational(*k));
        return CostVal::of_double(std::log2(outcomes.convert_to<double>()));
    });
}

CostModel cost_tick() {
    return CostModel("tick", true, [](const ExprPtr& r) {
        if (r->kind != ExprKind::Tick) return CostVal::of_rational(Rational(0));
        BigInt z = r->kids[0]->int_val;
        if (z < 0) z = -z;
        return CostVal::of_rational(Rational(z));
    });
}

CostModel cost_randcount() {
    return CostModel("randcount", true, [](const ExprPtr& r) {
        return CostVal::of_rational(Rational(r->kind == ExprKind::Rand ? 1 : 0));
    });
}

std::optional<CostModel> find_model(const std::string& name) {
    if (name == "all") return cost_all();
    if (name == "app") return cost_app();
    if (name == "rand") return cost_rand();
    if (name == "tick") return cost_tick();
    if (name == "randcount") return cost_randcount();
    return std::nullopt;
}

std::vector<std::string> model_names() { return {"all", "app", "rand", "tick", "randcount"}; }

CostModel custom_model(std::string name, bool rational, CostModel::RedexFn fn) {
    return CostModel(std::move(name), rational, std::move(fn));
}

bool check_context_invariance(const CostModel& m,
                              const std::vector<std::pair<std::vector<Frame>, ExprPtr>>& samples) {
    for (const auto& [frames, redex] : samples) {
        CostVal inner = m.cost(redex);
        CostVal outer = m.cost(fill_context(frames, redex));
        if (inner.exact && outer.exact) {
            if (*inner.exact != *outer.exact) return false;
        } else if (inner.approx != outer.approx) {
            return false;
        }
    }
    return true;
}

namespace {

class SampleGen {
public:
    explicit SampleGen(std::uint64_t seed) : rng_(seed) {}

    ExprPtr value() {
        switch (pick(6)) {
            case 0: return mk_int(BigInt(static_cast<long>(pick(21)) - 10));
            case 1: return mk_bool(pick(2) == 0);
            case 2: return mk_unit();
            case 3: return mk_pair(mk_int(BigInt(static_cast<long>(pick(5)))), mk_bool(true));
            case 4: return mk_inl(mk_unit());
            default: return mk_rec("f", "x", mk_var("x"));
        }
    }

    ExprPtr redex() {
        switch (pick(9)) {
            case 0: return mk_binop(BinOpKind::Add, int_lit(), int_lit());
            case 1: return mk_binop(BinOpKind::Lt, int_lit(), int_lit());
            case 2: return mk_if(mk_bool(pick(2) == 0), value(), value());
            case 3: return mk_app(mk_rec("f", "x", mk_var("x")), value());
            case 4: return mk_fst(mk_pair(value(), value()));
            case 5: return mk_rand(mk_int(BigInt(static_cast<long>(pick(9)))));
            case 6: return mk_tick(mk_int(BigInt(static_cast<long>(pick(13)) - 6)));
            case 7: return mk_match(mk_inl(value()), "x", mk_var("x"), "y", mk_var("y"));
            default: return mk_snd(mk_pair(value(), value()));
        }
    }

    std::vector<Frame> frames() {
        std::vector<Frame> out;
        std::size_t depth = pick(5);
        for (std::size_t i = 0; i < depth; ++i) out.push_back(frame());
        return out;
    }

private:
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    ExprPtr int_lit() { return mk_int(BigInt(static_cast<long>(pick(15)))); }

    Frame frame() {
        // build a legal frame by decomposing K[dummy-redex] one level
        ExprPtr hole = mk_rand(mk_int(BigInt(1)));  // stand-in, replaced when plugging
        ExprPtr shell;
        switch (pick(8)) {
            case 0: shell = mk_binop(BinOpKind::Add, int_lit(), hole); break;
            case 1: shell = mk_binop(BinOpKind::Mul, hole, int_lit()); break;
            case 2: shell = mk_app(mk_rec("f", "x", mk_var("x")), hole); break;
            case 3: shell = mk_if(hole, value(), value()); break;
            case 4: shell = mk_pair(int_lit(), hole); break;
            case 5: shell = mk_tick(hole); break;
            case 6: shell = mk_fst(hole); break;
            default: shell = mk_inr(hole); break;
        }
        Decomposition d = decompose(shell);
        auto& r = std::get<DecompRedex>(d);
        return r.frames.at(0);
    }

    std::mt19937_64 rng_;
};

}  // namespace

std::vector<std::pair<std::vector<Frame>, ExprPtr>> random_context_samples(std::size_t count,
                                                                           std::uint64_t seed) {
    SampleGen gen(seed);
    std::vector<std::pair<std::vector<Frame>, ExprPtr>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(gen.frames(), gen.redex());
    return out;
}

}  // namespace expcost
