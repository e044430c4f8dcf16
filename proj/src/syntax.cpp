#include "expcost/syntax.hpp"

#include <sstream>
#include <stdexcept>

namespace expcost {

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) { return std::hash<std::string>{}(s); }

ExprPtr finish(Expr e) {
    std::size_t h = static_cast<std::size_t>(e.kind) * 0x100000001b3ULL;
    h = combine(h, static_cast<std::size_t>(e.op));
    switch (e.kind) {
        case ExprKind::IntLit: h = combine(h, hash_bigint(e.int_val)); break;
        case ExprKind::BoolLit: h = combine(h, e.bool_val ? 2 : 1); break;
        case ExprKind::LocLit: h = combine(h, static_cast<std::size_t>(e.loc)); break;
        default: break;
    }
    if (!e.name.empty()) h = combine(h, hash_string(e.name));
    if (!e.arg.empty()) h = combine(h, hash_string(e.arg));
    if (!e.arg2.empty()) h = combine(h, hash_string(e.arg2));
    for (const auto& k : e.kids) h = combine(h, k->hash);
    e.hash = h;

    switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::UnitLit:
        case ExprKind::LocLit:
        case ExprKind::Rec:
            e.is_value = true;
            break;
        case ExprKind::Pair:
            e.is_value = e.kids[0]->is_value && e.kids[1]->is_value;
            break;
        case ExprKind::Inl:
        case ExprKind::Inr:
            e.is_value = e.kids[0]->is_value;
            break;
        default:
            e.is_value = false;
            break;
    }
    return std::make_shared<const Expr>(std::move(e));
}

}  // namespace

const char* binop_name(BinOpKind op) {
    switch (op) {
        case BinOpKind::Add: return "+";
        case BinOpKind::Sub: return "-";
        case BinOpKind::Mul: return "*";
        case BinOpKind::Quot: return "quot";
        case BinOpKind::Rem: return "rem";
        case BinOpKind::Eq: return "=";
        case BinOpKind::Lt: return "<";
        case BinOpKind::Le: return "<=";
    }
    return "?";
}

ExprPtr mk_int(BigInt v) {
    Expr e;
    e.kind = ExprKind::IntLit;
    e.int_val = std::move(v);
    return finish(std::move(e));
}

ExprPtr mk_bool(bool b) {
    Expr e;
    e.kind = ExprKind::BoolLit;
    e.bool_val = b;
    return finish(std::move(e));
}

ExprPtr mk_unit() {
    static const ExprPtr unit = [] {
        Expr e;
        e.kind = ExprKind::UnitLit;
        return finish(std::move(e));
    }();
    return unit;
}

ExprPtr mk_loc(std::uint64_t l) {
    Expr e;
    e.kind = ExprKind::LocLit;
    e.loc = l;
    return finish(std::move(e));
}

ExprPtr mk_var(std::string x) {
    Expr e;
    e.kind = ExprKind::Var;
    e.name = std::move(x);
    return finish(std::move(e));
}

ExprPtr mk_rec(std::string f, std::string x, ExprPtr body) {
    Expr e;
    e.kind = ExprKind::Rec;
    e.name = std::move(f);
    e.arg = std::move(x);
    e.kids = {std::move(body)};
    return finish(std::move(e));
}

ExprPtr mk_app(ExprPtr fn, ExprPtr arg) {
    Expr e;
    e.kind = ExprKind::App;
    e.kids = {std::move(fn), std::move(arg)};
    return finish(std::move(e));
}

ExprPtr mk_binop(BinOpKind op, ExprPtr lhs, ExprPtr rhs) {
    Expr e;
    e.kind = ExprKind::BinOp;
    e.op = op;
    e.kids = {std::move(lhs), std::move(rhs)};
    return finish(std::move(e));
}

ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr els) {
    Expr e;
    e.kind = ExprKind::If;
    e.kids = {std::move(c), std::move(t), std::move(els)};
    return finish(std::move(e));
}

ExprPtr mk_pair(ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = ExprKind::Pair;
    e.kids = {std::move(a), std::move(b)};
    return finish(std::move(e));
}

ExprPtr mk_fst(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Fst;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

ExprPtr mk_snd(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Snd;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

ExprPtr mk_inl(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Inl;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

ExprPtr mk_inr(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Inr;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

ExprPtr mk_match(ExprPtr scrut, std::string xl, ExprPtr l, std::string xr, ExprPtr r) {
    Expr e;
    e.kind = ExprKind::Match;
    e.arg = std::move(xl);
    e.arg2 = std::move(xr);
    e.kids = {std::move(scrut), std::move(l), std::move(r)};
    return finish(std::move(e));
}

ExprPtr mk_allocn(ExprPtr n, ExprPtr v) {
    Expr e;
    e.kind = ExprKind::AllocN;
    e.kids = {std::move(n), std::move(v)};
    return finish(std::move(e));
}

ExprPtr mk_load(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Load;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

ExprPtr mk_store(ExprPtr l, ExprPtr v) {
    Expr e;
    e.kind = ExprKind::Store;
    e.kids = {std::move(l), std::move(v)};
    return finish(std::move(e));
}

ExprPtr mk_offset(ExprPtr l, ExprPtr i) {
    Expr e;
    e.kind = ExprKind::Offset;
    e.kids = {std::move(l), std::move(i)};
    return finish(std::move(e));
}

ExprPtr mk_rand(ExprPtr bound, std::string label) {
    Expr e;
    e.kind = ExprKind::Rand;
    e.name = std::move(label);
    e.kids = {std::move(bound)};
    return finish(std::move(e));
}

ExprPtr mk_tick(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Tick;
    e.kids = {std::move(x)};
    return finish(std::move(e));
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind) return false;
    if (a->op != b->op || a->bool_val != b->bool_val || a->loc != b->loc) return false;
    if (a->name != b->name || a->arg != b->arg || a->arg2 != b->arg2) return false;
    if (a->int_val != b->int_val) return false;
    if (a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_eq(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace {

void print(const ExprPtr& e, std::ostream& os) {
    switch (e->kind) {
        case ExprKind::IntLit: os << e->int_val; break;
        case ExprKind::BoolLit: os << (e->bool_val ? "true" : "false"); break;
        case ExprKind::UnitLit: os << "()"; break;
        case ExprKind::LocLit: os << "<loc " << e->loc << ">"; break;
        case ExprKind::Var: os << e->name; break;
        case ExprKind::Rec:
            os << "(rec " << (e->name.empty() ? "_" : e->name) << " "
               << (e->arg.empty() ? "_" : e->arg) << " = ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::App:
            os << "(";
            print(e->kids[0], os);
            os << " ";
            print(e->kids[1], os);
            os << ")";
            break;
        case ExprKind::BinOp:
            os << "(";
            print(e->kids[0], os);
            os << " " << binop_name(e->op) << " ";
            print(e->kids[1], os);
            os << ")";
            break;
        case ExprKind::If:
            os << "(if ";
            print(e->kids[0], os);
            os << " then ";
            print(e->kids[1], os);
            os << " else ";
            print(e->kids[2], os);
            os << ")";
            break;
        case ExprKind::Pair:
            os << "(";
            print(e->kids[0], os);
            os << ", ";
            print(e->kids[1], os);
            os << ")";
            break;
        case ExprKind::Fst:
            os << "(fst ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Snd:
            os << "(snd ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Inl:
            os << "(inl ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Inr:
            os << "(inr ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Match:
            os << "(match ";
            print(e->kids[0], os);
            os << " with inl " << (e->arg.empty() ? "_" : e->arg) << " -> ";
            print(e->kids[1], os);
            os << " | inr " << (e->arg2.empty() ? "_" : e->arg2) << " -> ";
            print(e->kids[2], os);
            os << " end)";
            break;
        case ExprKind::AllocN:
            os << "(allocN ";
            print(e->kids[0], os);
            os << " ";
            print(e->kids[1], os);
            os << ")";
            break;
        case ExprKind::Load:
            os << "(!";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Store:
            os << "(";
            print(e->kids[0], os);
            os << " <- ";
            print(e->kids[1], os);
            os << ")";
            break;
        case ExprKind::Offset:
            os << "(";
            print(e->kids[0], os);
            os << ".[";
            print(e->kids[1], os);
            os << "])";
            break;
        case ExprKind::Rand:
            os << "(rand";
            if (!e->name.empty()) os << "[" << e->name << "]";
            os << " ";
            print(e->kids[0], os);
            os << ")";
            break;
        case ExprKind::Tick:
            os << "(tick ";
            print(e->kids[0], os);
            os << ")";
            break;
    }
}

}  // namespace

std::string expr_str(const ExprPtr& e) {
    std::ostringstream os;
    print(e, os);
    return os.str();
}

Value::Value(ExprPtr e) : e_(std::move(e)) {
    if (!e_ || !e_->is_value) throw std::invalid_argument("not a value: " + (e_ ? expr_str(e_) : "<null>"));
}

std::optional<Value> as_value(const ExprPtr& e) {
    if (e && e->is_value) return Value(e);
    return std::nullopt;
}

std::optional<std::vector<BigInt>> decode_int_list(const Value& v) {
    std::vector<BigInt> out;
    ExprPtr cur = v.expr();
    while (true) {
        if (cur->kind == ExprKind::Inl) {
            if (cur->kids[0]->kind != ExprKind::UnitLit) return std::nullopt;
            return out;
        }
        if (cur->kind != ExprKind::Inr) return std::nullopt;
        const ExprPtr& p = cur->kids[0];
        if (p->kind != ExprKind::Pair || p->kids[0]->kind != ExprKind::IntLit) return std::nullopt;
        out.push_back(p->kids[0]->int_val);
        cur = p->kids[1];
    }
}

ExprPtr encode_int_list(const std::vector<BigInt>& xs) {
    ExprPtr acc = mk_inl(mk_unit());
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) acc = mk_inr(mk_pair(mk_int(*it), acc));
    return acc;
}

std::size_t State::hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& [l, v] : cells) {
        h = combine(h, static_cast<std::size_t>(l));
        h = combine(h, v.expr()->hash);
    }
    return h;
}

bool operator==(const State& a, const State& b) {
    if (a.cells.size() != b.cells.size()) return false;
    auto ia = a.cells.begin();
    auto ib = b.cells.begin();
    for (; ia != a.cells.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!expr_eq(ia->second.expr(), ib->second.expr())) return false;
    }
    return true;
}

std::size_t Config::hash() const {
    std::size_t h = expr ? expr->hash : 0;
    return combine(h, state.hash());
}

bool operator==(const Config& a, const Config& b) {
    return expr_eq(a.expr, b.expr) && a.state == b.state;
}

std::string config_str(const Config& c) {
    std::ostringstream os;
    os << expr_str(c.expr);
    if (!c.state.cells.empty()) {
        os << "  |  heap {";
        bool first = true;
        for (const auto& [l, v] : c.state.cells) {
            if (!first) os << ", ";
            first = false;
            os << l << " -> " << v.str();
        }
        os << "}";
    }
    return os.str();
}

}  // namespace expcost
