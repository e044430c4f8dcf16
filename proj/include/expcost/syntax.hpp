#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expcost/rational.hpp"

namespace expcost {

enum class ExprKind {
    IntLit,
    BoolLit,
    UnitLit,
    LocLit,
    Var,
    Rec,     // rec f x = body          name=f arg=x kids={body}
    App,     // kids={fn, arg}
    BinOp,   // kids={lhs, rhs}
    If,      // kids={cond, then, else}
    Pair,    // kids={fst, snd}
    Fst,
    Snd,
    Inl,
    Inr,
    Match,   // kids={scrut, left, right}  arg=left binder, arg2=right binder
    AllocN,  // kids={count, init}
    Load,    // kids={loc}
    Store,   // kids={loc, val}
    Offset,  // kids={loc, idx}
    Rand,    // kids={bound}   name=optional site label
    Tick,    // kids={amount}
};

enum class BinOpKind { Add, Sub, Mul, Quot, Rem, Eq, Lt, Le };

const char* binop_name(BinOpKind op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    BinOpKind op = BinOpKind::Add;
    BigInt int_val;
    bool bool_val = false;
    std::uint64_t loc = 0;
    std::string name;   // Var name; Rec function name; Rand label
    std::string arg;    // Rec parameter; Match inl binder
    std::string arg2;   // Match inr binder
    std::vector<ExprPtr> kids;

    std::size_t hash = 0;
    bool is_value = false;
};

// --- node factories ---------------------------------------------------------

ExprPtr mk_int(BigInt v);
ExprPtr mk_bool(bool b);
ExprPtr mk_unit();
ExprPtr mk_loc(std::uint64_t l);
ExprPtr mk_var(std::string x);
ExprPtr mk_rec(std::string f, std::string x, ExprPtr body);
ExprPtr mk_app(ExprPtr fn, ExprPtr arg);
ExprPtr mk_binop(BinOpKind op, ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr mk_pair(ExprPtr a, ExprPtr b);
ExprPtr mk_fst(ExprPtr e);
ExprPtr mk_snd(ExprPtr e);
ExprPtr mk_inl(ExprPtr e);
ExprPtr mk_inr(ExprPtr e);
ExprPtr mk_match(ExprPtr scrut, std::string xl, ExprPtr l, std::string xr, ExprPtr r);
ExprPtr mk_allocn(ExprPtr n, ExprPtr v);
ExprPtr mk_load(ExprPtr e);
ExprPtr mk_store(ExprPtr l, ExprPtr v);
ExprPtr mk_offset(ExprPtr l, ExprPtr i);
ExprPtr mk_rand(ExprPtr bound, std::string label = "");
ExprPtr mk_tick(ExprPtr e);

bool expr_eq(const ExprPtr& a, const ExprPtr& b);
std::string expr_str(const ExprPtr& e);

struct ExprHash {
    std::size_t operator()(const ExprPtr& e) const { return e ? e->hash : 0; }
};
struct ExprEq {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return expr_eq(a, b); }
};

// --- values -----------------------------------------------------------------

// A value is an expression with no head redex anywhere (ints, bools, unit,
// locations, rec-closures, and pairs/sums of values).
class Value {
public:
    Value() : e_(mk_unit()) {}
    explicit Value(ExprPtr e);
    const ExprPtr& expr() const { return e_; }

    bool is_int() const { return e_->kind == ExprKind::IntLit; }
    bool is_bool() const { return e_->kind == ExprKind::BoolLit; }
    bool is_unit() const { return e_->kind == ExprKind::UnitLit; }
    bool is_loc() const { return e_->kind == ExprKind::LocLit; }
    bool is_closure() const { return e_->kind == ExprKind::Rec; }
    bool is_pair() const { return e_->kind == ExprKind::Pair; }
    bool is_inl() const { return e_->kind == ExprKind::Inl; }
    bool is_inr() const { return e_->kind == ExprKind::Inr; }

    const BigInt& as_int() const { return e_->int_val; }
    bool as_bool() const { return e_->bool_val; }
    std::uint64_t as_loc() const { return e_->loc; }
    Value pair_fst() const { return Value(e_->kids[0]); }
    Value pair_snd() const { return Value(e_->kids[1]); }
    Value sum_payload() const { return Value(e_->kids[0]); }

    std::string str() const { return expr_str(e_); }

    friend bool operator==(const Value& a, const Value& b) { return expr_eq(a.e_, b.e_); }

private:
    ExprPtr e_;
};

std::optional<Value> as_value(const ExprPtr& e);

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.expr()->hash; }
};

// Decodes a RandML list value (inl () / inr (h, tail)) of integers.
std::optional<std::vector<BigInt>> decode_int_list(const Value& v);
ExprPtr encode_int_list(const std::vector<BigInt>& xs);

// --- state and configurations ------------------------------------------------

// Heap: finite map from location identifiers to values. Kept ordered so
// canonical comparison and printing are deterministic.
struct State {
    std::map<std::uint64_t, Value> cells;

    bool has(std::uint64_t l) const { return cells.count(l) != 0; }
    std::size_t hash() const;
    friend bool operator==(const State& a, const State& b);
};

struct Config {
    ExprPtr expr;
    State state;

    std::size_t hash() const;
    friend bool operator==(const Config& a, const Config& b);
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const { return c.hash(); }
};

std::string config_str(const Config& c);

}  // namespace expcost
