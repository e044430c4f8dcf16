#include "expcost/parser.hpp"

#include <cctype>
#include <unordered_set>
#include <vector>

namespace expcost {

namespace {

enum class Tok {
    Int,
    Ident,
    Keyword,
    LParen,
    RParen,
    LBrack,
    RBrack,
    DotLBrack,
    Comma,
    Semi,
    Arrow,    // ->
    LArrow,   // <-
    Eq,
    Lt,
    Le,
    Plus,
    Minus,
    Star,
    Bang,
    Bar,
    Eof,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const std::unordered_set<std::string> kKeywords = {
    "rec", "fun", "let", "in", "if", "then", "else", "fst", "snd", "inl", "inr",
    "match", "with", "end", "allocN", "ref", "rand", "tick", "flip", "true",
    "false", "quot", "rem"};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws_and_comments();
            int l = line_, c = col_;
            if (eof()) {
                out.push_back({Tok::Eof, "", l, c});
                return out;
            }
            char ch = peek();
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::string d;
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) d += advance();
                out.push_back({Tok::Int, d, l, c});
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::string id;
                while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\''))
                    id += advance();
                out.push_back({kKeywords.count(id) ? Tok::Keyword : Tok::Ident, id, l, c});
                continue;
            }
            switch (ch) {
                case '(': advance(); out.push_back({Tok::LParen, "(", l, c}); break;
                case ')': advance(); out.push_back({Tok::RParen, ")", l, c}); break;
                case '[': advance(); out.push_back({Tok::LBrack, "[", l, c}); break;
                case ']': advance(); out.push_back({Tok::RBrack, "]", l, c}); break;
                case ',': advance(); out.push_back({Tok::Comma, ",", l, c}); break;
                case ';': advance(); out.push_back({Tok::Semi, ";", l, c}); break;
                case '!': advance(); out.push_back({Tok::Bang, "!", l, c}); break;
                case '|': advance(); out.push_back({Tok::Bar, "|", l, c}); break;
                case '+': advance(); out.push_back({Tok::Plus, "+", l, c}); break;
                case '*': advance(); out.push_back({Tok::Star, "*", l, c}); break;
                case '=': advance(); out.push_back({Tok::Eq, "=", l, c}); break;
                case '.':
                    advance();
                    if (!eof() && peek() == '[') {
                        advance();
                        out.push_back({Tok::DotLBrack, ".[", l, c});
                    } else {
                        throw ParseError("unexpected '.'", l, c);
                    }
                    break;
                case '-':
                    advance();
                    if (!eof() && peek() == '>') {
                        advance();
                        out.push_back({Tok::Arrow, "->", l, c});
                    } else {
                        out.push_back({Tok::Minus, "-", l, c});
                    }
                    break;
                case '<':
                    advance();
                    if (!eof() && peek() == '-') {
                        advance();
                        out.push_back({Tok::LArrow, "<-", l, c});
                    } else if (!eof() && peek() == '=') {
                        advance();
                        out.push_back({Tok::Le, "<=", l, c});
                    } else {
                        out.push_back({Tok::Lt, "<", l, c});
                    }
                    break;
                default:
                    throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
            }
        }
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    char advance() {
        char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_ws_and_comments() {
        while (!eof()) {
            char ch = peek();
            if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
                continue;
            }
            if (ch == '(' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                int l = line_, c = col_;
                advance();
                advance();
                int depth = 1;
                while (depth > 0) {
                    if (eof()) throw ParseError("unterminated comment", l, c);
                    if (peek() == '(' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                        advance();
                        advance();
                        ++depth;
                    } else if (peek() == '*' && pos_ + 1 < src_.size() && src_[pos_ + 1] == ')') {
                        advance();
                        advance();
                        --depth;
                    } else {
                        advance();
                    }
                }
                continue;
            }
            break;
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        expect(Tok::Eof, "end of input");
        return e;
    }

private:
    const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& advance() { return toks_[pos_++]; }
    bool at(Tok t) const { return peek().kind == t; }
    bool at_kw(const char* kw) const { return peek().kind == Tok::Keyword && peek().text == kw; }

    const Token& expect(Tok t, const char* what) {
        if (!at(t)) throw ParseError(std::string("expected ") + what + ", found '" + peek().text + "'", peek().line, peek().col);
        return advance();
    }
    void expect_kw(const char* kw) {
        if (!at_kw(kw)) throw ParseError(std::string("expected '") + kw + "', found '" + peek().text + "'", peek().line, peek().col);
        advance();
    }

    // scope handling: "_" binds nothing
    struct ScopeGuard {
        Parser& p;
        std::size_t n;
        ScopeGuard(Parser& p) : p(p), n(p.scope_.size()) {}
        ~ScopeGuard() { p.scope_.resize(n); }
    };
    void bind(const std::string& x) {
        if (x != "_") scope_.push_back(x);
    }
    bool in_scope(const std::string& x) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (*it == x) return true;
        return false;
    }
    static std::string binder(const std::string& x) { return x == "_" ? std::string() : x; }

    std::string expect_binder() {
        const Token& t = expect(Tok::Ident, "identifier");
        return t.text;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_stmt();
        if (at(Tok::Semi)) {
            advance();
            ExprPtr rhs = parse_expr();
            return mk_app(mk_rec("", "", rhs), lhs);  // e1; e2  ==  let _ = e1 in e2
        }
        return lhs;
    }

    ExprPtr parse_stmt() {
        if (at_kw("let")) return parse_let();
        if (at_kw("fun")) return parse_fun();
        if (at_kw("rec")) return parse_rec();
        if (at_kw("if")) {
            advance();
            ExprPtr c = parse_expr_no_seq();
            expect_kw("then");
            ExprPtr t = parse_stmt();
            expect_kw("else");
            ExprPtr e = parse_stmt();
            return mk_if(c, t, e);
        }
        if (at_kw("match")) return parse_match();
        return parse_store();
    }

    // condition position: allow everything but top-level ';'
    ExprPtr parse_expr_no_seq() { return parse_stmt(); }

    ExprPtr parse_let() {
        expect_kw("let");
        if (at_kw("rec")) {
            advance();
            std::string f = expect_binder();
            std::vector<std::string> args;
            while (at(Tok::Ident)) args.push_back(advance().text);
            if (args.empty())
                throw ParseError("let rec needs at least one parameter", peek().line, peek().col);
            expect(Tok::Eq, "'='");
            ExprPtr body;
            {
                ScopeGuard g(*this);
                bind(f);
                for (const auto& a : args) bind(a);
                body = parse_expr_no_seq();
            }
            // rec f x1 x2.. = e  desugars the extra parameters to nested funs
            for (std::size_t i = args.size(); i-- > 1;) body = mk_rec("", binder(args[i]), body);
            ExprPtr fn = mk_rec(binder(f), binder(args[0]), body);
            expect_kw("in");
            ScopeGuard g(*this);
            bind(f);
            ExprPtr rest = parse_expr();
            return mk_app(mk_rec("", binder(f), rest), fn);
        }
        std::string x = expect_binder();
        expect(Tok::Eq, "'='");
        ExprPtr e1 = parse_expr_no_seq();
        expect_kw("in");
        ScopeGuard g(*this);
        bind(x);
        ExprPtr e2 = parse_expr();
        return mk_app(mk_rec("", binder(x), e2), e1);
    }

    ExprPtr parse_fun() {
        expect_kw("fun");
        std::vector<std::string> args;
        while (at(Tok::Ident)) args.push_back(advance().text);
        if (args.empty()) throw ParseError("fun needs at least one parameter", peek().line, peek().col);
        expect(Tok::Arrow, "'->'");
        ScopeGuard g(*this);
        for (const auto& a : args) bind(a);
        ExprPtr body = parse_stmt();
        for (std::size_t i = args.size(); i-- > 0;) body = mk_rec("", binder(args[i]), body);
        return body;
    }

    ExprPtr parse_rec() {
        expect_kw("rec");
        std::string f = expect_binder();
        std::vector<std::string> args;
        while (at(Tok::Ident)) args.push_back(advance().text);
        if (args.empty()) throw ParseError("rec needs at least one parameter", peek().line, peek().col);
        expect(Tok::Eq, "'='");
        ScopeGuard g(*this);
        bind(f);
        for (const auto& a : args) bind(a);
        ExprPtr body = parse_stmt();
        for (std::size_t i = args.size(); i-- > 1;) body = mk_rec("", binder(args[i]), body);
        return mk_rec(binder(f), binder(args[0]), body);
    }

    ExprPtr parse_match() {
        expect_kw("match");
        ExprPtr scrut = parse_expr_no_seq();
        expect_kw("with");
        if (at(Tok::Bar)) advance();
        expect_kw("inl");
        std::string xl = expect_binder();
        expect(Tok::Arrow, "'->'");
        ExprPtr l;
        {
            ScopeGuard g(*this);
            bind(xl);
            l = parse_expr();
        }
        expect(Tok::Bar, "'|'");
        expect_kw("inr");
        std::string xr = expect_binder();
        expect(Tok::Arrow, "'->'");
        ExprPtr r;
        {
            ScopeGuard g(*this);
            bind(xr);
            r = parse_expr();
        }
        expect_kw("end");
        return mk_match(scrut, binder(xl), l, binder(xr), r);
    }

    ExprPtr parse_store() {
        ExprPtr lhs = parse_cmp();
        if (at(Tok::LArrow)) {
            advance();
            ExprPtr rhs = parse_store();
            return mk_store(lhs, rhs);
        }
        return lhs;
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        if (at(Tok::Eq)) {
            advance();
            return mk_binop(BinOpKind::Eq, lhs, parse_add());
        }
        if (at(Tok::Lt)) {
            advance();
            return mk_binop(BinOpKind::Lt, lhs, parse_add());
        }
        if (at(Tok::Le)) {
            advance();
            return mk_binop(BinOpKind::Le, lhs, parse_add());
        }
        return lhs;
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BinOpKind op = at(Tok::Plus) ? BinOpKind::Add : BinOpKind::Sub;
            advance();
            lhs = mk_binop(op, lhs, parse_mul());
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_app();
        while (at(Tok::Star) || at_kw("quot") || at_kw("rem")) {
            BinOpKind op = at(Tok::Star) ? BinOpKind::Mul
                                         : (peek().text == "quot" ? BinOpKind::Quot : BinOpKind::Rem);
            advance();
            lhs = mk_binop(op, lhs, parse_app());
        }
        return lhs;
    }

    bool starts_operand() const {
        switch (peek().kind) {
            case Tok::Int:
            case Tok::Ident:
            case Tok::LParen:
            case Tok::Bang:
                return true;
            case Tok::Keyword: {
                const std::string& t = peek().text;
                return t == "true" || t == "false" || t == "flip" || t == "fst" || t == "snd" ||
                       t == "inl" || t == "inr" || t == "ref" || t == "rand" || t == "tick" ||
                       t == "allocN";
            }
            default:
                return false;
        }
    }

    ExprPtr parse_app() {
        ExprPtr head = parse_prefix();
        while (starts_operand()) head = mk_app(head, parse_prefix());
        return head;
    }

    ExprPtr parse_prefix() {
        if (at(Tok::Bang)) {
            advance();
            return mk_load(parse_prefix());
        }
        if (peek().kind == Tok::Keyword) {
            const std::string t = peek().text;
            if (t == "fst") {
                advance();
                return mk_fst(parse_prefix());
            }
            if (t == "snd") {
                advance();
                return mk_snd(parse_prefix());
            }
            if (t == "inl") {
                advance();
                return mk_inl(parse_prefix());
            }
            if (t == "inr") {
                advance();
                return mk_inr(parse_prefix());
            }
            if (t == "ref") {
                advance();
                return mk_allocn(mk_int(1), parse_prefix());
            }
            if (t == "tick") {
                advance();
                return mk_tick(parse_prefix());
            }
            if (t == "allocN") {
                advance();
                ExprPtr n = parse_prefix();
                ExprPtr v = parse_prefix();
                return mk_allocn(n, v);
            }
            if (t == "rand") {
                advance();
                std::string label;
                if (at(Tok::LBrack)) {
                    advance();
                    label = expect(Tok::Ident, "rand label").text;
                    expect(Tok::RBrack, "']'");
                }
                return mk_rand(parse_prefix(), label);
            }
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_atom();
        while (at(Tok::DotLBrack)) {
            advance();
            ExprPtr idx = parse_expr();
            expect(Tok::RBrack, "']'");
            e = mk_offset(e, idx);
        }
        return e;
    }

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                advance();
                return mk_int(BigInt(t.text));
            }
            case Tok::Minus: {
                // negative integer literal
                if (peek(1).kind == Tok::Int) {
                    advance();
                    const Token& d = advance();
                    return mk_int(-BigInt(d.text));
                }
                throw ParseError("unexpected '-'", t.line, t.col);
            }
            case Tok::Ident: {
                advance();
                if (t.text == "_") throw ParseError("'_' cannot be used as an expression", t.line, t.col);
                if (!in_scope(t.text))
                    throw ParseError("unbound variable '" + t.text + "'", t.line, t.col);
                return mk_var(t.text);
            }
            case Tok::Keyword: {
                if (t.text == "true") {
                    advance();
                    return mk_bool(true);
                }
                if (t.text == "false") {
                    advance();
                    return mk_bool(false);
                }
                if (t.text == "flip") {
                    advance();
                    return mk_binop(BinOpKind::Eq, mk_rand(mk_int(1)), mk_int(1));
                }
                throw ParseError("unexpected '" + t.text + "'", t.line, t.col);
            }
            case Tok::LParen: {
                advance();
                if (at(Tok::RParen)) {
                    advance();
                    return mk_unit();
                }
                ExprPtr e = parse_expr();
                if (at(Tok::Comma)) {
                    advance();
                    ExprPtr snd = parse_expr();
                    expect(Tok::RParen, "')'");
                    return mk_pair(e, snd);
                }
                expect(Tok::RParen, "')'");
                return e;
            }
            default:
                throw ParseError("unexpected '" + t.text + "'", t.line, t.col);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string> scope_;
};

}  // namespace

ExprPtr parse_program(const std::string& text) {
    Lexer lex(text);
    Parser p(lex.run());
    return p.run();  // scope checking happens during the parse
}

}  // namespace expcost
