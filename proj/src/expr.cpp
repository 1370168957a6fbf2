#include "csrr/expr.hpp"

#include <cctype>
#include <vector>

namespace csrr {

namespace {

enum class Tok { Ident, Integer, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string t) { out.push_back({k, std::move(t), line, col}); };
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(c)) {
            ++col;
            ++i;
            continue;
        }
        // U+2212 (minus sign) normalizes to '-'.
        if (c == 0xE2 && i + 2 < src.size() &&
            static_cast<unsigned char>(src[i + 1]) == 0x88 &&
            static_cast<unsigned char>(src[i + 2]) == 0x92) {
            push(Tok::Minus, "-");
            i += 3;
            col += 1;
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            push(Tok::Ident, std::string(src.substr(i, j - i)));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            push(Tok::Integer, std::string(src.substr(i, j - i)));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        switch (c) {
        case '+': push(Tok::Plus, "+"); break;
        case '-': push(Tok::Minus, "-"); break;
        case '*': push(Tok::Star, "*"); break;
        case '/': push(Tok::Slash, "/"); break;
        case '^': push(Tok::Caret, "^"); break;
        case '(': push(Tok::LParen, "("); break;
        case ')': push(Tok::RParen, ")"); break;
        default:
            throw ParseError("unexpected character '" + std::string(1, src[i]) + "'",
                             line, col);
        }
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, VarUniversePtr uni)
        : toks_(std::move(toks)), uni_(std::move(uni)) {}

    RatFun parse() {
        RatFun r = expr();
        expect(Tok::End, "end of input");
        return r;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    void expect(Tok k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what, peek().line, peek().col);
        ++pos_;
    }

    RatFun expr() {
        RatFun acc = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            Tok op = take().kind;
            RatFun rhs = term();
            acc = op == Tok::Plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    RatFun term() {
        RatFun acc = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            Token op = take();
            RatFun rhs = factor();
            if (op.kind == Tok::Star) {
                acc = acc * rhs;
            } else {
                if (rhs.is_zero())
                    throw ParseError("division by zero", op.line, op.col);
                acc = acc / rhs;
            }
        }
        return acc;
    }

    RatFun factor() {
        bool neg = false;
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            if (take().kind == Tok::Minus) neg = !neg;
        }
        RatFun v = power();
        return neg ? -v : v;
    }

    RatFun power() {
        Token head = peek();
        RatFun base = atom();
        if (peek().kind != Tok::Caret) return base;
        Token caret = take();
        bool neg = false;
        while (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
            if (take().kind == Tok::Minus) neg = !neg;
        }
        if (peek().kind != Tok::Integer)
            throw ParseError("expected integer exponent", peek().line, peek().col);
        Token e = take();
        long exp = 0;
        try {
            exp = std::stol(e.text);
        } catch (...) {
            throw ParseError("exponent out of range", e.line, e.col);
        }
        if (neg) {
            bool is_var = head.kind == Tok::Ident;
            if (!is_var)
                throw ParseError("negative exponent allowed on variables only",
                                 caret.line, caret.col);
            if (base.is_zero())
                throw ParseError("negative power of zero", caret.line, caret.col);
            return base.pow(static_cast<int>(-exp));
        }
        return base.pow(static_cast<int>(exp));
    }

    RatFun atom() {
        Token t = take();
        switch (t.kind) {
        case Tok::Ident: {
            auto idx = uni_->index_of(t.text);
            if (!idx)
                throw ParseError("undeclared identifier '" + t.text + "'", t.line,
                                 t.col);
            return RatFun::variable(uni_, *idx);
        }
        case Tok::Integer: {
            Rat q(t.text);
            q.canonicalize();
            return RatFun::constant(uni_, q);
        }
        case Tok::LParen: {
            RatFun inner = expr();
            if (peek().kind != Tok::RParen)
                throw ParseError("expected ')'", peek().line, peek().col);
            ++pos_;
            return inner;
        }
        default:
            throw ParseError("expected identifier, integer or '('", t.line, t.col);
        }
    }

    std::vector<Token> toks_;
    VarUniversePtr uni_;
    std::size_t pos_ = 0;
};

} // namespace

RatFun parse_ratfun(std::string_view text, const VarUniversePtr& universe) {
    return Parser(lex(text), universe).parse();
}

} // namespace csrr
