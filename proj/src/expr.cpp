#include "covel/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

namespace covel {

namespace {

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs"};

bool isFunctionName(const std::string& s) {
    for (const char* f : kFunctions)
        if (s == f) return true;
    return false;
}

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    double number = 0.0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& current() const { return cur_; }

    void advance() {
        skipWhitespace();
        cur_ = Token{Token::End, 0.0, "", line_, col_};
        if (pos_ >= text_.size()) return;
        const char c = text_[pos_];
        switch (c) {
            case '+': cur_.kind = Token::Plus; consume(); return;
            case '-': cur_.kind = Token::Minus; consume(); return;
            case '*': cur_.kind = Token::Star; consume(); return;
            case '/': cur_.kind = Token::Slash; consume(); return;
            case '^': cur_.kind = Token::Caret; consume(); return;
            case '(': cur_.kind = Token::LParen; consume(); return;
            case ')': cur_.kind = Token::RParen; consume(); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lexNumber();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            cur_.kind = Token::Ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                cur_.text += text_[pos_];
                consume();
            }
            return;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

private:
    void skipWhitespace() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                consume();
            } else {
                break;
            }
        }
    }

    void consume() {
        ++pos_;
        ++col_;
    }

    void lexNumber() {
        cur_.kind = Token::Number;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) consume();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            consume();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) consume();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            const int markCol = col_;
            consume();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) consume();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = mark; // not an exponent after all
                col_ = markCol;
            } else {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) consume();
            }
        }
        const std::string lexeme(text_.substr(start, pos_ - start));
        if (lexeme == ".") throw ParseError(cur_.line, cur_.col, "malformed number");
        try {
            cur_.number = std::stod(lexeme);
        } catch (const std::exception&) {
            throw ParseError(cur_.line, cur_.col, "malformed number '" + lexeme + "'");
        }
        cur_.text = lexeme;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& symbols) : lex_(text) {
        for (std::size_t i = 0; i < symbols.size(); ++i) index_[symbols[i]] = static_cast<int>(i);
    }

    ExprPtr parse() {
        ExprPtr e = expr();
        const Token& t = lex_.current();
        if (t.kind != Token::End) throw ParseError(t.line, t.col, "unexpected trailing input");
        return e;
    }

private:
    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            const Token t = lex_.current();
            if (t.kind == Token::Plus || t.kind == Token::Minus) {
                lex_.advance();
                lhs = makeBinary(t.kind == Token::Plus ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs), term(), t);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            const Token t = lex_.current();
            if (t.kind == Token::Star || t.kind == Token::Slash) {
                lex_.advance();
                lhs = makeBinary(t.kind == Token::Star ? BinaryOp::Mul : BinaryOp::Div, std::move(lhs), factor(), t);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        const Token t = lex_.current();
        if (t.kind == Token::Minus) {
            lex_.advance();
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprKind::Unary;
            node->lhs = factor();
            node->line = t.line;
            node->col = t.col;
            return node;
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        const Token t = lex_.current();
        if (t.kind == Token::Caret) {
            lex_.advance();
            return makeBinary(BinaryOp::Pow, std::move(base), factor(), t);
        }
        return base;
    }

    ExprPtr primary() {
        const Token t = lex_.current();
        switch (t.kind) {
            case Token::Number: {
                lex_.advance();
                auto node = std::make_unique<ExprNode>();
                node->kind = ExprKind::Constant;
                node->constant = t.number;
                node->line = t.line;
                node->col = t.col;
                return node;
            }
            case Token::Ident: {
                lex_.advance();
                if (lex_.current().kind == Token::LParen) {
                    if (!isFunctionName(t.text))
                        throw ParseError(t.line, t.col, "unknown function '" + t.text + "'");
                    lex_.advance();
                    auto node = std::make_unique<ExprNode>();
                    node->kind = ExprKind::Call;
                    node->name = t.text;
                    node->lhs = expr();
                    expect(Token::RParen, "expected ')'");
                    node->line = t.line;
                    node->col = t.col;
                    return node;
                }
                auto it = index_.find(t.text);
                if (it == index_.end()) {
                    if (isFunctionName(t.text))
                        throw ParseError(t.line, t.col, "function '" + t.text + "' needs one parenthesized argument");
                    throw ParseError(t.line, t.col, "unknown identifier '" + t.text + "'");
                }
                auto node = std::make_unique<ExprNode>();
                node->kind = ExprKind::Variable;
                node->varIndex = it->second;
                node->name = t.text;
                node->line = t.line;
                node->col = t.col;
                return node;
            }
            case Token::LParen: {
                lex_.advance();
                ExprPtr e = expr();
                expect(Token::RParen, "expected ')'");
                return e;
            }
            default:
                throw ParseError(t.line, t.col, "expected a number, identifier, or '('");
        }
    }

    void expect(Token::Kind kind, const char* message) {
        const Token& t = lex_.current();
        if (t.kind != kind) throw ParseError(t.line, t.col, message);
        lex_.advance();
    }

    ExprPtr makeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, const Token& at) {
        auto node = std::make_unique<ExprNode>();
        node->kind = ExprKind::Binary;
        node->op = op;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        node->line = at.line;
        node->col = at.col;
        return node;
    }

    Lexer lex_;
    std::map<std::string, int> index_;
};

template <TowerScalar T>
T evalNode(const ExprNode& n, std::span<const T> bindings) {
    switch (n.kind) {
        case ExprKind::Constant:
            return T(n.constant);
        case ExprKind::Variable:
            if (n.varIndex < 0 || n.varIndex >= static_cast<int>(bindings.size()))
                throw DomainError("evaluateAst: unbound variable '" + n.name + "'");
            return bindings[static_cast<std::size_t>(n.varIndex)];
        case ExprKind::Unary:
            return -evalNode(*n.lhs, bindings);
        case ExprKind::Call: {
            T a = evalNode(*n.lhs, bindings);
            using std::abs;
            using std::cos;
            using std::exp;
            using std::log;
            using std::sin;
            using std::sqrt;
            using std::tan;
            if (n.name == "sin") return sin(a);
            if (n.name == "cos") return cos(a);
            if (n.name == "tan") return tan(a);
            if (n.name == "exp") return exp(a);
            if (n.name == "log") {
                if (primalValue(a) <= 0.0) throw NumericError("evaluateAst: log of non-positive value");
                return log(a);
            }
            if (n.name == "sqrt") {
                if (primalValue(a) < 0.0) throw NumericError("evaluateAst: sqrt of negative value");
                return sqrt(a);
            }
            if (n.name == "abs") return abs(a);
            throw DomainError("evaluateAst: unknown function '" + n.name + "'");
        }
        case ExprKind::Binary: {
            T a = evalNode(*n.lhs, bindings);
            if (n.op == BinaryOp::Pow) {
                // A constant integer exponent keeps negative bases legal.
                if (n.rhs->kind == ExprKind::Constant && n.rhs->constant == std::floor(n.rhs->constant) &&
                    std::abs(n.rhs->constant) <= 64.0)
                    return powInt(a, static_cast<long long>(n.rhs->constant));
                T b = evalNode(*n.rhs, bindings);
                if (primalValue(a) <= 0.0)
                    throw NumericError("evaluateAst: pow of non-positive base with non-integer exponent");
                if constexpr (std::same_as<T, double>) return std::pow(a, b);
                else return pow(a, b);
            }
            T b = evalNode(*n.rhs, bindings);
            switch (n.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (primalValue(b) == 0.0) throw NumericError("evaluateAst: division by zero");
                    return a / b;
                default: break;
            }
            throw DomainError("evaluateAst: bad operator");
        }
    }
    throw DomainError("evaluateAst: bad node");
}

void printNode(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprKind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.constant);
            out += buf;
            return;
        }
        case ExprKind::Variable:
            out += n.name;
            return;
        case ExprKind::Unary:
            out += "(-";
            printNode(*n.lhs, out);
            out += ")";
            return;
        case ExprKind::Call:
            out += n.name;
            out += "(";
            printNode(*n.lhs, out);
            out += ")";
            return;
        case ExprKind::Binary: {
            const char* op = n.op == BinaryOp::Add   ? " + "
                             : n.op == BinaryOp::Sub ? " - "
                             : n.op == BinaryOp::Mul ? " * "
                             : n.op == BinaryOp::Div ? " / "
                                                     : "^";
            out += "(";
            printNode(*n.lhs, out);
            out += op;
            printNode(*n.rhs, out);
            out += ")";
            return;
        }
    }
}

} // namespace

ExprAst parseExpression(std::string_view text, std::vector<std::string> symbols) {
    bool empty = true;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) empty = false;
    if (empty) throw ParseError(1, 1, "empty expression");
    Parser p(text, symbols);
    return {p.parse(), std::move(symbols)};
}

double evaluateAst(const ExprAst& ast, std::span<const double> bindings) {
    return evalNode<double>(*ast.root, bindings);
}
D1 evaluateAst(const ExprAst& ast, std::span<const D1> bindings) {
    return evalNode<D1>(*ast.root, bindings);
}
D2 evaluateAst(const ExprAst& ast, std::span<const D2> bindings) {
    return evalNode<D2>(*ast.root, bindings);
}
D3 evaluateAst(const ExprAst& ast, std::span<const D3> bindings) {
    return evalNode<D3>(*ast.root, bindings);
}

std::string prettyPrint(const ExprAst& ast) {
    std::string out;
    printNode(*ast.root, out);
    return out;
}

bool structurallyEqual(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Constant: return a.constant == b.constant;
        case ExprKind::Variable: return a.varIndex == b.varIndex && a.name == b.name;
        case ExprKind::Unary: return structurallyEqual(*a.lhs, *b.lhs);
        case ExprKind::Call: return a.name == b.name && structurallyEqual(*a.lhs, *b.lhs);
        case ExprKind::Binary:
            return a.op == b.op && structurallyEqual(*a.lhs, *b.lhs) && structurallyEqual(*a.rhs, *b.rhs);
    }
    return false;
}

SmoothMap exprsToSmoothMap(std::vector<std::string> exprTexts, std::vector<std::string> symbols) {
    auto asts = std::make_shared<std::vector<ExprAst>>();
    for (auto& text : exprTexts) asts->push_back(parseExpression(text, symbols));
    const int nin = static_cast<int>(symbols.size());
    const int nout = static_cast<int>(exprTexts.size());
    return SmoothMap(nin, nout, [asts]<TowerScalar T>(std::span<const T> x) {
        std::vector<T> out;
        out.reserve(asts->size());
        for (const auto& ast : *asts) out.push_back(evaluateAst(ast, x));
        return out;
    });
}

} // namespace covel
