#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "covel/smooth.hpp"

namespace covel {

// Expression AST for the scenario DSL.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?          right-associative
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Numbers are decimal or scientific; functions are sin cos tan exp log sqrt
// abs, one argument each. Unary minus binds below '^', so -x^2 = -(x^2).
// Variable names must come from the declared symbol set; anything else is a
// positioned parse error.
class ExprNode;
using ExprPtr = std::unique_ptr<ExprNode>;

enum class ExprKind { Constant, Variable, Unary, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

class ExprNode {
public:
    ExprKind kind;
    double constant = 0.0;      // Constant
    int varIndex = -1;          // Variable: index into the declared symbols
    std::string name;           // Variable / Call
    BinaryOp op = BinaryOp::Add;
    ExprPtr lhs, rhs;           // Binary; Unary and Call use lhs only
    int line = 1, col = 1;
};

struct ExprAst {
    ExprPtr root;
    std::vector<std::string> symbols;
};

ExprAst parseExpression(std::string_view text, std::vector<std::string> symbols);

// Evaluate over the numeric tower. Bindings follow the declared symbol
// order. Domain errors (log of non-positive, division by zero, ...) throw.
double evaluateAst(const ExprAst& ast, std::span<const double> bindings);
D1 evaluateAst(const ExprAst& ast, std::span<const D1> bindings);
D2 evaluateAst(const ExprAst& ast, std::span<const D2> bindings);
D3 evaluateAst(const ExprAst& ast, std::span<const D3> bindings);

// Fully parenthesized rendering; reparses to a structurally identical tree.
std::string prettyPrint(const ExprAst& ast);

bool structurallyEqual(const ExprNode& a, const ExprNode& b);

// Wrap parsed expressions (one per output component) as a SmoothMap over
// the declared symbols.
SmoothMap exprsToSmoothMap(std::vector<std::string> exprTexts, std::vector<std::string> symbols);

} // namespace covel
