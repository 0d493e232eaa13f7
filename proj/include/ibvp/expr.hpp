#pragma once

// Scalar expression DSL for user-supplied nonlinearities, boundary functions,
// impulse functions and measure densities.
//
// Grammar (see README for the user-facing reference):
//   expr      := term (('+'|'-') term)*
//   term      := unary (('*'|'/') unary)*
//   unary     := '-' unary | power
//   power     := atom ('^' exponent)?          exponent is an integer literal,
//                                              optionally parenthesized/negative
//   atom      := number | var | fn '(' expr {',' expr} ')' | '(' expr ')'
//              | 'piecewise' '(' guard ':' expr {';' guard ':' expr} ';'
//                               'else' ':' expr ')'
//   guard     := expr cmp number               cmp in { <=, <, >=, > }
//   number    := digits ['.' digits]
//
// Numbers are exact rationals. A literal divided by a literal (and a negated
// literal) folds to a single literal at parse time, so "5/6" round-trips as
// one rational. Evaluation is pure; expressions are immutable after parse.

#include "rational.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ibvp {

struct ExprError : std::runtime_error {
    size_t position;  // byte offset into the source text
    ExprError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BinOp { Add, Sub, Mul, Div };
enum class CmpOp { Le, Lt, Ge, Gt };
enum class Fn { Sqrt, Sin, Cos, Abs, Min, Max };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct PiecewiseBranch {
    NodePtr guard_lhs;
    CmpOp cmp;
    Rational bound;
    NodePtr body;
};

struct ExprNode {
    enum class Kind { Literal, Var, Neg, Binary, Pow, Call, Piecewise } kind;

    Rational literal;               // Literal
    std::string var;                // Var
    NodePtr child;                  // Neg, Pow base
    BinOp bin_op{};                 // Binary
    NodePtr lhs, rhs;               // Binary
    long long exponent = 0;         // Pow
    Fn fn{};                        // Call
    std::vector<NodePtr> args;      // Call
    std::vector<PiecewiseBranch> branches;  // Piecewise
    NodePtr otherwise;              // Piecewise default
};

class Expression {
  public:
    Expression() = default;
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    bool empty() const { return root_ == nullptr; }
    const NodePtr& root() const { return root_; }

  private:
    NodePtr root_;
};

// --- environments -----------------------------------------------------------

using Bindings = std::map<std::string, double>;
using RationalBindings = std::map<std::string, Rational>;

// --- parser ------------------------------------------------------------------

namespace detail {

inline const std::set<std::string>& known_functions() {
    static const std::set<std::string> fns = {"sqrt", "sin", "cos", "abs", "min", "max"};
    return fns;
}

class Parser {
  public:
    Parser(const std::string& src, const std::set<std::string>& vars)
        : src_(src), vars_(vars) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) throw ExprError("empty expression", 0);
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) throw ExprError("unexpected trailing input", pos_);
        return e;
    }

  private:
    const std::string& src_;
    const std::set<std::string>& vars_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!consume(c)) throw ExprError(std::string("expected '") + c + "' " + what, pos_);
    }
    bool lookahead_word(const char* w) {
        skip_ws();
        size_t n = std::strlen(w);
        if (src_.compare(pos_, n, w) != 0) return false;
        size_t after = pos_ + n;
        if (after < src_.size() &&
            (std::isalnum(static_cast<unsigned char>(src_[after])) || src_[after] == '_'))
            return false;
        return true;
    }

    static NodePtr make_literal(Rational r) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Literal;
        n->literal = std::move(r);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            NodePtr rhs = parse_term();
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Binary;
            n->bin_op = (c == '+') ? BinOp::Add : BinOp::Sub;
            n->lhs = lhs;
            n->rhs = rhs;
            lhs = n;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            NodePtr rhs = parse_unary();
            // fold literal/literal so "5/6" is a single rational
            if (c == '/' && lhs->kind == ExprNode::Kind::Literal &&
                rhs->kind == ExprNode::Kind::Literal) {
                if (rhs->literal.numerator() == 0)
                    throw ExprError("literal division by zero", pos_);
                lhs = make_literal(lhs->literal / rhs->literal);
                continue;
            }
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Binary;
            n->bin_op = (c == '*') ? BinOp::Mul : BinOp::Div;
            n->lhs = lhs;
            n->rhs = rhs;
            lhs = n;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) {
            NodePtr inner = parse_unary();
            if (inner->kind == ExprNode::Kind::Literal) return make_literal(-inner->literal);
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Neg;
            n->child = inner;
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!consume('^')) return base;
        size_t at = pos_;
        long long e = parse_integer_exponent();
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Pow;
        n->child = base;
        n->exponent = e;
        if (base->kind == ExprNode::Kind::Literal)
            return make_literal(rational_pow(base->literal, e));
        (void)at;
        return n;
    }

    long long parse_integer_exponent() {
        bool parens = consume('(');
        bool neg = consume('-');
        size_t at = pos_;
        skip_ws();
        Rational r = parse_number_token();
        if (r.denominator() != 1) throw ExprError("non-integer exponent", at);
        if (parens) expect(')', "after exponent");
        long long v = r.numerator().convert_to<long long>();
        return neg ? -v : v;
    }

    Rational parse_number_token() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) throw ExprError("expected a number", start);
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            size_t fs = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ == fs) throw ExprError("digits expected after decimal point", fs);
        }
        return parse_rational(src_.substr(start, pos_ - start));
    }

    std::string parse_identifier() {
        skip_ws();
        size_t start = pos_;
        if (pos_ >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
                                     src_[pos_] == '_'))
            throw ExprError("expected identifier", pos_);
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        return src_.substr(start, pos_ - start);
    }

    NodePtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return make_literal(parse_number_token());
        if (lookahead_word("piecewise")) return parse_piecewise();

        size_t at = pos_;
        std::string id = parse_identifier();
        if (peek() == '(') {
            auto it = known_functions().find(id);
            if (it == known_functions().end())
                throw ExprError("unknown function '" + id + "'", at);
            ++pos_;
            std::vector<NodePtr> args;
            args.push_back(parse_expr());
            while (consume(',')) args.push_back(parse_expr());
            expect(')', "to close argument list");
            Fn fn;
            size_t want_min = 1, want_max = 1;
            if (id == "sqrt") fn = Fn::Sqrt;
            else if (id == "sin") fn = Fn::Sin;
            else if (id == "cos") fn = Fn::Cos;
            else if (id == "abs") fn = Fn::Abs;
            else { fn = (id == "min") ? Fn::Min : Fn::Max; want_min = 2; want_max = 64; }
            if (args.size() < want_min || args.size() > want_max)
                throw ExprError("wrong argument count for '" + id + "'", at);
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Call;
            n->fn = fn;
            n->args = std::move(args);
            return n;
        }
        if (!vars_.count(id)) throw ExprError("unknown identifier '" + id + "'", at);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Var;
        n->var = id;
        return n;
    }

    NodePtr parse_piecewise() {
        size_t at = pos_;
        (void)parse_identifier();  // the 'piecewise' word itself
        expect('(', "after piecewise");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Piecewise;
        for (;;) {
            if (lookahead_word("else")) {
                (void)parse_identifier();
                expect(':', "after else");
                n->otherwise = parse_expr();
                break;
            }
            PiecewiseBranch br;
            br.guard_lhs = parse_expr();
            skip_ws();
            if (consume('<')) br.cmp = consume('=') ? CmpOp::Le : CmpOp::Lt;
            else if (consume('>')) br.cmp = consume('=') ? CmpOp::Ge : CmpOp::Gt;
            else throw ExprError("expected comparison in piecewise guard", pos_);
            skip_ws();
            bool neg = consume('-');
            br.bound = parse_number_token();
            if (neg) br.bound = -br.bound;
            expect(':', "after piecewise guard");
            br.body = parse_expr();
            n->branches.push_back(std::move(br));
            expect(';', "between piecewise branches");
        }
        expect(')', "to close piecewise");
        if (n->branches.empty()) throw ExprError("piecewise needs at least one guard", at);
        return n;
    }
};

}  // namespace detail

/// Parses `source` allowing exactly the variables in `allowed_vars`.
inline Expression parse(const std::string& source,
                        const std::set<std::string>& allowed_vars = {"t", "u", "v", "w", "s"}) {
    detail::Parser p(source, allowed_vars);
    return Expression(p.parse());
}

// --- canonical printer -------------------------------------------------------

namespace detail {

inline int precedence(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Binary:
            return (n.bin_op == BinOp::Add || n.bin_op == BinOp::Sub) ? 1 : 2;
        case ExprNode::Kind::Neg: return 3;
        case ExprNode::Kind::Literal: return n.literal < Rational(0) ? 3 : 5;
        case ExprNode::Kind::Pow: return 4;
        default: return 5;
    }
}

inline void print_node(const ExprNode& n, std::string& out);

inline void print_child(const ExprNode& child, int parent_prec, bool is_right,
                        std::string& out) {
    int cp = precedence(child);
    bool parens = cp < parent_prec || (cp == parent_prec && is_right);
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

inline void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprNode::Kind::Literal: out += to_string(n.literal); break;
        case ExprNode::Kind::Var: out += n.var; break;
        case ExprNode::Kind::Neg:
            out += '-';
            print_child(*n.child, 3, true, out);
            break;
        case ExprNode::Kind::Binary: {
            int prec = precedence(n);
            const char* op = n.bin_op == BinOp::Add ? " + "
                           : n.bin_op == BinOp::Sub ? " - "
                           : n.bin_op == BinOp::Mul ? "*" : "/";
            print_child(*n.lhs, prec, false, out);
            out += op;
            print_child(*n.rhs, prec, true, out);
            break;
        }
        case ExprNode::Kind::Pow:
            print_child(*n.child, 5, false, out);
            out += '^';
            if (n.exponent < 0) {
                out += '(' + std::to_string(n.exponent) + ')';
            } else {
                out += std::to_string(n.exponent);
            }
            break;
        case ExprNode::Kind::Call: {
            static const char* names[] = {"sqrt", "sin", "cos", "abs", "min", "max"};
            out += names[static_cast<int>(n.fn)];
            out += '(';
            for (size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ", ";
                print_node(*n.args[i], out);
            }
            out += ')';
            break;
        }
        case ExprNode::Kind::Piecewise: {
            out += "piecewise(";
            for (const auto& br : n.branches) {
                print_node(*br.guard_lhs, out);
                out += br.cmp == CmpOp::Le ? " <= " : br.cmp == CmpOp::Lt ? " < "
                     : br.cmp == CmpOp::Ge ? " >= " : " > ";
                out += to_string(br.bound);
                out += ": ";
                print_node(*br.body, out);
                out += "; ";
            }
            out += "else: ";
            print_node(*n.otherwise, out);
            out += ')';
            break;
        }
    }
}

}  // namespace detail

inline std::string print(const Expression& e) {
    if (e.empty()) return "";
    std::string out;
    detail::print_node(*e.root(), out);
    return out;
}

// --- structural equality -----------------------------------------------------

inline bool structurally_equal(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprNode::Kind::Literal: return a->literal == b->literal;
        case ExprNode::Kind::Var: return a->var == b->var;
        case ExprNode::Kind::Neg: return structurally_equal(a->child, b->child);
        case ExprNode::Kind::Binary:
            return a->bin_op == b->bin_op && structurally_equal(a->lhs, b->lhs) &&
                   structurally_equal(a->rhs, b->rhs);
        case ExprNode::Kind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->child, b->child);
        case ExprNode::Kind::Call: {
            if (a->fn != b->fn || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!structurally_equal(a->args[i], b->args[i])) return false;
            return true;
        }
        case ExprNode::Kind::Piecewise: {
            if (a->branches.size() != b->branches.size()) return false;
            for (size_t i = 0; i < a->branches.size(); ++i) {
                const auto& x = a->branches[i];
                const auto& y = b->branches[i];
                if (x.cmp != y.cmp || x.bound != y.bound ||
                    !structurally_equal(x.guard_lhs, y.guard_lhs) ||
                    !structurally_equal(x.body, y.body))
                    return false;
            }
            return structurally_equal(a->otherwise, b->otherwise);
        }
    }
    return false;
}

inline bool structurally_equal(const Expression& a, const Expression& b) {
    return structurally_equal(a.root(), b.root());
}

// --- evaluation --------------------------------------------------------------

namespace detail {

inline double eval_node(const ExprNode& n, const Bindings& env) {
    switch (n.kind) {
        case ExprNode::Kind::Literal: return to_double(n.literal);
        case ExprNode::Kind::Var: {
            auto it = env.find(n.var);
            if (it == env.end()) throw EvalError("unbound variable '" + n.var + "'");
            return it->second;
        }
        case ExprNode::Kind::Neg: return -eval_node(*n.child, env);
        case ExprNode::Kind::Binary: {
            double a = eval_node(*n.lhs, env);
            double b = eval_node(*n.rhs, env);
            switch (n.bin_op) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
            }
            return 0;
        }
        case ExprNode::Kind::Pow: {
            double base = eval_node(*n.child, env);
            if (base == 0.0 && n.exponent < 0) throw EvalError("zero raised to negative power");
            return std::pow(base, static_cast<double>(n.exponent));
        }
        case ExprNode::Kind::Call: {
            switch (n.fn) {
                case Fn::Sqrt: {
                    double a = eval_node(*n.args[0], env);
                    if (a < 0) throw EvalError("sqrt of negative value");
                    return std::sqrt(a);
                }
                case Fn::Sin: return std::sin(eval_node(*n.args[0], env));
                case Fn::Cos: return std::cos(eval_node(*n.args[0], env));
                case Fn::Abs: return std::fabs(eval_node(*n.args[0], env));
                case Fn::Min: {
                    double m = eval_node(*n.args[0], env);
                    for (size_t i = 1; i < n.args.size(); ++i)
                        m = std::min(m, eval_node(*n.args[i], env));
                    return m;
                }
                case Fn::Max: {
                    double m = eval_node(*n.args[0], env);
                    for (size_t i = 1; i < n.args.size(); ++i)
                        m = std::max(m, eval_node(*n.args[i], env));
                    return m;
                }
            }
            return 0;
        }
        case ExprNode::Kind::Piecewise: {
            for (const auto& br : n.branches) {
                double lhs = eval_node(*br.guard_lhs, env);
                double bound = to_double(br.bound);
                bool hit = br.cmp == CmpOp::Le ? lhs <= bound
                         : br.cmp == CmpOp::Lt ? lhs < bound
                         : br.cmp == CmpOp::Ge ? lhs >= bound : lhs > bound;
                if (hit) return eval_node(*br.body, env);
            }
            return eval_node(*n.otherwise, env);
        }
    }
    return 0;
}

// Exact evaluation. Returns nullopt as soon as a value leaves the rational
// domain (sin/cos always; sqrt of a non-perfect-square). Domain errors throw.
inline std::optional<Rational> eval_exact_node(const ExprNode& n, const RationalBindings& env) {
    using R = std::optional<Rational>;
    switch (n.kind) {
        case ExprNode::Kind::Literal: return n.literal;
        case ExprNode::Kind::Var: {
            auto it = env.find(n.var);
            if (it == env.end()) throw EvalError("unbound variable '" + n.var + "'");
            return it->second;
        }
        case ExprNode::Kind::Neg: {
            R a = eval_exact_node(*n.child, env);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprNode::Kind::Binary: {
            R a = eval_exact_node(*n.lhs, env);
            if (!a) return std::nullopt;
            R b = eval_exact_node(*n.rhs, env);
            if (!b) return std::nullopt;
            switch (n.bin_op) {
                case BinOp::Add: return *a + *b;
                case BinOp::Sub: return *a - *b;
                case BinOp::Mul: return *a * *b;
                case BinOp::Div:
                    if (b->numerator() == 0) throw EvalError("division by zero");
                    return *a / *b;
            }
            return std::nullopt;
        }
        case ExprNode::Kind::Pow: {
            R base = eval_exact_node(*n.child, env);
            if (!base) return std::nullopt;
            if (base->numerator() == 0 && n.exponent < 0)
                throw EvalError("zero raised to negative power");
            return rational_pow(*base, n.exponent);
        }
        case ExprNode::Kind::Call: {
            switch (n.fn) {
                case Fn::Sqrt: {
                    R a = eval_exact_node(*n.args[0], env);
                    if (!a) return std::nullopt;
                    return rational_sqrt_exact(*a);  // throws on negative
                }
                case Fn::Sin:
                case Fn::Cos:
                    // still evaluate the argument so domain errors surface
                    if (!eval_exact_node(*n.args[0], env)) return std::nullopt;
                    return std::nullopt;
                case Fn::Abs: {
                    R a = eval_exact_node(*n.args[0], env);
                    if (!a) return std::nullopt;
                    return rational_abs(*a);
                }
                case Fn::Min:
                case Fn::Max: {
                    R m = eval_exact_node(*n.args[0], env);
                    if (!m) return std::nullopt;
                    for (size_t i = 1; i < n.args.size(); ++i) {
                        R a = eval_exact_node(*n.args[i], env);
                        if (!a) return std::nullopt;
                        m = (n.fn == Fn::Min) ? rational_min(*m, *a) : rational_max(*m, *a);
                    }
                    return m;
                }
            }
            return std::nullopt;
        }
        case ExprNode::Kind::Piecewise: {
            for (const auto& br : n.branches) {
                R lhs = eval_exact_node(*br.guard_lhs, env);
                if (!lhs) return std::nullopt;
                bool hit = br.cmp == CmpOp::Le ? *lhs <= br.bound
                         : br.cmp == CmpOp::Lt ? *lhs < br.bound
                         : br.cmp == CmpOp::Ge ? *lhs >= br.bound : *lhs > br.bound;
                if (hit) return eval_exact_node(*br.body, env);
            }
            return eval_exact_node(*n.otherwise, env);
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline double eval(const Expression& e, const Bindings& env) {
    if (e.empty()) throw EvalError("evaluating empty expression");
    return detail::eval_node(*e.root(), env);
}

inline std::optional<Rational> eval_exact(const Expression& e, const RationalBindings& env) {
    if (e.empty()) throw EvalError("evaluating empty expression");
    return detail::eval_exact_node(*e.root(), env);
}

/// Evaluates, keeping exactness when every binding is rational-valued and the
/// expression stays in the rational domain.
inline Scalar eval_scalar(const Expression& e, const RationalBindings& env) {
    auto exact = eval_exact(e, env);
    if (exact) return Scalar(*exact);
    Bindings denv;
    for (const auto& [k, v] : env) denv[k] = to_double(v);
    return Scalar(eval(e, denv));
}

// --- continuity diagnostic ---------------------------------------------------

struct ContinuityGap {
    Rational boundary;
    double gap;  // |value of branch before the boundary - value after|
};

namespace detail {

inline void collect_gaps(const ExprNode& n, const std::string& var,
                         std::vector<ContinuityGap>& out) {
    switch (n.kind) {
        case ExprNode::Kind::Piecewise: {
            // Gaps are measurable only for simple guards on the variable itself.
            bool simple = true;
            for (const auto& br : n.branches)
                if (br.guard_lhs->kind != ExprNode::Kind::Var || br.guard_lhs->var != var)
                    simple = false;
            if (simple) {
                for (size_t i = 0; i < n.branches.size(); ++i) {
                    const auto& br = n.branches[i];
                    const ExprNode& next =
                        (i + 1 < n.branches.size()) ? *n.branches[i + 1].body : *n.otherwise;
                    Bindings env{{var, to_double(br.bound)}};
                    double a = eval_node(*br.body, env);
                    double b = eval_node(next, env);
                    out.push_back({br.bound, std::fabs(a - b)});
                }
            }
            for (const auto& br : n.branches) {
                collect_gaps(*br.guard_lhs, var, out);
                collect_gaps(*br.body, var, out);
            }
            collect_gaps(*n.otherwise, var, out);
            break;
        }
        case ExprNode::Kind::Neg: collect_gaps(*n.child, var, out); break;
        case ExprNode::Kind::Pow: collect_gaps(*n.child, var, out); break;
        case ExprNode::Kind::Binary:
            collect_gaps(*n.lhs, var, out);
            collect_gaps(*n.rhs, var, out);
            break;
        case ExprNode::Kind::Call:
            for (const auto& a : n.args) collect_gaps(*a, var, out);
            break;
        default: break;
    }
}

}  // namespace detail

/// Reports |left-limit - right-limit| at every simple piecewise boundary.
/// Used to validate that user-supplied H, L, I, N are continuous.
inline std::vector<ContinuityGap> continuity_gaps(const Expression& e, const std::string& var) {
    std::vector<ContinuityGap> out;
    if (!e.empty()) detail::collect_gaps(*e.root(), var, out);
    return out;
}

/// True when the expression is the constant 1 (used to pick exact paths).
inline bool is_literal_one(const Expression& e) {
    return !e.empty() && e.root()->kind == ExprNode::Kind::Literal &&
           e.root()->literal == Rational(1);
}

inline bool is_literal_zero(const Expression& e) {
    return !e.empty() && e.root()->kind == ExprNode::Kind::Literal &&
           e.root()->literal == Rational(0);
}

}  // namespace ibvp
