#include "immcheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace immcheck {

// ---------------------------------------------------------------------------
// AST construction
// ---------------------------------------------------------------------------

ExprAst ExprAst::make_constant(double v) {
    ExprAst n;
    n.kind = Kind::Constant;
    n.value = v;
    return n;
}

ExprAst ExprAst::make_variable(int index) {
    ExprAst n;
    n.kind = Kind::Variable;
    n.var_index = index;
    return n;
}

ExprAst ExprAst::make_parameter(std::string name) {
    ExprAst n;
    n.kind = Kind::Parameter;
    n.param_name = std::move(name);
    return n;
}

ExprAst ExprAst::make_unary(UnaryOp op, ExprAst operand) {
    ExprAst n;
    n.kind = Kind::Unary;
    n.unary_op = op;
    n.lhs = std::make_unique<ExprAst>(std::move(operand));
    return n;
}

ExprAst ExprAst::make_binary(BinaryOp op, ExprAst left, ExprAst right) {
    ExprAst n;
    n.kind = Kind::Binary;
    n.binary_op = op;
    n.lhs = std::make_unique<ExprAst>(std::move(left));
    n.rhs = std::make_unique<ExprAst>(std::move(right));
    return n;
}

ExprAst ExprAst::clone() const {
    ExprAst n;
    n.kind = kind;
    n.value = value;
    n.var_index = var_index;
    n.param_name = param_name;
    n.unary_op = unary_op;
    n.binary_op = binary_op;
    if (lhs) n.lhs = std::make_unique<ExprAst>(lhs->clone());
    if (rhs) n.rhs = std::make_unique<ExprAst>(rhs->clone());
    return n;
}

bool ExprAst::is_variable_free() const {
    if (kind == Kind::Variable) return false;
    if (lhs && !lhs->is_variable_free()) return false;
    if (rhs && !rhs->is_variable_free()) return false;
    return true;
}

ImmersionSpec ImmersionSpec::clone() const {
    ImmersionSpec s;
    s.m = m;
    s.N = N;
    s.params = params;
    s.domain_box = domain_box;
    s.components.reserve(components.size());
    for (const auto& c : components) s.components.push_back(c.clone());
    return s;
}

void ImmersionSpec::set_param(const std::string& name, double value) {
    auto it = params.find(name);
    if (it == params.end())
        throw Error("unknown parameter '" + name + "'");
    it->second = value;
}

bool ImmersionSpec::contains(const Eigen::VectorXd& point) const {
    if (static_cast<int>(point.size()) != m) return false;
    for (int i = 0; i < m; ++i)
        if (point(i) < domain_box[i].first || point(i) > domain_box[i].second) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Number,
    LParen, RParen, LBracket, RBracket,
    Comma, Semi, Assign, Arrow,
    Plus, Minus, Star, Slash, Caret,
    End
};

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    int line = 1;
    int col = 1;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Assign: return "'='";
        case Tok::Arrow: return "'->'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text, double num = 0.0) {
        out.push_back(Token{k, std::move(text), num, line, col});
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') { // comment to end of line
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        const int tok_line = line, tok_col = col;
        auto single = [&](Tok k) {
            out.push_back(Token{k, std::string(1, c), 0.0, tok_line, tok_col});
            ++i;
            ++col;
        };
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    ++k;
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            std::string text = src.substr(i, j - i);
            out.push_back(Token{Tok::Number, text, std::strtod(text.c_str(), nullptr),
                                tok_line, tok_col});
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back(Token{Tok::Ident, src.substr(i, j - i), 0.0, tok_line, tok_col});
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        switch (c) {
            case '(': single(Tok::LParen); continue;
            case ')': single(Tok::RParen); continue;
            case '[': single(Tok::LBracket); continue;
            case ']': single(Tok::RBracket); continue;
            case ',': single(Tok::Comma); continue;
            case ';': single(Tok::Semi); continue;
            case '=': single(Tok::Assign); continue;
            case '+': single(Tok::Plus); continue;
            case '*': single(Tok::Star); continue;
            case '/': single(Tok::Slash); continue;
            case '^': single(Tok::Caret); continue;
            case '-':
                if (i + 1 < src.size() && src[i + 1] == '>') {
                    out.push_back(Token{Tok::Arrow, "->", 0.0, tok_line, tok_col});
                    i += 2;
                    col += 2;
                } else {
                    single(Tok::Minus);
                }
                continue;
            default:
                throw ParseError(tok_line, tok_col,
                                 std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::End, "", 0.0, line, col});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

constexpr int kMaxExprDepth = 256;

const std::set<std::string> kFunctions = {"sin", "cos", "exp", "sqrt"};
const std::set<std::string> kKeywords = {"param", "dim", "F", "box", "in", "pi", "e",
                                         "sin", "cos", "exp", "sqrt"};

// Coordinate names are x1, x2, ... with no leading zero.
int coordinate_index(const std::string& name) {
    if (name.size() < 2 || name.size() > 4 || name[0] != 'x' || name[1] == '0') return -1;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    return std::atoi(name.c_str() + 1) - 1;
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    ImmersionSpec run() {
        bool saw_dim = false, saw_f = false, saw_box = false;
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind != Tok::Ident)
                throw err("unexpected " + describe(t), {"'param'", "'dim'", "'F'", "'box'"});
            if (t.text == "param") {
                if (saw_f) throw err("param declarations must precede F");
                parse_param();
            } else if (t.text == "dim") {
                if (saw_dim) throw err("duplicate dim declaration");
                parse_dim();
                saw_dim = true;
            } else if (t.text == "F") {
                if (!saw_dim) throw err("dim must be declared before F");
                if (saw_f) throw err("duplicate F definition");
                parse_f();
                saw_f = true;
            } else if (t.text == "box") {
                if (!saw_dim) throw err("dim must be declared before box");
                if (saw_box) throw err("duplicate box declaration");
                parse_box();
                saw_box = true;
            } else {
                throw err("unexpected " + describe(t), {"'param'", "'dim'", "'F'", "'box'"});
            }
        }
        const Token& end = peek();
        if (!saw_dim) throw ParseError(end.line, end.col, "missing dim declaration");
        if (!saw_f) throw ParseError(end.line, end.col, "missing F definition");
        if (!saw_box) throw ParseError(end.line, end.col, "missing box declaration");
        return std::move(spec_);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ImmersionSpec spec_;
    int depth_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return std::string(tok_name(t.kind)) + " '" + t.text + "'";
    }

    ParseError err(const std::string& what, std::vector<std::string> expected = {}) const {
        return ParseError(peek().line, peek().col, what, std::move(expected));
    }

    const Token& expect(Tok kind) {
        if (peek().kind != kind)
            throw err("unexpected " + describe(peek()), {tok_name(kind)});
        return advance();
    }

    double parse_signed_number() {
        double sign = 1.0;
        while (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
            if (advance().kind == Tok::Minus) sign = -sign;
        }
        if (peek().kind != Tok::Number)
            throw err("unexpected " + describe(peek()), {"number"});
        return sign * advance().number;
    }

    void parse_param() {
        advance(); // param
        const Token& name = expect(Tok::Ident);
        if (kKeywords.count(name.text) || coordinate_index(name.text) >= 0)
            throw ParseError(name.line, name.col,
                             "parameter name '" + name.text + "' is reserved");
        expect(Tok::Assign);
        const double v = parse_signed_number();
        expect(Tok::Semi);
        spec_.params[name.text] = v;
    }

    int parse_positive_int(const char* what) {
        if (peek().kind != Tok::Number)
            throw err("unexpected " + describe(peek()), {"number"});
        const Token& t = advance();
        const double v = t.number;
        if (v != std::floor(v) || v < 1.0 || v > 64.0)
            throw ParseError(t.line, t.col, std::string(what) + " must be a positive integer");
        return static_cast<int>(v);
    }

    void parse_dim() {
        advance(); // dim
        const Token& mt = peek();
        spec_.m = parse_positive_int("domain dimension");
        expect(Tok::Arrow);
        spec_.N = parse_positive_int("ambient dimension");
        if (spec_.N < spec_.m)
            throw ParseError(mt.line, mt.col, "ambient dimension must be >= domain dimension");
        expect(Tok::Semi);
    }

    void parse_f() {
        const Token& f = advance(); // F
        expect(Tok::Assign);
        expect(Tok::LParen);
        std::vector<ExprAst> comps;
        comps.push_back(parse_expr());
        while (peek().kind == Tok::Comma) {
            advance();
            comps.push_back(parse_expr());
        }
        expect(Tok::RParen);
        expect(Tok::Semi);
        if (static_cast<int>(comps.size()) != spec_.N)
            throw ParseError(f.line, f.col,
                             "dimension mismatch: declared N = " + std::to_string(spec_.N) +
                                 " but F has " + std::to_string(comps.size()) + " components");
        spec_.components = std::move(comps);
    }

    void parse_box() {
        advance(); // box
        std::vector<bool> seen(spec_.m, false);
        spec_.domain_box.assign(spec_.m, {0.0, 0.0});
        while (true) {
            const Token& name = expect(Tok::Ident);
            const int idx = coordinate_index(name.text);
            if (idx < 0 || idx >= spec_.m)
                throw ParseError(name.line, name.col,
                                 "'" + name.text + "' is not a coordinate of this chart");
            if (seen[idx])
                throw ParseError(name.line, name.col, "duplicate box range for " + name.text);
            const Token& kw = expect(Tok::Ident);
            if (kw.text != "in")
                throw ParseError(kw.line, kw.col, "unexpected '" + kw.text + "'", {"'in'"});
            expect(Tok::LBracket);
            const double lo = parse_signed_number();
            expect(Tok::Comma);
            const double hi = parse_signed_number();
            const Token& close = expect(Tok::RBracket);
            if (!(lo < hi))
                throw ParseError(close.line, close.col, "box range requires lo < hi");
            seen[idx] = true;
            spec_.domain_box[idx] = {lo, hi};
            if (peek().kind == Tok::Comma) {
                advance();
                continue;
            }
            break;
        }
        expect(Tok::Semi);
        for (int i = 0; i < spec_.m; ++i)
            if (!seen[i])
                throw err("box is missing a range for x" + std::to_string(i + 1));
    }

    // Folds nodes whose children are literal constants. Parameters are left
    // symbolic so they stay overridable after parsing.
    ExprAst fold(ExprAst node, const Token& at) {
        if (node.kind == ExprAst::Kind::Unary && node.lhs->kind == ExprAst::Kind::Constant) {
            const double a = node.lhs->value;
            double v = 0.0;
            switch (node.unary_op) {
                case UnaryOp::Neg: v = -a; break;
                case UnaryOp::Sin: v = std::sin(a); break;
                case UnaryOp::Cos: v = std::cos(a); break;
                case UnaryOp::Exp: v = std::exp(a); break;
                case UnaryOp::Sqrt:
                    if (!(a > 0.0))
                        throw ParseError(at.line, at.col, "sqrt of non-positive constant");
                    v = std::sqrt(a);
                    break;
            }
            if (!std::isfinite(v))
                throw ParseError(at.line, at.col, "constant expression is not finite");
            return ExprAst::make_constant(v);
        }
        if (node.kind == ExprAst::Kind::Binary &&
            node.lhs->kind == ExprAst::Kind::Constant &&
            node.rhs->kind == ExprAst::Kind::Constant) {
            const double a = node.lhs->value, b = node.rhs->value;
            double v = 0.0;
            switch (node.binary_op) {
                case BinaryOp::Add: v = a + b; break;
                case BinaryOp::Sub: v = a - b; break;
                case BinaryOp::Mul: v = a * b; break;
                case BinaryOp::Div:
                    if (b == 0.0)
                        throw ParseError(at.line, at.col, "division by constant zero");
                    v = a / b;
                    break;
                case BinaryOp::Pow: v = std::pow(a, b); break;
            }
            if (!std::isfinite(v))
                throw ParseError(at.line, at.col, "constant expression is not finite");
            return ExprAst::make_constant(v);
        }
        return node;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxExprDepth)
                throw p_.err("expression too deeply nested");
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    ExprAst parse_expr() {
        DepthGuard guard(*this);
        ExprAst left = parse_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token op = advance();
            ExprAst right = parse_term();
            left = fold(ExprAst::make_binary(
                            op.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub,
                            std::move(left), std::move(right)),
                        op);
        }
        return left;
    }

    ExprAst parse_term() {
        DepthGuard guard(*this);
        ExprAst left = parse_unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token op = advance();
            ExprAst right = parse_unary();
            left = fold(ExprAst::make_binary(
                            op.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div,
                            std::move(left), std::move(right)),
                        op);
        }
        return left;
    }

    ExprAst parse_unary() {
        DepthGuard guard(*this);
        if (peek().kind == Tok::Minus) {
            const Token op = advance();
            return fold(ExprAst::make_unary(UnaryOp::Neg, parse_unary()), op);
        }
        return parse_power();
    }

    ExprAst parse_power() {
        DepthGuard guard(*this);
        ExprAst base = parse_atom();
        if (peek().kind == Tok::Caret) {
            const Token op = advance();
            ExprAst exponent = parse_unary(); // right-associative, allows -2
            if (!exponent.is_variable_free())
                throw ParseError(op.line, op.col,
                                 "'^' exponent must not depend on the coordinates");
            return fold(ExprAst::make_binary(BinaryOp::Pow, std::move(base),
                                             std::move(exponent)),
                        op);
        }
        return base;
    }

    ExprAst parse_atom() {
        DepthGuard guard(*this);
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            advance();
            return ExprAst::make_constant(t.number);
        }
        if (t.kind == Tok::LParen) {
            advance();
            ExprAst inner = parse_expr();
            expect(Tok::RParen);
            return inner;
        }
        if (t.kind == Tok::Ident) {
            const Token name = advance();
            if (kFunctions.count(name.text)) {
                expect(Tok::LParen);
                ExprAst arg = parse_expr();
                expect(Tok::RParen);
                UnaryOp op = UnaryOp::Sin;
                if (name.text == "cos") op = UnaryOp::Cos;
                else if (name.text == "exp") op = UnaryOp::Exp;
                else if (name.text == "sqrt") op = UnaryOp::Sqrt;
                return fold(ExprAst::make_unary(op, std::move(arg)), name);
            }
            if (name.text == "pi") return ExprAst::make_constant(M_PI);
            if (name.text == "e") return ExprAst::make_constant(M_E);
            const int idx = coordinate_index(name.text);
            if (idx >= 0) {
                if (idx >= spec_.m)
                    throw ParseError(name.line, name.col,
                                     "'" + name.text + "' exceeds the declared dimension m = " +
                                         std::to_string(spec_.m));
                return ExprAst::make_variable(idx);
            }
            if (spec_.params.count(name.text))
                return ExprAst::make_parameter(name.text);
            throw ParseError(name.line, name.col, "undeclared identifier '" + name.text + "'");
        }
        throw err("unexpected " + describe(t),
                  {"number", "identifier", "'('", "'-'"});
    }
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_ast(const ExprAst& n, std::string& out) {
    switch (n.kind) {
        case ExprAst::Kind::Constant:
            if (n.value < 0.0) {
                out += "(" + format_number(n.value) + ")";
            } else {
                out += format_number(n.value);
            }
            return;
        case ExprAst::Kind::Variable:
            out += "x" + std::to_string(n.var_index + 1);
            return;
        case ExprAst::Kind::Parameter:
            out += n.param_name;
            return;
        case ExprAst::Kind::Unary:
            switch (n.unary_op) {
                case UnaryOp::Neg:
                    out += "(-";
                    print_ast(*n.lhs, out);
                    out += ")";
                    return;
                case UnaryOp::Sin: out += "sin("; break;
                case UnaryOp::Cos: out += "cos("; break;
                case UnaryOp::Exp: out += "exp("; break;
                case UnaryOp::Sqrt: out += "sqrt("; break;
            }
            print_ast(*n.lhs, out);
            out += ")";
            return;
        case ExprAst::Kind::Binary: {
            const char* op = "+";
            switch (n.binary_op) {
                case BinaryOp::Add: op = "+"; break;
                case BinaryOp::Sub: op = "-"; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            out += "(";
            print_ast(*n.lhs, out);
            out += op;
            print_ast(*n.rhs, out);
            out += ")";
            return;
        }
    }
}

} // namespace

ImmersionSpec parse(const std::string& source) {
    return Parser(source).run();
}

std::string pretty_print(const ExprAst& ast) {
    std::string out;
    print_ast(ast, out);
    return out;
}

std::string pretty_print(const ImmersionSpec& spec) {
    std::string out;
    for (const auto& [name, value] : spec.params)
        out += "param " + name + "=" + format_number(value) + ";\n";
    out += "dim " + std::to_string(spec.m) + " -> " + std::to_string(spec.N) + ";\n";
    out += "F = (";
    for (int a = 0; a < spec.N; ++a) {
        if (a) out += ", ";
        print_ast(spec.components[a], out);
    }
    out += ");\n";
    out += "box ";
    for (int i = 0; i < spec.m; ++i) {
        if (i) out += ", ";
        out += "x" + std::to_string(i + 1) + " in [" + format_number(spec.domain_box[i].first) +
               "," + format_number(spec.domain_box[i].second) + "]";
    }
    out += ";\n";
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Jet2 eval_node(const ExprAst& n, const std::map<std::string, double>& params,
               const std::vector<Jet2>& seeds, int m) {
    switch (n.kind) {
        case ExprAst::Kind::Constant:
            return Jet2::constant(n.value, m);
        case ExprAst::Kind::Variable:
            return seeds[static_cast<std::size_t>(n.var_index)];
        case ExprAst::Kind::Parameter: {
            auto it = params.find(n.param_name);
            if (it == params.end())
                throw Error("unbound parameter '" + n.param_name + "'");
            return Jet2::constant(it->second, m);
        }
        case ExprAst::Kind::Unary: {
            Jet2 a = eval_node(*n.lhs, params, seeds, m);
            switch (n.unary_op) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return sin(a);
                case UnaryOp::Cos: return cos(a);
                case UnaryOp::Exp: return exp(a);
                case UnaryOp::Sqrt: return sqrt(a);
            }
            break;
        }
        case ExprAst::Kind::Binary: {
            if (n.binary_op == BinaryOp::Pow) {
                Jet2 base = eval_node(*n.lhs, params, seeds, m);
                return pow_const(base, eval_constant(*n.rhs, params));
            }
            Jet2 a = eval_node(*n.lhs, params, seeds, m);
            Jet2 b = eval_node(*n.rhs, params, seeds, m);
            switch (n.binary_op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div: return a / b;
                case BinaryOp::Pow: break; // handled above
            }
            break;
        }
    }
    throw Error("malformed expression node");
}

std::string point_to_string(const Eigen::VectorXd& p) {
    std::string s = "(";
    for (int i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += format_number(p(i));
    }
    return s + ")";
}

std::vector<Jet2> make_seeds(const Eigen::VectorXd& point) {
    std::vector<Jet2> seeds;
    seeds.reserve(static_cast<std::size_t>(point.size()));
    for (int i = 0; i < point.size(); ++i) seeds.push_back(Jet2::seed(point, i));
    return seeds;
}

} // namespace

double eval_constant(const ExprAst& ast, const std::map<std::string, double>& params) {
    switch (ast.kind) {
        case ExprAst::Kind::Constant:
            return ast.value;
        case ExprAst::Kind::Variable:
            throw Error("expression is not constant");
        case ExprAst::Kind::Parameter: {
            auto it = params.find(ast.param_name);
            if (it == params.end())
                throw Error("unbound parameter '" + ast.param_name + "'");
            return it->second;
        }
        case ExprAst::Kind::Unary: {
            const double a = eval_constant(*ast.lhs, params);
            switch (ast.unary_op) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return std::sin(a);
                case UnaryOp::Cos: return std::cos(a);
                case UnaryOp::Exp: return std::exp(a);
                case UnaryOp::Sqrt:
                    if (!(a > 0.0)) throw DomainError("sqrt of non-positive value");
                    return std::sqrt(a);
            }
            break;
        }
        case ExprAst::Kind::Binary: {
            const double a = eval_constant(*ast.lhs, params);
            const double b = eval_constant(*ast.rhs, params);
            switch (ast.binary_op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return a / b;
                case BinaryOp::Pow: return std::pow(a, b);
            }
            break;
        }
    }
    throw Error("malformed expression node");
}

Jet2 eval_scalar(const ExprAst& ast, const std::map<std::string, double>& params,
                 const Eigen::VectorXd& point) {
    return eval_node(ast, params, make_seeds(point), static_cast<int>(point.size()));
}

std::vector<Jet2> eval_chart(const ImmersionSpec& spec, const Eigen::VectorXd& point) {
    if (static_cast<int>(point.size()) != spec.m)
        throw DimensionMismatch("point dimension " + std::to_string(point.size()) +
                                " does not match chart dimension " + std::to_string(spec.m));
    if (!spec.contains(point))
        throw DomainError("point " + point_to_string(point) + " outside domain box");
    const std::vector<Jet2> seeds = make_seeds(point);
    std::vector<Jet2> jets;
    jets.reserve(static_cast<std::size_t>(spec.N));
    for (int a = 0; a < spec.N; ++a) {
        try {
            jets.push_back(eval_node(spec.components[a], spec.params, seeds, spec.m));
        } catch (const DomainError& e) {
            throw DomainError("component " + std::to_string(a + 1) + " at " +
                              point_to_string(point) + ": " + e.what());
        }
    }
    return jets;
}

ImmersionSpec apply_linear_map(const ImmersionSpec& spec, const Eigen::MatrixXd& Q) {
    if (Q.cols() != spec.N)
        throw DimensionMismatch("linear map expects " + std::to_string(Q.cols()) +
                                " ambient coordinates, chart has " + std::to_string(spec.N));
    ImmersionSpec out;
    out.m = spec.m;
    out.N = static_cast<int>(Q.rows());
    out.params = spec.params;
    out.domain_box = spec.domain_box;
    out.components.reserve(static_cast<std::size_t>(out.N));
    for (int a = 0; a < out.N; ++a) {
        ExprAst sum = ExprAst::make_binary(BinaryOp::Mul, ExprAst::make_constant(Q(a, 0)),
                                           spec.components[0].clone());
        for (int b = 1; b < spec.N; ++b) {
            ExprAst term = ExprAst::make_binary(BinaryOp::Mul, ExprAst::make_constant(Q(a, b)),
                                                spec.components[b].clone());
            sum = ExprAst::make_binary(BinaryOp::Add, std::move(sum), std::move(term));
        }
        out.components.push_back(std::move(sum));
    }
    return out;
}

} // namespace immcheck
