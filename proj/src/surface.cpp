#include "curvop/surface.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

namespace curvop {

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind;
    std::string text;
    double number = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            col_ += static_cast<int>(tok_.text.size());
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t mark = pos_;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                } else {
                    pos_ = mark;
                }
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = src_.substr(start, pos_ - start);
            try {
                tok_.number = std::stod(tok_.text);
            } catch (const std::exception&) {
                throw SyntaxError("malformed number '" + tok_.text + "'", line_, col_);
            }
            col_ += static_cast<int>(tok_.text.size());
            return;
        }
        static const std::string punct = "=;,()[]+-*/^";
        if (punct.find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Punct;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr num(double v) {
    Expr e;
    e.kind = Expr::Kind::Number;
    e.number = v;
    return make(std::move(e));
}

std::optional<Expr::Func> func_by_name(const std::string& n) {
    if (n == "sin") return Expr::Func::Sin;
    if (n == "cos") return Expr::Func::Cos;
    if (n == "tan") return Expr::Func::Tan;
    if (n == "exp") return Expr::Func::Exp;
    if (n == "log") return Expr::Func::Log;
    if (n == "sqrt") return Expr::Func::Sqrt;
    return std::nullopt;
}

const char* func_name(Expr::Func f) {
    switch (f) {
        case Expr::Func::Sin: return "sin";
        case Expr::Func::Cos: return "cos";
        case Expr::Func::Tan: return "tan";
        case Expr::Func::Exp: return "exp";
        case Expr::Func::Log: return "log";
        case Expr::Func::Sqrt: return "sqrt";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    SurfaceDef parse() {
        SurfaceDef def;
        bool have[3] = {false, false, false};
        bool have_domain = false;
        while (lex_.peek().kind != Token::Kind::End) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Kind::Ident)
                throw SyntaxError("expected a statement", t.line, t.col,
                                  "one of: x, y, z, params, domain");
            if (t.text == "x" || t.text == "y" || t.text == "z") {
                int idx = t.text == "x" ? 0 : t.text == "y" ? 1 : 2;
                if (have[idx])
                    throw SyntaxError("duplicate definition of '" + t.text + "'", t.line, t.col);
                lex_.next();
                expect_punct("=");
                ExprPtr e = parse_expr();
                expect_punct(";");
                (idx == 0 ? def.x : idx == 1 ? def.y : def.z) = e;
                have[idx] = true;
            } else if (t.text == "params") {
                lex_.next();
                parse_params(def);
                accept_punct(";");
            } else if (t.text == "domain") {
                lex_.next();
                parse_domain(def);
                have_domain = true;
                accept_punct(";");
            } else {
                throw SyntaxError("unexpected statement '" + t.text + "'", t.line, t.col,
                                  "one of: x, y, z, params, domain");
            }
        }
        for (int i = 0; i < 3; ++i)
            if (!have[i])
                throw SyntaxError(std::string("missing coordinate definition for '") +
                                      "xyz"[i] + "'",
                                  1, 1);
        if (!have_domain) {
            def.u_range = Interval{0, 1, true, true, num(0), num(1)};
            def.v_range = Interval{0, 1, true, true, num(0), num(1)};
        }
        validate_names(def);
        return def;
    }

private:
    Token expect_punct(const std::string& p) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Punct || t.text != p)
            throw SyntaxError("expected '" + p + "' before '" + t.text + "'", t.line, t.col, "'" + p + "'");
        return lex_.next();
    }

    bool accept_punct(const std::string& p) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    Token expect_ident(const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Ident)
            throw SyntaxError("expected " + what + " before '" + t.text + "'", t.line, t.col, what);
        return lex_.next();
    }

    void parse_params(SurfaceDef& def) {
        while (true) {
            Token name = expect_ident("parameter name");
            expect_punct("=");
            ExprPtr value = parse_expr();
            double v = eval_const(*value, name.line, name.col);
            for (auto& kv : def.params)
                if (kv.first == name.text)
                    throw SyntaxError("duplicate parameter '" + name.text + "'", name.line, name.col);
            def.params.emplace_back(name.text, v);
            if (!accept_punct(",")) break;
        }
    }

    void parse_domain(SurfaceDef& def) {
        for (int axis = 0; axis < 2; ++axis) {
            Token var = expect_ident("'u' or 'v'");
            int want = axis;
            int got = var.text == "u" ? 0 : var.text == "v" ? 1 : -1;
            if (got != want)
                throw SyntaxError("expected domain for '" + std::string(want == 0 ? "u" : "v") + "'",
                                  var.line, var.col);
            Token kw = expect_ident("'in'");
            if (kw.text != "in") throw SyntaxError("expected 'in'", kw.line, kw.col, "'in'");
            Interval iv;
            const Token& open = lex_.peek();
            if (accept_punct("["))
                iv.lo_closed = true;
            else if (accept_punct("("))
                iv.lo_closed = false;
            else
                throw SyntaxError("expected '[' or '('", open.line, open.col);
            iv.lo_expr = parse_expr();
            expect_punct(",");
            iv.hi_expr = parse_expr();
            const Token& close = lex_.peek();
            if (accept_punct("]"))
                iv.hi_closed = true;
            else if (accept_punct(")"))
                iv.hi_closed = false;
            else
                throw SyntaxError("expected ']' or ')'", close.line, close.col);
            if (axis == 0) {
                if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "periodic") {
                    lex_.next();
                    def.periodic_u = true;
                }
                def.u_range = iv;
                expect_punct(",");
            } else {
                def.v_range = iv;
            }
        }
    }

    // expr := term (('+'|'-') term)*
    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        while (true) {
            if (accept_punct("+")) {
                Expr e;
                e.kind = Expr::Kind::Add;
                e.a = left;
                e.b = parse_term();
                left = make(std::move(e));
            } else if (accept_punct("-")) {
                Expr e;
                e.kind = Expr::Kind::Sub;
                e.a = left;
                e.b = parse_term();
                left = make(std::move(e));
            } else {
                return left;
            }
        }
    }

    // term := factor (('*'|'/') factor)*
    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        while (true) {
            if (accept_punct("*")) {
                Expr e;
                e.kind = Expr::Kind::Mul;
                e.a = left;
                e.b = parse_factor();
                left = make(std::move(e));
            } else if (accept_punct("/")) {
                Expr e;
                e.kind = Expr::Kind::Div;
                e.a = left;
                e.b = parse_factor();
                left = make(std::move(e));
            } else {
                return left;
            }
        }
    }

    // factor := ('-')* power
    ExprPtr parse_factor() {
        if (accept_punct("-")) {
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.a = parse_factor();
            return make(std::move(e));
        }
        return parse_power();
    }

    // power := atom ('^' exponent)?   right-assoc, rational exponent only
    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (accept_punct("^")) {
            const Token& at = lex_.peek();
            auto [p, q] = parse_rational_exponent();
            Expr e;
            e.kind = Expr::Kind::Pow;
            e.a = base;
            e.pow_num = p;
            e.pow_den = q;
            (void)at;
            return make(std::move(e));
        }
        return base;
    }

    // exponent := int | '-' int | '(' int ('/' int)? ')' with optional sign
    std::pair<long, long> parse_rational_exponent() {
        const Token& t = lex_.peek();
        bool paren = accept_punct("(");
        long sign = 1;
        while (accept_punct("-")) sign = -sign;
        Token numtok = lex_.peek();
        if (numtok.kind != Token::Kind::Number)
            throw SyntaxError("expected rational exponent", t.line, t.col, "integer or p/q");
        lex_.next();
        long p = require_integer(numtok);
        long q = 1;
        if (paren && accept_punct("/")) {
            Token dent = lex_.peek();
            if (dent.kind != Token::Kind::Number)
                throw SyntaxError("expected integer denominator", dent.line, dent.col);
            lex_.next();
            q = require_integer(dent);
            if (q == 0) throw SyntaxError("zero denominator in exponent", dent.line, dent.col);
        }
        if (paren) expect_punct(")");
        return {sign * p, q};
    }

    long require_integer(const Token& t) {
        double r = t.number;
        long i = std::lround(r);
        if (std::abs(r - double(i)) > 1e-12)
            throw SyntaxError("exponent must be rational p/q with integer parts", t.line, t.col);
        return i;
    }

    ExprPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Number) {
            Token n = lex_.next();
            return num(n.number);
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lex_.next();
            if (auto f = func_by_name(id.text)) {
                expect_punct("(");
                ExprPtr arg = parse_expr();
                expect_punct(")");
                Expr e;
                e.kind = Expr::Kind::Call;
                e.func = *f;
                e.a = arg;
                return make(std::move(e));
            }
            if (id.text == "pi") {
                Expr e;
                e.kind = Expr::Kind::Pi;
                return make(std::move(e));
            }
            if (id.text == "u" || id.text == "v") {
                Expr e;
                e.kind = Expr::Kind::Var;
                e.var = id.text == "u" ? 0 : 1;
                return make(std::move(e));
            }
            Expr e;
            e.kind = Expr::Kind::Param;
            e.name = id.text;
            return make(std::move(e));
        }
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            lex_.next();
            ExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        throw SyntaxError("expected an expression before '" + t.text + "'", t.line, t.col,
                          "number, identifier or '('");
    }

    // constant expressions: no u/v references
    double eval_const(const Expr& e, int line, int col) {
        switch (e.kind) {
            case Expr::Kind::Number: return e.number;
            case Expr::Kind::Pi: return 3.14159265358979323846;
            case Expr::Kind::Var:
                throw SyntaxError("chart variables not allowed in constant expression", line, col);
            case Expr::Kind::Param:
                throw SyntaxError("parameter references not allowed in parameter defaults", line, col);
            case Expr::Kind::Neg: return -eval_const(*e.a, line, col);
            case Expr::Kind::Add: return eval_const(*e.a, line, col) + eval_const(*e.b, line, col);
            case Expr::Kind::Sub: return eval_const(*e.a, line, col) - eval_const(*e.b, line, col);
            case Expr::Kind::Mul: return eval_const(*e.a, line, col) * eval_const(*e.b, line, col);
            case Expr::Kind::Div: return eval_const(*e.a, line, col) / eval_const(*e.b, line, col);
            case Expr::Kind::Pow:
                return std::pow(eval_const(*e.a, line, col), double(e.pow_num) / double(e.pow_den));
            case Expr::Kind::Call: {
                double a = eval_const(*e.a, line, col);
                switch (e.func) {
                    case Expr::Func::Sin: return std::sin(a);
                    case Expr::Func::Cos: return std::cos(a);
                    case Expr::Func::Tan: return std::tan(a);
                    case Expr::Func::Exp: return std::exp(a);
                    case Expr::Func::Log: return std::log(a);
                    case Expr::Func::Sqrt: return std::sqrt(a);
                }
            }
        }
        throw SyntaxError("bad constant expression", line, col);
    }

    void check_names(const Expr& e, const SurfaceDef& def, bool allow_vars) {
        switch (e.kind) {
            case Expr::Kind::Param:
                if (!def.has_param(e.name))
                    throw UnknownIdentifier("unknown identifier '" + e.name + "' (not u, v, pi or a declared parameter)");
                return;
            case Expr::Kind::Var:
                if (!allow_vars)
                    throw BadDomain("domain bounds may not reference u or v");
                return;
            default: break;
        }
        if (e.a) check_names(*e.a, def, allow_vars);
        if (e.b) check_names(*e.b, def, allow_vars);
    }

    void validate_names(const SurfaceDef& def) {
        check_names(*def.x, def, true);
        check_names(*def.y, def, true);
        check_names(*def.z, def, true);
        for (const Interval* iv : {&def.u_range, &def.v_range}) {
            if (iv->lo_expr) check_names(*iv->lo_expr, def, false);
            if (iv->hi_expr) check_names(*iv->hi_expr, def, false);
        }
    }

    Lexer lex_;
};

void print_expr_prec(const Expr& e, int parent_prec, std::ostringstream& out) {
    // precedence: add/sub 1, mul/div 2, neg 3, pow 4, atom 5
    auto paren = [&](int prec, auto&& body) {
        if (prec < parent_prec) out << "(";
        body();
        if (prec < parent_prec) out << ")";
    };
    switch (e.kind) {
        case Expr::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", e.number);
            out << buf;
            return;
        }
        case Expr::Kind::Pi: out << "pi"; return;
        case Expr::Kind::Var: out << (e.var == 0 ? "u" : "v"); return;
        case Expr::Kind::Param: out << e.name; return;
        case Expr::Kind::Neg:
            paren(3, [&] {
                out << "-";
                print_expr_prec(*e.a, 3, out);
            });
            return;
        case Expr::Kind::Add:
            paren(1, [&] {
                print_expr_prec(*e.a, 1, out);
                out << " + ";
                print_expr_prec(*e.b, 2, out);
            });
            return;
        case Expr::Kind::Sub:
            paren(1, [&] {
                print_expr_prec(*e.a, 1, out);
                out << " - ";
                print_expr_prec(*e.b, 2, out);
            });
            return;
        case Expr::Kind::Mul:
            paren(2, [&] {
                print_expr_prec(*e.a, 2, out);
                out << "*";
                print_expr_prec(*e.b, 3, out);
            });
            return;
        case Expr::Kind::Div:
            paren(2, [&] {
                print_expr_prec(*e.a, 2, out);
                out << "/";
                print_expr_prec(*e.b, 3, out);
            });
            return;
        case Expr::Kind::Pow:
            paren(4, [&] {
                print_expr_prec(*e.a, 5, out);
                out << "^";
                if (e.pow_den == 1 && e.pow_num >= 0) {
                    out << e.pow_num;
                } else {
                    out << "(" << e.pow_num;
                    if (e.pow_den != 1) out << "/" << e.pow_den;
                    out << ")";
                }
            });
            return;
        case Expr::Kind::Call:
            out << func_name(e.func) << "(";
            print_expr_prec(*e.a, 0, out);
            out << ")";
            return;
    }
}

}  // namespace

bool Expr::structurally_equal(const Expr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Number: return number == o.number;
        case Kind::Pi: return true;
        case Kind::Var: return var == o.var;
        case Kind::Param: return name == o.name;
        case Kind::Call:
            if (func != o.func) return false;
            break;
        case Kind::Pow:
            if (pow_num != o.pow_num || pow_den != o.pow_den) return false;
            break;
        default: break;
    }
    if (static_cast<bool>(a) != static_cast<bool>(o.a)) return false;
    if (static_cast<bool>(b) != static_cast<bool>(o.b)) return false;
    if (a && !a->structurally_equal(*o.a)) return false;
    if (b && !b->structurally_equal(*o.b)) return false;
    return true;
}

double SurfaceDef::param_default(const std::string& key) const {
    for (const auto& kv : params)
        if (kv.first == key) return kv.second;
    throw UnknownParameter("unknown parameter '" + key + "'");
}

bool SurfaceDef::has_param(const std::string& key) const {
    for (const auto& kv : params)
        if (kv.first == key) return true;
    return false;
}

std::map<std::string, double> SurfaceDef::resolve_params(
    const std::map<std::string, double>& overrides) const {
    std::map<std::string, double> out;
    for (const auto& kv : params) out[kv.first] = kv.second;
    for (const auto& kv : overrides) {
        if (!out.count(kv.first))
            throw UnknownParameter("unknown parameter '" + kv.first + "' for surface" +
                                   (name.empty() ? "" : " '" + name + "'"));
        out[kv.first] = kv.second;
    }
    return out;
}

SurfaceDef::Domain SurfaceDef::resolve_domain(
    const std::map<std::string, double>& params_resolved) const {
    auto bound = [&](const ExprPtr& e, double fallback) {
        if (!e) return fallback;
        EvalEnv<double> env{0, 0, &params_resolved};
        return eval_expr(*e, env);
    };
    Domain d;
    d.u_lo = bound(u_range.lo_expr, u_range.lo);
    d.u_hi = bound(u_range.hi_expr, u_range.hi);
    d.v_lo = bound(v_range.lo_expr, v_range.lo);
    d.v_hi = bound(v_range.hi_expr, v_range.hi);
    d.periodic_u = periodic_u;
    if (!(d.u_lo < d.u_hi) || !(d.v_lo < d.v_hi))
        throw BadDomain("degenerate domain interval (min must be < max)");
    return d;
}

SurfaceDef parse_surface(const std::string& text) {
    Parser p(text);
    return p.parse();
}

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    print_expr_prec(e, 0, out);
    return out.str();
}

std::string print_surface(const SurfaceDef& def) {
    std::ostringstream out;
    out << "x = " << print_expr(*def.x) << ";\n";
    out << "y = " << print_expr(*def.y) << ";\n";
    out << "z = " << print_expr(*def.z) << ";\n";
    if (!def.params.empty()) {
        out << "params ";
        bool first = true;
        for (const auto& kv : def.params) {
            if (!first) out << ", ";
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", kv.second);
            out << kv.first << "=" << buf;
            first = false;
        }
        out << ";\n";
    }
    auto interval = [&](const Interval& iv) {
        std::string s;
        s += iv.lo_closed ? "[" : "(";
        s += iv.lo_expr ? print_expr(*iv.lo_expr) : std::to_string(iv.lo);
        s += ", ";
        s += iv.hi_expr ? print_expr(*iv.hi_expr) : std::to_string(iv.hi);
        s += iv.hi_closed ? "]" : ")";
        return s;
    };
    out << "domain u in " << interval(def.u_range);
    if (def.periodic_u) out << " periodic";
    out << ", v in " << interval(def.v_range) << ";\n";
    return out.str();
}

namespace {

const char* kConeSource =
    "x = (R + v*cos(phi))*cos(u);\n"
    "y = (R + v*cos(phi))*sin(u);\n"
    "z = v*sin(phi);\n"
    "params R=1, phi=0.52359877559829882, l=2;\n"
    "domain u in [0, 2*pi) periodic, v in [0, l];\n";

// cylinder and planar ring are the cone chart with the generatrix angle
// pinned; keeping the identical AST makes the specialization checks exact
const char* kCylinderSource =
    "x = (R + v*cos(phi))*cos(u);\n"
    "y = (R + v*cos(phi))*sin(u);\n"
    "z = v*sin(phi);\n"
    "params R=1, phi=1.5707963267948966, l=2;\n"
    "domain u in [0, 2*pi) periodic, v in [0, l];\n";

const char* kPlaneRingSource =
    "x = (R + v*cos(phi))*cos(u);\n"
    "y = (R + v*cos(phi))*sin(u);\n"
    "z = v*sin(phi);\n"
    "params R=1, phi=0, l=2;\n"
    "domain u in [0, 2*pi) periodic, v in [0, l];\n";

const char* kSphereSource =
    "x = R*sin(v)*cos(u);\n"
    "y = R*sin(v)*sin(u);\n"
    "z = R*cos(v);\n"
    "params R=1;\n"
    "domain u in [0, 2*pi) periodic, v in [0.15, 2.9915926535897931];\n";

const char* kTorusSource =
    "x = (R + rho*cos(v))*cos(u);\n"
    "y = (R + rho*cos(v))*sin(u);\n"
    "z = rho*sin(v);\n"
    "params R=2, rho=0.5;\n"
    "domain u in [0, 2*pi) periodic, v in [0, 2*pi];\n";

const char* kCatenoidSource =
    "x = (c*(exp(v/c) + exp(-v/c))/2)*cos(u);\n"
    "y = (c*(exp(v/c) + exp(-v/c))/2)*sin(u);\n"
    "z = v;\n"
    "params c=1;\n"
    "domain u in [0, 2*pi) periodic, v in [-1, 1];\n";

}  // namespace

std::vector<std::string> builtin_names() {
    return {"cone", "cylinder", "plane_ring", "sphere", "torus", "catenoid"};
}

SurfaceDef builtin_catalog(const std::string& name) {
    const char* src = nullptr;
    if (name == "cone") src = kConeSource;
    else if (name == "cylinder") src = kCylinderSource;
    else if (name == "plane_ring") src = kPlaneRingSource;
    else if (name == "sphere") src = kSphereSource;
    else if (name == "torus") src = kTorusSource;
    else if (name == "catenoid") src = kCatenoidSource;
    if (!src) throw UnknownSurface("unknown builtin surface '" + name + "'");
    SurfaceDef def = parse_surface(src);
    def.name = name;
    return def;
}

}  // namespace curvop
