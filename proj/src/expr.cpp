#include "topical/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace topical {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Var: return "var";
        case NodeKind::Scale: return "scale";
        case NodeKind::Max: return "max";
        case NodeKind::Min: return "min";
        case NodeKind::Lin: return "lin";
        case NodeKind::Har: return "har";
        case NodeKind::Geo: return "geo";
    }
    return "?";
}

ExprNode ExprNode::make_var(int index) {
    ExprNode e;
    e.kind = NodeKind::Var;
    e.var = index;
    return e;
}

ExprNode ExprNode::make_scale(double coeff, ExprNode child) {
    ExprNode e;
    e.kind = NodeKind::Scale;
    e.coeff = coeff;
    e.children.push_back(std::move(child));
    return e;
}

ExprNode ExprNode::make_nary(NodeKind kind, std::vector<ExprNode> children) {
    ExprNode e;
    e.kind = kind;
    e.children = std::move(children);
    return e;
}

ExprNode ExprNode::make_weighted(NodeKind kind, std::vector<double> weights,
                                 std::vector<ExprNode> children) {
    ExprNode e;
    e.kind = kind;
    e.weights = std::move(weights);
    e.children = std::move(children);
    return e;
}

ParseError::ParseError(std::string msg, int line, int col)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(col) + ": " + std::move(msg)),
      line_(line),
      col_(col) {}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Number, Ident, Colon, Comma, LParen, RParen, Star, Slash, Newline, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double value = 0.0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src_[pos_];
        if (c == '\n') {
            advance();
            t.kind = Tok::Newline;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return lex_number(t);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            t.kind = Tok::Ident;
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        advance();
        switch (c) {
            case ':': t.kind = Tok::Colon; return t;
            case ',': t.kind = Tok::Comma; return t;
            case '(': t.kind = Tok::LParen; return t;
            case ')': t.kind = Tok::RParen; return t;
            case '*': t.kind = Tok::Star; return t;
            case '/': t.kind = Tok::Slash; return t;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
    }

  private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_number(Token t) {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            advance();
        // optional exponent
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t save = pos_;
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
            } else {
                pos_ = save;  // not an exponent after all
            }
        }
        t.kind = Tok::Number;
        t.text = src_.substr(start, pos_ - start);
        const char* first = t.text.data();
        const char* last = first + t.text.size();
        auto res = std::from_chars(first, last, t.value);
        if (res.ec != std::errc() || res.ptr != last)
            throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
        return t;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) { bump(); }

    TopicalFn parse_file(const std::string& name) {
        TopicalFn f;
        f.name = name;
        skip_newlines();
        expect_ident("dim");
        Token nt = expect(Tok::Number, "dimension");
        double nv = nt.value;
        if (nv < 1 || nv != std::floor(nv) || nv > 1e6)
            throw ParseError("dimension must be a positive integer", nt.line, nt.col);
        f.dim = static_cast<int>(nv);
        f.coords.resize(f.dim);
        std::vector<bool> seen(f.dim, false);
        expect_line_end();
        while (cur_.kind != Tok::End) {
            skip_newlines();
            if (cur_.kind == Tok::End) break;
            Token it = expect(Tok::Number, "coordinate index");
            if (it.value < 1 || it.value != std::floor(it.value) || it.value > f.dim)
                throw ParseError("coordinate index out of range [1, " +
                                     std::to_string(f.dim) + "]",
                                 it.line, it.col);
            int idx = static_cast<int>(it.value);
            if (seen[idx - 1])
                throw ParseError("coordinate " + std::to_string(idx) + " defined twice",
                                 it.line, it.col);
            expect(Tok::Colon, "':'");
            f.coords[idx - 1] = parse_expr();
            seen[idx - 1] = true;
            expect_line_end();
        }
        for (int i = 0; i < f.dim; ++i)
            if (!seen[i])
                throw ParseError("coordinate " + std::to_string(i + 1) + " is missing",
                                 cur_.line, cur_.col);
        return f;
    }

  private:
    void bump() { cur_ = lex_.next(); }

    void skip_newlines() {
        while (cur_.kind == Tok::Newline) bump();
    }

    void expect_line_end() {
        if (cur_.kind == Tok::Newline) {
            bump();
        } else if (cur_.kind != Tok::End) {
            throw ParseError("expected end of line, got '" + describe(cur_) + "'", cur_.line,
                             cur_.col);
        }
    }

    Token expect(Tok k, const std::string& what) {
        if (cur_.kind != k)
            throw ParseError("expected " + what + ", got '" + describe(cur_) + "'", cur_.line,
                             cur_.col);
        Token t = cur_;
        bump();
        return t;
    }

    void expect_ident(const std::string& word) {
        if (cur_.kind != Tok::Ident || cur_.text != word)
            throw ParseError("expected '" + word + "', got '" + describe(cur_) + "'", cur_.line,
                             cur_.col);
        bump();
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::Number: return t.text;
            case Tok::Ident: return t.text;
            case Tok::Colon: return ":";
            case Tok::Comma: return ",";
            case Tok::LParen: return "(";
            case Tok::RParen: return ")";
            case Tok::Star: return "*";
            case Tok::Slash: return "/";
            case Tok::Newline: return "\\n";
            case Tok::End: return "<end>";
        }
        return "?";
    }

    // posnum := decimal literal | <num> / <num>
    double parse_posnum() {
        Token t = expect(Tok::Number, "positive number");
        double v = t.value;
        if (cur_.kind == Tok::Slash) {
            bump();
            Token d = expect(Tok::Number, "denominator");
            if (d.value == 0.0)
                throw ParseError("zero denominator", d.line, d.col);
            v /= d.value;
        }
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParseError("constant must be strictly positive and finite", t.line, t.col);
        return v;
    }

    ExprNode parse_expr() {
        if (cur_.kind == Tok::Number) {
            int line = cur_.line, col = cur_.col;
            double c = parse_posnum();
            if (cur_.kind != Tok::Star)
                throw ParseError("expected '*' after coefficient", line, col);
            bump();
            return ExprNode::make_scale(c, parse_expr());
        }
        if (cur_.kind != Tok::Ident)
            throw ParseError("expected expression, got '" + describe(cur_) + "'", cur_.line,
                             cur_.col);
        Token t = cur_;
        if (t.text.size() > 1 && t.text[0] == 'x' &&
            std::all_of(t.text.begin() + 1, t.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            bump();
            long idx = std::strtol(t.text.c_str() + 1, nullptr, 10);
            if (idx < 1)
                throw ParseError("variable index out of range", t.line, t.col);
            return ExprNode::make_var(static_cast<int>(idx));
        }
        if (t.text == "max" || t.text == "min") {
            NodeKind k = t.text == "max" ? NodeKind::Max : NodeKind::Min;
            bump();
            expect(Tok::LParen, "'('");
            std::vector<ExprNode> children;
            children.push_back(parse_expr());
            while (cur_.kind == Tok::Comma) {
                bump();
                children.push_back(parse_expr());
            }
            expect(Tok::RParen, "')'");
            return ExprNode::make_nary(k, std::move(children));
        }
        if (t.text == "lin" || t.text == "har") {
            NodeKind k = t.text == "lin" ? NodeKind::Lin : NodeKind::Har;
            bump();
            expect(Tok::LParen, "'('");
            std::vector<double> weights;
            std::vector<ExprNode> children;
            parse_weighted_arg(weights, children);
            while (cur_.kind == Tok::Comma) {
                bump();
                parse_weighted_arg(weights, children);
            }
            expect(Tok::RParen, "')'");
            return ExprNode::make_weighted(k, std::move(weights), std::move(children));
        }
        if (t.text == "geo") {
            bump();
            expect(Tok::LParen, "'('");
            std::vector<double> weights;
            std::vector<ExprNode> children;
            parse_geo_arg(weights, children);
            while (cur_.kind == Tok::Comma) {
                bump();
                parse_geo_arg(weights, children);
            }
            expect(Tok::RParen, "')'");
            return ExprNode::make_weighted(NodeKind::Geo, std::move(weights),
                                           std::move(children));
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
    }

    // <posnum> * expr
    void parse_weighted_arg(std::vector<double>& weights, std::vector<ExprNode>& children) {
        weights.push_back(parse_posnum());
        expect(Tok::Star, "'*'");
        children.push_back(parse_expr());
    }

    // expr : <posnum>
    void parse_geo_arg(std::vector<double>& weights, std::vector<ExprNode>& children) {
        children.push_back(parse_expr());
        expect(Tok::Colon, "':'");
        weights.push_back(parse_posnum());
    }

    Lexer lex_;
    Token cur_;
};

void validate_node(const ExprNode& e, int dim) {
    switch (e.kind) {
        case NodeKind::Var:
            if (e.var < 1 || e.var > dim)
                throw std::invalid_argument("variable index x" + std::to_string(e.var) +
                                            " out of range [1, " + std::to_string(dim) + "]");
            if (!e.children.empty())
                throw std::invalid_argument("var node must be a leaf");
            return;
        case NodeKind::Scale:
            if (!(e.coeff > 0.0) || !std::isfinite(e.coeff))
                throw std::invalid_argument("scale coefficient must be positive and finite");
            if (e.children.size() != 1)
                throw std::invalid_argument("scale node needs exactly one child");
            break;
        case NodeKind::Max:
        case NodeKind::Min:
            if (e.children.empty())
                throw std::invalid_argument(std::string(node_kind_name(e.kind)) +
                                            " needs at least one child");
            break;
        case NodeKind::Lin:
        case NodeKind::Har:
        case NodeKind::Geo: {
            if (e.children.empty())
                throw std::invalid_argument(std::string(node_kind_name(e.kind)) +
                                            " needs at least one child");
            if (e.weights.size() != e.children.size())
                throw std::invalid_argument("weight/child count mismatch");
            double sum = 0.0;
            for (double w : e.weights) {
                if (!(w > 0.0) || !std::isfinite(w))
                    throw std::invalid_argument("weights must be positive and finite");
                sum += w;
            }
            if (e.kind == NodeKind::Geo && std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("geo weights must sum to 1 (got " +
                                            std::to_string(sum) + ")");
            break;
        }
    }
    for (const auto& c : e.children) validate_node(c, dim);
}

}  // namespace

void validate(const TopicalFn& f) {
    if (f.dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (static_cast<int>(f.coords.size()) != f.dim)
        throw std::invalid_argument("coordinate count does not match dimension");
    for (const auto& c : f.coords) validate_node(c, f.dim);
}

TopicalFn parse(const std::string& text, const std::string& name) {
    Parser p(text);
    TopicalFn f = p.parse_file(name);
    f.source = text;
    validate(f);
    return f;
}

TopicalFn parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip
    return std::string(buf, res.ptr);
}

void print_node(const ExprNode& e, std::string& out) {
    switch (e.kind) {
        case NodeKind::Var:
            out += "x" + std::to_string(e.var);
            return;
        case NodeKind::Scale:
            out += format_number(e.coeff);
            out += "*";
            print_node(e.children[0], out);
            return;
        case NodeKind::Max:
        case NodeKind::Min: {
            out += e.kind == NodeKind::Max ? "max(" : "min(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                print_node(e.children[i], out);
            }
            out += ")";
            return;
        }
        case NodeKind::Lin:
        case NodeKind::Har: {
            out += e.kind == NodeKind::Lin ? "lin(" : "har(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                out += format_number(e.weights[i]);
                out += "*";
                print_node(e.children[i], out);
            }
            out += ")";
            return;
        }
        case NodeKind::Geo: {
            out += "geo(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                print_node(e.children[i], out);
                out += ":";
                out += format_number(e.weights[i]);
            }
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string pretty_print(const ExprNode& e) {
    std::string out;
    print_node(e, out);
    return out;
}

std::string pretty_print(const TopicalFn& f) {
    std::string out = "dim " + std::to_string(f.dim) + "\n";
    for (int i = 0; i < f.dim; ++i) {
        out += std::to_string(i + 1) + ": ";
        print_node(f.coords[i], out);
        out += "\n";
    }
    return out;
}

bool equal_structure(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.var != b.var || a.coeff != b.coeff || a.weights != b.weights ||
        a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!equal_structure(a.children[i], b.children[i])) return false;
    return true;
}

bool equal_structure(const TopicalFn& a, const TopicalFn& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
        if (!equal_structure(a.coords[i], b.coords[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

// log(sum exp(t_i)) with max shift; terms.size() >= 1
double log_sum_exp(const std::vector<double>& terms) {
    double m = terms[0];
    for (double t : terms) m = std::max(m, t);
    if (!std::isfinite(m)) return m;  // all -inf, or a +-inf slipped in
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

double eval_node(const ExprNode& e, const Vec& x) {
    switch (e.kind) {
        case NodeKind::Var:
            return x[e.var - 1];
        case NodeKind::Scale:
            return eval_node(e.children[0], x) + std::log(e.coeff);
        case NodeKind::Max: {
            double v = eval_node(e.children[0], x);
            for (size_t i = 1; i < e.children.size(); ++i)
                v = std::max(v, eval_node(e.children[i], x));
            return v;
        }
        case NodeKind::Min: {
            double v = eval_node(e.children[0], x);
            for (size_t i = 1; i < e.children.size(); ++i)
                v = std::min(v, eval_node(e.children[i], x));
            return v;
        }
        case NodeKind::Lin: {
            std::vector<double> terms(e.children.size());
            for (size_t i = 0; i < e.children.size(); ++i)
                terms[i] = std::log(e.weights[i]) + eval_node(e.children[i], x);
            return log_sum_exp(terms);
        }
        case NodeKind::Har: {
            std::vector<double> terms(e.children.size());
            for (size_t i = 0; i < e.children.size(); ++i)
                terms[i] = std::log(e.weights[i]) - eval_node(e.children[i], x);
            return -log_sum_exp(terms);
        }
        case NodeKind::Geo: {
            double v = 0.0;
            for (size_t i = 0; i < e.children.size(); ++i)
                v += e.weights[i] * eval_node(e.children[i], x);
            return v;
        }
    }
    return 0.0;  // unreachable
}

void check_input(const TopicalFn& f, const Vec& x) {
    if (static_cast<int>(x.size()) != f.dim)
        throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                    " does not match function dimension " +
                                    std::to_string(f.dim));
    for (double v : x)
        if (!std::isfinite(v)) throw std::domain_error("non-finite input coordinate");
}

}  // namespace

Vec eval_additive(const TopicalFn& f, const Vec& x) {
    check_input(f, x);
    Vec out(f.dim);
    for (int i = 0; i < f.dim; ++i) out[i] = eval_node(f.coords[i], x);
    return out;
}

double eval_additive_coord(const TopicalFn& f, int i, const Vec& x) {
    check_input(f, x);
    return eval_node(f.coords[i - 1], x);
}

Vec log_vec(const Vec& y) {
    Vec x(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::domain_error("nonpositive coordinate in positive-cone point");
        x[i] = std::log(y[i]);
    }
    return x;
}

Vec exp_vec(const Vec& x) {
    Vec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i]);
    return y;
}

Vec eval_multiplicative(const TopicalFn& f, const Vec& y) {
    return exp_vec(eval_additive(f, log_vec(y)));
}

// ---------------------------------------------------------------------------
// Structural transforms
// ---------------------------------------------------------------------------

ExprNode dual(const ExprNode& e) {
    ExprNode out;
    out.var = e.var;
    out.weights = e.weights;
    out.children.reserve(e.children.size());
    for (const auto& c : e.children) out.children.push_back(dual(c));
    switch (e.kind) {
        case NodeKind::Var: out.kind = NodeKind::Var; break;
        case NodeKind::Scale:
            out.kind = NodeKind::Scale;
            out.coeff = 1.0 / e.coeff;
            break;
        case NodeKind::Max: out.kind = NodeKind::Min; break;
        case NodeKind::Min: out.kind = NodeKind::Max; break;
        case NodeKind::Lin: out.kind = NodeKind::Har; break;
        case NodeKind::Har: out.kind = NodeKind::Lin; break;
        case NodeKind::Geo: out.kind = NodeKind::Geo; break;
    }
    return out;
}

TopicalFn dual(const TopicalFn& f) {
    TopicalFn g;
    g.dim = f.dim;
    g.name = f.name.empty() ? "" : f.name + "^-";
    g.coords.reserve(f.dim);
    for (const auto& c : f.coords) g.coords.push_back(dual(c));
    return g;
}

namespace {

bool node_has_kind(const ExprNode& e, NodeKind a, NodeKind b) {
    if (e.kind == a || e.kind == b) return true;
    for (const auto& c : e.children)
        if (node_has_kind(c, a, b)) return true;
    return false;
}

ExprNode substitute(const ExprNode& e, const TopicalFn& g) {
    if (e.kind == NodeKind::Var) return g.coords[e.var - 1];
    ExprNode out = e;
    for (auto& c : out.children) c = substitute(c, g);
    return out;
}

}  // namespace

bool is_convex_syntactic(const TopicalFn& f) {
    for (const auto& c : f.coords)
        if (node_has_kind(c, NodeKind::Min, NodeKind::Har)) return false;
    return true;
}

TopicalFn compose(const TopicalFn& f, const TopicalFn& g) {
    if (f.dim != g.dim) throw std::invalid_argument("composition dimension mismatch");
    TopicalFn out;
    out.dim = f.dim;
    out.coords.reserve(f.dim);
    for (const auto& c : f.coords) out.coords.push_back(substitute(c, g));
    return out;
}

TopicalFn iterate_fn(const TopicalFn& f, int k) {
    if (k < 1) throw std::invalid_argument("iterate count must be >= 1");
    TopicalFn out = f;
    for (int i = 1; i < k; ++i) out = compose(out, f);
    return out;
}

}  // namespace topical
