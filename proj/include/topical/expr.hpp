#pragma once

// Expression model for homogeneous, monotone functions on the positive cone,
// viewed additively as topical functions on R^n. The grammar (Var, Scale,
// Max, Min, Lin, Har, Geo) is closed under degree-1 homogeneity and
// monotonicity, so every parsed function is topical by construction.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace topical {

using Vec = std::vector<double>;

enum class NodeKind { Var, Scale, Max, Min, Lin, Har, Geo };

const char* node_kind_name(NodeKind k);

// One AST node. Meaning in multiplicative coordinates y > 0:
//   Var k        -> y_k
//   Scale(c, e)  -> c * e(y)
//   Max/Min      -> componentwise max / min of children
//   Lin(w, e)    -> sum_i w_i * e_i(y)
//   Har(w, e)    -> (sum_i w_i / e_i(y))^-1
//   Geo(w, e)    -> prod_i e_i(y)^{w_i},  sum w_i = 1
// Evaluation happens in additive (log) coordinates; see eval_additive.
struct ExprNode {
    NodeKind kind = NodeKind::Var;
    int var = 0;                     // Var: 1-based coordinate index
    double coeff = 1.0;              // Scale: multiplicative coefficient, > 0
    std::vector<double> weights;     // Lin/Har/Geo weights, > 0
    std::vector<ExprNode> children;  // Scale: exactly 1; others: >= 1

    static ExprNode make_var(int index);
    static ExprNode make_scale(double coeff, ExprNode child);
    static ExprNode make_nary(NodeKind kind, std::vector<ExprNode> children);
    static ExprNode make_weighted(NodeKind kind, std::vector<double> weights,
                                  std::vector<ExprNode> children);
};

// An n-vector of expressions; denotes a topical function R^n -> R^n.
struct TopicalFn {
    int dim = 0;
    std::vector<ExprNode> coords;  // size == dim
    std::string name;
    std::string source;
};

// Raised on malformed DSL text; carries a 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string msg, int line, int col);
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_;
    int col_;
};

// Parses the .tfn DSL ("dim <n>" header, then "<i>: <expr>" lines) and
// validates the structural invariants (positive finite constants, Geo
// weights summing to 1 within 1e-12, variable indexes in range).
TopicalFn parse(const std::string& text, const std::string& name = "");
TopicalFn parse_file(const std::string& path);

// Re-checks the invariants on an already-built function (used after
// programmatic construction). Throws std::invalid_argument on violation.
void validate(const TopicalFn& f);

// Canonical DSL text; parse(pretty_print(f)) is structurally identical to f.
std::string pretty_print(const TopicalFn& f);
std::string pretty_print(const ExprNode& e);

bool equal_structure(const ExprNode& a, const ExprNode& b);
bool equal_structure(const TopicalFn& a, const TopicalFn& b);

// E(f)(x) = log(f(exp(x))), computed directly in log coordinates with
// max-shifted log-sum-exp. Safe for |x_i| well beyond 700.
Vec eval_additive(const TopicalFn& f, const Vec& x);
double eval_additive_coord(const TopicalFn& f, int i, const Vec& x);  // i 1-based

// Multiplicative view; y must be strictly positive.
Vec eval_multiplicative(const TopicalFn& f, const Vec& y);

// The duality functional f -> f^-, f^-(y) = f(y^-1)^-1 (additively
// x -> -f(-x)): Max<->Min, Lin<->Har (same weights), Scale inverts its
// coefficient, Var and Geo are fixed.
TopicalFn dual(const TopicalFn& f);
ExprNode dual(const ExprNode& e);

// Sufficient syntactic convexity test: true when no Min and no Har node
// occurs anywhere (Max, Lin, Geo, Scale are convex in log coordinates).
// A false result carries no claim.
bool is_convex_syntactic(const TopicalFn& f);

// Structural composition: coordinate i of the result is f_i with every
// Var j replaced by g_j. The grammar is closed under composition.
TopicalFn compose(const TopicalFn& f, const TopicalFn& g);
TopicalFn iterate_fn(const TopicalFn& f, int k);  // f composed with itself k times

// log / exp component maps between the positive cone and R^n.
Vec log_vec(const Vec& y);  // throws std::domain_error on nonpositive input
Vec exp_vec(const Vec& x);

}  // namespace topical
