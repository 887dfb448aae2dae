#pragma once

// Expression engine over chart variables z_k and their conjugates, treated as
// independent symbols (Wirtinger calculus).

#include <rbc/numerics.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace rbc {

using ParamMap = std::map<std::string, double>;

class Expr {
  public:
    enum class Kind { Constant, Var, ConjVar, Param, Add, Sub, Mul, Div, Pow, Neg };

    Expr(); // the constant 0
    static Expr constant(cplx c);
    static Expr var(int k);      // z_{k+1}, zero-based index
    static Expr conj_var(int k); // zb_{k+1}
    static Expr param(std::string name, double value);

    Kind kind() const;
    bool is_constant() const { return kind() == Kind::Constant; }
    cplx constant_value() const;
    int index() const;
    const std::string& name() const;
    double param_value() const;
    int exponent() const;
    const Expr& lhs() const;
    const Expr& rhs() const;

    /// Largest variable index + 1 referenced by the tree (0 if none).
    int max_variable() const;
    bool has_conjugated_variables() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, int k);

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(Kind kind, const Expr& a, const Expr& b, int exponent = 0);
    std::shared_ptr<const Node> node_;
};

/// Parses the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('-'|'+') factor | base ('^' ['-'] integer)?
///   base   := number | 'i' | 'z'k | 'zb'k | param | 'normsq(z)' | '(' expr ')'
/// Operations on two constants are folded.
Expr parse(const std::string& text, int n, const ParamMap& params = {});

/// Fully parenthesized text that parses back to the same tree.
std::string to_string(const Expr& e);

/// Complex conjugate: swaps z and zb, conjugates constants.
Expr conjugate(const Expr& e);

/// Symbolic derivative with respect to z_k (or zb_k when anti is set).
Expr differentiate(const Expr& e, int k, bool anti = false);

/// Value, first Wirtinger derivatives and mixed second derivatives at a point.
struct Jet2 {
    cplx value{};
    Vector d1_hol;   // d/dz_i
    Vector d1_anti;  // d/dzb_j
    Matrix d2_mixed; // d^2/dz_i dzb_j

    static Jet2 constant(cplx c, Eigen::Index n);
    /// Jet of the conjugate function.
    Jet2 conj() const;
};

/// Denominators with modulus below this are treated as zero.
inline constexpr double kMinDenominator = 1e-14;

cplx evaluate(const Expr& e, const Point& p);
Jet2 jet2(const Expr& e, const Point& p);

/// Central-difference jet in the real coordinates (x_k, y_k).
Jet2 fd_jet2(const Expr& e, const Point& p, double step);

using ChartFunction = std::function<cplx(const Point&)>;

/// Central-difference d/dz_i and d/dzb_j of an arbitrary chart function.
std::pair<Vector, Vector> fd_gradient(const ChartFunction& f, const Point& p, double step);

/// Central-difference d^2/dz_i dzb_j of an arbitrary chart function.
Matrix fd_mixed_hessian(const ChartFunction& f, const Point& p, double step);

} // namespace rbc
