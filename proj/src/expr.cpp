#include <rbc/expr.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace rbc {

struct Expr::Node {
    Kind kind = Kind::Constant;
    cplx value{};
    int index = 0;
    int exponent = 0;
    std::string name;
    Expr lhs{std::shared_ptr<const Node>{}};
    Expr rhs{std::shared_ptr<const Node>{}};
};

namespace {

/// Integer power by repeated squaring; exact for small exponents.
cplx ipow(cplx base, int k)
{
    if (k < 0)
        return 1.0 / ipow(base, -k);
    cplx result(1.0, 0.0);
    while (k > 0) {
        if (k & 1)
            result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

} // namespace

Expr::Expr()
{
    static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
    node_ = zero;
}

Expr Expr::constant(cplx c)
{
    auto n = std::make_shared<Node>();
    n->value = c;
    return Expr(std::move(n));
}

Expr Expr::var(int k)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->index = k;
    return Expr(std::move(n));
}

Expr Expr::conj_var(int k)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::ConjVar;
    n->index = k;
    return Expr(std::move(n));
}

Expr Expr::param(std::string name, double value)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Param;
    n->name = std::move(name);
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::make(Kind kind, const Expr& a, const Expr& b, int exponent)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = a;
    n->rhs = b;
    n->exponent = exponent;
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
cplx Expr::constant_value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const std::string& Expr::name() const { return node_->name; }
double Expr::param_value() const { return node_->value.real(); }
int Expr::exponent() const { return node_->exponent; }

const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

int Expr::max_variable() const
{
    switch (kind()) {
    case Kind::Var:
    case Kind::ConjVar:
        return index() + 1;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return std::max(lhs().max_variable(), rhs().max_variable());
    case Kind::Pow:
    case Kind::Neg:
        return lhs().max_variable();
    default:
        return 0;
    }
}

bool Expr::has_conjugated_variables() const
{
    switch (kind()) {
    case Kind::ConjVar:
        return true;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return lhs().has_conjugated_variables() || rhs().has_conjugated_variables();
    case Kind::Pow:
    case Kind::Neg:
        return lhs().has_conjugated_variables();
    default:
        return false;
    }
}

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() + b.constant_value());
    return Expr::make(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() - b.constant_value());
    return Expr::make(Expr::Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() * b.constant_value());
    return Expr::make(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant() && std::abs(b.constant_value()) >= kMinDenominator)
        return Expr::constant(a.constant_value() / b.constant_value());
    return Expr::make(Expr::Kind::Div, a, b);
}

Expr operator-(const Expr& a)
{
    if (a.is_constant())
        return Expr::constant(-a.constant_value());
    return Expr::make(Expr::Kind::Neg, a, Expr());
}

Expr pow(const Expr& a, int k)
{
    if (a.is_constant() && (k >= 0 || std::abs(a.constant_value()) >= kMinDenominator))
        return Expr::constant(ipow(a.constant_value(), k));
    return Expr::make(Expr::Kind::Pow, a, Expr(), k);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
  public:
    Parser(const std::string& text, int n, const ParamMap& params)
        : text_(text), n_(n), params_(params)
    {
    }

    Expr run()
    {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw InputError("syntax error at position " + std::to_string(pos_) + ": " + what +
                         " in \"" + text_ + "\"");
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = factor();
        for (;;) {
            if (accept('*'))
                e = e * factor();
            else if (accept('/'))
                e = e / factor();
            else
                return e;
        }
    }

    Expr factor()
    {
        if (accept('-'))
            return -factor();
        if (accept('+'))
            return factor();
        Expr b = base();
        if (accept('^')) {
            skip_space();
            bool negative = false;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                negative = text_[pos_] == '-';
                ++pos_;
            }
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected integer exponent");
            const int k = std::stoi(text_.substr(start, pos_ - start));
            b = pow(b, negative ? -k : k);
        }
        return b;
    }

    Expr base()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Expr number()
    {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin)
            fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return Expr::constant(v);
    }

    Expr variable(const std::string& digits, bool conj)
    {
        const int k = std::stoi(digits);
        if (k < 1 || k > n_)
            fail("variable index " + digits + " out of range [1, " + std::to_string(n_) + "]");
        return conj ? Expr::conj_var(k - 1) : Expr::var(k - 1);
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string id = text_.substr(start, pos_ - start);

        if (id == "i")
            return Expr::constant(cplx(0.0, 1.0));
        if (id == "normsq") {
            expect('(');
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != 'z')
                fail("normsq expects the argument z");
            ++pos_;
            expect(')');
            Expr sum = Expr::var(0) * Expr::conj_var(0);
            for (int k = 1; k < n_; ++k)
                sum = sum + Expr::var(k) * Expr::conj_var(k);
            return sum;
        }
        auto all_digits = [](const std::string& s) {
            return !s.empty() &&
                   std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
        };
        if (id.size() > 2 && id.compare(0, 2, "zb") == 0 && all_digits(id.substr(2)))
            return variable(id.substr(2), true);
        if (id.size() > 1 && id[0] == 'z' && all_digits(id.substr(1)))
            return variable(id.substr(1), false);
        const auto it = params_.find(id);
        if (it == params_.end()) {
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        return Expr::param(id, it->second);
    }

    const std::string& text_;
    int n_;
    const ParamMap& params_;
    std::size_t pos_ = 0;
};

std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_constant(cplx c)
{
    const double re = c.real();
    const double im = c.imag();
    if (im == 0.0) {
        const std::string s = format_real(re);
        return std::signbit(re) ? "(" + s + ")" : s;
    }
    const std::string mag = format_real(std::abs(im));
    if (re == 0.0 && !std::signbit(re))
        return im > 0.0 ? "(" + mag + "*i)" : "(-" + mag + "*i)";
    return "(" + format_real(re) + (im > 0.0 ? "+" : "-") + mag + "*i)";
}

} // namespace

Expr parse(const std::string& text, int n, const ParamMap& params)
{
    if (n < 1)
        throw InputError("dimension must be at least 1");
    return Parser(text, n, params).run();
}

std::string to_string(const Expr& e)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Constant:
        return format_constant(e.constant_value());
    case K::Var:
        return "z" + std::to_string(e.index() + 1);
    case K::ConjVar:
        return "zb" + std::to_string(e.index() + 1);
    case K::Param:
        return e.name();
    case K::Add:
        return "(" + to_string(e.lhs()) + "+" + to_string(e.rhs()) + ")";
    case K::Sub:
        return "(" + to_string(e.lhs()) + "-" + to_string(e.rhs()) + ")";
    case K::Mul:
        return "(" + to_string(e.lhs()) + "*" + to_string(e.rhs()) + ")";
    case K::Div:
        return "(" + to_string(e.lhs()) + "/" + to_string(e.rhs()) + ")";
    case K::Pow:
        return "(" + to_string(e.lhs()) + "^" + std::to_string(e.exponent()) + ")";
    case K::Neg:
        return "(-" + to_string(e.lhs()) + ")";
    }
    return {};
}

Expr conjugate(const Expr& e)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Constant:
        return Expr::constant(std::conj(e.constant_value()));
    case K::Var:
        return Expr::conj_var(e.index());
    case K::ConjVar:
        return Expr::var(e.index());
    case K::Param:
        return e;
    case K::Add:
        return conjugate(e.lhs()) + conjugate(e.rhs());
    case K::Sub:
        return conjugate(e.lhs()) - conjugate(e.rhs());
    case K::Mul:
        return conjugate(e.lhs()) * conjugate(e.rhs());
    case K::Div:
        return conjugate(e.lhs()) / conjugate(e.rhs());
    case K::Pow:
        return pow(conjugate(e.lhs()), e.exponent());
    case K::Neg:
        return -conjugate(e.lhs());
    }
    return e;
}

namespace {

bool is_zero(const Expr& e) { return e.is_constant() && e.constant_value() == cplx(0.0, 0.0); }
bool is_one(const Expr& e) { return e.is_constant() && e.constant_value() == cplx(1.0, 0.0); }

Expr add(const Expr& a, const Expr& b)
{
    if (is_zero(a))
        return b;
    if (is_zero(b))
        return a;
    return a + b;
}

Expr sub(const Expr& a, const Expr& b)
{
    if (is_zero(b))
        return a;
    if (is_zero(a))
        return -b;
    return a - b;
}

Expr mul(const Expr& a, const Expr& b)
{
    if (is_zero(a) || is_zero(b))
        return Expr::constant(0.0);
    if (is_one(a))
        return b;
    if (is_one(b))
        return a;
    return a * b;
}

} // namespace

Expr differentiate(const Expr& e, int k, bool anti)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Constant:
    case K::Param:
        return Expr::constant(0.0);
    case K::Var:
        return Expr::constant(!anti && e.index() == k ? 1.0 : 0.0);
    case K::ConjVar:
        return Expr::constant(anti && e.index() == k ? 1.0 : 0.0);
    case K::Add:
        return add(differentiate(e.lhs(), k, anti), differentiate(e.rhs(), k, anti));
    case K::Sub:
        return sub(differentiate(e.lhs(), k, anti), differentiate(e.rhs(), k, anti));
    case K::Mul:
        return add(mul(differentiate(e.lhs(), k, anti), e.rhs()),
                   mul(e.lhs(), differentiate(e.rhs(), k, anti)));
    case K::Div: {
        const Expr da = differentiate(e.lhs(), k, anti);
        const Expr db = differentiate(e.rhs(), k, anti);
        if (is_zero(db))
            return is_zero(da) ? Expr::constant(0.0) : da / e.rhs();
        return sub(mul(da, e.rhs()), mul(e.lhs(), db)) / pow(e.rhs(), 2);
    }
    case K::Pow: {
        const int p = e.exponent();
        if (p == 0)
            return Expr::constant(0.0);
        const Expr da = differentiate(e.lhs(), k, anti);
        if (is_zero(da))
            return Expr::constant(0.0);
        const Expr lower = p == 1 ? Expr::constant(1.0) : pow(e.lhs(), p - 1);
        return mul(mul(Expr::constant(static_cast<double>(p)), lower), da);
    }
    case K::Neg: {
        const Expr da = differentiate(e.lhs(), k, anti);
        return is_zero(da) ? da : -da;
    }
    }
    return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Evaluation

Jet2 Jet2::constant(cplx c, Eigen::Index n)
{
    Jet2 j;
    j.value = c;
    j.d1_hol = Vector::Zero(n);
    j.d1_anti = Vector::Zero(n);
    j.d2_mixed = Matrix::Zero(n, n);
    return j;
}

Jet2 Jet2::conj() const
{
    Jet2 j;
    j.value = std::conj(value);
    j.d1_hol = d1_anti.conjugate();
    j.d1_anti = d1_hol.conjugate();
    j.d2_mixed = d2_mixed.adjoint();
    return j;
}

namespace {

cplx checked_denominator(cplx v, const Expr& den)
{
    if (std::abs(v) < kMinDenominator)
        throw EvaluationError("division by zero: denominator " + to_string(den) +
                              " vanishes at the evaluation point");
    return v;
}

cplx eval_rec(const Expr& e, const Point& p)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Constant:
        return e.constant_value();
    case K::Var:
        return p(e.index());
    case K::ConjVar:
        return std::conj(p(e.index()));
    case K::Param:
        return e.param_value();
    case K::Add:
        return eval_rec(e.lhs(), p) + eval_rec(e.rhs(), p);
    case K::Sub:
        return eval_rec(e.lhs(), p) - eval_rec(e.rhs(), p);
    case K::Mul:
        return eval_rec(e.lhs(), p) * eval_rec(e.rhs(), p);
    case K::Div: {
        const cplx num = eval_rec(e.lhs(), p);
        return num / checked_denominator(eval_rec(e.rhs(), p), e.rhs());
    }
    case K::Pow: {
        const cplx b = eval_rec(e.lhs(), p);
        if (e.exponent() < 0)
            checked_denominator(b, e.lhs());
        return ipow(b, e.exponent());
    }
    case K::Neg:
        return -eval_rec(e.lhs(), p);
    }
    return {};
}

Jet2 product(const Jet2& f, const Jet2& g)
{
    Jet2 h;
    h.value = f.value * g.value;
    h.d1_hol = f.d1_hol * g.value + f.value * g.d1_hol;
    h.d1_anti = f.d1_anti * g.value + f.value * g.d1_anti;
    h.d2_mixed = f.d2_mixed * g.value + f.value * g.d2_mixed +
                 f.d1_hol * g.d1_anti.transpose() + g.d1_hol * f.d1_anti.transpose();
    return h;
}

/// Chain rule for h = phi(g) given phi', phi''.
Jet2 compose(const Jet2& g, cplx value, cplx d1, cplx d2)
{
    Jet2 h;
    h.value = value;
    h.d1_hol = d1 * g.d1_hol;
    h.d1_anti = d1 * g.d1_anti;
    h.d2_mixed = d1 * g.d2_mixed;
    if (d2 != cplx(0.0, 0.0))
        h.d2_mixed += d2 * (g.d1_hol * g.d1_anti.transpose());
    return h;
}

Jet2 jet_rec(const Expr& e, const Point& p)
{
    using K = Expr::Kind;
    const Eigen::Index n = p.size();
    switch (e.kind()) {
    case K::Constant:
        return Jet2::constant(e.constant_value(), n);
    case K::Param:
        return Jet2::constant(e.param_value(), n);
    case K::Var: {
        Jet2 j = Jet2::constant(p(e.index()), n);
        j.d1_hol(e.index()) = 1.0;
        return j;
    }
    case K::ConjVar: {
        Jet2 j = Jet2::constant(std::conj(p(e.index())), n);
        j.d1_anti(e.index()) = 1.0;
        return j;
    }
    case K::Add:
    case K::Sub: {
        Jet2 a = jet_rec(e.lhs(), p);
        const Jet2 b = jet_rec(e.rhs(), p);
        const double s = e.kind() == K::Add ? 1.0 : -1.0;
        a.value += s * b.value;
        a.d1_hol += s * b.d1_hol;
        a.d1_anti += s * b.d1_anti;
        a.d2_mixed += s * b.d2_mixed;
        return a;
    }
    case K::Mul:
        return product(jet_rec(e.lhs(), p), jet_rec(e.rhs(), p));
    case K::Div: {
        const Jet2 a = jet_rec(e.lhs(), p);
        const Jet2 b = jet_rec(e.rhs(), p);
        const cplx v = checked_denominator(b.value, e.rhs());
        const cplx r = 1.0 / v;
        return product(a, compose(b, r, -r * r, 2.0 * r * r * r));
    }
    case K::Pow: {
        const Jet2 b = jet_rec(e.lhs(), p);
        const int k = e.exponent();
        if (k == 0)
            return Jet2::constant(1.0, n);
        if (k < 0)
            checked_denominator(b.value, e.lhs());
        const double kd = k;
        const cplx d1 = kd * ipow(b.value, k - 1);
        const cplx d2 = k == 1 ? cplx(0.0, 0.0) : kd * (kd - 1.0) * ipow(b.value, k - 2);
        return compose(b, ipow(b.value, k), d1, d2);
    }
    case K::Neg: {
        Jet2 a = jet_rec(e.lhs(), p);
        a.value = -a.value;
        a.d1_hol = -a.d1_hol;
        a.d1_anti = -a.d1_anti;
        a.d2_mixed = -a.d2_mixed;
        return a;
    }
    }
    return Jet2::constant(0.0, n);
}

void check_point(const Expr& e, const Point& p)
{
    if (e.max_variable() > p.size())
        throw InputError("expression references z" + std::to_string(e.max_variable()) +
                         " but the point has dimension " + std::to_string(p.size()));
}

} // namespace

cplx evaluate(const Expr& e, const Point& p)
{
    check_point(e, p);
    return eval_rec(e, p);
}

Jet2 jet2(const Expr& e, const Point& p)
{
    check_point(e, p);
    return jet_rec(e, p);
}

namespace {

Point shifted(const Point& p, Eigen::Index a, double h)
{
    Point q = p;
    const Eigen::Index n = p.size();
    if (a < n)
        q(a) += cplx(h, 0.0);
    else
        q(a - n) += cplx(0.0, h);
    return q;
}

void check_step(double step)
{
    if (!(step > 0.0 && step <= 0.1))
        throw InputError("finite-difference step must lie in (0, 0.1]");
}

} // namespace

std::pair<Vector, Vector> fd_gradient(const ChartFunction& f, const Point& p, double step)
{
    check_step(step);
    const Eigen::Index n = p.size();
    Vector hol(n), anti(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx dx = (f(shifted(p, k, step)) - f(shifted(p, k, -step))) / (2.0 * step);
        const cplx dy = (f(shifted(p, n + k, step)) - f(shifted(p, n + k, -step))) / (2.0 * step);
        const cplx I(0.0, 1.0);
        hol(k) = 0.5 * (dx - I * dy);
        anti(k) = 0.5 * (dx + I * dy);
    }
    return {hol, anti};
}

Matrix fd_mixed_hessian(const ChartFunction& f, const Point& p, double step)
{
    check_step(step);
    const Eigen::Index n = p.size();
    const Eigen::Index m = 2 * n;
    const cplx f0 = f(p);
    // Real Hessian in (x_1..x_n, y_1..y_n).
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> hess(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        hess(a, a) = (f(shifted(p, a, step)) - 2.0 * f0 + f(shifted(p, a, -step))) / (step * step);
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const cplx pp = f(shifted(shifted(p, a, step), b, step));
            const cplx pm = f(shifted(shifted(p, a, step), b, -step));
            const cplx mp = f(shifted(shifted(p, a, -step), b, step));
            const cplx mm = f(shifted(shifted(p, a, -step), b, -step));
            hess(a, b) = hess(b, a) = (pp - pm - mp + mm) / (4.0 * step * step);
        }
    }
    const cplx I(0.0, 1.0);
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = 0.25 * (hess(i, j) + hess(n + i, n + j) + I * hess(i, n + j) -
                                I * hess(n + i, j));
    return out;
}

Jet2 fd_jet2(const Expr& e, const Point& p, double step)
{
    check_step(step);
    check_point(e, p);
    const ChartFunction f = [&e](const Point& q) { return eval_rec(e, q); };
    Jet2 j;
    j.value = f(p);
    auto [hol, anti] = fd_gradient(f, p, step);
    j.d1_hol = std::move(hol);
    j.d1_anti = std::move(anti);
    j.d2_mixed = fd_mixed_hessian(f, p, step);
    return j;
}

} // namespace rbc
