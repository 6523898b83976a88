#pragma once
// Symbolic scalar expressions over named real coordinates and integer
// parameters.
//
// Expressions are immutable values sharing structure through shared_ptr;
// every operation is pure, so concurrent reads of the same tree are safe.
// There is deliberately no general simplifier: beyond constant folding,
// expressions keep the shape they were built with, and identities are
// decided by seeded sampling (see sampling.hpp), never by canonical forms.
// Complex phases never appear; consumers express a factor e^{i a} through
// explicit (cos, sin) angle shifts.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cbu {

/** Exact fraction with normalized sign (den > 0) and gcd-reduced terms. */
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);

    Rational operator-() const { return Rational(-num, den); }
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_integer() const { return den == 1; }
    double value() const { return double(num) / double(den); }
    std::string to_text() const;
};

/** Ordered (name, value) list used both for chart points and parameter sets. */
class Binding {
  public:
    Binding() = default;
    Binding(std::initializer_list<std::pair<std::string, double>> init);
    void set(const std::string& name, double value);
    const double* find(const std::string& name) const;
    bool empty() const { return entries_.empty(); }
    const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<std::string, double>> entries_;
};

/** Value of a subexpression together with the magnitude that flowed through
    it; scale >= |value| always, and the gap measures cancellation. */
struct EvalScaled {
    double value = 0;
    double scale = 0;
};

enum class ExprKind {
    rational,
    real,
    coordinate,
    parameter,
    sum,
    product,
    power,
    negate,
    sine,
    cosine,
    piecewise
};

class Expr {
  public:
    Expr();  // rational 0

    static Expr rational(long long num, long long den = 1);
    static Expr rational(const Rational& q);
    static Expr real(double v);
    static Expr coordinate(std::string name);
    static Expr parameter(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    /** Exponent denominator restricted to 1 or 2. */
    static Expr pow(Expr base, Rational exponent);
    static Expr sqrt(Expr arg) { return pow(std::move(arg), Rational(1, 2)); }
    static Expr sin(Expr arg);
    static Expr cos(Expr arg);
    /** Selects pieces[i] where breaks[i-1] <= selector < breaks[i]; breaks
        strictly increasing, pieces.size() == breaks.size() + 1.  Derivatives
        are taken piece-local; joint smoothness is the caller's obligation
        and is certified numerically where it matters. */
    static Expr piecewise(Expr selector, std::vector<double> breaks, std::vector<Expr> pieces);

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

    ExprKind kind() const;
    bool is_zero_literal() const;
    bool is_one_literal() const;

    /** Exact partial derivative with respect to a coordinate symbol. */
    Expr derivative(const std::string& coord) const;

    /** Simultaneous replacement of coordinate symbols; parameters are left
        alone and only ever bound at evaluation time. */
    Expr substitute(const std::map<std::string, Expr>& replacements) const;

    /** Throws std::invalid_argument naming the symbol if one is unbound and
        std::domain_error if the value is not finite (pole, sqrt of a
        negative, ...). */
    double eval(const Binding& point, const Binding& params = {}) const;
    EvalScaled eval_scaled(const Binding& point, const Binding& params = {}) const;

    void collect_symbols(std::set<std::string>& coords, std::set<std::string>& params) const;

    /** Deterministic parenthesized prefix text; parse() inverts it exactly
        (grammar in docs/expr-format.md). */
    std::string to_text() const;
    static Expr parse(std::string_view text);

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
    friend struct ExprAccess;
};

}  // namespace cbu
