#include "cbu/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace cbu {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long long n, long long d) {
    if (d == 0)
        throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0)
        throw std::invalid_argument("rational division by zero");
    return Rational(num * o.den, den * o.num);
}

std::string Rational::to_text() const {
    std::string s = std::to_string(num);
    if (den != 1) {
        s += '/';
        s += std::to_string(den);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Binding

Binding::Binding(std::initializer_list<std::pair<std::string, double>> init) {
    for (const auto& kv : init) set(kv.first, kv.second);
}

void Binding::set(const std::string& name, double value) {
    for (auto& kv : entries_) {
        if (kv.first == name) {
            kv.second = value;
            return;
        }
    }
    entries_.emplace_back(name, value);
}

const double* Binding::find(const std::string& name) const {
    for (const auto& kv : entries_)
        if (kv.first == name) return &kv.second;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Expr node

struct Expr::Node {
    ExprKind kind;
    Rational rat;                // rational value, or power exponent
    double real = 0;             // real literal
    std::string name;            // coordinate / parameter symbol
    std::vector<Expr> kids;      // operands; piecewise: selector then pieces
    std::vector<double> breaks;  // piecewise breakpoints, strictly increasing
};

struct ExprAccess {
    using Node = Expr::Node;
    static const Node& node(const Expr& e) { return *e.node_; }
    static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
};

namespace {

using Node = ExprAccess::Node;

const Node& N(const Expr& e) { return ExprAccess::node(e); }
Expr wrap(Node&& n) { return ExprAccess::wrap(std::make_shared<const Node>(std::move(n))); }

bool is_rat(const Expr& e) { return N(e).kind == ExprKind::rational; }
bool is_rat_value(const Expr& e, long long num, long long den = 1) {
    return is_rat(e) && N(e).rat == Rational(num, den);
}

}  // namespace

Expr::Expr()
    : node_(std::make_shared<const Node>(Node{ExprKind::rational, Rational(0), 0, {}, {}, {}})) {}

Expr Expr::rational(long long num, long long den) { return rational(Rational(num, den)); }

Expr Expr::rational(const Rational& q) {
    return wrap(Node{ExprKind::rational, q, 0, {}, {}, {}});
}

Expr Expr::real(double v) { return wrap(Node{ExprKind::real, Rational(0), v, {}, {}, {}}); }

Expr Expr::coordinate(std::string name) {
    return wrap(Node{ExprKind::coordinate, Rational(0), 0, std::move(name), {}, {}});
}

Expr Expr::parameter(std::string name) {
    return wrap(Node{ExprKind::parameter, Rational(0), 0, std::move(name), {}, {}});
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> kids;
    Rational acc(0);
    bool have_acc = false;
    for (auto& t : terms) {
        if (N(t).kind == ExprKind::sum) {
            for (const auto& k : N(t).kids) {
                if (is_rat(k)) {
                    acc = acc + N(k).rat;
                    have_acc = true;
                } else {
                    kids.push_back(k);
                }
            }
        } else if (is_rat(t)) {
            acc = acc + N(t).rat;
            have_acc = true;
        } else {
            kids.push_back(std::move(t));
        }
    }
    if (have_acc && acc.num != 0) kids.push_back(Expr::rational(acc));
    if (kids.empty()) return Expr::rational(0);
    if (kids.size() == 1) return kids.front();
    return wrap(Node{ExprKind::sum, Rational(0), 0, {}, std::move(kids), {}});
}

Expr Expr::product(std::vector<Expr> factors) {
    std::vector<Expr> kids;
    Rational acc(1);
    bool have_acc = false;
    for (auto& f : factors) {
        if (N(f).kind == ExprKind::product) {
            for (const auto& k : N(f).kids) {
                if (is_rat(k)) {
                    acc = acc * N(k).rat;
                    have_acc = true;
                } else {
                    kids.push_back(k);
                }
            }
        } else if (is_rat(f)) {
            acc = acc * N(f).rat;
            have_acc = true;
        } else {
            kids.push_back(std::move(f));
        }
    }
    if (acc.num == 0) return Expr::rational(0);
    if (have_acc && !(acc == Rational(1))) kids.insert(kids.begin(), Expr::rational(acc));
    if (kids.empty()) return Expr::rational(1);
    if (kids.size() == 1) return kids.front();
    return wrap(Node{ExprKind::product, Rational(0), 0, {}, std::move(kids), {}});
}

Expr Expr::pow(Expr base, Rational exponent) {
    if (exponent.den != 1 && exponent.den != 2)
        throw std::invalid_argument("power exponent denominator must be 1 or 2");
    if (exponent.num == 0) return Expr::rational(1);
    if (exponent == Rational(1)) return base;
    if (is_rat(base) && exponent.is_integer()) {
        // Fold small integer powers of exact constants.
        long long p = exponent.num;
        Rational b = N(base).rat;
        if (b.num == 0 && p < 0)
            throw std::domain_error("zero raised to a negative power");
        if (p >= -4 && p <= 4 && std::abs(b.num) <= 100000 && b.den <= 100000) {
            Rational r(1);
            Rational m = p > 0 ? b : Rational(b.den, b.num);
            for (long long i = 0; i < std::abs(p); ++i) r = r * m;
            return Expr::rational(r);
        }
    }
    return wrap(Node{ExprKind::power, exponent, 0, {}, {std::move(base)}, {}});
}

Expr Expr::sin(Expr arg) {
    if (is_rat_value(arg, 0)) return Expr::rational(0);
    return wrap(Node{ExprKind::sine, Rational(0), 0, {}, {std::move(arg)}, {}});
}

Expr Expr::cos(Expr arg) {
    if (is_rat_value(arg, 0)) return Expr::rational(1);
    return wrap(Node{ExprKind::cosine, Rational(0), 0, {}, {std::move(arg)}, {}});
}

Expr Expr::piecewise(Expr selector, std::vector<double> breaks, std::vector<Expr> pieces) {
    if (pieces.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise needs breaks.size()+1 pieces");
    if (breaks.empty()) return pieces.front();
    for (size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i - 1] < breaks[i]))
            throw std::invalid_argument("piecewise breakpoints must be strictly increasing");
    std::vector<Expr> kids;
    kids.reserve(pieces.size() + 1);
    kids.push_back(std::move(selector));
    for (auto& p : pieces) kids.push_back(std::move(p));
    return wrap(Node{ExprKind::piecewise, Rational(0), 0, {}, std::move(kids), std::move(breaks)});
}

Expr Expr::operator-() const {
    const Node& n = *node_;
    if (n.kind == ExprKind::rational) return Expr::rational(-n.rat);
    if (n.kind == ExprKind::real) return Expr::real(-n.real);
    if (n.kind == ExprKind::negate) return n.kids.front();
    return wrap(Node{ExprKind::negate, Rational(0), 0, {}, {*this}, {}});
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    if (is_rat(b)) {
        const Rational& q = N(b).rat;
        if (q.num == 0) throw std::invalid_argument("division by literal zero");
        return Expr::product({a, Expr::rational(Rational(q.den, q.num))});
    }
    return Expr::product({a, Expr::pow(b, Rational(-1))});
}

ExprKind Expr::kind() const { return node_->kind; }

bool Expr::is_zero_literal() const { return is_rat_value(*this, 0); }
bool Expr::is_one_literal() const { return is_rat_value(*this, 1); }

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::derivative(const std::string& coord) const {
    const Node& n = *node_;
    switch (n.kind) {
        case ExprKind::rational:
        case ExprKind::real:
        case ExprKind::parameter:
            return Expr::rational(0);
        case ExprKind::coordinate:
            return Expr::rational(n.name == coord ? 1 : 0);
        case ExprKind::sum: {
            std::vector<Expr> terms;
            terms.reserve(n.kids.size());
            for (const auto& k : n.kids) terms.push_back(k.derivative(coord));
            return Expr::sum(std::move(terms));
        }
        case ExprKind::product: {
            std::vector<Expr> terms;
            for (size_t i = 0; i < n.kids.size(); ++i) {
                std::vector<Expr> factors = n.kids;
                factors[i] = n.kids[i].derivative(coord);
                terms.push_back(Expr::product(std::move(factors)));
            }
            return Expr::sum(std::move(terms));
        }
        case ExprKind::power: {
            const Expr& base = n.kids.front();
            Expr db = base.derivative(coord);
            // d(b^q) = q b^{q-1} db; q - 1 keeps the denominator in {1, 2}.
            return Expr::product({Expr::rational(n.rat),
                                  Expr::pow(base, n.rat - Rational(1)), std::move(db)});
        }
        case ExprKind::negate:
            return -n.kids.front().derivative(coord);
        case ExprKind::sine:
            return Expr::product({Expr::cos(n.kids.front()), n.kids.front().derivative(coord)});
        case ExprKind::cosine:
            return -Expr::product({Expr::sin(n.kids.front()), n.kids.front().derivative(coord)});
        case ExprKind::piecewise: {
            // Piece-local: valid away from the breakpoints, whose smoothness
            // is certified separately by the profile builders.
            std::vector<Expr> pieces;
            for (size_t i = 1; i < n.kids.size(); ++i)
                pieces.push_back(n.kids[i].derivative(coord));
            return Expr::piecewise(n.kids.front(), n.breaks, std::move(pieces));
        }
    }
    throw std::logic_error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Substitution

Expr Expr::substitute(const std::map<std::string, Expr>& replacements) const {
    const Node& n = *node_;
    switch (n.kind) {
        case ExprKind::rational:
        case ExprKind::real:
        case ExprKind::parameter:
            return *this;
        case ExprKind::coordinate: {
            auto it = replacements.find(n.name);
            return it == replacements.end() ? *this : it->second;
        }
        default: {
            std::vector<Expr> kids;
            kids.reserve(n.kids.size());
            bool changed = false;
            for (const auto& k : n.kids) {
                kids.push_back(k.substitute(replacements));
                changed = changed || &N(kids.back()) != &N(k);
            }
            if (!changed) return *this;
            switch (n.kind) {
                case ExprKind::sum:
                    return Expr::sum(std::move(kids));
                case ExprKind::product:
                    return Expr::product(std::move(kids));
                case ExprKind::power:
                    return Expr::pow(std::move(kids.front()), n.rat);
                case ExprKind::negate:
                    return -kids.front();
                case ExprKind::sine:
                    return Expr::sin(std::move(kids.front()));
                case ExprKind::cosine:
                    return Expr::cos(std::move(kids.front()));
                case ExprKind::piecewise: {
                    std::vector<Expr> pieces(kids.begin() + 1, kids.end());
                    return Expr::piecewise(std::move(kids.front()), n.breaks, std::move(pieces));
                }
                default:
                    throw std::logic_error("unreachable expression kind");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw std::domain_error(std::string("evaluation left the finite domain in ") + what);
}

}  // namespace

EvalScaled Expr::eval_scaled(const Binding& point, const Binding& params) const {
    const Node& n = *node_;
    switch (n.kind) {
        case ExprKind::rational: {
            double v = n.rat.value();
            return {v, std::fabs(v)};
        }
        case ExprKind::real:
            return {n.real, std::fabs(n.real)};
        case ExprKind::coordinate: {
            const double* v = point.find(n.name);
            if (!v) throw std::invalid_argument("unbound coordinate symbol: " + n.name);
            return {*v, std::fabs(*v)};
        }
        case ExprKind::parameter: {
            const double* v = params.find(n.name);
            if (!v) throw std::invalid_argument("unbound parameter symbol: " + n.name);
            return {*v, std::fabs(*v)};
        }
        case ExprKind::sum: {
            double v = 0, s = 0;
            for (const auto& k : n.kids) {
                EvalScaled e = k.eval_scaled(point, params);
                v += e.value;
                s += e.scale;
            }
            return {v, s};
        }
        case ExprKind::product: {
            double v = 1, s = 1;
            for (const auto& k : n.kids) {
                EvalScaled e = k.eval_scaled(point, params);
                v *= e.value;
                s *= e.scale;
            }
            require_finite(v, "product");
            return {v, s};
        }
        case ExprKind::power: {
            EvalScaled b = n.kids.front().eval_scaled(point, params);
            double q = n.rat.value();
            double v;
            if (n.rat.den == 1) {
                v = std::pow(b.value, double(n.rat.num));
            } else {
                if (b.value < 0)
                    throw std::domain_error("square root of a negative value");
                v = std::pow(b.value, q);
            }
            require_finite(v, "power");
            double s = q > 0 ? std::pow(b.scale, q) : std::fabs(v);
            if (!std::isfinite(s)) s = std::fabs(v);
            return {v, std::max(s, std::fabs(v))};
        }
        case ExprKind::negate: {
            EvalScaled e = n.kids.front().eval_scaled(point, params);
            return {-e.value, e.scale};
        }
        case ExprKind::sine: {
            EvalScaled e = n.kids.front().eval_scaled(point, params);
            return {std::sin(e.value), 1.0};
        }
        case ExprKind::cosine: {
            EvalScaled e = n.kids.front().eval_scaled(point, params);
            return {std::cos(e.value), 1.0};
        }
        case ExprKind::piecewise: {
            double sel = n.kids.front().eval_scaled(point, params).value;
            size_t idx = 0;
            while (idx < n.breaks.size() && sel >= n.breaks[idx]) ++idx;
            return n.kids[idx + 1].eval_scaled(point, params);
        }
    }
    throw std::logic_error("unreachable expression kind");
}

double Expr::eval(const Binding& point, const Binding& params) const {
    return eval_scaled(point, params).value;
}

void Expr::collect_symbols(std::set<std::string>& coords, std::set<std::string>& params) const {
    const Node& n = *node_;
    if (n.kind == ExprKind::coordinate) coords.insert(n.name);
    if (n.kind == ExprKind::parameter) params.insert(n.name);
    for (const auto& k : n.kids) k.collect_symbols(coords, params);
}

// ---------------------------------------------------------------------------
// Serialization: deterministic parenthesized prefix text

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!std::strpbrk(buf, ".eE") && !std::strchr(buf, 'n') && !std::strchr(buf, 'i'))
        std::strcat(buf, ".0");
    return buf;
}

void to_text_rec(const Expr& e, std::string& out) {
    const Node& n = N(e);
    switch (n.kind) {
        case ExprKind::rational:
            out += n.rat.to_text();
            return;
        case ExprKind::real:
            out += format_double(n.real);
            return;
        case ExprKind::coordinate:
            out += n.name;
            return;
        case ExprKind::parameter:
            out += '$';
            out += n.name;
            return;
        case ExprKind::sum:
        case ExprKind::product: {
            out += n.kind == ExprKind::sum ? "(+" : "(*";
            for (const auto& k : n.kids) {
                out += ' ';
                to_text_rec(k, out);
            }
            out += ')';
            return;
        }
        case ExprKind::power:
            out += "(^ ";
            to_text_rec(n.kids.front(), out);
            out += ' ';
            out += n.rat.to_text();
            out += ')';
            return;
        case ExprKind::negate:
        case ExprKind::sine:
        case ExprKind::cosine: {
            out += n.kind == ExprKind::negate ? "(neg "
                 : n.kind == ExprKind::sine   ? "(sin "
                                              : "(cos ";
            to_text_rec(n.kids.front(), out);
            out += ')';
            return;
        }
        case ExprKind::piecewise: {
            out += "(pw ";
            to_text_rec(n.kids.front(), out);
            out += ' ';
            out += std::to_string(n.breaks.size());
            for (size_t i = 0; i < n.breaks.size(); ++i) {
                out += ' ';
                out += format_double(n.breaks[i]);
                out += ' ';
                to_text_rec(n.kids[i + 1], out);
            }
            out += ' ';
            to_text_rec(n.kids.back(), out);
            out += ')';
            return;
        }
    }
}

struct Parser {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(pos) +
                                    ": " + why);
    }

    std::string_view token() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text[pos] == '(' || text[pos] == ')') return text.substr(pos++, 1);
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        return text.substr(start, pos - start);
    }

    std::string_view peek() {
        size_t save = pos;
        std::string_view t = token();
        pos = save;
        return t;
    }

    static bool looks_numeric(std::string_view t) {
        char c = t.front();
        return std::isdigit(static_cast<unsigned char>(c)) ||
               ((c == '-' || c == '+') && t.size() > 1 &&
                (std::isdigit(static_cast<unsigned char>(t[1])) || t[1] == '.')) ||
               c == '.';
    }

    Rational parse_rational(std::string_view t) {
        size_t slash = t.find('/');
        auto to_ll = [&](std::string_view s) {
            return std::stoll(std::string(s));
        };
        if (slash == std::string_view::npos) return Rational(to_ll(t));
        return Rational(to_ll(t.substr(0, slash)), to_ll(t.substr(slash + 1)));
    }

    Expr parse_atom(std::string_view t) {
        if (looks_numeric(t)) {
            if (t.find('/') != std::string_view::npos) return Expr::rational(parse_rational(t));
            if (t.find_first_of(".eE") != std::string_view::npos)
                return Expr::real(std::stod(std::string(t)));
            return Expr::rational(parse_rational(t));
        }
        if (t.front() == '$') return Expr::parameter(std::string(t.substr(1)));
        return Expr::coordinate(std::string(t));
    }

    Expr parse_expr() {
        std::string_view t = token();
        if (t != "(") return parse_atom(t);
        std::string_view head = token();
        if (head == "+" || head == "*") {
            std::vector<Expr> kids;
            while (peek() != ")") kids.push_back(parse_expr());
            token();
            return head == "+" ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
        }
        if (head == "^") {
            Expr base = parse_expr();
            Rational q = parse_rational(token());
            if (token() != ")") fail("expected ) after power");
            return Expr::pow(std::move(base), q);
        }
        if (head == "neg" || head == "sin" || head == "cos" || head == "sqrt") {
            Expr arg = parse_expr();
            if (token() != ")") fail("expected ) after unary operator");
            if (head == "neg") return -arg;
            if (head == "sin") return Expr::sin(std::move(arg));
            if (head == "cos") return Expr::cos(std::move(arg));
            return Expr::sqrt(std::move(arg));
        }
        if (head == "pw") {
            Expr sel = parse_expr();
            long long count = std::stoll(std::string(token()));
            std::vector<double> breaks;
            std::vector<Expr> pieces;
            for (long long i = 0; i < count; ++i) {
                breaks.push_back(std::stod(std::string(token())));
                pieces.push_back(parse_expr());
            }
            pieces.push_back(parse_expr());
            if (token() != ")") fail("expected ) after piecewise");
            return Expr::piecewise(std::move(sel), std::move(breaks), std::move(pieces));
        }
        fail("unknown operator '" + std::string(head) + "'");
    }
};

}  // namespace

std::string Expr::to_text() const {
    std::string out;
    to_text_rec(*this, out);
    return out;
}

Expr Expr::parse(std::string_view text) {
    Parser p{text};
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw std::invalid_argument("trailing characters after expression");
    return e;
}

}  // namespace cbu
