#include "cbu/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbu {

namespace {

/** Merge two strictly increasing tuples; returns false on a shared index.
    sign collects (-1)^inversions of the concatenation-sort. */
bool merge_indices(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out,
                   int& sign) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a.
            inversions += int(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    sign = (inversions % 2 == 0) ? 1 : -1;
    return true;
}

double wrapped_difference(double x, double period) {
    double d = std::remainder(x, period);
    return d;
}

}  // namespace

int Chart::index_of(const std::string& name) const {
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == name) return int(i);
    return -1;
}

ChartPtr make_chart(std::vector<std::string> coords, DomainBox box) {
    if (coords.size() != box.size())
        throw std::invalid_argument("chart coordinates and sampling box disagree");
    for (const auto& c : coords)
        if (!box.has(c)) throw std::invalid_argument("sampling box misses coordinate " + c);
    auto chart = std::make_shared<Chart>();
    chart->coords = std::move(coords);
    chart->box = std::move(box);
    return chart;
}

ChartPtr restrict_chart(const ChartPtr& chart, const std::string& coord, double lo, double hi) {
    return make_chart(chart->coords, chart->box.restricted(coord, lo, hi));
}

DiffForm rechart(const DiffForm& omega, const ChartPtr& chart) {
    if (!chart->same_coords(*omega.chart()))
        throw std::invalid_argument("rechart needs identical coordinates");
    DiffForm out(chart, omega.degree());
    for (const auto& [idx, coeff] : omega.terms()) out.set_coefficient(idx, coeff);
    return out;
}

// ---------------------------------------------------------------------------
// DiffForm

DiffForm::DiffForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (!chart_) throw std::invalid_argument("form needs a chart");
    if (degree < 0) throw std::invalid_argument("negative form degree");
}

DiffForm DiffForm::scalar(ChartPtr chart, Expr value) {
    DiffForm f(std::move(chart), 0);
    f.set_coefficient({}, std::move(value));
    return f;
}

DiffForm DiffForm::one_form(ChartPtr chart, std::vector<Expr> coefficients) {
    if (int(coefficients.size()) != chart->dim())
        throw std::invalid_argument("one-form needs one coefficient per coordinate");
    DiffForm f(chart, 1);
    for (size_t i = 0; i < coefficients.size(); ++i)
        f.set_coefficient({int(i)}, std::move(coefficients[i]));
    return f;
}

DiffForm DiffForm::d_coordinate(ChartPtr chart, const std::string& name) {
    int idx = chart->index_of(name);
    if (idx < 0) throw std::invalid_argument("no coordinate " + name + " in chart");
    DiffForm f(std::move(chart), 1);
    f.set_coefficient({idx}, Expr::rational(1));
    return f;
}

Expr DiffForm::coefficient(const std::vector<int>& indices) const {
    auto it = terms_.find(indices);
    return it == terms_.end() ? Expr::rational(0) : it->second;
}

void DiffForm::set_coefficient(std::vector<int> indices, Expr value) {
    if (int(indices.size()) != degree_)
        throw std::invalid_argument("index tuple length disagrees with form degree");
    for (size_t i = 0; i + 1 < indices.size(); ++i)
        if (!(indices[i] < indices[i + 1]))
            throw std::invalid_argument("form indices must be strictly increasing");
    for (int idx : indices)
        if (idx < 0 || idx >= chart_->dim())
            throw std::invalid_argument("form index outside the chart");
    if (value.is_zero_literal())
        terms_.erase(indices);
    else
        terms_[std::move(indices)] = std::move(value);
}

DiffForm DiffForm::operator+(const DiffForm& other) const {
    if (!chart_->same_coords(*other.chart_) || degree_ != other.degree_)
        throw std::invalid_argument("form addition needs matching chart and degree");
    DiffForm out = *this;
    for (const auto& [idx, coeff] : other.terms_)
        out.set_coefficient(idx, out.coefficient(idx) + coeff);
    return out;
}

DiffForm DiffForm::operator-(const DiffForm& other) const { return *this + (-other); }

DiffForm DiffForm::operator-() const {
    DiffForm out(chart_, degree_);
    for (const auto& [idx, coeff] : terms_) out.set_coefficient(idx, -coeff);
    return out;
}

DiffForm DiffForm::scaled(const Expr& factor) const {
    DiffForm out(chart_, degree_);
    for (const auto& [idx, coeff] : terms_) out.set_coefficient(idx, factor * coeff);
    return out;
}

DiffForm DiffForm::wedge(const DiffForm& other) const {
    if (!chart_->same_coords(*other.chart_))
        throw std::invalid_argument("wedge needs matching charts");
    int degree = degree_ + other.degree_;
    if (degree > chart_->dim()) return DiffForm(chart_, std::min(degree, chart_->dim()));
    DiffForm out(chart_, degree);
    std::vector<int> merged;
    for (const auto& [ia, ca] : terms_) {
        for (const auto& [ib, cb] : other.terms_) {
            int sign;
            if (!merge_indices(ia, ib, merged, sign)) continue;
            Expr term = ca * cb;
            if (sign < 0) term = -term;
            out.set_coefficient(merged, out.coefficient(merged) + term);
        }
    }
    return out;
}

DiffForm DiffForm::d() const {
    DiffForm out(chart_, degree_ + 1);
    if (degree_ + 1 > chart_->dim()) return out;
    for (const auto& [idx, coeff] : terms_) {
        for (int j = 0; j < chart_->dim(); ++j) {
            if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
            Expr dc = coeff.derivative(chart_->coords[j]);
            if (dc.is_zero_literal()) continue;
            // dx_j wedged in front, then bubbled into sorted position.
            std::vector<int> merged;
            int sign;
            merge_indices({j}, idx, merged, sign);
            Expr term = sign < 0 ? -dc : dc;
            out.set_coefficient(merged, out.coefficient(merged) + term);
        }
    }
    return out;
}

std::string DiffForm::to_text() const {
    std::string out = "(form " + std::to_string(degree_);
    for (const auto& [idx, coeff] : terms_) {
        out += " ((";
        for (size_t i = 0; i < idx.size(); ++i) {
            if (i) out += ' ';
            out += chart_->coords[idx[i]];
        }
        out += ") ";
        out += coeff.to_text();
        out += ')';
    }
    out += ')';
    return out;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(ChartPtr c, std::vector<Expr> comps)
    : chart(std::move(c)), components(std::move(comps)) {
    if (int(components.size()) != chart->dim())
        throw std::invalid_argument("vector field needs one component per coordinate");
}

VectorField VectorField::basis(ChartPtr chart, const std::string& name) {
    int idx = chart->index_of(name);
    if (idx < 0) throw std::invalid_argument("no coordinate " + name + " in chart");
    std::vector<Expr> comps(chart->dim(), Expr::rational(0));
    comps[idx] = Expr::rational(1);
    return VectorField(std::move(chart), std::move(comps));
}

VectorField VectorField::operator+(const VectorField& other) const {
    if (!chart->same_coords(*other.chart))
        throw std::invalid_argument("vector field addition needs matching charts");
    std::vector<Expr> comps;
    comps.reserve(components.size());
    for (size_t i = 0; i < components.size(); ++i)
        comps.push_back(components[i] + other.components[i]);
    return VectorField(chart, std::move(comps));
}

VectorField VectorField::scaled(const Expr& factor) const {
    std::vector<Expr> comps;
    comps.reserve(components.size());
    for (const auto& c : components) comps.push_back(factor * c);
    return VectorField(chart, std::move(comps));
}

DiffForm interior_product(const VectorField& X, const DiffForm& omega) {
    if (!X.chart->same_coords(*omega.chart()))
        throw std::invalid_argument("interior product needs matching charts");
    if (omega.degree() == 0)
        throw std::invalid_argument("interior product of a scalar");
    DiffForm out(omega.chart(), omega.degree() - 1);
    for (const auto& [idx, coeff] : omega.terms()) {
        for (size_t m = 0; m < idx.size(); ++m) {
            const Expr& comp = X.components[idx[m]];
            if (comp.is_zero_literal()) continue;
            std::vector<int> rest;
            rest.reserve(idx.size() - 1);
            for (size_t i = 0; i < idx.size(); ++i)
                if (i != m) rest.push_back(idx[i]);
            Expr term = comp * coeff;
            if (m % 2 == 1) term = -term;
            out.set_coefficient(rest, out.coefficient(rest) + term);
        }
    }
    return out;
}

DiffForm lie_derivative(const VectorField& X, const DiffForm& omega) {
    return interior_product(X, omega.d()) + interior_product(X, omega).d();
}

// ---------------------------------------------------------------------------
// SmoothMap

SmoothMap::SmoothMap(ChartPtr src, ChartPtr tgt, std::vector<Expr> comps, int cover)
    : source(std::move(src)), target(std::move(tgt)), components(std::move(comps)),
      cover_degree(cover) {
    if (int(components.size()) != target->dim())
        throw std::invalid_argument("map needs one component per target coordinate");
}

std::map<std::string, Expr> SmoothMap::substitution() const {
    std::map<std::string, Expr> subs;
    for (size_t i = 0; i < components.size(); ++i) subs[target->coords[i]] = components[i];
    return subs;
}

std::vector<std::vector<Expr>> SmoothMap::jacobian() const {
    std::vector<std::vector<Expr>> J(components.size());
    for (size_t i = 0; i < components.size(); ++i) {
        J[i].reserve(source->dim());
        for (const auto& x : source->coords) J[i].push_back(components[i].derivative(x));
    }
    return J;
}

Binding SmoothMap::apply(const Binding& point, const Binding& params) const {
    Binding out;
    for (size_t i = 0; i < components.size(); ++i)
        out.set(target->coords[i], components[i].eval(point, params));
    return out;
}

SmoothMap compose(const SmoothMap& g, const SmoothMap& f) {
    if (!f.target->same_coords(*g.source))
        throw std::invalid_argument("map composition: inner target and outer source disagree");
    auto subs = f.substitution();
    std::vector<Expr> comps;
    comps.reserve(g.components.size());
    for (const auto& c : g.components) comps.push_back(c.substitute(subs));
    return SmoothMap(f.source, g.target, std::move(comps), f.cover_degree * g.cover_degree);
}

DiffForm pullback(const SmoothMap& f, const DiffForm& omega) {
    if (!omega.chart()->same_coords(*f.target))
        throw std::invalid_argument("pullback: form lives on a different chart than the target");
    auto subs = f.substitution();
    if (omega.degree() == 0)
        return DiffForm::scalar(f.source, omega.coefficient({}).substitute(subs));

    // Pull each target basis one-form back once.
    std::vector<DiffForm> pulled_basis;
    pulled_basis.reserve(f.target->dim());
    auto J = f.jacobian();
    for (int i = 0; i < f.target->dim(); ++i)
        pulled_basis.push_back(DiffForm::one_form(f.source, J[i]));

    DiffForm out(f.source, omega.degree());
    for (const auto& [idx, coeff] : omega.terms()) {
        DiffForm term = DiffForm::scalar(f.source, coeff.substitute(subs));
        for (int i : idx) term = term.wedge(pulled_basis[i]);
        out = out + term;
    }
    return out;
}

MapCompareReport map_equal_sampled(const SmoothMap& f, const SmoothMap& g, const Binding& params,
                                   const ZeroTestOptions& opts) {
    if (!f.source->same_coords(*g.source) || !f.target->same_coords(*g.target))
        throw std::invalid_argument("map comparison needs matching charts");
    SampleStream stream(opts.seed);
    MapCompareReport report;
    const auto& tgt = f.target->box;
    for (int s = 0; s < opts.samples; ++s) {
        Binding point = f.source->box.sample(stream);
        for (size_t i = 0; i < f.components.size(); ++i) {
            double a = f.components[i].eval(point, params);
            double b = g.components[i].eval(point, params);
            const auto& iv = tgt.interval(f.target->coords[i]);
            double diff = iv.periodic ? wrapped_difference(a - b, iv.hi - iv.lo) : a - b;
            if (std::fabs(diff) > report.worst) {
                report.worst = std::fabs(diff);
                report.witness = point;
            }
        }
    }
    report.equal = report.worst <= opts.tol;
    return report;
}

JacobianReport jacobian_nonvanishing(const SmoothMap& f, const Binding& params,
                                     const ZeroTestOptions& opts) {
    if (f.source->dim() != f.target->dim())
        throw std::invalid_argument("Jacobian determinant needs equal dimensions");
    auto J = f.jacobian();
    int n = f.source->dim();
    SampleStream stream(opts.seed);
    JacobianReport report;
    report.min_det = std::numeric_limits<double>::infinity();
    bool saw_pos = false, saw_neg = false;
    for (int s = 0; s < opts.samples; ++s) {
        Binding point = f.source->box.sample(stream);
        Eigen::MatrixXd M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = J[i][j].eval(point, params);
        // Row equilibration (positive scalings, so the sign survives) keeps
        // the magnitude threshold meaningful across coordinate scales.
        for (int i = 0; i < n; ++i) {
            double mx = M.row(i).cwiseAbs().maxCoeff();
            if (mx > 0) M.row(i) /= mx;
        }
        double det = M.fullPivLu().determinant();
        (det > 0 ? saw_pos : saw_neg) = true;
        if (std::fabs(det) < report.min_det) {
            report.min_det = std::fabs(det);
            report.witness = point;
        }
    }
    report.sign = saw_pos && !saw_neg ? 1 : (saw_neg && !saw_pos ? -1 : 0);
    // A fold flips the sign somewhere even when no sample lands on the
    // vanishing locus, so single-signedness is part of the verdict.
    report.nonvanishing = report.sign != 0 && report.min_det > 1e-12;
    return report;
}

ContactReport contact_check(const DiffForm& alpha, const Binding& params,
                            const ZeroTestOptions& opts) {
    const Chart& chart = *alpha.chart();
    if (chart.dim() % 2 == 0)
        throw std::invalid_argument("contact condition needs an odd-dimensional chart");
    if (alpha.degree() != 1) throw std::invalid_argument("contact condition needs a one-form");
    int n = (chart.dim() - 1) / 2;
    DiffForm dalpha = alpha.d();
    DiffForm top = alpha;
    for (int i = 0; i < n; ++i) top = top.wedge(dalpha);

    std::vector<int> full(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) full[i] = i;
    Expr coeff = top.coefficient(full);

    ContactReport report;
    if (coeff.is_zero_literal()) return report;
    SampleStream stream(opts.seed);
    report.margin = std::numeric_limits<double>::infinity();
    bool saw_pos = false, saw_neg = false;
    for (int s = 0; s < opts.samples; ++s) {
        Binding point = chart.box.sample(stream);
        double v = coeff.eval(point, params);
        (v > 0 ? saw_pos : saw_neg) = true;
        if (std::fabs(v) < report.margin) {
            report.margin = std::fabs(v);
            report.witness = point;
        }
    }
    report.sign = saw_pos && !saw_neg ? 1 : (saw_neg && !saw_pos ? -1 : 0);
    report.contact = report.sign != 0 && report.margin > 0;
    return report;
}

std::vector<double> reeb_numeric(const DiffForm& alpha, const Binding& point,
                                 const Binding& params) {
    const Chart& chart = *alpha.chart();
    int dim = chart.dim();
    DiffForm dalpha = alpha.d();

    // Antisymmetric matrix A with A(i, j) = (d alpha)(e_i, e_j).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [idx, coeff] : dalpha.terms()) {
        double v = coeff.eval(point, params);
        A(idx[0], idx[1]) = v;
        A(idx[1], idx[0]) = -v;
    }
    Eigen::MatrixXd M(dim + 1, dim);
    M.topRows(dim) = A;
    for (int j = 0; j < dim; ++j) M(dim, j) = alpha.coefficient({j}).eval(point, params);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
    rhs(dim) = 1.0;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (smin <= 0 || smax / smin > 1e8)
        throw std::runtime_error("degenerate point: Reeb system condition number above 1e8");
    Eigen::VectorXd R = svd.solve(rhs);
    return std::vector<double>(R.data(), R.data() + dim);
}

bool reeb_symbolic_verify(const DiffForm& alpha, const VectorField& reeb, const Binding& params,
                          const ZeroTestOptions& opts) {
    DiffForm contraction = interior_product(reeb, alpha.d());
    if (!form_is_zero(contraction, params, opts)) return false;
    Expr pairing = interior_product(reeb, alpha).coefficient({});
    return is_zero(pairing - Expr::rational(1), alpha.chart()->box, params, opts).zero;
}

FormZeroReport form_is_zero(const DiffForm& omega, const Binding& params,
                            const ZeroTestOptions& opts) {
    FormZeroReport report;
    for (const auto& [idx, coeff] : omega.terms()) {
        ZeroReport r = is_zero(coeff, omega.chart()->box, params, opts);
        if (r.worst_ratio > report.worst_ratio) {
            report.worst_ratio = r.worst_ratio;
            report.worst_indices = idx;
            report.witness = r.witness;
        }
        if (!r.zero) report.zero = false;
    }
    return report;
}

FormZeroReport vector_related(const SmoothMap& f, const VectorField& X, const VectorField& Y,
                              const Binding& params, const ZeroTestOptions& opts) {
    if (!X.chart->same_coords(*f.source) || !Y.chart->same_coords(*f.target))
        throw std::invalid_argument("relatedness check: fields live on the wrong charts");
    auto J = f.jacobian();
    auto subs = f.substitution();
    FormZeroReport report;
    for (size_t i = 0; i < f.components.size(); ++i) {
        Expr pushed = Expr::rational(0);
        for (int j = 0; j < f.source->dim(); ++j) pushed = pushed + J[i][j] * X.components[j];
        Expr residual = pushed - Y.components[i].substitute(subs);
        ZeroReport r = is_zero(residual, f.source->box, params, opts);
        if (r.worst_ratio > report.worst_ratio) {
            report.worst_ratio = r.worst_ratio;
            report.worst_indices = {int(i)};
            report.witness = r.witness;
        }
        if (!r.zero) report.zero = false;
    }
    return report;
}

ConformalReport conformal_factor(const DiffForm& candidate, const DiffForm& reference,
                                 const Binding& params, const ZeroTestOptions& opts) {
    if (!candidate.chart()->same_coords(*reference.chart()) ||
        candidate.degree() != reference.degree())
        throw std::invalid_argument("conformal comparison needs matching charts and degrees");
    ConformalReport report;
    report.factor = Expr::rational(0);
    if (reference.structurally_zero()) return report;

    // Reference monomial: the coefficient staying farthest from zero.
    const std::vector<int>* best = nullptr;
    double best_min = -1;
    for (const auto& [idx, coeff] : reference.terms()) {
        SampleStream stream(opts.seed);
        double mn = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 32; ++s)
            mn = std::min(mn, std::fabs(coeff.eval(reference.chart()->box.sample(stream), params)));
        if (mn > best_min) {
            best_min = mn;
            best = &idx;
        }
    }
    Expr factor = candidate.coefficient(*best) / reference.coefficient(*best);
    DiffForm residual = candidate - reference.scaled(factor);
    if (!form_is_zero(residual, params, opts)) return report;
    report.proportional = true;

    SampleStream stream(opts.seed);
    bool saw_pos = false, saw_neg = false;
    report.min_abs_factor = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.samples; ++s) {
        double v = factor.eval(candidate.chart()->box.sample(stream), params);
        (v > 0 ? saw_pos : saw_neg) = true;
        report.min_abs_factor = std::min(report.min_abs_factor, std::fabs(v));
        report.max_abs_factor = std::max(report.max_abs_factor, std::fabs(v));
    }
    report.single_signed = (saw_pos != saw_neg) && report.min_abs_factor > 0;
    report.factor = factor;
    return report;
}

RatioReport top_coefficient_ratio(const DiffForm& a, const DiffForm& b, const std::string& coord,
                                  double lo, double hi, const Binding& params,
                                  const ZeroTestOptions& opts) {
    if (!a.chart()->same_coords(*b.chart()))
        throw std::invalid_argument("ratio needs matching charts");
    const Chart& chart = *a.chart();
    if (a.degree() != chart.dim() || b.degree() != chart.dim())
        throw std::invalid_argument("ratio needs top-degree forms");
    std::vector<int> full(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) full[i] = i;
    Expr ca = a.coefficient(full), cb = b.coefficient(full);
    DomainBox box = chart.box.restricted(coord, lo, hi);
    SampleStream stream(opts.seed);
    RatioReport report;
    report.min_abs = std::numeric_limits<double>::infinity();
    bool saw_pos = false, saw_neg = false;
    for (int s = 0; s < opts.samples; ++s) {
        Binding point = box.sample(stream);
        double denom = cb.eval(point, params);
        if (denom == 0) continue;
        double v = ca.eval(point, params) / denom;
        (v > 0 ? saw_pos : saw_neg) = true;
        report.min_abs = std::min(report.min_abs, std::fabs(v));
        report.max_abs = std::max(report.max_abs, std::fabs(v));
    }
    report.single_signed = (saw_pos != saw_neg) && report.min_abs > 0;
    return report;
}

}  // namespace cbu
