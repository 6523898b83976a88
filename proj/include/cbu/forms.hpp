#pragma once
// Exterior calculus over a single coordinate chart: differential forms with
// symbolic coefficients, wedge/d/pullback/interior product, and the numeric
// certificates (contact condition, Reeb fields, Jacobian checks) built on
// seeded sampling.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbu/expr.hpp"
#include "cbu/sampling.hpp"

namespace cbu {

/** Ordered coordinates plus their sampling box.  Charts are shared by value
    through shared_ptr; operations require structurally equal charts. */
struct Chart {
    std::vector<std::string> coords;
    DomainBox box;

    int dim() const { return int(coords.size()); }
    int index_of(const std::string& name) const;
    bool same_coords(const Chart& other) const { return coords == other.coords; }
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> coords, DomainBox box);

/** Same coordinates, sampling box narrowed in one of them. */
ChartPtr restrict_chart(const ChartPtr& chart, const std::string& coord, double lo, double hi);

/** Differential form: strictly increasing index tuples to coefficient
    expressions.  Degree 0 is a scalar under the empty tuple. */
class DiffForm {
  public:
    DiffForm(ChartPtr chart, int degree);

    static DiffForm scalar(ChartPtr chart, Expr value);
    /** One-form from per-coordinate coefficients (missing = zero). */
    static DiffForm one_form(ChartPtr chart, std::vector<Expr> coefficients);
    /** The basis one-form d(coordinate). */
    static DiffForm d_coordinate(ChartPtr chart, const std::string& name);

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    const std::map<std::vector<int>, Expr>& terms() const { return terms_; }
    bool structurally_zero() const { return terms_.empty(); }

    /** Coefficient of a strictly increasing tuple (zero expr if absent). */
    Expr coefficient(const std::vector<int>& indices) const;
    void set_coefficient(std::vector<int> indices, Expr value);

    DiffForm operator+(const DiffForm& other) const;
    DiffForm operator-(const DiffForm& other) const;
    DiffForm operator-() const;
    /** Scalar (function) multiple. */
    DiffForm scaled(const Expr& factor) const;

    /** Wedge product; degree above the chart dimension gives the zero form. */
    DiffForm wedge(const DiffForm& other) const;

    /** Exterior derivative. */
    DiffForm d() const;

    std::string to_text() const;

  private:
    ChartPtr chart_;
    int degree_;
    std::map<std::vector<int>, Expr> terms_;
};

/** The same form re-homed on a chart with identical coordinates, typically
    a band-restricted sampling box. */
DiffForm rechart(const DiffForm& omega, const ChartPtr& chart);

struct VectorField {
    ChartPtr chart;
    std::vector<Expr> components;

    VectorField(ChartPtr c, std::vector<Expr> comps);
    static VectorField basis(ChartPtr chart, const std::string& name);
    VectorField operator+(const VectorField& other) const;
    VectorField scaled(const Expr& factor) const;
};

/** Interior product iota_X omega. */
DiffForm interior_product(const VectorField& X, const DiffForm& omega);

/** Lie derivative of a form along X via Cartan's formula
    d(iota_X omega) + iota_X d(omega). */
DiffForm lie_derivative(const VectorField& X, const DiffForm& omega);

/** Coordinate map between charts, components expressed in source
    coordinates.  cover_degree records how many sheets a covering has;
    1 means injective on the chart. */
struct SmoothMap {
    ChartPtr source;
    ChartPtr target;
    std::vector<Expr> components;
    int cover_degree = 1;

    SmoothMap(ChartPtr src, ChartPtr tgt, std::vector<Expr> comps, int cover = 1);

    /** Component expressions substituted into the target-coordinate slots. */
    std::map<std::string, Expr> substitution() const;

    /** Jacobian matrix of expressions, [target index][source index]. */
    std::vector<std::vector<Expr>> jacobian() const;

    Binding apply(const Binding& point, const Binding& params = {}) const;
};

/** g after f; requires f.target and g.source to agree. */
SmoothMap compose(const SmoothMap& g, const SmoothMap& f);

/** Pullback of a form on the map's target. */
DiffForm pullback(const SmoothMap& f, const DiffForm& omega);

struct MapCompareReport {
    bool equal = true;
    double worst = 0;
    Binding witness;
    explicit operator bool() const { return equal; }
};

/** Componentwise comparison of maps at sampled source points; periodic
    target coordinates compare modulo their period. */
MapCompareReport map_equal_sampled(const SmoothMap& f, const SmoothMap& g,
                                   const Binding& params = {}, const ZeroTestOptions& opts = {});

struct JacobianReport {
    bool nonvanishing = true;
    /** min over samples of |det| after row equilibration. */
    double min_det = 0;
    /** +1 / -1 when the determinant kept one sign, 0 otherwise. */
    int sign = 0;
    Binding witness;
    explicit operator bool() const { return nonvanishing; }
};

JacobianReport jacobian_nonvanishing(const SmoothMap& f, const Binding& params = {},
                                     const ZeroTestOptions& opts = {});

struct ContactReport {
    bool contact = false;
    /** min over samples of |top coefficient|. */
    double margin = 0;
    int sign = 0;
    Binding witness;  // location of the minimum
    explicit operator bool() const { return contact; }
};

/** Evaluates alpha ^ (d alpha)^n over the chart box; contact iff the top
    coefficient keeps one sign and stays away from zero.  Chart dimension
    must be odd. */
ContactReport contact_check(const DiffForm& alpha, const Binding& params = {},
                            const ZeroTestOptions& opts = {});

/** Numeric Reeb vector at a point: solves iota_R d(alpha) = 0, alpha(R) = 1
    by least squares.  Throws std::runtime_error("degenerate point ...") when
    the system's condition number exceeds 1e8. */
std::vector<double> reeb_numeric(const DiffForm& alpha, const Binding& point,
                                 const Binding& params = {});

/** Certifies iota_R d(alpha) = 0 and alpha(R) = 1 under sampled zero tests. */
bool reeb_symbolic_verify(const DiffForm& alpha, const VectorField& reeb,
                          const Binding& params = {}, const ZeroTestOptions& opts = {});

struct FormZeroReport {
    bool zero = true;
    double worst_ratio = 0;
    std::vector<int> worst_indices;
    Binding witness;
    explicit operator bool() const { return zero; }
};

/** Sampled zero test applied to every coefficient. */
FormZeroReport form_is_zero(const DiffForm& omega, const Binding& params = {},
                            const ZeroTestOptions& opts = {});

/** Certifies that X and Y are f-related, df(X) = Y after f: the residual
    sum_j (dfi/dxj) Xj - (Yi composed with f) is sampled per target slot. */
FormZeroReport vector_related(const SmoothMap& f, const VectorField& X, const VectorField& Y,
                              const Binding& params = {}, const ZeroTestOptions& opts = {});

struct ConformalReport {
    bool proportional = false;
    bool single_signed = false;
    double min_abs_factor = 0;
    double max_abs_factor = 0;
    Expr factor;  // ratio expression against the reference monomial
    explicit operator bool() const { return proportional && single_signed; }
};

/** Certifies candidate = factor * reference for a single smooth factor;
    picks the reference coefficient that stays farthest from zero. */
ConformalReport conformal_factor(const DiffForm& candidate, const DiffForm& reference,
                                 const Binding& params = {}, const ZeroTestOptions& opts = {});

struct RatioReport {
    bool single_signed = false;
    double min_abs = 0;
    double max_abs = 0;
};

/** Sign behavior of (top coefficient of a) / (top coefficient of b) over a
    box restricted to [lo, hi] in the named coordinate. */
RatioReport top_coefficient_ratio(const DiffForm& a, const DiffForm& b, const std::string& coord,
                                  double lo, double hi, const Binding& params = {},
                                  const ZeroTestOptions& opts = {});

}  // namespace cbu
