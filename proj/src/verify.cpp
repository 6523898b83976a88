#include "cbu/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cbu/bw.hpp"
#include "cbu/cut.hpp"
#include "cbu/surgery.hpp"
#include "cbu/uniqueness.hpp"

namespace cbu {

namespace {

std::string ratio_note(double worst) {
    std::ostringstream s;
    s << "worst residual ratio " << worst;
    return s.str();
}

// (1 - l r^2) dtheta - r^2 alpha_std, the closed form of phi_l^* eta
DiffForm twisted_eta(const TubeModel& tube, int a, int b) {
    Expr r = Expr::coordinate("r");
    Expr coeff = Expr::rational(a) - Expr::rational(b) * r * r;
    return DiffForm::d_coordinate(tube.chart, "theta").scaled(coeff) -
           tube.alpha_std.scaled(r * r);
}

void criterion_twist_pullback(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    for (int l = 1; l <= 5; ++l) {
        DiffForm residual = pullback(phi_map(tube, l), tube.eta) - twisted_eta(tube, 1, l);
        FormZeroReport rep = form_is_zero(residual, {}, opts);
        out.checks.push_back(CheckResult{"phi_" + std::to_string(l) + " pullback identity",
                                         rep.zero, rep.worst_ratio,
                                         rep.zero ? "" : ratio_note(rep.worst_ratio)});
    }
}

void criterion_cover_pullback(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    const std::array<std::array<int, 2>, 4> weights{{{1, 1}, {1, 3}, {2, 3}, {3, 2}}};
    for (auto [a, b] : weights) {
        DiffForm residual = pullback(phi_ab(tube, a, b), tube.eta) - twisted_eta(tube, a, b);
        FormZeroReport rep = form_is_zero(residual, {}, opts);
        std::ostringstream name;
        name << "phi_(" << a << "," << b << ") pullback identity";
        out.checks.push_back(CheckResult{name.str(), rep.zero, rep.worst_ratio,
                                         rep.zero ? "" : ratio_note(rep.worst_ratio)});
    }
}

std::array<double, 4> ball_point(double r, double rho, double phi1, double phi2) {
    return {r * std::cos(rho) * std::cos(phi1), r * std::cos(rho) * std::sin(phi1),
            r * std::sin(rho) * std::cos(phi2), r * std::sin(rho) * std::sin(phi2)};
}

void criterion_squeeze(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    for (int k = 1; k <= 6; ++k) {
        ConformalReport rep =
            conformal_factor(pullback(psi_squeeze(tube, k), tube.eta), tube.eta, {}, opts);
        out.checks.push_back(CheckResult{"psi_" + std::to_string(k) + " conformal pullback",
                                         rep.proportional && rep.single_signed,
                                         rep.min_abs_factor, ""});
    }

    double radius_error = std::abs(squeeze_radius(6, 2.0) - 0.4);
    out.checks.push_back(
        CheckResult{"squeeze radius k=6, R0=2", radius_error <= 1e-12, radius_error, ""});

    // near the core the squeeze moves ambient points by less than 1e-5
    for (int k = 1; k <= 6; ++k) {
        SmoothMap psi = psi_squeeze(tube, k);
        SampleStream stream(opts.seed ^ 0x5153u);
        double worst = 0;
        for (int i = 0; i < 16; ++i) {
            Binding p;
            p.set("theta", stream.next_in(0, kTwoPi));
            p.set("r", 1e-6);
            p.set("rho", stream.next_in(0.2, 1.2));
            p.set("phi1", stream.next_in(0, kTwoPi));
            p.set("phi2", stream.next_in(0, kTwoPi));
            Binding q = psi.apply(p);
            auto before = ball_point(*p.find("r"), *p.find("rho"), *p.find("phi1"),
                                     *p.find("phi2"));
            auto after = ball_point(*q.find("r"), *q.find("rho"), *q.find("phi1"),
                                    *q.find("phi2"));
            double d2 = 0;
            for (int j = 0; j < 4; ++j) d2 += (after[j] - before[j]) * (after[j] - before[j]);
            worst = std::max(worst, std::sqrt(d2) + std::abs(*q.find("theta") - *p.find("theta")));
        }
        out.checks.push_back(CheckResult{
            "psi_" + std::to_string(k) + " displacement at r = 1e-6", worst < 1e-5, worst, ""});
    }
}

void criterion_diagram(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    for (int l = 2; l <= 4; ++l) {
        int k = l - 1;
        SmoothMap lhs = compose(phi_map(tube, l), radial_squeeze(tube, k));
        SmoothMap rhs = compose(psi_squeeze(tube, k), phi_map(tube, 1));
        MapCompareReport rep = map_equal_sampled(lhs, rhs, {}, opts);
        out.checks.push_back(CheckResult{
            "phi_" + std::to_string(l) + " o squeeze = psi_" + std::to_string(k) + " o phi_1",
            rep.equal, rep.worst, ""});
    }
}

void criterion_surgery(CriterionResult& out, const ZeroTestOptions&) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    for (int l = 1; l <= 5; ++l) {
        SurgeryBlowupModel model = build_surgery_blowup(l, tube);
        std::string tag = "surgery l = " + std::to_string(l);
        out.checks.push_back(CheckResult{tag + ": contact margin",
                                         model.contact.contact && model.contact.margin > 0,
                                         model.contact.margin, ""});
        out.checks.push_back(CheckResult{tag + ": inner coincidence with lambda",
                                         model.inner_coincidence.zero,
                                         model.inner_coincidence.worst_ratio, ""});
        out.checks.push_back(CheckResult{tag + ": outer factor single-signed",
                                         model.outer_ratio.single_signed,
                                         model.outer_ratio.min_abs, ""});
    }
}

void criterion_parity(CriterionResult& out, const ZeroTestOptions&) {
    bool all = true;
    int checked = 0;
    for (int k = -5; k <= 5 && all; ++k) {
        for (int l = -5; l <= 5 && all; ++l) {
            for (int n = 1; n <= 6 && all; ++n) {
                bool expected = (((k - l) * n) % 2 + 2) % 2 == 0;
                all = isotopy_parity(k, l, n) == expected;
                ++checked;
            }
        }
    }
    out.checks.push_back(
        CheckResult{"isotopy parity vs direct (k-l)n mod 2", all, double(checked), ""});
}

bool is_integer_multiple(long long u, long long v, long long p, long long q) {
    if (p == 0 && q == 0) return u == 0 && v == 0;
    if (p != 0) return u % p == 0 && v == (u / p) * q;
    return v % q == 0 && u == 0;
}

bool kernel_equals_image(const LatticeSeq& seq) {
    for (long long u = -10; u <= 10; ++u) {
        for (long long v = -10; v <= 10; ++v) {
            bool in_kernel = seq.second[0] * u + seq.second[1] * v == 0;
            if (in_kernel != is_integer_multiple(u, v, seq.first[0], seq.first[1])) return false;
        }
    }
    return true;
}

void criterion_sequences(CriterionResult& out, const ZeroTestOptions&) {
    bool coprime_ok = true;
    bool reject_ok = true;
    int verified = 0;
    for (int a = -20; a <= 20; ++a) {
        for (int b = -20; b <= 20; ++b) {
            if (a == 0 && b == 0) continue;
            if (std::gcd(a, b) == 1) {
                try {
                    QuotientDescriptor q = product_quotient(a, b);
                    coprime_ok = coprime_ok && verify_exact_sequence(q.sequence).exact &&
                                 kernel_equals_image(q.sequence);
                    ++verified;
                } catch (const std::exception&) {
                    coprime_ok = false;
                }
            } else {
                try {
                    product_quotient(a, b);
                    reject_ok = false;
                } catch (const std::invalid_argument&) {
                }
            }
        }
    }
    out.checks.push_back(CheckResult{"coprime weights |a|,|b| <= 20 exact vs enumeration",
                                     coprime_ok, double(verified), ""});
    out.checks.push_back(CheckResult{"non-coprime weights rejected", reject_ok, 0, ""});
}

void criterion_cut(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.5);
    const std::array<std::array<int, 2>, 4> weights{{{1, 1}, {1, 4}, {4, 1}, {2, 3}}};
    for (auto [a, b] : weights) {
        CutModel cut = make_cut(make_action(a, b, tube, opts), opts);
        std::ostringstream tag;
        tag << "cut (" << a << "," << b << ")";
        double radius_error = std::abs(cut.zero_radius - std::sqrt(double(a) / b));
        out.checks.push_back(
            CheckResult{tag.str() + ": zero radius", radius_error <= 1e-12, radius_error, ""});
        out.checks.push_back(CheckResult{tag.str() + ": eta invariance residual",
                                         cut.invariance.zero && cut.invariance.worst_ratio <= 1e-9,
                                         cut.invariance.worst_ratio, ""});
        out.checks.push_back(CheckResult{
            tag.str() + ": generator matches d/dtheta upstairs",
            cut.generator_pullback.zero && cut.generator_pullback.worst_ratio <= 1e-9,
            cut.generator_pullback.worst_ratio, ""});
    }

    bool small_rejected = false;
    try {
        make_cut(make_action(3, 1, make_tube(2, 0.02, 1.5), opts), opts);
    } catch (const std::invalid_argument& e) {
        small_rejected = std::string(e.what()).rfind("tube too small", 0) == 0;
    }
    bool fitting_accepted = true;
    try {
        make_cut(make_action(1, 1, make_tube(2, 0.02, 1.05), opts), opts);
    } catch (const std::exception&) {
        fitting_accepted = false;
    }
    out.checks.push_back(CheckResult{"tube too small exactly when R^2 < a/b",
                                     small_rejected && fitting_accepted, 0, ""});
}

void criterion_uniqueness(CriterionResult& out, const ZeroTestOptions& opts) {
    auto cell = [](const ComparisonMatrix& m, const std::string& lhs, const std::string& rhs) {
        for (const ComparisonCell& c : m.cells) {
            if (c.lhs == lhs && c.rhs == rhs) return c;
        }
        throw std::logic_error("comparison cell missing");
    };

    ComparisonMatrix base = compare_constructions(1, 1, opts);
    out.checks.push_back(CheckResult{"(1,1): all pairs connected", base.all_applicable_pass,
                                     0, ""});
    for (int b : {1, 2, 3}) {
        ComparisonMatrix m = compare_constructions(1, b, opts);
        ComparisonCell c = cell(m, "surgery", "cut");
        std::ostringstream name;
        name << "(1," << b << "): surgery <-> cut path margin";
        out.checks.push_back(CheckResult{name.str(),
                                         c.verdict == PairVerdict::Pass && c.min_margin > 0,
                                         c.min_margin, c.detail});
    }
    for (int a : {1, 2, 3}) {
        ComparisonMatrix m = compare_constructions(a, 1, opts);
        ComparisonCell c = cell(m, "gromov", "cut");
        std::ostringstream name;
        name << "(" << a << ",1): gromov <-> cut path margin";
        out.checks.push_back(CheckResult{name.str(),
                                         c.verdict == PairVerdict::Pass && c.min_margin > 0,
                                         c.min_margin, c.detail});
    }
}

void criterion_calculus(CriterionResult& out, const ZeroTestOptions& opts) {
    TubeModel tube = make_tube(2, 0.02, 2.0);
    ChartPtr chart = tube.chart;
    Expr r = Expr::coordinate("r");
    Expr rho = Expr::coordinate("rho");
    Expr theta = Expr::coordinate("theta");

    DiffForm omega = DiffForm::d_coordinate(chart, "rho").scaled(Expr::sin(theta) * r * r) +
                     DiffForm::d_coordinate(chart, "theta")
                         .scaled(Expr::cos(Expr::coordinate("phi1")) * r) +
                     DiffForm::d_coordinate(chart, "phi2").scaled(rho);
    DiffForm tau = DiffForm::d_coordinate(chart, "phi1").scaled(r) +
                   DiffForm::d_coordinate(chart, "r").scaled(Expr::cos(rho));

    FormZeroReport ddo = form_is_zero(omega.d().d(), {}, opts);
    out.checks.push_back(CheckResult{"d(d(omega)) = 0", ddo.zero, ddo.worst_ratio, ""});
    FormZeroReport dde = form_is_zero(tube.eta.d().d(), {}, opts);
    out.checks.push_back(CheckResult{"d(d(eta)) = 0", dde.zero, dde.worst_ratio, ""});

    SmoothMap cover = phi_ab(tube, 2, 3);
    FormZeroReport nat =
        form_is_zero(pullback(cover, omega.d()) - pullback(cover, omega).d(), {}, opts);
    out.checks.push_back(
        CheckResult{"pullback commutes with d", nat.zero, nat.worst_ratio, ""});

    FormZeroReport leib = form_is_zero(
        omega.wedge(tau).d() - (omega.d().wedge(tau) - omega.wedge(tau.d())), {}, opts);
    out.checks.push_back(CheckResult{"Leibniz rule for d on a wedge", leib.zero,
                                     leib.worst_ratio, ""});

    DomainBox rbox;
    rbox.add_interval("r", 0.05, 1.95);
    InterpolationProfile prof = build_profile(3);
    bool fd_profile = derivative_matches_fd(prof.H, "r", rbox, {}, 64, opts.seed);
    out.checks.push_back(CheckResult{"surgery profile derivative vs finite differences",
                                     fd_profile, 0, ""});
    DomainBox tube_box = chart->box;
    bool fd_eta = true;
    for (const auto& [indices, coeff] : tube.eta.terms()) {
        (void)indices;
        fd_eta = fd_eta && derivative_matches_fd(coeff, "rho", tube_box, {}, 64, opts.seed);
    }
    out.checks.push_back(CheckResult{"eta coefficient derivatives vs finite differences",
                                     fd_eta, 0, ""});
}

}  // namespace

CriterionResult run_criterion(int index, const ZeroTestOptions& opts) {
    CriterionResult result;
    result.index = index;
    auto start = std::chrono::steady_clock::now();
    switch (index) {
        case 1:
            result.name = "twist pullback identity";
            criterion_twist_pullback(result, opts);
            break;
        case 2:
            result.name = "covering twist pullback identity";
            criterion_cover_pullback(result, opts);
            break;
        case 3:
            result.name = "squeezing contactomorphisms";
            criterion_squeeze(result, opts);
            break;
        case 4:
            result.name = "squeeze-twist diagram";
            criterion_diagram(result, opts);
            break;
        case 5:
            result.name = "surgery gluing certificates";
            criterion_surgery(result, opts);
            break;
        case 6:
            result.name = "isotopy parity table";
            criterion_parity(result, opts);
            break;
        case 7:
            result.name = "quotient exact sequences";
            criterion_sequences(result, opts);
            break;
        case 8:
            result.name = "contact cut certificates";
            criterion_cut(result, opts);
            break;
        case 9:
            result.name = "uniqueness comparison matrix";
            criterion_uniqueness(result, opts);
            break;
        case 10:
            result.name = "calculus self-checks";
            criterion_calculus(result, opts);
            break;
        default:
            throw std::invalid_argument("criterion index must be 1..10");
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.pass = true;
    for (const CheckResult& c : result.checks) result.pass = result.pass && c.pass;
    return result;
}

std::vector<CriterionResult> run_full_suite(const ZeroTestOptions& opts) {
    std::vector<CriterionResult> all;
    for (int i = 1; i <= 10; ++i) all.push_back(run_criterion(i, opts));
    return all;
}

}  // namespace cbu
