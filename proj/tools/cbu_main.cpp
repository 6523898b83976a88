// Command-line front end: model dumps, the three constructions with their
// certificates, and the full verification suite.  Exit codes: 0 all checks
// pass, 1 a verification or construction failure, 2 usage.
//
// stdout is deterministic for a fixed command line and seed; wall-clock
// timings go to stderr.

#include <cinttypes>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbu/bw.hpp"
#include "cbu/cut.hpp"
#include "cbu/report.hpp"
#include "cbu/surgery.hpp"
#include "cbu/uniqueness.hpp"
#include "cbu/verify.hpp"

namespace {

struct GlobalArgs {
    std::uint64_t seed = cbu::kDefaultSeed;
    int samples = cbu::kDefaultSamples;
    double tol = cbu::kDefaultTol;
    std::string report_path;
    std::string profile_path;
    std::string command_echo;

    cbu::ZeroTestOptions opts() const { return cbu::ZeroTestOptions{samples, tol, seed}; }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finish_report(const GlobalArgs& g, const cbu::ReportDocument& doc) {
    if (!g.report_path.empty()) cbu::write_text_file(g.report_path, doc.to_json());
}

int run_model_dump(const GlobalArgs& g, int n, double r_min, double r_max) {
    cbu::TubeModel tube = cbu::make_tube(n, r_min, r_max);
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);
    cbu::ZeroTestOptions opts = g.opts();

    std::printf("tube model: n = %d, r in (%s, %s)\n", tube.n, fmt(tube.r_min).c_str(),
                fmt(tube.r_max).c_str());
    std::string coords;
    for (const std::string& c : tube.chart->coords) coords += (coords.empty() ? "" : " ") + c;
    std::printf("coordinates: %s\n", coords.c_str());
    std::printf("alpha_std = %s\n", tube.alpha_std.to_text().c_str());
    std::printf("eta       = %s\n", tube.eta.to_text().c_str());
    std::printf("lambda    = %s\n", tube.lambda.to_text().c_str());
    std::printf("xi_1 rep  = %s\n", tube.xi_rep(cbu::Expr::rational(1)).to_text().c_str());

    cbu::ContactReport eta_contact = cbu::contact_check(tube.eta, {}, opts);
    cbu::ContactReport lambda_contact = cbu::contact_check(tube.lambda, {}, opts);
    bool reeb_ok = cbu::reeb_symbolic_verify(
        tube.eta, cbu::VectorField::basis(tube.chart, "theta"), {}, opts);
    std::printf("contact(eta): %s, margin %s, sign %+d\n", eta_contact ? "yes" : "NO",
                fmt(eta_contact.margin).c_str(), eta_contact.sign);
    std::printf("contact(lambda): %s, margin %s, sign %+d\n", lambda_contact ? "yes" : "NO",
                fmt(lambda_contact.margin).c_str(), lambda_contact.sign);
    std::printf("reeb(eta) = d/dtheta: %s\n", reeb_ok ? "verified" : "FAILED");

    doc.add("eta contact", bool(eta_contact), eta_contact.margin);
    doc.add("lambda contact", bool(lambda_contact), lambda_contact.margin);
    doc.add("eta Reeb field", reeb_ok, 0);
    finish_report(g, doc);
    return doc.all_pass() ? 0 : 1;
}

int run_blowup_surgery(const GlobalArgs& g, int l, double r_in, double r_out, double r_max) {
    cbu::TubeModel tube = cbu::make_tube(2, 0.02, r_max);
    cbu::SurgeryBlowupModel model = cbu::build_surgery_blowup(l, tube, r_in, r_out);
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);

    std::printf("surgery blow-up, twist l = %d on the %d-dim tube\n", l,
                2 * tube.n + 1);
    std::printf("profile band: [%s, %s], chart radius %s\n", fmt(r_in).c_str(),
                fmt(r_out).c_str(), fmt(r_max).c_str());
    std::printf("glued form: %s\n", model.alpha_glued.to_text().c_str());
    std::printf("divisor: S^%d (standard), carrying %s\n", 2 * tube.n - 1,
                model.divisor.form_text.c_str());
    std::printf("contact margin: %s (sign %+d)\n", fmt(model.contact.margin).c_str(),
                model.contact.sign);
    std::printf("inner coincidence residual: %s\n",
                fmt(model.inner_coincidence.worst_ratio).c_str());
    std::printf("outer conformal band: [%s, %s], single-signed: %s\n",
                fmt(model.outer_ratio.min_abs).c_str(), fmt(model.outer_ratio.max_abs).c_str(),
                model.outer_ratio.single_signed ? "yes" : "NO");
    std::printf("profile monotone: min slope %s\n", fmt(model.profile.min_slope).c_str());

    doc.add("contact", model.contact.contact && model.contact.margin > 0, model.contact.margin);
    doc.add("inner coincidence", model.inner_coincidence.zero,
            model.inner_coincidence.worst_ratio);
    doc.add("outer factor single-signed", model.outer_ratio.single_signed,
            model.outer_ratio.min_abs);
    doc.add("profile monotone", model.profile.min_slope > 0, model.profile.min_slope);

    if (!g.profile_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& row : cbu::profile_grid(model.profile, 1024)) {
            rows.push_back({row[0], row[1], row[2]});
        }
        cbu::write_csv(g.profile_path, {"r", "H", "dH_dr"}, rows);
        std::printf("profile written: %s (1024 rows)\n", g.profile_path.c_str());
    }
    finish_report(g, doc);
    return doc.all_pass() ? 0 : 1;
}

int run_bw_product(const GlobalArgs& g, int a, int b) {
    cbu::QuotientDescriptor q = cbu::product_quotient(a, b);
    cbu::SequenceReport seq = cbu::verify_exact_sequence(q.sequence);
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);

    doc.put("label", q.label);
    doc.put("curvature", std::vector<std::int64_t>{q.curvature[0], q.curvature[1]});
    doc.put("sequence_first", std::vector<std::int64_t>{q.sequence.first[0], q.sequence.first[1]});
    doc.put("sequence_second",
            std::vector<std::int64_t>{q.sequence.second[0], q.sequence.second[1]});
    doc.put("vacuous_factor", q.vacuous_factor);
    doc.put("unverified_note", q.unverified_note);
    doc.add("sequence exact", seq.exact, 0, seq.reason);

    std::fputs(doc.to_json().c_str(), stdout);
    finish_report(g, doc);
    return doc.all_pass() ? 0 : 1;
}

int run_cut(const GlobalArgs& g, int a, int b, int n, double r_max) {
    cbu::ZeroTestOptions opts = g.opts();
    cbu::TubeModel tube = cbu::make_tube(n, 0.02, r_max);
    cbu::CutModel cut = cbu::make_cut(cbu::make_action(a, b, tube, opts), opts);
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);
    cbu::RadialCheckReport radial = cbu::check_radial(cut.presentation, opts);

    doc.put("moment_map", cut.mu.mu.to_text());
    doc.put("zero_radius", cut.zero_radius);
    doc.put("feasible", true);  // make_cut throws "tube too small" otherwise
    doc.put("region_r_lo", cut.region->box.interval("r").lo);
    doc.put("region_r_hi", cut.region->box.interval("r").hi);
    doc.put("divisor_sphere_dim", std::int64_t(2 * n - 1));
    doc.put("divisor_lens_order", std::int64_t(cut.divisor.lens_order));
    doc.put("divisor_form", cut.divisor.form_text);
    doc.put("divisor_note", cut.divisor.note);
    doc.put("quotient_label", cut.quotient.label);
    doc.put("quotient_curvature",
            std::vector<std::int64_t>{cut.quotient.curvature[0], cut.quotient.curvature[1]});

    doc.add("sequence exact", cbu::verify_exact_sequence(cut.quotient.sequence).exact, 0);
    doc.add("eta invariance", cut.invariance.zero, cut.invariance.worst_ratio);
    doc.add("generator pushforward", cut.generator_pullback.zero,
            cut.generator_pullback.worst_ratio);
    doc.add("radial presentation", radial.ok, radial.slope_margin, radial.violated);

    std::fputs(doc.to_json().c_str(), stdout);
    finish_report(g, doc);
    return doc.all_pass() ? 0 : 1;
}

cbu::FibrationPresentation named_presentation(const std::string& name, int a, int b) {
    if (name == "surgery") {
        if (a != 1) throw std::invalid_argument("surgery presentation needs a = 1");
        return cbu::surgery_presentation(b);
    }
    if (name == "gromov") return cbu::gromov_presentation(a, b);
    if (name == "cut") return cbu::cut_presentation(a, b);
    throw std::invalid_argument("unknown presentation: " + name);
}

int run_uniq_compare(const GlobalArgs& g, int a, int b) {
    cbu::ComparisonMatrix m = cbu::compare_constructions(a, b, g.opts());
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);

    std::printf("comparison matrix at weight (%d, %d), boundary band [%s, %s]\n", a, b,
                fmt(m.band_lo).c_str(), fmt(m.band_hi).c_str());
    for (const cbu::ComparisonCell& cell : m.cells) {
        std::string pair = cell.lhs + " <-> " + cell.rhs;
        switch (cell.verdict) {
            case cbu::PairVerdict::Pass:
                std::printf("%-18s pass (path slope margin %s)\n", pair.c_str(),
                            fmt(cell.min_margin).c_str());
                doc.add(pair, true, cell.min_margin);
                break;
            case cbu::PairVerdict::Fail:
                std::printf("%-18s FAIL: %s\n", pair.c_str(), cell.detail.c_str());
                doc.add(pair, false, cell.min_margin, cell.detail);
                break;
            case cbu::PairVerdict::NotApplicable:
                std::printf("%-18s not applicable (%s)\n", pair.c_str(), cell.detail.c_str());
                break;
        }
    }
    finish_report(g, doc);
    return doc.all_pass() && m.all_applicable_pass ? 0 : 1;
}

int run_uniq_path(const GlobalArgs& g, int a, int b, const std::string& lhs,
                  const std::string& rhs, const std::string& emit_path) {
    cbu::FibrationPresentation f0 = named_presentation(lhs, a, b);
    cbu::FibrationPresentation f1 = named_presentation(rhs, a, b);
    cbu::PresentationBands bands = cbu::presentation_bands(a, b);
    cbu::ConvexPathReport path =
        cbu::convex_path(f0, f1, bands.r_out + 0.01, bands.R - 0.02, g.opts());
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);

    std::printf("convex path %s -> %s at weight (%d, %d)\n", lhs.c_str(), rhs.c_str(), a, b);
    if (path.ok) {
        std::printf("all %zu grid points pass; min slope margin %s\n", path.grid.size(),
                    fmt(path.min_margin).c_str());
    } else {
        std::printf("path FAILS: %s\n", path.failure.c_str());
    }
    doc.add("convex path " + lhs + " -> " + rhs, path.ok, path.min_margin, path.failure);

    const std::string& csv_path = emit_path.empty() ? g.profile_path : emit_path;
    if (!csv_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& [t, margin] : path.grid) rows.push_back({t, margin});
        cbu::write_csv(csv_path, {"t", "slope_margin"}, rows);
        std::printf("path margins written: %s (%zu rows)\n", csv_path.c_str(), rows.size());
    }
    finish_report(g, doc);
    return doc.all_pass() ? 0 : 1;
}

int run_verify_all(const GlobalArgs& g) {
    cbu::ReportDocument doc(g.command_echo, g.seed, g.tol);
    bool all = true;
    for (int i = 1; i <= 10; ++i) {
        cbu::CriterionResult crit = cbu::run_criterion(i, g.opts());
        std::printf("%s criterion %2d: %s (%zu checks)\n", crit.pass ? "PASS" : "FAIL", i,
                    crit.name.c_str(), crit.checks.size());
        std::fprintf(stderr, "criterion %d wall time: %.3fs\n", i, crit.seconds);
        for (const cbu::CheckResult& c : crit.checks) {
            doc.add(std::to_string(i) + "/" + c.name, c.pass, c.value, c.detail);
        }
        all = all && crit.pass;
    }
    std::printf("%s\n", all ? "all criteria pass" : "FAILURES above");
    finish_report(g, doc);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalArgs g;
    for (int i = 0; i < argc; ++i) {
        if (i) g.command_echo += ' ';
        g.command_echo += argv[i];
    }

    CLI::App app{"certificate checker for contact blow-up constructions"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "sampling seed");
    app.add_option("--samples", g.samples, "sample count per zero test");
    app.add_option("--tol", g.tol, "identity tolerance");
    app.add_option("--report", g.report_path, "write a JSON report here");
    app.add_option("--emit-profile", g.profile_path, "write a CSV profile here");

    // model dump
    int model_n = 2;
    double model_rmin = 0.02, model_rmax = 2.0;
    CLI::App* model = app.add_subcommand("model", "coordinate models");
    model->require_subcommand(1);
    CLI::App* model_dump = model->add_subcommand("dump", "print the tube model and its checks");
    model_dump->add_option("--n", model_n, "fiber half-dimension (1 or 2)");
    model_dump->add_option("--rmin", model_rmin, "inner radius");
    model_dump->add_option("--rmax", model_rmax, "outer radius");

    // blowup surgery
    int surgery_l = 1;
    double surgery_rin = 0.5, surgery_rout = 1.5, surgery_rmax = 2.0;
    CLI::App* blowup = app.add_subcommand("blowup", "blow-up constructions");
    blowup->require_subcommand(1);
    CLI::App* surgery = blowup->add_subcommand("surgery", "surgery gluing with certificates");
    surgery->add_option("--l", surgery_l, "twist parameter (>= 1)")->required();
    surgery->add_option("--rin", surgery_rin, "inner band edge");
    surgery->add_option("--rout", surgery_rout, "outer band edge");
    surgery->add_option("--rmax", surgery_rmax, "chart radius");

    // bw product
    int bw_a = 1, bw_b = 1;
    CLI::App* bw = app.add_subcommand("bw", "product quotient bookkeeping");
    bw->require_subcommand(1);
    CLI::App* bw_product = bw->add_subcommand("product", "weight-(a, b) quotient descriptor");
    bw_product->add_option("--a", bw_a, "first weight")->required();
    bw_product->add_option("--b", bw_b, "second weight")->required();

    // cut
    int cut_a = 1, cut_b = 1, cut_n = 2;
    double cut_rmax = 2.0;
    CLI::App* cut = app.add_subcommand("cut", "contact cut along the moment zero level");
    cut->add_option("--a", cut_a, "theta weight")->required();
    cut->add_option("--b", cut_b, "fiber weight")->required();
    cut->add_option("--n", cut_n, "fiber half-dimension (1 or 2)");
    cut->add_option("--radius", cut_rmax, "tube radius");

    // uniq compare / path
    int uniq_a = 1, uniq_b = 1;
    std::string path_lhs = "surgery", path_rhs = "cut";
    CLI::App* uniq = app.add_subcommand("uniq", "cross-construction comparisons");
    uniq->require_subcommand(1);
    CLI::App* uniq_compare = uniq->add_subcommand("compare", "full pairwise matrix");
    uniq_compare->add_option("--a", uniq_a, "theta weight")->required();
    uniq_compare->add_option("--b", uniq_b, "fiber weight")->required();
    CLI::App* uniq_path = uniq->add_subcommand("path", "convex path between two presentations");
    std::string path_emit;
    uniq_path->add_option("--a", uniq_a, "theta weight")->required();
    uniq_path->add_option("--b", uniq_b, "fiber weight")->required();
    uniq_path->add_option("--lhs", path_lhs, "surgery | gromov | cut");
    uniq_path->add_option("--rhs", path_rhs, "surgery | gromov | cut");
    uniq_path->add_option("--emit", path_emit, "write (t, slope margin) CSV here");

    CLI::App* verify = app.add_subcommand("verify-all", "run the ten-part certificate suite");

    // global flags (--seed, --report, ...) may follow the subcommand
    for (CLI::App* sub : {model, model_dump, blowup, surgery, bw, bw_product, cut, uniq,
                          uniq_compare, uniq_path, verify}) {
        sub->fallthrough(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (model_dump->parsed()) return run_model_dump(g, model_n, model_rmin, model_rmax);
        if (surgery->parsed())
            return run_blowup_surgery(g, surgery_l, surgery_rin, surgery_rout, surgery_rmax);
        if (bw_product->parsed()) return run_bw_product(g, bw_a, bw_b);
        if (cut->parsed()) return run_cut(g, cut_a, cut_b, cut_n, cut_rmax);
        if (uniq_compare->parsed()) return run_uniq_compare(g, uniq_a, uniq_b);
        if (uniq_path->parsed())
            return run_uniq_path(g, uniq_a, uniq_b, path_lhs, path_rhs, path_emit);
        if (verify->parsed()) return run_verify_all(g);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "certificate failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
