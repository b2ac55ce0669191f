#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hconv/functions.hpp"
#include "hconv/io.hpp"
#include "hconv/oracles.hpp"

// Exit codes shared by every subcommand:
//   0  convex / success
//   1  not convex / counterexample found
//   2  inconclusive (psi inside the numerical band)
//   3  input error (missing, malformed, or out-of-domain input)
//   4  internal disagreement or certification failure
namespace {

constexpr int kExitConvex = 0;
constexpr int kExitSuccess = 0;
constexpr int kExitNotConvex = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;
constexpr int kExitInternalError = 4;

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty())
        std::cout << text;
    else
        hconv::write_text(output_path, text);
}

std::string json_text(const hconv::json& j) { return j.dump(2) + "\n"; }

int verdict_exit_code(hconv::Verdict v) {
    switch (v) {
        case hconv::Verdict::convex: return kExitConvex;
        case hconv::Verdict::not_convex: return kExitNotConvex;
        default: return kExitInconclusive;
    }
}

int run_certify(const std::string& input, const std::string& output, double tol, bool verify) {
    const hconv::SymQuadratic q(hconv::read_matrix(input));
    const hconv::Certificate cert = hconv::certify(q, tol);
    hconv::json j = hconv::certificate_to_json(cert);

    bool scan_agrees = true;
    if (verify) {
        const hconv::BoundaryScan scan = hconv::boundary_scan(q, 100000, 0);
        j["scan"] = {{"min_value", scan.min_value},
                     {"argmin", hconv::vec_to_json(scan.argmin)}};
        if (cert.verdict == hconv::Verdict::convex)
            scan_agrees = scan.min_value >= -1e-7;
        else if (cert.verdict == hconv::Verdict::not_convex)
            scan_agrees = scan.min_value < 1e-7;
        j["scan_agrees"] = scan_agrees;
    }

    emit(output, json_text(j));
    if (!scan_agrees) return kExitInternalError;
    return verdict_exit_code(cert.verdict);
}

int run_project(const std::vector<std::string>& inputs, const std::string& output, double tol) {
    const hconv::ConeSet set = hconv::read_cone_set(inputs[0]);
    const hconv::HPoint p(hconv::read_vector(inputs[1]));
    const hconv::HPoint y = hconv::project(set, p, tol);
    const double residual = hconv::verify_projection(set, p, y, tol);
    hconv::json j{{"point", hconv::vec_to_json(y.coords())},
                  {"distance", hconv::distance(p, y)},
                  {"residual", residual}};
    emit(output, json_text(j));
    return kExitSuccess;
}

int run_geodesic(const std::vector<std::string>& inputs, const std::string& output,
                 long samples) {
    const hconv::HPoint p(hconv::read_vector(inputs[0]));
    const hconv::HPoint q(hconv::read_vector(inputs[1]));
    const hconv::GeodesicSegment segment(p, q);  // throws if the endpoints coincide

    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "t";
    for (long i = 1; i <= p.ambient(); ++i) csv << ",x" << i;
    csv << "\n";
    for (long row = 0; row <= samples; ++row) {
        const double t =
            segment.length * static_cast<double>(row) / static_cast<double>(samples);
        const hconv::HPoint g = segment.at(t);
        csv << t;
        for (long i = 0; i < g.ambient(); ++i) csv << "," << g.coords()[i];
        csv << "\n";
    }
    emit(output, csv.str());
    return kExitSuccess;
}

int run_spectrum(const std::vector<std::string>& inputs, const std::string& output) {
    const hconv::HPoint p(hconv::read_vector(inputs[0]));
    const hconv::HPoint q(hconv::read_vector(inputs[1]));
    const hconv::SpectrumReport dist = hconv::distance_hessian_spectrum(q, p);
    const hconv::SpectrumReport half = hconv::half_sq_distance_hessian_spectrum(q, p);
    const hconv::json j{
        {"distance", hconv::distance(p, q)},
        {"lambda1", dist.simple_eigenvalue},
        {"lambda2", dist.repeated_eigenvalue},
        {"mu1", half.simple_eigenvalue},
        {"mu2", half.repeated_eigenvalue},
        {"multiplicities",
         {{"lambda1", 1},
          {"lambda2", dist.repeated_multiplicity},
          {"mu1", 1},
          {"mu2", half.repeated_multiplicity}}}};
    emit(output, json_text(j));
    return kExitSuccess;
}

struct NamedReport {
    const char* name;
    hconv::ConvexityReport report;
};

hconv::json report_to_json(const NamedReport& entry) {
    const hconv::ConvexityReport& r = entry.report;
    hconv::json j{{"check", entry.name},
                  {"verdict", r.verdict == hconv::ConvexityVerdict::convex_evidence
                                  ? "convex-evidence"
                                  : "counterexample"},
                  {"worst_violation", r.worst_violation},
                  {"checks_run", r.checks_run}};
    if (std::string(entry.name) == "second-order") j["strict"] = r.strict;
    if (r.witness_p) j["witness_p"] = hconv::vec_to_json(r.witness_p->coords());
    if (r.witness_q) j["witness_q"] = hconv::vec_to_json(r.witness_q->coords());
    if (r.witness_p || r.witness_q) j["witness_t"] = r.witness_t;
    if (r.witness_v) j["witness_v"] = hconv::vec_to_json(*r.witness_v);
    return j;
}

int run_check_convexity(const std::string& function_spec, const std::string& set_path,
                        const std::string& output, long samples, std::uint64_t seed,
                        double tol, bool inject_disagreement) {
    const hconv::ConeSet set = hconv::read_cone_set(set_path);
    const long n = hconv::ambient_dim(set) - 1;

    hconv::SmoothFunction f;
    std::optional<hconv::Certificate> certificate;
    if (function_spec == "rho_q") {
        f = hconv::half_sq_distance_from(hconv::HPoint::apex(n));
    } else if (function_spec == "distance_q") {
        f = hconv::distance_from(hconv::HPoint::apex(n));
    } else if (function_spec == "log_barrier") {
        f = hconv::log_barrier(hconv::HPoint::apex(n));
    } else if (hconv::has_suffix(function_spec, ".json") ||
               hconv::has_suffix(function_spec, ".csv")) {
        const hconv::SymQuadratic q(hconv::read_matrix(function_spec));
        f = hconv::quadratic_function(q.matrix());
        certificate = hconv::certify(q);
    } else {
        throw hconv::io_error("unknown built-in function '" + function_spec +
                              "' (expected rho_q, distance_q, log_barrier, or a matrix file)");
    }

    std::vector<NamedReport> reports;
    reports.push_back({"zeroth-order", hconv::zeroth_order_check(f, set, samples, seed, tol)});
    reports.push_back({"first-order", hconv::first_order_check(f, set, samples, seed + 1, tol)});
    reports.push_back(
        {"gradient-monotonicity",
         hconv::gradient_monotonicity_check(f, set, samples, seed + 2, tol)});
    reports.push_back({"second-order", hconv::second_order_check(f, set, samples, seed + 3, tol)});

    bool counterexample = false;
    hconv::json checks = hconv::json::array();
    for (const NamedReport& entry : reports) {
        counterexample |= entry.report.verdict == hconv::ConvexityVerdict::counterexample;
        checks.push_back(report_to_json(entry));
    }
    if (inject_disagreement) counterexample = true;

    hconv::json j{{"checks", checks},
                  {"verdict", counterexample ? "counterexample" : "convex-evidence"}};

    bool disagreement = false;
    if (certificate) {
        j["certificate"] = hconv::certificate_to_json(*certificate);
        // A sampled counterexample on a subset contradicts a global convexity
        // certificate; the reverse direction is not a contradiction, because
        // the sampled checks only speak about the supplied set.
        disagreement = certificate->verdict == hconv::Verdict::convex && counterexample;
        j["agreement"] = disagreement ? "internal-disagreement" : "consistent";
    }

    emit(output, json_text(j));
    if (disagreement) return kExitInternalError;
    if (certificate) return verdict_exit_code(certificate->verdict);
    return counterexample ? kExitNotConvex : kExitConvex;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convex analysis on the hyperboloid model of hyperbolic space"};
    app.require_subcommand(1);

    std::string single_input, output, function_spec;
    std::vector<std::string> pair_inputs;
    double tol_certify = hconv::tol::psd;
    double tol_project = 1e-7;
    double tol_checks = 1e-8;
    long samples_geodesic = 100;
    long samples_checks = 200;
    std::uint64_t seed = 0;
    bool verify = false;
    bool inject_disagreement = false;

    CLI::App* certify = app.add_subcommand(
        "certify", "Certify convexity of a quadratic form from a matrix file");
    certify->add_option("--input", single_input, "Matrix file (JSON or CSV)")->required();
    certify->add_option("--output", output, "Output file (stdout when absent)");
    certify->add_option("--tol", tol_certify, "Eigenvalue and witness tolerance");
    certify->add_flag("--verify", verify, "Cross-check the verdict with a boundary scan");

    CLI::App* project =
        app.add_subcommand("project", "Metric projection of a point onto a convex set");
    project->add_option("--input", pair_inputs, "Set file then point file")
        ->required()
        ->expected(2);
    project->add_option("--output", output, "Output file (stdout when absent)");
    project->add_option("--tol", tol_project, "Certification tolerance");

    CLI::App* geodesic =
        app.add_subcommand("geodesic", "Sample the geodesic between two points as CSV");
    geodesic->add_option("--input", pair_inputs, "Start point file then end point file")
        ->required()
        ->expected(2);
    geodesic->add_option("--output", output, "Output file (stdout when absent)");
    geodesic->add_option("--samples", samples_geodesic, "Number of arcs (rows - 1)")
        ->check(CLI::PositiveNumber);

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Eigenvalues of the distance and squared-distance Hessians");
    spectrum->add_option("--input", pair_inputs, "Evaluation point file then base point file")
        ->required()
        ->expected(2);
    spectrum->add_option("--output", output, "Output file (stdout when absent)");

    CLI::App* check = app.add_subcommand(
        "check-convexity", "Sampled convexity checks of a function over a convex set");
    check
        ->add_option("--function", function_spec,
                     "Built-in name (rho_q, distance_q, log_barrier; anchored at the apex) "
                     "or a quadratic matrix file")
        ->required();
    check->add_option("--input", single_input, "Convex set file")->required();
    check->add_option("--output", output, "Output file (stdout when absent)");
    check->add_option("--samples", samples_checks, "Samples per check")
        ->check(CLI::PositiveNumber);
    check->add_option("--seed", seed, "Seed for the sampled checks");
    check->add_option("--tol", tol_checks, "Violation tolerance of the sampled checks");
    check->add_flag("--inject-disagreement", inject_disagreement)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (certify->parsed()) return run_certify(single_input, output, tol_certify, verify);
        if (project->parsed()) return run_project(pair_inputs, output, tol_project);
        if (geodesic->parsed()) return run_geodesic(pair_inputs, output, samples_geodesic);
        if (spectrum->parsed()) return run_spectrum(pair_inputs, output);
        if (check->parsed())
            return run_check_convexity(function_spec, single_input, output, samples_checks,
                                       seed, tol_checks, inject_disagreement);
    } catch (const hconv::numerical_failure& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return kExitInternalError;
    } catch (const hconv::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
