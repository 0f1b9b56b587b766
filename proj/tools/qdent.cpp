// Command-line harness: reproduces the threshold tables, Monte Carlo sweeps,
// and detection curves, and manages design files.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qdent/designs.hpp"
#include "qdent/harness.hpp"

namespace {

struct Options {
    std::uint64_t seed = 1;
    long samples = 50000;
    double tol = 1e-5;
    int design_n = 9;
    int threads = 0;
    std::string out;
    std::string format = "csv";
};

void add_format_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--out", opt.out, "Write output to this path instead of stdout");
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void emit(const Options& opt, const std::string& csv, const nlohmann::json& json) {
    const std::string text = opt.format == "json" ? json.dump(2) + "\n" : csv;
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + opt.out);
    file << text;
    if (!file) throw std::runtime_error("write failed for " + opt.out);
}

void print_certificate(const Options& opt, const std::string& label,
                       const qdent::DesignCertificate& cert) {
    nlohmann::json json = {{"design", label},
                           {"moment_residual", cert.moment_residual},
                           {"frame_potential", cert.frame_potential},
                           {"frame_potential_gap", cert.frame_potential_gap},
                           {"max_norm_deviation", cert.max_norm_deviation},
                           {"tolerance", cert.tolerance},
                           {"pass", cert.pass}};
    std::ostringstream csv;
    csv << "design,moment_residual,frame_potential,frame_potential_gap,"
           "max_norm_deviation,tolerance,pass\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%.10e,%.10e,%.10e,%.10e,%.1e,%d\n", label.c_str(),
                  cert.moment_residual, cert.frame_potential, cert.frame_potential_gap,
                  cert.max_norm_deviation, cert.tolerance, cert.pass ? 1 : 0);
    csv << buf;
    emit(opt, csv.str(), json);
}

qdent::ProjectiveDesign build_for_export(int dim, int n, const std::string& kind,
                                         std::uint64_t seed) {
    if (kind == "sic") {
        const qdent::ProjectiveDesign p = qdent::build_sic(dim);
        if (n != 0 && n != p.n) {
            throw std::invalid_argument("sic designs have exactly dim^2 elements");
        }
        return p;
    }
    if (kind == "optimized") {
        return qdent::optimize_design(dim, n == 0 ? dim * dim : n, seed);
    }
    if (kind == "superimposed") {
        const qdent::ProjectiveDesign sic = qdent::build_sic(dim);
        if (n != 0 && n != 2 * sic.n) {
            throw std::invalid_argument("superimposed designs double the sic count (n = " +
                                        std::to_string(2 * sic.n) + ")");
        }
        qdent::RngStream rot(seed, 999);
        return qdent::superimpose(sic, sic, qdent::random_unitary(dim, rot));
    }
    throw std::invalid_argument("unknown design kind: " + kind);
}

int run(int argc, char** argv) {
    CLI::App app{"Entanglement-detection toolkit: criterion thresholds, random-state "
                 "sweeps, and quantum 2-design management"};
    app.require_subcommand(1);
    Options opt;

    auto* table1 = app.add_subcommand(
        "table1", "Noise thresholds for the four Bell-state families");
    table1->add_option("--tol", opt.tol, "Bisection bracket width")->capture_default_str();
    table1->add_option("--design-n", opt.design_n, "Element count of the d=2 general design")
        ->capture_default_str();
    add_format_options(table1, opt);

    auto* table2 = app.add_subcommand(
        "table2", "Detection fractions over random 2x2 NPT states");
    table2->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    table2->add_option("--samples", opt.samples, "Sample count")->capture_default_str();
    table2->add_option("--design-n", opt.design_n, "Element count of the d=2 general design")
        ->capture_default_str();
    table2->add_option("--threads", opt.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    add_format_options(table2, opt);

    auto* table3 = app.add_subcommand(
        "table3", "Noise thresholds for the 3x3 bound entangled state");
    table3->add_option("--tol", opt.tol, "Bisection bracket width")->capture_default_str();
    add_format_options(table3, opt);

    auto* table4 = app.add_subcommand(
        "table4", "Detection fractions over random 2x3 NPT states");
    table4->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    table4->add_option("--samples", opt.samples, "Sample count")->capture_default_str();
    table4->add_option("--design-n", opt.design_n, "Element count of the d=2 general design")
        ->capture_default_str();
    table4->add_option("--threads", opt.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    add_format_options(table4, opt);

    auto* chessboard = app.add_subcommand(
        "chessboard", "Detection fractions over random 3x3 chessboard states");
    chessboard->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    chessboard->add_option("--samples", opt.samples, "Sample count")->capture_default_str();
    chessboard->add_option("--threads", opt.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    add_format_options(chessboard, opt);

    auto* horodecki = app.add_subcommand(
        "horodecki", "Detection boundary curves for the 3x3 bound entangled family");
    horodecki->add_option("--tol", opt.tol, "Bisection bracket width")->capture_default_str();
    add_format_options(horodecki, opt);

    auto* designs = app.add_subcommand("designs", "Construct, inspect, and certify designs");
    designs->require_subcommand(1);

    int export_dim = 2;
    int export_n = 0;
    std::string export_kind = "optimized";
    auto* designs_export = designs->add_subcommand("export", "Construct a design and write it");
    designs_export->add_option("--dim", export_dim, "Dimension")->capture_default_str();
    designs_export->add_option("--design-n", export_n, "Element count (0 = dim^2)")
        ->capture_default_str();
    designs_export->add_option("--kind", export_kind, "Construction")
        ->check(CLI::IsMember({"sic", "optimized", "superimposed"}))
        ->capture_default_str();
    designs_export->add_option("--seed", opt.seed, "Seed for seeded constructions")
        ->capture_default_str();
    designs_export->add_option("--out", opt.out, "Output path (stdout if omitted)");

    std::string import_path;
    auto* designs_import = designs->add_subcommand(
        "import", "Read a design file, certify it, and optionally re-save it");
    designs_import->add_option("path", import_path, "Design file")->required();
    designs_import->add_option("--out", opt.out, "Re-save the design to this path");
    designs_import->add_option("--format", opt.format, "Certificate format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    std::string verify_path;
    auto* designs_verify = designs->add_subcommand("verify", "Certify a design file");
    designs_verify->add_option("path", verify_path, "Design file")->required();
    designs_verify->add_option("--format", opt.format, "Certificate format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* verify_all_cmd = app.add_subcommand(
        "verify-all", "Run every invariant suite and report pass/fail");
    verify_all_cmd->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    add_format_options(verify_all_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad arguments
    }

    if (table1->parsed()) {
        const qdent::ThresholdTable table = qdent::bell_threshold_table(opt.tol, opt.design_n);
        emit(opt, qdent::to_csv(table), qdent::to_json(table));
        return 0;
    }
    if (table2->parsed()) {
        const qdent::SweepSummary sweep =
            qdent::random_sweep(qdent::BipartiteDims(2, 2), opt.samples, opt.seed, {},
                                opt.threads, opt.design_n);
        emit(opt, qdent::to_csv(sweep), qdent::to_json(sweep));
        return 0;
    }
    if (table3->parsed()) {
        const qdent::ThresholdTable table = qdent::upb_threshold_table(opt.tol);
        emit(opt, qdent::to_csv(table), qdent::to_json(table));
        return 0;
    }
    if (table4->parsed()) {
        const qdent::SweepSummary sweep =
            qdent::random_sweep(qdent::BipartiteDims(2, 3), opt.samples, opt.seed, {},
                                opt.threads, opt.design_n);
        emit(opt, qdent::to_csv(sweep), qdent::to_json(sweep));
        return 0;
    }
    if (chessboard->parsed()) {
        const qdent::SweepSummary sweep =
            qdent::chessboard_sweep(opt.samples, opt.seed, opt.threads);
        emit(opt, qdent::to_csv(sweep), qdent::to_json(sweep));
        return 0;
    }
    if (horodecki->parsed()) {
        const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        const std::vector<qdent::CurvePoint> curves = qdent::horodecki_curves(grid, opt.tol);
        emit(opt, qdent::to_csv(curves), qdent::to_json(curves));
        return 0;
    }
    if (designs_export->parsed()) {
        const qdent::ProjectiveDesign p =
            build_for_export(export_dim, export_n, export_kind, opt.seed);
        if (opt.out.empty()) {
            std::cout << qdent::design_to_json(p);
        } else {
            qdent::save_design(p, opt.out);
        }
        return 0;
    }
    if (designs_import->parsed()) {
        const qdent::ProjectiveDesign p = qdent::load_design(import_path);
        const qdent::DesignCertificate cert = qdent::verify_design(p);
        if (!opt.out.empty()) qdent::save_design(p, opt.out);
        Options cert_opt = opt;
        cert_opt.out.clear();  // --out holds the re-saved design; certificate goes to stdout
        print_certificate(cert_opt, import_path, cert);
        return cert.pass ? 0 : 1;
    }
    if (designs_verify->parsed()) {
        const qdent::ProjectiveDesign p = qdent::load_design(verify_path);
        const qdent::DesignCertificate cert = qdent::verify_design(p);
        print_certificate(opt, verify_path, cert);
        return cert.pass ? 0 : 1;
    }
    if (verify_all_cmd->parsed()) {
        const qdent::VerifyReport report = qdent::verify_all(opt.seed);
        emit(opt, qdent::to_csv(report), qdent::to_json(report));
        return report.all_pass ? 0 : 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
