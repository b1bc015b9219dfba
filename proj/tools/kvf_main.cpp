// Command-line surface over the library: parse a field specification, run
// the canonicalization / classification / geometry / verification pipelines,
// and emit machine-readable key-value reports or CSV sample files.
//
// Exit codes: 0 success (verification passed), 1 verification failure,
// 2 input or validation error.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kvf/kvf.hpp"

namespace {

void add_tolerance_options(CLI::App* cmd, kvf::ToleranceConfig& tol) {
    cmd->add_option("--tol-zero-freq-rel", tol.zero_freq_rel,
                    "relative cutoff separating zero from nonzero frequencies");
    cmd->add_option("--tol-membership", tol.membership_tol,
                    "locus membership tolerance on |speed^2 - L^2|");
    cmd->add_option("--tol-eig-convergence", tol.eig_convergence,
                    "off-diagonal convergence threshold of the eigensolver");
    cmd->add_option("--tol-fd-step", tol.fd_step, "finite-difference step size");
    cmd->add_option("--tol-rank", tol.rank_tol, "relative rank cutoff");
}

std::string describe(const kvf::ConstantLengthLocus& locus) {
    const std::string m = std::to_string(locus.frame.ambient_dim);
    switch (locus.variant) {
        case kvf::LocusVariant::empty:
            return "Empty: no point has the prescribed speed";
        case kvf::LocusVariant::affine:
            if (locus.frame.kernel_dim() == locus.frame.ambient_dim)
                return "Affine: all of R^" + m;
            return "Affine: affine subspace of dimension " +
                   std::to_string(locus.intrinsic_dim) + " in R^" + m;
        case kvf::LocusVariant::ellipsoid_cylinder:
            return std::string("EllipsoidCylinder, ") +
                   (locus.compact ? "compact" : "not compact") + ", dim " +
                   std::to_string(locus.intrinsic_dim) + " in R^" + m;
    }
    return "?";
}

void print_frame(kvf::ReportWriter& w, const kvf::CanonicalFrame& frame) {
    w.section("frame");
    w.line("ambient_dim", frame.ambient_dim);
    w.line("plane_count", frame.plane_count());
    w.line("kernel_dim", frame.kernel_dim());
    w.line("frequencies", frame.frequencies());
    w.line("kernel_speed", frame.kernel_speed());
    w.line("v_ker", frame.v_ker);
    w.line("center", frame.center);
}

void print_locus(kvf::ReportWriter& w, const kvf::ConstantLengthLocus& locus,
                 const kvf::CompactnessReport& compactness) {
    w.section("locus");
    w.line("variant", kvf::to_string(locus.variant));
    w.line("description", describe(locus));
    w.line("length", locus.length);
    w.line("radius_squared", locus.radius_squared);
    w.line("ambient_dim", compactness.ambient_dim);
    w.line("plane_count", compactness.plane_count);
    w.line("kernel_dim", compactness.kernel_dim);
    w.line("intrinsic_dim", locus.intrinsic_dim);
    w.line("compact", locus.compact);
    w.line("note", compactness.parity_note);
}

std::vector<kvf::Vec> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kvf::ParseError("csv: cannot open '" + path + "'");
    std::vector<kvf::Vec> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        kvf::Vec row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(cell, &used);
            } catch (...) {
                throw kvf::ParseError("csv: line " + std::to_string(line_no) + ": '" + cell +
                                      "' is not a number");
            }
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size())
                throw kvf::ParseError("csv: line " + std::to_string(line_no) + ": '" + cell +
                                      "' is not a number");
            row.push_back(value);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw kvf::ParseError("csv: line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(rows.front().size()) + " columns, got " +
                                  std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw kvf::ParseError("csv: no data rows in '" + path + "'");
    return rows;
}

void write_points_csv(std::ostream& out, const std::vector<kvf::Vec>& points) {
    for (const kvf::Vec& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out << ',';
            out << kvf::ReportWriter::format(p[i]);
        }
        out << '\n';
    }
}

kvf::FieldSampleSet sample_set_from_rows(const std::vector<kvf::Vec>& rows) {
    const std::size_t cols = rows.front().size();
    if (cols == 0 || cols % 2 != 0)
        throw kvf::ParseError("csv: expected an even number of columns (point then vector), got " +
                              std::to_string(cols));
    const std::size_t m = cols / 2;
    kvf::FieldSampleSet samples;
    for (const kvf::Vec& row : rows) {
        samples.points.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
        samples.vectors.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
    }
    return samples;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"constant-length loci of Euclidean Killing fields"};
    app.require_subcommand(1);

    kvf::ToleranceConfig tol;

    std::string input_path;
    std::string samples_path;
    std::string out_path;
    double length = 0.0;
    std::size_t count = 10;
    std::uint64_t seed = 1234;
    std::uint64_t sample_seed = 1234;
    double kernel_box = 1.0;
    std::vector<double> point_coords;

    CLI::App* canonicalize = app.add_subcommand("canonicalize", "canonical frame of a field");
    canonicalize->add_option("input", input_path, "field spec JSON file")->required();
    add_tolerance_options(canonicalize, tol);

    CLI::App* classify = app.add_subcommand("classify", "classify the constant-length locus");
    classify->add_option("input", input_path, "field spec JSON file")->required();
    classify->add_option("--length", length, "prescribed field length L > 0")->required();
    add_tolerance_options(classify, tol);

    CLI::App* sample = app.add_subcommand("sample", "sample points on the locus (CSV)");
    sample->add_option("input", input_path, "field spec JSON file")->required();
    sample->add_option("--length", length, "prescribed field length L > 0")->required();
    sample->add_option("-n,--count", count, "number of points");
    sample->add_option("--seed", seed, "random seed");
    sample->add_option("--kernel-box", kernel_box, "half-width of the kernel sampling box");
    sample->add_option("--out", out_path, "output CSV path (default: stdout)");
    add_tolerance_options(sample, tol);

    CLI::App* geometry = app.add_subcommand("geometry", "shape operator and roundness report");
    geometry->add_option("input", input_path, "field spec JSON file")->required();
    geometry->add_option("--length", length, "prescribed field length L > 0")->required();
    geometry->add_option("--point", point_coords, "evaluation point (comma-separated coordinates)")
        ->delimiter(',');
    geometry->add_option("--sample-seed", sample_seed, "seed for the evaluation point when --point is absent");
    geometry->add_option("--seed", seed, "seed for the roundness samples");
    add_tolerance_options(geometry, tol);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite on a field");
    verify->add_option("input", input_path, "field spec JSON file")->required();
    verify->add_option("--length", length, "also check the locus of this length");
    verify->add_option("--seed", seed, "random seed");
    add_tolerance_options(verify, tol);

    CLI::App* fit = app.add_subcommand("fit", "fit an ambient Killing field to samples");
    fit->add_option("--samples", samples_path, "CSV with 2m columns: point then vector")->required();
    fit->add_option("--length", length, "expected length (adds the extendability certificate)");
    fit->add_option("--out", out_path, "write the fitted field spec JSON here");
    add_tolerance_options(fit, tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    kvf::ReportWriter w(std::cout);
    try {
        if (app.got_subcommand(canonicalize)) {
            const kvf::EuclideanKillingField field = kvf::load_field_spec(input_path);
            print_frame(w, kvf::canonicalize(field, tol));
            return 0;
        }

        if (app.got_subcommand(classify)) {
            const kvf::EuclideanKillingField field = kvf::load_field_spec(input_path);
            const kvf::CanonicalFrame frame = kvf::canonicalize(field, tol);
            print_locus(w, kvf::classify(frame, length, tol),
                        kvf::compactness_report(frame, length, tol));
            return 0;
        }

        if (app.got_subcommand(sample)) {
            const kvf::EuclideanKillingField field = kvf::load_field_spec(input_path);
            const kvf::CanonicalFrame frame = kvf::canonicalize(field, tol);
            const kvf::ConstantLengthLocus locus = kvf::classify(frame, length, tol);
            const std::vector<kvf::Vec> points = kvf::sample(locus, count, seed, kernel_box);
            if (out_path.empty()) {
                write_points_csv(std::cout, points);
            } else {
                std::ofstream out(out_path);
                if (!out) throw kvf::Error("cannot open '" + out_path + "' for writing");
                write_points_csv(out, points);
                std::cerr << "wrote " << points.size() << " points to " << out_path << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(geometry)) {
            const kvf::EuclideanKillingField field = kvf::load_field_spec(input_path);
            const kvf::CanonicalFrame frame = kvf::canonicalize(field, tol);
            const kvf::ConstantLengthLocus locus = kvf::classify(frame, length, tol);
            kvf::Vec point;
            if (point_coords.empty())
                point = kvf::sample(locus, 1, sample_seed).front();
            else
                point = kvf::Vec(point_coords.begin(), point_coords.end());

            const kvf::ShapeReport shape = kvf::shape_operator(locus, point, tol);
            w.section("geometry");
            w.line("variant", kvf::to_string(locus.variant));
            w.line("point", shape.point);
            w.line("normal_raw", shape.normal_raw);
            w.line("normal_unit", shape.normal_unit);
            w.line("rank", shape.rank);
            w.line("principal_curvatures", shape.principal_curvatures);
            w.line("axixi_paper", shape.axixi_paper);
            w.line("axixi_unit", shape.axixi_unit);

            const kvf::RoundnessReport roundness = kvf::roundness_test(locus, 64, seed, 1e-9, tol);
            w.section("roundness");
            w.line("is_round", roundness.is_round);
            w.line("omega_spread", roundness.omega_spread);
            w.line("axixi_spread", roundness.axixi_spread);
            w.line("sphere_radius", roundness.sphere_radius);
            w.line("sample_count", roundness.sample_count);
            return 0;
        }

        if (app.got_subcommand(verify)) {
            const kvf::EuclideanKillingField field = kvf::load_field_spec(input_path);
            std::optional<double> maybe_length;
            if (verify->count("--length")) maybe_length = length;
            const kvf::VerificationReport report = kvf::verify_field(field, maybe_length, tol, seed);

            w.section("verify");
            w.line("ambient_dim", report.ambient_dim);
            w.line("seed", static_cast<std::size_t>(seed));
            if (report.has_locus) {
                w.section("classification");
                w.line("variant", kvf::to_string(report.variant));
                w.line("length", report.length);
                w.line("radius_squared", report.radius_squared);
                w.line("intrinsic_dim", report.intrinsic_dim);
                w.line("compact", report.compact);
                w.line("note", report.parity_note);
            }
            for (const kvf::CheckResult& check : report.checks) {
                w.section("check " + check.name);
                w.line("passed", check.passed);
                w.line("observed", check.observed);
                w.line("bound", check.bound);
            }
            w.section("result");
            w.line("checks_run", report.checks.size());
            w.line("passed", report.passed());
            return report.passed() ? 0 : 1;
        }

        if (app.got_subcommand(fit)) {
            const kvf::FieldSampleSet samples = sample_set_from_rows(read_csv_rows(samples_path));
            if (fit->count("--length")) {
                const kvf::ExtendabilityReport report =
                    kvf::extendability_report(samples, length, tol);
                w.section("fit");
                w.line("sample_count", samples.points.size());
                w.line("ambient_dim", report.fit.field.dim());
                w.line("residual_rms", report.fit.residual_rms);
                w.line("nullity", report.fit.nullity);
                w.section("extendability");
                w.line("expected_length", report.expected_length);
                w.line("max_speed_deviation", report.max_speed_deviation);
                w.line("max_membership_defect", report.max_membership_defect);
                w.line("variant", kvf::to_string(report.variant));
                w.line("locus_consistency", report.locus_consistency);
                if (!out_path.empty()) {
                    std::ofstream out(out_path);
                    if (!out) throw kvf::Error("cannot open '" + out_path + "' for writing");
                    out << kvf::field_spec_json(report.fit.field).dump(2) << '\n';
                }
                w.section("field");
                w.line("spec", kvf::field_spec_json(report.fit.field).dump());
                return 0;
            }
            const kvf::KillingFit result = kvf::fit_ambient_killing(samples, tol);
            w.section("fit");
            w.line("sample_count", samples.points.size());
            w.line("ambient_dim", result.field.dim());
            w.line("residual_rms", result.residual_rms);
            w.line("nullity", result.nullity);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw kvf::Error("cannot open '" + out_path + "' for writing");
                out << kvf::field_spec_json(result.field).dump(2) << '\n';
            }
            w.section("field");
            w.line("spec", kvf::field_spec_json(result.field).dump());
            return 0;
        }
    } catch (const kvf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
