// Command-line front end: coefficient tables, numeric pressure evaluation,
// convergence certificates, kernel solving/validation, and the exact
// enumeration oracle. All output is deterministic; maps serialize in sorted
// key order. Exit codes: 0 ok, 1 domain error, 2 certificate violation,
// 64 bad flags.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdexp/mdexp.hpp"

namespace {

using namespace mdexp;

struct CommonOptions {
    std::string kernel_file = "builtin-derived";
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& common, bool with_kernels = true) {
    if (with_kernels) {
        cmd->add_option("--kernel-file", common.kernel_file,
                        "Kernel table JSON, or 'builtin-derived' for the table "
                        "solved from the published coefficients")
            ->capture_default_str();
    }
    cmd->add_option("-o,--output", common.output,
                    "Write the report to a file instead of stdout");
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
}

KernelTable load_kernels(const std::string& source) {
    if (source == "builtin-derived") {
        return solve_from_a_table(published_a_table(), 6);
    }
    return kernel_table_from_json(load_json_file(source));
}

void emit(const CommonOptions& common, const Json& json_report,
          const std::string& table_report) {
    std::ostringstream text;
    if (common.format == "json") {
        text << json_report.dump(2) << "\n";
    } else {
        text << table_report;
    }
    if (common.output.empty()) {
        std::cout << text.str();
    } else {
        std::ofstream out(common.output);
        if (!out) {
            throw DomainError("cannot write " + common.output);
        }
        out << text.str();
    }
}

std::string rat_cell(const Rat& value) {
    std::ostringstream line;
    line << rat_to_string(value) << " = " << std::setprecision(15) << std::fixed
         << rat_to_double(value);
    return line.str();
}

// ---- coeffs ----------------------------------------------------------------

struct CoeffsArgs {
    CommonOptions common;
    int d = 1;
    int max_order = 6;
    int p_trunc = 0; // 0: max(8, max_order)
    int c_max = 0;
};

int run_coeffs(const CoeffsArgs& args) {
    const int p_trunc =
        args.p_trunc > 0 ? args.p_trunc : std::max(8, args.max_order);
    if (p_trunc < args.max_order) {
        throw DomainError("--p-trunc must be at least --max-order");
    }
    const KernelTable table = load_kernels(args.common.kernel_file);
    auto [alpha, report] = iterate_to_stability(table, p_trunc);
    const LambdaExpansion expansion = assemble_symbolic(alpha);
    const auto a = a_table(expansion, args.d);

    Json out{{"d", args.d}, {"max_order", args.max_order}, {"p_trunc", p_trunc}};
    Json a_json = Json::array();
    std::ostringstream text;
    text << "a_s(d = " << args.d << "), p_trunc = " << p_trunc << "\n";
    for (int s = 2; s <= args.max_order; ++s) {
        const Rat value = a.count(s) ? a.at(s) : Rat(0);
        a_json.push_back(rat_to_string(value));
        text << "  a_" << s << " = " << rat_cell(value) << "\n";
    }
    out["a"] = std::move(a_json);

    if (args.c_max > 0) {
        const auto ct = c_table(expansion, args.c_max);
        Json c_json = Json::object();
        for (const auto& [k, poly] : ct) {
            Json entry = Json::object();
            text << "  c_" << k << "(p):\n";
            for (const auto& [s, value] : poly) {
                entry[std::to_string(s)] = rat_to_string(value);
                text << "    p^" << s << ": " << rat_cell(value) << "\n";
            }
            c_json[std::to_string(k)] = std::move(entry);
        }
        out["c"] = std::move(c_json);
    }
    emit(args.common, out, text.str());
    return 0;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
    CommonOptions common;
    int d = 1;
    std::vector<double> p_values;
    double tol = kDefaultNumericTol;
    bool compare_oracle = false;
};

int run_eval(const EvalArgs& args) {
    const KernelTable table = load_kernels(args.common.kernel_file);
    if (args.compare_oracle && args.d != 1) {
        throw DomainError("--compare-oracle uses the d = 1 closed form");
    }
    Json rows = Json::array();
    std::ostringstream text;
    text << "lambda_" << args.d << "(p), tol = " << args.tol << "\n";
    for (double p : args.p_values) {
        const double lambda = eval_numeric(table, p, args.d, args.tol);
        Json row{{"p", p}, {"lambda", lambda}};
        text << "  p = " << std::setprecision(6) << std::defaultfloat << p
             << ": lambda = " << std::setprecision(15) << std::fixed << lambda;
        if (args.compare_oracle) {
            const double exact = lambda1_exact(p);
            row["exact"] = exact;
            row["abs_diff"] = std::fabs(lambda - exact);
            text << ", closed form = " << exact << " (|diff| = "
                 << std::setprecision(3) << std::scientific
                 << std::fabs(lambda - exact) << ")";
        }
        text << "\n";
        rows.push_back(std::move(row));
    }
    emit(args.common,
         Json{{"d", args.d}, {"tol", args.tol}, {"rows", std::move(rows)}},
         text.str());
    return 0;
}

// ---- certify ------------------------------------------------------------------

struct CertifyArgs {
    CommonOptions common;
    double bound_b = 0.0; // 0: use the kernel table's bound
    double eps = 0.0;     // 0: auto
    bool auto_eps = false;
    int d = 0;     // 0: constants only
    double p = -1; // < 0: 0.99 * p0
    int iters = 12;
};

int run_certify(const CertifyArgs& args) {
    KernelTable table = load_kernels(args.common.kernel_file);
    if (args.bound_b > 0.0) {
        table = KernelTable(table.kernels(), args.bound_b);
    }
    const double eps = args.eps > 0.0 ? args.eps : eps_max();
    auto [radius, binding_k] = p0(table.bound_b(), eps);

    std::ostringstream text;
    if (args.d == 0) {
        Json out{{"B", table.bound_b()},
                 {"epsilon", eps},
                 {"p0", radius},
                 {"binding_k", binding_k}};
        text << "B = " << table.bound_b() << "\nepsilon = "
             << std::setprecision(10) << eps << "\np0 = " << std::scientific
             << radius << "\nbinding_k = " << binding_k << "\n";
        emit(args.common, out, text.str());
        return 0;
    }

    const double p = args.p >= 0.0 ? args.p : 0.99 * radius;
    Certificate cert = certify_membership(table, p, args.d, eps);
    cert.contraction_ratio = empirical_contraction(table, p, args.d, args.iters);
    if (*cert.contraction_ratio >= 1.0) {
        throw MembershipViolated("empirical contraction ratio >= 1");
    }
    Json out = certificate_to_json(cert);
    out["d"] = args.d;
    out["p"] = p;
    text << "B = " << cert.bound_b << "\nepsilon = " << std::setprecision(10)
         << cert.epsilon << "\np0 = " << std::scientific << cert.p0
         << "\nbinding_k = " << cert.binding_k << "\nd = " << args.d
         << "\np = " << p << "\nmap_margin = " << cert.map_margin
         << "\ncontraction_ratio = " << *cert.contraction_ratio << "\n";
    emit(args.common, out, text.str());
    return 0;
}

// ---- kernels -------------------------------------------------------------------

struct KernelsSolveArgs {
    CommonOptions common;
    int p_trunc = 6;
};

int run_kernels_solve(const KernelsSolveArgs& args) {
    const KernelTable table = solve_from_a_table(published_a_table(), args.p_trunc);
    std::ostringstream text;
    text << "kernels solved from the published coefficients, B = "
         << table.bound_b() << "\n";
    for (const auto& [k, poly] : table.kernels()) {
        text << "  J_" << k << "(w):\n";
        for (const auto& [key, c] : poly.terms()) {
            text << "    w^" << key.second << ": " << rat_cell(c) << "\n";
        }
    }
    emit(args.common, kernel_table_to_json(table), text.str());
    return 0;
}

struct KernelsValidateArgs {
    CommonOptions common;
    double bound_b = 0.0;
    int d_max = 10;
};

int run_kernels_validate(const KernelsValidateArgs& args) {
    const KernelTable table = load_kernels(args.common.kernel_file);
    const double bound = args.bound_b > 0.0 ? args.bound_b : table.bound_b();
    const auto violations = validate_support(table);
    std::vector<int> dims;
    for (int d = 1; d <= args.d_max; ++d) {
        dims.push_back(d);
    }
    const bool bound_ok = kernel_bound_check(table, bound, dims);

    Json violations_json = Json::array();
    for (const auto& violation : violations) {
        violations_json.push_back(
            {{"k", violation.k}, {"w_power", violation.w_power}});
    }
    Json out{{"B", bound},
             {"d_max", args.d_max},
             {"support_violations", std::move(violations_json)},
             {"bound_ok", bound_ok}};
    std::ostringstream text;
    text << "support violations: " << violations.size() << "\n";
    for (const auto& violation : violations) {
        text << "  k = " << violation.k << ", w^" << violation.w_power << "\n";
    }
    text << "bound |J_k(1/d)| <= B^k with B = " << bound << ", d = 1.."
         << args.d_max << ": " << (bound_ok ? "holds" : "fails") << "\n";
    emit(args.common, out, text.str());
    return 0;
}

// ---- oracle --------------------------------------------------------------------

struct OracleArgs {
    CommonOptions common;
    int dim = 1;
    std::vector<int> extents;
    std::string boundary = "open";
    std::vector<double> p_values;
    double tol = kDefaultNumericTol;
};

int run_oracle(const OracleArgs& args) {
    LatticeSpec spec;
    spec.dimension = args.dim;
    spec.extents = args.extents;
    spec.boundary =
        args.boundary == "periodic" ? Boundary::periodic : Boundary::open;

    std::ostringstream text;
    if (args.p_values.empty()) {
        const MatchCountTable counts = count_matchings(spec);
        Json out = match_counts_to_json(counts);
        text << "matchings on the " << args.dim << "-dimensional lattice (N = "
             << counts.n_sites << ")\n";
        for (std::size_t m = 0; m < counts.counts.size(); ++m) {
            text << "  m = " << m << ": " << counts.counts[m].str() << "\n";
        }
        emit(args.common, out, text.str());
        return 0;
    }

    const KernelTable table = load_kernels(args.common.kernel_file);
    const auto rows = compare_series_oracle(table, spec, args.p_values, args.tol);
    Json rows_json = Json::array();
    text << "series vs enumeration, d = " << args.dim << "\n";
    for (const auto& row : rows) {
        Json row_json{{"p", row.p},
                      {"series", row.series},
                      {"finite", row.finite},
                      {"abs_diff", row.abs_diff}};
        text << "  p = " << std::setprecision(6) << std::defaultfloat << row.p
             << ": series = " << std::setprecision(15) << std::fixed
             << row.series << ", finite = " << row.finite << ", |diff| = "
             << std::setprecision(3) << std::scientific << row.abs_diff;
        if (row.exact_1d) {
            row_json["exact"] = *row.exact_1d;
            row_json["exact_diff"] = *row.exact_diff;
            text << ", closed form = " << std::setprecision(15) << std::fixed
                 << *row.exact_1d;
        }
        text << "\n";
        rows_json.push_back(std::move(row_json));
    }
    Json out{{"dimension", args.dim},
             {"extents", args.extents},
             {"boundary", args.boundary},
             {"rows", std::move(rows_json)}};
    emit(args.common, out, text.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact power-series expansion and certified convergence radius for "
        "the monomer-dimer pressure, with an exact enumeration oracle"};
    app.require_subcommand(1);

    CoeffsArgs coeffs;
    auto* coeffs_cmd = app.add_subcommand(
        "coeffs", "Exact power-series coefficients a_s(d)");
    coeffs_cmd->add_option("--d", coeffs.d, "Lattice dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    coeffs_cmd->add_option("--max-order", coeffs.max_order,
                           "Highest retained p-order")
        ->check(CLI::Range(2, 64))
        ->capture_default_str();
    coeffs_cmd->add_option(
        "--p-trunc", coeffs.p_trunc,
        "Series truncation order (default: 8, or --max-order if larger)");
    coeffs_cmd->add_option("--c-max", coeffs.c_max,
                           "Also regroup by powers of 1/d up to this order");
    add_common(coeffs_cmd, coeffs.common);

    EvalArgs eval;
    auto* eval_cmd =
        app.add_subcommand("eval", "Numeric pressure at fixed (p, d)");
    eval_cmd->add_option("--d", eval.d, "Lattice dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--p", eval.p_values, "Dimer density (repeatable)")
        ->required();
    eval_cmd->add_option("--tol", eval.tol, "Fixed-point tolerance")
        ->capture_default_str();
    eval_cmd->add_flag("--compare-oracle", eval.compare_oracle,
                       "Compare against the d = 1 closed form");
    add_common(eval_cmd, eval.common);

    CertifyArgs certify;
    auto* certify_cmd = app.add_subcommand(
        "certify", "Convergence certificate (epsilon, p0, ball mapping)");
    certify_cmd->add_option("--B", certify.bound_b,
                            "Kernel growth bound (default: table's bound)");
    certify_cmd->add_option("--eps", certify.eps, "Admissible epsilon");
    certify_cmd->add_flag("--auto-eps", certify.auto_eps,
                          "Use the largest admissible epsilon (default)");
    certify_cmd->add_option("--d", certify.d,
                            "Dimension for the ball-mapping check");
    certify_cmd->add_option("--p", certify.p,
                            "Density for the ball-mapping check "
                            "(default: 0.99 p0)");
    certify_cmd->add_option("--iters", certify.iters,
                            "Contraction-ratio iterations")
        ->capture_default_str();
    add_common(certify_cmd, certify.common);

    auto* kernels_cmd =
        app.add_subcommand("kernels", "Kernel table utilities");
    kernels_cmd->require_subcommand(1);
    KernelsSolveArgs kernels_solve;
    auto* solve_cmd = kernels_cmd->add_subcommand(
        "solve", "Solve the kernels from the published coefficients");
    solve_cmd->add_option("--p-trunc", kernels_solve.p_trunc,
                          "Pipeline truncation order")
        ->check(CLI::Range(6, 64))
        ->capture_default_str();
    add_common(solve_cmd, kernels_solve.common, false);
    KernelsValidateArgs kernels_validate;
    auto* validate_cmd = kernels_cmd->add_subcommand(
        "validate", "Support-window and growth-bound audit");
    validate_cmd->add_option("--B", kernels_validate.bound_b,
                             "Bound to test (default: table's bound)");
    validate_cmd->add_option("--d-max", kernels_validate.d_max,
                             "Test dimensions 1..d-max")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(validate_cmd, kernels_validate.common);

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "Exact matching counts; with --p, compare against the series");
    oracle_cmd->add_option("--dim", oracle.dim, "Lattice dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--extent", oracle.extents,
                           "Side length per dimension (repeatable)")
        ->required();
    oracle_cmd->add_option("--boundary", oracle.boundary, "Boundary condition")
        ->check(CLI::IsMember({"open", "periodic"}))
        ->capture_default_str();
    oracle_cmd->add_option("--p", oracle.p_values,
                           "Densities for the series comparison (repeatable)");
    oracle_cmd->add_option("--tol", oracle.tol, "Fixed-point tolerance")
        ->capture_default_str();
    add_common(oracle_cmd, oracle.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return 64;
    }

    try {
        if (*coeffs_cmd) {
            return run_coeffs(coeffs);
        }
        if (*eval_cmd) {
            return run_eval(eval);
        }
        if (*certify_cmd) {
            return run_certify(certify);
        }
        if (*solve_cmd) {
            return run_kernels_solve(kernels_solve);
        }
        if (*validate_cmd) {
            return run_kernels_validate(kernels_validate);
        }
        if (*oracle_cmd) {
            return run_oracle(oracle);
        }
    } catch (const MembershipViolated& e) {
        std::cerr << "certificate violation: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
