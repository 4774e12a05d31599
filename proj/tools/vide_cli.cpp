// vide: command-line front end over the C API.
#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_io.hpp"
#include "vide/vide.h"

namespace {

namespace io = vide::cli;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void usage(const std::string& msg) {
    throw Failure{kExitUsage, msg};
}

std::string status_message(vide_status s) {
    return std::string(vide_status_string(s)) + ": " + vide_last_error_message();
}

int exit_code_for(vide_status s) {
    switch (s) {
        case VIDE_ERR_INVALID_ARGUMENT:
        case VIDE_ERR_DOMAIN:
        case VIDE_ERR_LOOKUP: return kExitUsage;
        default: return kExitNumeric;
    }
}

void check(vide_status s) {
    if (s != VIDE_OK) throw Failure{exit_code_for(s), status_message(s)};
}

struct ProblemDeleter {
    void operator()(vide_problem* p) const { vide_problem_destroy(p); }
};
struct TrajectoryDeleter {
    void operator()(vide_trajectory* t) const { vide_trajectory_destroy(t); }
};
struct GridDeleter {
    void operator()(vide_stability_grid* g) const { vide_stability_grid_destroy(g); }
};
struct TableauDeleter {
    void operator()(vide_tableau* t) const { vide_tableau_destroy(t); }
};
using ProblemPtr = std::unique_ptr<vide_problem, ProblemDeleter>;
using TrajectoryPtr = std::unique_ptr<vide_trajectory, TrajectoryDeleter>;
using GridPtr = std::unique_ptr<vide_stability_grid, GridDeleter>;
using TableauPtr = std::unique_ptr<vide_tableau, TableauDeleter>;

struct Options {
    std::string problem;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::string method = "implicit";
    std::size_t nodes = 101;
    double x0 = 0.0;
    double x_end = 10.0;
    double z_min = -1.0, z_max = 0.0, w_min = -1.0, w_max = 0.0;
    std::string grid = "101x101";
    std::size_t i_max = 10000;
    double bound = 2.0;
    std::optional<double> tol;
    std::string output;
    std::string format;
    unsigned threads = 1;
    bool incremental = false;
    bool third_order = false;
    std::string registry;
    std::size_t node_cap = 0;
    double h_max = 1.0;
    std::size_t samples = 11;
    int table = 0;
};

vide_method parse_method(const std::string& m) {
    if (m == "implicit") return VIDE_IMPLICIT;
    if (m == "explicit") return VIDE_EXPLICIT;
    usage("--method must be implicit or explicit");
}

std::optional<std::map<std::string, io::RegistryRow>> load_registry(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) usage("cannot open registry file " + path);
    try {
        return io::read_registry_csv(in);
    } catch (const io::FormatError& e) {
        usage(e.what());
    }
}

// Resolves a problem by name, honouring a registry override when one is loaded.
ProblemPtr make_named(const std::string& name, const std::optional<std::map<std::string, io::RegistryRow>>& reg) {
    vide_problem* raw = nullptr;
    if (reg) {
        const auto it = reg->find(name);
        if (it == reg->end()) throw Failure{kExitUsage, "problem '" + name + "' not in registry override"};
        check(vide_problem_linear(it->second.lambda, it->second.gamma, it->second.x0, it->second.x_end, &raw));
    } else {
        check(vide_problem_from_registry(name.c_str(), nullptr, 0.0, 10.0, &raw));
    }
    return ProblemPtr(raw);
}

ProblemPtr make_problem(const Options& o) {
    const bool has_pair = o.lambda.has_value() || o.gamma.has_value();
    if (has_pair && !(o.lambda && o.gamma)) usage("--lambda and --gamma must be given together");
    if (!std::isfinite(o.x0) || !std::isfinite(o.x_end) || !(o.x_end > o.x0)) usage("need finite --x0 < --x-end");
    ProblemPtr p;
    if (o.problem.empty() || o.problem == "test") {
        if (!has_pair) usage("the test problem needs --lambda and --gamma");
        vide_problem* raw = nullptr;
        check(vide_problem_linear(*o.lambda, *o.gamma, o.x0, o.x_end, &raw));
        p.reset(raw);
    } else {
        if (has_pair) usage("--lambda/--gamma apply only to --problem test");
        p = make_named(o.problem, load_registry(o.registry));
    }
    if (o.incremental) check(vide_problem_set_kernel_independent_of_x(p.get(), 1));
    return p;
}

vide_newton_config newton_config(const Options& o) {
    vide_newton_config cfg;
    vide_newton_config_default(&cfg);
    if (o.third_order) cfg.variant = VIDE_NEWTON_THIRD_ORDER;
    return cfg;
}

// Output goes to --output or stdout; content is produced fully before writing.
void emit(const Options& o, const std::string& content) {
    if (o.output.empty() || o.output == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw Failure{kExitUsage, "cannot open output file " + o.output};
    out << content;
    if (!out) throw Failure{kExitNumeric, "write failed: " + o.output};
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
    if (o.format.empty()) return;
    for (const char* a : allowed) {
        if (o.format == a) return;
    }
    usage("unsupported --format " + o.format + " for this command");
}

int cmd_solve(const Options& o) {
    require_format(o, {"csv"});
    if (o.nodes < 2) usage("--nodes must be at least 2");
    const auto method = parse_method(o.method);
    const auto problem = make_problem(o);
    const auto cfg = newton_config(o);

    vide_trajectory* raw = nullptr;
    check(vide_solve(problem.get(), o.nodes, method, &cfg, &raw));
    const TrajectoryPtr traj(raw);

    io::TrajectoryTable table;
    table.components = vide_trajectory_components(traj.get());
    const std::size_t n = vide_trajectory_size(traj.get());
    const double* v = vide_trajectory_values(traj.get());
    table.values.assign(v, v + n * table.components);
    for (std::size_t i = 0; i < n; ++i) table.x.push_back(vide_trajectory_x(traj.get(), i));
    std::ostringstream os;
    io::write_trajectory_csv(os, table);
    emit(o, os.str());
    return kExitOk;
}

int cmd_stability_region(const Options& o) {
    require_format(o, {"csv", "pbm", "pgm"});
    const auto method = parse_method(o.method);
    std::pair<std::size_t, std::size_t> grid;
    try {
        grid = io::parse_grid(o.grid);
    } catch (const io::FormatError& e) {
        usage(e.what());
    }
    vide_grid_spec spec{o.z_min, o.z_max, o.w_min, o.w_max, grid.first, grid.second, o.i_max, o.bound};
    if (spec.nz < 2 || spec.nw < 2) usage("--grid must be at least 2x2");
    if (spec.i_max < 1) usage("--imax must be at least 1");
    if (!(spec.z_min < spec.z_max) || !(spec.w_min < spec.w_max)) usage("empty or inverted rectangle");
    if (spec.z_max > 0.0 || spec.w_max > 0.0) usage("rectangle must lie in the closed third quadrant");
    if (o.threads < 1) usage("--threads must be at least 1");

    vide_stability_grid* raw = nullptr;
    check(vide_sweep_region(&spec, method, o.threads, &raw));
    const GridPtr g(raw);

    io::RegionRaster r;
    r.nz = spec.nz;
    r.nw = spec.nw;
    r.i_max = spec.i_max;
    r.z_min = spec.z_min;
    r.z_max = spec.z_max;
    r.w_min = spec.w_min;
    r.w_max = spec.w_max;
    r.method = o.method;
    r.cells.resize(r.nz * r.nw);
    for (std::size_t q = 0; q < r.nw; ++q) {
        for (std::size_t p = 0; p < r.nz; ++p) {
            auto& cell = r.cells[q * r.nz + p];
            vide_verdict v{};
            check(vide_stability_grid_cell(g.get(), p, q, &cell.z, &cell.w, &v));
            cell.stable = v.stable != 0;
            cell.first_exceed_index = v.first_exceed_index;
        }
    }
    std::ostringstream os;
    if (o.format == "csv") {
        io::write_region_csv(os, r);
    } else if (o.format == "pgm") {
        io::write_region_pgm(os, r);
    } else {
        io::write_region_pbm(os, r);
    }
    emit(o, os.str());
    return kExitOk;
}

std::pair<double, double> linear_pair(const Options& o) {
    if (o.lambda || o.gamma) {
        if (!(o.lambda && o.gamma)) usage("--lambda and --gamma must be given together");
        return {*o.lambda, *o.gamma};
    }
    if (o.problem.empty()) usage("give --problem or --lambda/--gamma");
    const auto p = make_named(o.problem, load_registry(o.registry));
    vide_problem_info info{};
    check(vide_problem_get_info(p.get(), &info));
    if (!info.has_linear_params) usage("problem has no (lambda, gamma) parameters");
    return {info.lambda, info.gamma};
}

int cmd_h_path(const Options& o) {
    require_format(o, {"csv"});
    if (!(o.h_max >= 0.0) || !std::isfinite(o.h_max)) usage("--h-max must be finite and non-negative");
    if (o.samples < 2) usage("--samples must be at least 2");
    if (o.i_max < 1) usage("--imax must be at least 1");
    const auto method = parse_method(o.method);
    const auto [lambda, gamma] = linear_pair(o);

    std::vector<double> h(o.samples), z(o.samples), w(o.samples);
    for (std::size_t k = 0; k < o.samples; ++k) {
        h[k] = o.h_max * (static_cast<double>(k) / static_cast<double>(o.samples - 1));
    }
    check(vide_h_path(lambda, gamma, h.data(), h.size(), z.data(), w.data()));

    std::ostringstream os;
    os << "h,z,w,stable,first_exceed_index\n";
    for (std::size_t k = 0; k < o.samples; ++k) {
        vide_verdict v{};
        check(vide_stability_verdict(method, z[k], w[k], o.i_max, o.bound, &v));
        os << io::format_double(h[k]) << ',' << io::format_double(z[k]) << ',' << io::format_double(w[k]) << ','
           << v.stable << ',' << v.first_exceed_index << '\n';
    }
    emit(o, os.str());
    return kExitOk;
}

// Max over coarse nodes of |Y5 - exact|, for problems with a known solution.
std::optional<double> true_error(const vide_problem* p, const vide_tableau* t) {
    vide_problem_info info{};
    if (vide_problem_get_info(p, &info) != VIDE_OK || !info.has_linear_params) return std::nullopt;
    const double* y5 = vide_tableau_column(t, 5);
    double err = 0.0;
    for (std::size_t i = 0; i < vide_tableau_coarse_size(t); ++i) {
        const double x = vide_tableau_coarse_x(t, i);
        err = std::max(err, std::abs(y5[i] - vide_analytic_test_solution(info.lambda, info.gamma, x - info.x0)));
    }
    return err;
}

int cmd_tolerance_search(const Options& o) {
    require_format(o, {"csv"});
    if (!o.tol || !(*o.tol > 0.0)) usage("--tol must be given and positive");
    if (o.nodes < 2) usage("--nodes must be at least 2");
    const auto method = parse_method(o.method);
    const auto problem = make_problem(o);

    std::size_t n_nodes = 0;
    vide_tableau* raw = nullptr;
    check(vide_nodes_for_tolerance(problem.get(), method, *o.tol, o.nodes, o.node_cap, &n_nodes, &raw));
    const TableauPtr tab(raw);

    std::ostringstream os;
    os << "n_nodes,coarse_nodes,error_estimate,true_error\n";
    os << n_nodes << ',' << vide_tableau_coarse_size(tab.get()) << ','
       << io::format_double(vide_tableau_error_estimate(tab.get())) << ',';
    if (const auto e = true_error(problem.get(), tab.get())) {
        os << io::format_double(*e);
    } else {
        os << "NA";
    }
    os << '\n';
    emit(o, os.str());
    return kExitOk;
}

int cmd_stability_search(const Options& o) {
    require_format(o, {"csv"});
    const auto problem = make_problem(o);
    vide_stability_search r{};
    check(vide_min_nodes_for_stability(problem.get(), o.node_cap, &r));
    std::ostringstream os;
    os << "n_nodes,h_s,z,w\n"
       << r.n_nodes << ',' << io::format_double(r.h_s) << ',' << io::format_double(r.z) << ','
       << io::format_double(r.w) << '\n';
    emit(o, os.str());
    return kExitOk;
}

struct PaperRow {
    const char* example;
    double value;
};

constexpr std::array<PaperRow, 3> kTable2{{{"example1", 505}, {"example2", 72}, {"example3", 9501}}};
constexpr std::array<PaperRow, 3> kTable1Loose{{{"example1", 1158}, {"example2", 207}, {"example3", 10044}}};
constexpr std::array<PaperRow, 3> kTable1Tight{{{"example1", 36606}, {"example2", 6519}, {"example3", 317613}}};

// Registry kernels ignore x, so every reproduction run uses the O(N) history sums.
std::optional<ProblemPtr> reproduce_problem(const char* name,
                                            const std::optional<std::map<std::string, io::RegistryRow>>& reg,
                                            io::ReportRow& row) {
    try {
        auto p = make_named(name, reg);
        check(vide_problem_set_kernel_independent_of_x(p.get(), 1));
        return p;
    } catch (const Failure& f) {
        row.note = "failed: " + f.message;
        return std::nullopt;
    }
}

int cmd_reproduce(const Options& o) {
    require_format(o, {"csv"});
    const auto reg = load_registry(o.registry);
    std::vector<io::ReportRow> rows;

    if (o.table == 2) {
        for (const auto& paper : kTable2) {
            io::ReportRow row{paper.example, paper.value, std::nullopt, ""};
            if (auto p = reproduce_problem(paper.example, reg, row)) {
                vide_stability_search r{};
                const vide_status s = vide_min_nodes_for_stability(p->get(), o.node_cap, &r);
                if (s == VIDE_OK) {
                    row.computed_value = static_cast<double>(r.n_nodes);
                    row.note = "h_s=" + io::format_double(r.h_s) + " z=" + io::format_double(r.z) +
                               " w=" + io::format_double(r.w);
                } else {
                    row.note = "failed: " + status_message(s);
                }
            }
            std::cerr << row.example << ": " << (row.computed_value ? "done" : row.note) << '\n';
            rows.push_back(std::move(row));
        }
    } else if (o.table == 1) {
        std::vector<std::pair<double, const std::array<PaperRow, 3>*>> runs;
        if (!o.tol || *o.tol == 1e-6) runs.emplace_back(1e-6, &kTable1Loose);
        if (!o.tol || *o.tol == 1e-12) runs.emplace_back(1e-12, &kTable1Tight);
        if (runs.empty()) usage("table 1 is tabulated only for --tol 1e-6 and 1e-12");
        for (const auto& [eps, table] : runs) {
            for (const auto& paper : *table) {
                std::ostringstream label;
                label << paper.example << " eps=" << eps;
                io::ReportRow row{label.str(), paper.value, std::nullopt, ""};
                if (auto p = reproduce_problem(paper.example, reg, row)) {
                    std::size_t n = 0;
                    vide_tableau* raw = nullptr;
                    const vide_status s = vide_nodes_for_tolerance(p->get(), VIDE_IMPLICIT, eps, 2, o.node_cap, &n, &raw);
                    const TableauPtr tab(raw);
                    if (s == VIDE_OK) {
                        row.computed_value = static_cast<double>(n);
                        row.note = "estimate=" + io::format_double(vide_tableau_error_estimate(tab.get()));
                        if (const auto e = true_error(p->get(), tab.get())) row.note += " true_error=" + io::format_double(*e);
                    } else {
                        row.note = "failed: " + status_message(s);
                    }
                }
                std::cerr << row.example << ": " << (row.computed_value ? "done" : row.note) << '\n';
                rows.push_back(std::move(row));
            }
        }
    } else {
        usage("--table must be 1 or 2");
    }

    std::ostringstream os;
    io::write_report_csv(os, rows);
    emit(o, os.str());
    return kExitOk;
}

void add_problem_flags(CLI::App* sub, Options& o) {
    sub->add_option("--problem", o.problem, "example1 | example2 | example3 | test");
    sub->add_option("--lambda", o.lambda, "lambda of the test problem");
    sub->add_option("--gamma", o.gamma, "gamma of the test problem");
    sub->add_option("--x0", o.x0, "interval start (test problem)");
    sub->add_option("--x-end", o.x_end, "interval end (test problem)");
    sub->add_option("--registry", o.registry, "CSV registry override (name,lambda,gamma,x0,x_end)");
    sub->add_flag("--incremental", o.incremental, "kernel ignores x: use O(N) history sums");
}

void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--output,-o", o.output, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv | pbm | pgm");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Volterra integro-differential equation solver"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve a problem on a uniform mesh");
    add_problem_flags(solve, o);
    add_output_flags(solve, o);
    solve->add_option("--method", o.method, "implicit | explicit");
    solve->add_option("--nodes", o.nodes, "number of mesh nodes");
    solve->add_flag("--third-order", o.third_order, "cubic Newton variant for implicit steps");

    auto* region = app.add_subcommand("stability-region", "sweep practical stability over a rectangle");
    add_output_flags(region, o);
    region->add_option("--method", o.method, "implicit | explicit");
    region->add_option("--zmin", o.z_min);
    region->add_option("--zmax", o.z_max);
    region->add_option("--wmin", o.w_min);
    region->add_option("--wmax", o.w_max);
    region->add_option("--grid", o.grid, "NZxNW lattice points");
    region->add_option("--imax", o.i_max, "recursion steps per point");
    region->add_option("--bound", o.bound, "stability bound");
    region->add_option("--threads", o.threads, "worker threads");

    auto* hpath = app.add_subcommand("h-path", "trace (h lambda, h^2 gamma) for h in [0, h-max]");
    add_problem_flags(hpath, o);
    add_output_flags(hpath, o);
    hpath->add_option("--method", o.method, "implicit | explicit");
    hpath->add_option("--h-max", o.h_max, "largest stepsize");
    hpath->add_option("--samples", o.samples, "number of equally spaced stepsizes");
    hpath->add_option("--imax", o.i_max, "recursion steps per sample");
    hpath->add_option("--bound", o.bound, "stability bound");

    auto* tol = app.add_subcommand("tolerance-search", "nodes needed for Y4 - Y5 <= tol");
    add_problem_flags(tol, o);
    add_output_flags(tol, o);
    tol->add_option("--method", o.method, "implicit | explicit");
    tol->add_option("--tol", o.tol, "tolerance")->required();
    tol->add_option("--nodes", o.nodes, "initial coarse nodes")->default_val(2);
    tol->add_option("--node-cap", o.node_cap, "finest-level node cap (0: default)");

    auto* stab = app.add_subcommand("stability-search", "fewest nodes for a bounded explicit solve");
    add_problem_flags(stab, o);
    add_output_flags(stab, o);
    stab->add_option("--node-cap", o.node_cap, "node cap (0: default)");

    auto* repro = app.add_subcommand("reproduce", "compare against reference node counts");
    add_output_flags(repro, o);
    repro->add_option("--table", o.table, "1 or 2")->required();
    repro->add_option("--tol", o.tol, "table 1 only: 1e-6 or 1e-12 (default both)");
    repro->add_option("--registry", o.registry, "CSV registry override (name,lambda,gamma,x0,x_end)");
    repro->add_option("--node-cap", o.node_cap, "node cap (0: default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*region) return cmd_stability_region(o);
        if (*hpath) return cmd_h_path(o);
        if (*tol) return cmd_tolerance_search(o);
        if (*stab) return cmd_stability_search(o);
        if (*repro) return cmd_reproduce(o);
    } catch (const Failure& f) {
        std::cerr << "vide: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "vide: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
