// Command-line front end: kernel audits, single fits and the sparsity experiment.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rkbs/io.hpp"
#include "rkbs/rkbs.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp_if_file(const std::string &arg) {
    std::ifstream in(arg);
    if (!in) return arg;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Numbers separated by commas, semicolons or whitespace, from a file path or inline text.
std::vector<double> parse_numbers(const std::string &arg, const char *what) {
    std::string text = slurp_if_file(arg);
    for (char &ch : text) {
        if (ch == ',' || ch == ';') ch = ' ';
    }
    std::istringstream is(text);
    std::vector<double> out;
    std::string token;
    while (is >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != token.size()) throw UsageError(std::string("could not parse ") + what + " entry \"" + token + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string("no ") + what + " given");
    return out;
}

/// "1e-7..1e1" expands to every power of ten in between; otherwise a number list.
std::vector<double> parse_mu_grid(const std::string &arg) {
    const auto dots = arg.find("..");
    if (dots == std::string::npos) return parse_numbers(arg, "mu grid");
    const double lo = std::stod(arg.substr(0, dots));
    const double hi = std::stod(arg.substr(dots + 2));
    if (!(lo > 0.0 && hi >= lo)) throw UsageError("mu range must satisfy 0 < lo <= hi");
    const int e_lo = static_cast<int>(std::lround(std::log10(lo)));
    const int e_hi = static_cast<int>(std::lround(std::log10(hi)));
    std::vector<double> grid;
    for (int e = e_lo; e <= e_hi; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out << text;
}

rkbs::Interval audit_interval(const rkbs::KernelSpec &kernel, const std::string &arg) {
    if (!arg.empty()) {
        const std::vector<double> ab = parse_numbers(arg, "interval");
        if (ab.size() != 2 || !(ab[0] < ab[1])) throw UsageError("--interval expects \"a,b\" with a < b");
        rkbs::Interval i = rkbs::Interval::closed(ab[0], ab[1]);
        if (!i.subset_of(kernel.domain())) i = rkbs::Interval::open(ab[0], ab[1]);
        if (!i.subset_of(kernel.domain())) throw UsageError("--interval lies outside the kernel domain");
        return i;
    }
    if (kernel.domain().bounded()) return kernel.domain();
    return rkbs::Interval::closed(-3.0, 3.0);
}

struct AuditOptions {
    std::string kernel;
    std::string condition = "all";
    int trials = 50;
    int grid = rkbs::kDefaultGridSize;
    std::uint64_t seed = 1;
    std::string interval;
    int n_min = 2;
    int n_max = 30;
    double beta = 1.0;
    std::string out;
};

int run_audit(const AuditOptions &opt) {
    const rkbs::KernelSpec kernel = rkbs::parse_kernel(opt.kernel);
    const rkbs::Interval interval = audit_interval(kernel, opt.interval);
    const rkbs::PointSampler sampler = rkbs::uniform_point_sampler(interval, opt.n_min, opt.n_max);

    std::vector<rkbs::AuditReport> reports;
    const bool all = opt.condition == "all";
    if (all || opt.condition == "a1") reports.push_back(rkbs::audit_a1(kernel, sampler, opt.trials, opt.seed));
    if (all || opt.condition == "a2") {
        const auto pairs = rkbs::square_grid(interval, std::min(opt.grid, 501));
        reports.push_back(rkbs::audit_a2(kernel, pairs));
    }
    if (all || opt.condition == "a4") reports.push_back(rkbs::audit_a4(kernel, sampler, opt.grid, opt.trials, opt.seed));
    if (all || opt.condition == "relaxed") {
        reports.push_back(rkbs::audit_relaxed_a4(kernel, sampler, opt.grid, opt.trials, opt.beta, opt.seed));
    }
    if (reports.empty()) throw UsageError("--condition must be one of a1, a2, a4, relaxed, all");

    const std::string a3 = std::string("A3: ") + rkbs::to_string(kernel.admissibility().a3) +
                           " from kernel metadata, not testable numerically.";
    rkbs::json doc = {{"kernel", rkbs::to_json(kernel)}, {"interval", rkbs::to_json(interval)}, {"a3", a3}};
    doc["reports"] = rkbs::json::array();
    for (const auto &r : reports) {
        doc["reports"].push_back(rkbs::to_json(r));
        std::cout << rkbs::to_string(r.condition) << ": " << rkbs::to_string(r.verdict) << " (worst value "
                  << r.stats.worst_value << ", " << r.stats.n_trials << " trials) " << r.message << '\n';
    }
    std::cout << a3 << '\n';
    if (!opt.out.empty()) write_text(opt.out, doc.dump(2) + "\n");
    return 0;
}

struct FitOptions {
    std::string kernel;
    std::string points;
    std::string values;
    double mu = 0.0;
    std::string method = "rkbs";
    std::string out;
    std::string dump_gram;
    int max_iter = 50000;
    double tol = 1e-8;
    bool average_loss = false;
};

int run_fit(const FitOptions &opt) {
    const rkbs::KernelSpec kernel = rkbs::parse_kernel(opt.kernel);
    const std::vector<double> pts = parse_numbers(opt.points, "points");
    const std::vector<double> vals = parse_numbers(opt.values, "values");
    if (pts.size() != vals.size()) throw UsageError("--points and --values differ in length");
    const rkbs::GramSystem system(kernel, rkbs::PointSet(pts));
    const rkbs::Vector y = Eigen::Map<const rkbs::Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    if (!opt.dump_gram.empty()) write_text(opt.dump_gram, rkbs::to_json(system.gram()).dump() + "\n");

    rkbs::FitResult result;
    if (opt.method == "rkbs") {
        rkbs::LassoConfig cfg;
        cfg.mu = opt.mu;
        cfg.max_iter = opt.max_iter;
        cfg.tol = opt.tol;
        cfg.average_loss = opt.average_loss;
        result = rkbs::lasso_gram(system, y, cfg);
    } else if (opt.method == "rkhs") {
        result = rkbs::ridge_gram(system, y, opt.mu);
    } else {
        throw UsageError("--method must be rkbs or rkhs");
    }
    rkbs::json doc = rkbs::to_json(result);
    doc["method"] = opt.method;
    doc["mu"] = opt.mu;
    doc["function"] = rkbs::to_json(rkbs::ExpansionFunction(kernel, system.points(), result.coefficients));
    const std::string text = doc.dump(2) + "\n";
    if (opt.out.empty()) std::cout << text;
    else write_text(opt.out, text);
    if (!result.converged) {
        std::cerr << "error: lasso solver stopped after " << result.iterations << " iterations with KKT residual "
                  << result.kkt_residual << " > " << opt.tol << '\n';
        return kExitNumerical;
    }
    return 0;
}

struct ExperimentOptions {
    std::string noise = "all";
    int trials = 50;
    int n = 200;
    std::uint64_t seed = 1;
    std::string mu_grid = "1e-7..1e1";
    std::string out;
    std::string json_out;
    double pepper_fraction = 1.0;
    double variance = 0.01;
    double halfwidth = 0.1;
    double magnitude = 0.1;
    int quadrature_nodes = 2001;
    int threads = 1;
};

int run_experiment_cmd(const ExperimentOptions &opt) {
    std::vector<rkbs::NoiseModel> models;
    const bool all = opt.noise == "all";
    if (all || opt.noise == "gaussian") models.push_back(rkbs::NoiseModel::gaussian(opt.variance));
    if (all || opt.noise == "uniform") models.push_back(rkbs::NoiseModel::uniform(opt.halfwidth));
    if (all || opt.noise == "pepper") models.push_back(rkbs::NoiseModel::pepper(opt.magnitude, opt.pepper_fraction));
    if (models.empty()) throw UsageError("--noise must be gaussian, uniform, pepper or all");

    std::vector<rkbs::TrialSummary> summaries;
    for (const auto &model : models) {
        rkbs::ExperimentConfig cfg;
        cfg.noise = model;
        cfg.trials = opt.trials;
        cfg.n_points = opt.n;
        cfg.master_seed = opt.seed;
        cfg.mu_grid = parse_mu_grid(opt.mu_grid);
        cfg.quadrature_nodes = opt.quadrature_nodes;
        cfg.threads = opt.threads;
        summaries.push_back(rkbs::run_experiment(cfg));
        for (const auto &note : summaries.back().notes) std::cerr << "note: " << note << '\n';
    }
    std::ostringstream csv;
    rkbs::write_csv(csv, summaries);
    if (opt.out.empty()) std::cout << csv.str();
    else write_text(opt.out, csv.str());
    if (!opt.json_out.empty()) {
        rkbs::json doc = rkbs::json::array();
        for (const auto &s : summaries) doc.push_back(rkbs::to_json(s));
        write_text(opt.json_out, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Sparse kernel learning in l1 reproducing kernel Banach spaces"};
    app.require_subcommand(1);

    AuditOptions audit;
    auto *audit_cmd = app.add_subcommand("audit", "Sampled checks of the kernel admissibility conditions");
    audit_cmd->add_option("--kernel", audit.kernel, "Kernel family name or JSON object")->required();
    audit_cmd->add_option("--condition", audit.condition, "a1|a2|a4|relaxed|all");
    audit_cmd->add_option("--trials", audit.trials, "Sampled point sets")->check(CLI::PositiveNumber);
    audit_cmd->add_option("--grid", audit.grid, "Uniform grid size for Lebesgue profiles")->check(CLI::PositiveNumber);
    audit_cmd->add_option("--seed", audit.seed, "Master seed");
    audit_cmd->add_option("--interval", audit.interval, "Sampling interval \"a,b\"");
    audit_cmd->add_option("--n-min", audit.n_min, "Smallest point count")->check(CLI::PositiveNumber);
    audit_cmd->add_option("--n-max", audit.n_max, "Largest point count")->check(CLI::PositiveNumber);
    audit_cmd->add_option("--beta", audit.beta, "Bound for the relaxed Lebesgue condition");
    audit_cmd->add_option("--out", audit.out, "Write the JSON report here");

    FitOptions fit;
    auto *fit_cmd = app.add_subcommand("fit", "Fit the l1 (rkbs) or ridge (rkhs) model on given data");
    fit_cmd->add_option("--kernel", fit.kernel, "Kernel family name or JSON object")->required();
    fit_cmd->add_option("--points", fit.points, "Sample points: CSV file or inline list")->required();
    fit_cmd->add_option("--values", fit.values, "Sample values: CSV file or inline list")->required();
    fit_cmd->add_option("--mu", fit.mu, "Regularization weight")->required()->check(CLI::NonNegativeNumber);
    fit_cmd->add_option("--method", fit.method, "rkbs|rkhs");
    fit_cmd->add_option("--out", fit.out, "Write the JSON result here");
    fit_cmd->add_option("--dump-gram", fit.dump_gram, "Write the Gram matrix as a JSON array of rows");
    fit_cmd->add_option("--max-iter", fit.max_iter, "Solver iteration cap")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--tol", fit.tol, "KKT tolerance")->check(CLI::PositiveNumber);
    fit_cmd->add_flag("--average-loss", fit.average_loss, "Scale the squared loss by 1/n");

    ExperimentOptions exp;
    auto *exp_cmd = app.add_subcommand("experiment", "Sparsity and accuracy of rkbs vs rkhs regularization");
    exp_cmd->add_option("--noise", exp.noise, "gaussian|uniform|pepper|all");
    exp_cmd->add_option("--trials", exp.trials, "Trials per noise model")->check(CLI::PositiveNumber);
    exp_cmd->add_option("--n", exp.n, "Number of equally spaced samples")->check(CLI::Range(2, 100000));
    exp_cmd->add_option("--seed", exp.seed, "Master seed");
    exp_cmd->add_option("--mu-grid", exp.mu_grid, "\"lo..hi\" powers of ten, or a comma list");
    exp_cmd->add_option("--out", exp.out, "CSV output path (stdout if omitted)");
    exp_cmd->add_option("--json", exp.json_out, "JSON output path with per-trial records");
    exp_cmd->add_option("--pepper-fraction", exp.pepper_fraction, "Probability a sample gets pepper noise")
        ->check(CLI::Range(0.0, 1.0));
    exp_cmd->add_option("--variance", exp.variance, "Gaussian noise variance")->check(CLI::NonNegativeNumber);
    exp_cmd->add_option("--halfwidth", exp.halfwidth, "Uniform noise half width")->check(CLI::NonNegativeNumber);
    exp_cmd->add_option("--magnitude", exp.magnitude, "Pepper noise magnitude")->check(CLI::NonNegativeNumber);
    exp_cmd->add_option("--quadrature-nodes", exp.quadrature_nodes, "Trapezoid nodes for the L2 error")
        ->check(CLI::Range(2, 10000000));
    exp_cmd->add_option("--threads", exp.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (audit_cmd->parsed()) return run_audit(audit);
        if (fit_cmd->parsed()) return run_fit(fit);
        if (exp_cmd->parsed()) return run_experiment_cmd(exp);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const rkbs::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numerical() ? kExitNumerical : kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
