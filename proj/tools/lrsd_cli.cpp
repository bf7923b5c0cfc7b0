#include "lrsd/lrsd.h"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_not_converged = 3;

// Carries an exit status up to main together with the message to print.
struct CommandError {
    int status;
    std::string message;
};

void check(lrsd_status status, const std::string& context)
{
    if (status != LRSD_OK) {
        throw CommandError{exit_input, context + ": " + lrsd_last_error()};
    }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};

using Matrix = std::unique_ptr<lrsd_matrix, Deleter<lrsd_matrix, lrsd_matrix_destroy>>;
using Result = std::unique_ptr<lrsd_result, Deleter<lrsd_result, lrsd_result_destroy>>;
using Instance = std::unique_ptr<lrsd_instance, Deleter<lrsd_instance, lrsd_instance_destroy>>;
using Benchmark = std::unique_ptr<lrsd_benchmark, Deleter<lrsd_benchmark, lrsd_benchmark_destroy>>;
using Panel = std::unique_ptr<lrsd_panel, Deleter<lrsd_panel, lrsd_panel_destroy>>;
using Embedding = std::unique_ptr<lrsd_embedding, Deleter<lrsd_embedding, lrsd_embedding_destroy>>;
using SnpReport = std::unique_ptr<lrsd_snp_report, Deleter<lrsd_snp_report, lrsd_snp_report_destroy>>;

Matrix read_matrix(const std::string& path)
{
    lrsd_matrix* m = nullptr;
    check(lrsd_matrix_read_tsv(path.c_str(), &m), "reading " + path);
    return Matrix(m);
}

std::string num(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

class RunManifest {
public:
    explicit RunManifest(std::string subcommand) : start_(std::chrono::steady_clock::now())
    {
        add("subcommand", std::move(subcommand));
        add("version", lrsd_version());
    }

    void add(const std::string& key, std::string value) { entries_.emplace_back(key, std::move(value)); }
    void add(const std::string& key, double value) { add(key, num(value)); }
    template <class Int>
        requires std::is_integral_v<Int>
    void add(const std::string& key, Int value)
    {
        add(key, std::to_string(value));
    }

    void add_params(const lrsd_params& p, const lrsd_result* r)
    {
        add("sigma_hat", p.sigma_hat);
        add("alpha", p.alpha);
        add("alpha_rule", r ? lrsd_result_param_rule(r, LRSD_PARAM_ALPHA) : (p.alpha_auto ? "auto" : "user"));
        add("beta", p.beta);
        add("beta_rule", r ? lrsd_result_param_rule(r, LRSD_PARAM_BETA) : (p.beta_auto ? "auto" : "user"));
        add("threshold", p.threshold);
        add("threshold_rule",
            r ? lrsd_result_param_rule(r, LRSD_PARAM_THRESHOLD) : (p.threshold_auto ? "auto" : "user"));
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void write(const fs::path& path)
    {
        std::ofstream out(path);
        if (!out) throw CommandError{exit_input, "cannot write " + path.string()};
        for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
        out << "duration_seconds=" << fixed(elapsed(), 3) << '\n';
        if (!out) throw CommandError{exit_input, "failed writing " + path.string()};
    }

private:
    std::chrono::steady_clock::time_point start_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::map<std::string, std::string> read_manifest(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw CommandError{exit_input, "cannot open run manifest " + path.string()};
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void make_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CommandError{exit_input, "cannot create " + dir.string() + ": " + ec.message()};
}

// Solver flags shared by decompose, the benchmark and analyze.
struct SolverFlags {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> threshold;
    double beta_scale = 0.0;
    double threshold_scale = 0.0;
    double tol = 0.0;
    int max_iter = 0;

    void attach(CLI::App* cmd, bool with_threshold = true)
    {
        lrsd_solver_options d;
        lrsd_solver_options_init(&d);
        beta_scale = d.beta_scale;
        threshold_scale = d.threshold_scale;
        tol = d.rel_tolerance;
        max_iter = d.max_iterations;
        cmd->add_option("--alpha", alpha, "nuclear-norm weight (default: from the noise estimate)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--beta", beta, "l1 weight (default: from alpha)")->check(CLI::PositiveNumber);
        if (with_threshold) {
            cmd->add_option("--threshold", threshold, "detection threshold (default: scaled noise estimate)")
                ->check(CLI::NonNegativeNumber);
        }
        cmd->add_option("--beta-scale", beta_scale, "beta = scale * alpha / sqrt(max(n, p))")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--threshold-scale", threshold_scale, "auto threshold = scale * sigma_hat")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--tol", tol, "relative objective decrease that stops iteration")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
    }

    lrsd_solver_options options() const
    {
        lrsd_solver_options o;
        lrsd_solver_options_init(&o);
        o.alpha = alpha.value_or(0.0);
        o.beta = beta.value_or(0.0);
        o.threshold = threshold.value_or(-1.0);
        o.beta_scale = beta_scale;
        o.threshold_scale = threshold_scale;
        o.rel_tolerance = tol;
        o.max_iterations = max_iter;
        return o;
    }

    void record(RunManifest& m) const
    {
        m.add("beta_scale", beta_scale);
        m.add("threshold_scale", threshold_scale);
        m.add("rel_tolerance", tol);
        m.add("max_iterations", max_iter);
    }
};

void record_result(RunManifest& m, const lrsd_result* r)
{
    const std::size_t n = lrsd_result_trace_length(r);
    std::vector<double> trace(n);
    check(lrsd_result_trace(r, trace.data(), trace.size()), "objective trace");
    m.add("iterations", lrsd_result_iterations(r));
    m.add("converged", lrsd_result_converged(r) ? "true" : "false");
    m.add("rank_x", lrsd_result_rank(r));
    m.add("nnz_e", lrsd_result_nnz(r));
    m.add("final_objective", trace.empty() ? 0.0 : trace.back());
}

/* simulate */

struct SimulateArgs {
    int pattern = 0;
    double divisor = 1.0;
    std::uint64_t seed = 1;
    std::string out = "sim";
};

int run_simulate(const SimulateArgs& a)
{
    RunManifest manifest("simulate");
    lrsd_pattern_spec spec;
    lrsd_pattern_spec_init(&spec, a.pattern);
    spec.divisor = a.divisor;
    spec.seed = a.seed;

    lrsd_instance* raw = nullptr;
    check(lrsd_simulate(&spec, &raw), "simulate");
    Instance inst(raw);
    check(lrsd_instance_write(inst.get(), a.out.c_str()), "writing " + a.out);

    const double snr = lrsd_instance_snr(inst.get());
    manifest.add("pattern", a.pattern);
    manifest.add("divisor", a.divisor);
    manifest.add("seed", a.seed);
    manifest.add("scale", spec.scale);
    manifest.add("sparse_prob", spec.sparse_prob);
    manifest.add("sparse_value", spec.sparse_value);
    manifest.add("noise_sigma", spec.noise_sigma);
    manifest.add("output", a.out);
    manifest.add("snr", snr);
    manifest.write(fs::path(a.out) / "manifest.txt");

    std::cout << "snr\t" << fixed(snr) << '\n';
    return exit_ok;
}

/* decompose */

struct DecomposeArgs {
    std::string input;
    std::string out = "decomposition";
    SolverFlags solver;
};

int run_decompose(const DecomposeArgs& a)
{
    RunManifest manifest("decompose");
    Matrix d = read_matrix(a.input);
    const lrsd_solver_options opts = a.solver.options();

    lrsd_result* raw = nullptr;
    check(lrsd_decompose(d.get(), &opts, &raw), "decompose " + a.input);
    Result r(raw);
    make_dir(a.out);
    check(lrsd_result_write(r.get(), a.out.c_str()), "writing " + a.out);

    lrsd_params p;
    check(lrsd_result_params(r.get(), &p), "parameters");
    manifest.add("input", a.input);
    manifest.add("output", a.out);
    manifest.add("rows", lrsd_matrix_rows(d.get()));
    manifest.add("cols", lrsd_matrix_cols(d.get()));
    manifest.add_params(p, r.get());
    a.solver.record(manifest);
    record_result(manifest, r.get());
    manifest.write(fs::path(a.out) / "manifest.txt");

    const bool converged = lrsd_result_converged(r.get()) != 0;
    std::cout << "iterations\t" << lrsd_result_iterations(r.get()) << "\nconverged\t" << (converged ? "yes" : "no")
              << "\nrank\t" << lrsd_result_rank(r.get()) << "\nnnz\t" << lrsd_result_nnz(r.get()) << '\n';
    if (!converged) {
        std::cerr << "warning: iteration cap " << opts.max_iterations << " reached before convergence\n";
        return exit_not_converged;
    }
    return exit_ok;
}

/* evaluate */

struct EvaluateArgs {
    std::string run;
    std::string x;
    std::string e;
    std::string mask;
    std::string truth;
    std::string data;
    std::string threshold = "auto";
    std::string out;

    bool benchmark = false;
    int seeds = 20;
    std::uint64_t seed = 1;
    std::vector<int> patterns{1, 2, 3, 4};
    std::vector<double> divisors{1.0, 1.2, 1.5};
    SolverFlags solver;
};

void print_report(const lrsd_detection_report& r)
{
    auto val = [](double v, int undefined) { return undefined ? std::string("undefined") : fixed(v); };
    std::cout << "tp\t" << r.tp << "\nfp\t" << r.fp << "\nfn\t" << r.fn << "\ntn\t" << r.tn << "\nprecision\t"
              << val(r.precision, r.precision_undefined) << "\nrecall\t" << val(r.recall, r.recall_undefined)
              << "\nf1\t" << val(r.f1, r.f1_undefined) << '\n';
}

double resolve_threshold(const EvaluateArgs& a, RunManifest& manifest)
{
    if (a.threshold != "auto") {
        try {
            std::size_t used = 0;
            const double t = std::stod(a.threshold, &used);
            if (used != a.threshold.size() || !(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("");
            manifest.add("threshold_rule", "user");
            return t;
        } catch (const std::exception&) {
            throw CommandError{exit_input, "--threshold must be 'auto' or a non-negative number"};
        }
    }
    if (!a.data.empty()) {
        Matrix d = read_matrix(a.data);
        lrsd_solver_options opts = a.solver.options();
        opts.threshold = -1.0;
        lrsd_params p;
        check(lrsd_resolve_params(d.get(), &opts, &p), "resolving threshold from " + a.data);
        if (!std::isfinite(p.threshold)) {
            throw CommandError{exit_input, "noise scale estimate of " + a.data + " is 0; pass --threshold"};
        }
        manifest.add("sigma_hat", p.sigma_hat);
        manifest.add("threshold_rule", num(opts.threshold_scale) + "*sigma_hat");
        return p.threshold;
    }
    if (!a.run.empty()) {
        auto kv = read_manifest(fs::path(a.run) / "manifest.txt");
        const auto it = kv.find("threshold");
        if (it == kv.end() || it->second == "nan") {
            throw CommandError{exit_input, "run manifest in " + a.run + " has no resolved threshold; pass --threshold"};
        }
        manifest.add("threshold_rule", "from run manifest");
        return std::stod(it->second);
    }
    throw CommandError{exit_input, "--threshold auto needs --data or --run to estimate the noise scale"};
}

int run_benchmark(const EvaluateArgs& a)
{
    RunManifest manifest("evaluate-benchmark");
    std::vector<lrsd_pattern_spec> specs;
    for (int pattern : a.patterns) {
        for (double divisor : a.divisors) {
            lrsd_pattern_spec s;
            lrsd_pattern_spec_init(&s, pattern);
            s.divisor = divisor;
            s.seed = a.seed;
            specs.push_back(s);
        }
    }
    const lrsd_solver_options opts = a.solver.options();
    lrsd_benchmark* raw = nullptr;
    check(lrsd_benchmark_run(specs.data(), specs.size(), a.seeds, &opts, &raw), "benchmark");
    Benchmark b(raw);

    std::cout << "pattern\tdivisor\tsnr\tprecision\trecall\tf1\n";
    for (std::size_t k = 0; k < lrsd_benchmark_rows(b.get()); ++k) {
        lrsd_benchmark_row row;
        check(lrsd_benchmark_row_get(b.get(), k, &row), "benchmark row");
        std::cout << row.pattern << '\t' << row.divisor << '\t' << fixed(row.snr_mean, 2) << '\t'
                  << fixed(row.precision_mean, 3) << '\t' << fixed(row.recall_mean, 3) << '\t'
                  << fixed(row.f1_mean, 3) << " +- " << fixed(row.f1_std, 3) << '\n';
    }

    if (!a.out.empty()) {
        make_dir(a.out);
        check(lrsd_benchmark_write_tsv(b.get(), (fs::path(a.out) / "benchmark.tsv").c_str()), "writing benchmark");
        std::string pats, divs;
        for (int p : a.patterns) pats += (pats.empty() ? "" : ",") + std::to_string(p);
        for (double d : a.divisors) divs += (divs.empty() ? "" : ",") + num(d);
        manifest.add("patterns", pats);
        manifest.add("divisors", divs);
        manifest.add("seeds", a.seeds);
        manifest.add("base_seed", a.seed);
        manifest.add("alpha_rule", a.solver.alpha ? "user" : "(sqrt(n)+sqrt(p))*sigma_hat");
        if (a.solver.alpha) manifest.add("alpha", *a.solver.alpha);
        manifest.add("beta_rule", a.solver.beta ? "user" : num(a.solver.beta_scale) + "*alpha/sqrt(max(n,p))");
        if (a.solver.beta) manifest.add("beta", *a.solver.beta);
        manifest.add("threshold_rule",
                     a.solver.threshold ? "user" : num(a.solver.threshold_scale) + "*sigma_hat");
        if (a.solver.threshold) manifest.add("threshold", *a.solver.threshold);
        a.solver.record(manifest);
        manifest.write(fs::path(a.out) / "manifest.txt");
    }
    return exit_ok;
}

int run_evaluate(const EvaluateArgs& a)
{
    if (a.benchmark) return run_benchmark(a);
    if (a.truth.empty()) throw CommandError{exit_input, "--truth is required unless --benchmark is given"};

    RunManifest manifest("evaluate");
    Matrix predicted;
    if (!a.mask.empty()) {
        predicted = read_matrix(a.mask);
        manifest.add("mask", a.mask);
    } else {
        const std::string xp = !a.x.empty() ? a.x : (a.run.empty() ? "" : (fs::path(a.run) / "X.tsv").string());
        const std::string ep = !a.e.empty() ? a.e : (a.run.empty() ? "" : (fs::path(a.run) / "E.tsv").string());
        if (xp.empty() || ep.empty()) throw CommandError{exit_input, "give --mask, --run, or both --x and --e"};
        Matrix x = read_matrix(xp);
        Matrix e = read_matrix(ep);
        const double t = resolve_threshold(a, manifest);
        lrsd_matrix* raw = nullptr;
        check(lrsd_detect(x.get(), e.get(), t, &raw), "detect");
        predicted.reset(raw);
        manifest.add("x", xp);
        manifest.add("e", ep);
        manifest.add("threshold", t);
    }
    Matrix truth = read_matrix(a.truth);
    lrsd_detection_report report;
    check(lrsd_score(predicted.get(), truth.get(), &report), "scoring against " + a.truth);
    print_report(report);

    if (!a.out.empty()) {
        make_dir(a.out);
        check(lrsd_report_write_tsv(&report, (fs::path(a.out) / "report.tsv").c_str()), "writing report");
        manifest.add("truth", a.truth);
        manifest.add("output", a.out);
        manifest.add("f1", report.f1);
        manifest.write(fs::path(a.out) / "manifest.txt");
    }
    return exit_ok;
}

/* analyze */

struct AnalyzeArgs {
    std::string manifest;
    std::size_t min_coverage = 1;
    int embed_rank = 3;
    double group_radius = -1.0;
    bool one_sided = false;
    bool impute_median = false;
    std::string out = "analysis";
    SolverFlags solver;
};

void write_names_only(const fs::path& path, const lrsd_panel* panel)
{
    std::ofstream out(path);
    out << "study\n";
    for (std::size_t j = 0; j < lrsd_panel_studies(panel); ++j) out << lrsd_panel_study_name(panel, j) << '\n';
    if (!out) throw CommandError{exit_input, "failed writing " + path.string()};
}

int run_analyze(const AnalyzeArgs& a)
{
    RunManifest manifest("analyze");
    const fs::path out(a.out);
    make_dir(out);

    lrsd_align_options align;
    lrsd_align_options_init(&align);
    align.min_coverage = a.min_coverage;
    align.one_sided = a.one_sided ? 1 : 0;
    align.study_median_imputation = a.impute_median ? 1 : 0;

    lrsd_panel* raw_panel = nullptr;
    check(lrsd_panel_from_manifest(a.manifest.c_str(), &align, &raw_panel), "loading studies");
    Panel panel(raw_panel);
    check(lrsd_panel_write(panel.get(), (out / "z.tsv").c_str(), (out / "imputed.tsv").c_str()), "writing panel");

    lrsd_matrix* raw_z = nullptr;
    check(lrsd_panel_z_matrix(panel.get(), &raw_z), "z matrix");
    Matrix z(raw_z);

    const lrsd_solver_options opts = a.solver.options();
    lrsd_result* raw_result = nullptr;
    check(lrsd_decompose(z.get(), &opts, &raw_result), "decompose");
    Result r(raw_result);
    check(lrsd_result_write(r.get(), out.c_str()), "writing decomposition");

    const std::size_t rank = lrsd_result_rank(r.get());
    const std::size_t embed_rank = std::min<std::size_t>(static_cast<std::size_t>(a.embed_rank), rank);
    if (embed_rank < static_cast<std::size_t>(a.embed_rank)) {
        std::cerr << "warning: low-rank component has rank " << rank << "; embedding uses " << embed_rank
                  << " dimension(s)\n";
    }
    if (embed_rank == 0) {
        write_names_only(out / "embedding.tsv", panel.get());
    } else {
        lrsd_matrix* raw_x = nullptr;
        check(lrsd_result_low_rank(r.get(), &raw_x), "low-rank component");
        Matrix x(raw_x);
        lrsd_embedding* raw_emb = nullptr;
        check(lrsd_embed_studies(x.get(), embed_rank, &raw_emb), "embedding");
        Embedding emb(raw_emb);
        check(lrsd_embedding_write(emb.get(), (out / "embedding.tsv").c_str(), a.group_radius), "writing embedding");
    }

    lrsd_snp_report* raw_report = nullptr;
    check(lrsd_extract_snps(r.get(), -1.0, &raw_report), "extracting SNPs");
    SnpReport report(raw_report);
    check(lrsd_snp_report_write(report.get(), (out / "shared.tsv").c_str(), (out / "specific.tsv").c_str()),
          "writing SNP reports");

    lrsd_params p;
    check(lrsd_result_params(r.get(), &p), "parameters");
    manifest.add("manifest", a.manifest);
    manifest.add("output", a.out);
    manifest.add("min_coverage", a.min_coverage);
    manifest.add("z_convention", a.one_sided ? "one_sided" : "two_sided");
    manifest.add("imputation", a.impute_median ? "study_median" : "null_value");
    manifest.add("snps", lrsd_panel_snps(panel.get()));
    manifest.add("studies", lrsd_panel_studies(panel.get()));
    manifest.add("imputed_entries", lrsd_panel_imputed(panel.get()));
    manifest.add("clamped_p_values", lrsd_panel_clamped(panel.get()));
    manifest.add_params(p, r.get());
    a.solver.record(manifest);
    record_result(manifest, r.get());
    manifest.add("embed_rank_requested", a.embed_rank);
    manifest.add("embed_rank", embed_rank);
    manifest.add("group_radius", a.group_radius);
    manifest.add("shared_snps", lrsd_snp_report_shared_count(report.get()));
    manifest.add("specific_snps", lrsd_snp_report_specific_count(report.get()));
    manifest.write(out / "manifest.txt");

    std::cout << "snps\t" << lrsd_panel_snps(panel.get()) << "\nstudies\t" << lrsd_panel_studies(panel.get())
              << "\nrank\t" << rank << "\nshared\t" << lrsd_snp_report_shared_count(report.get()) << "\nspecific\t"
              << lrsd_snp_report_specific_count(report.get()) << "\nseconds\t" << fixed(manifest.elapsed(), 1)
              << '\n';
    if (!lrsd_result_converged(r.get())) {
        std::cerr << "warning: iteration cap " << opts.max_iterations << " reached before convergence\n";
        return exit_not_converged;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Low-rank plus sparse decomposition of multi-study association statistics"};
    app.set_version_flag("--version", std::string(lrsd_version()));
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic bicluster benchmark instance");
    simulate->add_option("--pattern", sim.pattern, "signal pattern")->required()->check(CLI::Range(1, 4));
    simulate->add_option("--divisor", sim.divisor, "signal divisor")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--out", sim.out, "output directory");

    DecomposeArgs dec;
    auto* decompose = app.add_subcommand("decompose", "split a matrix into low-rank and sparse parts");
    decompose->add_option("--input", dec.input, "matrix TSV")->required();
    decompose->add_option("--out", dec.out, "output directory");
    dec.solver.attach(decompose);

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "score detections against the truth, or run the benchmark");
    evaluate->add_option("--run", ev.run, "decompose output directory (X.tsv, E.tsv, manifest.txt)");
    evaluate->add_option("--x", ev.x, "low-rank component TSV");
    evaluate->add_option("--e", ev.e, "sparse component TSV");
    evaluate->add_option("--mask", ev.mask, "predicted 0/1 mask TSV")->excludes("--x")->excludes("--e");
    evaluate->add_option("--truth", ev.truth, "true 0/1 mask TSV");
    evaluate->add_option("--data", ev.data, "input matrix, used to estimate the auto threshold");
    evaluate->add_option("--out", ev.out, "output directory");
    evaluate->add_flag("--benchmark", ev.benchmark, "run the full simulation benchmark in process");
    evaluate->add_option("--seeds", ev.seeds, "replicates per setting")->check(CLI::PositiveNumber);
    evaluate->add_option("--seed", ev.seed, "first seed of each setting");
    evaluate->add_option("--patterns", ev.patterns, "patterns to benchmark")
        ->delimiter(',')
        ->check(CLI::Range(1, 4));
    evaluate->add_option("--divisors", ev.divisors, "signal divisors to benchmark")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    ev.solver.attach(evaluate, false);
    evaluate->add_option("--threshold", ev.threshold, "detection threshold, or 'auto'");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "decompose a panel of summary-statistic studies");
    analyze->add_option("--manifest", an.manifest, "study list: name<TAB>path per line")->required();
    analyze->add_option("--min-coverage", an.min_coverage, "keep SNPs reported by at least this many studies")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--embed-rank", an.embed_rank, "embedding dimension")->check(CLI::PositiveNumber);
    analyze->add_option("--group-radius", an.group_radius, "single-linkage radius for study groups (<0: none)");
    analyze->add_flag("--one-sided", an.one_sided, "convert p-values with the one-sided convention");
    analyze->add_flag("--impute-median", an.impute_median, "fill missing entries with the study median z");
    analyze->add_option("--out", an.out, "output directory");
    an.solver.attach(analyze);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (decompose->parsed()) return run_decompose(dec);
        if (evaluate->parsed()) return run_evaluate(ev);
        return run_analyze(an);
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
}
