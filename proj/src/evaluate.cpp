#include "lrsd/evaluate.hpp"

#include "lrsd/error.hpp"
#include "lrsd/solver.hpp"
#include "lrsd/tsv.hpp"

#include <cmath>
#include <sstream>

namespace lrsd::eval {

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd summarize(const std::vector<double>& xs)
{
    MeanStd out;
    if (xs.empty()) {
        return out;
    }
    for (double x : xs) {
        out.mean += x;
    }
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - out.mean) * (x - out.mean);
        }
        out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

}  // namespace

DetectionReport score(const Mask& predicted, const Mask& truth)
{
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols()) {
        fail(Errc::shape_mismatch, "predicted and truth masks differ in shape");
    }
    DetectionReport r;
    r.tp = (predicted && truth).count();
    r.fp = (predicted && !truth).count();
    r.fn = (!predicted && truth).count();
    r.tn = (!predicted && !truth).count();

    if (r.tp + r.fp > 0) {
        r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    } else {
        r.precision_undefined = true;
    }
    if (r.tp + r.fn > 0) {
        r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    } else {
        r.recall_undefined = true;
    }
    if (r.precision + r.recall > 0.0) {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    } else {
        r.f1_undefined = true;
    }
    return r;
}

void write_report(const std::filesystem::path& path, const DetectionReport& r)
{
    std::ostringstream out;
    out << "tp\tfp\tfn\ttn\tprecision\trecall\tf1\tprecision_undefined\trecall_undefined\tf1_undefined\n"
        << r.tp << '\t' << r.fp << '\t' << r.fn << '\t' << r.tn << '\t' << tsv::format_double(r.precision) << '\t'
        << tsv::format_double(r.recall) << '\t' << tsv::format_double(r.f1) << '\t' << int(r.precision_undefined)
        << '\t' << int(r.recall_undefined) << '\t' << int(r.f1_undefined) << '\n';
    tsv::write_file(path, out.str());
}

DetectionReport run_instance(const sim::SimulatedInstance& instance, const BenchmarkOptions& options)
{
    ParameterRequest request;
    request.beta_scale = options.beta_scale;
    request.threshold_scale = options.threshold_scale;
    request.alpha = options.alpha;
    request.beta = options.beta;
    request.threshold = options.threshold;
    const ResolvedParameters params = resolve_parameters(instance.data, request);

    SolverConfig config;
    config.alpha = params.alpha;
    config.beta = params.beta;
    config.max_iterations = options.max_iterations;
    config.rel_tolerance = options.rel_tolerance;

    const SolverResult result = solve(instance.data, config);
    return score(detect(result, params.threshold), instance.truth_mask);
}

std::vector<BenchmarkRow> benchmark(const std::vector<sim::PatternSpec>& patterns, const BenchmarkOptions& options)
{
    if (options.seeds < 1) {
        fail(Errc::invalid_argument, "benchmark needs at least one seed");
    }
    std::vector<BenchmarkRow> rows;
    rows.reserve(patterns.size());
    for (const auto& base : patterns) {
        base.validate();
        std::vector<double> snr, precision, recall, f1;
        for (int k = 0; k < options.seeds; ++k) {
            sim::PatternSpec spec = base;
            spec.seed = base.seed + static_cast<std::uint64_t>(k);
            const auto instance = sim::generate(spec);
            const auto report = run_instance(instance, options);
            snr.push_back(instance.snr);
            precision.push_back(report.precision);
            recall.push_back(report.recall);
            f1.push_back(report.f1);
        }
        BenchmarkRow row;
        row.pattern = base.pattern_id;
        row.divisor = base.signal_divisor;
        row.seeds = options.seeds;
        row.snr_mean = summarize(snr).mean;
        const auto p = summarize(precision);
        const auto r = summarize(recall);
        const auto f = summarize(f1);
        row.precision_mean = p.mean;
        row.precision_std = p.std;
        row.recall_mean = r.mean;
        row.recall_std = r.std;
        row.f1_mean = f.mean;
        row.f1_std = f.std;
        rows.push_back(row);
    }
    return rows;
}

void write_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkRow>& rows)
{
    std::ostringstream out;
    out << "pattern\tdivisor\tsnr_mean\tprecision_mean\tprecision_std\trecall_mean\trecall_std\tf1_mean\tf1_std\n";
    for (const auto& r : rows) {
        out << r.pattern << '\t' << tsv::format_double(r.divisor) << '\t' << tsv::format_double(r.snr_mean) << '\t'
            << tsv::format_double(r.precision_mean) << '\t' << tsv::format_double(r.precision_std) << '\t'
            << tsv::format_double(r.recall_mean) << '\t' << tsv::format_double(r.recall_std) << '\t'
            << tsv::format_double(r.f1_mean) << '\t' << tsv::format_double(r.f1_std) << '\n';
    }
    tsv::write_file(path, out.str());
}

}  // namespace lrsd::eval
