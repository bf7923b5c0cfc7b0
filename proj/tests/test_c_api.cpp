// Exercises the shared library purely through its C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrsd/lrsd.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct MatrixDeleter {
    void operator()(lrsd_matrix* m) const { lrsd_matrix_destroy(m); }
};
struct ResultDeleter {
    void operator()(lrsd_result* r) const { lrsd_result_destroy(r); }
};
using MatrixPtr = std::unique_ptr<lrsd_matrix, MatrixDeleter>;
using ResultPtr = std::unique_ptr<lrsd_result, ResultDeleter>;

MatrixPtr make_matrix(size_t rows, size_t cols, const std::vector<double>& v)
{
    lrsd_matrix* m = nullptr;
    REQUIRE(lrsd_matrix_from_values(rows, cols, v.data(), &m) == LRSD_OK);
    return MatrixPtr(m);
}

std::vector<double> values_of(const lrsd_matrix* m)
{
    std::vector<double> out(lrsd_matrix_rows(m) * lrsd_matrix_cols(m));
    REQUIRE(lrsd_matrix_values(m, out.data(), out.size()) == LRSD_OK);
    return out;
}

struct ScratchDir {
    fs::path path;
    ScratchDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("lrsd_capi_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~ScratchDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("version and status strings")
{
    CHECK(std::strlen(lrsd_version()) > 0);
    CHECK(std::string(lrsd_status_string(LRSD_OK)) != std::string(lrsd_status_string(LRSD_ERR_PARSE)));
    CHECK(std::strlen(lrsd_status_string(static_cast<lrsd_status>(99))) > 0);
}

TEST_CASE("null arguments are rejected with a message")
{
    lrsd_matrix* m = nullptr;
    CHECK(lrsd_matrix_from_values(2, 2, nullptr, &m) == LRSD_ERR_INVALID_ARGUMENT);
    CHECK(m == nullptr);
    CHECK(std::strlen(lrsd_last_error()) > 0);
    CHECK(lrsd_decompose(nullptr, nullptr, nullptr) == LRSD_ERR_INVALID_ARGUMENT);
    double out = 0.0;
    CHECK(lrsd_estimate_sigma(nullptr, &out) == LRSD_ERR_INVALID_ARGUMENT);
    // Destroying null handles is a no-op.
    lrsd_matrix_destroy(nullptr);
    lrsd_result_destroy(nullptr);
}

TEST_CASE("matrix round trip and capacity check")
{
    const std::vector<double> v{1, 2, 3, 4, 5, 6};
    auto m = make_matrix(2, 3, v);
    CHECK(lrsd_matrix_rows(m.get()) == 2);
    CHECK(lrsd_matrix_cols(m.get()) == 3);
    CHECK(values_of(m.get()) == v);

    std::vector<double> small(5);
    CHECK(lrsd_matrix_values(m.get(), small.data(), small.size()) == LRSD_ERR_INVALID_ARGUMENT);

    ScratchDir dir;
    const auto path = (dir.path / "m.tsv").string();
    REQUIRE(lrsd_matrix_write_tsv(m.get(), path.c_str()) == LRSD_OK);
    lrsd_matrix* back = nullptr;
    REQUIRE(lrsd_matrix_read_tsv(path.c_str(), &back) == LRSD_OK);
    MatrixPtr owned(back);
    CHECK(values_of(back) == v);

    const std::vector<double> bad{1, NAN, 3, 4};
    lrsd_matrix* nan_m = nullptr;
    CHECK(lrsd_matrix_from_values(2, 2, bad.data(), &nan_m) == LRSD_ERR_DOMAIN);

    CHECK(lrsd_matrix_read_tsv((dir.path / "absent.tsv").string().c_str(), &back) == LRSD_ERR_IO);
    write(dir.path / "ragged.tsv", "1\t2\n3\n");
    CHECK(lrsd_matrix_read_tsv((dir.path / "ragged.tsv").string().c_str(), &back) == LRSD_ERR_PARSE);
    CHECK(std::string(lrsd_last_error()).find(":2") != std::string::npos);
}

TEST_CASE("numeric helpers")
{
    double z = 0.0;
    REQUIRE(lrsd_inverse_normal_cdf(0.975, &z) == LRSD_OK);
    CHECK(z == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(lrsd_inverse_normal_cdf(0.0, &z) == LRSD_ERR_DOMAIN);
    REQUIRE(lrsd_p_to_z(0.05, 0, &z) == LRSD_OK);
    CHECK(z == doctest::Approx(1.959963984540054).epsilon(1e-12));
    REQUIRE(lrsd_p_to_z(0.05, 1, &z) == LRSD_OK);
    CHECK(z == doctest::Approx(1.6448536269514722).epsilon(1e-12));

    auto m = make_matrix(1, 5, {1, 2, 3, 4, 100});
    double s = 0.0;
    REQUIRE(lrsd_matrix_median(m.get(), &s) == LRSD_OK);
    CHECK(s == 3.0);
    REQUIRE(lrsd_estimate_sigma(m.get(), &s) == LRSD_OK);
    CHECK(s == doctest::Approx(1.48));
}

TEST_CASE("zero matrix decomposes to zeros with explicit penalties")
{
    auto d = make_matrix(3, 4, std::vector<double>(12, 0.0));
    lrsd_solver_options opts;
    lrsd_solver_options_init(&opts);
    CHECK(opts.beta_scale == 2.0);
    CHECK(opts.threshold_scale == 0.25);

    // Automatic penalties need a nonzero noise scale.
    lrsd_result* r = nullptr;
    CHECK(lrsd_decompose(d.get(), &opts, &r) == LRSD_ERR_DEGENERATE);
    CHECK(std::string(lrsd_last_error()).find("sigma_hat") != std::string::npos);

    opts.alpha = 1.0;
    opts.beta = 1.0;
    REQUIRE(lrsd_decompose(d.get(), &opts, &r) == LRSD_OK);
    ResultPtr res(r);
    CHECK(lrsd_result_converged(r));
    CHECK(lrsd_result_iterations(r) == 1);
    CHECK(lrsd_result_rank(r) == 0);
    CHECK(lrsd_result_nnz(r) == 0);
    CHECK(std::string(lrsd_result_param_rule(r, LRSD_PARAM_ALPHA)) == "user");

    lrsd_matrix* x = nullptr;
    REQUIRE(lrsd_result_low_rank(r, &x) == LRSD_OK);
    MatrixPtr xo(x);
    for (double v : values_of(x)) CHECK(v == 0.0);

    // No automatic threshold exists when sigma_hat is zero.
    lrsd_matrix* mask = nullptr;
    CHECK(lrsd_result_detect(r, -1.0, &mask) == LRSD_ERR_DEGENERATE);
    REQUIRE(lrsd_result_detect(r, 0.5, &mask) == LRSD_OK);
    MatrixPtr mo(mask);
    for (double v : values_of(mask)) CHECK(v == 0.0);
}

TEST_CASE("decomposition of random data")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> v(30 * 20);
    for (auto& x : v) x = g(rng);
    auto d = make_matrix(30, 20, v);

    lrsd_solver_options opts;
    lrsd_solver_options_init(&opts);
    lrsd_params params{};
    REQUIRE(lrsd_resolve_params(d.get(), &opts, &params) == LRSD_OK);
    CHECK(params.alpha_auto);
    CHECK(params.alpha == doctest::Approx((std::sqrt(30.0) + std::sqrt(20.0)) * params.sigma_hat));
    CHECK(params.beta == doctest::Approx(2.0 * params.alpha / std::sqrt(30.0)));
    CHECK(params.threshold == doctest::Approx(0.25 * params.sigma_hat));

    lrsd_result* r = nullptr;
    REQUIRE(lrsd_decompose(d.get(), &opts, &r) == LRSD_OK);
    ResultPtr res(r);
    CHECK(lrsd_result_converged(r));

    std::vector<double> trace(lrsd_result_trace_length(r));
    REQUIRE(trace.size() >= 2);
    REQUIRE(lrsd_result_trace(r, trace.data(), trace.size()) == LRSD_OK);
    for (size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-10 * std::abs(trace[k - 1]));
    CHECK(lrsd_result_trace(r, trace.data(), trace.size() - 1) == LRSD_ERR_INVALID_ARGUMENT);

    lrsd_matrix *x = nullptr, *e = nullptr;
    REQUIRE(lrsd_result_low_rank(r, &x) == LRSD_OK);
    REQUIRE(lrsd_result_sparse(r, &e) == LRSD_OK);
    MatrixPtr xo(x), eo(e);
    double f = 0.0, resid = 0.0;
    REQUIRE(lrsd_objective(d.get(), x, e, params.alpha, params.beta, &f) == LRSD_OK);
    CHECK(f == doctest::Approx(trace.back()).epsilon(1e-12));
    REQUIRE(lrsd_optimality_residual(d.get(), x, e, params.alpha, params.beta, &resid) == LRSD_OK);
    CHECK(resid < 1e-4 * (params.alpha + params.beta));

    ScratchDir dir;
    REQUIRE(lrsd_result_write(r, (dir.path / "out").string().c_str()) == LRSD_OK);
    CHECK(fs::exists(dir.path / "out" / "X.tsv"));
    CHECK(fs::exists(dir.path / "out" / "E.tsv"));
    CHECK(fs::exists(dir.path / "out" / "trace.tsv"));

    auto wrong = make_matrix(2, 2, {1, 2, 3, 4});
    CHECK(lrsd_objective(d.get(), wrong.get(), e, 1, 1, &f) == LRSD_ERR_SHAPE);
}

TEST_CASE("simulate, detect and score")
{
    lrsd_pattern_spec spec;
    lrsd_pattern_spec_init(&spec, 1);
    spec.seed = 7;
    lrsd_instance* inst = nullptr;
    REQUIRE(lrsd_simulate(&spec, &inst) == LRSD_OK);
    CHECK(lrsd_instance_snr(inst) == doctest::Approx(2.5));

    lrsd_matrix *data = nullptr, *truth = nullptr;
    REQUIRE(lrsd_instance_data(inst, &data) == LRSD_OK);
    REQUIRE(lrsd_instance_truth_mask(inst, &truth) == LRSD_OK);
    MatrixPtr data_o(data), truth_o(truth);
    CHECK(lrsd_matrix_rows(data) == 100);
    CHECK(lrsd_matrix_cols(data) == 50);

    lrsd_solver_options opts;
    lrsd_solver_options_init(&opts);
    lrsd_result* r = nullptr;
    REQUIRE(lrsd_decompose(data, &opts, &r) == LRSD_OK);
    ResultPtr res(r);
    lrsd_matrix* mask = nullptr;
    REQUIRE(lrsd_result_detect(r, -1.0, &mask) == LRSD_OK);
    MatrixPtr mask_o(mask);
    lrsd_detection_report rep{};
    REQUIRE(lrsd_score(mask, truth, &rep) == LRSD_OK);
    CHECK(rep.tp + rep.fp + rep.fn + rep.tn == 5000);
    CHECK(rep.f1 > 0.5);

    ScratchDir dir;
    REQUIRE(lrsd_instance_write(inst, dir.path.string().c_str()) == LRSD_OK);
    CHECK(fs::exists(dir.path / "meta.txt"));
    REQUIRE(lrsd_report_write_tsv(&rep, (dir.path / "report.tsv").string().c_str()) == LRSD_OK);
    lrsd_instance_destroy(inst);

    spec.pattern = 9;
    CHECK(lrsd_simulate(&spec, &inst) == LRSD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("benchmark rows")
{
    lrsd_pattern_spec specs[2];
    lrsd_pattern_spec_init(&specs[0], 2);
    lrsd_pattern_spec_init(&specs[1], 2);
    specs[1].divisor = 1.5;
    lrsd_solver_options opts;
    lrsd_solver_options_init(&opts);
    lrsd_benchmark* b = nullptr;
    REQUIRE(lrsd_benchmark_run(specs, 2, 2, &opts, &b) == LRSD_OK);
    REQUIRE(lrsd_benchmark_rows(b) == 2);
    lrsd_benchmark_row row{};
    REQUIRE(lrsd_benchmark_row_get(b, 1, &row) == LRSD_OK);
    CHECK(row.pattern == 2);
    CHECK(row.divisor == 1.5);
    CHECK(row.seeds == 2);
    CHECK(lrsd_benchmark_row_get(b, 2, &row) == LRSD_ERR_INVALID_ARGUMENT);
    lrsd_benchmark_destroy(b);
    CHECK(lrsd_benchmark_run(specs, 2, 0, &opts, &b) == LRSD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("panel, embedding and snp report")
{
    ScratchDir dir;
    write(dir.path / "a.tsv", "snp\tp\nrs1\t1e-12\nrs2\t0.5\nrs3\t0.01\nrs4\t0.2\n");
    write(dir.path / "b.tsv", "SNP\tBETA\tP\nrs1\t0.2\t1e-10\nrs2\t0.1\t0.4\nrs4\t0.3\t0.9\n");
    write(dir.path / "c.tsv", "snp\tp\nrs1\t0.3\nrs3\t1e-9\nrs4\t0.6\n");
    write(dir.path / "studies.txt", "A\ta.tsv\nB\tb.tsv\nC\tc.tsv\n");

    lrsd_align_options ao;
    lrsd_align_options_init(&ao);
    lrsd_panel* panel = nullptr;
    REQUIRE(lrsd_panel_from_manifest((dir.path / "studies.txt").string().c_str(), &ao, &panel) == LRSD_OK);
    CHECK(lrsd_panel_snps(panel) == 4);
    CHECK(lrsd_panel_studies(panel) == 3);
    CHECK(std::string(lrsd_panel_study_name(panel, 1)) == "B");
    CHECK(std::string(lrsd_panel_study_name(panel, 3)).empty());
    CHECK(lrsd_panel_imputed(panel) == 2);
    CHECK(lrsd_panel_clamped(panel) == 0);

    lrsd_matrix* z = nullptr;
    REQUIRE(lrsd_panel_z_matrix(panel, &z) == LRSD_OK);
    MatrixPtr zo(z);
    const auto zv = values_of(z);
    for (double v : zv) CHECK(v >= 0.0);
    REQUIRE(lrsd_panel_write(panel, (dir.path / "z.tsv").string().c_str(),
                             (dir.path / "imputed.tsv").string().c_str()) == LRSD_OK);
    lrsd_panel_destroy(panel);

    ao.min_coverage = 3;
    REQUIRE(lrsd_panel_from_manifest((dir.path / "studies.txt").string().c_str(), &ao, &panel) == LRSD_OK);
    CHECK(lrsd_panel_snps(panel) == 2);
    lrsd_panel_destroy(panel);

    write(dir.path / "broken.txt", "A\ta.tsv\nD\tmissing.tsv\n");
    CHECK(lrsd_panel_from_manifest((dir.path / "broken.txt").string().c_str(), &ao, &panel) == LRSD_ERR_IO);
    CHECK(std::string(lrsd_last_error()).find("missing.tsv") != std::string::npos);

    // Rank-one low-rank part: embedding of dimension one, rank two refused.
    auto x = make_matrix(4, 3, {1, 2, 3, 2, 4, 6, 0, 0, 0, -1, -2, -3});
    lrsd_embedding* emb = nullptr;
    CHECK(lrsd_embed_studies(x.get(), 2, &emb) == LRSD_ERR_DEGENERATE);
    REQUIRE(lrsd_embed_studies(x.get(), 1, &emb) == LRSD_OK);
    CHECK(lrsd_embedding_studies(emb) == 3);
    CHECK(lrsd_embedding_dimension(emb) == 1);
    std::vector<double> coords(3);
    REQUIRE(lrsd_embedding_coordinates(emb, coords.data(), coords.size()) == LRSD_OK);
    CHECK(coords[1] / coords[0] == doctest::Approx(2.0));
    CHECK(coords[2] > 0.0);
    REQUIRE(lrsd_embedding_write(emb, (dir.path / "emb.tsv").string().c_str(), 0.5) == LRSD_OK);
    lrsd_embedding_destroy(emb);

    // A lone spike in an otherwise zero panel lands in the sparse part.
    std::vector<double> spike(20 * 5, 0.0);
    spike[13 * 5 + 2] = 9.0;
    auto d = make_matrix(20, 5, spike);
    lrsd_solver_options opts;
    lrsd_solver_options_init(&opts);
    opts.alpha = 50.0;
    opts.beta = 1.0;
    lrsd_result* r = nullptr;
    REQUIRE(lrsd_decompose(d.get(), &opts, &r) == LRSD_OK);
    ResultPtr res(r);
    lrsd_snp_report* rep = nullptr;
    REQUIRE(lrsd_extract_snps(r, 3.0, &rep) == LRSD_OK);
    CHECK(lrsd_snp_report_shared_count(rep) == 0);
    CHECK(lrsd_snp_report_specific_count(rep) == 1);
    REQUIRE(lrsd_snp_report_write(rep, (dir.path / "shared.tsv").string().c_str(),
                                  (dir.path / "specific.tsv").string().c_str()) == LRSD_OK);
    lrsd_snp_report_destroy(rep);
    CHECK(lrsd_extract_snps(r, -1.0, &rep) == LRSD_ERR_DEGENERATE);
}
