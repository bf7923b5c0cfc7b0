#include "helpers.hpp"

#include "lrsd/evaluate.hpp"
#include "lrsd/tsv.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using lrsd::Errc;
using lrsd::Mask;
namespace eval = lrsd::eval;

namespace {

Mask random_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution b(p);
    Mask m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = b(rng);
    return m;
}

}  // namespace

TEST_SUITE("evaluate")
{
    TEST_CASE("perfect prediction")
    {
        std::mt19937_64 rng(1);
        const Mask truth = random_mask(20, 10, 0.2, rng);
        const auto r = eval::score(truth, truth);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.f1 == 1.0);
        CHECK_FALSE(r.f1_undefined);
    }

    TEST_CASE("counts of 95 true positives, 5 false positives, 5 misses")
    {
        Mask truth = Mask::Constant(20, 10, false);
        Mask pred = Mask::Constant(20, 10, false);
        for (int k = 0; k < 100; ++k) truth.data()[k] = true;
        for (int k = 0; k < 95; ++k) pred.data()[k] = true;
        for (int k = 100; k < 105; ++k) pred.data()[k] = true;
        const auto r = eval::score(pred, truth);
        CHECK(r.tp == 95);
        CHECK(r.fp == 5);
        CHECK(r.fn == 5);
        CHECK(r.tn == 95);
        CHECK(r.precision == doctest::Approx(0.95));
        CHECK(r.recall == doctest::Approx(0.95));
        CHECK(r.f1 == doctest::Approx(0.95));
    }

    TEST_CASE("degenerate denominators score zero with a flag")
    {
        const Mask none = Mask::Constant(4, 4, false);
        Mask some = none;
        some(1, 1) = true;

        const auto empty_pred = eval::score(none, some);
        CHECK(empty_pred.precision == 0.0);
        CHECK(empty_pred.precision_undefined);
        CHECK(empty_pred.recall == 0.0);
        CHECK_FALSE(empty_pred.recall_undefined);
        CHECK(empty_pred.f1 == 0.0);
        CHECK(empty_pred.f1_undefined);

        const auto empty_truth = eval::score(some, none);
        CHECK(empty_truth.recall == 0.0);
        CHECK(empty_truth.recall_undefined);
        CHECK_FALSE(empty_truth.precision_undefined);
        CHECK(empty_truth.precision == 0.0);
    }

    TEST_CASE("shape mismatch")
    {
        CHECK(testutil::error_code_of([] { eval::score(Mask(2, 2), Mask(2, 3)); }) == Errc::shape_mismatch);
    }

    TEST_CASE("counts partition the entries, score ignores entry order, f1 lies between precision and recall")
    {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 100; ++trial) {
            const Mask pred = random_mask(13, 7, 0.3, rng);
            const Mask truth = random_mask(13, 7, 0.2, rng);
            const auto r = eval::score(pred, truth);
            CHECK(r.tp + r.fp + r.fn + r.tn == pred.size());

            std::vector<int> order(static_cast<std::size_t>(pred.size()));
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            Mask p2(7, 13), t2(7, 13);
            for (std::size_t k = 0; k < order.size(); ++k) {
                p2.data()[k] = pred.data()[order[k]];
                t2.data()[k] = truth.data()[order[k]];
            }
            const auto s = eval::score(p2, t2);
            CHECK(s.tp == r.tp);
            CHECK(s.fp == r.fp);
            CHECK(s.fn == r.fn);
            CHECK(s.f1 == r.f1);

            if (!r.f1_undefined) {
                CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-15);
                CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-15);
            }
        }
    }

    TEST_CASE("benchmark requires seeds and is deterministic")
    {
        eval::BenchmarkOptions opts;
        opts.seeds = 0;
        lrsd::sim::PatternSpec s;
        CHECK(testutil::error_code_of([&] { eval::benchmark({s}, opts); }) == Errc::invalid_argument);

        opts.seeds = 3;
        s.pattern_id = 1;
        s.seed = 100;
        const auto a = eval::benchmark({s}, opts);
        const auto b = eval::benchmark({s}, opts);
        REQUIRE(a.size() == 1);
        CHECK(a[0].seeds == 3);
        CHECK(a[0].pattern == 1);
        CHECK(a[0].snr_mean == doctest::Approx(2.5));
        CHECK(a[0].f1_mean == b[0].f1_mean);
        CHECK(a[0].f1_std == b[0].f1_std);

        // The row mean equals the average of per-seed runs.
        double sum = 0.0;
        for (std::uint64_t k = 0; k < 3; ++k) {
            auto spec = s;
            spec.seed = s.seed + k;
            sum += eval::run_instance(lrsd::sim::generate(spec), opts).f1;
        }
        CHECK(a[0].f1_mean == doctest::Approx(sum / 3.0).epsilon(1e-14));
    }

    TEST_CASE("report and benchmark files")
    {
        testutil::TempDir dir("eval");
        eval::DetectionReport r;
        r.tp = 3;
        r.fp = 1;
        r.precision = 0.75;
        eval::write_report(dir / "report.tsv", r);
        const auto text = lrsd::tsv::read_file(dir / "report.tsv");
        CHECK(text.find("tp") != std::string::npos);
        CHECK(text.find("0.75") != std::string::npos);

        eval::BenchmarkRow row;
        row.pattern = 2;
        row.divisor = 1.2;
        eval::write_benchmark(dir / "bench.tsv", {row});
        const auto bench = lrsd::tsv::read_file(dir / "bench.tsv");
        CHECK(bench.rfind("pattern\tdivisor\tsnr_mean\tprecision_mean\tprecision_std\trecall_mean\trecall_std\t"
                          "f1_mean\tf1_std\n",
                          0) == 0);
        CHECK(bench.find("\n2\t1.2\t") != std::string::npos);
    }
}
