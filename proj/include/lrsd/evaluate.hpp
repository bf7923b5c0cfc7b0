#pragma once

#include "lrsd/matrix.hpp"
#include "lrsd/simgen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace lrsd::eval {

struct DetectionReport {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when the denominator vanished and the metric was scored as 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

DetectionReport score(const Mask& predicted, const Mask& truth);

void write_report(const std::filesystem::path& path, const DetectionReport& report);

struct BenchmarkOptions {
    /// Seeds spec.seed, spec.seed + 1, ... are used for each pattern.
    int seeds = 20;
    int max_iterations = 500;
    double rel_tolerance = 1e-10;
    double beta_scale = 2.0;
    double threshold_scale = 0.25;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> threshold;
};

struct BenchmarkRow {
    int pattern = 0;
    double divisor = 1.0;
    int seeds = 0;
    double snr_mean = 0.0;
    double precision_mean = 0.0;
    double precision_std = 0.0;
    double recall_mean = 0.0;
    double recall_std = 0.0;
    double f1_mean = 0.0;
    double f1_std = 0.0;
};

/// Runs generate → solve (auto parameters) → detect → score for every
/// pattern spec over consecutive seeds.
DetectionReport run_instance(const sim::SimulatedInstance& instance, const BenchmarkOptions& options);
std::vector<BenchmarkRow> benchmark(const std::vector<sim::PatternSpec>& patterns, const BenchmarkOptions& options);

void write_benchmark(const std::filesystem::path& path, const std::vector<BenchmarkRow>& rows);

}  // namespace lrsd::eval
