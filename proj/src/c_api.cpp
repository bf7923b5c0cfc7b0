#include "lrsd/lrsd.h"

#include "lrsd/analysis.hpp"
#include "lrsd/error.hpp"
#include "lrsd/evaluate.hpp"
#include "lrsd/numerics.hpp"
#include "lrsd/simgen.hpp"
#include "lrsd/solver.hpp"
#include "lrsd/sumstats.hpp"
#include "lrsd/tsv.hpp"

#include <cmath>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

struct lrsd_matrix {
    lrsd::DenseMatrix m;
};

struct lrsd_result {
    lrsd::SolverResult result;
    lrsd::ResolvedParameters params;
    std::string rules[3];
};

struct lrsd_instance {
    lrsd::sim::SimulatedInstance inst;
};

struct lrsd_benchmark {
    std::vector<lrsd::eval::BenchmarkRow> rows;
};

struct lrsd_panel {
    lrsd::sumstats::AlignedPanel panel;
};

struct lrsd_embedding {
    lrsd::analysis::StudyEmbedding emb;
};

struct lrsd_snp_report {
    lrsd::analysis::SnpReport report;
};

namespace {

thread_local std::string last_error;

lrsd_status status_of(lrsd::Errc code)
{
    switch (code) {
    case lrsd::Errc::invalid_argument: return LRSD_ERR_INVALID_ARGUMENT;
    case lrsd::Errc::domain: return LRSD_ERR_DOMAIN;
    case lrsd::Errc::shape_mismatch: return LRSD_ERR_SHAPE;
    case lrsd::Errc::parse: return LRSD_ERR_PARSE;
    case lrsd::Errc::io: return LRSD_ERR_IO;
    case lrsd::Errc::degenerate: return LRSD_ERR_DEGENERATE;
    }
    return LRSD_ERR_INTERNAL;
}

template <class F>
lrsd_status guarded(F&& body) noexcept
{
    try {
        body();
        return LRSD_OK;
    } catch (const lrsd::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return LRSD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return LRSD_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return LRSD_ERR_INTERNAL;
    }
}

template <class... Ptrs>
void require(Ptrs... ptrs)
{
    if (((ptrs == nullptr) || ...)) {
        lrsd::fail(lrsd::Errc::invalid_argument, "null pointer argument");
    }
}

lrsd::ParameterRequest to_request(const lrsd_solver_options* o)
{
    lrsd::ParameterRequest req;
    if (o->alpha > 0.0) req.alpha = o->alpha;
    if (o->beta > 0.0) req.beta = o->beta;
    if (o->threshold >= 0.0) req.threshold = o->threshold;
    req.beta_scale = o->beta_scale;
    req.threshold_scale = o->threshold_scale;
    return req;
}

lrsd_params to_c(const lrsd::ResolvedParameters& p)
{
    return {p.sigma_hat, p.alpha, p.beta, p.threshold, p.alpha_auto, p.beta_auto, p.threshold_auto};
}

lrsd::sim::PatternSpec to_spec(const lrsd_pattern_spec* s)
{
    lrsd::sim::PatternSpec spec;
    spec.pattern_id = s->pattern;
    spec.scale = s->scale;
    spec.sparse_prob = s->sparse_prob;
    spec.sparse_value = s->sparse_value;
    spec.noise_sigma = s->noise_sigma;
    spec.signal_divisor = s->divisor;
    spec.seed = s->seed;
    return spec;
}

void copy_row_major(const Eigen::MatrixXd& m, double* out, size_t capacity)
{
    if (capacity < static_cast<size_t>(m.size())) {
        lrsd::fail(lrsd::Errc::invalid_argument, "output buffer holds " + std::to_string(capacity) + " values, " +
                                                     std::to_string(m.size()) + " needed");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out[i * m.cols() + j] = m(i, j);
        }
    }
}

double resolved_threshold(const lrsd_result* r, double requested)
{
    if (requested >= 0.0) return requested;
    if (!std::isfinite(r->params.threshold)) {
        lrsd::fail(lrsd::Errc::degenerate, "noise scale estimate is 0; supply the detection threshold explicitly");
    }
    return r->params.threshold;
}

lrsd_matrix* wrap(lrsd::DenseMatrix m)
{
    return new lrsd_matrix{std::move(m)};
}

}  // namespace

extern "C" {

const char* lrsd_version(void)
{
    return LRSD_VERSION_STRING;
}

const char* lrsd_last_error(void)
{
    return last_error.c_str();
}

const char* lrsd_status_string(lrsd_status status)
{
    switch (status) {
    case LRSD_OK: return "ok";
    case LRSD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LRSD_ERR_DOMAIN: return "domain error";
    case LRSD_ERR_SHAPE: return "shape mismatch";
    case LRSD_ERR_PARSE: return "parse error";
    case LRSD_ERR_IO: return "i/o error";
    case LRSD_ERR_DEGENERATE: return "degenerate input";
    case LRSD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

/* matrices */

lrsd_status lrsd_matrix_from_values(size_t rows, size_t cols, const double* row_major, lrsd_matrix** out)
{
    return guarded([&] {
        require(out);
        if (rows * cols > 0) require(row_major);
        std::vector<double> values(row_major, row_major + rows * cols);
        *out = wrap(lrsd::DenseMatrix::from_row_major(static_cast<lrsd::Index>(rows), static_cast<lrsd::Index>(cols),
                                                      values));
    });
}

lrsd_status lrsd_matrix_read_tsv(const char* path, lrsd_matrix** out)
{
    return guarded([&] {
        require(path, out);
        *out = wrap(lrsd::tsv::read_matrix(path));
    });
}

lrsd_status lrsd_matrix_write_tsv(const lrsd_matrix* m, const char* path)
{
    return guarded([&] {
        require(m, path);
        lrsd::tsv::write_matrix(path, m->m);
    });
}

size_t lrsd_matrix_rows(const lrsd_matrix* m)
{
    return m ? static_cast<size_t>(m->m.rows()) : 0;
}

size_t lrsd_matrix_cols(const lrsd_matrix* m)
{
    return m ? static_cast<size_t>(m->m.cols()) : 0;
}

lrsd_status lrsd_matrix_values(const lrsd_matrix* m, double* row_major, size_t capacity)
{
    return guarded([&] {
        require(m, row_major);
        copy_row_major(m->m.values(), row_major, capacity);
    });
}

void lrsd_matrix_destroy(lrsd_matrix* m)
{
    delete m;
}

lrsd_status lrsd_matrix_median(const lrsd_matrix* m, double* out)
{
    return guarded([&] {
        require(m, out);
        *out = lrsd::median_all(m->m);
    });
}

lrsd_status lrsd_estimate_sigma(const lrsd_matrix* m, double* out)
{
    return guarded([&] {
        require(m, out);
        *out = lrsd::estimate_sigma(m->m);
    });
}

lrsd_status lrsd_inverse_normal_cdf(double q, double* out)
{
    return guarded([&] {
        require(out);
        *out = lrsd::inverse_normal_cdf(q);
    });
}

lrsd_status lrsd_p_to_z(double p, int one_sided, double* out)
{
    return guarded([&] {
        require(out);
        *out = lrsd::sumstats::p_to_z(p, one_sided ? lrsd::sumstats::ZConvention::one_sided
                                                   : lrsd::sumstats::ZConvention::two_sided);
    });
}

/* decomposition */

void lrsd_solver_options_init(lrsd_solver_options* o)
{
    if (!o) return;
    const lrsd::SolverConfig defaults;
    const lrsd::ParameterRequest request;
    o->alpha = 0.0;
    o->beta = 0.0;
    o->threshold = -1.0;
    o->beta_scale = request.beta_scale;
    o->threshold_scale = request.threshold_scale;
    o->max_iterations = defaults.max_iterations;
    o->rel_tolerance = defaults.rel_tolerance;
}

lrsd_status lrsd_resolve_params(const lrsd_matrix* d, const lrsd_solver_options* options, lrsd_params* out)
{
    return guarded([&] {
        require(d, options, out);
        *out = to_c(lrsd::resolve_parameters(d->m, to_request(options)));
    });
}

lrsd_status lrsd_decompose(const lrsd_matrix* d, const lrsd_solver_options* options, lrsd_result** out)
{
    return guarded([&] {
        require(d, options, out);
        const auto params = lrsd::resolve_parameters(d->m, to_request(options));
        lrsd::SolverConfig config;
        config.alpha = params.alpha;
        config.beta = params.beta;
        config.max_iterations = options->max_iterations;
        config.rel_tolerance = options->rel_tolerance;
        auto* r = new lrsd_result{lrsd::solve(d->m, config), params, {}};
        r->rules[LRSD_PARAM_ALPHA] = params.alpha_rule();
        r->rules[LRSD_PARAM_BETA] = params.beta_rule();
        r->rules[LRSD_PARAM_THRESHOLD] = params.threshold_rule();
        *out = r;
    });
}

void lrsd_result_destroy(lrsd_result* r)
{
    delete r;
}

lrsd_status lrsd_result_params(const lrsd_result* r, lrsd_params* out)
{
    return guarded([&] {
        require(r, out);
        *out = to_c(r->params);
    });
}

const char* lrsd_result_param_rule(const lrsd_result* r, lrsd_param_id which)
{
    if (!r || which < LRSD_PARAM_ALPHA || which > LRSD_PARAM_THRESHOLD) return "";
    return r->rules[which].c_str();
}

int lrsd_result_converged(const lrsd_result* r)
{
    return r && r->result.converged ? 1 : 0;
}

int lrsd_result_iterations(const lrsd_result* r)
{
    return r ? r->result.iterations_used : 0;
}

size_t lrsd_result_rank(const lrsd_result* r)
{
    return r ? static_cast<size_t>(r->result.rank_of_x) : 0;
}

size_t lrsd_result_nnz(const lrsd_result* r)
{
    return r ? static_cast<size_t>(r->result.nnz_of_e) : 0;
}

size_t lrsd_result_trace_length(const lrsd_result* r)
{
    return r ? r->result.objective_trace.size() : 0;
}

lrsd_status lrsd_result_trace(const lrsd_result* r, double* out, size_t capacity)
{
    return guarded([&] {
        require(r, out);
        const auto& t = r->result.objective_trace;
        if (capacity < t.size()) lrsd::fail(lrsd::Errc::invalid_argument, "trace buffer too small");
        std::copy(t.begin(), t.end(), out);
    });
}

lrsd_status lrsd_result_low_rank(const lrsd_result* r, lrsd_matrix** out)
{
    return guarded([&] {
        require(r, out);
        *out = wrap(r->result.x_hat);
    });
}

lrsd_status lrsd_result_sparse(const lrsd_result* r, lrsd_matrix** out)
{
    return guarded([&] {
        require(r, out);
        *out = wrap(r->result.e_hat);
    });
}

lrsd_status lrsd_result_write(const lrsd_result* r, const char* dir)
{
    return guarded([&] {
        require(r, dir);
        const std::filesystem::path base(dir);
        std::error_code ec;
        std::filesystem::create_directories(base, ec);
        if (ec) lrsd::fail(lrsd::Errc::io, "cannot create directory " + base.string() + ": " + ec.message());
        lrsd::tsv::write_matrix(base / "X.tsv", r->result.x_hat);
        lrsd::tsv::write_matrix(base / "E.tsv", r->result.e_hat);
        lrsd::write_trace(base / "trace.tsv", r->result.objective_trace);
    });
}

lrsd_status lrsd_result_detect(const lrsd_result* r, double threshold, lrsd_matrix** mask)
{
    return guarded([&] {
        require(r, mask);
        const double t = resolved_threshold(r, threshold);
        const lrsd::Mask found = lrsd::detect(r->result, t);
        *mask = wrap(lrsd::DenseMatrix(found.cast<double>().matrix(), r->result.x_hat.row_labels(),
                                       r->result.x_hat.col_labels()));
    });
}

lrsd_status lrsd_detect(const lrsd_matrix* x, const lrsd_matrix* e, double threshold, lrsd_matrix** mask)
{
    return guarded([&] {
        require(x, e, mask);
        *mask = wrap(lrsd::from_mask(lrsd::detect(x->m, e->m, threshold)));
    });
}

lrsd_status lrsd_objective(const lrsd_matrix* d, const lrsd_matrix* x, const lrsd_matrix* e, double alpha,
                           double beta, double* out)
{
    return guarded([&] {
        require(d, x, e, out);
        *out = lrsd::objective(d->m, x->m, e->m, alpha, beta);
    });
}

lrsd_status lrsd_optimality_residual(const lrsd_matrix* d, const lrsd_matrix* x, const lrsd_matrix* e,
                                     double alpha, double beta, double* out)
{
    return guarded([&] {
        require(d, x, e, out);
        *out = lrsd::optimality_residual(d->m, x->m, e->m, alpha, beta);
    });
}

/* simulation */

void lrsd_pattern_spec_init(lrsd_pattern_spec* spec, int pattern)
{
    if (!spec) return;
    const lrsd::sim::PatternSpec d;
    spec->pattern = pattern;
    spec->scale = d.scale;
    spec->sparse_prob = d.sparse_prob;
    spec->sparse_value = d.sparse_value;
    spec->noise_sigma = d.noise_sigma;
    spec->divisor = d.signal_divisor;
    spec->seed = d.seed;
}

lrsd_status lrsd_simulate(const lrsd_pattern_spec* spec, lrsd_instance** out)
{
    return guarded([&] {
        require(spec, out);
        *out = new lrsd_instance{lrsd::sim::generate(to_spec(spec))};
    });
}

double lrsd_instance_snr(const lrsd_instance* inst)
{
    return inst ? inst->inst.snr : 0.0;
}

lrsd_status lrsd_instance_data(const lrsd_instance* inst, lrsd_matrix** out)
{
    return guarded([&] {
        require(inst, out);
        *out = wrap(inst->inst.data);
    });
}

lrsd_status lrsd_instance_truth_mask(const lrsd_instance* inst, lrsd_matrix** out)
{
    return guarded([&] {
        require(inst, out);
        *out = wrap(lrsd::from_mask(inst->inst.truth_mask));
    });
}

lrsd_status lrsd_instance_write(const lrsd_instance* inst, const char* dir)
{
    return guarded([&] {
        require(inst, dir);
        lrsd::sim::write_instance(inst->inst, dir);
    });
}

void lrsd_instance_destroy(lrsd_instance* inst)
{
    delete inst;
}

/* evaluation */

lrsd_status lrsd_score(const lrsd_matrix* predicted, const lrsd_matrix* truth, lrsd_detection_report* out)
{
    return guarded([&] {
        require(predicted, truth, out);
        const auto r = lrsd::eval::score(lrsd::to_mask(predicted->m), lrsd::to_mask(truth->m));
        *out = {r.tp,       r.fp, r.fn, r.tn, r.precision, r.recall, r.f1, r.precision_undefined, r.recall_undefined,
                r.f1_undefined};
    });
}

lrsd_status lrsd_report_write_tsv(const lrsd_detection_report* report, const char* path)
{
    return guarded([&] {
        require(report, path);
        lrsd::eval::DetectionReport r;
        r.tp = report->tp;
        r.fp = report->fp;
        r.fn = report->fn;
        r.tn = report->tn;
        r.precision = report->precision;
        r.recall = report->recall;
        r.f1 = report->f1;
        r.precision_undefined = report->precision_undefined != 0;
        r.recall_undefined = report->recall_undefined != 0;
        r.f1_undefined = report->f1_undefined != 0;
        lrsd::eval::write_report(path, r);
    });
}

lrsd_status lrsd_benchmark_run(const lrsd_pattern_spec* specs, size_t n_specs, int seeds,
                               const lrsd_solver_options* options, lrsd_benchmark** out)
{
    return guarded([&] {
        require(specs, options, out);
        std::vector<lrsd::sim::PatternSpec> patterns;
        for (size_t k = 0; k < n_specs; ++k) {
            patterns.push_back(to_spec(&specs[k]));
        }
        lrsd::eval::BenchmarkOptions opts;
        opts.seeds = seeds;
        opts.max_iterations = options->max_iterations;
        opts.rel_tolerance = options->rel_tolerance;
        opts.beta_scale = options->beta_scale;
        opts.threshold_scale = options->threshold_scale;
        if (options->alpha > 0.0) opts.alpha = options->alpha;
        if (options->beta > 0.0) opts.beta = options->beta;
        if (options->threshold >= 0.0) opts.threshold = options->threshold;
        *out = new lrsd_benchmark{lrsd::eval::benchmark(patterns, opts)};
    });
}

size_t lrsd_benchmark_rows(const lrsd_benchmark* b)
{
    return b ? b->rows.size() : 0;
}

lrsd_status lrsd_benchmark_row_get(const lrsd_benchmark* b, size_t index, lrsd_benchmark_row* out)
{
    return guarded([&] {
        require(b, out);
        if (index >= b->rows.size()) lrsd::fail(lrsd::Errc::invalid_argument, "benchmark row out of range");
        const auto& r = b->rows[index];
        *out = {r.pattern,    r.divisor,     r.seeds,   r.snr_mean, r.precision_mean, r.precision_std,
                r.recall_mean, r.recall_std, r.f1_mean, r.f1_std};
    });
}

lrsd_status lrsd_benchmark_write_tsv(const lrsd_benchmark* b, const char* path)
{
    return guarded([&] {
        require(b, path);
        lrsd::eval::write_benchmark(path, b->rows);
    });
}

void lrsd_benchmark_destroy(lrsd_benchmark* b)
{
    delete b;
}

/* summary statistics */

void lrsd_align_options_init(lrsd_align_options* options)
{
    if (!options) return;
    options->min_coverage = 1;
    options->one_sided = 0;
    options->study_median_imputation = 0;
}

lrsd_status lrsd_panel_from_manifest(const char* manifest, const lrsd_align_options* options, lrsd_panel** out)
{
    return guarded([&] {
        require(manifest, options, out);
        namespace ss = lrsd::sumstats;
        ss::AlignOptions opts;
        opts.min_coverage = options->min_coverage;
        opts.convention = options->one_sided ? ss::ZConvention::one_sided : ss::ZConvention::two_sided;
        opts.imputation = options->study_median_imputation ? ss::Imputation::study_median : ss::Imputation::null_value;
        const auto studies = ss::load_studies(ss::read_manifest(manifest));
        *out = new lrsd_panel{ss::align(studies, opts)};
    });
}

size_t lrsd_panel_snps(const lrsd_panel* panel)
{
    return panel ? panel->panel.snp_ids.size() : 0;
}

size_t lrsd_panel_studies(const lrsd_panel* panel)
{
    return panel ? panel->panel.study_names.size() : 0;
}

const char* lrsd_panel_study_name(const lrsd_panel* panel, size_t index)
{
    if (!panel || index >= panel->panel.study_names.size()) return "";
    return panel->panel.study_names[index].c_str();
}

size_t lrsd_panel_imputed(const lrsd_panel* panel)
{
    return panel ? static_cast<size_t>(panel->panel.imputed_mask.count()) : 0;
}

size_t lrsd_panel_clamped(const lrsd_panel* panel)
{
    return panel ? panel->panel.clamped_count : 0;
}

lrsd_status lrsd_panel_z_matrix(const lrsd_panel* panel, lrsd_matrix** out)
{
    return guarded([&] {
        require(panel, out);
        *out = wrap(panel->panel.z_matrix);
    });
}

lrsd_status lrsd_panel_write(const lrsd_panel* panel, const char* z_path, const char* imputed_path)
{
    return guarded([&] {
        require(panel, z_path, imputed_path);
        lrsd::sumstats::write_panel(panel->panel, z_path, imputed_path);
    });
}

void lrsd_panel_destroy(lrsd_panel* panel)
{
    delete panel;
}

/* analysis */

lrsd_status lrsd_embed_studies(const lrsd_matrix* x_hat, size_t rank, lrsd_embedding** out)
{
    return guarded([&] {
        require(x_hat, out);
        *out = new lrsd_embedding{lrsd::analysis::embed_studies(x_hat->m, static_cast<lrsd::Index>(rank))};
    });
}

size_t lrsd_embedding_studies(const lrsd_embedding* emb)
{
    return emb ? emb->emb.study_names.size() : 0;
}

size_t lrsd_embedding_dimension(const lrsd_embedding* emb)
{
    return emb ? static_cast<size_t>(emb->emb.dimension()) : 0;
}

lrsd_status lrsd_embedding_coordinates(const lrsd_embedding* emb, double* row_major, size_t capacity)
{
    return guarded([&] {
        require(emb, row_major);
        copy_row_major(emb->emb.coordinates, row_major, capacity);
    });
}

lrsd_status lrsd_embedding_write(const lrsd_embedding* emb, const char* path, double group_radius)
{
    return guarded([&] {
        require(emb, path);
        std::vector<int> groups;
        if (group_radius >= 0.0) {
            groups = lrsd::analysis::single_linkage_groups(emb->emb.coordinates, group_radius);
        }
        lrsd::analysis::write_embedding(path, emb->emb, groups);
    });
}

void lrsd_embedding_destroy(lrsd_embedding* emb)
{
    delete emb;
}

lrsd_status lrsd_extract_snps(const lrsd_result* r, double threshold, lrsd_snp_report** out)
{
    return guarded([&] {
        require(r, out);
        const double t = resolved_threshold(r, threshold);
        *out = new lrsd_snp_report{lrsd::analysis::extract_snps(r->result, t)};
    });
}

size_t lrsd_snp_report_shared_count(const lrsd_snp_report* rep)
{
    return rep ? rep->report.shared.size() : 0;
}

size_t lrsd_snp_report_specific_count(const lrsd_snp_report* rep)
{
    return rep ? rep->report.specific.size() : 0;
}

lrsd_status lrsd_snp_report_write(const lrsd_snp_report* rep, const char* shared_path, const char* specific_path)
{
    return guarded([&] {
        require(rep, shared_path, specific_path);
        lrsd::analysis::write_snp_report(rep->report, shared_path, specific_path);
    });
}

void lrsd_snp_report_destroy(lrsd_snp_report* rep)
{
    delete rep;
}

}  // extern "C"
