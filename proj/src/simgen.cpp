#include "lrsd/simgen.hpp"

#include "lrsd/error.hpp"
#include "lrsd/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace lrsd::sim {

namespace {

// Independent streams so patterns sharing a seed share shuffles and noise.
enum Stream : std::uint64_t {
    sparse_stream = 1,
    shuffle_stream = 2,
    noise_stream = 3,
};

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

class VectorBuilder {
public:
    VectorBuilder& values(std::initializer_list<double> vs)
    {
        data_.insert(data_.end(), vs);
        return *this;
    }
    /// Appends `count` copies of `value`.
    VectorBuilder& repeat(double value, int count)
    {
        data_.insert(data_.end(), static_cast<std::size_t>(count), value);
        return *this;
    }
    Eigen::VectorXd normalized(Index expected_length) const
    {
        if (static_cast<Index>(data_.size()) != expected_length) {
            fail(Errc::invalid_argument, "factor vector has wrong length");
        }
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(data_.data(), expected_length);
        return v / v.norm();
    }

private:
    std::vector<double> data_;
};

std::vector<Index> random_permutation(Index n, std::mt19937_64& engine)
{
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), engine);
    return perm;
}

}  // namespace

void PatternSpec::validate() const
{
    if (pattern_id < 1 || pattern_id > 4) {
        fail(Errc::invalid_argument, "pattern must be 1, 2, 3 or 4 (got " + std::to_string(pattern_id) + ")");
    }
    if (!(sparse_prob >= 0.0 && sparse_prob <= 1.0)) {
        fail(Errc::invalid_argument, "sparse probability must lie in [0, 1]");
    }
    if (!(signal_divisor >= 1.0) || !std::isfinite(signal_divisor)) {
        fail(Errc::invalid_argument, "signal divisor must be at least 1");
    }
    if (!(noise_sigma > 0.0) || !std::isfinite(noise_sigma)) {
        fail(Errc::invalid_argument, "noise sigma must be positive");
    }
    if (!std::isfinite(scale) || !std::isfinite(sparse_value)) {
        fail(Errc::invalid_argument, "scale and sparse value must be finite");
    }
}

FactorVectors factor_vectors()
{
    FactorVectors f;
    f.u1 = VectorBuilder().values({10, 9, 8, 7, 6, 5, 4, 3}).repeat(2, 17).repeat(0, 75).normalized(n_rows);
    f.v1 = VectorBuilder().values({10, -10, 8, -8, 5, -5}).repeat(3, 5).repeat(-3, 5).repeat(0, 34).normalized(n_cols);
    f.u2 = VectorBuilder()
               .repeat(0, 13)
               .values({10, 9, 8, 7, 6, 5, 4, 3})
               .repeat(2, 17)
               .repeat(0, 62)
               .normalized(n_rows);
    f.v2 = VectorBuilder()
               .repeat(0, 9)
               .values({10, -9, 8, -7, 6, -5})
               .repeat(4, 5)
               .repeat(-3, 5)
               .repeat(0, 25)
               .normalized(n_cols);
    return f;
}

Eigen::MatrixXd base_signal(int pattern_id, double scale)
{
    const FactorVectors f = factor_vectors();
    Eigen::MatrixXd m = scale * f.u1 * f.v1.transpose();
    if (pattern_id >= 3) {
        m += scale * f.u2 * f.v2.transpose();
    }
    return m;
}

SimulatedInstance generate(const PatternSpec& spec)
{
    spec.validate();

    Eigen::MatrixXd signal = base_signal(spec.pattern_id, spec.scale);

    if (spec.pattern_id == 2 || spec.pattern_id == 4) {
        auto engine = make_engine(spec.seed, sparse_stream);
        std::bernoulli_distribution spike(spec.sparse_prob);
        // column-major walk keeps the draw order fixed
        for (Index j = 0; j < n_cols; ++j) {
            for (Index i = 0; i < n_rows; ++i) {
                if (spike(engine)) {
                    signal(i, j) += spec.sparse_value;
                }
            }
        }
    }
    signal /= spec.signal_divisor;

    auto shuffle_engine = make_engine(spec.seed, shuffle_stream);
    SimulatedInstance out;
    out.spec = spec;
    out.row_perm = random_permutation(n_rows, shuffle_engine);
    out.col_perm = random_permutation(n_cols, shuffle_engine);

    Eigen::MatrixXd shuffled(n_rows, n_cols);
    for (Index i = 0; i < n_rows; ++i) {
        for (Index j = 0; j < n_cols; ++j) {
            shuffled(i, j) = signal(out.row_perm[static_cast<std::size_t>(i)],
                                    out.col_perm[static_cast<std::size_t>(j)]);
        }
    }

    auto noise_engine = make_engine(spec.seed, noise_stream);
    std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
    Eigen::MatrixXd noise(n_rows, n_cols);
    for (Index k = 0; k < noise.size(); ++k) {
        noise.data()[k] = gauss(noise_engine);
    }

    out.truth_mask = shuffled.array() != 0.0;
    out.data = DenseMatrix(shuffled + noise);
    out.truth_signal = DenseMatrix(std::move(shuffled));
    out.noise = DenseMatrix(std::move(noise));
    out.snr = compute_snr(out.truth_signal, spec.noise_sigma);
    return out;
}

double compute_snr(const DenseMatrix& truth_signal, double noise_sigma)
{
    if (!(noise_sigma > 0.0)) {
        fail(Errc::invalid_argument, "noise sigma must be positive");
    }
    const auto& v = truth_signal.values().array();
    const auto support = (v != 0.0).count();
    if (support == 0) {
        fail(Errc::degenerate, "SNR undefined for an all-zero signal");
    }
    return std::sqrt(v.square().sum() / static_cast<double>(support)) / noise_sigma;
}

void write_instance(const SimulatedInstance& instance, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        fail(Errc::io, "cannot create directory " + dir.string() + ": " + ec.message());
    }
    tsv::write_matrix(dir / "data.tsv", instance.data);
    tsv::write_matrix(dir / "truth.tsv", instance.truth_signal);
    tsv::write_mask(dir / "mask.tsv", instance.truth_mask);

    const auto join = [](const std::vector<Index>& perm) {
        std::string s;
        for (std::size_t k = 0; k < perm.size(); ++k) {
            if (k) s += ',';
            s += std::to_string(perm[k]);
        }
        return s;
    };
    const PatternSpec& s = instance.spec;
    std::ostringstream meta;
    meta << "pattern=" << s.pattern_id << '\n'
         << "seed=" << s.seed << '\n'
         << "divisor=" << tsv::format_double(s.signal_divisor) << '\n'
         << "scale=" << tsv::format_double(s.scale) << '\n'
         << "sparse_prob=" << tsv::format_double(s.sparse_prob) << '\n'
         << "sparse_value=" << tsv::format_double(s.sparse_value) << '\n'
         << "noise_sigma=" << tsv::format_double(s.noise_sigma) << '\n'
         << "snr=" << tsv::format_double(instance.snr) << '\n'
         << "rows=" << instance.data.rows() << '\n'
         << "cols=" << instance.data.cols() << '\n'
         << "row_perm=" << join(instance.row_perm) << '\n'
         << "col_perm=" << join(instance.col_perm) << '\n';
    tsv::write_file(dir / "meta.txt", meta.str());
}

}  // namespace lrsd::sim
