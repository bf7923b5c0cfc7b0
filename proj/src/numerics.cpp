#include "lrsd/numerics.hpp"

#include "lrsd/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lrsd {

Index SvdFactors::rank(double rel_cutoff) const
{
    if (singular_values.size() == 0 || singular_values(0) <= 0.0) {
        return 0;
    }
    const double cut = rel_cutoff * singular_values(0);
    return static_cast<Index>((singular_values.array() > cut).count());
}

Eigen::MatrixXd SvdFactors::reconstruct() const
{
    return u * singular_values.asDiagonal() * v.transpose();
}

SvdFactors svd(const Eigen::MatrixXd& m)
{
    SvdFactors out;
    if (m.size() == 0) {
        out.u.resize(m.rows(), 0);
        out.v.resize(m.cols(), 0);
        return out;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = dec.matrixU();
    out.singular_values = dec.singularValues();
    out.v = dec.matrixV();
    return out;
}

SvdFactors svd(const DenseMatrix& m)
{
    return svd(m.values());
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m)
{
    if (m.size() == 0) {
        return {};
    }
    Eigen::BDCSVD<Eigen::MatrixXd> dec(m);
    return dec.singularValues();
}

double nuclear_norm(const Eigen::MatrixXd& m)
{
    return singular_values(m).sum();
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        fail(Errc::degenerate, "median of an empty set");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double median_all(const DenseMatrix& m)
{
    if (m.empty()) {
        fail(Errc::degenerate, "median of an empty matrix");
    }
    const auto& v = m.values();
    return median(std::vector<double>(v.data(), v.data() + v.size()));
}

namespace {

template <std::size_t N>
double horner(const std::array<double, N>& c, double x)
{
    double acc = c[N - 1];
    for (std::size_t k = N - 1; k-- > 0;) {
        acc = acc * x + c[k];
    }
    return acc;
}

// Wichura's AS241 (PPND16) rational approximations, about 1e-16 relative.
constexpr std::array<double, 8> central_num{
    3.387132872796366608,   133.14166789178437745, 1971.5909503065514427, 13731.693765509461125,
    45921.953931549871457, 67265.770927008700853, 33430.575583588128105, 2509.0809287301226727};
constexpr std::array<double, 8> central_den{
    1.0,                   42.313330701600911252, 687.1870074920579083,  5394.1960214247511077,
    21213.794301586595867, 39307.89580009271061,  28729.085735721942674, 5226.495278852545925};
constexpr std::array<double, 8> near_num{
    1.42343711074968357734,  4.6303378461565452959,   5.7694972214606914055,  3.64784832476320460504,
    1.27045825245236838258,  0.24178072517745061177,  0.0227238449892691845833, 7.7454501427834140764e-4};
constexpr std::array<double, 8> near_den{
    1.0,                     2.05319162663775882187,  1.6763848301838038494,   0.68976733498510000455,
    0.14810397642748007459,  0.0151986665636164571966, 5.475938084995344946e-4, 1.05075007164441684324e-9};
constexpr std::array<double, 8> far_num{
    6.6579046435011037772,   5.4637849111641143699,   1.7848265399172913358,  0.29656057182850489123,
    0.026532189526576123093, 0.0012426609473880784386, 2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr std::array<double, 8> far_den{
    1.0,                      0.59983220655588793769,  0.13692988092273580531, 0.0148753612908506148525,
    7.868691311456132591e-4,  1.8463183175100546818e-5, 1.4215117583164458887e-7, 2.04426310338993978564e-15};

}  // namespace

double inverse_normal_cdf(double q)
{
    if (!(q > 0.0 && q < 1.0)) {
        fail(Errc::domain, "inverse_normal_cdf requires 0 < q < 1, got " + std::to_string(q));
    }
    const double d = q - 0.5;
    if (std::abs(d) <= 0.425) {
        const double r = 0.180625 - d * d;
        return d * horner(central_num, r) / horner(central_den, r);
    }
    double r = std::sqrt(-std::log(d < 0.0 ? q : 1.0 - q));
    double z = 0.0;
    if (r <= 5.0) {
        r -= 1.6;
        z = horner(near_num, r) / horner(near_den, r);
    } else {
        r -= 5.0;
        z = horner(far_num, r) / horner(far_den, r);
    }
    return d < 0.0 ? -z : z;
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_upper_tail(double z)
{
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

}  // namespace lrsd
