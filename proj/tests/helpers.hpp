#pragma once

#include "lrsd/error.hpp"
#include "lrsd/matrix.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double sd = 1.0)
{
    std::normal_distribution<double> g(0.0, sd);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
    }
    return m;
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("lrsd_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

template <class F>
lrsd::Errc error_code_of(F&& f)
{
    try {
        f();
    } catch (const lrsd::Error& e) {
        return e.code();
    }
    FAIL("expected lrsd::Error");
    return lrsd::Errc::invalid_argument;
}

template <class F>
std::string error_message_of(F&& f)
{
    try {
        f();
    } catch (const lrsd::Error& e) {
        return e.what();
    }
    FAIL("expected lrsd::Error");
    return {};
}

}  // namespace testutil
