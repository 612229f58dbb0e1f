#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "condreg/dataset.hpp"

namespace support {

inline constexpr std::uint64_t kSeed = 20240917;

/// |a - b| <= tol * max(1, |a|, |b|)
inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Predictors x1..xk with random pairwise mixing (so they correlate) and a
/// response Y linear in them plus noise.
inline condreg::Dataset random_linear(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                      double noise = 0.5) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::vector<double>> x(k, std::vector<double>(n));
  std::vector<double> mix(k);
  for (auto& m : mix) m = u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double common = z(rng);
    for (std::size_t j = 0; j < k; ++j) x[j][i] = 0.6 * mix[j] * common + z(rng) + u(rng);
  }
  std::vector<double> beta(k);
  for (auto& b : beta) b = u(rng);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = u(rng);
    for (std::size_t j = 0; j < k; ++j) y[i] += beta[j] * x[j][i];
    y[i] += noise * z(rng);
  }
  std::vector<condreg::Column> cols;
  cols.push_back({"Y", y});
  for (std::size_t j = 0; j < k; ++j) cols.push_back({"x" + std::to_string(j + 1), x[j]});
  return condreg::Dataset(std::move(cols));
}

inline std::vector<std::string> predictor_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back("x" + std::to_string(j + 1));
  return out;
}

/// Slope of y on x from the textbook sums.
inline double slr_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

inline std::vector<double> values(const condreg::Dataset& d, const std::string& name) {
  const auto s = d.column(name);
  return {s.begin(), s.end()};
}

/// Solves A x = b by Gauss-Jordan elimination on an explicit inverse.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  std::vector<std::vector<double>> a(p, std::vector<double>(2 * p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < n; ++i) a[r][c] += x[i][r] * x[i][c];
    }
    a[r][p + r] = 1.0;
    for (std::size_t i = 0; i < n; ++i) xty[r] += x[i][r] * y[i];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    const double d = a[col][col];
    for (auto& v : a[col]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t c = 0; c < 2 * p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> b(p, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) b[r] += a[r][p + c] * xty[c];
  }
  return b;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("condreg_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  std::filesystem::path path(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace support
