//------------------------------------------------------------------------------
//
//   Copyright 2026 The gtpbet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#include "gtpbet/generators.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Cholesky>
#include <fftw3.h>

#include "gtpbet/errors.hpp"

namespace gtpbet {
namespace {

constexpr std::size_t kCholeskyLimit = 4096;

struct FftwFree
{
  void operator()(void *p) const
  {
    fftw_free(p);
  }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n)
{
  auto *p = static_cast<T *>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr)
  {
    throw std::bad_alloc();
  }
  return std::unique_ptr<T[], FftwFree>(p);
}

std::vector<double> cholesky_fgn(double H, std::size_t K, std::mt19937_64 &rng)
{
  auto const n = static_cast<Eigen::Index>(K);
  Matrix     cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      cov(i, j) = fgn_autocovariance(H, static_cast<double>(std::abs(i - j)));
    }
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
  {
    throw Error("fGn covariance is not positive definite");
  }
  std::normal_distribution<double> normal;
  Vector                           z(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    z[i] = normal(rng);
  }
  Vector const        y = llt.matrixL() * z;
  std::vector<double> out(K);
  for (std::size_t i = 0; i < K; ++i)
  {
    out[i] = y[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace

GbmStream::GbmStream(Vector mu, Matrix sigma, double step, std::uint64_t seed, Vector start)
  : sigma_(std::move(sigma))
  , step_(step)
  , sqrt_step_(std::sqrt(step))
  , rng_(seed)
{
  auto const d = mu.size();
  if (d == 0 || sigma_.rows() != d || sigma_.cols() != d)
  {
    throw InvalidArgument("gbm: mu and sigma dimensions differ");
  }
  if (!(step > 0.0))
  {
    throw InvalidArgument("gbm: grid step must be positive");
  }
  Eigen::FullPivLU<Matrix> lu(sigma_);
  lu.setThreshold(0.0);
  if (!lu.isInvertible())
  {
    throw InvalidArgument("gbm: sigma must be nonsingular");
  }
  if (start.size() == 0)
  {
    start = Vector::Ones(d);
  }
  if (start.size() != d || !(start.array() > 0.0).all())
  {
    throw InvalidArgument("gbm: start price must be positive with dimension d");
  }
  Vector const var_diag = (sigma_ * sigma_.transpose()).diagonal();
  drift_                = (mu - 0.5 * var_diag) * step;
  log_price_            = start.array().log().matrix();
  price_                = start;
  z_.resize(d);
}

Vector const &GbmStream::next()
{
  for (Eigen::Index j = 0; j < z_.size(); ++j)
  {
    z_[j] = normal_(rng_);
  }
  auto const d = z_.size();
  for (Eigen::Index i = 0; i < d; ++i)
  {
    double shock = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
    {
      shock += sigma_(i, j) * z_[j];
    }
    log_price_[i] += drift_[i] + sqrt_step_ * shock;
    price_[i] = std::exp(log_price_[i]);
  }
  return price_;
}

std::size_t grid_steps(double T, double grid_step)
{
  if (!(T > 0.0) || !(grid_step > 0.0))
  {
    throw InvalidArgument("horizon and grid step must be positive");
  }
  auto const k = std::llround(T / grid_step);
  return static_cast<std::size_t>(std::max<long long>(1, k));
}

PricePath gen_gbm(Vector const &mu, Matrix const &sigma, double T, double grid_step, std::uint64_t seed)
{
  std::size_t const K = grid_steps(T, grid_step);
  double const      h = T / static_cast<double>(K);
  GbmStream         stream(mu, sigma, h, seed);
  auto const        d = static_cast<std::size_t>(mu.size());

  std::vector<double> times(K + 1);
  std::vector<double> values((K + 1) * d);
  for (std::size_t j = 0; j < d; ++j)
  {
    values[j] = 1.0;
  }
  times[0] = 0.0;
  for (std::size_t i = 1; i <= K; ++i)
  {
    times[i]      = (i == K) ? T : static_cast<double>(i) * h;
    auto const &p = stream.next();
    for (std::size_t j = 0; j < d; ++j)
    {
      values[i * d + j] = p[static_cast<Eigen::Index>(j)];
    }
  }
  PathGenerator meta;
  meta.kind  = PathGenerator::Kind::gbm;
  meta.mu    = mu;
  meta.sigma = sigma;
  meta.seed  = seed;
  return PricePath(std::move(times), std::move(values), static_cast<int>(d), std::move(meta));
}

double fgn_autocovariance(double H, double k)
{
  double const e = 2.0 * H;
  k              = std::abs(k);
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

std::vector<double> fractional_gaussian_noise(double H, std::size_t K, std::uint64_t seed, std::string *warning)
{
  if (!(H > 0.0 && H < 1.0))
  {
    throw InvalidArgument("Hurst exponent must lie in (0, 1)");
  }
  if (K == 0)
  {
    return {};
  }
  std::mt19937_64 rng(seed);

  std::size_t M = 1;
  while (M < K)
  {
    M <<= 1;
  }
  std::size_t const n = 2 * M;

  // Circulant eigenvalues: real FFT of the first row
  // gamma(0), ..., gamma(M), gamma(M - 1), ..., gamma(1), done in place.
  auto  w   = fftw_buffer<fftw_complex>(M + 1);
  auto *row = reinterpret_cast<double *>(w.get());
  for (std::size_t k = 0; k <= M; ++k)
  {
    row[k] = fgn_autocovariance(H, static_cast<double>(k));
  }
  for (std::size_t k = M + 1; k < n; ++k)
  {
    row[k] = row[n - k];
  }
  {
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), row, w.get(), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  double lmax = 0.0;
  double lmin = 0.0;
  for (std::size_t k = 0; k <= M; ++k)
  {
    lmax = std::max(lmax, w[k][0]);
    lmin = std::min(lmin, w[k][0]);
  }
  if (lmin < -1e-10 * lmax)
  {
    if (K > kCholeskyLimit)
    {
      throw Error("circulant embedding is not nonnegative and the grid is too long for Cholesky");
    }
    if (warning != nullptr)
    {
      *warning = "circulant embedding has negative eigenvalues; using Cholesky";
    }
    return cholesky_fgn(H, K, rng);
  }

  // Hermitian spectrum W with E|Y_j|^2 matching the circulant covariance.
  std::normal_distribution<double> normal;
  double const                     inv_n = 1.0 / static_cast<double>(n);
  auto scaled = [&](std::size_t k, double factor) { return std::sqrt(std::max(w[k][0], 0.0) * factor); };
  w[0][0] = scaled(0, inv_n) * normal(rng);
  w[0][1] = 0.0;
  for (std::size_t k = 1; k < M; ++k)
  {
    double const s = scaled(k, 0.5 * inv_n);
    double const a = normal(rng);
    double const b = normal(rng);
    w[k][0]        = s * a;
    w[k][1]        = s * b;
  }
  w[M][0] = scaled(M, inv_n) * normal(rng);
  w[M][1] = 0.0;

  auto     *out  = reinterpret_cast<double *>(w.get());
  fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), w.get(), out, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  return std::vector<double>(out, out + K);
}

PricePath gen_fbm(double H, double scale, double T, double grid_step, std::uint64_t seed, std::string *warning)
{
  if (!(scale > 0.0))
  {
    throw InvalidArgument("fbm scale must be positive");
  }
  std::size_t const K = grid_steps(T, grid_step);
  double const      h = T / static_cast<double>(K);
  auto              noise = fractional_gaussian_noise(H, K, seed, warning);
  double const      unit  = scale * std::pow(h, H);

  std::vector<double> times(K + 1);
  std::vector<double> values(K + 1);
  times[0]   = 0.0;
  values[0]  = 1.0;  // B_H(0) = 0
  double log = 0.0;
  for (std::size_t i = 1; i <= K; ++i)
  {
    log += unit * noise[i - 1];
    times[i]  = (i == K) ? T : static_cast<double>(i) * h;
    values[i] = std::exp(log);
  }
  noise = {};
  PathGenerator meta;
  meta.kind  = PathGenerator::Kind::fbm;
  meta.hurst = H;
  meta.scale = scale;
  meta.seed  = seed;
  return PricePath(std::move(times), std::move(values), 1, std::move(meta));
}

}  // namespace gtpbet
