#pragma once

// Test-side reference computations. These deliberately avoid the library's
// linear algebra and use plain long-double loops, so agreement with the
// library is a genuine cross-check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<long double>>;
using Vec = std::vector<long double>;

/// Gaussian elimination with partial pivoting. Throws on a singular system.
inline Vec solve(Mat A, Vec b) {
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A[i][k]) > std::fabs(A[p][k])) p = i;
    if (A[p][k] == 0.0L) throw std::runtime_error("singular system");
    std::swap(A[p], A[k]);
    std::swap(b[p], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double m = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
      b[i] -= m * b[k];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

/// Numerical rank by Gaussian elimination with full pivoting on a copy whose
/// columns are scaled to unit max-norm; pivots below tol * first pivot count
/// as zero.
inline std::size_t rank(Mat A, long double tol = 1e-10L) {
  const std::size_t n = A.size();
  if (n == 0) return 0;
  const std::size_t m = A[0].size();
  for (std::size_t j = 0; j < m; ++j) {
    long double mx = 0;
    for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::fabs(A[i][j]));
    if (mx > 0)
      for (std::size_t i = 0; i < n; ++i) A[i][j] /= mx;
  }
  std::size_t r = 0;
  long double first = 0;
  for (std::size_t k = 0; k < std::min(n, m); ++k) {
    std::size_t pi = k, pj = k;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < m; ++j)
        if (std::fabs(A[i][j]) > std::fabs(A[pi][pj])) {
          pi = i;
          pj = j;
        }
    const long double piv = std::fabs(A[pi][pj]);
    if (k == 0) first = piv;
    if (piv == 0 || piv <= tol * first) break;
    std::swap(A[pi], A[k]);
    for (auto& row : A) std::swap(row[pj], row[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < m; ++j) A[i][j] -= f * A[k][j];
    }
    ++r;
  }
  return r;
}

inline long double monomial(const std::vector<double>& x, const std::vector<int>& a) {
  long double v = 1;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (int k = 0; k < a[j]; ++k) v *= x[j];
  return v;
}

using KernelFn = std::function<long double(const std::vector<double>&, const std::vector<double>&)>;

struct Gp {
  long double mean;
  long double variance;
};

/// Textbook universal-kriging posterior with explicit K^{-1} solves:
/// mean = k^T K^-1 f + r^T beta, var = k** - k^T K^-1 k + r^T (V^T K^-1 V)^-1 r.
inline Gp gp_posterior(const std::vector<std::vector<int>>& A, const KernelFn& k,
                       const std::vector<std::vector<double>>& X, const std::vector<double>& f,
                       const std::vector<double>& xs) {
  const std::size_t n = X.size();
  const std::size_t m = A.size();
  Mat K(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i][j] = k(X[i], X[j]);
  Mat V(n, Vec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) V[i][j] = monomial(X[i], A[j]);
  Vec kv(n);
  for (std::size_t i = 0; i < n; ++i) kv[i] = k(X[i], xs);
  Vec fv(f.begin(), f.end());

  const Vec Kinv_f = solve(K, fv);
  const Vec Kinv_k = solve(K, kv);
  Mat Kinv_V(n, Vec(m));
  for (std::size_t j = 0; j < m; ++j) {
    Vec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = V[i][j];
    const Vec s = solve(K, col);
    for (std::size_t i = 0; i < n; ++i) Kinv_V[i][j] = s[i];
  }
  Mat G(m, Vec(m, 0));
  Vec Vt_Kinv_f(m, 0);
  Vec r(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < n; ++i) G[a][b] += V[i][a] * Kinv_V[i][b];
    for (std::size_t i = 0; i < n; ++i) Vt_Kinv_f[a] += V[i][a] * Kinv_f[i];
    long double vk = 0;
    for (std::size_t i = 0; i < n; ++i) vk += V[i][a] * Kinv_k[i];
    r[a] = monomial(xs, A[a]) - vk;
  }
  const Vec beta = solve(G, Vt_Kinv_f);
  const Vec Ginv_r = solve(G, r);
  long double mean = 0;
  long double var = k(xs, xs);
  for (std::size_t i = 0; i < n; ++i) {
    mean += kv[i] * Kinv_f[i];
    var -= kv[i] * Kinv_k[i];
  }
  for (std::size_t a = 0; a < m; ++a) {
    mean += r[a] * beta[a];
    var += r[a] * Ginv_r[a];
  }
  return {mean, var};
}

/// Leave-one-out criterion by n independent refits.
inline long double loocv(const std::vector<std::vector<int>>& A, const KernelFn& k,
                         const std::vector<std::vector<double>>& X, const std::vector<double>& f) {
  long double total = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    std::vector<std::vector<double>> Xi;
    std::vector<double> fi;
    for (std::size_t j = 0; j < X.size(); ++j) {
      if (j == i) continue;
      Xi.push_back(X[j]);
      fi.push_back(f[j]);
    }
    const Gp g = gp_posterior(A, k, Xi, fi, X[i]);
    const long double r = f[i] - g.mean;
    total += 0.5L * std::log(2.0L * std::numbers::pi_v<long double> * g.variance) + 0.5L * r * r / g.variance;
  }
  return total;
}

/// Kernel formulas written out independently of the library.
inline KernelFn kernel(int family, double sigma2, double ell) {
  return [=](const std::vector<double>& x, const std::vector<double>& y) -> long double {
    long double r2 = 0;
    bool same = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
      r2 += (long double)(x[j] - y[j]) * (x[j] - y[j]);
      same = same && x[j] == y[j];
    }
    const long double r = std::sqrt(r2);
    switch (family) {
      case 0: return same ? sigma2 : 0.0L;
      case 1: return sigma2 * std::exp(-r / ell);
      case 2: {
        const long double a = std::sqrt(3.0L) * r / ell;
        return sigma2 * (1 + a) * std::exp(-a);
      }
      default: return sigma2 * std::exp(-r2 / (ell * ell));
    }
  };
}

/// phi_i(z) by Cauchy's repeated-integration formula
/// phi_i(z) = 1/(i-1)! int_0^z (z - t)^(i-1) |t - 1/2| dt, integrated in closed form.
inline long double phi(int i, long double z) {
  if (i == 0) return std::fabs(z - 0.5L);
  const int n = i - 1;
  long double fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  // int over t in [a, b] of (z - t)^n (t - 1/2) dt, via u = z - t.
  auto piece = [&](long double a, long double b) {
    auto F = [&](long double u) {
      return (z - 0.5L) * std::pow(u, n + 1) / (n + 1) - std::pow(u, n + 2) / (n + 2);
    };
    return F(z - a) - F(z - b);
  };
  long double v = 0;
  if (z <= 0.5L) {
    v = -piece(0, z);
  } else {
    v = -piece(0, 0.5L) + piece(0.5L, z);
  }
  return v / fact;
}

/// Brute-force midpoint sum of g(t) = 1 + phi(mean t)/phi(1) with N cells per
/// axis. phi_i is non-decreasing, so its sup-norm on [0,1] is phi_i(1). In
/// d = 2 the cell mean depends only on a + b, which has multiplicity
/// min(k, 2N - 2 - k) + 1.
inline long double midpoint_integral(int d, int s, long N) {
  const int i = 2 * s + 2;
  const long double norm = phi(i, 1.0L);
  long double sum = 0;
  if (d == 1) {
    for (long a = 0; a < N; ++a) sum += phi(i, (a + 0.5L) / N);
    return 1 + sum / N / norm;
  }
  for (long k = 0; k <= 2 * N - 2; ++k) {
    const long mult = std::min(k, 2 * N - 2 - k) + 1;
    sum += mult * phi(i, (k + 1.0L) / (2.0L * N));
  }
  return 1 + sum / ((long double)N * N) / norm;
}

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace oracle
