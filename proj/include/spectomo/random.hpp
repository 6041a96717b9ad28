#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

namespace spectomo {

/// Deterministic, splittable random streams. Each logical task derives its
/// own engine from (seed, key...) so that results do not depend on the order
/// in which tasks run. Distribution sampling is hand-rolled on top of
/// mt19937_64 to keep output bit-stable across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Derive a sub-seed keyed by up to three indices.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ mix(a + 0x9e3779b97f4a7c15ULL));
    s = mix(s ^ mix(b + 0xbf58476d1ce4e5b9ULL));
    s = mix(s ^ mix(c + 0x94d049bb133111ebULL));
    return s;
  }

  /// Derive a sub-stream keyed by up to three indices.
  static RandomStream keyed(std::uint64_t seed, std::uint64_t a,
                            std::uint64_t b = 0, std::uint64_t c = 0) {
    return RandomStream(derive(seed, a, b, c));
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Marsaglia polar method.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return engine_() % n;
  }

  /// Draw `shots` samples from the distribution `p` (assumed normalized);
  /// returns per-outcome counts.
  std::vector<long> multinomial(long shots, const Eigen::VectorXd& p) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      acc += p[i];
      cdf[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<long> counts(static_cast<std::size_t>(p.size()), 0);
    for (long s = 0; s < shots; ++s) {
      const double u = uniform() * acc;
      std::size_t lo = 0, hi = counts.size() - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cdf[mid]) hi = mid; else lo = mid + 1;
      }
      ++counts[lo];
    }
    return counts;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-random unitary of dimension n (Ginibre + QR with phase fix).
inline Eigen::MatrixXcd haar_unitary(int n, RandomStream& rng) {
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      z(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Random Kraus set for a TPCP channel on dimension d, built from the first
/// d columns of a Haar unitary on d*rank dimensions (a random isometry).
inline std::vector<Eigen::MatrixXcd> random_kraus(int d, int rank,
                                                  RandomStream& rng) {
  const Eigen::MatrixXcd v = haar_unitary(d * rank, rng).leftCols(d);
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) kraus.push_back(v.middleRows(i * d, d));
  return kraus;
}

}  // namespace spectomo
