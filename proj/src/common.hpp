#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace hdnoma {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2e = 1.4426950408889634074;  // 1/ln(2)

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// splitmix64 finalizer. Derives an independent seed per (master, stream) so
// trials can run on any worker layout without changing their draws.
inline uint64_t mix_seed(uint64_t master, uint64_t stream) {
  uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded generator. Normals come from an explicit Box-Muller transform so a
// given seed produces the same stream on every toolchain we build with.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    return int((static_cast<unsigned __int128>(eng_()) * uint64_t(n)) >> 64);
  }

  // standard normal
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  // circularly symmetric complex normal with E|z|^2 = 1
  cplx cgaussian() {
    constexpr double s = 0.70710678118654752440;
    double re = gaussian();
    double im = gaussian();
    return {re * s, im * s};
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Online log-sum-exp accumulator (exact Jacobian logarithm). Contributions
// more than kCutoff below the running maximum are dropped; they are below
// double precision relative to the sum.
class LogAcc {
 public:
  static constexpr double kCutoff = 60.0;

  void add(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return;
    if (v > max_) {
      if (max_ == -std::numeric_limits<double>::infinity()) {
        max_ = v;
        sum_ = 1.0;
        return;
      }
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    } else if (v > max_ - kCutoff) {
      sum_ += std::exp(v - max_);
    }
  }

  void add_max(double v) {  // max-log variant
    if (v > max_) {
      max_ = v;
      sum_ = 1.0;
    }
  }

  double value() const {
    if (max_ == -std::numeric_limits<double>::infinity()) return max_;
    return max_ + std::log(sum_);
  }

  bool empty() const { return max_ == -std::numeric_limits<double>::infinity(); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

inline double log_sum_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// Thrown when a requested allocation problem has no feasible point
// (typically an unattainable weak-group rate floor).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration would exceed its configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hdnoma
