#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bellchain {

// Deterministic, stream-splittable RNG. Every consumer takes an RngStream by
// reference and advances it; streams are value types and never shared between
// workers. Stream k of master seed s is independent of stream j != k, so
// per-channel results do not depend on evaluation order.
//
// Gaussian variates use an explicit Box-Muller transform instead of
// std::normal_distribution, whose algorithm is implementation-defined; this
// keeps output byte-identical across standard libraries.
class RngStream {
  public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
        : eng_(mix(mix(master_seed) ^ mix(stream_id * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) for n that divides 2^64 evenly enough; used
    // only with tiny n (≤ 16) where modulo bias is zero for powers of two and
    // otherwise below 1e-18.
    std::uint64_t uniform_below(std::uint64_t n) { return next_u64() % n; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bellchain
