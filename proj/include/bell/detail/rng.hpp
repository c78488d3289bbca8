#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace bell::detail {

// SplitMix64 output mixing (Vigna, public domain).
inline std::uint64_t sm64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64 in counter form: output_i = mix(key + (i+1) * gamma). Streams
/// with distinct keys are independent, so work split across setting pairs or
/// restarts is schedule-independent. Satisfies UniformRandomBitGenerator.
class Stream {
  public:
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    explicit Stream(std::uint64_t key) : key_(key) {}

    result_type operator()() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return sm64_mix(key_ + counter_);
    }

    double unit() {  // [0, 1)
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Derives a stream key from a seed and up to three stream coordinates
/// (e.g. Alice setting, Bob setting, replication).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t u = 0, std::uint64_t v = 0,
                                std::uint64_t w = 0) {
    std::uint64_t k = sm64_mix(seed + 0x632BE59BD9B4E019ULL);
    k = sm64_mix(k ^ (0x517CC1B727220A95ULL * (u + 1)));
    k = sm64_mix(k ^ (0x2545F4914F6CDD1DULL * (v + 1)));
    k = sm64_mix(k ^ (0x9E3779B97F4A7C15ULL * (w + 1)));
    return k;
}

inline Eigen::Vector3d random_unit_vector(Stream& rng) {
    const double z = 2.0 * rng.unit() - 1.0;
    const double phi = 2.0 * 3.14159265358979323846 * rng.unit();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
}

inline long long poisson(Stream& rng, double mean) {
    std::poisson_distribution<long long> dist(mean);
    return dist(rng);
}

inline double normal(Stream& rng, double sigma) {
    if (sigma <= 0.0) return 0.0;
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

/// Sequential-binomial multinomial sampler; probs need not be perfectly
/// normalized (the tail absorbs rounding).
inline void multinomial(Stream& rng, long long n, const double* probs, int k, long long* out) {
    double remaining = 0.0;
    for (int i = 0; i < k; ++i) remaining += std::max(0.0, probs[i]);
    long long left = n;
    for (int i = 0; i < k; ++i) {
        if (i == k - 1) {
            out[i] = left;
            break;
        }
        double p = std::max(0.0, probs[i]);
        double q = remaining > 0.0 ? std::min(1.0, p / remaining) : 0.0;
        long long draw = 0;
        if (left > 0 && q > 0.0) {
            if (q >= 1.0) {
                draw = left;
            } else {
                std::binomial_distribution<long long> dist(left, q);
                draw = dist(rng);
            }
        }
        out[i] = draw;
        left -= draw;
        remaining -= p;
    }
}

}  // namespace bell::detail
