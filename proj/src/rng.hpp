#pragma once

// Seed-reproducible random streams. std:: distributions are implementation
// defined, so all transforms live here: results must be bit-identical for a
// given seed regardless of platform or thread count.

#include <cmath>
#include <cstdint>

namespace mhtc::rng {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of up to four words; used to derive sub-seeds and per-link
// fading without storing O(N^2) draws.
inline uint64_t mix(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
    uint64_t s = a ^ 0x2545f4914f6cdd1dULL;
    uint64_t out = splitmix64(s);
    s ^= b + 0x632be59bd9b4e019ULL;
    out ^= splitmix64(s);
    s ^= c + 0x9e3779b97f4a7c15ULL;
    out ^= splitmix64(s);
    s ^= d + 0xd6e8feb86659fd93ULL;
    out ^= splitmix64(s);
    return out;
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed = 1) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1]: never 0, so -log is always finite.
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
    // Uniform on [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential() { return -std::log(uniform_pos()); }

    // Box-Muller; consumes exactly two words per pair, caches the second.
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    // Gamma(shape k integer, scale 1): sum of k exponentials. Shapes here are
    // small Nakagami m0 values, so the naive sum is fine.
    double gamma_int(int k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += exponential();
        return s;
    }

    // Poisson via inversion for small means, PTRS transformed rejection
    // otherwise (Hormann 1993). Deterministic given the stream.
    uint64_t poisson(double mean);

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4]{};
    double cache_ = 0.0;
    bool have_cache_ = false;
};

inline uint64_t Xoshiro256pp::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        const double L = std::exp(-mean);
        uint64_t k = 0;
        double p = uniform_pos();
        while (p > L) {
            ++k;
            p *= uniform_pos();
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform_pos();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * loglam - mean - std::lgamma(k + 1.0)) {
            return static_cast<uint64_t>(k);
        }
    }
}

} // namespace mhtc::rng
