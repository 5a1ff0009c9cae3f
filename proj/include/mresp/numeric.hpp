#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace mresp {

// Compensated (Neumaier) accumulator. Long response sums mix magnitudes of
// 1e-4 contributions over 1e7 samples; plain doubles drift enough to break
// bit-reproducibility checks between equivalent evaluation orders.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

// Deterministic 64-bit generator (splitmix64). The standard <random>
// distributions are implementation-defined, so seeded fixtures would not
// reproduce across toolchains; everything below is pinned arithmetic.
struct Rng {
    std::uint64_t state = 0;

    explicit Rng(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    bool coin(double p_true) { return uniform01() < p_true; }

    // Standard normal via Box-Muller; caches the paired deviate.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Geometric on {0,1,2,...} with the given mean, by inversion.
    std::int64_t geometric(double mean) {
        if (mean <= 0.0) return 0;
        const double p = 1.0 / (1.0 + mean);  // success probability
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        const double k = std::floor(std::log(u) / std::log1p(-p));
        return static_cast<std::int64_t>(k);
    }

    // Derives an independent stream, e.g. one per simulated day.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
        return r.next_u64();
    }

  private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Runs fn(i) for i in [0, n) across `workers` threads. Results must not
// depend on execution order; callers write to disjoint slots and merge in
// index order afterwards, which keeps output identical for any worker count.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mresp
