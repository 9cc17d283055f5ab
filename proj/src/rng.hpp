#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace holelab {

// Counter-style generator built on the splitmix64 permutation. Streams are
// derived by hashing (root, stream) so replicas are independent and
// reproducible across runs.
struct Rng {
    uint64_t state;

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    explicit Rng(uint64_t seed) : state(mix(seed + 0x9e3779b97f4a7c15ull)) {}
    Rng(uint64_t root, uint64_t stream)
        : state(mix(mix(root + 0x9e3779b97f4a7c15ull) ^
                    mix(stream + 0xd1b54a32d192ed03ull))) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        return mix(z);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0,...,n-1}
    uint64_t next_below(uint64_t n) {
        // multiply-shift; bias is negligible for n far below 2^64
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    double spare_gauss = 0.0;
    bool has_spare = false;

    double next_gauss() {
        if (has_spare) {
            has_spare = false;
            return spare_gauss;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_gauss = v * m;
        has_spare = true;
        return u * m;
    }

    // Exponential-race count; linear in lambda which is fine at our scales.
    uint64_t next_poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("poisson: lambda < 0");
        uint64_t k = 0;
        while (lambda > 500.0) {
            // split to keep the product method in safe floating range
            k += next_poisson(500.0);
            lambda -= 500.0;
        }
        double limit = std::exp(-lambda), prod = next_double();
        while (prod > limit) {
            ++k;
            prod *= next_double();
        }
        return k;
    }

    double next_exponential() { return -std::log(1.0 - next_double()); }
};

// Vose alias table for sampling a fixed discrete distribution in O(1).
class AliasTable {
  public:
    explicit AliasTable(const std::vector<double>& weights) {
        size_t n = weights.size();
        if (n == 0) throw std::invalid_argument("alias: empty weights");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("alias: negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("alias: zero total weight");
        prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::vector<double> scaled(n);
        for (size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
        std::vector<size_t> small, large;
        for (size_t i = 0; i < n; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(i);
        while (!small.empty() && !large.empty()) {
            size_t s = small.back(), l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (size_t i : large) prob_[i] = 1.0;
        for (size_t i : small) prob_[i] = 1.0;
    }

    size_t sample(Rng& rng) const {
        size_t i = static_cast<size_t>(rng.next_below(prob_.size()));
        return rng.next_double() < prob_[i] ? i : alias_[i];
    }

  private:
    std::vector<double> prob_;
    std::vector<size_t> alias_;
};

}  // namespace holelab
