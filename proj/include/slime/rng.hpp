#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace slime {

// All randomness in the project flows through this wrapper. std::mt19937_64
// output is fully specified by the standard, and the helpers below avoid
// std::uniform_*_distribution (whose sequences are implementation-defined),
// so seeded results are identical across platforms and standard libraries.
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), unbiased via rejection. bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives an independent seed for a named substream of a master seed.
// Adding a substream never perturbs any other: the derivation depends only
// on (master, name, index).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
    return splitmix64(master ^ splitmix64(fnv1a64(name) + index));
}

// Repeated k-out-of-n subsampling without replacement. Keeps one index pool
// alive across draws; each draw does k partial Fisher-Yates swaps and then
// undoes them, so a draw costs O(k) regardless of n.
class subsampler {
public:
    explicit subsampler(std::size_t n) : pool_(n) {
        for (std::size_t i = 0; i < n; ++i) pool_[i] = static_cast<std::uint32_t>(i);
    }

    void draw(std::size_t k, rng& r, std::vector<std::uint32_t>& out) {
        const std::size_t n = pool_.size();
        swaps_.clear();
        out.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(next(r, n - i));
            swaps_.push_back({i, j});
            std::swap(pool_[i], pool_[j]);
            out[i] = pool_[i];
        }
        for (std::size_t s = swaps_.size(); s > 0; --s)
            std::swap(pool_[swaps_[s - 1].first], pool_[swaps_[s - 1].second]);
    }

private:
    static std::uint64_t next(rng& r, std::size_t bound) {
        return bound <= 1 ? 0 : r.next_below(bound);
    }

    std::vector<std::uint32_t> pool_;
    std::vector<std::pair<std::size_t, std::size_t>> swaps_;
};

}  // namespace slime
