#pragma once

// Core value types shared by every module: individuals, populations, box
// bounds and the seeded random-number stream. All types are plain values;
// operations never mutate their inputs.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moeacsod {

/// Thrown when an objective evaluation produces a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::string msg, int objective_index)
        : std::runtime_error(std::move(msg)), objective_index_(objective_index) {}
    int objective_index() const { return objective_index_; }

private:
    int objective_index_;
};

/// Thrown when a training update produces a non-finite gradient.
class TrainingError : public std::runtime_error {
public:
    TrainingError(std::string msg, std::string block)
        : std::runtime_error(std::move(msg)), block_(std::move(block)) {}
    const std::string& block() const { return block_; }

private:
    std::string block_;
};

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> l, std::vector<double> u)
        : lower(std::move(l)), upper(std::move(u)) {
        if (lower.size() != upper.size()) {
            throw std::invalid_argument("Bounds: lower/upper length mismatch");
        }
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(lower[i] < upper[i])) {
                throw std::invalid_argument(
                    "Bounds: lower[" + std::to_string(i) + "] must be < upper[" + std::to_string(i) + "]");
            }
        }
    }

    std::size_t size() const { return lower.size(); }
};

/// One candidate solution; `f` is empty until the individual has been
/// evaluated against a problem instance.
struct Individual {
    std::vector<double> x;  // decision vector, length D
    std::vector<double> f;  // objective vector, length M (empty = unevaluated)
    std::vector<double> v;  // velocity, length D
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;

    std::size_t size() const { return members.size(); }
};

inline void clip_to_bounds(std::vector<double>& x, const Bounds& bounds) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < bounds.lower[i]) x[i] = bounds.lower[i];
        if (x[i] > bounds.upper[i]) x[i] = bounds.upper[i];
    }
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic random stream (xoshiro256** seeded through splitmix64).
///
/// The same seed always yields the same draw sequence, and `split` derives
/// an independent child stream from the original seed plus a key, so
/// parallel consumers never share state. Uniform draws live in [0, 1);
/// Gaussian draws are standard normal via Box-Muller.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal draw (Box-Muller, second value cached).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent child stream keyed off the original seed. Safe to call
    /// any number of times with distinct keys regardless of how much the
    /// parent has been consumed.
    RngStream split(std::uint64_t key0, std::uint64_t key1 = 0) const {
        std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL + key0);
        std::uint64_t a = splitmix64(x);
        x ^= key1 + 0xbf58476d1ce4e5b9ULL;
        std::uint64_t b = splitmix64(x);
        return RngStream(a ^ rotl(b, 32));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4] = {};
    std::uint64_t seed_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// N fresh individuals drawn uniformly inside the instance bounds, zero
/// velocity, objectives evaluated. Works for any problem type offering a
/// `bounds` member and an ADL-visible `evaluate(instance, x)`.
template <typename Problem>
Population init_population(const Problem& instance, int n, RngStream& rng) {
    if (n < 2) throw std::invalid_argument("init_population: population size must be >= 2");
    const Bounds& b = instance.bounds;
    Population pop;
    pop.members.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Individual ind;
        ind.x.resize(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            ind.x[i] = rng.uniform(b.lower[i], b.upper[i]);
        }
        ind.v.assign(b.size(), 0.0);
        ind.f = evaluate(instance, ind.x);
        pop.members.push_back(std::move(ind));
    }
    return pop;
}

/// Re-evaluates every member in order; purely functional.
template <typename Problem>
Population evaluate_population(const Problem& instance, const Population& pop) {
    Population out = pop;
    for (auto& member : out.members) {
        if (member.x.size() != instance.bounds.size()) {
            throw std::invalid_argument("evaluate_population: member dimension does not match instance");
        }
        member.f = evaluate(instance, member.x);
    }
    return out;
}

}  // namespace moeacsod
