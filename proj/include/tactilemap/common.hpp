#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tactilemap {

enum class ErrorCode {
    InvalidArgument = 1,
    DimensionMismatch,
    IoFailure,
    CorruptFile,
    NoContact,
    OutOfFrame,
    EmptyResult,
    IllPosed,
    Degenerate,
    NonFiniteLoss,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

// Counter-based deterministic RNG. Streams are indexed, so draws do not
// depend on evaluation order or thread count.
namespace rng {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (0x2545f4914f6cdd1dULL * (index + 1)));
}

// [0,1)
inline double uniform(uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

inline double uniform(uint64_t seed, uint64_t index) { return uniform(mix(seed, index)); }

// One standard normal per (seed,index) via Box-Muller on two derived uniforms.
inline double normal(uint64_t seed, uint64_t index) {
    uint64_t bits = mix(seed, index);
    double u1 = uniform(bits);
    double u2 = uniform(splitmix64(bits));
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Sequential generator for code that draws a variable number of values.
class Stream {
public:
    explicit Stream(uint64_t seed) : seed_(seed) {}
    uint64_t next_bits() { return mix(seed_, counter_++); }
    double next_uniform() { return uniform(next_bits()); }
    double next_normal() {
        uint64_t bits = next_bits();
        double u1 = uniform(bits);
        double u2 = uniform(splitmix64(bits));
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }
    // Unbiased integer in [0, n)
    uint64_t next_below(uint64_t n) {
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t bits = next_bits();
            if (bits >= threshold) return bits % n;
        }
    }
    uint64_t fork(uint64_t salt) const { return splitmix64(seed_ ^ splitmix64(salt)); }

private:
    uint64_t seed_;
    uint64_t counter_ = 0;
};

}  // namespace rng

// FNV-1a, used for config hashes and raster content checks. Not cryptographic.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

}  // namespace tactilemap
