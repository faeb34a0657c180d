#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wta {

using u64 = std::uint64_t;
using Rng = std::mt19937_64;

// Error hierarchy shared by all modules. The C API maps each type to a
// distinct status code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParamError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct CalibrationError : Error {
    using Error::Error;
};
struct IntegrityError : Error {
    using Error::Error;
};
struct SimulationError : Error {
    using Error::Error;
};

// splitmix64 finalizer; good avalanche, cheap.
inline u64 mix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline u64 hash_combine(u64 seed, u64 v) { return mix64(seed ^ mix64(v)); }

// Splittable sub-stream derivation: hash(master, purpose tag, index).
// Adding parallelism never changes which stream a consumer sees.
inline u64 derive_seed(u64 master, std::string_view tag, u64 index = 0) {
    u64 h = mix64(master);
    for (char ch : tag) h = hash_combine(h, static_cast<u64>(static_cast<unsigned char>(ch)));
    return hash_combine(h, index);
}

inline Rng make_rng(u64 master, std::string_view tag, u64 index = 0) {
    return Rng(derive_seed(master, tag, index));
}

}  // namespace wta
