#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace adpipe {

// FNV-1a 64-bit. Used for prompt-template checksums, provenance records and
// the deterministic mock backends. Not cryptographic.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_bytes(const void* data, std::size_t size,
                            std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string to_hex(std::uint64_t value);

/// Checksum of a file's raw bytes, rendered as 16 hex digits.
std::string file_checksum(const std::string& path);

// splitmix64: cheap stateless PRNG step, used to expand hash seeds into
// deterministic value streams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace adpipe
