#include "adpipe/hash.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "adpipe/errors.hpp"

namespace adpipe {

std::uint64_t fnv1a64_bytes(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file for checksum: " + path);
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h = fnv1a64_bytes(buf.data(), static_cast<std::size_t>(in.gcount()), h);
    }
    return to_hex(h);
}

}  // namespace adpipe
