#include "adpipe/rle.hpp"

namespace adpipe {

std::vector<std::uint64_t> rle_encode(const BinaryMask& mask) {
    mask.validate();
    std::vector<std::uint64_t> runs;
    std::uint8_t current = 0;  // runs start with the 0-bit count
    std::uint64_t length = 0;
    for (std::uint8_t bit : mask.bits) {
        const std::uint8_t b = bit ? 1 : 0;
        if (b == current) {
            ++length;
        } else {
            runs.push_back(length);
            current = b;
            length = 1;
        }
    }
    runs.push_back(length);
    return runs;
}

BinaryMask rle_decode(int width, int height, const std::vector<std::uint64_t>& runs) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("mask dimensions must be >= 1");
    }
    if (runs.empty()) {
        throw InvalidArgument("RLE stream must be non-empty");
    }
    const std::uint64_t total = std::uint64_t(width) * std::uint64_t(height);
    BinaryMask mask = BinaryMask::filled(width, height, false);
    std::size_t pos = 0;
    std::uint8_t value = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::uint64_t run = runs[i];
        if (i > 0 && run == 0) {
            throw InvalidArgument("RLE stream not canonical: zero-length interior run");
        }
        if (pos + run > total) {
            throw InvalidArgument("RLE stream exceeds width*height bits");
        }
        for (std::uint64_t k = 0; k < run; ++k) {
            mask.bits[pos++] = value;
        }
        value = value ? 0 : 1;
    }
    if (pos != total) {
        throw InvalidArgument("RLE stream covers fewer than width*height bits");
    }
    return mask;
}

}  // namespace adpipe
