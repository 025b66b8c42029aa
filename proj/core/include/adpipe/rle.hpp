#pragma once

#include <cstdint>
#include <vector>

#include "adpipe/types.hpp"

namespace adpipe {

/// Run-length encoding of a mask: alternating run lengths over the row-major
/// bit stream, starting with the count of 0-bits. Canonical form: the first
/// count may be zero (mask starts with foreground); every later count is
/// positive; counts sum to width*height.
std::vector<std::uint64_t> rle_encode(const BinaryMask& mask);

/// Decodes and validates a canonical RLE stream. Throws InvalidArgument when
/// the stream is not canonical or does not cover exactly width*height bits.
BinaryMask rle_decode(int width, int height, const std::vector<std::uint64_t>& runs);

}  // namespace adpipe
