#pragma once

#include <cstdint>
#include <string>

#include "lpc/bits.hpp"

namespace lpc {

/// ASCII format: one '0'/'1' character per bit, optional trailing newline.
void write_bits_ascii(const std::string& path, const BitString& bits);
BitString read_bits_ascii(const std::string& path);

/// Packed format: 8-byte little-endian bit count, then bits packed MSB-first
/// into bytes, zero padded in the final byte.
void write_bits_packed(const std::string& path, const BitString& bits);
BitString read_bits_packed(const std::string& path);

/// Reads either format: a file whose content is entirely '0'/'1'/whitespace
/// is taken as ASCII, anything else as packed.
BitString read_bit_file(const std::string& path);

/// FNV-1a over the bits packed MSB-first, length mixed in first.
std::uint64_t bit_checksum(const BitString& bits);

struct Sidecar {
    std::uint64_t payload_bits = 0;
    std::uint64_t payload_checksum = 0;
    std::uint64_t codeword_bits = 0;
    std::uint64_t codeword_checksum = 0;
};

/// Sidecar file `<codeword path>.sum` holding the payload and codeword
/// checksums as JSON, so corruption that still decodes is detectable.
void write_sidecar(const std::string& path, const Sidecar& s);
Sidecar read_sidecar(const std::string& path);
bool sidecar_exists(const std::string& path);

} // namespace lpc
