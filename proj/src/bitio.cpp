#include "lpc/bitio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace lpc {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << data;
}

std::vector<std::uint8_t> pack_msb_first(const BitString& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return bytes;
}

} // namespace

void write_bits_ascii(const std::string& path, const BitString& bits) {
    write_file(path, bits.to_string() + "\n");
}

BitString read_bits_ascii(const std::string& path) {
    std::string data = read_file(path);
    BitString r;
    for (char c : data) {
        if (c == '0') r.push_back(0);
        else if (c == '1') r.push_back(1);
        else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        else throw ParseError("bit file: unexpected byte in " + path);
    }
    return r;
}

void write_bits_packed(const std::string& path, const BitString& bits) {
    std::string data;
    std::uint64_t n = bits.size();
    for (int i = 0; i < 8; ++i) data.push_back(static_cast<char>((n >> (8 * i)) & 0xffu));
    for (auto b : pack_msb_first(bits)) data.push_back(static_cast<char>(b));
    write_file(path, data);
}

BitString read_bits_packed(const std::string& path) {
    std::string data = read_file(path);
    if (data.size() < 8) throw ParseError("packed bit file too short: " + path);
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i)
        n |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[i])) << (8 * i);
    if (data.size() < 8 + (n + 7) / 8) throw ParseError("packed bit file truncated: " + path);
    BitString r;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto byte = static_cast<unsigned char>(data[8 + i / 8]);
        r.push_back((byte >> (7 - i % 8)) & 1u);
    }
    return r;
}

BitString read_bit_file(const std::string& path) {
    std::string data = read_file(path);
    bool ascii = !data.empty();
    for (char c : data) {
        if (c != '0' && c != '1' && c != '\n' && c != '\r' && c != ' ' && c != '\t') {
            ascii = false;
            break;
        }
    }
    return ascii ? read_bits_ascii(path) : read_bits_packed(path);
}

std::uint64_t bit_checksum(const BitString& bits) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    std::uint64_t n = bits.size();
    for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>((n >> (8 * i)) & 0xffu));
    for (auto b : pack_msb_first(bits)) mix(b);
    return h;
}

void write_sidecar(const std::string& path, const Sidecar& s) {
    nlohmann::json j{
        {"payload_bits", s.payload_bits},
        {"payload_checksum", s.payload_checksum},
        {"codeword_bits", s.codeword_bits},
        {"codeword_checksum", s.codeword_checksum},
    };
    write_file(path + ".sum", j.dump(2) + "\n");
}

Sidecar read_sidecar(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path + ".sum"));
    Sidecar s;
    s.payload_bits = j.at("payload_bits").get<std::uint64_t>();
    s.payload_checksum = j.at("payload_checksum").get<std::uint64_t>();
    s.codeword_bits = j.at("codeword_bits").get<std::uint64_t>();
    s.codeword_checksum = j.at("codeword_checksum").get<std::uint64_t>();
    return s;
}

bool sidecar_exists(const std::string& path) {
    return std::filesystem::exists(path + ".sum");
}

} // namespace lpc
