#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hh {

using ItemId = std::uint32_t;

// Insertion stream over the universe [1, n].
struct Stream {
    std::uint32_t universe_size = 0;   // n
    std::vector<ItemId> items;         // each in [1, n]

    std::uint64_t length() const { return items.size(); }
};

inline void validate_stream(const Stream& s) {
    if (s.universe_size == 0) throw std::invalid_argument("stream: universe size must be >= 1");
    for (ItemId id : s.items) {
        if (id == 0 || id > s.universe_size)
            throw std::invalid_argument("stream: item id " + std::to_string(id) +
                                        " outside [1, " + std::to_string(s.universe_size) + "]");
    }
}

// Text format: one decimal item id per line, LF-terminated.
inline void write_stream_text(const Stream& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (ItemId id : s.items) out << id << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

// universe_override = 0 infers n as the maximum id seen.
inline Stream read_stream_text(const std::string& path, std::uint32_t universe_override = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    Stream s;
    std::string line;
    std::uint32_t max_id = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        unsigned long long v = 0;
        try {
            v = std::stoull(line);
        } catch (const std::exception&) {
            throw std::runtime_error("bad item id line in " + path + ": '" + line + "'");
        }
        if (v == 0 || v > 0xFFFFFFFFull)
            throw std::runtime_error("item id out of range in " + path + ": " + line);
        s.items.push_back(static_cast<ItemId>(v));
        if (v > max_id) max_id = static_cast<std::uint32_t>(v);
    }
    s.universe_size = universe_override != 0 ? universe_override : (max_id == 0 ? 1 : max_id);
    validate_stream(s);
    return s;
}

// Binary format: magic "HHS1", u32 LE n, u64 LE m, then m u32 LE item ids.
inline void write_stream_binary(const Stream& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    auto put_u32 = [&](std::uint32_t v) {
        char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
        out.write(b, 4);
    };
    out.write("HHS1", 4);
    put_u32(s.universe_size);
    std::uint64_t m = s.length();
    put_u32(static_cast<std::uint32_t>(m & 0xFFFFFFFFull));
    put_u32(static_cast<std::uint32_t>(m >> 32));
    for (ItemId id : s.items) put_u32(id);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Stream read_stream_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    auto get_u32 = [&]() -> std::uint32_t {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw std::runtime_error("truncated stream file: " + path);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "HHS1")
        throw std::runtime_error("bad magic, not an HHS1 stream file: " + path);
    Stream s;
    s.universe_size = get_u32();
    std::uint64_t lo = get_u32();
    std::uint64_t hi = get_u32();
    std::uint64_t m = lo | (hi << 32);
    s.items.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) s.items.push_back(get_u32());
    validate_stream(s);
    return s;
}

}  // namespace hh
