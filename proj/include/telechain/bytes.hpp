#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace telechain {

using Bytes = std::vector<std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

inline std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
inline std::string to_hex(const Hash256& h) { return to_hex(h.data(), h.size()); }

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad character");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

inline Hash256 hash_from_hex(std::string_view hex) {
    Bytes b = from_hex(hex);
    if (b.size() != 32) throw std::invalid_argument("hash_from_hex: need 32 bytes");
    Hash256 h;
    std::memcpy(h.data(), b.data(), 32);
    return h;
}

// Canonical serialization: fields in declaration order, integers big-endian,
// variable-length fields prefixed with a u32 byte count. All cross-node
// digests (blocks, payloads, read-write sets, state hashes) are computed
// over this encoding, so it must stay bit-stable.
class Writer {
public:
    void put_u8(std::uint8_t v) { buf_.push_back(v); }

    void put_u16(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }

    void put_u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }

    void put_u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
    }

    void put_raw(const std::uint8_t* data, std::size_t len) {
        buf_.insert(buf_.end(), data, data + len);
    }

    void put_raw(const Bytes& b) { put_raw(b.data(), b.size()); }

    void put_bytes(const Bytes& b) {
        put_u32(static_cast<std::uint32_t>(b.size()));
        put_raw(b);
    }

    void put_str(std::string_view s) {
        put_u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    void put_hash(const Hash256& h) { put_raw(h.data(), h.size()); }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class Reader {
public:
    explicit Reader(const Bytes& b) : data_(b.data()), size_(b.size()) {}
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t get_u8() { need(1); return data_[pos_++]; }

    std::uint16_t get_u16() {
        need(2);
        std::uint16_t v = (std::uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
        pos_ += 2;
        return v;
    }

    std::uint32_t get_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
        pos_ += 4;
        return v;
    }

    std::uint64_t get_u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
        pos_ += 8;
        return v;
    }

    Bytes get_raw(std::size_t len) {
        need(len);
        Bytes out(data_ + pos_, data_ + pos_ + len);
        pos_ += len;
        return out;
    }

    Bytes get_bytes() { return get_raw(get_u32()); }

    std::string get_str() {
        Bytes b = get_bytes();
        return std::string(b.begin(), b.end());
    }

    Hash256 get_hash() {
        need(32);
        Hash256 h;
        std::memcpy(h.data(), data_ + pos_, 32);
        pos_ += 32;
        return h;
    }

    bool at_end() const { return pos_ == size_; }
    std::size_t remaining() const { return size_ - pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw std::out_of_range("Reader: truncated input");
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

}  // namespace telechain
