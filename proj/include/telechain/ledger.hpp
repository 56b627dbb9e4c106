#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "telechain/errors.hpp"
#include "telechain/tx.hpp"

namespace telechain {

// Hash-link integrity walk: recompute every block hash and check each
// prev_hash link. Returns the first height where integrity fails, or
// nullopt when the chain is intact.
inline std::optional<std::uint64_t> verify_chain(const std::vector<Block>& blocks) {
    Hash256 expected_prev = zero_hash();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.height != i) return b.height;
        if (!(b.prev_hash == expected_prev)) return b.height;
        if (!(b.compute_hash() == b.block_hash)) return b.height;
        expected_prev = b.block_hash;
    }
    return std::nullopt;
}

// Ledger dump file: magic "TLCH", version 0x01, then a sequence of
// u32-length-prefixed serialized blocks.
inline constexpr char kLedgerMagic[4] = {'T', 'L', 'C', 'H'};
inline constexpr std::uint8_t kLedgerVersion = 0x01;

inline Bytes dump_ledger(const std::vector<Block>& blocks) {
    Writer w;
    w.put_raw(reinterpret_cast<const std::uint8_t*>(kLedgerMagic), 4);
    w.put_u8(kLedgerVersion);
    for (const auto& b : blocks) w.put_bytes(b.serialize());
    return w.take();
}

inline std::vector<Block> load_ledger(const Bytes& data) {
    Reader r(data);
    Bytes magic = r.get_raw(4);
    if (std::string(magic.begin(), magic.end()) != "TLCH")
        throw Error(ErrorCode::BadFormat, "not a ledger dump (bad magic)");
    if (r.get_u8() != kLedgerVersion)
        throw Error(ErrorCode::BadFormat, "unsupported ledger dump version");
    std::vector<Block> blocks;
    while (!r.at_end()) {
        Bytes bb = r.get_bytes();
        Reader br(bb);
        blocks.push_back(Block::deserialize(br));
    }
    return blocks;
}

inline void write_ledger_file(const std::filesystem::path& path,
                              const std::vector<Block>& blocks) {
    // write to a temp file, then rename (atomic replace)
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, path.string());
        Bytes data = dump_ledger(blocks);
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<Block> read_ledger_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_ledger(data);
}

}  // namespace telechain
