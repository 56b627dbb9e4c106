#pragma once

#include <map>
#include <optional>
#include <string>

#include "telechain/bytes.hpp"
#include "telechain/crypto.hpp"
#include "telechain/tx.hpp"

namespace telechain {

// Versioned key-value world state. Keys are namespaced strings
// ("member/...", "hdr/...", "pref/...", ...); values are canonical record
// bytes. std::map keeps entries key-ordered so the state digest is
// insertion-order independent.
class WorldState {
public:
    struct Entry {
        Bytes value;
        Version version;
    };

    std::optional<Entry> get(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& key) const { return entries_.count(key) > 0; }

    void put(const std::string& key, Bytes value, Version version) {
        entries_[key] = Entry{std::move(value), version};
    }

    void erase(const std::string& key) { entries_.erase(key); }

    std::uint64_t height() const { return height_; }
    void set_height(std::uint64_t h) { height_ = h; }

    const std::map<std::string, Entry>& entries() const { return entries_; }

    // Digest over entries sorted by key; equal states yield equal digests on
    // every node regardless of how the state was built.
    Hash256 state_hash() const {
        Writer w;
        w.put_u64(static_cast<std::uint64_t>(entries_.size()));
        for (const auto& [key, entry] : entries_) {
            w.put_str(key);
            w.put_bytes(entry.value);
            w.put_u64(entry.version.height);
            w.put_u32(entry.version.tx_index);
        }
        return crypto::sha256(w.bytes());
    }

private:
    std::map<std::string, Entry> entries_;
    std::uint64_t height_ = 0;
};

// Read-tracking view used during endorsement: records the version (or
// absence) of every key the validator touches and buffers its writes, so
// simulated execution has no side effects on committed state.
class StateView {
public:
    explicit StateView(const WorldState& state) : state_(state) {}

    std::optional<Bytes> get(const std::string& key) {
        // read-your-writes inside a single validator
        for (auto it = writes_.rbegin(); it != writes_.rend(); ++it) {
            if (it->key == key) {
                if (it->is_delete) return std::nullopt;
                return it->value;
            }
        }
        record_read(key);
        auto entry = state_.get(key);
        if (!entry) return std::nullopt;
        return entry->value;
    }

    void put(const std::string& key, Bytes value) {
        upsert_write(WriteEntry{key, false, std::move(value)});
    }

    void del(const std::string& key) {
        upsert_write(WriteEntry{key, true, {}});
    }

    ReadWriteSet take_rwset() {
        ReadWriteSet s;
        s.reads = std::move(reads_);
        s.writes = std::move(writes_);
        return s;
    }

    const WorldState& state() const { return state_; }

private:
    void record_read(const std::string& key) {
        for (const auto& r : reads_)
            if (r.key == key) return;  // keys within reads are unique
        auto entry = state_.get(key);
        ReadEntry e;
        e.key = key;
        if (entry) {
            e.exists = true;
            e.version = entry->version;
        }
        reads_.push_back(std::move(e));
    }

    void upsert_write(WriteEntry entry) {
        for (auto& w : writes_) {
            if (w.key == entry.key) {
                w = std::move(entry);  // keys within writes are unique
                return;
            }
        }
        writes_.push_back(std::move(entry));
    }

    const WorldState& state_;
    std::vector<ReadEntry> reads_;
    std::vector<WriteEntry> writes_;
};

}  // namespace telechain
