#pragma once

#include <map>
#include <string>

#include "telechain/bytes.hpp"
#include "telechain/errors.hpp"

namespace telechain {

// Network-wide parameters shared by every node. The harness fills this from
// the scenario file; tests use the defaults.
struct NetworkConfig {
    // registries
    std::size_t lookalike_threshold = 2;  // STABAN/SBIBAN collides at 2
    std::uint64_t otp_ttl_ticks = 600;
    bool consent_overrides_fully_blocked = false;

    // scrubbing
    std::size_t min_batch_size = 100;  // probing mitigation
    Bytes consortium_key = {'t', 'e', 'l', 'e', 'c', 'h', 'a', 'i', 'n', '-', 'k', 'e', 'y'};
    // number prefix -> operator id, for numbers with no preference record
    std::map<std::string, std::string> prefix_operators;

    // ordering
    std::size_t max_batch_size = 100;
    std::uint64_t batch_timeout_ticks = 1;

    // campaign / complaints
    std::uint64_t ticks_per_day = 24;
    std::uint64_t delivery_window_start = 9;   // inclusive, tick-of-day
    std::uint64_t delivery_window_end = 21;    // exclusive
    std::uint64_t utm_daily_cap = 200;
    std::uint64_t watch_threshold_throttle = 10;
    std::uint64_t watch_threshold_degrade = 25;
    std::uint64_t watch_threshold_terminate = 50;
    std::uint64_t complaint_block_window = 2;  // candidate campaigns within +/- blocks

    bool in_delivery_window(std::uint64_t tick) const {
        std::uint64_t tod = tick % ticks_per_day;
        return tod >= delivery_window_start && tod < delivery_window_end;
    }

    std::string operator_for_number(const std::string& normalized) const {
        // longest-prefix match over the static table
        for (std::size_t len = normalized.size(); len > 0; --len) {
            auto it = prefix_operators.find(normalized.substr(0, len));
            if (it != prefix_operators.end()) return it->second;
        }
        return {};
    }
};

// The regulator's read-only registration database: (tm_id, payment receipt)
// pairs, plus a scripted outage flag for fault scenarios.
struct RegulatorDb {
    std::map<std::string, std::string> receipts;  // tm_id -> receipt
    bool outage = false;

    bool verify(const std::string& tm_id, const std::string& receipt) const;
};

inline bool RegulatorDb::verify(const std::string& tm_id, const std::string& receipt) const {
    if (outage) throw Error(ErrorCode::RegulatorDbUnavailable);
    auto it = receipts.find(tm_id);
    return it != receipts.end() && it->second == receipt;
}

}  // namespace telechain
