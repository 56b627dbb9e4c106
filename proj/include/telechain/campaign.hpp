#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "telechain/config.hpp"
#include "telechain/crypto.hpp"
#include "telechain/records.hpp"
#include "telechain/scrubbing.hpp"
#include "telechain/templates.hpp"
#include "telechain/txargs.hpp"

namespace telechain {

// One simulated delivery attempt; rows feed replay audits and metrics.
struct TraceRow {
    std::string campaign_id;
    std::string operator_id;
    Hash256 subscriber{};
    std::uint64_t tick = 0;
    bool delivered = false;
};

struct DeliveryReport {
    std::string campaign_id;
    std::string operator_id;
    std::uint64_t attempted = 0;
    std::uint64_t delivered = 0;
    Bytes signature;  // operator signature over (campaign, operator, counts)

    Bytes signed_message() const {
        Writer w;
        w.put_str(campaign_id);
        w.put_str(operator_id);
        w.put_u64(attempted);
        w.put_u64(delivered);
        return w.take();
    }
};

struct CampaignExecution {
    std::vector<TraceRow> trace;
    DeliveryReport report;
    CampaignStatusArgs status_args;
};

// One operator leg of a campaign: template check, delivery-hours window,
// then seeded per-number Bernoulli delivery over the verified valid list.
inline CampaignExecution execute_campaign_leg(
    const NetworkConfig& config, const std::string& operator_id,
    const std::string& campaign_id, const TemplateRecord& tmpl,
    const std::string& message_instance, const std::vector<std::string>& valid_numbers,
    std::uint64_t tick, double delivery_prob, crypto::DetRng& rng,
    const crypto::KeyPair& operator_keys) {
    if (!match_template(tmpl.text, message_instance))
        throw Error(ErrorCode::TemplateMismatch, message_instance);
    if (!config.in_delivery_window(tick))
        throw Error(ErrorCode::OutsideWindow, "tick " + std::to_string(tick));

    CampaignExecution out;
    out.report.campaign_id = campaign_id;
    out.report.operator_id = operator_id;
    for (const auto& number : valid_numbers) {
        bool delivered = rng.unit() < delivery_prob;
        TraceRow row;
        row.campaign_id = campaign_id;
        row.operator_id = operator_id;
        row.subscriber = hash_subscriber(number, config.consortium_key);
        row.tick = tick;
        row.delivered = delivered;
        out.trace.push_back(row);
        ++out.report.attempted;
        if (delivered) ++out.report.delivered;
    }
    out.report.signature =
        crypto::ed25519_sign(operator_keys.seed, out.report.signed_message());
    out.status_args.campaign_id = campaign_id;
    out.status_args.operator_id = operator_id;
    out.status_args.attempted = out.report.attempted;
    out.status_args.delivered = out.report.delivered;
    return out;
}

// Watch-list escalation: action is a non-decreasing step function of the
// complaint count; terminated is terminal.
inline WatchAction watch_action_for(const NetworkConfig& config, std::uint64_t count) {
    if (count >= config.watch_threshold_terminate) return WatchAction::Terminated;
    if (count >= config.watch_threshold_degrade) return WatchAction::Degraded;
    if (count >= config.watch_threshold_throttle) return WatchAction::Throttled;
    return WatchAction::None;
}

// Returns the DegradedService args to emit when this complaint count crosses
// a threshold above the currently recorded action; nullopt otherwise.
inline std::optional<DegradedServiceArgs> update_watchlist(
    const NetworkConfig& config, const Hash256& subscriber, std::uint64_t complaint_count,
    WatchAction current_action) {
    WatchAction next = watch_action_for(config, complaint_count);
    if (static_cast<std::uint8_t>(next) <= static_cast<std::uint8_t>(current_action))
        return std::nullopt;
    DegradedServiceArgs args;
    args.subscriber = subscriber;
    args.action = next;
    args.complaint_count = complaint_count;
    return args;
}

// P2P send-rate detector for unregistered-telemarketer lines: flags any line
// exceeding the daily cap inside one day window.
struct RateViolation {
    std::string line;
    std::uint64_t day = 0;
    std::uint64_t sends = 0;
};

inline std::vector<RateViolation> detect_utm_rate_violations(
    const NetworkConfig& config, const std::vector<std::pair<std::string, std::uint64_t>>& sends) {
    std::map<std::pair<std::string, std::uint64_t>, std::uint64_t> per_day;
    for (const auto& [line, tick] : sends) ++per_day[{line, tick / config.ticks_per_day}];
    std::vector<RateViolation> out;
    for (const auto& [key, count] : per_day)
        if (count > config.utm_daily_cap)
            out.push_back(RateViolation{key.first, key.second, count});
    return out;
}

}  // namespace telechain
