#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "telechain/config.hpp"
#include "telechain/domain.hpp"
#include "telechain/errors.hpp"
#include "telechain/records.hpp"

namespace telechain {

// Scenario files: JSON, schema documented in the README. Everything the run
// needs (nodes, workload, faults, parameters) lives here; same file + same
// seed means a bit-identical run.

struct OperatorSpec {
    std::string id;
    std::string region;  // two-char display prefix, e.g. "VM"
};

enum class FaultKind {
    BypassTokenVerification,  // operator delivers the raw list, skipping the token
    RegulatorDbOutage,
};

struct FaultSpec {
    FaultKind kind = FaultKind::BypassTokenVerification;
    std::string node;  // operator id for bypass faults
    std::uint64_t from_tick = 0;
    std::uint64_t to_tick = 0;  // inclusive

    bool active(std::uint64_t tick) const { return tick >= from_tick && tick <= to_tick; }
};

enum class EventType {
    RegisterTm,
    RegisterPe,
    RegisterHeader,
    DelegateHeader,
    RegisterTemplate,
    UpdatePreference,
    UpdatePreferenceRange,
    RequestConsent,
    GrantConsent,
    RevokeConsent,
    Campaign,
    Complaint,
    P2pBurst,
    MessageVolume,
};

struct WorkloadEvent {
    EventType type = EventType::RegisterTm;
    std::uint64_t tick = 0;

    std::string proposer;  // proposing identity where the event is a tx
    std::string id;        // tm_id / pe_id / campaign_id / complaint_id
    std::string receipt;
    std::string pe_id;
    std::string header;
    std::string tm_id;
    std::string text;      // template text / complaint message / campaign message
    TemplateKind kind = TemplateKind::Promotional;

    std::uint64_t subscriber = 0;  // subscriber index
    std::uint64_t from = 0;        // subscriber range [from, to)
    std::uint64_t to = 0;
    PreferenceMode mode = PreferenceMode::FullyOpen;
    std::vector<std::string> blocked;
    std::string operator_id;

    std::string category;
    std::string template_text;  // campaign / consent template reference
    double delivery_prob = 1.0;

    std::string sender;     // complaint sender / p2p line
    std::uint64_t count = 0;       // p2p messages / message volume
    std::uint64_t complaints = 0;  // p2p complaints to file
};

struct ScenarioConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::uint64_t ticks = 0;
    NetworkConfig network;

    std::vector<OperatorSpec> operators;
    std::string scrubber_id = "scrub-1";
    std::string observer_id = "observer-1";
    std::uint64_t subscribers = 0;

    std::map<std::string, std::string> regulator_receipts;  // tm_id -> receipt
    std::vector<FaultSpec> faults;
    std::optional<std::uint64_t> enforcement_tick;  // before this, no scrubbing
    double complaint_prob = 0.0;  // blocked-category delivery -> complaint

    std::vector<WorkloadEvent> workload;
};

// Deterministic subscriber numbering: index i belongs to operator i % N and
// gets the 10-digit local number 9<op><8-digit index>, so routing works off
// a static prefix table.
inline std::string subscriber_number(std::uint64_t index, std::size_t operator_count) {
    if (operator_count == 0 || operator_count > 10)
        throw Error(ErrorCode::ConfigInvalid, "operator count must be 1..10");
    std::uint64_t op = index % operator_count;
    std::string idx = std::to_string(index);
    if (idx.size() > 8) throw Error(ErrorCode::ConfigInvalid, "subscriber index too large");
    return "9" + std::to_string(op) + std::string(8 - idx.size(), '0') + idx;
}

inline std::string subscriber_prefix(std::size_t operator_index) {
    return "919" + std::to_string(operator_index);
}

namespace scenario_detail {

using nlohmann::json;

inline PreferenceMode mode_from_name(const std::string& s) {
    if (s == "fully_open") return PreferenceMode::FullyOpen;
    if (s == "fully_blocked") return PreferenceMode::FullyBlocked;
    if (s == "partial") return PreferenceMode::Partial;
    throw Error(ErrorCode::ConfigInvalid, "unknown preference mode: " + s);
}

inline TemplateKind template_kind_from_name(const std::string& s) {
    if (s == "promotional") return TemplateKind::Promotional;
    if (s == "transactional") return TemplateKind::Transactional;
    if (s == "consent") return TemplateKind::Consent;
    throw Error(ErrorCode::ConfigInvalid, "unknown template kind: " + s);
}

inline WorkloadEvent parse_event(const json& j) {
    WorkloadEvent e;
    std::string type = j.at("type").get<std::string>();
    e.tick = j.at("tick").get<std::uint64_t>();

    auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
    auto opt_str = [&](const char* key) {
        return j.contains(key) ? j[key].get<std::string>() : std::string{};
    };
    auto u64 = [&](const char* key) { return j.at(key).get<std::uint64_t>(); };

    if (type == "register_tm") {
        e.type = EventType::RegisterTm;
        e.id = str("id");
        e.receipt = str("receipt");
        e.proposer = opt_str("proposer");  // sponsoring member; first operator if empty
    } else if (type == "register_pe") {
        e.type = EventType::RegisterPe;
        e.proposer = str("proposer");
        e.pe_id = str("pe_id");
    } else if (type == "register_header") {
        e.type = EventType::RegisterHeader;
        e.proposer = str("proposer");
        e.pe_id = str("pe_id");
        e.header = str("header");
    } else if (type == "delegate_header") {
        e.type = EventType::DelegateHeader;
        e.proposer = str("proposer");
        e.pe_id = str("pe_id");
        e.header = str("header");
        e.tm_id = str("tm");
    } else if (type == "register_template") {
        e.type = EventType::RegisterTemplate;
        e.proposer = str("proposer");
        e.header = str("header");
        e.text = str("text");
        e.kind = template_kind_from_name(j.value("kind", "promotional"));
    } else if (type == "update_preference") {
        e.type = EventType::UpdatePreference;
        e.subscriber = u64("subscriber");
        e.mode = mode_from_name(str("mode"));
        if (j.contains("blocked")) e.blocked = j["blocked"].get<std::vector<std::string>>();
        e.operator_id = opt_str("operator");
    } else if (type == "update_preference_range") {
        e.type = EventType::UpdatePreferenceRange;
        e.from = u64("from");
        e.to = u64("to");
        e.mode = mode_from_name(str("mode"));
        if (j.contains("blocked")) e.blocked = j["blocked"].get<std::vector<std::string>>();
        e.operator_id = opt_str("operator");
    } else if (type == "request_consent") {
        e.type = EventType::RequestConsent;
        e.proposer = str("proposer");
        e.header = str("header");
        e.subscriber = u64("subscriber");
        e.template_text = str("template_text");
    } else if (type == "grant_consent") {
        e.type = EventType::GrantConsent;
        e.header = str("header");
        e.subscriber = u64("subscriber");
        e.operator_id = opt_str("operator");
    } else if (type == "revoke_consent") {
        e.type = EventType::RevokeConsent;
        e.header = str("header");
        e.subscriber = u64("subscriber");
        e.operator_id = opt_str("operator");
    } else if (type == "campaign") {
        e.type = EventType::Campaign;
        e.id = str("id");
        e.proposer = str("tm");
        e.header = str("header");
        e.template_text = str("template_text");
        e.text = str("message");
        e.category = str("category");
        e.from = u64("from");
        e.to = u64("to");
        e.delivery_prob = j.value("delivery_prob", 1.0);
    } else if (type == "complaint") {
        e.type = EventType::Complaint;
        e.id = str("id");
        e.subscriber = u64("subscriber");
        e.sender = str("sender");
        e.text = str("message");
        // when the message was received; defaults to the filing tick
        e.count = j.value("received_tick", e.tick);
    } else if (type == "p2p_burst") {
        e.type = EventType::P2pBurst;
        e.sender = str("line");
        e.count = u64("count");
        e.complaints = j.value("complaints", std::uint64_t{0});
    } else if (type == "message_volume") {
        e.type = EventType::MessageVolume;
        e.count = u64("count");
    } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown workload event type: " + type);
    }
    return e;
}

inline void parse_network(const json& j, NetworkConfig& net) {
    if (j.contains("lookalike_threshold")) net.lookalike_threshold = j["lookalike_threshold"];
    if (j.contains("otp_ttl_ticks")) net.otp_ttl_ticks = j["otp_ttl_ticks"];
    if (j.contains("consent_overrides_fully_blocked"))
        net.consent_overrides_fully_blocked = j["consent_overrides_fully_blocked"];
    if (j.contains("min_batch_size")) net.min_batch_size = j["min_batch_size"];
    if (j.contains("max_batch_size")) net.max_batch_size = j["max_batch_size"];
    if (j.contains("batch_timeout_ticks")) net.batch_timeout_ticks = j["batch_timeout_ticks"];
    if (j.contains("ticks_per_day")) net.ticks_per_day = j["ticks_per_day"];
    if (j.contains("delivery_window")) {
        net.delivery_window_start = j["delivery_window"].at(0);
        net.delivery_window_end = j["delivery_window"].at(1);
    }
    if (j.contains("utm_daily_cap")) net.utm_daily_cap = j["utm_daily_cap"];
    if (j.contains("watch_thresholds")) {
        net.watch_threshold_throttle = j["watch_thresholds"].at(0);
        net.watch_threshold_degrade = j["watch_thresholds"].at(1);
        net.watch_threshold_terminate = j["watch_thresholds"].at(2);
    }
    if (j.contains("complaint_block_window"))
        net.complaint_block_window = j["complaint_block_window"];
}

}  // namespace scenario_detail

inline ScenarioConfig parse_scenario(const std::string& text) {
    using scenario_detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, e.what());
    }
    try {
        ScenarioConfig sc;
        sc.name = j.value("name", "unnamed");
        sc.seed = j.value("seed", std::uint64_t{0});
        sc.ticks = j.at("ticks").get<std::uint64_t>();
        if (j.contains("config")) scenario_detail::parse_network(j["config"], sc.network);

        for (const auto& op : j.at("operators"))
            sc.operators.push_back(OperatorSpec{op.at("id").get<std::string>(),
                                                op.at("region").get<std::string>()});
        if (sc.operators.empty() || sc.operators.size() > 10)
            throw Error(ErrorCode::ConfigInvalid, "need 1..10 operators");
        sc.scrubber_id = j.value("scrubber", "scrub-1");
        sc.observer_id = j.value("observer", "observer-1");
        sc.subscribers = j.value("subscribers", std::uint64_t{0});

        if (j.contains("regulator"))
            for (const auto& r : j["regulator"])
                sc.regulator_receipts[r.at("tm_id").get<std::string>()] =
                    r.at("receipt").get<std::string>();

        if (j.contains("faults")) {
            for (const auto& f : j["faults"]) {
                FaultSpec spec;
                std::string kind = f.at("kind").get<std::string>();
                if (kind == "bypass_token_verification") {
                    spec.kind = FaultKind::BypassTokenVerification;
                    spec.node = f.at("node").get<std::string>();
                } else if (kind == "regulator_db_outage") {
                    spec.kind = FaultKind::RegulatorDbOutage;
                } else {
                    throw Error(ErrorCode::ConfigInvalid, "unknown fault kind: " + kind);
                }
                spec.from_tick = f.at("from").get<std::uint64_t>();
                spec.to_tick = f.at("to").get<std::uint64_t>();
                sc.faults.push_back(spec);
            }
        }
        if (j.contains("enforcement_tick"))
            sc.enforcement_tick = j["enforcement_tick"].get<std::uint64_t>();
        sc.complaint_prob = j.value("complaint_prob", 0.0);

        if (j.contains("workload"))
            for (const auto& ev : j["workload"])
                sc.workload.push_back(scenario_detail::parse_event(ev));
        std::stable_sort(sc.workload.begin(), sc.workload.end(),
                         [](const WorkloadEvent& a, const WorkloadEvent& b) {
                             return a.tick < b.tick;
                         });

        // routing table from subscriber numbering
        for (std::size_t k = 0; k < sc.operators.size(); ++k)
            sc.network.prefix_operators[subscriber_prefix(k)] = sc.operators[k].id;
        return sc;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, e.what());
    }
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open scenario: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

// Genesis file: one bootstrap identity per line, "id role public_key_hex region".
inline std::string render_genesis(const std::vector<MemberRecord>& members) {
    std::string out;
    for (const auto& m : members) {
        out += m.id;
        out += ' ';
        out += role_name(m.role);
        out += ' ';
        out += to_hex(m.public_key);
        out += ' ';
        out += m.region.empty() ? "-" : m.region;
        out += '\n';
    }
    return out;
}

inline std::vector<MemberRecord> parse_genesis(const std::string& text) {
    std::vector<MemberRecord> members;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id, role, key_hex, region;
        if (!(ls >> id >> role >> key_hex >> region))
            throw Error(ErrorCode::ConfigInvalid, "bad genesis line: " + line);
        MemberRecord m;
        m.id = id;
        m.role = role_from_name(role);
        m.public_key = from_hex(key_hex);
        if (region != "-") m.region = region;
        members.push_back(std::move(m));
    }
    return members;
}

inline std::vector<MemberRecord> load_genesis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open genesis: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_genesis(text);
}

// Regulator fixture: CSV of (tm_id, receipt), header row included.
inline std::string render_regulator_csv(const std::map<std::string, std::string>& receipts) {
    std::string out = "tm_id,receipt\n";
    for (const auto& [tm, receipt] : receipts) out += tm + "," + receipt + "\n";
    return out;
}

inline std::map<std::string, std::string> parse_regulator_csv(const std::string& text) {
    std::map<std::string, std::string> receipts;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::ConfigInvalid, "bad regulator row: " + line);
        receipts[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return receipts;
}

}  // namespace telechain
