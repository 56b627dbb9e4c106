#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "telechain/config.hpp"
#include "telechain/campaign.hpp"
#include "telechain/records.hpp"
#include "telechain/tx.hpp"
#include "telechain/txargs.hpp"

namespace telechain {

// The run's metric series, all recomputable from the ledger dump (plus the
// delivery trace for per-campaign delivery counts).

struct ScrubRateRow {
    std::string campaign_id;
    std::uint64_t submitted = 0;   // original input list size
    std::uint64_t delivered = 0;
    std::optional<double> rate_pct;     // empty when submitted == 0
    std::optional<double> rolling_pct;  // mean of rates so far
};

struct ComplaintsRateRow {
    std::uint64_t window = 0;  // day index
    std::uint64_t rtm_complaints = 0;
    std::uint64_t utm_complaints = 0;
    std::uint64_t messages = 0;
    double rtm_per_million = 0.0;
    double utm_per_million = 0.0;
};

struct PreferenceLatencyRow {
    std::string subscriber_hex;
    std::uint64_t committed_height = 0;
    std::uint64_t first_effective_scrub_height = 0;
    std::uint64_t blocks_latency = 0;
};

struct RegistrationRow {
    std::uint64_t height = 0;
    std::uint64_t telemarketers = 0;
    std::uint64_t principal_entities = 0;
    std::uint64_t headers = 0;
    std::uint64_t templates = 0;
};

struct MetricsReport {
    std::vector<ScrubRateRow> scrub_rates;
    std::vector<ComplaintsRateRow> complaint_rates;
    std::vector<PreferenceLatencyRow> preference_latency;
    std::vector<RegistrationRow> registrations;

    bool operator==(const MetricsReport& other) const;
};

// percentage of phone numbers from the submitted list that received a
// successful message: delivered / submitted * 100
inline std::vector<ScrubRateRow> compute_scrub_success_rate(
    const std::vector<Block>& blocks, const std::vector<TraceRow>& trace) {
    // campaign -> token (for the submitted count) in commit order
    std::vector<std::pair<std::string, std::uint64_t>> campaigns;  // id, submitted
    std::map<std::string, ScrubTokenRecord> tokens;
    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            const auto& tx = b.tx_list[i];
            if (tx.payload.tx_type == TxType::ScrubResult) {
                ScrubTokenRecord t = ScrubTokenRecord::decode(tx.payload.args);
                tokens[to_hex(t.token_id)] = t;
            } else if (tx.payload.tx_type == TxType::CampaignInit) {
                auto args = CampaignInitArgs::decode(tx.payload.args);
                auto it = tokens.find(to_hex(args.token_id));
                campaigns.emplace_back(args.campaign_id,
                                       it == tokens.end() ? 0 : it->second.input_count);
            }
        }
    }

    std::map<std::string, std::uint64_t> delivered;
    for (const auto& row : trace)
        if (row.delivered) ++delivered[row.campaign_id];

    std::vector<ScrubRateRow> out;
    double rate_sum = 0.0;
    std::size_t rated = 0;
    for (const auto& [id, submitted] : campaigns) {
        ScrubRateRow row;
        row.campaign_id = id;
        row.submitted = submitted;
        auto dit = delivered.find(id);
        row.delivered = dit == delivered.end() ? 0 : dit->second;
        if (submitted > 0) {
            row.rate_pct = 100.0 * static_cast<double>(row.delivered) /
                           static_cast<double>(submitted);
            rate_sum += *row.rate_pct;
            ++rated;
            row.rolling_pct = rate_sum / static_cast<double>(rated);
        }
        out.push_back(std::move(row));
    }
    return out;
}

// complaints * 10^6 / messages per day window, split RTM/UTM. Messages are
// the sum of delivered counts from committed CampaignStatus transactions
// plus the explicit p2p volume the harness feeds per window.
inline std::vector<ComplaintsRateRow> compute_complaints_per_million(
    const NetworkConfig& config, const std::vector<Block>& blocks,
    const std::map<std::uint64_t, std::uint64_t>& extra_messages_per_window) {
    std::map<std::uint64_t, ComplaintsRateRow> windows;
    auto window_of = [&](std::uint64_t tick) { return tick / config.ticks_per_day; };

    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            const auto& tx = b.tx_list[i];
            if (tx.payload.tx_type == TxType::ComplaintFiled) {
                auto args = ComplaintFiledArgs::decode(tx.payload.args);
                std::string prefix, header;
                bool rtm = false;
                // mirror the commit-time classification recorded in state:
                // re-derive from the complaint record written by this tx
                for (const auto& w : tx.rwset.writes) {
                    if (w.key.rfind("complaint/", 0) == 0 && !w.is_delete) {
                        rtm = ComplaintRecord::decode(w.value).cls == ComplaintClass::Rtm;
                    }
                }
                (void)prefix; (void)header;
                auto& row = windows[window_of(args.received_tick)];
                if (rtm) ++row.rtm_complaints;
                else ++row.utm_complaints;
            } else if (tx.payload.tx_type == TxType::CampaignStatus) {
                auto args = CampaignStatusArgs::decode(tx.payload.args);
                windows[window_of(tx.payload.timestamp)].messages += args.delivered;
            }
        }
    }
    for (const auto& [w, msgs] : extra_messages_per_window) windows[w].messages += msgs;

    std::vector<ComplaintsRateRow> out;
    for (auto& [w, row] : windows) {
        row.window = w;
        if (row.messages == 0) {
            if (row.rtm_complaints + row.utm_complaints > 0)
                throw Error(ErrorCode::DivisionWindowEmpty,
                            "window " + std::to_string(w) + " has complaints but no messages");
            continue;
        }
        row.rtm_per_million =
            static_cast<double>(row.rtm_complaints) * 1e6 / static_cast<double>(row.messages);
        row.utm_per_million =
            static_cast<double>(row.utm_complaints) * 1e6 / static_cast<double>(row.messages);
        out.push_back(row);
    }
    return out;
}

// How quickly committed preferences bite: for every preference write, the
// first scrub whose decision height saw it.
inline std::vector<PreferenceLatencyRow> compute_preference_latency(
    const std::vector<Block>& blocks) {
    std::map<std::string, std::uint64_t> committed_at;  // pref key -> height
    std::vector<PreferenceLatencyRow> out;
    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            const auto& tx = b.tx_list[i];
            if (tx.payload.tx_type == TxType::UpdatePreference) {
                auto args = UpdatePreferenceArgs::decode(tx.payload.args);
                committed_at.emplace(to_hex(args.subscriber), b.height);
            } else if (tx.payload.tx_type == TxType::ScrubResult) {
                ScrubTokenRecord t = ScrubTokenRecord::decode(tx.payload.args);
                for (auto it = committed_at.begin(); it != committed_at.end();) {
                    if (t.decision_height >= it->second) {
                        PreferenceLatencyRow row;
                        row.subscriber_hex = it->first;
                        row.committed_height = it->second;
                        row.first_effective_scrub_height = t.decision_height;
                        row.blocks_latency = t.decision_height - it->second;
                        out.push_back(std::move(row));
                        it = committed_at.erase(it);
                    } else {
                        ++it;
                    }
                }
            }
        }
    }
    return out;
}

inline std::vector<RegistrationRow> compute_registrations(const std::vector<Block>& blocks) {
    std::vector<RegistrationRow> out;
    RegistrationRow acc;
    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            switch (b.tx_list[i].payload.tx_type) {
                case TxType::RegisterTelemarketer: ++acc.telemarketers; break;
                case TxType::RegisterPrincipalEntity: ++acc.principal_entities; break;
                case TxType::RegisterHeader: ++acc.headers; break;
                case TxType::RegisterTemplate:
                case TxType::RegisterConsentTemplate: ++acc.templates; break;
                default: break;
            }
        }
        acc.height = b.height;
        out.push_back(acc);
    }
    return out;
}

// ---- CSV emission / loading -------------------------------------------

namespace csv_detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, path.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace csv_detail

// One CSV per metric, stable column order, atomic overwrite on rerun.
inline void emit_reports(const MetricsReport& report, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    using csv_detail::fmt;

    std::string s = "campaign_id,submitted,delivered,success_rate_pct,rolling_rate_pct\n";
    for (const auto& r : report.scrub_rates) {
        s += r.campaign_id + "," + std::to_string(r.submitted) + "," +
             std::to_string(r.delivered) + "," +
             (r.rate_pct ? fmt(*r.rate_pct) : "") + "," +
             (r.rolling_pct ? fmt(*r.rolling_pct) : "") + "\n";
    }
    csv_detail::write_atomic(out_dir / "scrub_success_rate.csv", s);

    s = "window,rtm_complaints,utm_complaints,messages,rtm_per_million,utm_per_million\n";
    for (const auto& r : report.complaint_rates) {
        s += std::to_string(r.window) + "," + std::to_string(r.rtm_complaints) + "," +
             std::to_string(r.utm_complaints) + "," + std::to_string(r.messages) + "," +
             fmt(r.rtm_per_million) + "," + fmt(r.utm_per_million) + "\n";
    }
    csv_detail::write_atomic(out_dir / "complaints_per_million.csv", s);

    s = "subscriber,committed_height,first_effective_scrub_height,blocks_latency\n";
    for (const auto& r : report.preference_latency) {
        s += r.subscriber_hex + "," + std::to_string(r.committed_height) + "," +
             std::to_string(r.first_effective_scrub_height) + "," +
             std::to_string(r.blocks_latency) + "\n";
    }
    csv_detail::write_atomic(out_dir / "preference_latency.csv", s);

    s = "height,telemarketers,principal_entities,headers,templates\n";
    for (const auto& r : report.registrations) {
        s += std::to_string(r.height) + "," + std::to_string(r.telemarketers) + "," +
             std::to_string(r.principal_entities) + "," + std::to_string(r.headers) + "," +
             std::to_string(r.templates) + "\n";
    }
    csv_detail::write_atomic(out_dir / "registrations.csv", s);
}

inline MetricsReport load_reports(const std::filesystem::path& out_dir) {
    MetricsReport report;
    auto rows = csv_detail::read_rows(out_dir / "scrub_success_rate.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        ScrubRateRow r;
        r.campaign_id = f[0];
        r.submitted = std::stoull(f[1]);
        r.delivered = std::stoull(f[2]);
        if (f.size() > 3 && !f[3].empty()) r.rate_pct = std::stod(f[3]);
        if (f.size() > 4 && !f[4].empty()) r.rolling_pct = std::stod(f[4]);
        report.scrub_rates.push_back(std::move(r));
    }
    rows = csv_detail::read_rows(out_dir / "complaints_per_million.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        ComplaintsRateRow r;
        r.window = std::stoull(f[0]);
        r.rtm_complaints = std::stoull(f[1]);
        r.utm_complaints = std::stoull(f[2]);
        r.messages = std::stoull(f[3]);
        r.rtm_per_million = std::stod(f[4]);
        r.utm_per_million = std::stod(f[5]);
        report.complaint_rates.push_back(r);
    }
    rows = csv_detail::read_rows(out_dir / "preference_latency.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        PreferenceLatencyRow r;
        r.subscriber_hex = f[0];
        r.committed_height = std::stoull(f[1]);
        r.first_effective_scrub_height = std::stoull(f[2]);
        r.blocks_latency = std::stoull(f[3]);
        report.preference_latency.push_back(std::move(r));
    }
    rows = csv_detail::read_rows(out_dir / "registrations.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        RegistrationRow r;
        r.height = std::stoull(f[0]);
        r.telemarketers = std::stoull(f[1]);
        r.principal_entities = std::stoull(f[2]);
        r.headers = std::stoull(f[3]);
        r.templates = std::stoull(f[4]);
        report.registrations.push_back(r);
    }
    return report;
}

inline bool MetricsReport::operator==(const MetricsReport& other) const {
    auto close = [](std::optional<double> a, std::optional<double> b) {
        if (a.has_value() != b.has_value()) return false;
        if (!a) return true;
        return std::abs(*a - *b) < 1e-6;
    };
    if (scrub_rates.size() != other.scrub_rates.size() ||
        complaint_rates.size() != other.complaint_rates.size() ||
        preference_latency.size() != other.preference_latency.size() ||
        registrations.size() != other.registrations.size())
        return false;
    for (std::size_t i = 0; i < scrub_rates.size(); ++i) {
        const auto& a = scrub_rates[i];
        const auto& b = other.scrub_rates[i];
        if (a.campaign_id != b.campaign_id || a.submitted != b.submitted ||
            a.delivered != b.delivered || !close(a.rate_pct, b.rate_pct) ||
            !close(a.rolling_pct, b.rolling_pct))
            return false;
    }
    for (std::size_t i = 0; i < complaint_rates.size(); ++i) {
        const auto& a = complaint_rates[i];
        const auto& b = other.complaint_rates[i];
        if (a.window != b.window || a.rtm_complaints != b.rtm_complaints ||
            a.utm_complaints != b.utm_complaints || a.messages != b.messages ||
            !close(a.rtm_per_million, b.rtm_per_million) ||
            !close(a.utm_per_million, b.utm_per_million))
            return false;
    }
    for (std::size_t i = 0; i < preference_latency.size(); ++i) {
        const auto& a = preference_latency[i];
        const auto& b = other.preference_latency[i];
        if (a.subscriber_hex != b.subscriber_hex || a.committed_height != b.committed_height ||
            a.first_effective_scrub_height != b.first_effective_scrub_height ||
            a.blocks_latency != b.blocks_latency)
            return false;
    }
    for (std::size_t i = 0; i < registrations.size(); ++i) {
        const auto& a = registrations[i];
        const auto& b = other.registrations[i];
        if (a.height != b.height || a.telemarketers != b.telemarketers ||
            a.principal_entities != b.principal_entities || a.headers != b.headers ||
            a.templates != b.templates)
            return false;
    }
    return true;
}

// Delivery trace log: CSV (campaign_id, operator, hashed subscriber, tick,
// delivered flag) — the audit and metrics input.
inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<TraceRow>& trace) {
    std::string s = "campaign_id,operator,subscriber,tick,delivered\n";
    for (const auto& r : trace) {
        s += r.campaign_id + "," + r.operator_id + "," + to_hex(r.subscriber) + "," +
             std::to_string(r.tick) + "," + (r.delivered ? "1" : "0") + "\n";
    }
    csv_detail::write_atomic(path, s);
}

inline std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
    std::vector<TraceRow> trace;
    auto rows = csv_detail::read_rows(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        TraceRow r;
        r.campaign_id = f[0];
        r.operator_id = f[1];
        r.subscriber = hash_from_hex(f[2]);
        r.tick = std::stoull(f[3]);
        r.delivered = f[4] == "1";
        trace.push_back(std::move(r));
    }
    return trace;
}

}  // namespace telechain
