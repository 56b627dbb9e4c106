#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "telechain/campaign.hpp"
#include "telechain/config.hpp"
#include "telechain/ledger.hpp"
#include "telechain/records.hpp"
#include "telechain/scrubbing.hpp"
#include "telechain/tx.hpp"

namespace telechain {

// Observer-side complaint replay: reconstruct the world state at each
// candidate campaign's scrub decision height and re-derive whether the
// complainant should have received the message.

// Replays committed blocks (honoring their validity flags) on top of the
// genesis membership, stopping after `up_to_height`.
inline WorldState reconstruct_state(const std::vector<MemberRecord>& genesis_members,
                                    const std::vector<Block>& blocks,
                                    std::uint64_t up_to_height) {
    WorldState state;
    for (const auto& m : genesis_members) state.put(keys::member(m.id), m.encode(), Version{0, 0});
    for (const auto& block : blocks) {
        if (block.height > up_to_height) break;
        for (std::uint32_t i = 0; i < block.tx_list.size(); ++i) {
            if (i < block.validity_flags.size() && !block.validity_flags[i]) continue;
            for (const auto& w : block.tx_list[i].rwset.writes) {
                if (w.is_delete) state.erase(w.key);
                else state.put(w.key, w.value, Version{block.height, i});
            }
        }
        state.set_height(block.height);
    }
    return state;
}

struct AuditResult {
    Verdict verdict = Verdict::Pending;
    std::string matched_campaign;   // campaign the delivery traced to, if any
    std::string culprit_operator;   // operator leg responsible for a violation
    std::string notes;              // e.g. template-match ambiguity
};

namespace audit_detail {

// Block height whose transactions bracket the complaint's received tick;
// candidate campaigns are matched within +/- complaint_block_window of it.
inline std::uint64_t reference_height(const std::vector<Block>& blocks, std::uint64_t tick) {
    for (const auto& b : blocks)
        for (const auto& tx : b.tx_list)
            if (tx.payload.timestamp >= tick) return b.height;
    return blocks.empty() ? 0 : blocks.back().height;
}

struct Candidate {
    CampaignInitArgs init;
    std::uint64_t height = 0;
};

inline std::vector<Candidate> candidate_campaigns(const std::vector<Block>& blocks,
                                                  const std::string& header,
                                                  std::uint64_t ref_height,
                                                  std::uint64_t window) {
    std::vector<Candidate> out;
    std::uint64_t lo = ref_height > window ? ref_height - window : 0;
    std::uint64_t hi = ref_height + window;
    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            const auto& tx = b.tx_list[i];
            if (tx.payload.tx_type != TxType::CampaignInit) continue;
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            auto args = CampaignInitArgs::decode(tx.payload.args);
            if (args.header != header) continue;
            if (b.height < lo || b.height > hi) continue;
            out.push_back(Candidate{std::move(args), b.height});
        }
    }
    return out;
}

}  // namespace audit_detail

// Replays an RTM complaint against the ledger and the delivery trace.
//   compliant  — a candidate campaign's scrub legitimately included the
//                number and the message matches its registered template
//   violation  — a delivery occurred although the subscriber was not
//                deliverable at the scrub's decision height, or no matching
//                scrub exists for the delivery
//   unregistered_sender — UTM complaints take the watch-list path instead
inline AuditResult replay_audit(const NetworkConfig& config,
                                const std::vector<MemberRecord>& genesis_members,
                                const std::vector<Block>& blocks,
                                const std::vector<TraceRow>& trace,
                                const ComplaintRecord& complaint) {
    AuditResult result;
    if (complaint.cls == ComplaintClass::Utm) {
        result.verdict = Verdict::UnregisteredSender;
        return result;
    }

    std::string prefix, header;
    if (!split_display_header(complaint.sender, prefix, header)) header = complaint.sender;

    // header never on chain -> reclassify as UTM
    WorldState tip = reconstruct_state(genesis_members, blocks,
                                       blocks.empty() ? 0 : blocks.back().height);
    if (!tip.get(keys::header(header))) {
        result.verdict = Verdict::UnregisteredSender;
        result.notes = "header not registered";
        return result;
    }

    std::uint64_t ref = audit_detail::reference_height(blocks, complaint.received_tick);
    auto candidates = audit_detail::candidate_campaigns(blocks, header, ref,
                                                        config.complaint_block_window);

    // deliveries made to this subscriber, excluding rows that belong to an
    // on-chain campaign for a different header (irrelevant to this complaint)
    std::map<std::string, std::string> campaign_header;
    for (const auto& b : blocks) {
        for (std::uint32_t i = 0; i < b.tx_list.size(); ++i) {
            if (i < b.validity_flags.size() && !b.validity_flags[i]) continue;
            if (b.tx_list[i].payload.tx_type != TxType::CampaignInit) continue;
            auto args = CampaignInitArgs::decode(b.tx_list[i].payload.args);
            campaign_header[args.campaign_id] = args.header;
        }
    }
    std::vector<const TraceRow*> deliveries;
    for (const auto& row : trace) {
        if (!row.delivered || !(row.subscriber == complaint.subscriber)) continue;
        auto ch = campaign_header.find(row.campaign_id);
        if (ch != campaign_header.end() && ch->second != header) continue;
        deliveries.push_back(&row);
    }

    if (candidates.empty() && deliveries.empty())
        throw Error(ErrorCode::InsufficientEvidence,
                    "no candidate campaigns and no delivery trace");

    for (const auto* row : deliveries) {
        // locate the campaign this delivery belongs to
        const audit_detail::Candidate* cand = nullptr;
        for (const auto& c : candidates)
            if (c.init.campaign_id == row->campaign_id) cand = &c;
        if (!cand) continue;

        auto traw = tip.get(keys::scrub_token(cand->init.token_id));
        if (!traw) {
            result.verdict = Verdict::Violation;
            result.matched_campaign = row->campaign_id;
            result.culprit_operator = row->operator_id;
            result.notes = "delivery without an on-chain scrub";
            return result;
        }
        ScrubTokenRecord token = ScrubTokenRecord::decode(traw->value);

        WorldState at_decision =
            reconstruct_state(genesis_members, blocks, token.decision_height);
        MirrorIndex index = MirrorIndex::rescan(at_decision);
        bool deliverable =
            index.is_deliverable(complaint.subscriber, header, token.category,
                                 config.consent_overrides_fully_blocked);

        // resolve the message against registered templates for this header;
        // on shared literals, prefer the highest literal overlap
        bool message_matches = false;
        std::size_t best_overlap = 0;
        std::size_t matching_templates = 0;
        for (const auto& [key, entry] : tip.entries()) {
            if (key.rfind("tmpl/", 0) != 0) continue;
            TemplateRecord t = TemplateRecord::decode(entry.value);
            if (t.header != header) continue;
            if (match_template(t.text, complaint.message_text)) {
                ++matching_templates;
                std::size_t overlap = literal_overlap(t.text, complaint.message_text);
                if (overlap >= best_overlap) {
                    best_overlap = overlap;
                    message_matches = t.template_id == token.template_id;
                }
            }
        }
        if (matching_templates > 1)
            result.notes = "ambiguous template match; picked highest literal overlap";

        if (!deliverable || !message_matches) {
            result.verdict = Verdict::Violation;
            result.matched_campaign = row->campaign_id;
            result.culprit_operator = row->operator_id;
            if (!deliverable) result.notes = "subscriber not deliverable at decision height";
            return result;
        }
        result.verdict = Verdict::Compliant;
        result.matched_campaign = row->campaign_id;
    }

    if (result.verdict == Verdict::Pending && !deliveries.empty()) {
        // deliveries exist but none map to a candidate campaign
        result.verdict = Verdict::Violation;
        result.culprit_operator = deliveries.front()->operator_id;
        result.matched_campaign = deliveries.front()->campaign_id;
        result.notes = "delivery traced to no candidate campaign";
    } else if (result.verdict == Verdict::Pending) {
        // candidate campaigns exist but nothing was delivered to the
        // complainant: the scrub excluded them, so the system behaved
        result.verdict = Verdict::Compliant;
        result.notes = "no delivery to complainant; scrub excluded the number";
    }
    return result;
}

}  // namespace telechain
