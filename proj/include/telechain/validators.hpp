#pragma once

#include <optional>
#include <string>

#include "telechain/config.hpp"
#include "telechain/crypto.hpp"
#include "telechain/domain.hpp"
#include "telechain/header_rules.hpp"
#include "telechain/records.hpp"
#include "telechain/templates.hpp"
#include "telechain/tx.hpp"
#include "telechain/txargs.hpp"
#include "telechain/worldstate.hpp"

namespace telechain {

// Deterministic transaction validators — the simulated-execution half of
// endorsement. Each validator reads committed state through a StateView
// (recording versions) and buffers writes; a business-rule failure throws
// ValidatorRejected and the endorsement is withheld. Running the same
// payload at the same world state yields a byte-identical read-write set.

struct ValidatorContext {
    const NetworkConfig& config;
    const RegulatorDb& regulator;
};

namespace validator_detail {

inline MemberRecord require_member(StateView& view, const std::string& id) {
    auto raw = view.get(keys::member(id));
    if (!raw) throw ValidatorRejected(ErrorCode::UnknownIdentity, id);
    MemberRecord m = MemberRecord::decode(*raw);
    if (m.tombstoned) throw ValidatorRejected(ErrorCode::UnknownIdentity, id + " (revoked)");
    return m;
}

inline void require_role(const MemberRecord& m, std::initializer_list<Role> allowed) {
    for (Role r : allowed)
        if (m.role == r) return;
    throw ValidatorRejected(ErrorCode::RoleNotPermitted,
                            m.id + " has role " + role_name(m.role));
}

inline void validate_register_telemarketer(const ValidatorContext& ctx, StateView& view,
                                           const TransactionPayload& payload) {
    auto args = RegisterTelemarketerArgs::decode(payload.args);
    if (view.get(keys::member(args.tm_id)))
        throw ValidatorRejected(ErrorCode::DuplicateIdentity, args.tm_id);
    if (!crypto::ed25519_verify(args.public_key, args.public_key, args.self_signature))
        throw ValidatorRejected(ErrorCode::VerificationFailed, "bad self-signature");
    bool receipt_ok;
    try {
        receipt_ok = ctx.regulator.verify(args.tm_id, args.payment_receipt);
    } catch (const Error&) {
        throw ValidatorRejected(ErrorCode::RegulatorDbUnavailable, args.tm_id);
    }
    if (!receipt_ok)
        throw ValidatorRejected(ErrorCode::VerificationFailed,
                                "regulator record mismatch for " + args.tm_id);
    MemberRecord m;
    m.id = args.tm_id;
    m.role = Role::Telemarketer;
    m.public_key = args.public_key;
    m.enc_public_key = args.enc_public_key;
    m.admitted_at = view.state().height() + 1;
    view.put(keys::member(args.tm_id), m.encode());
}

inline void validate_register_pe(const ValidatorContext&, StateView& view,
                                 const TransactionPayload& payload) {
    auto args = RegisterPrincipalEntityArgs::decode(payload.args);
    if (view.get(keys::principal_entity(args.pe_id)))
        throw ValidatorRejected(ErrorCode::DuplicateIdentity, args.pe_id);
    PrincipalEntityRecord p;
    p.id = args.pe_id;
    p.documents_ref = args.documents_ref;
    p.registered_at = view.state().height() + 1;
    view.put(keys::principal_entity(args.pe_id), p.encode());
}

inline void validate_register_header(const ValidatorContext& ctx, StateView& view,
                                     const TransactionPayload& payload) {
    auto args = RegisterHeaderArgs::decode(payload.args);
    if (!valid_header_format(args.header))
        throw ValidatorRejected(ErrorCode::BadFormat, args.header);
    if (!view.get(keys::principal_entity(args.pe_id)))
        throw ValidatorRejected(ErrorCode::UnknownPrincipalEntity, args.pe_id);

    HeaderIndex index;
    if (auto raw = view.get(keys::header_index())) index = HeaderIndex::decode(*raw);
    for (const auto& existing : index.headers) {
        if (existing == args.header)
            throw ValidatorRejected(ErrorCode::DuplicateHeader, args.header);
        if (is_lookalike(existing, args.header, ctx.config.lookalike_threshold))
            throw ValidatorRejected(ErrorCode::LookalikeHeader,
                                    args.header + " collides with " + existing);
    }
    index.headers.push_back(args.header);
    std::sort(index.headers.begin(), index.headers.end());

    HeaderRecord rec;
    rec.header = args.header;
    rec.owner_pe = args.pe_id;
    rec.registered_at = view.state().height() + 1;
    view.put(keys::header(args.header), rec.encode());
    view.put(keys::header_index(), index.encode());
}

inline void validate_delegate_header(const ValidatorContext&, StateView& view,
                                     const TransactionPayload& payload) {
    auto args = DelegateHeaderArgs::decode(payload.args);
    auto raw = view.get(keys::header(args.header));
    if (!raw) throw ValidatorRejected(ErrorCode::UnknownHeader, args.header);
    HeaderRecord rec = HeaderRecord::decode(*raw);
    if (rec.owner_pe != args.pe_id)
        throw ValidatorRejected(ErrorCode::NotOwner,
                                args.pe_id + " does not own " + args.header);
    auto tm_raw = view.get(keys::member(args.tm_id));
    if (!tm_raw || MemberRecord::decode(*tm_raw).role != Role::Telemarketer)
        throw ValidatorRejected(ErrorCode::UnknownTelemarketer, args.tm_id);
    if (!rec.delegated_to(args.tm_id)) {
        rec.delegated_tms.push_back(args.tm_id);
        std::sort(rec.delegated_tms.begin(), rec.delegated_tms.end());
    }
    view.put(keys::header(args.header), rec.encode());
}

inline void validate_register_template(const ValidatorContext&, StateView& view,
                                       const TransactionPayload& payload, bool force_consent) {
    auto args = RegisterTemplateArgs::decode(payload.args);
    if (force_consent) args.kind = TemplateKind::Consent;
    auto raw = view.get(keys::header(args.header));
    if (!raw) throw ValidatorRejected(ErrorCode::UnknownHeader, args.header);
    HeaderRecord rec = HeaderRecord::decode(*raw);
    if (!rec.delegated_to(payload.proposer) && rec.owner_pe != payload.proposer)
        throw ValidatorRejected(ErrorCode::NotDelegated,
                                payload.proposer + " for " + args.header);
    if (!well_formed_template(args.text))
        throw ValidatorRejected(ErrorCode::MalformedPlaceholders, args.text);
    if (args.kind == TemplateKind::Consent && !valid_consent_template(args.text))
        throw ValidatorRejected(ErrorCode::MissingConsentClause, args.text);

    TemplateRecord t;
    t.template_id = TemplateRecord::compute_id(args.header, args.text);
    t.header = args.header;
    t.text = args.text;
    t.kind = args.kind;
    t.registered_at = view.state().height() + 1;
    // Idempotent on (header, text): re-registration rewrites the same record.
    view.put(keys::content_template(t.template_id), t.encode());
}

inline void validate_update_preference(const ValidatorContext&, StateView& view,
                                       const TransactionPayload& payload,
                                       const MemberRecord& proposer) {
    auto args = UpdatePreferenceArgs::decode(payload.args);
    if (proposer.role == Role::Operator && proposer.id != args.operator_id)
        throw ValidatorRejected(ErrorCode::WrongOperator,
                                proposer.id + " vs " + args.operator_id);
    for (const auto& c : args.blocked_categories)
        if (!valid_category_path(c))
            throw ValidatorRejected(ErrorCode::UnknownCategory, c);

    PreferenceRecord rec;
    rec.subscriber = args.subscriber;
    rec.operator_id = args.operator_id;
    rec.mode = args.mode;
    rec.blocked_categories = args.blocked_categories;
    std::sort(rec.blocked_categories.begin(), rec.blocked_categories.end());
    rec.updated_at = view.state().height() + 1;
    view.put(keys::preference(args.subscriber), rec.encode());
}

inline void validate_request_consent(const ValidatorContext&, StateView& view,
                                     const TransactionPayload& payload) {
    auto args = RequestConsentArgs::decode(payload.args);
    auto traw = view.get(keys::content_template(args.consent_template_id));
    if (!traw) throw ValidatorRejected(ErrorCode::UnregisteredTemplate);
    TemplateRecord t = TemplateRecord::decode(*traw);
    if (t.kind != TemplateKind::Consent)
        throw ValidatorRejected(ErrorCode::UnregisteredTemplate, "template is not consent-kind");
    if (t.header != args.header)
        throw ValidatorRejected(ErrorCode::UnknownHeader,
                                "consent template belongs to " + t.header);

    ConsentRecord rec;
    if (auto raw = view.get(keys::consent(args.subscriber, args.header)))
        rec = ConsentRecord::decode(*raw);
    rec.subscriber = args.subscriber;
    rec.header = args.header;
    rec.status = ConsentStatus::Requested;
    rec.consent_template_id = args.consent_template_id;
    rec.otp_hash = args.otp_hash;
    rec.otp_expiry = args.otp_expiry;
    rec.channel = args.channel;
    rec.history.emplace_back(ConsentStatus::Requested, view.state().height() + 1);
    view.put(keys::consent(args.subscriber, args.header), rec.encode());
}

inline void validate_grant_consent(const ValidatorContext&, StateView& view,
                                   const TransactionPayload& payload) {
    auto args = GrantConsentArgs::decode(payload.args);
    auto raw = view.get(keys::consent(args.subscriber, args.header));
    if (!raw) throw ValidatorRejected(ErrorCode::NoPendingRequest);
    ConsentRecord rec = ConsentRecord::decode(*raw);
    if (rec.status != ConsentStatus::Requested)
        throw ValidatorRejected(ErrorCode::NoPendingRequest,
                                "consent status is not requested");
    if (payload.timestamp > rec.otp_expiry)
        throw ValidatorRejected(ErrorCode::OtpExpired);
    if (!(args.token_hash == rec.otp_hash))
        throw ValidatorRejected(ErrorCode::OtpMismatch);
    rec.status = ConsentStatus::Granted;
    rec.history.emplace_back(ConsentStatus::Granted, view.state().height() + 1);
    view.put(keys::consent(args.subscriber, args.header), rec.encode());
}

inline void validate_revoke_consent(const ValidatorContext&, StateView& view,
                                    const TransactionPayload& payload) {
    auto args = RevokeConsentArgs::decode(payload.args);
    auto raw = view.get(keys::consent(args.subscriber, args.header));
    if (!raw) throw ValidatorRejected(ErrorCode::NoPendingRequest);
    ConsentRecord rec = ConsentRecord::decode(*raw);
    rec.status = ConsentStatus::Revoked;
    rec.history.emplace_back(ConsentStatus::Revoked, view.state().height() + 1);
    view.put(keys::consent(args.subscriber, args.header), rec.encode());
}

inline void validate_scrub_result(const ValidatorContext&, StateView& view,
                                  const TransactionPayload& payload) {
    ScrubTokenRecord token = ScrubTokenRecord::decode(payload.args);
    if (view.get(keys::scrub_token(token.token_id)))
        throw ValidatorRejected(ErrorCode::DuplicateIdentity, "token id reused");
    auto hraw = view.get(keys::header(token.header));
    if (!hraw) throw ValidatorRejected(ErrorCode::UnknownHeader, token.header);
    HeaderRecord hdr = HeaderRecord::decode(*hraw);
    if (!hdr.delegated_to(token.tm_id))
        throw ValidatorRejected(ErrorCode::NotDelegated, token.tm_id);
    auto traw = view.get(keys::content_template(token.template_id));
    if (!traw) throw ValidatorRejected(ErrorCode::UnregisteredTemplate);
    TemplateRecord tmpl = TemplateRecord::decode(*traw);
    if (tmpl.header != token.header)
        throw ValidatorRejected(ErrorCode::TokenHeaderMismatch, "template/header mismatch");
    token.consumed = false;
    view.put(keys::scrub_token(token.token_id), token.encode());
}

inline void validate_campaign_init(const ValidatorContext&, StateView& view,
                                   const TransactionPayload& payload) {
    auto args = CampaignInitArgs::decode(payload.args);
    auto raw = view.get(keys::scrub_token(args.token_id));
    if (!raw) throw ValidatorRejected(ErrorCode::TokenNotOnChain);
    ScrubTokenRecord token = ScrubTokenRecord::decode(*raw);
    if (token.consumed) throw ValidatorRejected(ErrorCode::TokenAlreadyConsumed);
    if (token.header != args.header || !(token.template_id == args.template_id))
        throw ValidatorRejected(ErrorCode::TokenHeaderMismatch);
    if (view.get(keys::campaign(args.campaign_id)))
        throw ValidatorRejected(ErrorCode::DuplicateIdentity, args.campaign_id);

    token.consumed = true;
    view.put(keys::scrub_token(token.token_id), token.encode());

    CampaignRecord c;
    c.campaign_id = args.campaign_id;
    c.tm_id = payload.proposer;
    c.header = args.header;
    c.template_id = args.template_id;
    c.token_id = args.token_id;
    c.status = CampaignStatusCode::Queued;
    for (const auto& po : token.per_operator)
        c.legs.push_back(CampaignLeg{po.operator_id, 0, 0, false});
    view.put(keys::campaign(args.campaign_id), c.encode());
}

inline void validate_campaign_status(const ValidatorContext&, StateView& view,
                                     const TransactionPayload& payload,
                                     const MemberRecord& proposer) {
    auto args = CampaignStatusArgs::decode(payload.args);
    if (proposer.id != args.operator_id)
        throw ValidatorRejected(ErrorCode::WrongOperator, proposer.id);
    auto raw = view.get(keys::campaign(args.campaign_id));
    if (!raw) throw ValidatorRejected(ErrorCode::UnknownIdentity, args.campaign_id);
    CampaignRecord c = CampaignRecord::decode(*raw);
    bool found = false;
    bool all_reported = true;
    for (auto& leg : c.legs) {
        if (leg.operator_id == args.operator_id) {
            if (args.delivered > args.attempted)
                throw ValidatorRejected(ErrorCode::BadFormat, "delivered > attempted");
            leg.attempted = args.attempted;
            leg.delivered = args.delivered;
            leg.reported = true;
            found = true;
        }
        all_reported = all_reported && leg.reported;
    }
    if (!found)
        throw ValidatorRejected(ErrorCode::WrongOperator,
                                args.operator_id + " not a leg of " + args.campaign_id);
    c.status = all_reported ? CampaignStatusCode::Completed : CampaignStatusCode::InDelivery;
    view.put(keys::campaign(args.campaign_id), c.encode());
}

inline void validate_complaint_filed(const ValidatorContext&, StateView& view,
                                     const TransactionPayload& payload) {
    auto args = ComplaintFiledArgs::decode(payload.args);
    if (view.get(keys::complaint(args.complaint_id)))
        throw ValidatorRejected(ErrorCode::DuplicateIdentity, args.complaint_id);

    ComplaintRecord rec;
    rec.complaint_id = args.complaint_id;
    rec.subscriber = args.subscriber;
    rec.sender = args.sender;
    rec.message_text = args.message_text;
    rec.received_tick = args.received_tick;
    rec.verdict = Verdict::Pending;

    std::string prefix, header;
    if (split_display_header(args.sender, prefix, header) ||
        valid_header_format(args.sender)) {
        std::string bare = valid_header_format(args.sender) ? args.sender : header;
        // RTM iff the sender matches a committed header
        rec.cls = view.get(keys::header(bare)) ? ComplaintClass::Rtm : ComplaintClass::Utm;
    } else if (is_p2p_number(args.sender)) {
        rec.cls = ComplaintClass::Utm;
    } else {
        throw ValidatorRejected(ErrorCode::MalformedSender, args.sender);
    }
    view.put(keys::complaint(args.complaint_id), rec.encode());
}

inline void validate_degraded_service(const ValidatorContext&, StateView& view,
                                      const TransactionPayload& payload) {
    auto args = DegradedServiceArgs::decode(payload.args);
    WatchListEntry entry;
    if (auto raw = view.get(keys::watch(args.subscriber)))
        entry = WatchListEntry::decode(*raw);
    entry.subscriber = args.subscriber;
    entry.complaint_count = std::max(entry.complaint_count, args.complaint_count);
    entry.last_height = view.state().height() + 1;
    // actions escalate monotonically; terminated is terminal
    if (static_cast<std::uint8_t>(args.action) > static_cast<std::uint8_t>(entry.action))
        entry.action = args.action;
    view.put(keys::watch(args.subscriber), entry.encode());
}

// Observer identities hold audit privileges only.
inline void check_role_gate(TxType type, const MemberRecord& proposer) {
    using validator_detail::require_role;
    switch (type) {
        case TxType::RegisterTelemarketer:
            require_role(proposer, {Role::Operator, Role::Telemarketer, Role::ThirdParty});
            break;
        case TxType::RegisterPrincipalEntity:
        case TxType::RegisterHeader:
        case TxType::DelegateHeader:
        case TxType::RegisterTemplate:
        case TxType::RegisterConsentTemplate:
        case TxType::CampaignInit:
            require_role(proposer, {Role::Telemarketer, Role::ThirdParty});
            break;
        case TxType::UpdatePreference:
            require_role(proposer, {Role::Operator, Role::ThirdParty});
            break;
        case TxType::RequestConsent:
        case TxType::GrantConsent:
        case TxType::RevokeConsent:
            require_role(proposer, {Role::Operator, Role::Telemarketer, Role::ThirdParty});
            break;
        case TxType::ScrubResult:
            require_role(proposer, {Role::Scrubber, Role::Telemarketer});
            break;
        case TxType::CampaignStatus:
            require_role(proposer, {Role::Operator});
            break;
        case TxType::ComplaintFiled:
            require_role(proposer, {Role::Operator, Role::Observer, Role::ThirdParty});
            break;
        case TxType::DegradedService:
            require_role(proposer, {Role::Observer});
            break;
    }
}

}  // namespace validator_detail

// Simulated execution of a payload against `state`; returns the read-write
// set or throws ValidatorRejected. Never mutates `state`.
inline ReadWriteSet execute_validator(const ValidatorContext& ctx, const WorldState& state,
                                      const TransactionPayload& payload) {
    using namespace validator_detail;
    StateView view(state);
    MemberRecord proposer = require_member(view, payload.proposer);
    check_role_gate(payload.tx_type, proposer);
    switch (payload.tx_type) {
        case TxType::RegisterTelemarketer: validate_register_telemarketer(ctx, view, payload); break;
        case TxType::RegisterPrincipalEntity: validate_register_pe(ctx, view, payload); break;
        case TxType::RegisterHeader: validate_register_header(ctx, view, payload); break;
        case TxType::DelegateHeader: validate_delegate_header(ctx, view, payload); break;
        case TxType::RegisterTemplate: validate_register_template(ctx, view, payload, false); break;
        case TxType::RegisterConsentTemplate: validate_register_template(ctx, view, payload, true); break;
        case TxType::UpdatePreference: validate_update_preference(ctx, view, payload, proposer); break;
        case TxType::RequestConsent: validate_request_consent(ctx, view, payload); break;
        case TxType::GrantConsent: validate_grant_consent(ctx, view, payload); break;
        case TxType::RevokeConsent: validate_revoke_consent(ctx, view, payload); break;
        case TxType::ScrubResult: validate_scrub_result(ctx, view, payload); break;
        case TxType::CampaignInit: validate_campaign_init(ctx, view, payload); break;
        case TxType::CampaignStatus: validate_campaign_status(ctx, view, payload, proposer); break;
        case TxType::ComplaintFiled: validate_complaint_filed(ctx, view, payload); break;
        case TxType::DegradedService: validate_degraded_service(ctx, view, payload); break;
    }
    return view.take_rwset();
}

}  // namespace telechain
