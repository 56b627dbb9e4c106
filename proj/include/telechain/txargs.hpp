#pragma once

#include <string>

#include "telechain/bytes.hpp"
#include "telechain/records.hpp"

namespace telechain {

// Canonical argument encodings, one struct per transaction type.

struct RegisterTelemarketerArgs {
    std::string tm_id;
    std::string payment_receipt;
    Bytes public_key;
    Bytes enc_public_key;
    Bytes self_signature;  // over public_key, under public_key itself

    Bytes encode() const {
        Writer w;
        w.put_str(tm_id);
        w.put_str(payment_receipt);
        w.put_bytes(public_key);
        w.put_bytes(enc_public_key);
        w.put_bytes(self_signature);
        return w.take();
    }
    static RegisterTelemarketerArgs decode(const Bytes& b) {
        Reader r(b);
        RegisterTelemarketerArgs a;
        a.tm_id = r.get_str();
        a.payment_receipt = r.get_str();
        a.public_key = r.get_bytes();
        a.enc_public_key = r.get_bytes();
        a.self_signature = r.get_bytes();
        return a;
    }
};

struct RegisterPrincipalEntityArgs {
    std::string pe_id;
    std::string documents_ref;

    Bytes encode() const {
        Writer w;
        w.put_str(pe_id);
        w.put_str(documents_ref);
        return w.take();
    }
    static RegisterPrincipalEntityArgs decode(const Bytes& b) {
        Reader r(b);
        RegisterPrincipalEntityArgs a;
        a.pe_id = r.get_str();
        a.documents_ref = r.get_str();
        return a;
    }
};

struct RegisterHeaderArgs {
    std::string pe_id;
    std::string header;

    Bytes encode() const {
        Writer w;
        w.put_str(pe_id);
        w.put_str(header);
        return w.take();
    }
    static RegisterHeaderArgs decode(const Bytes& b) {
        Reader r(b);
        RegisterHeaderArgs a;
        a.pe_id = r.get_str();
        a.header = r.get_str();
        return a;
    }
};

struct DelegateHeaderArgs {
    std::string pe_id;
    std::string header;
    std::string tm_id;

    Bytes encode() const {
        Writer w;
        w.put_str(pe_id);
        w.put_str(header);
        w.put_str(tm_id);
        return w.take();
    }
    static DelegateHeaderArgs decode(const Bytes& b) {
        Reader r(b);
        DelegateHeaderArgs a;
        a.pe_id = r.get_str();
        a.header = r.get_str();
        a.tm_id = r.get_str();
        return a;
    }
};

struct RegisterTemplateArgs {
    std::string header;
    std::string text;
    TemplateKind kind = TemplateKind::Promotional;

    Bytes encode() const {
        Writer w;
        w.put_str(header);
        w.put_str(text);
        w.put_u8(static_cast<std::uint8_t>(kind));
        return w.take();
    }
    static RegisterTemplateArgs decode(const Bytes& b) {
        Reader r(b);
        RegisterTemplateArgs a;
        a.header = r.get_str();
        a.text = r.get_str();
        a.kind = static_cast<TemplateKind>(r.get_u8());
        return a;
    }
};

struct UpdatePreferenceArgs {
    Hash256 subscriber{};
    std::string operator_id;
    PreferenceMode mode = PreferenceMode::Partial;
    std::vector<std::string> blocked_categories;

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_str(operator_id);
        w.put_u8(static_cast<std::uint8_t>(mode));
        w.put_u32(static_cast<std::uint32_t>(blocked_categories.size()));
        for (const auto& c : blocked_categories) w.put_str(c);
        return w.take();
    }
    static UpdatePreferenceArgs decode(const Bytes& b) {
        Reader r(b);
        UpdatePreferenceArgs a;
        a.subscriber = r.get_hash();
        a.operator_id = r.get_str();
        a.mode = static_cast<PreferenceMode>(r.get_u8());
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) a.blocked_categories.push_back(r.get_str());
        return a;
    }
};

struct RequestConsentArgs {
    std::string header;
    Hash256 subscriber{};
    Hash256 consent_template_id{};
    Hash256 otp_hash{};  // keyed hash of the OTP / link token, never the secret
    std::uint64_t otp_expiry = 0;
    ConsentChannel channel = ConsentChannel::Otp;

    Bytes encode() const {
        Writer w;
        w.put_str(header);
        w.put_hash(subscriber);
        w.put_hash(consent_template_id);
        w.put_hash(otp_hash);
        w.put_u64(otp_expiry);
        w.put_u8(static_cast<std::uint8_t>(channel));
        return w.take();
    }
    static RequestConsentArgs decode(const Bytes& b) {
        Reader r(b);
        RequestConsentArgs a;
        a.header = r.get_str();
        a.subscriber = r.get_hash();
        a.consent_template_id = r.get_hash();
        a.otp_hash = r.get_hash();
        a.otp_expiry = r.get_u64();
        a.channel = static_cast<ConsentChannel>(r.get_u8());
        return a;
    }
};

struct GrantConsentArgs {
    Hash256 subscriber{};
    std::string header;
    Hash256 token_hash{};  // keyed hash of the OTP/link token the subscriber supplied

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_str(header);
        w.put_hash(token_hash);
        return w.take();
    }
    static GrantConsentArgs decode(const Bytes& b) {
        Reader r(b);
        GrantConsentArgs a;
        a.subscriber = r.get_hash();
        a.header = r.get_str();
        a.token_hash = r.get_hash();
        return a;
    }
};

struct RevokeConsentArgs {
    Hash256 subscriber{};
    std::string header;

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_str(header);
        return w.take();
    }
    static RevokeConsentArgs decode(const Bytes& b) {
        Reader r(b);
        RevokeConsentArgs a;
        a.subscriber = r.get_hash();
        a.header = r.get_str();
        return a;
    }
};

// ScrubResult args are the encoded ScrubTokenRecord (consumed=false).

struct CampaignInitArgs {
    std::string campaign_id;
    Bytes token_id;
    std::string header;
    Hash256 template_id{};

    Bytes encode() const {
        Writer w;
        w.put_str(campaign_id);
        w.put_bytes(token_id);
        w.put_str(header);
        w.put_hash(template_id);
        return w.take();
    }
    static CampaignInitArgs decode(const Bytes& b) {
        Reader r(b);
        CampaignInitArgs a;
        a.campaign_id = r.get_str();
        a.token_id = r.get_bytes();
        a.header = r.get_str();
        a.template_id = r.get_hash();
        return a;
    }
};

struct CampaignStatusArgs {
    std::string campaign_id;
    std::string operator_id;
    std::uint64_t attempted = 0;
    std::uint64_t delivered = 0;

    Bytes encode() const {
        Writer w;
        w.put_str(campaign_id);
        w.put_str(operator_id);
        w.put_u64(attempted);
        w.put_u64(delivered);
        return w.take();
    }
    static CampaignStatusArgs decode(const Bytes& b) {
        Reader r(b);
        CampaignStatusArgs a;
        a.campaign_id = r.get_str();
        a.operator_id = r.get_str();
        a.attempted = r.get_u64();
        a.delivered = r.get_u64();
        return a;
    }
};

struct ComplaintFiledArgs {
    std::string complaint_id;
    Hash256 subscriber{};
    std::string sender;
    std::string message_text;
    std::uint64_t received_tick = 0;

    Bytes encode() const {
        Writer w;
        w.put_str(complaint_id);
        w.put_hash(subscriber);
        w.put_str(sender);
        w.put_str(message_text);
        w.put_u64(received_tick);
        return w.take();
    }
    static ComplaintFiledArgs decode(const Bytes& b) {
        Reader r(b);
        ComplaintFiledArgs a;
        a.complaint_id = r.get_str();
        a.subscriber = r.get_hash();
        a.sender = r.get_str();
        a.message_text = r.get_str();
        a.received_tick = r.get_u64();
        return a;
    }
};

struct DegradedServiceArgs {
    Hash256 subscriber{};
    WatchAction action = WatchAction::Throttled;
    std::uint64_t complaint_count = 0;

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_u8(static_cast<std::uint8_t>(action));
        w.put_u64(complaint_count);
        return w.take();
    }
    static DegradedServiceArgs decode(const Bytes& b) {
        Reader r(b);
        DegradedServiceArgs a;
        a.subscriber = r.get_hash();
        a.action = static_cast<WatchAction>(r.get_u8());
        a.complaint_count = r.get_u64();
        return a;
    }
};

}  // namespace telechain
