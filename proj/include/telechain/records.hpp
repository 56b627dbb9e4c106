#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "telechain/bytes.hpp"
#include "telechain/domain.hpp"
#include "telechain/tx.hpp"

namespace telechain {

// On-chain record schemas and their state-key namespaces. Every record is
// stored as canonical bytes under a namespaced key, so two nodes committing
// the same blocks hold byte-identical world states.

namespace keys {
inline std::string member(std::string_view id) { return "member/" + std::string(id); }
inline std::string principal_entity(std::string_view id) { return "pe/" + std::string(id); }
inline std::string header_index() { return "hdr/index"; }
inline std::string header(std::string_view h) { return "hdr/" + std::string(h); }
inline std::string content_template(const Hash256& id) { return "tmpl/" + to_hex(id); }
inline std::string preference(const Hash256& subscriber) { return "pref/" + to_hex(subscriber); }
inline std::string consent(const Hash256& subscriber, std::string_view header) {
    return "consent/" + to_hex(subscriber) + "/" + std::string(header);
}
inline std::string scrub_token(const Bytes& token_id) { return "scrub/" + to_hex(token_id); }
inline std::string campaign(std::string_view id) { return "camp/" + std::string(id); }
inline std::string complaint(std::string_view id) { return "complaint/" + std::string(id); }
inline std::string watch(const Hash256& subscriber) { return "watch/" + to_hex(subscriber); }
}  // namespace keys

struct MemberRecord {
    std::string id;
    Role role = Role::Telemarketer;
    Bytes public_key;
    Bytes enc_public_key;  // X25519, used for per-operator file encryption
    std::string region;    // operator display prefix ("VM", "AD", ...) where role=operator
    std::uint64_t admitted_at = 0;
    bool tombstoned = false;  // key revocation

    Bytes encode() const {
        Writer w;
        w.put_str(id);
        w.put_u8(static_cast<std::uint8_t>(role));
        w.put_bytes(public_key);
        w.put_bytes(enc_public_key);
        w.put_str(region);
        w.put_u64(admitted_at);
        w.put_u8(tombstoned ? 1 : 0);
        return w.take();
    }

    static MemberRecord decode(const Bytes& b) {
        Reader r(b);
        MemberRecord m;
        m.id = r.get_str();
        m.role = static_cast<Role>(r.get_u8());
        m.public_key = r.get_bytes();
        m.enc_public_key = r.get_bytes();
        m.region = r.get_str();
        m.admitted_at = r.get_u64();
        m.tombstoned = r.get_u8() != 0;
        return m;
    }
};

struct PrincipalEntityRecord {
    std::string id;
    std::string documents_ref;
    bool operator_approved = true;  // manual KYC collapsed to a flag
    std::uint64_t registered_at = 0;

    Bytes encode() const {
        Writer w;
        w.put_str(id);
        w.put_str(documents_ref);
        w.put_u8(operator_approved ? 1 : 0);
        w.put_u64(registered_at);
        return w.take();
    }

    static PrincipalEntityRecord decode(const Bytes& b) {
        Reader r(b);
        PrincipalEntityRecord p;
        p.id = r.get_str();
        p.documents_ref = r.get_str();
        p.operator_approved = r.get_u8() != 0;
        p.registered_at = r.get_u64();
        return p;
    }
};

struct HeaderRecord {
    std::string header;  // bare 6-char form; display prefix attached at delivery
    std::string owner_pe;
    std::vector<std::string> delegated_tms;  // kept sorted
    std::uint64_t registered_at = 0;

    Bytes encode() const {
        Writer w;
        w.put_str(header);
        w.put_str(owner_pe);
        w.put_u32(static_cast<std::uint32_t>(delegated_tms.size()));
        for (const auto& t : delegated_tms) w.put_str(t);
        w.put_u64(registered_at);
        return w.take();
    }

    static HeaderRecord decode(const Bytes& b) {
        Reader r(b);
        HeaderRecord h;
        h.header = r.get_str();
        h.owner_pe = r.get_str();
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) h.delegated_tms.push_back(r.get_str());
        h.registered_at = r.get_u64();
        return h;
    }

    bool delegated_to(std::string_view tm) const {
        return std::find(delegated_tms.begin(), delegated_tms.end(), tm) != delegated_tms.end();
    }
};

// All committed headers, in one key: the lookalike scan reads it, giving a
// natural read-write conflict when two registrations race into one block.
struct HeaderIndex {
    std::vector<std::string> headers;  // sorted

    Bytes encode() const {
        Writer w;
        w.put_u32(static_cast<std::uint32_t>(headers.size()));
        for (const auto& h : headers) w.put_str(h);
        return w.take();
    }

    static HeaderIndex decode(const Bytes& b) {
        Reader r(b);
        HeaderIndex idx;
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) idx.headers.push_back(r.get_str());
        return idx;
    }
};

struct TemplateRecord {
    Hash256 template_id{};  // digest of (header, text)
    std::string header;
    std::string text;
    TemplateKind kind = TemplateKind::Promotional;
    std::uint64_t registered_at = 0;

    static Hash256 compute_id(std::string_view header, std::string_view text) {
        Writer w;
        w.put_str(header);
        w.put_str(text);
        return crypto::sha256(w.bytes());
    }

    Bytes encode() const {
        Writer w;
        w.put_hash(template_id);
        w.put_str(header);
        w.put_str(text);
        w.put_u8(static_cast<std::uint8_t>(kind));
        w.put_u64(registered_at);
        return w.take();
    }

    static TemplateRecord decode(const Bytes& b) {
        Reader r(b);
        TemplateRecord t;
        t.template_id = r.get_hash();
        t.header = r.get_str();
        t.text = r.get_str();
        t.kind = static_cast<TemplateKind>(r.get_u8());
        t.registered_at = r.get_u64();
        return t;
    }
};

struct PreferenceRecord {
    Hash256 subscriber{};  // keyed hash, never plaintext digits
    std::string operator_id;
    PreferenceMode mode = PreferenceMode::FullyOpen;
    std::vector<std::string> blocked_categories;  // sorted category paths
    std::uint64_t updated_at = 0;

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_str(operator_id);
        w.put_u8(static_cast<std::uint8_t>(mode));
        w.put_u32(static_cast<std::uint32_t>(blocked_categories.size()));
        for (const auto& c : blocked_categories) w.put_str(c);
        w.put_u64(updated_at);
        return w.take();
    }

    static PreferenceRecord decode(const Bytes& b) {
        Reader r(b);
        PreferenceRecord p;
        p.subscriber = r.get_hash();
        p.operator_id = r.get_str();
        p.mode = static_cast<PreferenceMode>(r.get_u8());
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) p.blocked_categories.push_back(r.get_str());
        p.updated_at = r.get_u64();
        return p;
    }
};

enum class ConsentChannel : std::uint8_t { Otp = 0, Link = 1 };

struct ConsentRecord {
    Hash256 subscriber{};
    std::string header;
    ConsentStatus status = ConsentStatus::Requested;
    Hash256 consent_template_id{};
    Hash256 otp_hash{};  // keyed hash of the OTP / link token
    std::uint64_t otp_expiry = 0;
    ConsentChannel channel = ConsentChannel::Otp;
    std::vector<std::pair<ConsentStatus, std::uint64_t>> history;  // (status, height)

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_str(header);
        w.put_u8(static_cast<std::uint8_t>(status));
        w.put_hash(consent_template_id);
        w.put_hash(otp_hash);
        w.put_u64(otp_expiry);
        w.put_u8(static_cast<std::uint8_t>(channel));
        w.put_u32(static_cast<std::uint32_t>(history.size()));
        for (const auto& [s, h] : history) {
            w.put_u8(static_cast<std::uint8_t>(s));
            w.put_u64(h);
        }
        return w.take();
    }

    static ConsentRecord decode(const Bytes& b) {
        Reader r(b);
        ConsentRecord c;
        c.subscriber = r.get_hash();
        c.header = r.get_str();
        c.status = static_cast<ConsentStatus>(r.get_u8());
        c.consent_template_id = r.get_hash();
        c.otp_hash = r.get_hash();
        c.otp_expiry = r.get_u64();
        c.channel = static_cast<ConsentChannel>(r.get_u8());
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            auto s = static_cast<ConsentStatus>(r.get_u8());
            auto h = r.get_u64();
            c.history.emplace_back(s, h);
        }
        return c;
    }
};

struct PerOperatorDigest {
    std::string operator_id;
    std::string locator;  // content-addressed path in the scrubber's store
    Hash256 file_digest{};
    Bytes scrubber_signature;  // over the digest

    Bytes encode() const {
        Writer w;
        w.put_str(operator_id);
        w.put_str(locator);
        w.put_hash(file_digest);
        w.put_bytes(scrubber_signature);
        return w.take();
    }

    static PerOperatorDigest decode(Reader& r) {
        PerOperatorDigest d;
        d.operator_id = r.get_str();
        d.locator = r.get_str();
        d.file_digest = r.get_hash();
        d.scrubber_signature = r.get_bytes();
        return d;
    }
};

// The on-chain anchor of a scrub: digests, counts, and the global state hash
// at decision height. Never contains plaintext numbers or the raw partition.
struct ScrubTokenRecord {
    Bytes token_id;  // 128-bit
    Hash256 state_hash{};
    std::uint64_t decision_height = 0;
    std::vector<PerOperatorDigest> per_operator;
    std::uint64_t input_count = 0;
    std::uint64_t valid_count = 0;
    std::uint64_t invalid_count = 0;
    std::string scrubber_id;
    std::string tm_id;
    std::string header;
    Hash256 template_id{};
    std::string category;
    bool consumed = false;  // single-use; flipped by CampaignInit

    Bytes encode() const {
        Writer w;
        w.put_bytes(token_id);
        w.put_hash(state_hash);
        w.put_u64(decision_height);
        w.put_u32(static_cast<std::uint32_t>(per_operator.size()));
        for (const auto& d : per_operator) w.put_bytes(d.encode());
        w.put_u64(input_count);
        w.put_u64(valid_count);
        w.put_u64(invalid_count);
        w.put_str(scrubber_id);
        w.put_str(tm_id);
        w.put_str(header);
        w.put_hash(template_id);
        w.put_str(category);
        w.put_u8(consumed ? 1 : 0);
        return w.take();
    }

    static ScrubTokenRecord decode(const Bytes& b) {
        Reader r(b);
        ScrubTokenRecord t;
        t.token_id = r.get_bytes();
        t.state_hash = r.get_hash();
        t.decision_height = r.get_u64();
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            Bytes db = r.get_bytes();
            Reader dr(db);
            t.per_operator.push_back(PerOperatorDigest::decode(dr));
        }
        t.input_count = r.get_u64();
        t.valid_count = r.get_u64();
        t.invalid_count = r.get_u64();
        t.scrubber_id = r.get_str();
        t.tm_id = r.get_str();
        t.header = r.get_str();
        t.template_id = r.get_hash();
        t.category = r.get_str();
        t.consumed = r.get_u8() != 0;
        return t;
    }
};

enum class CampaignStatusCode : std::uint8_t {
    Queued = 0,
    InDelivery = 1,
    Completed = 2,
    Rejected = 3,
};

struct CampaignLeg {
    std::string operator_id;
    std::uint64_t attempted = 0;
    std::uint64_t delivered = 0;
    bool reported = false;
};

struct CampaignRecord {
    std::string campaign_id;
    std::string tm_id;
    std::string header;
    Hash256 template_id{};
    Bytes token_id;
    CampaignStatusCode status = CampaignStatusCode::Queued;
    std::vector<CampaignLeg> legs;

    Bytes encode() const {
        Writer w;
        w.put_str(campaign_id);
        w.put_str(tm_id);
        w.put_str(header);
        w.put_hash(template_id);
        w.put_bytes(token_id);
        w.put_u8(static_cast<std::uint8_t>(status));
        w.put_u32(static_cast<std::uint32_t>(legs.size()));
        for (const auto& l : legs) {
            w.put_str(l.operator_id);
            w.put_u64(l.attempted);
            w.put_u64(l.delivered);
            w.put_u8(l.reported ? 1 : 0);
        }
        return w.take();
    }

    static CampaignRecord decode(const Bytes& b) {
        Reader r(b);
        CampaignRecord c;
        c.campaign_id = r.get_str();
        c.tm_id = r.get_str();
        c.header = r.get_str();
        c.template_id = r.get_hash();
        c.token_id = r.get_bytes();
        c.status = static_cast<CampaignStatusCode>(r.get_u8());
        std::uint32_t n = r.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            CampaignLeg l;
            l.operator_id = r.get_str();
            l.attempted = r.get_u64();
            l.delivered = r.get_u64();
            l.reported = r.get_u8() != 0;
            c.legs.push_back(std::move(l));
        }
        return c;
    }
};

enum class ComplaintClass : std::uint8_t { Rtm = 0, Utm = 1 };
enum class Verdict : std::uint8_t {
    Pending = 0,
    Violation = 1,
    Compliant = 2,
    UnregisteredSender = 3,
};

struct ComplaintRecord {
    std::string complaint_id;
    Hash256 subscriber{};
    std::string sender;  // display header string or 10-digit number
    std::string message_text;
    std::uint64_t received_tick = 0;
    ComplaintClass cls = ComplaintClass::Utm;
    Verdict verdict = Verdict::Pending;

    Bytes encode() const {
        Writer w;
        w.put_str(complaint_id);
        w.put_hash(subscriber);
        w.put_str(sender);
        w.put_str(message_text);
        w.put_u64(received_tick);
        w.put_u8(static_cast<std::uint8_t>(cls));
        w.put_u8(static_cast<std::uint8_t>(verdict));
        return w.take();
    }

    static ComplaintRecord decode(const Bytes& b) {
        Reader r(b);
        ComplaintRecord c;
        c.complaint_id = r.get_str();
        c.subscriber = r.get_hash();
        c.sender = r.get_str();
        c.message_text = r.get_str();
        c.received_tick = r.get_u64();
        c.cls = static_cast<ComplaintClass>(r.get_u8());
        c.verdict = static_cast<Verdict>(r.get_u8());
        return c;
    }
};

enum class WatchAction : std::uint8_t {
    None = 0,
    Throttled = 1,
    Degraded = 2,
    Terminated = 3,
};

inline const char* watch_action_name(WatchAction a) {
    switch (a) {
        case WatchAction::None: return "none";
        case WatchAction::Throttled: return "throttled";
        case WatchAction::Degraded: return "degraded";
        case WatchAction::Terminated: return "terminated";
    }
    return "unknown";
}

struct WatchListEntry {
    Hash256 subscriber{};
    std::uint64_t complaint_count = 0;
    std::uint64_t last_height = 0;
    WatchAction action = WatchAction::None;

    Bytes encode() const {
        Writer w;
        w.put_hash(subscriber);
        w.put_u64(complaint_count);
        w.put_u64(last_height);
        w.put_u8(static_cast<std::uint8_t>(action));
        return w.take();
    }

    static WatchListEntry decode(const Bytes& b) {
        Reader r(b);
        WatchListEntry e;
        e.subscriber = r.get_hash();
        e.complaint_count = r.get_u64();
        e.last_height = r.get_u64();
        e.action = static_cast<WatchAction>(r.get_u8());
        return e;
    }
};

}  // namespace telechain
