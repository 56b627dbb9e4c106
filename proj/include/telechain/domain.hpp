#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "telechain/bytes.hpp"
#include "telechain/crypto.hpp"
#include "telechain/errors.hpp"

namespace telechain {

enum class Role : std::uint8_t {
    Operator = 0,
    Telemarketer = 1,
    Scrubber = 2,
    Observer = 3,
    ThirdParty = 4,
};

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Operator: return "operator";
        case Role::Telemarketer: return "telemarketer";
        case Role::Scrubber: return "scrubber";
        case Role::Observer: return "observer";
        case Role::ThirdParty: return "third_party";
    }
    return "unknown";
}

inline Role role_from_name(std::string_view s) {
    if (s == "operator") return Role::Operator;
    if (s == "telemarketer") return Role::Telemarketer;
    if (s == "scrubber") return Role::Scrubber;
    if (s == "observer") return Role::Observer;
    if (s == "third_party") return Role::ThirdParty;
    throw Error(ErrorCode::ConfigInvalid, "unknown role: " + std::string(s));
}

// The closed set of seven promotional categories, stable codes 1-7.
// Sub-categories are slash paths under a top-level name, e.g.
// "Health/Pharmacy"; a block on a prefix blocks all descendants.
inline const std::vector<std::string>& category_names() {
    static const std::vector<std::string> names = {
        "Banking",        // 1: banking, insurance & financial products
        "RealEstate",     // 2
        "Education",      // 3
        "Health",         // 4
        "ConsumerGoods",  // 5: consumer goods & automobiles
        "Communication",  // 6: communication, broadcasting & entertainment
        "Tourism",        // 7
    };
    return names;
}

inline std::string category_top(std::string_view path) {
    auto slash = path.find('/');
    return std::string(slash == std::string_view::npos ? path : path.substr(0, slash));
}

inline bool valid_category_path(std::string_view path) {
    if (path.empty() || path.front() == '/' || path.back() == '/') return false;
    const auto& names = category_names();
    std::string top = category_top(path);
    return std::find(names.begin(), names.end(), top) != names.end();
}

inline int category_code(std::string_view top) {
    const auto& names = category_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == top) return static_cast<int>(i) + 1;
    throw Error(ErrorCode::UnknownCategory, std::string(top));
}

// True when a block on `blocked` (possibly a prefix path) covers `campaign`.
inline bool category_blocks(std::string_view blocked, std::string_view campaign) {
    if (blocked == campaign) return true;
    return campaign.size() > blocked.size() &&
           campaign.substr(0, blocked.size()) == blocked &&
           campaign[blocked.size()] == '/';
}

// Normalizes an Indian subscriber number to the canonical 12-digit form
// "91" + 10 digits. Accepts "+91 ...", "0"-prefixed, and bare 10-digit input;
// separators (space, dash) are dropped.
inline std::string normalize_phone(std::string_view raw) {
    std::string digits;
    digits.reserve(raw.size());
    for (char c : raw) {
        if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
        else if (c == '+' || c == ' ' || c == '-') continue;
        else throw Error(ErrorCode::MalformedNumber, std::string(raw));
    }
    if (digits.size() == 14 && digits.substr(0, 4) == "0091") digits.erase(0, 2);
    if (digits.size() == 11 && digits.front() == '0') digits.erase(0, 1);
    if (digits.size() == 10) digits = "91" + digits;
    if (digits.size() != 12 || digits.substr(0, 2) != "91")
        throw Error(ErrorCode::MalformedNumber, std::string(raw));
    return digits;
}

// Keyed hash over the normalized number; the consortium secret keys the hash
// so the on-chain registry resists offline dictionary sweeps.
inline Hash256 hash_subscriber(std::string_view phone, const Bytes& key) {
    return crypto::hmac_sha256(key, to_bytes(normalize_phone(phone)));
}

enum class PreferenceMode : std::uint8_t {
    FullyOpen = 0,
    FullyBlocked = 1,
    Partial = 2,
};

enum class ConsentStatus : std::uint8_t {
    Requested = 0,
    Granted = 1,
    Revoked = 2,
};

enum class TemplateKind : std::uint8_t {
    Promotional = 0,
    Transactional = 1,
    Consent = 2,
};

inline const char* template_kind_name(TemplateKind k) {
    switch (k) {
        case TemplateKind::Promotional: return "promotional";
        case TemplateKind::Transactional: return "transactional";
        case TemplateKind::Consent: return "consent";
    }
    return "unknown";
}

}  // namespace telechain
