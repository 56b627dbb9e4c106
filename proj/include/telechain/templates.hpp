#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "telechain/errors.hpp"

namespace telechain {

// Registered content templates are message strings with "<%..%>" placeholder
// slots. Grammar: slots are balanced and non-nested; everything else is a
// literal that must match a delivered message exactly.

struct TemplateSegment {
    bool is_slot = false;
    std::string literal;  // empty when is_slot
};

inline std::vector<TemplateSegment> parse_template(std::string_view text) {
    std::vector<TemplateSegment> segments;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 2, "<%") == 0) {
            auto close = text.find("%>", i + 2);
            if (close == std::string_view::npos)
                throw ValidatorRejected(ErrorCode::MalformedPlaceholders, "unclosed <%");
            if (text.find("<%", i + 2) < close)
                throw ValidatorRejected(ErrorCode::MalformedPlaceholders, "nested <%");
            if (!current.empty()) {
                segments.push_back({false, current});
                current.clear();
            }
            segments.push_back({true, {}});
            i = close + 2;
        } else if (text.compare(i, 2, "%>") == 0) {
            throw ValidatorRejected(ErrorCode::MalformedPlaceholders, "stray %>");
        } else {
            current.push_back(text[i]);
            ++i;
        }
    }
    if (!current.empty()) segments.push_back({false, current});
    return segments;
}

inline bool well_formed_template(std::string_view text) {
    try {
        parse_template(text);
        return true;
    } catch (const ValidatorRejected&) {
        return false;
    }
}

namespace detail {
inline bool match_segments(const std::vector<TemplateSegment>& segs, std::size_t si,
                           std::string_view msg) {
    if (si == segs.size()) return msg.empty();
    const TemplateSegment& seg = segs[si];
    if (!seg.is_slot) {
        if (msg.substr(0, seg.literal.size()) != seg.literal) return false;
        return match_segments(segs, si + 1, msg.substr(seg.literal.size()));
    }
    // Slot: non-empty replacement containing no "<%". Backtrack over lengths.
    for (std::size_t take = 1; take <= msg.size(); ++take) {
        if (msg.substr(0, take).find("<%") != std::string_view::npos) break;
        if (match_segments(segs, si + 1, msg.substr(take))) return true;
    }
    return false;
}
}  // namespace detail

// True iff `message` equals the template with every slot replaced by a
// non-empty string free of "<%".
inline bool match_template(std::string_view template_text, std::string_view message) {
    auto segs = parse_template(template_text);
    return detail::match_segments(segs, 0, message);
}

// Consent-kind templates must spell out a message frequency and carry an
// OTP or link slot; the validator checks for the marker substrings used in
// the consortium's registered consent wording.
inline bool valid_consent_template(std::string_view text) {
    if (!well_formed_template(text)) return false;
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    bool has_frequency = lower.find("sms/month") != std::string::npos ||
                         lower.find("sms/week") != std::string::npos ||
                         lower.find("sms/day") != std::string::npos;
    bool has_otp_or_link = lower.find("otp") != std::string::npos ||
                           lower.find("<%link%>") != std::string::npos;
    bool has_slot = text.find("<%") != std::string_view::npos;
    return has_frequency && has_otp_or_link && has_slot;
}

// Literal-character overlap between a template and a free-text message; the
// audit path uses it to pick the closest template when several share
// literals.
inline std::size_t literal_overlap(std::string_view template_text, std::string_view message) {
    std::size_t score = 0;
    for (const auto& seg : parse_template(template_text)) {
        if (seg.is_slot) continue;
        if (message.find(seg.literal) != std::string_view::npos) score += seg.literal.size();
    }
    return score;
}

}  // namespace telechain
