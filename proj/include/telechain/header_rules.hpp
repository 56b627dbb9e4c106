#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "telechain/errors.hpp"

namespace telechain {

// Sender-id (header) registration rules: 6 uppercase alphanumerics on chain,
// displayed as "AB-XXXXXX" with the delivering operator's letter+circle
// prefix attached at delivery time.

inline bool valid_header_format(std::string_view header) {
    if (header.size() != 6) return false;
    for (char c : header)
        if (!(std::isupper(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c))))
            return false;
    return true;
}

// Confusable folding before edit distance: case-fold plus the digit/letter
// pairs spammers lean on (0/O, 1/I/L, 5/S, 8/B).
inline std::string fold_confusables(std::string_view header) {
    std::string out;
    out.reserve(header.size());
    for (char c : header) {
        char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        switch (u) {
            case '0': u = 'O'; break;
            case '1': u = 'I'; break;
            case 'L': u = 'I'; break;
            case '5': u = 'S'; break;
            case '8': u = 'B'; break;
            default: break;
        }
        out.push_back(u);
    }
    return out;
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t prev = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t cur = row[j];
            std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, prev + cost});
            prev = cur;
        }
    }
    return row[b.size()];
}

inline std::size_t lookalike_distance(std::string_view a, std::string_view b) {
    return levenshtein(fold_confusables(a), fold_confusables(b));
}

// Default threshold 2 catches the STABAN/SBIBAN spoofing pair.
inline bool is_lookalike(std::string_view a, std::string_view b, std::size_t threshold = 2) {
    return lookalike_distance(a, b) <= threshold;
}

// Delivery-time display form, e.g. "VM-STABAN" for operator letter 'V' and
// circle 'M'. Complaint classification strips this prefix again.
inline std::string display_header(std::string_view op_prefix, std::string_view header) {
    return std::string(op_prefix) + "-" + std::string(header);
}

// Splits a complaint's sender field into (display prefix, bare header) when
// it has the AB-XXXXXX shape; returns false otherwise.
inline bool split_display_header(std::string_view sender, std::string& prefix,
                                 std::string& header) {
    auto dash = sender.find('-');
    if (dash == std::string_view::npos) return false;
    std::string_view p = sender.substr(0, dash);
    std::string_view h = sender.substr(dash + 1);
    if (p.size() != 2 || !valid_header_format(h)) return false;
    prefix = std::string(p);
    header = std::string(h);
    return true;
}

inline bool is_p2p_number(std::string_view sender) {
    if (sender.size() != 10) return false;
    return std::all_of(sender.begin(), sender.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace telechain
