#include "core/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>

namespace atant::text {

namespace {

bool is_ws_cp(uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

uint32_t fold_cp(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 supplement uppercase, skipping the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    // Latin Extended-A pairs. U+0130/U+0131 (dotted/dotless i) are left
    // alone; their folds are locale entangled.
    if ((cp >= 0x100 && cp <= 0x137 && cp != 0x130) || (cp >= 0x14A && cp <= 0x177)) {
        if ((cp & 1) == 0) return cp + 1;
        return cp;
    }
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
        if ((cp & 1) == 1) return cp + 1;
        return cp;
    }
    return cp;
}

// Decodes one UTF-8 code point at s[i]; on malformed input consumes one
// byte and returns it verbatim so folding never throws.
uint32_t decode_utf8(std::string_view s, size_t& i) {
    auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        i += 1;
        return b0;
    }
    size_t len = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else { i += 1; return b0; }
    if (i + len > s.size()) { i += 1; return b0; }
    for (size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) { i += 1; return b0; }
        cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    i += len;
    return cp;
}

void encode_utf8(uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> words = {
        "a",  "an", "the", "is", "are", "was", "were", "be", "been", "being",
        "i",  "me", "my",  "mine", "we", "us", "our", "you", "your", "it",
        "its", "this", "that", "these", "those", "do", "does", "did", "to",
        "of", "in", "at", "on", "for", "with", "about", "and", "or", "but",
        "so", "as", "from", "by", "have", "has", "had", "what", "when",
        "where", "who", "whom", "whose", "why", "how", "which", "tell",
        "know", "am", "still",
        // clitic fragments left by apostrophe splitting
        "s", "t", "m", "re", "ve", "ll", "d",
    };
    return words;
}

bool is_token_cp(uint32_t cp) {
    if (cp >= '0' && cp <= '9') return true;
    if (cp >= 'a' && cp <= 'z') return true;
    if (cp >= 'A' && cp <= 'Z') return true;
    return cp >= 0x80 && !is_ws_cp(cp) && cp != 0x2019;  // treat curly apostrophe as splitter
}

}  // namespace

std::string fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    size_t i = 0;
    while (i < s.size()) {
        uint32_t cp = decode_utf8(s, i);
        if (is_ws_cp(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        encode_utf8(fold_cp(cp), out);
    }
    return out;
}

bool contains_fold(std::string_view haystack, std::string_view needle) {
    std::string h = fold(haystack);
    std::string n = fold(needle);
    if (n.empty()) return true;
    return h.find(n) != std::string::npos;
}

std::vector<std::string> tokenize(std::string_view s) {
    std::string folded = fold(s);
    std::vector<std::string> tokens;
    std::string current;
    size_t i = 0;
    while (i < folded.size()) {
        size_t at = i;
        uint32_t cp = decode_utf8(folded, i);
        if (is_token_cp(cp)) {
            current.append(folded, at, i - at);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> content_tokens(std::string_view s) {
    std::vector<std::string> tokens = tokenize(s);
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                [](const std::string& t) { return is_stopword(t); }),
                 tokens.end());
    return tokens;
}

bool is_stopword(std::string_view token) {
    return stopwords().count(token) > 0;
}

std::string normalize_slot(std::string_view s) {
    std::vector<std::string> tokens = tokenize(s);
    static const std::unordered_set<std::string_view> possessives = {
        "my", "our", "your", "his", "her", "their",
    };
    static const std::unordered_set<std::string_view> clitics = {"s", "t", "m", "re", "ve", "ll", "d"};
    std::vector<std::string> kept;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (kept.empty() && possessives.count(tokens[i])) continue;
        if (clitics.count(tokens[i])) continue;
        kept.push_back(tokens[i]);
    }
    return join(kept);
}

std::string normalize_query(std::string_view s) {
    std::vector<std::string> tokens = tokenize(s);
    static const std::unordered_set<std::string_view> clitics = {"s", "t", "m", "re", "ve", "ll", "d"};
    std::vector<std::string> kept;
    for (auto& t : tokens) {
        if (clitics.count(t)) continue;
        kept.push_back(t);
    }
    return join(kept);
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace atant::text
