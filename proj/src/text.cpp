#include "zblinks/text.hpp"

#include <algorithm>
#include <cstdint>

namespace zblinks {

namespace {

struct FoldRange {
    char32_t lo;
    char32_t hi;
    char ascii;
};

// Latin-1 Supplement and Latin Extended-A letters with a one-letter ASCII fold.
// Letters without one (æ, ß, þ, œ, ĳ) stay as themselves.
constexpr FoldRange kFolds[] = {
    {0x00C0, 0x00C5, 'a'}, {0x00C7, 0x00C7, 'c'}, {0x00C8, 0x00CB, 'e'}, {0x00CC, 0x00CF, 'i'},
    {0x00D0, 0x00D0, 'd'}, {0x00D1, 0x00D1, 'n'}, {0x00D2, 0x00D6, 'o'}, {0x00D8, 0x00D8, 'o'},
    {0x00D9, 0x00DC, 'u'}, {0x00DD, 0x00DD, 'y'}, {0x00E0, 0x00E5, 'a'}, {0x00E7, 0x00E7, 'c'},
    {0x00E8, 0x00EB, 'e'}, {0x00EC, 0x00EF, 'i'}, {0x00F0, 0x00F0, 'd'}, {0x00F1, 0x00F1, 'n'},
    {0x00F2, 0x00F6, 'o'}, {0x00F8, 0x00F8, 'o'}, {0x00F9, 0x00FC, 'u'}, {0x00FD, 0x00FD, 'y'},
    {0x00FF, 0x00FF, 'y'}, {0x0100, 0x0105, 'a'}, {0x0106, 0x010D, 'c'}, {0x010E, 0x0111, 'd'},
    {0x0112, 0x011B, 'e'}, {0x011C, 0x0123, 'g'}, {0x0124, 0x0127, 'h'}, {0x0128, 0x0131, 'i'},
    {0x0134, 0x0135, 'j'}, {0x0136, 0x0138, 'k'}, {0x0139, 0x0142, 'l'}, {0x0143, 0x014B, 'n'},
    {0x014C, 0x0151, 'o'}, {0x0154, 0x0159, 'r'}, {0x015A, 0x0161, 's'}, {0x0162, 0x0167, 't'},
    {0x0168, 0x0173, 'u'}, {0x0174, 0x0175, 'w'}, {0x0176, 0x0178, 'y'}, {0x0179, 0x017E, 'z'},
    {0x017F, 0x017F, 's'},
};

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at `i`, advancing `i`.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + len > s.size()) {
        ++i;
        return kInvalid;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
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

bool is_combining_mark(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

bool is_separator(char32_t cp) {
    if (cp < 0x80) {
        const bool alnum = (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
        return !alnum;
    }
    if (cp <= 0xBF) return cp != 0xAA && cp != 0xB5 && cp != 0xBA;  // Latin-1 symbols
    if (cp == 0xD7 || cp == 0xF7) return true;                       // × ÷
    if (cp >= 0x2000 && cp <= 0x2BFF) return true;  // punctuation, arrows, math operators
    if (cp >= 0x3000 && cp <= 0x303F) return true;  // CJK punctuation
    if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return true;
    if (cp >= 0xFFF0) return true;  // specials, including the replacement character
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp == 0xC6 || cp == 0xDE) return cp + 0x20;                // Æ Þ
    if (cp == 0x0132 || cp == 0x0152) return cp + 1;                // Ĳ Œ
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;  // Greek
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;            // Cyrillic
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
    return cp;
}

char fold_ascii(char32_t cp) {
    for (const auto& r : kFolds) {
        if (cp >= r.lo && cp <= r.hi) return r.ascii;
    }
    return 0;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = next_code_point(text, i);
        if (is_combining_mark(cp)) continue;
        if (is_separator(cp)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
            continue;
        }
        const char32_t lower = to_lower(cp);
        if (lower < 0x80) {
            current.push_back(static_cast<char>(lower));
        } else if (const char folded = fold_ascii(lower)) {
            current.push_back(folded);
        } else {
            append_utf8(current, lower);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string author_key(std::string_view display_name) {
    std::vector<std::string> family;
    std::vector<std::string> given;
    if (const auto comma = display_name.find(','); comma != std::string_view::npos) {
        family = tokenize(display_name.substr(0, comma));
        given = tokenize(display_name.substr(comma + 1));
    }
    if (family.empty()) {
        given.clear();
        auto words = tokenize(display_name);
        if (words.empty()) return {};
        family.push_back(words.back());
        words.pop_back();
        given = std::move(words);
    }
    std::string key;
    for (const auto& t : family) {
        if (!key.empty()) key.push_back(' ');
        key += t;
    }
    if (!given.empty()) {
        const std::string& first = given.front();
        // first code point of the first given-name token
        std::size_t i = 0;
        next_code_point(first, i);
        key.push_back(' ');
        key.append(first, 0, i);
    }
    return key;
}

std::vector<std::string> author_keys(std::span<const std::string> authors) {
    std::vector<std::string> keys;
    keys.reserve(authors.size());
    for (const auto& a : authors) {
        auto k = author_key(a);
        if (!k.empty()) keys.push_back(std::move(k));
    }
    return keys;
}

}  // namespace zblinks
