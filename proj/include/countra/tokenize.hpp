#pragma once
// Input tokenization: by default every UTF-8 code point is one token, so
// multi-byte symbols like "∧" work without a separator; a non-empty
// separator switches to plain splitting for multi-character tokens.

#include <string>
#include <string_view>
#include <vector>

#include "countra/machine.hpp"

namespace countra {

inline std::vector<std::string> utf8_codepoints(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        if (b >= 0xF0) len = 4;
        else if (b >= 0xE0) len = 3;
        else if (b >= 0xC0) len = 2;
        else if (b >= 0x80) throw InputError("invalid UTF-8 byte in input");
        if (i + len > s.size()) throw InputError("truncated UTF-8 sequence in input");
        for (std::size_t j = 1; j < len; ++j) {
            const unsigned char c = static_cast<unsigned char>(s[i + j]);
            if ((c & 0xC0) != 0x80) throw InputError("invalid UTF-8 continuation byte");
        }
        out.emplace_back(s.substr(i, len));
        i += len;
    }
    return out;
}

inline std::vector<std::string> split_tokens(std::string_view s, std::string_view sep) {
    if (sep.empty()) return utf8_codepoints(s);
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + sep.size();
    }
    return out;
}

}  // namespace countra
