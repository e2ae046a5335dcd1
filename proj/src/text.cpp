#include "causerank/text.hpp"

#include <array>
#include <cstdint>

#include "causerank/error.hpp"

namespace crk {

std::vector<char32_t> utf8_decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      fail(ErrorCode::parse, "invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + len > text.size()) {
      fail(ErrorCode::parse, "truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (size_t k = 1; k < len; ++k) {
      unsigned char b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        fail(ErrorCode::parse, "invalid UTF-8 continuation at offset " + std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // reject overlong encodings and surrogates
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      fail(ErrorCode::parse, "invalid UTF-8 codepoint at offset " + std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
  std::string out;
  out.reserve(codepoints.size());
  for (char32_t cp : codepoints) {
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
  return out;
}

namespace {

// Halfwidth katakana block U+FF61..U+FF9F mapped to fullwidth equivalents.
// FF9E/FF9F map to the combining voiced marks and are composed afterwards.
constexpr std::array<char32_t, 0x3F> kHalfwidthKana = {
    0x3002, 0x300C, 0x300D, 0x3001, 0x30FB,  // FF61..FF65 . [ ] , middle dot
    0x30F2,                                  // FF66 wo
    0x30A1, 0x30A3, 0x30A5, 0x30A7, 0x30A9,  // FF67..FF6B small a i u e o
    0x30E3, 0x30E5, 0x30E7, 0x30C3,          // FF6C..FF6F small ya yu yo tsu
    0x30FC,                                  // FF70 prolonged sound mark
    0x30A2, 0x30A4, 0x30A6, 0x30A8, 0x30AA,  // FF71..FF75 a i u e o
    0x30AB, 0x30AD, 0x30AF, 0x30B1, 0x30B3,  // FF76..FF7A ka ki ku ke ko
    0x30B5, 0x30B7, 0x30B9, 0x30BB, 0x30BD,  // FF7B..FF7F sa shi su se so
    0x30BF, 0x30C1, 0x30C4, 0x30C6, 0x30C8,  // FF80..FF84 ta chi tsu te to
    0x30CA, 0x30CB, 0x30CC, 0x30CD, 0x30CE,  // FF85..FF89 na ni nu ne no
    0x30CF, 0x30D2, 0x30D5, 0x30D8, 0x30DB,  // FF8A..FF8E ha hi fu he ho
    0x30DE, 0x30DF, 0x30E0, 0x30E1, 0x30E2,  // FF8F..FF93 ma mi mu me mo
    0x30E4, 0x30E6, 0x30E8,                  // FF94..FF96 ya yu yo
    0x30E9, 0x30EA, 0x30EB, 0x30EC, 0x30ED,  // FF97..FF9B ra ri ru re ro
    0x30EF, 0x30F3,                          // FF9C..FF9D wa n
    0x3099, 0x309A,                          // FF9E..FF9F voiced marks
};

char32_t fold_width(char32_t cp) {
  if (cp == 0x3000) return 0x20;
  if (cp >= 0xFF01 && cp <= 0xFF5E) return cp - 0xFEE0;
  if (cp >= 0xFF61 && cp <= 0xFF9F) return kHalfwidthKana[cp - 0xFF61];
  return cp;
}

// Precomposed kana for base + U+3099 (voiced) / U+309A (semi-voiced).
char32_t compose_kana(char32_t base, char32_t mark) {
  if (mark == 0x3099) {
    if (base == 0x30A6) return 0x30F4;                    // u -> vu
    if (base >= 0x30AB && base <= 0x30C8 && ((base - 0x30AB) % 2 == 0)) return base + 1;
    if (base >= 0x30CF && base <= 0x30DB && ((base - 0x30CF) % 3 == 0)) return base + 1;
    if (base == 0x30EF) return 0x30F7;                    // wa -> va
    if (base == 0x30F2) return 0x30FA;                    // wo -> vo
  } else if (mark == 0x309A) {
    if (base >= 0x30CF && base <= 0x30DB && ((base - 0x30CF) % 3 == 0)) return base + 2;
  }
  return 0;
}

bool is_space(char32_t cp) { return cp == 0x20 || cp == 0x09 || cp == 0x0A || cp == 0x0D; }

}  // namespace

std::string normalize_text(std::string_view text) {
  std::vector<char32_t> cps = utf8_decode(text);
  std::vector<char32_t> folded;
  folded.reserve(cps.size());
  for (char32_t cp : cps) {
    cp = fold_width(cp);
    if ((cp == 0x3099 || cp == 0x309A) && !folded.empty()) {
      char32_t composed = compose_kana(folded.back(), cp);
      if (composed != 0) {
        folded.back() = composed;
        continue;
      }
    }
    folded.push_back(cp);
  }
  std::vector<char32_t> out;
  out.reserve(folded.size());
  for (char32_t cp : folded) {
    if (is_space(cp)) {
      if (out.empty() || out.back() == 0x20) continue;
      out.push_back(0x20);
    } else {
      out.push_back(cp);
    }
  }
  while (!out.empty() && out.back() == 0x20) out.pop_back();
  return utf8_encode(out);
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  }
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

}  // namespace crk
