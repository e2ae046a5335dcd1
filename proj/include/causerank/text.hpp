#pragma once
// UTF-8 text normalization and small string helpers.
//
// Lemmas and predicates are normalized before any comparison so that text
// produced by different upstream tools matches the causality pool. The
// normalization is a compact NFKC subset targeted at the width and voicing
// variants that actually occur in Japanese NLP pipelines:
//   - ideographic space U+3000 -> ASCII space
//   - fullwidth ASCII (U+FF01..U+FF5E) -> ASCII
//   - halfwidth katakana (U+FF61..U+FF9F) -> fullwidth, composing voiced and
//     semi-voiced sound marks where a precomposed kana exists
//   - leading/trailing whitespace trimmed, internal runs collapsed to one space

#include <string>
#include <string_view>
#include <vector>

namespace crk {

// Decodes UTF-8 into codepoints. Throws Error(parse) on malformed input.
std::vector<char32_t> utf8_decode(std::string_view text);

std::string utf8_encode(const std::vector<char32_t>& codepoints);

// Width/voicing folding + whitespace normalization as described above.
std::string normalize_text(std::string_view text);

// ASCII-only lowercase (non-ASCII bytes pass through).
std::string ascii_lower(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

// Whitespace tokenizer (runs of blanks collapse, no empty tokens).
std::vector<std::string> split_ws(std::string_view text);

}  // namespace crk
