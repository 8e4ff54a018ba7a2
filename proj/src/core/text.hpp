#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace atant::text {

/// Case-fold and normalize whitespace.
///
/// The fold is the normative one for keyword matching: ASCII letters,
/// Latin-1 supplement (U+00C0..U+00DE except U+00D7) and the Latin
/// Extended-A case pairs (excluding U+0130/U+0131) are lowered; any run
/// of Unicode whitespace collapses to a single space; the result is
/// trimmed. Everything else passes through unchanged.
std::string fold(std::string_view s);

/// True iff folded `needle` occurs as a substring of folded `haystack`.
/// An empty needle matches everything.
bool contains_fold(std::string_view haystack, std::string_view needle);

/// Folded alphanumeric tokens. Apostrophes split; the clitic fragments
/// they leave behind ("s", "t", "m", ...) surface as their own tokens
/// and are handled by the stopword list.
std::vector<std::string> tokenize(std::string_view s);

/// tokenize() minus stopwords.
std::vector<std::string> content_tokens(std::string_view s);

bool is_stopword(std::string_view token);

/// Canonical form for trace subjects and predicates: fold, drop
/// possessive determiners (my/our/your/...) and possessive clitics,
/// collapse to single spaces.
std::string normalize_slot(std::string_view s);

/// Canonical form for query strings and predicted queries: folded
/// tokens joined by single spaces, stopwords kept, clitic fragments
/// dropped.
std::string normalize_query(std::string_view s);

/// Join tokens with single spaces.
std::string join(const std::vector<std::string>& tokens);

}  // namespace atant::text
