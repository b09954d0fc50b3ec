#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oovcat::corpus {

enum class TokenKind {
    word,
    hashtag,
    mention,
    url,
    retweet_marker,
    punct_cluster,
    number,
};

const char* kind_name(TokenKind k);

struct Token {
    std::string text;
    TokenKind kind = TokenKind::word;
    std::optional<std::string> pos;
    std::optional<std::string> ne;
    std::size_t index = 0;
};

struct Tweet {
    std::string id;
    std::string month;  // YYYY-MM
    std::vector<Token> tokens;
    std::string raw_text;
};

struct CorpusStats {
    std::size_t total_tweets = 0;
    std::vector<std::string> months;              // in first-seen order
    std::map<std::string, std::size_t> vocabulary;  // lowercased word tokens
    std::map<std::string, std::size_t> month_counts;
};

// Rule-cascade tokenizer: URLs, mentions, hashtags, emoticons, numbers,
// word runs, punctuation runs. Whitespace separates; within a run of
// non-space characters the cascade decides boundaries. A punctuation run
// longer than the emoticon it starts with wins (":)))" is one cluster).
std::vector<Token> tokenize(const std::string& raw_text);

// Pure function of (text, index); used both by the tokenizer and by the
// kind re-derivation property test.
TokenKind classify_kind(const std::string& text, std::size_t index);

struct LoadReport {
    std::size_t loaded = 0;
    std::size_t skipped = 0;
};

// Line-delimited JSON records: {"id","ts","text"[,"pos","ne"]}.
// pos/ne arrays align with the tokenizer's output for "text".
// Throws std::runtime_error on unreadable files or when more than half
// of the non-empty lines are malformed.
LoadReport load_corpus(const std::string& path,
                       const std::function<void(Tweet&&)>& sink);
std::vector<Tweet> load_corpus_vec(const std::string& path,
                                   LoadReport* report = nullptr);

CorpusStats corpus_stats(const std::vector<Tweet>& tweets);

void write_corpus(const std::string& path, const std::vector<Tweet>& tweets);

std::string lowercase(std::string s);

}  // namespace oovcat::corpus
