#include "oovcat/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace oovcat::corpus {

namespace {

inline bool is_space(unsigned char c) { return std::isspace(c) != 0; }
// Bytes >= 0x80 (UTF-8 continuation/lead) are treated as letters so that
// non-ASCII words stay in one token.
inline bool is_alpha(unsigned char c) { return std::isalpha(c) != 0 || c >= 0x80; }
inline bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }
inline bool is_alnum(unsigned char c) { return is_alpha(c) || is_digit(c); }
inline bool is_word_char(unsigned char c) { return is_alnum(c) || c == '_'; }

bool starts_with(const std::string& s, std::size_t i, const char* prefix) {
    for (std::size_t j = 0; prefix[j]; ++j) {
        if (i + j >= s.size() || std::tolower((unsigned char)s[i + j]) != prefix[j])
            return false;
    }
    return true;
}

constexpr const char* kEyes = ":;=8xX";
constexpr const char* kNoses = "-'^";
constexpr const char* kMouths = ")(/\\|DdPpOo3*";

inline bool in(const char* set, char c) {
    for (; *set; ++set)
        if (*set == c) return true;
    return false;
}

// Length of an eye-[nose]-mouth (or mouth-[nose]-eye) match at position i,
// or 0. Matches are 2 or 3 characters.
std::size_t emoticon_match_len(const std::string& s, std::size_t i) {
    auto at = [&](std::size_t k) -> char { return i + k < s.size() ? s[i + k] : '\0'; };
    char a = at(0), b = at(1), c = at(2);
    if (in(kEyes, a)) {
        if (in(kNoses, b) && in(kMouths, c)) return 3;
        if (in(kMouths, b)) return 2;
    }
    if (in(kMouths, a)) {
        if (in(kNoses, b) && in(kEyes, c)) return 3;
        if (in(kEyes, b)) return 2;
    }
    return 0;
}

std::size_t punct_run_len(const std::string& s, std::size_t i) {
    std::size_t j = i;
    while (j < s.size() && !is_space((unsigned char)s[j]) && !is_alnum((unsigned char)s[j])) ++j;
    return j - i;
}

std::size_t url_len(const std::string& s, std::size_t i) {
    if (!starts_with(s, i, "http://") && !starts_with(s, i, "https://") &&
        !starts_with(s, i, "www."))
        return 0;
    std::size_t j = i;
    while (j < s.size() && !is_space((unsigned char)s[j])) ++j;
    return j - i;
}

std::size_t number_len(const std::string& s, std::size_t i) {
    if (!is_digit((unsigned char)s[i])) return 0;
    std::size_t j = i;
    while (j < s.size() && is_digit((unsigned char)s[j])) ++j;
    while (j + 1 < s.size() && (s[j] == '.' || s[j] == ',' || s[j] == ':') &&
           is_digit((unsigned char)s[j + 1])) {
        ++j;
        while (j < s.size() && is_digit((unsigned char)s[j])) ++j;
    }
    return j - i;
}

std::size_t word_len(const std::string& s, std::size_t i) {
    if (!is_alpha((unsigned char)s[i]) && s[i] != '_') return 0;
    std::size_t j = i;
    while (j < s.size() && (is_word_char((unsigned char)s[j]))) ++j;
    // allow internal apostrophes: don't, y'all
    while (j + 1 < s.size() && (s[j] == '\'') && is_alpha((unsigned char)s[j + 1])) {
        ++j;
        while (j < s.size() && is_word_char((unsigned char)s[j])) ++j;
    }
    return j - i;
}

bool at_boundary(const std::string& s, std::size_t i) {
    return i >= s.size() || is_space((unsigned char)s[i]);
}

}  // namespace

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return (char)std::tolower(c); });
    return s;
}

const char* kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::word: return "word";
        case TokenKind::hashtag: return "hashtag";
        case TokenKind::mention: return "mention";
        case TokenKind::url: return "url";
        case TokenKind::retweet_marker: return "retweet_marker";
        case TokenKind::punct_cluster: return "punct_cluster";
        case TokenKind::number: return "number";
    }
    return "?";
}

TokenKind classify_kind(const std::string& text, std::size_t index) {
    if (text.size() >= 2 && text[0] == '#' && is_word_char((unsigned char)text[1]))
        return TokenKind::hashtag;
    if (text.size() >= 2 && text[0] == '@' && is_word_char((unsigned char)text[1]))
        return TokenKind::mention;
    if (index == 0 && text.size() == 2 && std::tolower((unsigned char)text[0]) == 'r' &&
        std::tolower((unsigned char)text[1]) == 't')
        return TokenKind::retweet_marker;
    if (starts_with(text, 0, "http://") || starts_with(text, 0, "https://") ||
        starts_with(text, 0, "www."))
        return TokenKind::url;
    if (!text.empty() &&
        std::none_of(text.begin(), text.end(),
                     [](char c) { return is_alnum((unsigned char)c); }))
        return TokenKind::punct_cluster;
    if (number_len(text, 0) == text.size()) return TokenKind::number;
    return TokenKind::word;
}

std::vector<Token> tokenize(const std::string& raw_text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = raw_text.size();
    while (i < n) {
        unsigned char c = (unsigned char)raw_text[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        if ((len = url_len(raw_text, i)) > 0) {
            // taken as-is
        } else if ((c == '@' || c == '#') && i + 1 < n &&
                   is_word_char((unsigned char)raw_text[i + 1])) {
            std::size_t j = i + 1;
            while (j < n && is_word_char((unsigned char)raw_text[j])) ++j;
            len = j - i;
        } else if (!is_alnum(c)) {
            std::size_t pl = punct_run_len(raw_text, i);
            std::size_t el = emoticon_match_len(raw_text, i);
            // an emoticon only swallows trailing letters (":D") when the
            // punctuation run alone would be shorter
            len = el > pl ? el : pl;
        } else if (std::size_t el = emoticon_match_len(raw_text, i);
                   el > 0 && (i == 0 || is_space((unsigned char)raw_text[i - 1])) &&
                   at_boundary(raw_text, i + el)) {
            // standalone "D:", "8)" style
            len = el;
        } else if ((len = number_len(raw_text, i)) > 0) {
            // number run
        } else {
            len = word_len(raw_text, i);
            if (len == 0) len = 1;  // lone '_' or stray byte
        }
        Token t;
        t.text = raw_text.substr(i, len);
        t.index = out.size();
        t.kind = classify_kind(t.text, t.index);
        out.push_back(std::move(t));
        i += len;
    }
    return out;
}

LoadReport load_corpus(const std::string& path,
                       const std::function<void(Tweet&&)>& sink) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    LoadReport rep;
    std::string line;
    std::size_t nonempty = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++nonempty;
        try {
            auto j = nlohmann::json::parse(line);
            Tweet tw;
            tw.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                           : std::to_string(j.at("id").get<long long>());
            tw.month = j.at("ts").get<std::string>();
            tw.raw_text = j.at("text").get<std::string>();
            if (tw.month.size() != 7 || tw.month[4] != '-')
                throw std::runtime_error("bad ts");
            tw.tokens = tokenize(tw.raw_text);
            if (tw.tokens.empty()) throw std::runtime_error("no tokens");
            if (j.contains("pos")) {
                auto& arr = j.at("pos");
                if (arr.size() != tw.tokens.size()) throw std::runtime_error("pos misaligned");
                for (std::size_t k = 0; k < tw.tokens.size(); ++k)
                    if (!arr[k].is_null()) tw.tokens[k].pos = arr[k].get<std::string>();
            }
            if (j.contains("ne")) {
                auto& arr = j.at("ne");
                if (arr.size() != tw.tokens.size()) throw std::runtime_error("ne misaligned");
                for (std::size_t k = 0; k < tw.tokens.size(); ++k)
                    if (!arr[k].is_null()) tw.tokens[k].ne = arr[k].get<std::string>();
            }
            sink(std::move(tw));
            ++rep.loaded;
        } catch (const std::exception&) {
            ++rep.skipped;
        }
    }
    if (nonempty > 0 && rep.skipped * 2 > nonempty)
        throw std::runtime_error("more than half of the records are malformed: " + path);
    return rep;
}

std::vector<Tweet> load_corpus_vec(const std::string& path, LoadReport* report) {
    std::vector<Tweet> tweets;
    auto rep = load_corpus(path, [&](Tweet&& t) { tweets.push_back(std::move(t)); });
    if (report) *report = rep;
    return tweets;
}

CorpusStats corpus_stats(const std::vector<Tweet>& tweets) {
    CorpusStats st;
    for (const auto& tw : tweets) {
        ++st.total_tweets;
        auto [it, fresh] = st.month_counts.try_emplace(tw.month, 0);
        ++it->second;
        if (fresh || std::find(st.months.begin(), st.months.end(), tw.month) == st.months.end())
            if (std::find(st.months.begin(), st.months.end(), tw.month) == st.months.end())
                st.months.push_back(tw.month);
        for (const auto& tok : tw.tokens)
            if (tok.kind == TokenKind::word) ++st.vocabulary[lowercase(tok.text)];
    }
    std::sort(st.months.begin(), st.months.end());
    return st;
}

void write_corpus(const std::string& path, const std::vector<Tweet>& tweets) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& tw : tweets) {
        nlohmann::json j;
        j["id"] = tw.id;
        j["ts"] = tw.month;
        j["text"] = tw.raw_text;
        bool any_pos = false, any_ne = false;
        for (const auto& t : tw.tokens) {
            any_pos |= t.pos.has_value();
            any_ne |= t.ne.has_value();
        }
        if (any_pos) {
            auto arr = nlohmann::json::array();
            for (const auto& t : tw.tokens)
                t.pos ? arr.push_back(*t.pos) : arr.push_back(nullptr);
            j["pos"] = std::move(arr);
        }
        if (any_ne) {
            auto arr = nlohmann::json::array();
            for (const auto& t : tw.tokens)
                t.ne ? arr.push_back(*t.ne) : arr.push_back(nullptr);
            j["ne"] = std::move(arr);
        }
        out << j.dump() << '\n';
    }
}

}  // namespace oovcat::corpus
