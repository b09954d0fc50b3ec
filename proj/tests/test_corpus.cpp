#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>

#include "oovcat/corpus.hpp"

using namespace oovcat;
using corpus::TokenKind;

namespace {

std::vector<std::string> texts(const std::vector<corpus::Token>& toks) {
    std::vector<std::string> out;
    for (const auto& t : toks) out.push_back(t.text);
    return out;
}

std::string join(const std::vector<corpus::Token>& toks) {
    std::string s;
    for (const auto& t : toks) {
        if (!s.empty()) s += ' ';
        s += t.text;
    }
    return s;
}

std::string temp_file(const std::string& content) {
    static int counter = 0;
    std::string path = "corpus_test_" + std::to_string(counter++) + ".tmp";
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("tokenize splits on delimiters and keeps clusters") {
    auto toks = corpus::tokenize("omg :) #win");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].text == "omg");
    CHECK(toks[0].kind == TokenKind::word);
    CHECK(toks[1].text == ":)");
    CHECK(toks[1].kind == TokenKind::punct_cluster);
    CHECK(toks[2].text == "#win");
    CHECK(toks[2].kind == TokenKind::hashtag);
}

TEST_CASE("tokenize retweet and mention") {
    auto toks = corpus::tokenize("RT @bob: lol");
    REQUIRE(toks.size() == 4);
    CHECK(toks[0].kind == TokenKind::retweet_marker);
    CHECK(toks[1].text == "@bob");
    CHECK(toks[1].kind == TokenKind::mention);
    CHECK(toks[2].text == ":");
    CHECK(toks[2].kind == TokenKind::punct_cluster);
    CHECK(toks[3].text == "lol");
    CHECK(toks[3].kind == TokenKind::word);
}

// independent character-class reference for simple inputs: split on
// whitespace, then split alpha runs from punctuation runs
static std::vector<std::string> reference_tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int cur_class = -1;  // 0 alpha, 1 punct
    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : s) {
        if (std::isspace((unsigned char)c)) {
            flush();
            cur_class = -1;
            continue;
        }
        int cls = std::isalnum((unsigned char)c) ? 0 : 1;
        if (cls != cur_class) flush();
        cur_class = cls;
        cur += c;
    }
    flush();
    return out;
}

TEST_CASE("tokenize matches character-class reference on plain text") {
    for (const char* s : {"nooo way!!", "hello world", "a b  c", "wow... ok", "x  !!"}) {
        CHECK(texts(corpus::tokenize(s)) == reference_tokenize(s));
    }
}

TEST_CASE("emoticons with letters stay joined") {
    auto toks = corpus::tokenize("great :D haha");
    REQUIRE(toks.size() == 3);
    CHECK(toks[1].text == ":D");
    CHECK(toks[1].kind == TokenKind::word);
    // long punctuation runs beat the 2-char emoticon match
    auto toks2 = corpus::tokenize("fun :)))");
    REQUIRE(toks2.size() == 2);
    CHECK(toks2[1].text == ":)))");
    CHECK(toks2[1].kind == TokenKind::punct_cluster);
}

TEST_CASE("urls and numbers") {
    auto toks = corpus::tokenize("see http://x.co/ab at 10,000 now");
    REQUIRE(toks.size() == 5);
    CHECK(toks[1].kind == TokenKind::url);
    CHECK(toks[3].text == "10,000");
    CHECK(toks[3].kind == TokenKind::number);
}

TEST_CASE("empty and whitespace-only input") {
    CHECK(corpus::tokenize("").empty());
    CHECK(corpus::tokenize("   \t \n").empty());
}

TEST_CASE("tokenization is idempotent and lossless") {
    std::vector<std::string> samples = {
        "RT @ann: omg!!! so goood :))) #hype http://t.co/xyz",
        "this, right here... is :D nooo 42 times",
        "@b #tag #tag2 ;) x",
        "don't stop y'all",
    };
    for (const auto& s : samples) {
        auto toks = corpus::tokenize(s);
        // idempotence over space-join
        CHECK(texts(corpus::tokenize(join(toks))) == texts(toks));
        // losslessness: non-whitespace characters all appear, in order
        std::string flat, orig;
        for (const auto& t : toks) flat += t.text;
        for (char c : s)
            if (!std::isspace((unsigned char)c)) orig += c;
        CHECK(flat == orig);
    }
}

TEST_CASE("kind is a pure function of text and index") {
    for (const char* s : {"RT @bob: lol :) #x http://a.b 12 rt !!", "rt says rt"}) {
        auto toks = corpus::tokenize(s);
        for (const auto& t : toks) CHECK(corpus::classify_kind(t.text, t.index) == t.kind);
    }
    // "rt" mid-tweet is a plain word
    auto toks = corpus::tokenize("say rt now");
    CHECK(toks[1].kind == TokenKind::word);
}

TEST_CASE("load_corpus reads well-formed records and skips malformed ones") {
    auto path = temp_file(
        R"({"id":"1","ts":"2013-01","text":"hello world"})" "\n"
        R"x({"id":"2","ts":"2013-02","text":"lol :)"})x" "\n"
        "this is not json\n"
        R"({"id":"3","ts":"2013-02","text":"ok then"})" "\n");
    corpus::LoadReport rep;
    auto tweets = corpus::load_corpus_vec(path, &rep);
    CHECK(rep.loaded == 3);
    CHECK(rep.skipped == 1);
    REQUIRE(tweets.size() == 3);
    CHECK(tweets[1].tokens[1].text == ":)");
    std::remove(path.c_str());
}

TEST_CASE("load_corpus fails on unreadable file and mostly-bad input") {
    CHECK_THROWS(corpus::load_corpus_vec("/nonexistent/file.jsonl"));
    auto path = temp_file("garbage\nmore garbage\n{\"id\":\"1\",\"ts\":\"2013-01\",\"text\":\"hi there\"}\n");
    CHECK_THROWS(corpus::load_corpus_vec(path));
    std::remove(path.c_str());
}

TEST_CASE("load_corpus accepts empty file with zero tweets") {
    auto path = temp_file("");
    corpus::LoadReport rep;
    auto tweets = corpus::load_corpus_vec(path, &rep);
    CHECK(tweets.empty());
    CHECK(rep.loaded == 0);
    std::remove(path.c_str());
}

TEST_CASE("load_corpus aligned pos tags") {
    auto path = temp_file(R"({"id":"1","ts":"2013-01","text":"so cool","pos":["R","A"]})" "\n");
    auto tweets = corpus::load_corpus_vec(path);
    REQUIRE(tweets.size() == 1);
    CHECK(tweets[0].tokens[0].pos == "R");
    CHECK(tweets[0].tokens[1].pos == "A");
    std::remove(path.c_str());
}

TEST_CASE("corpus_stats lowercases word vocabulary and counts months") {
    std::vector<corpus::Tweet> tweets;
    const std::vector<std::pair<std::string, std::string>> raw = {
        {"2013-01", "LOL again"}, {"2013-01", "lol :)"}, {"2013-02", "fresh stuff"}};
    for (const auto& [month, text] : raw) {
        corpus::Tweet tw;
        tw.month = month;
        tw.raw_text = text;
        tw.tokens = corpus::tokenize(text);
        tweets.push_back(tw);
    }
    auto st = corpus::corpus_stats(tweets);
    CHECK(st.total_tweets == 3);
    CHECK(st.vocabulary.at("lol") == 2);
    CHECK(st.months == std::vector<std::string>{"2013-01", "2013-02"});
    std::size_t month_total = 0;
    for (auto& [m, c] : st.month_counts) month_total += c;
    CHECK(month_total == st.total_tweets);

    CHECK(corpus::corpus_stats({}).total_tweets == 0);
}

TEST_CASE("write_corpus round-trips through load_corpus") {
    std::vector<corpus::Tweet> tweets;
    corpus::Tweet tw;
    tw.id = "42";
    tw.month = "2013-03";
    tw.raw_text = "RT @me: haha :) #yes";
    tw.tokens = corpus::tokenize(tw.raw_text);
    tweets.push_back(tw);
    auto path = temp_file("");
    corpus::write_corpus(path, tweets);
    auto back = corpus::load_corpus_vec(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].raw_text == tw.raw_text);
    CHECK(back[0].month == tw.month);
    CHECK(back[0].tokens.size() == tw.tokens.size());
    std::remove(path.c_str());
}
