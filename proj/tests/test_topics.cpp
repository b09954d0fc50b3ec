#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oovcat/topics.hpp"

using namespace oovcat;

namespace {

profile::OovProfile make_profile(const std::string& word,
                                 const std::vector<std::string>& tweet_texts) {
    profile::OovProfile p;
    p.word = word;
    for (const auto& text : tweet_texts) {
        corpus::Tweet tw;
        tw.month = "2013-01";
        tw.raw_text = text;
        tw.tokens = corpus::tokenize(text);
        p.tweets.push_back(tw);
        std::vector<std::size_t> occ;
        for (const auto& t : tw.tokens)
            if (corpus::lowercase(t.text) == word) occ.push_back(t.index);
        p.occurrences.push_back(occ);
    }
    return p;
}

// Two disjoint vocabularies so topic recovery has an unambiguous answer.
const std::vector<std::string> kFoodWords = {"pizza", "pasta", "burger", "salad",
                                             "cheese", "bread", "sauce", "grill"};
const std::vector<std::string> kBallWords = {"match", "goal", "score", "team",
                                             "coach", "field", "kick", "league"};

std::vector<profile::OovProfile> two_topic_profiles(std::size_t docs_per_topic,
                                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<profile::OovProfile> profiles;
    for (std::size_t d = 0; d < docs_per_topic * 2; ++d) {
        const auto& pool = d < docs_per_topic ? kFoodWords : kBallWords;
        std::vector<std::string> texts;
        for (int t = 0; t < 3; ++t) {
            std::string s = "w" + std::to_string(d);
            for (int i = 0; i < 8; ++i) s += " " + pool[rng() % pool.size()];
            texts.push_back(s);
        }
        profiles.push_back(make_profile("w" + std::to_string(d), texts));
    }
    return profiles;
}

}  // namespace

TEST_CASE("build_documents drops the oov word and rare words") {
    auto p = make_profile("zzz", {"zzz pizza pizza rareword", "zzz pasta pizza"});
    auto docs = topics::build_documents({p}, 2);
    REQUIRE(docs.docs.size() == 1);
    CHECK(docs.doc_names[0] == "zzz");
    // pizza appears 3x (kept), pasta 1x and rareword 1x (dropped), zzz excluded
    CHECK(docs.vocab == std::vector<std::string>{"pizza"});
    CHECK(docs.docs[0].size() == 3);
    for (auto w : docs.docs[0]) CHECK(docs.vocab[w] == "pizza");
}

TEST_CASE("build_documents fails when nothing survives the count threshold") {
    auto p = make_profile("zzz", {"zzz alone"});
    CHECK_THROWS(topics::build_documents({p}, 5));
}

TEST_CASE("gibbs sampling conserves token counts") {
    auto profiles = two_topic_profiles(10, 3);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 4;
    cfg.iterations = 60;
    cfg.burn_in = 20;
    cfg.sample_lag = 5;
    cfg.seed = 9;
    auto model = topics::LdaModel::train(docs, cfg);

    std::size_t total_tokens = 0;
    for (const auto& d : docs.docs) total_tokens += d.size();

    // doc-topic rows sum to each document's length
    std::size_t dt_total = 0;
    for (std::size_t d = 0; d < docs.docs.size(); ++d) {
        std::size_t row = std::accumulate(model.doc_topic_counts()[d].begin(),
                                          model.doc_topic_counts()[d].end(), std::size_t{0});
        CHECK(row == docs.docs[d].size());
        dt_total += row;
    }
    CHECK(dt_total == total_tokens);

    // topic-word mass equals topic totals and the corpus size
    std::size_t tw_total = 0;
    for (std::size_t k = 0; k < cfg.topics; ++k) {
        std::size_t row = std::accumulate(model.topic_word_counts()[k].begin(),
                                          model.topic_word_counts()[k].end(), std::size_t{0});
        CHECK(row == model.topic_totals()[k]);
        tw_total += row;
    }
    CHECK(tw_total == total_tokens);
}

TEST_CASE("distributions are proper") {
    auto profiles = two_topic_profiles(6, 4);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 3;
    cfg.iterations = 40;
    cfg.burn_in = 10;
    cfg.sample_lag = 5;
    cfg.seed = 2;
    auto model = topics::LdaModel::train(docs, cfg);
    for (std::size_t d = 0; d < model.doc_count(); ++d) {
        auto th = model.doc_topic_distribution(d);
        REQUIRE(th.size() == 3);
        double s = std::accumulate(th.begin(), th.end(), 0.0);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
        for (double v : th) CHECK(v > 0.0);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        auto phi = model.topic_word_distribution(k);
        double s = std::accumulate(phi.begin(), phi.end(), 0.0);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("two disjoint vocabularies are recovered at K=2") {
    auto profiles = two_topic_profiles(20, 5);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 2;
    cfg.alpha = 0.5;  // short documents: the 50/K default would drown the signal
    cfg.iterations = 300;
    cfg.burn_in = 100;
    cfg.sample_lag = 10;
    cfg.seed = 7;
    auto model = topics::LdaModel::train(docs, cfg);

    // identify which topic owns the food vocabulary
    auto phi0 = model.topic_word_distribution(0);
    double food_mass0 = 0;
    for (const auto& w : kFoodWords) {
        auto it = std::find(docs.vocab.begin(), docs.vocab.end(), w);
        REQUIRE(it != docs.vocab.end());
        food_mass0 += phi0[std::size_t(it - docs.vocab.begin())];
    }
    std::size_t food_topic = food_mass0 > 0.5 ? 0 : 1;

    // every document is dominated by its planted topic
    std::size_t correct = 0;
    for (std::size_t d = 0; d < model.doc_count(); ++d) {
        auto th = model.doc_topic_distribution(d);
        std::size_t planted = d < 20 ? food_topic : 1 - food_topic;
        if (th[planted] > 0.9) ++correct;
    }
    CHECK(double(correct) / double(model.doc_count()) > 0.9);
}

TEST_CASE("training is deterministic under a fixed seed") {
    auto profiles = two_topic_profiles(8, 6);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 3;
    cfg.iterations = 50;
    cfg.burn_in = 10;
    cfg.sample_lag = 5;
    cfg.seed = 123;
    auto a = topics::LdaModel::train(docs, cfg);
    auto b = topics::LdaModel::train(docs, cfg);
    CHECK(a.doc_topic_counts() == b.doc_topic_counts());
    CHECK(a.topic_word_counts() == b.topic_word_counts());
    for (std::size_t d = 0; d < a.doc_count(); ++d)
        CHECK(a.doc_topic_distribution(d) == b.doc_topic_distribution(d));

    cfg.seed = 124;
    auto c = topics::LdaModel::train(docs, cfg);
    CHECK(a.doc_topic_counts() != c.doc_topic_counts());
}

TEST_CASE("save/load round trip preserves distributions bit-exactly") {
    auto profiles = two_topic_profiles(5, 8);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 4;
    cfg.iterations = 30;
    cfg.burn_in = 10;
    cfg.sample_lag = 5;
    cfg.seed = 11;
    auto model = topics::LdaModel::train(docs, cfg);
    model.save("lda_test.tmp");
    auto back = topics::LdaModel::load("lda_test.tmp");
    std::remove("lda_test.tmp");

    CHECK(back.topic_count() == model.topic_count());
    CHECK(back.vocab() == model.vocab());
    CHECK(back.doc_names() == model.doc_names());
    for (std::size_t d = 0; d < model.doc_count(); ++d)
        CHECK(back.doc_topic_distribution(d) == model.doc_topic_distribution(d));
    for (std::size_t k = 0; k < model.topic_count(); ++k)
        CHECK(back.topic_word_distribution(k) == model.topic_word_distribution(k));
    // fold-in works identically on the loaded model
    std::vector<std::string> bag = {"pizza", "pasta", "burger", "pizza"};
    CHECK(back.fold_in(bag, 99) == model.fold_in(bag, 99));
}

TEST_CASE("fold-in assigns unseen documents to the right topic") {
    auto profiles = two_topic_profiles(20, 10);
    auto docs = topics::build_documents(profiles, 1);
    topics::GibbsConfig cfg;
    cfg.topics = 2;
    cfg.alpha = 0.5;  // small bags need weak smoothing to show their topic
    cfg.iterations = 200;
    cfg.burn_in = 50;
    cfg.sample_lag = 10;
    cfg.seed = 21;
    auto model = topics::LdaModel::train(docs, cfg);

    std::vector<std::string> food_bag = {"pizza", "pasta", "cheese", "bread",
                                         "burger", "salad", "pizza", "sauce"};
    std::vector<std::string> ball_bag = {"goal", "match", "team", "score",
                                         "kick", "coach", "league", "field"};
    auto tf = model.fold_in(food_bag, 1);
    auto tb = model.fold_in(ball_bag, 1);
    REQUIRE(tf.size() == 2);
    std::size_t food_topic = tf[0] > tf[1] ? 0 : 1;
    CHECK(tf[food_topic] > 0.7);
    CHECK(tb[1 - food_topic] > 0.7);
    // unknown-only bag degrades to near-uniform rather than throwing
    auto tu = model.fold_in({"qqqqq", "zzzzz"}, 1);
    CHECK(std::accumulate(tu.begin(), tu.end(), 0.0) == doctest::Approx(1.0));
}
