#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oovcat/corpus.hpp"
#include "oovcat/lexicon.hpp"

namespace oovcat::synth {

struct CategorySpec {
    std::vector<std::string> words;   // planted OOV words; may be empty when generating
    std::size_t generate = 0;         // extra random words to invent
    std::size_t min_length = 5, max_length = 8;  // for generated words
    double other_oov_rate = 0.0;      // mean co-occurring planted OOVs per tweet
    std::string position = "middle";  // left | middle | right
    std::size_t topic = 0;            // topic pool index
    double hashtag_rate = 0.0;
    double mention_rate = 0.0;
    double retweet_rate = 0.0;
};

struct GeneratorSpec {
    std::uint64_t seed = 1;
    std::vector<std::string> months = {"2013-01", "2013-02", "2013-03"};
    std::size_t tweets_per_word = 40;
    std::size_t words_per_tweet = 9;
    std::vector<std::vector<std::string>> topic_pools;  // dictionary words
    std::size_t extra_oov_count = 30;  // shared pool the co-occurrence draws use
    std::map<std::string, CategorySpec> categories;     // category name -> spec

    static GeneratorSpec load(const std::string& path);
    void save(const std::string& path) const;
    // Six planted categories with distinct length/position/co-occurrence/
    // topic signatures; drives the quickstart pipeline.
    static GeneratorSpec demo(std::size_t ml_words_per_category = 55);
};

struct SynthResult {
    std::vector<corpus::Tweet> tweets;
    lexicon::LabelSet labels;  // every planted word
};

SynthResult generate(const GeneratorSpec& spec);

}  // namespace oovcat::synth
