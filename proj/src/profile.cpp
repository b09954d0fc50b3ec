#include "oovcat/profile.hpp"

#include <random>
#include <stdexcept>

namespace oovcat::profile {

namespace {

std::vector<std::size_t> occurrences_of(const corpus::Tweet& tw, const std::string& word) {
    std::vector<std::size_t> idx;
    for (const auto& tok : tw.tokens) {
        if ((tok.kind == corpus::TokenKind::word ||
             tok.kind == corpus::TokenKind::punct_cluster) &&
            corpus::lowercase(tok.text) == word)
            idx.push_back(tok.index);
    }
    return idx;
}

}  // namespace

OovProfile sample_profile(const std::string& word,
                          const std::vector<corpus::Tweet>& tweets,
                          std::size_t cap, std::uint64_t seed) {
    if (cap == 0) throw std::runtime_error("sample_profile: cap must be >= 1");
    OovProfile prof;
    prof.word = corpus::lowercase(word);

    std::mt19937_64 rng(seed);
    std::size_t seen = 0;  // containing tweets encountered so far
    for (const auto& tw : tweets) {
        auto occ = occurrences_of(tw, prof.word);
        if (occ.empty()) continue;
        ++seen;
        if (prof.tweets.size() < cap) {
            prof.tweets.push_back(tw);
            prof.occurrences.push_back(std::move(occ));
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, seen - 1);
            std::size_t j = pick(rng);
            if (j < cap) {
                prof.tweets[j] = tw;
                prof.occurrences[j] = std::move(occ);
            }
        }
    }
    if (seen == 0)
        throw std::runtime_error("sample_profile: word not found in corpus: " + prof.word);
    return prof;
}

}  // namespace oovcat::profile
