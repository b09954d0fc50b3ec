#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oovcat/corpus.hpp"

namespace oovcat::profile {

// The sampled tweet set for one OOV word, the unit all features are
// computed over.
struct OovProfile {
    std::string word;                                   // lowercase
    std::vector<corpus::Tweet> tweets;                  // each contains word
    std::vector<std::vector<std::size_t>> occurrences;  // per tweet, token indices of word
};

// Seeded reservoir sample (without replacement) of the tweets containing
// `word`; all of them when fewer than cap exist. Throws when the word
// does not occur at all.
OovProfile sample_profile(const std::string& word,
                          const std::vector<corpus::Tweet>& tweets,
                          std::size_t cap, std::uint64_t seed);

}  // namespace oovcat::profile
