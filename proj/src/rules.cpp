#include "oovcat/rules.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace oovcat::rules {

namespace {

inline bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }
inline bool is_alpha(unsigned char c) { return std::isalpha(c) != 0; }

constexpr const char* kEyes = ":;=8xX";
constexpr const char* kNoses = "-'^";
constexpr const char* kMouths = ")(/\\|DdPpOo3*";

inline bool in(const char* set, char c) {
    for (; *set; ++set)
        if (*set == c) return true;
    return false;
}

struct Run {
    std::size_t start;
    std::size_t length;  // >= 2, same letter repeated
};

}  // namespace

bool classify_emoticon(const std::string& t) {
    if (t.size() < 2) return false;
    if (std::none_of(t.begin(), t.end(), [](char c) { return is_alnum((unsigned char)c); }))
        return true;
    auto shape = [](char a, char b, char c, std::size_t n) {
        if (n == 2) return (in(kEyes, a) && in(kMouths, b)) || (in(kMouths, a) && in(kEyes, b));
        return (in(kEyes, a) && in(kNoses, b) && in(kMouths, c)) ||
               (in(kMouths, a) && in(kNoses, b) && in(kEyes, c));
    };
    if (t.size() == 2) return shape(t[0], t[1], '\0', 2);
    if (t.size() == 3) return shape(t[0], t[1], t[2], 3);
    return false;
}

RuleVerdict classify_lengthening(const std::string& token_text,
                                 const lexicon::Dictionary& dict) {
    RuleVerdict verdict;
    const std::string word = corpus::lowercase(token_text);
    if (!std::any_of(word.begin(), word.end(),
                     [](char c) { return is_alpha((unsigned char)c); }))
        return verdict;

    std::vector<Run> runs;
    for (std::size_t i = 0; i < word.size();) {
        std::size_t j = i + 1;
        while (j < word.size() && word[j] == word[i] && is_alpha((unsigned char)word[i])) ++j;
        if (j - i >= 2) runs.push_back({i, j - i});
        i = j;
    }
    if (runs.empty()) return verdict;

    std::size_t combos = 1;
    for (const auto& r : runs) {
        combos *= r.length;
        if (combos > kReductionCap) {
            verdict.enumeration_capped = true;
            return verdict;
        }
    }

    // Enumerate every choice of kept length per run (original .. 1) and
    // keep the dictionary hit with the fewest deletions.
    std::string best;
    std::size_t best_deletions = std::string::npos;
    std::vector<std::size_t> keep(runs.size());
    std::function<void(std::size_t)> rec = [&](std::size_t ri) {
        if (ri == runs.size()) {
            std::string candidate;
            candidate.reserve(word.size());
            std::size_t deletions = 0, pos = 0;
            for (std::size_t k = 0; k < runs.size(); ++k) {
                candidate.append(word, pos, runs[k].start - pos);
                candidate.append(keep[k], word[runs[k].start]);
                deletions += runs[k].length - keep[k];
                pos = runs[k].start + runs[k].length;
            }
            candidate.append(word, pos, std::string::npos);
            if (deletions == 0) return;  // the surface form itself, known OOV
            if (dict.contains(candidate)) {
                if (deletions < best_deletions ||
                    (deletions == best_deletions && candidate < best)) {
                    best_deletions = deletions;
                    best = candidate;
                }
            }
            return;
        }
        for (std::size_t len = runs[ri].length; len >= 1; --len) {
            keep[ri] = len;
            rec(ri + 1);
        }
    };
    rec(0);

    if (best_deletions != std::string::npos) {
        verdict.category = lexicon::Category::lengthening;
        verdict.normalized_form = best;
    }
    return verdict;
}

StageResult rule_stage(const std::vector<std::string>& oov_words,
                       const lexicon::Dictionary& dict) {
    StageResult result;
    for (const auto& w : oov_words) {
        RuleVerdict v;
        if (classify_emoticon(w)) {
            v.category = lexicon::Category::emoticon;
        } else {
            v = classify_lengthening(w, dict);
            if (v.enumeration_capped) result.capped_tokens.push_back(w);
        }
        result.verdicts[w] = std::move(v);
    }
    return result;
}

}  // namespace oovcat::rules
