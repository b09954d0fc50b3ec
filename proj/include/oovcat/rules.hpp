#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oovcat/lexicon.hpp"

namespace oovcat::rules {

struct RuleVerdict {
    std::optional<lexicon::Category> category;  // emoticon or lengthening
    std::optional<std::string> normalized_form;  // lengthening's dictionary word
    bool enumeration_capped = false;
};

// Emoticons: all-punctuation clusters, or eye-[nose]-mouth shapes in
// either orientation (":D", "(:"), length >= 2.
bool classify_emoticon(const std::string& token_text);

// Cap on candidate reductions enumerated per token.
inline constexpr std::size_t kReductionCap = 4096;

// Reduce repeated-letter runs (length >= 2) toward the dictionary.
// Among dictionary hits, fewest deletions wins; ties break to the
// lexicographically smallest form.
RuleVerdict classify_lengthening(const std::string& token_text,
                                 const lexicon::Dictionary& dict);

struct StageResult {
    std::map<std::string, RuleVerdict> verdicts;
    std::vector<std::string> capped_tokens;  // diagnostics
};

// Emoticon rule first, then lengthening; unmatched words pass through
// with an empty verdict for the ML stage.
StageResult rule_stage(const std::vector<std::string>& oov_words,
                       const lexicon::Dictionary& dict);

}  // namespace oovcat::rules
