#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "oovcat/corpus.hpp"

namespace oovcat::lexicon {

// The six-way categorization scheme. The first two are handled by the
// rule stage; the last four by the learned classifier.
enum class Category {
    emoticon,
    lengthening,
    expression,
    shortening_abbrev,
    proper_noun,
    merging,
};

const char* category_name(Category c);
Category category_from_name(const std::string& name);  // throws on unknown

class Dictionary {
public:
    static Dictionary load(const std::string& path);  // one lowercase word per line
    static Dictionary from_words(std::vector<std::string> words);

    bool contains(const std::string& lowercase_word) const {
        return !lowercase_word.empty() && words_.count(lowercase_word) > 0;
    }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// OOV candidacy: word tokens and punctuation clusters only; entities
// (hashtags, mentions, URLs, RT markers) and numbers are never OOV.
bool is_oov(const corpus::Token& token, const Dictionary& dict);

struct OovEntry {
    std::map<std::string, std::size_t> per_month;
    std::size_t total = 0;
};

struct OovInventory {
    std::vector<std::string> months;  // sorted corpus months
    std::map<std::string, OovEntry> entries;
};

OovInventory build_oov_inventory(const std::vector<corpus::Tweet>& tweets,
                                 const Dictionary& dict);

// Words present in every month, by total frequency descending, ties
// lexicographic, truncated to top_n.
std::vector<std::string> select_stable_oov(const OovInventory& inv, std::size_t top_n);

struct CategoryLexicon {
    std::string name;
    // category -> literal patterns and "stem*" prefix patterns
    std::map<std::string, std::vector<std::string>> categories;

    static CategoryLexicon load(const std::string& path);
    bool matches(const std::string& category, const std::string& lowercase_word) const;
    std::vector<std::string> category_names() const;
};

// Per category, fraction of word-kind tokens matching any pattern.
std::map<std::string, double> lexicon_fractions(const std::vector<corpus::Token>& doc_tokens,
                                                const CategoryLexicon& lex);

// Precomputed ne tags take precedence; the gazetteer covers untagged tokens.
std::map<std::string, double> ne_tag_fractions(const std::vector<corpus::Token>& doc_tokens,
                                               const CategoryLexicon& gazetteer);

using LabelSet = std::map<std::string, Category>;

LabelSet load_labels(const std::string& path);  // word TAB category per line
void write_labels(const std::string& path, const LabelSet& labels);

// ratings: items x categories, each row summing to the annotator count.
double fleiss_kappa(const std::vector<std::vector<std::size_t>>& ratings,
                    std::size_t annotators);

}  // namespace oovcat::lexicon
