#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oovcat/learn.hpp"
#include "oovcat/lexicon.hpp"
#include "oovcat/profile.hpp"
#include "oovcat/topics.hpp"

namespace oovcat::features {

using profile::OovProfile;

// The 21-tag reference POS set (CMU-style one-letter symbols).
std::vector<std::string> default_pos_tags();

// Suffix/shape heuristics for corpora that arrive without POS tags.
void apply_baseline_pos_tags(corpus::Tweet& tweet, const lexicon::Dictionary& dict);

struct Schema {
    std::vector<std::string> pos_tags;
    std::vector<std::string> ne_categories;
    std::vector<std::string> liwc_categories;
    std::size_t topics = 0;

    std::vector<std::string> names() const;
    std::vector<std::string> families() const;  // aligned with names()
    std::size_t size() const { return names().size(); }
};

std::string family_of(const std::string& feature_name);

// entropy/KL in bits with distribution validation (components >= 0,
// sum within 1e-9 of one).
double entropy(const std::vector<double>& p);

struct LanguageModel {
    std::map<std::string, double> probability;  // lowercase word -> p(w|C)
};

LanguageModel corpus_language_model(const std::vector<corpus::Tweet>& tweets);

// KL(p(w|D_h) || p(w|C)) in bits over the tweets containing the hashtag.
double hashtag_clarity(const std::string& hashtag, const LanguageModel& lm,
                       const std::vector<corpus::Tweet>& tweets);

// clarity for every hashtag in the corpus
std::map<std::string, double> build_clarity_index(const std::vector<corpus::Tweet>& tweets);

std::vector<double> pos_tag_distribution(const OovProfile& prof,
                                         const std::vector<std::string>& tagset);
double pos_diversity(const OovProfile& prof);
double word_diversity(const OovProfile& prof);
double avg_hashtag_clarity(const OovProfile& prof,
                           const std::map<std::string, double>& clarity_index);
// {mean hashtags/tweet, mean mentions/tweet, retweet fraction}
std::vector<double> entity_presence(const OovProfile& prof);
double length_feature(const std::string& word);
// K topic probabilities plus TopicDiv appended
std::vector<double> topic_features(const OovProfile& prof, const topics::LdaModel& lda,
                                   bool allow_fold_in, std::uint64_t fold_in_seed);
// {frac 0, frac 1, frac 2, frac >=3, mean}
std::vector<double> cooccurring_oov_features(const OovProfile& prof,
                                             const lexicon::Dictionary& dict);
// {oov d1, oov d2, oov d>=3, iv d1, iv d2, iv d>=3}
std::vector<double> proximity_features(const OovProfile& prof,
                                       const lexicon::Dictionary& dict);
// {mean, left, middle, right}
std::vector<double> position_feature(const OovProfile& prof);
// {hashtag pos, hashtag present, mention pos, mention present}
std::vector<double> entity_position_features(const OovProfile& prof);

struct FeatureContext {
    const lexicon::Dictionary* dict = nullptr;
    const lexicon::CategoryLexicon* liwc = nullptr;
    const lexicon::CategoryLexicon* gazetteer = nullptr;
    const topics::LdaModel* lda = nullptr;
    const std::map<std::string, double>* clarity_index = nullptr;
    bool allow_fold_in = true;
    std::uint64_t fold_in_seed = 1;
    std::set<std::string> families;  // empty = all three
};

std::vector<double> featurize(const OovProfile& prof, const Schema& schema,
                              const FeatureContext& ctx);

// CSV with header word,label,<feature names>; %.17g values round-trip
// bit-exactly. Labels may be empty for unlabeled rows.
void export_matrix(const std::string& path, const Schema& schema,
                   const std::vector<std::string>& words,
                   const std::vector<std::optional<lexicon::Category>>& labels,
                   const std::vector<std::vector<double>>& rows);

struct ImportedMatrix {
    std::vector<std::string> words;
    std::vector<std::optional<lexicon::Category>> labels;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;

    // Rows with labels among the ML categories become a learn::Dataset.
    learn::Dataset to_dataset() const;
};

ImportedMatrix import_matrix(const std::string& path);

// category x month grid of mean other-OOV count per containing tweet;
// absent cells stay unset.
using TimeseriesGrid = std::map<std::string, std::map<std::string, double>>;
TimeseriesGrid cooccurrence_timeseries(const lexicon::LabelSet& labels,
                                       const std::vector<corpus::Tweet>& tweets,
                                       const lexicon::Dictionary& dict);
void export_timeseries(const std::string& path, const TimeseriesGrid& grid);

}  // namespace oovcat::features
