#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oovcat/profile.hpp"

namespace oovcat::topics {

struct DocumentCollection {
    std::vector<std::string> vocab;              // index -> word
    std::map<std::string, std::size_t> vocab_index;
    std::vector<std::vector<std::size_t>> docs;  // bags of word indices
    std::vector<std::string> doc_names;          // the OOV word per document
};

// One document per profile: the concatenated lowercased word tokens of
// its tweets, minus the OOV word itself and words below vocab_min_count.
DocumentCollection build_documents(const std::vector<profile::OovProfile>& profiles,
                                   std::size_t vocab_min_count);

struct GibbsConfig {
    std::size_t topics = 10;
    double alpha = -1.0;  // < 0 means 50/K
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::size_t burn_in = 200;
    std::size_t sample_lag = 10;
    std::uint64_t seed = 1;
};

class LdaModel {
public:
    static LdaModel train(const DocumentCollection& docs, const GibbsConfig& cfg);

    std::size_t topic_count() const { return K_; }
    std::size_t doc_count() const { return doc_topic_.size(); }
    std::size_t vocab_size() const { return vocab_.size(); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const std::vector<std::string>& vocab() const { return vocab_; }
    const std::vector<std::string>& doc_names() const { return doc_names_; }

    // (n_dk + alpha)/(n_d + K alpha), averaged over retained samples.
    std::vector<double> doc_topic_distribution(std::size_t doc_index) const;
    // (n_kw + beta)/(n_k + V beta) from the final counts.
    std::vector<double> topic_word_distribution(std::size_t topic) const;

    // Gibbs sampling of an unseen bag of words against frozen topic-word
    // counts (50 iterations); returns a topic mixture.
    std::vector<double> fold_in(const std::vector<std::string>& words,
                                std::uint64_t seed, std::size_t iterations = 50) const;

    // Final-sweep raw counts, exposed for the conservation invariants.
    const std::vector<std::vector<std::size_t>>& doc_topic_counts() const { return doc_topic_; }
    const std::vector<std::vector<std::size_t>>& topic_word_counts() const { return topic_word_; }
    const std::vector<std::size_t>& topic_totals() const { return topic_total_; }

    void save(const std::string& path) const;
    static LdaModel load(const std::string& path);

private:
    std::size_t K_ = 0;
    double alpha_ = 0.0, beta_ = 0.0;
    std::vector<std::string> vocab_;
    std::map<std::string, std::size_t> vocab_index_;
    std::vector<std::string> doc_names_;
    std::vector<std::vector<std::size_t>> doc_topic_;   // D x K
    std::vector<std::vector<std::size_t>> topic_word_;  // K x V
    std::vector<std::size_t> topic_total_;              // K
    std::vector<std::size_t> doc_len_;                  // D
    // accumulated theta over retained samples
    std::vector<std::vector<double>> theta_sum_;  // D x K
    std::size_t samples_ = 0;
};

}  // namespace oovcat::topics
