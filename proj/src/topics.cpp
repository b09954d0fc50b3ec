#include "oovcat/topics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace oovcat::topics {

DocumentCollection build_documents(const std::vector<profile::OovProfile>& profiles,
                                   std::size_t vocab_min_count) {
    if (profiles.empty()) throw std::runtime_error("build_documents: no profiles");
    std::map<std::string, std::size_t> counts;
    std::vector<std::vector<std::string>> raw(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (const auto& tw : profiles[i].tweets) {
            for (const auto& tok : tw.tokens) {
                if (tok.kind != corpus::TokenKind::word) continue;
                auto lw = corpus::lowercase(tok.text);
                if (lw == profiles[i].word) continue;
                ++counts[lw];
                raw[i].push_back(std::move(lw));
            }
        }
    }
    DocumentCollection dc;
    for (const auto& [w, c] : counts) {
        if (c >= vocab_min_count) {
            dc.vocab_index[w] = dc.vocab.size();
            dc.vocab.push_back(w);
        }
    }
    if (dc.vocab.empty()) throw std::runtime_error("build_documents: empty vocabulary");
    dc.docs.resize(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        dc.doc_names.push_back(profiles[i].word);
        for (const auto& w : raw[i]) {
            auto it = dc.vocab_index.find(w);
            if (it != dc.vocab_index.end()) dc.docs[i].push_back(it->second);
        }
    }
    return dc;
}

LdaModel LdaModel::train(const DocumentCollection& docs, const GibbsConfig& cfg) {
    if (cfg.topics < 1) throw std::runtime_error("lda: K must be >= 1");
    if (cfg.beta <= 0.0 || (cfg.alpha >= 0.0 && cfg.alpha == 0.0))
        throw std::runtime_error("lda: priors must be positive");
    if (cfg.iterations <= cfg.burn_in)
        throw std::runtime_error("lda: iterations must exceed burn-in");
    if (docs.vocab.empty()) throw std::runtime_error("lda: empty vocabulary");

    LdaModel m;
    m.K_ = cfg.topics;
    m.alpha_ = cfg.alpha < 0.0 ? 50.0 / double(cfg.topics) : cfg.alpha;
    m.beta_ = cfg.beta;
    m.vocab_ = docs.vocab;
    m.vocab_index_ = docs.vocab_index;
    m.doc_names_ = docs.doc_names;

    const std::size_t D = docs.docs.size();
    const std::size_t K = m.K_;
    const std::size_t V = m.vocab_.size();

    m.doc_topic_.assign(D, std::vector<std::size_t>(K, 0));
    m.topic_word_.assign(K, std::vector<std::size_t>(V, 0));
    m.topic_total_.assign(K, 0);
    m.doc_len_.resize(D);
    m.theta_sum_.assign(D, std::vector<double>(K, 0.0));

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> topic_pick(0, K - 1);

    std::vector<std::vector<std::size_t>> z(D);
    std::size_t total_tokens = 0;
    for (std::size_t d = 0; d < D; ++d) {
        m.doc_len_[d] = docs.docs[d].size();
        total_tokens += m.doc_len_[d];
        z[d].resize(docs.docs[d].size());
        for (std::size_t i = 0; i < docs.docs[d].size(); ++i) {
            std::size_t w = docs.docs[d][i];
            std::size_t k = topic_pick(rng);
            z[d][i] = k;
            ++m.doc_topic_[d][k];
            ++m.topic_word_[k][w];
            ++m.topic_total_[k];
        }
    }
    if (K > total_tokens)
        std::fprintf(stderr, "lda: warning: K=%zu exceeds token count %zu\n", K, total_tokens);

    std::vector<double> p(K);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double vbeta = double(V) * m.beta_;

    for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t i = 0; i < z[d].size(); ++i) {
                const std::size_t w = docs.docs[d][i];
                const std::size_t old = z[d][i];
                --m.doc_topic_[d][old];
                --m.topic_word_[old][w];
                --m.topic_total_[old];
                double cum = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    cum += (double(m.doc_topic_[d][k]) + m.alpha_) *
                           (double(m.topic_word_[k][w]) + m.beta_) /
                           (double(m.topic_total_[k]) + vbeta);
                    p[k] = cum;
                }
                const double u = unit(rng) * cum;
                std::size_t k = 0;
                while (k + 1 < K && p[k] < u) ++k;
                z[d][i] = k;
                ++m.doc_topic_[d][k];
                ++m.topic_word_[k][w];
                ++m.topic_total_[k];
            }
        }
        if (iter > cfg.burn_in &&
            (cfg.sample_lag == 0 || (iter - cfg.burn_in) % cfg.sample_lag == 0)) {
            for (std::size_t d = 0; d < D; ++d) {
                const double denom = double(m.doc_len_[d]) + double(K) * m.alpha_;
                for (std::size_t k = 0; k < K; ++k)
                    m.theta_sum_[d][k] += (double(m.doc_topic_[d][k]) + m.alpha_) / denom;
            }
            ++m.samples_;
        }
    }
    if (m.samples_ == 0) {  // degenerate schedule, fall back to the final state
        for (std::size_t d = 0; d < D; ++d) {
            const double denom = double(m.doc_len_[d]) + double(K) * m.alpha_;
            for (std::size_t k = 0; k < K; ++k)
                m.theta_sum_[d][k] = (double(m.doc_topic_[d][k]) + m.alpha_) / denom;
        }
        m.samples_ = 1;
    }
    return m;
}

std::vector<double> LdaModel::doc_topic_distribution(std::size_t doc_index) const {
    if (doc_index >= doc_topic_.size())
        throw std::runtime_error("lda: document index out of range");
    std::vector<double> theta(K_);
    double total = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
        theta[k] = theta_sum_[doc_index][k] / double(samples_);
        total += theta[k];
    }
    for (auto& v : theta) v /= total;
    return theta;
}

std::vector<double> LdaModel::topic_word_distribution(std::size_t topic) const {
    if (topic >= K_) throw std::runtime_error("lda: topic index out of range");
    const std::size_t V = vocab_.size();
    std::vector<double> phi(V);
    const double denom = double(topic_total_[topic]) + double(V) * beta_;
    for (std::size_t w = 0; w < V; ++w)
        phi[w] = (double(topic_word_[topic][w]) + beta_) / denom;
    return phi;
}

std::vector<double> LdaModel::fold_in(const std::vector<std::string>& words,
                                      std::uint64_t seed, std::size_t iterations) const {
    std::vector<std::size_t> ids;
    for (const auto& w : words) {
        auto it = vocab_index_.find(w);
        if (it != vocab_index_.end()) ids.push_back(it->second);
    }
    std::vector<std::size_t> ndk(K_, 0);
    if (ids.empty()) return std::vector<double>(K_, 1.0 / double(K_));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> topic_pick(0, K_ - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> z(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        z[i] = topic_pick(rng);
        ++ndk[z[i]];
    }
    const double vbeta = double(vocab_.size()) * beta_;
    std::vector<double> p(K_);
    for (std::size_t iter = 0; iter < iterations; ++iter) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const std::size_t w = ids[i];
            --ndk[z[i]];
            double cum = 0.0;
            for (std::size_t k = 0; k < K_; ++k) {
                cum += (double(ndk[k]) + alpha_) *
                       (double(topic_word_[k][w]) + beta_) /
                       (double(topic_total_[k]) + vbeta);
                p[k] = cum;
            }
            const double u = unit(rng) * cum;
            std::size_t k = 0;
            while (k + 1 < K_ && p[k] < u) ++k;
            z[i] = k;
            ++ndk[k];
        }
    }
    std::vector<double> theta(K_);
    const double denom = double(ids.size()) + double(K_) * alpha_;
    double total = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
        theta[k] = (double(ndk[k]) + alpha_) / denom;
        total += theta[k];
    }
    for (auto& v : theta) v /= total;
    return theta;
}

void LdaModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write lda model: " + path);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "lda 1\n";
    out << K_ << ' ' << num(alpha_) << ' ' << num(beta_) << ' ' << vocab_.size() << ' '
        << doc_topic_.size() << ' ' << samples_ << '\n';
    for (const auto& w : vocab_) out << w << '\n';
    for (const auto& d : doc_names_) out << d << '\n';
    for (std::size_t d = 0; d < doc_topic_.size(); ++d) {
        out << doc_len_[d];
        for (std::size_t k = 0; k < K_; ++k) out << ' ' << doc_topic_[d][k];
        out << '\n';
    }
    for (std::size_t k = 0; k < K_; ++k) {
        out << topic_total_[k];
        for (std::size_t w = 0; w < vocab_.size(); ++w) out << ' ' << topic_word_[k][w];
        out << '\n';
    }
    for (std::size_t d = 0; d < doc_topic_.size(); ++d) {
        for (std::size_t k = 0; k < K_; ++k) out << (k ? " " : "") << num(theta_sum_[d][k]);
        out << '\n';
    }
}

LdaModel LdaModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lda model: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "lda" || version != 1) throw std::runtime_error("bad lda model file: " + path);
    LdaModel m;
    std::size_t V = 0, D = 0;
    in >> m.K_ >> m.alpha_ >> m.beta_ >> V >> D >> m.samples_;
    if (!in) throw std::runtime_error("truncated lda model: " + path);
    m.vocab_.resize(V);
    for (auto& w : m.vocab_) in >> w;
    for (std::size_t i = 0; i < V; ++i) m.vocab_index_[m.vocab_[i]] = i;
    m.doc_names_.resize(D);
    for (auto& d : m.doc_names_) in >> d;
    m.doc_topic_.assign(D, std::vector<std::size_t>(m.K_, 0));
    m.doc_len_.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
        in >> m.doc_len_[d];
        for (std::size_t k = 0; k < m.K_; ++k) in >> m.doc_topic_[d][k];
    }
    m.topic_word_.assign(m.K_, std::vector<std::size_t>(V, 0));
    m.topic_total_.assign(m.K_, 0);
    for (std::size_t k = 0; k < m.K_; ++k) {
        in >> m.topic_total_[k];
        for (std::size_t w = 0; w < V; ++w) in >> m.topic_word_[k][w];
    }
    m.theta_sum_.assign(D, std::vector<double>(m.K_, 0.0));
    for (std::size_t d = 0; d < D; ++d)
        for (std::size_t k = 0; k < m.K_; ++k) in >> m.theta_sum_[d][k];
    if (!in) throw std::runtime_error("truncated lda model: " + path);
    return m;
}

}  // namespace oovcat::topics
