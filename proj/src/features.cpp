#include "oovcat/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oovcat/kernels.hpp"

namespace oovcat::features {

using corpus::Token;
using corpus::TokenKind;
using corpus::Tweet;

std::vector<std::string> default_pos_tags() {
    // CMU-style one-letter tags, 21 of them
    return {"N", "O", "S", "^", "Z", "V", "A", "R", "!", "D", "P",
            "&", "T", "X", "#", "@", "~", "U", "E", "$", ","};
}

void apply_baseline_pos_tags(Tweet& tweet, const lexicon::Dictionary& dict) {
    static const std::set<std::string> pronouns = {
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
        "us", "them", "this", "that", "these", "those"};
    static const std::set<std::string> determiners = {"a", "an", "the", "some", "any",
                                                      "each", "every", "no"};
    static const std::set<std::string> conjunctions = {"and", "or", "but", "nor", "so", "yet"};
    static const std::set<std::string> prepositions = {
        "in", "on", "at", "by", "for", "with", "about", "to", "from", "of",
        "into", "over", "under", "after", "before", "between"};
    for (auto& tok : tweet.tokens) {
        if (tok.pos) continue;
        switch (tok.kind) {
            case TokenKind::hashtag: tok.pos = "#"; continue;
            case TokenKind::mention: tok.pos = "@"; continue;
            case TokenKind::url: tok.pos = "U"; continue;
            case TokenKind::retweet_marker: tok.pos = "~"; continue;
            case TokenKind::punct_cluster: tok.pos = ","; continue;
            case TokenKind::number: tok.pos = "$"; continue;
            case TokenKind::word: break;
        }
        auto lw = corpus::lowercase(tok.text);
        auto ends_with = [&](const char* suf) {
            std::size_t sl = std::strlen(suf);
            return lw.size() > sl && lw.compare(lw.size() - sl, sl, suf) == 0;
        };
        if (pronouns.count(lw)) tok.pos = "O";
        else if (determiners.count(lw)) tok.pos = "D";
        else if (conjunctions.count(lw)) tok.pos = "&";
        else if (prepositions.count(lw)) tok.pos = "P";
        else if (ends_with("ly")) tok.pos = "R";
        else if (ends_with("ing") || ends_with("ed")) tok.pos = "V";
        else if (std::isupper((unsigned char)tok.text[0]) && tok.index > 0) tok.pos = "^";
        else if (!dict.contains(lw)) tok.pos = "!";
        else tok.pos = "N";
    }
}

std::string family_of(const std::string& name) {
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    if (starts("pos_") || starts("ne_")) return "lexical";
    if (starts("topic_") || starts("liwc_") || name == "length" || name == "word_diversity" ||
        name == "avg_hashtag_clarity" || name == "hashtags_per_tweet" ||
        name == "mentions_per_tweet" || name == "retweet_fraction")
        return "content";
    return "context";
}

std::vector<std::string> Schema::names() const {
    std::vector<std::string> out;
    for (const auto& t : pos_tags) out.push_back("pos_" + t);
    out.push_back("pos_diversity");
    for (const auto& c : ne_categories) out.push_back("ne_" + c);
    out.push_back("length");
    out.push_back("word_diversity");
    out.push_back("avg_hashtag_clarity");
    out.push_back("hashtags_per_tweet");
    out.push_back("mentions_per_tweet");
    out.push_back("retweet_fraction");
    for (std::size_t k = 0; k < topics; ++k) out.push_back("topic_" + std::to_string(k));
    out.push_back("topic_diversity");
    for (const auto& c : liwc_categories) out.push_back("liwc_" + c);
    out.push_back("other_oov_0");
    out.push_back("other_oov_1");
    out.push_back("other_oov_2");
    out.push_back("other_oov_3plus");
    out.push_back("other_oov_mean");
    out.push_back("oov_dist_1");
    out.push_back("oov_dist_2");
    out.push_back("oov_dist_3plus");
    out.push_back("iv_dist_1");
    out.push_back("iv_dist_2");
    out.push_back("iv_dist_3plus");
    out.push_back("position_mean");
    out.push_back("position_left");
    out.push_back("position_middle");
    out.push_back("position_right");
    out.push_back("hashtag_position");
    out.push_back("hashtag_present");
    out.push_back("mention_position");
    out.push_back("mention_present");
    return out;
}

std::vector<std::string> Schema::families() const {
    std::vector<std::string> fams;
    for (const auto& n : names()) fams.push_back(family_of(n));
    return fams;
}

double entropy(const std::vector<double>& p) {
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::runtime_error("entropy: negative component");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("entropy: distribution does not sum to 1");
    return kernels::entropy_bits(p);
}

namespace {

// lowercase word-kind tokens of a tweet, optionally skipping a word
void collect_words(const Tweet& tw, const std::string& skip,
                   std::map<std::string, std::size_t>& counts, std::size_t& total) {
    for (const auto& tok : tw.tokens) {
        if (tok.kind != TokenKind::word) continue;
        auto lw = corpus::lowercase(tok.text);
        if (!skip.empty() && lw == skip) continue;
        ++counts[lw];
        ++total;
    }
}

double entropy_of_counts(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    std::vector<double> p;
    p.reserve(counts.size());
    for (const auto& [_, c] : counts) p.push_back(double(c) / double(total));
    return kernels::entropy_bits(p);
}

bool is_other_oov(const Token& tok, const std::string& word, const lexicon::Dictionary& dict) {
    return lexicon::is_oov(tok, dict) && corpus::lowercase(tok.text) != word;
}

}  // namespace

LanguageModel corpus_language_model(const std::vector<Tweet>& tweets) {
    LanguageModel lm;
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& tw : tweets) collect_words(tw, "", counts, total);
    for (const auto& [w, c] : counts) lm.probability[w] = double(c) / double(total);
    return lm;
}

double hashtag_clarity(const std::string& hashtag, const LanguageModel& lm,
                       const std::vector<Tweet>& tweets) {
    const std::string target = corpus::lowercase(hashtag);
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0, containing = 0;
    for (const auto& tw : tweets) {
        bool has = false;
        for (const auto& tok : tw.tokens)
            if (tok.kind == TokenKind::hashtag && corpus::lowercase(tok.text) == target) {
                has = true;
                break;
            }
        if (!has) continue;
        ++containing;
        collect_words(tw, "", counts, total);
    }
    if (containing == 0) throw std::runtime_error("hashtag_clarity: hashtag not found: " + hashtag);
    double kl = 0.0;
    for (const auto& [w, c] : counts) {
        double p = double(c) / double(total);
        auto it = lm.probability.find(w);
        if (it == lm.probability.end() || it->second <= 0.0) continue;  // D_h should be within C
        kl += p * std::log2(p / it->second);
    }
    return kl;
}

std::map<std::string, double> build_clarity_index(const std::vector<Tweet>& tweets) {
    auto lm = corpus_language_model(tweets);
    std::set<std::string> hashtags;
    for (const auto& tw : tweets)
        for (const auto& tok : tw.tokens)
            if (tok.kind == TokenKind::hashtag) hashtags.insert(corpus::lowercase(tok.text));
    std::map<std::string, double> index;
    for (const auto& h : hashtags) index[h] = hashtag_clarity(h, lm, tweets);
    return index;
}

std::vector<double> pos_tag_distribution(const OovProfile& prof,
                                         const std::vector<std::string>& tagset) {
    std::map<std::string, std::size_t> tag_counts;
    std::size_t total = 0;
    bool any_tag = false;
    for (const auto& tw : prof.tweets) {
        for (const auto& tok : tw.tokens) {
            if (tok.kind != TokenKind::word) continue;
            if (corpus::lowercase(tok.text) == prof.word) continue;
            ++total;
            if (tok.pos) {
                ++tag_counts[*tok.pos];
                any_tag = true;
            }
        }
    }
    if (total > 0 && !any_tag)
        throw std::runtime_error("pos_tag_distribution: corpus carries no POS tags "
                                 "(ingest tags or enable the baseline tagger)");
    std::vector<double> out(tagset.size(), 0.0);
    for (std::size_t j = 0; j < tagset.size(); ++j) {
        auto it = tag_counts.find(tagset[j]);
        if (it != tag_counts.end() && total > 0) out[j] = double(it->second) / double(total);
    }
    return out;
}

double pos_diversity(const OovProfile& prof) {
    std::map<std::string, std::size_t> tag_counts;
    std::size_t tagged = 0;
    for (const auto& tw : prof.tweets) {
        for (const auto& tok : tw.tokens) {
            if (tok.kind != TokenKind::word || !tok.pos) continue;
            if (corpus::lowercase(tok.text) == prof.word) continue;
            ++tag_counts[*tok.pos];
            ++tagged;
        }
    }
    return entropy_of_counts(tag_counts, tagged);
}

double word_diversity(const OovProfile& prof) {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& tw : prof.tweets) collect_words(tw, prof.word, counts, total);
    return entropy_of_counts(counts, total);
}

double avg_hashtag_clarity(const OovProfile& prof,
                           const std::map<std::string, double>& clarity_index) {
    double total = 0.0;
    std::size_t occurrences = 0;
    for (const auto& tw : prof.tweets) {
        for (const auto& tok : tw.tokens) {
            if (tok.kind != TokenKind::hashtag) continue;
            ++occurrences;
            auto it = clarity_index.find(corpus::lowercase(tok.text));
            if (it != clarity_index.end()) total += it->second;
        }
    }
    return occurrences == 0 ? 0.0 : total / double(occurrences);
}

std::vector<double> entity_presence(const OovProfile& prof) {
    double hashtags = 0, mentions = 0, retweets = 0;
    for (const auto& tw : prof.tweets) {
        bool rt = false;
        for (const auto& tok : tw.tokens) {
            if (tok.kind == TokenKind::hashtag) ++hashtags;
            else if (tok.kind == TokenKind::mention) ++mentions;
            else if (tok.kind == TokenKind::retweet_marker) rt = true;
        }
        if (rt) ++retweets;
    }
    const double n = double(prof.tweets.size());
    if (n == 0) return {0.0, 0.0, 0.0};
    return {hashtags / n, mentions / n, retweets / n};
}

double length_feature(const std::string& word) { return double(word.size()); }

std::vector<double> topic_features(const OovProfile& prof, const topics::LdaModel& lda,
                                   bool allow_fold_in, std::uint64_t fold_in_seed) {
    std::vector<double> theta;
    const auto& names = lda.doc_names();
    auto it = std::find(names.begin(), names.end(), prof.word);
    if (it != names.end()) {
        theta = lda.doc_topic_distribution(std::size_t(it - names.begin()));
    } else if (allow_fold_in) {
        std::vector<std::string> bag;
        for (const auto& tw : prof.tweets)
            for (const auto& tok : tw.tokens) {
                if (tok.kind != TokenKind::word) continue;
                auto lw = corpus::lowercase(tok.text);
                if (lw != prof.word) bag.push_back(std::move(lw));
            }
        theta = lda.fold_in(bag, fold_in_seed);
    } else {
        throw std::runtime_error("topic_features: '" + prof.word +
                                 "' is not an LDA training document and fold-in is disabled");
    }
    theta.push_back(kernels::entropy_bits(std::span<const double>(theta.data(), lda.topic_count())));
    return theta;
}

std::vector<double> cooccurring_oov_features(const OovProfile& prof,
                                             const lexicon::Dictionary& dict) {
    std::size_t bins[4] = {0, 0, 0, 0};
    double total_other = 0.0;
    for (const auto& tw : prof.tweets) {
        std::size_t count = 0;
        for (const auto& tok : tw.tokens)
            if (is_other_oov(tok, prof.word, dict)) ++count;
        total_other += double(count);
        ++bins[count >= 3 ? 3 : count];
    }
    const double n = double(prof.tweets.size());
    if (n == 0) return {0.0, 0.0, 0.0, 0.0, 0.0};
    return {bins[0] / n, bins[1] / n, bins[2] / n, bins[3] / n, total_other / n};
}

std::vector<double> proximity_features(const OovProfile& prof,
                                       const lexicon::Dictionary& dict) {
    // fraction of tweets with >=1 other-OOV (resp. IV word) at nearest
    // distance exactly 1, exactly 2, >= 3
    std::size_t oov_hits[3] = {0, 0, 0}, iv_hits[3] = {0, 0, 0};
    for (std::size_t t = 0; t < prof.tweets.size(); ++t) {
        const auto& tw = prof.tweets[t];
        const auto& occ = prof.occurrences[t];
        bool oov_at[3] = {false, false, false}, iv_at[3] = {false, false, false};
        for (const auto& tok : tw.tokens) {
            std::size_t dist = std::string::npos;
            for (auto o : occ) {
                std::size_t d = tok.index > o ? tok.index - o : o - tok.index;
                dist = std::min(dist, d);
            }
            if (dist == 0 || dist == std::string::npos) continue;
            const std::size_t slot = dist == 1 ? 0 : dist == 2 ? 1 : 2;
            if (is_other_oov(tok, prof.word, dict)) oov_at[slot] = true;
            else if (tok.kind == TokenKind::word && dict.contains(corpus::lowercase(tok.text)))
                iv_at[slot] = true;
        }
        for (int s = 0; s < 3; ++s) {
            if (oov_at[s]) ++oov_hits[s];
            if (iv_at[s]) ++iv_hits[s];
        }
    }
    const double n = double(prof.tweets.size());
    if (n == 0) return std::vector<double>(6, 0.0);
    return {oov_hits[0] / n, oov_hits[1] / n, oov_hits[2] / n,
            iv_hits[0] / n,  iv_hits[1] / n,  iv_hits[2] / n};
}

std::vector<double> position_feature(const OovProfile& prof) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < prof.tweets.size(); ++t) {
        const double len = double(prof.tweets[t].tokens.size());
        for (auto o : prof.occurrences[t]) {
            total += double(o) / len;
            ++count;
        }
    }
    const double mean = count == 0 ? 0.0 : total / double(count);
    // boundaries 0.3 and 0.7 fall to "middle"
    const bool left = mean < 0.3, right = mean > 0.7;
    return {mean, left ? 1.0 : 0.0, (!left && !right) ? 1.0 : 0.0, right ? 1.0 : 0.0};
}

std::vector<double> entity_position_features(const OovProfile& prof) {
    double ht_total = 0.0, mn_total = 0.0;
    std::size_t ht_count = 0, mn_count = 0;
    for (const auto& tw : prof.tweets) {
        const double len = double(tw.tokens.size());
        for (const auto& tok : tw.tokens) {
            if (tok.kind == TokenKind::hashtag) {
                ht_total += double(tok.index) / len;
                ++ht_count;
            } else if (tok.kind == TokenKind::mention) {
                mn_total += double(tok.index) / len;
                ++mn_count;
            }
        }
    }
    return {ht_count ? ht_total / double(ht_count) : 0.0, ht_count ? 1.0 : 0.0,
            mn_count ? mn_total / double(mn_count) : 0.0, mn_count ? 1.0 : 0.0};
}

std::vector<double> featurize(const OovProfile& prof, const Schema& schema,
                              const FeatureContext& ctx) {
    auto want = [&](const char* fam) {
        return ctx.families.empty() || ctx.families.count(fam) > 0;
    };
    std::vector<double> out;
    auto append = [&](const std::vector<double>& slice) {
        out.insert(out.end(), slice.begin(), slice.end());
    };

    if (want("lexical")) {
        append(pos_tag_distribution(prof, schema.pos_tags));
        out.push_back(pos_diversity(prof));
        if (!ctx.gazetteer)
            throw std::runtime_error("featurize: missing NE gazetteer");
        std::vector<Token> all_tokens;
        for (const auto& tw : prof.tweets)
            for (const auto& tok : tw.tokens)
                if (corpus::lowercase(tok.text) != prof.word) all_tokens.push_back(tok);
        auto ne = lexicon::ne_tag_fractions(all_tokens, *ctx.gazetteer);
        for (const auto& cat : schema.ne_categories) {
            auto it = ne.find(cat);
            out.push_back(it == ne.end() ? 0.0 : it->second);
        }
    }
    if (want("content")) {
        out.push_back(length_feature(prof.word));
        out.push_back(word_diversity(prof));
        if (!ctx.clarity_index)
            throw std::runtime_error("featurize: missing hashtag clarity index");
        out.push_back(avg_hashtag_clarity(prof, *ctx.clarity_index));
        append(entity_presence(prof));
        if (schema.topics > 0) {
            if (!ctx.lda) throw std::runtime_error("featurize: missing LDA model");
            append(topic_features(prof, *ctx.lda, ctx.allow_fold_in, ctx.fold_in_seed));
        } else {
            out.push_back(0.0);  // topic_diversity placeholder for K=0 schemas
        }
        if (!ctx.liwc) throw std::runtime_error("featurize: missing LIWC-style lexicon");
        std::vector<Token> all_tokens;
        for (const auto& tw : prof.tweets)
            for (const auto& tok : tw.tokens)
                if (corpus::lowercase(tok.text) != prof.word) all_tokens.push_back(tok);
        auto liwc = lexicon::lexicon_fractions(all_tokens, *ctx.liwc);
        for (const auto& cat : schema.liwc_categories) {
            auto it = liwc.find(cat);
            out.push_back(it == liwc.end() ? 0.0 : it->second);
        }
    }
    if (want("context")) {
        if (!ctx.dict) throw std::runtime_error("featurize: missing dictionary");
        append(cooccurring_oov_features(prof, *ctx.dict));
        append(proximity_features(prof, *ctx.dict));
        append(position_feature(prof));
        append(entity_position_features(prof));
    }
    return out;
}

void export_matrix(const std::string& path, const Schema& schema,
                   const std::vector<std::string>& words,
                   const std::vector<std::optional<lexicon::Category>>& labels,
                   const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write feature matrix: " + path);
    out << "word,label";
    for (const auto& n : schema.names()) out << ',' << n;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << words[i] << ',' << (labels[i] ? lexicon::category_name(*labels[i]) : "");
        for (double v : rows[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

ImportedMatrix import_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature matrix: " + path);
    ImportedMatrix m;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty feature matrix: " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= 2) m.feature_names.push_back(cell);
            ++col;
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        m.words.push_back(cell);
        std::getline(ss, cell, ',');
        m.labels.push_back(cell.empty()
                               ? std::optional<lexicon::Category>{}
                               : std::optional<lexicon::Category>{lexicon::category_from_name(cell)});
        std::vector<double> row;
        row.reserve(m.feature_names.size());
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != m.feature_names.size())
            throw std::runtime_error("ragged feature matrix row in " + path);
        m.rows.push_back(std::move(row));
    }
    return m;
}

learn::Dataset ImportedMatrix::to_dataset() const {
    learn::Dataset d;
    d.feature_names = feature_names;
    for (const auto& n : feature_names) d.feature_families.push_back(family_of(n));
    // the four ML-stage categories, in scheme order
    const std::vector<lexicon::Category> ml_cats = {
        lexicon::Category::expression, lexicon::Category::shortening_abbrev,
        lexicon::Category::proper_noun, lexicon::Category::merging};
    std::map<lexicon::Category, std::size_t> id;
    for (const auto& c : ml_cats) {
        id[c] = d.class_names.size();
        d.class_names.push_back(lexicon::category_name(c));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!labels[i] || !id.count(*labels[i])) continue;
        d.x.push_back(rows[i]);
        d.y.push_back(id[*labels[i]]);
    }
    return d;
}

TimeseriesGrid cooccurrence_timeseries(const lexicon::LabelSet& labels,
                                       const std::vector<Tweet>& tweets,
                                       const lexicon::Dictionary& dict) {
    // (category, month) -> {sum of other-OOV counts, observations}
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
    for (const auto& tw : tweets) {
        std::set<std::string> present;
        std::size_t oov_total = 0;
        std::map<std::string, std::size_t> oov_count_by_word;
        for (const auto& tok : tw.tokens) {
            if (!lexicon::is_oov(tok, dict)) continue;
            ++oov_total;
            auto lw = corpus::lowercase(tok.text);
            ++oov_count_by_word[lw];
            if (labels.count(lw)) present.insert(lw);
        }
        for (const auto& w : present) {
            const auto cat = lexicon::category_name(labels.at(w));
            auto& cell = acc[cat][tw.month];
            cell.first += double(oov_total - oov_count_by_word[w]);
            ++cell.second;
        }
    }
    TimeseriesGrid grid;
    for (const auto& [cat, months] : acc)
        for (const auto& [month, cell] : months)
            grid[cat][month] = cell.first / double(cell.second);
    return grid;
}

void export_timeseries(const std::string& path, const TimeseriesGrid& grid) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write timeseries: " + path);
    std::set<std::string> months;
    for (const auto& [_, row] : grid)
        for (const auto& [m, __] : row) months.insert(m);
    out << "category";
    for (const auto& m : months) out << ',' << m;
    out << '\n';
    char buf[64];
    for (const auto& [cat, row] : grid) {
        out << cat;
        for (const auto& m : months) {
            auto it = row.find(m);
            out << ',';
            if (it != row.end()) {
                std::snprintf(buf, sizeof buf, "%.17g", it->second);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace oovcat::features
