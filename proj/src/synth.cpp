#include "oovcat/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fstream>

#include "json.hpp"

namespace oovcat::synth {

namespace {

const std::vector<std::vector<std::string>>& demo_topic_pools() {
    static const std::vector<std::vector<std::string>> pools = {
        {"pizza", "burger", "pasta", "cheese", "salad", "bread", "coffee", "tea", "soup",
         "rice", "chicken", "beef", "bacon", "eggs", "cake", "cookie", "sugar", "butter",
         "salt", "pepper", "lunch", "dinner", "breakfast", "snack", "kitchen"},
        {"game", "team", "score", "goal", "match", "coach", "player", "season", "league",
         "field", "court", "ball", "race", "win", "lose", "championship", "tournament",
         "stadium", "fans", "defense", "offense", "basketball", "football", "baseball",
         "soccer"},
        {"song", "album", "band", "guitar", "drums", "piano", "concert", "stage", "singer",
         "melody", "chorus", "lyrics", "tune", "dance", "radio", "record", "studio", "track",
         "beat", "rhythm", "festival", "playlist", "violin", "orchestra", "vocal"},
        {"trip", "flight", "hotel", "beach", "mountain", "city", "airport", "train",
         "ticket", "passport", "journey", "vacation", "island", "museum", "tour", "guide",
         "luggage", "map", "road", "adventure", "camping", "sunset", "ocean", "river",
         "forest"},
        {"class", "teacher", "homework", "exam", "test", "study", "book", "library",
         "lecture", "student", "campus", "grade", "semester", "notes", "pencil", "paper",
         "science", "history", "math", "english", "professor", "quiz", "project", "essay",
         "degree"},
        {"film", "actor", "scene", "director", "camera", "script", "theater", "screen",
         "drama", "comedy", "trailer", "sequel", "cinema", "award", "plot", "character",
         "audience", "ticket", "popcorn", "review", "premiere", "star", "studio", "genre",
         "action"},
    };
    return pools;
}

// Consonant-heavy strings with no immediate letter repeats: they stay out
// of the dictionary and out of the lengthening rule's reach.
std::string invent_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
    static const std::string alphabet = "bcdfghjklmnpqrstvwz";
    std::uniform_int_distribution<std::size_t> len_pick(min_len, max_len);
    std::uniform_int_distribution<std::size_t> ch_pick(0, alphabet.size() - 1);
    const std::size_t len = len_pick(rng);
    std::string w;
    while (w.size() < len) {
        char c = alphabet[ch_pick(rng)];
        if (!w.empty() && w.back() == c) continue;
        w.push_back(c);
    }
    return w;
}

CategorySpec category_from_json(const nlohmann::json& j) {
    CategorySpec cs;
    if (j.contains("words")) cs.words = j["words"].get<std::vector<std::string>>();
    cs.generate = j.value("generate", std::size_t(0));
    cs.min_length = j.value("min_length", std::size_t(5));
    cs.max_length = j.value("max_length", std::size_t(8));
    cs.other_oov_rate = j.value("other_oov_rate", 0.0);
    cs.position = j.value("position", std::string("middle"));
    cs.topic = j.value("topic", std::size_t(0));
    cs.hashtag_rate = j.value("hashtag_rate", 0.0);
    cs.mention_rate = j.value("mention_rate", 0.0);
    cs.retweet_rate = j.value("retweet_rate", 0.0);
    return cs;
}

nlohmann::json category_to_json(const CategorySpec& cs) {
    nlohmann::json j;
    j["words"] = cs.words;
    j["generate"] = cs.generate;
    j["min_length"] = cs.min_length;
    j["max_length"] = cs.max_length;
    j["other_oov_rate"] = cs.other_oov_rate;
    j["position"] = cs.position;
    j["topic"] = cs.topic;
    j["hashtag_rate"] = cs.hashtag_rate;
    j["mention_rate"] = cs.mention_rate;
    j["retweet_rate"] = cs.retweet_rate;
    return j;
}

}  // namespace

GeneratorSpec GeneratorSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open generator spec: " + path);
    auto j = nlohmann::json::parse(in);
    GeneratorSpec spec;
    spec.seed = j.value("seed", std::uint64_t(1));
    if (j.contains("months")) spec.months = j["months"].get<std::vector<std::string>>();
    spec.tweets_per_word = j.value("tweets_per_word", std::size_t(40));
    spec.words_per_tweet = j.value("words_per_tweet", std::size_t(9));
    if (j.contains("topic_pools"))
        spec.topic_pools = j["topic_pools"].get<std::vector<std::vector<std::string>>>();
    else
        spec.topic_pools = demo_topic_pools();
    spec.extra_oov_count = j.value("extra_oov_count", std::size_t(30));
    for (auto& [name, cj] : j.at("categories").items())
        spec.categories[name] = category_from_json(cj);
    return spec;
}

void GeneratorSpec::save(const std::string& path) const {
    nlohmann::json j;
    j["seed"] = seed;
    j["months"] = months;
    j["tweets_per_word"] = tweets_per_word;
    j["words_per_tweet"] = words_per_tweet;
    j["topic_pools"] = topic_pools;
    j["extra_oov_count"] = extra_oov_count;
    for (const auto& [name, cs] : categories) j["categories"][name] = category_to_json(cs);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write generator spec: " + path);
    out << j.dump(2) << '\n';
}

GeneratorSpec GeneratorSpec::demo(std::size_t ml_words_per_category) {
    GeneratorSpec spec;
    spec.seed = 1;
    spec.topic_pools = demo_topic_pools();

    CategorySpec emoticon;
    emoticon.words = {":)", ":(", ":D", ":P", ":/", ";)", "=)", ":-)", "xD", ":o"};
    emoticon.other_oov_rate = 0.1;
    emoticon.position = "right";
    emoticon.topic = 5;
    spec.categories["emoticon"] = emoticon;

    CategorySpec lengthening;
    lengthening.words = {"noooo", "pleaseeee", "okk", "damnnn", "sooo", "weeell",
                         "yeees", "hiii", "loveee", "stoppp"};
    lengthening.other_oov_rate = 0.7;
    lengthening.position = "left";
    lengthening.topic = 2;
    spec.categories["lengthening"] = lengthening;

    // The four ML-stage categories carry distinct length, topic, position
    // and co-occurrence signatures.
    CategorySpec expression;
    expression.generate = ml_words_per_category;
    expression.min_length = 4;
    expression.max_length = 5;
    expression.other_oov_rate = 1.4;
    expression.position = "right";
    expression.topic = 0;
    expression.hashtag_rate = 0.15;
    spec.categories["expression"] = expression;

    CategorySpec shortening;
    shortening.generate = ml_words_per_category;
    shortening.min_length = 3;
    shortening.max_length = 3;
    shortening.other_oov_rate = 2.1;
    shortening.position = "middle";
    shortening.topic = 1;
    shortening.mention_rate = 0.5;
    shortening.retweet_rate = 0.3;
    spec.categories["shortening_abbrev"] = shortening;

    CategorySpec proper;
    proper.generate = ml_words_per_category;
    proper.min_length = 8;
    proper.max_length = 9;
    proper.other_oov_rate = 3.5;
    proper.position = "left";
    proper.topic = 3;
    proper.hashtag_rate = 0.6;
    spec.categories["proper_noun"] = proper;

    // Merging shares the shortening context signature (position, entity and
    // co-occurrence rates) so only content features tell the two apart.
    CategorySpec merging;
    merging.generate = ml_words_per_category;
    merging.min_length = 10;
    merging.max_length = 12;
    merging.other_oov_rate = 2.1;
    merging.position = "middle";
    merging.topic = 4;
    merging.mention_rate = 0.5;
    merging.retweet_rate = 0.3;
    spec.categories["merging"] = merging;

    return spec;
}

SynthResult generate(const GeneratorSpec& spec) {
    for (const auto& pool : spec.topic_pools)
        if (pool.empty()) throw std::runtime_error("synth: empty topic word pool");
    if (spec.topic_pools.empty()) throw std::runtime_error("synth: no topic word pools");
    for (const auto& [name, cs] : spec.categories) {
        if (cs.words.empty() && cs.generate == 0)
            throw std::runtime_error("synth: category '" + name + "' has an empty word pool");
        if (cs.topic >= spec.topic_pools.size())
            throw std::runtime_error("synth: category '" + name + "' references a missing pool");
    }
    if (spec.months.empty()) throw std::runtime_error("synth: no months configured");

    std::mt19937_64 rng(spec.seed);
    SynthResult result;

    // invented words, unique across categories and the extra pool
    std::set<std::string> taken;
    auto fresh_word = [&](std::size_t lo, std::size_t hi) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            auto w = invent_word(rng, lo, hi);
            if (taken.insert(w).second) return w;
        }
        throw std::runtime_error("synth: could not invent a fresh word");
    };

    std::vector<std::string> extra_pool;
    for (std::size_t i = 0; i < spec.extra_oov_count; ++i)
        extra_pool.push_back(fresh_word(6, 7));

    struct Planted {
        std::string word;
        std::string category;
        const CategorySpec* cs;
    };
    std::vector<Planted> planted;
    for (const auto& [name, cs] : spec.categories) {
        for (const auto& w : cs.words) {
            planted.push_back({corpus::lowercase(w), name, &cs});
            result.labels[corpus::lowercase(w)] = lexicon::category_from_name(name);
        }
        for (std::size_t i = 0; i < cs.generate; ++i) {
            auto w = fresh_word(cs.min_length, cs.max_length);
            planted.push_back({w, name, &cs});
            result.labels[w] = lexicon::category_from_name(name);
        }
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t tweet_id = 0;
    for (const auto& pl : planted) {
        const auto& pool = spec.topic_pools[pl.cs->topic];
        std::uniform_int_distribution<std::size_t> pool_pick(0, pool.size() - 1);
        std::uniform_int_distribution<std::size_t> extra_pick(
            0, extra_pool.empty() ? 0 : extra_pool.size() - 1);
        std::poisson_distribution<int> oov_count(pl.cs->other_oov_rate);
        for (std::size_t t = 0; t < spec.tweets_per_word; ++t) {
            std::vector<std::string> toks;
            for (std::size_t w = 0; w < spec.words_per_tweet; ++w)
                toks.push_back(pool[pool_pick(rng)]);
            // co-occurring planted OOVs from the shared extra pool
            if (!extra_pool.empty()) {
                int extra = oov_count(rng);
                for (int e = 0; e < extra; ++e) {
                    std::uniform_int_distribution<std::size_t> at(0, toks.size());
                    toks.insert(toks.begin() + long(at(rng)), extra_pool[extra_pick(rng)]);
                }
            }
            // the planted word at its category's position tendency
            double frac;
            if (pl.cs->position == "left") frac = 0.25 * unit(rng);
            else if (pl.cs->position == "right") frac = 0.8 + 0.2 * unit(rng);
            else frac = 0.4 + 0.2 * unit(rng);
            std::size_t at = std::min(toks.size(), std::size_t(frac * double(toks.size() + 1)));
            toks.insert(toks.begin() + long(at), pl.word);

            if (unit(rng) < pl.cs->hashtag_rate) toks.push_back("#" + pool[pool_pick(rng)]);
            if (unit(rng) < pl.cs->mention_rate)
                toks.insert(toks.begin(), "@" + pool[pool_pick(rng)]);
            if (unit(rng) < pl.cs->retweet_rate) toks.insert(toks.begin(), "RT");

            std::ostringstream text;
            for (std::size_t i = 0; i < toks.size(); ++i) text << (i ? " " : "") << toks[i];

            corpus::Tweet tw;
            tw.id = "s" + std::to_string(tweet_id++);
            tw.month = spec.months[t % spec.months.size()];
            tw.raw_text = text.str();
            tw.tokens = corpus::tokenize(tw.raw_text);
            result.tweets.push_back(std::move(tw));
        }
    }
    return result;
}

}  // namespace oovcat::synth
