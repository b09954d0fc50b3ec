#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "oovcat/features.hpp"
#include "oovcat/kernels.hpp"
#include "oovcat/learn.hpp"
#include "oovcat/lexicon.hpp"
#include "oovcat/pipeline.hpp"
#include "oovcat/profile.hpp"
#include "oovcat/rules.hpp"
#include "oovcat/synth.hpp"
#include "oovcat/topics.hpp"

using namespace oovcat;

namespace {

std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line.substr(0, line.find('\t')));
    }
    return words;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

learn::ModelKind kind_of(const std::string& name) {
    if (name == "logistic") return learn::ModelKind::logistic;
    if (name == "svm") return learn::ModelKind::linear_svm;
    throw CLI::ValidationError("--model must be logistic or svm");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OOV word categorization pipeline"};
    app.require_subcommand(1);

    // ---- tokenize ----
    auto* cmd_tok = app.add_subcommand("tokenize", "tokenize text or a corpus file");
    std::string tok_text, tok_corpus;
    cmd_tok->add_option("--text", tok_text, "raw text to tokenize");
    cmd_tok->add_option("--corpus", tok_corpus, "line-delimited corpus file");

    // ---- detect-oov ----
    auto* cmd_oov = app.add_subcommand("detect-oov", "build the stable OOV inventory");
    std::string oov_corpus, oov_dict, oov_out;
    std::size_t oov_top_n = 3500;
    cmd_oov->add_option("--corpus", oov_corpus)->required();
    cmd_oov->add_option("--dict", oov_dict)->required();
    cmd_oov->add_option("--top-n", oov_top_n, "stable words to keep");
    cmd_oov->add_option("--out", oov_out, "output file (default stdout)");

    // ---- rule-classify ----
    auto* cmd_rule = app.add_subcommand("rule-classify",
                                        "apply the emoticon and lengthening rules");
    std::string rule_words, rule_dict, rule_out;
    cmd_rule->add_option("--words", rule_words, "word list (one per line)")->required();
    cmd_rule->add_option("--dict", rule_dict)->required();
    cmd_rule->add_option("--out", rule_out);

    // ---- synth ----
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_config, synth_out, synth_labels, synth_spec_out;
    std::uint64_t synth_seed = 0;
    bool synth_demo = false;
    cmd_synth->add_option("--config", synth_config, "generator spec (json)");
    cmd_synth->add_flag("--demo", synth_demo, "use the built-in demo spec");
    cmd_synth->add_option("--seed", synth_seed, "override the spec seed");
    cmd_synth->add_option("--out", synth_out, "corpus output path")->required();
    cmd_synth->add_option("--labels", synth_labels, "label file output path");
    cmd_synth->add_option("--spec-out", synth_spec_out, "write the effective spec");

    // ---- lda-train ----
    auto* cmd_lda = app.add_subcommand("lda-train", "train LDA over per-word documents");
    std::string lda_corpus, lda_dict, lda_words, lda_out;
    topics::GibbsConfig lda_cfg;
    std::size_t lda_cap = 5000, lda_min_count = 1;
    cmd_lda->add_option("--corpus", lda_corpus)->required();
    cmd_lda->add_option("--dict", lda_dict)->required();
    cmd_lda->add_option("--words", lda_words, "word or label list")->required();
    cmd_lda->add_option("--k", lda_cfg.topics, "topic count")->required();
    cmd_lda->add_option("--iterations", lda_cfg.iterations);
    cmd_lda->add_option("--burn-in", lda_cfg.burn_in);
    cmd_lda->add_option("--lag", lda_cfg.sample_lag);
    cmd_lda->add_option("--seed", lda_cfg.seed);
    cmd_lda->add_option("--cap", lda_cap, "tweet sample cap per word");
    cmd_lda->add_option("--min-count", lda_min_count, "vocabulary frequency floor");
    cmd_lda->add_option("--out", lda_out, "model output path")->required();

    // ---- featurize ----
    auto* cmd_feat = app.add_subcommand("featurize", "compute the feature matrix");
    std::string ft_corpus, ft_dict, ft_labels, ft_liwc, ft_gaz, ft_lda, ft_out;
    std::size_t ft_cap = 5000;
    std::uint64_t ft_seed = 1;
    bool ft_baseline = false;
    cmd_feat->add_option("--corpus", ft_corpus)->required();
    cmd_feat->add_option("--dict", ft_dict)->required();
    cmd_feat->add_option("--labels", ft_labels)->required();
    cmd_feat->add_option("--liwc", ft_liwc)->required();
    cmd_feat->add_option("--gazetteer", ft_gaz)->required();
    cmd_feat->add_option("--lda", ft_lda, "trained LDA model")->required();
    cmd_feat->add_option("--cap", ft_cap);
    cmd_feat->add_option("--seed", ft_seed);
    cmd_feat->add_flag("--baseline-tagger", ft_baseline, "tag words heuristically");
    cmd_feat->add_option("--out", ft_out, "matrix csv output")->required();

    // ---- train ----
    auto* cmd_train = app.add_subcommand("train", "train a classifier on a matrix");
    std::string tr_matrix, tr_model = "logistic", tr_out;
    learn::TrainConfig tr_cfg;
    cmd_train->add_option("--matrix", tr_matrix)->required();
    cmd_train->add_option("--model", tr_model, "logistic | svm");
    cmd_train->add_option("--epochs", tr_cfg.epochs);
    cmd_train->add_option("--l2", tr_cfg.l2);
    cmd_train->add_option("--c", tr_cfg.c);
    cmd_train->add_option("--seed", tr_cfg.seed);
    cmd_train->add_option("--out", tr_out, "model output path")->required();

    // ---- evaluate ----
    auto* cmd_eval = app.add_subcommand("evaluate", "stratified cross-validation");
    std::string ev_matrix, ev_model = "logistic", ev_out;
    std::size_t ev_folds = 10;
    learn::TrainConfig ev_cfg;
    cmd_eval->add_option("--matrix", ev_matrix)->required();
    cmd_eval->add_option("--model", ev_model, "logistic | svm");
    cmd_eval->add_option("--folds", ev_folds);
    cmd_eval->add_option("--seed", ev_cfg.seed);
    cmd_eval->add_option("--out", ev_out);

    // ---- rank-features ----
    auto* cmd_rank = app.add_subcommand("rank-features", "chi-square feature ranking");
    std::string rk_matrix, rk_out;
    std::size_t rk_bins = 10;
    cmd_rank->add_option("--matrix", rk_matrix)->required();
    cmd_rank->add_option("--bins", rk_bins);
    cmd_rank->add_option("--out", rk_out);

    // ---- ablate ----
    auto* cmd_ablate = app.add_subcommand("ablate", "evaluate a feature-family subset");
    std::string ab_matrix, ab_families, ab_model = "logistic", ab_out;
    std::size_t ab_folds = 10;
    learn::TrainConfig ab_cfg;
    cmd_ablate->add_option("--matrix", ab_matrix)->required();
    cmd_ablate->add_option("--families", ab_families, "comma-separated subset")->required();
    cmd_ablate->add_option("--model", ab_model);
    cmd_ablate->add_option("--folds", ab_folds);
    cmd_ablate->add_option("--seed", ab_cfg.seed);
    cmd_ablate->add_option("--out", ab_out);

    // ---- timeseries ----
    auto* cmd_ts = app.add_subcommand("timeseries",
                                      "category x month co-occurring OOV grid");
    std::string ts_corpus, ts_dict, ts_labels, ts_out;
    cmd_ts->add_option("--corpus", ts_corpus)->required();
    cmd_ts->add_option("--dict", ts_dict)->required();
    cmd_ts->add_option("--labels", ts_labels)->required();
    cmd_ts->add_option("--out", ts_out, "grid csv output")->required();

    // ---- run ----
    auto* cmd_run = app.add_subcommand("run", "run the full pipeline from a config");
    std::string run_config;
    cmd_run->add_option("--config", run_config, "pipeline config (json)")->required();

    // exit codes: 0 ok, 1 runtime failure, 2 usage/config error
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*cmd_tok) {
            auto print = [](const std::vector<corpus::Token>& toks) {
                for (const auto& t : toks)
                    std::cout << t.text << '\t' << corpus::kind_name(t.kind) << '\n';
            };
            if (!tok_text.empty()) print(corpus::tokenize(tok_text));
            if (!tok_corpus.empty()) {
                corpus::load_corpus(tok_corpus, [&](corpus::Tweet&& tw) {
                    std::cout << tw.id << ":\n";
                    print(tw.tokens);
                });
            }
        } else if (*cmd_oov) {
            auto dict = lexicon::Dictionary::load(oov_dict);
            auto tweets = corpus::load_corpus_vec(oov_corpus);
            auto inv = lexicon::build_oov_inventory(tweets, dict);
            auto stable = lexicon::select_stable_oov(inv, oov_top_n);
            std::ofstream file;
            auto& os = open_out(file, oov_out);
            for (const auto& w : stable) os << w << '\t' << inv.entries.at(w).total << '\n';
        } else if (*cmd_rule) {
            auto dict = lexicon::Dictionary::load(rule_dict);
            auto words = read_word_list(rule_words);
            auto result = rules::rule_stage(words, dict);
            std::ofstream file;
            auto& os = open_out(file, rule_out);
            for (const auto& [w, v] : result.verdicts) {
                os << w << '\t' << (v.category ? lexicon::category_name(*v.category) : "-")
                   << '\t' << (v.normalized_form ? *v.normalized_form : "-") << '\n';
            }
            for (const auto& w : result.capped_tokens)
                std::cerr << "enumeration capped: " << w << '\n';
        } else if (*cmd_synth) {
            synth::GeneratorSpec spec = synth_config.empty()
                                            ? synth::GeneratorSpec::demo()
                                            : synth::GeneratorSpec::load(synth_config);
            if (cmd_synth->count("--seed")) spec.seed = synth_seed;
            auto result = synth::generate(spec);
            corpus::write_corpus(synth_out, result.tweets);
            if (!synth_labels.empty()) lexicon::write_labels(synth_labels, result.labels);
            if (!synth_spec_out.empty()) spec.save(synth_spec_out);
            std::cerr << "generated " << result.tweets.size() << " tweets, "
                      << result.labels.size() << " planted words\n";
        } else if (*cmd_lda) {
            auto dict = lexicon::Dictionary::load(lda_dict);
            auto tweets = corpus::load_corpus_vec(lda_corpus);
            auto words = read_word_list(lda_words);
            std::vector<profile::OovProfile> profiles;
            for (std::size_t i = 0; i < words.size(); ++i)
                profiles.push_back(
                    profile::sample_profile(words[i], tweets, lda_cap, lda_cfg.seed + i));
            auto docs = topics::build_documents(profiles, lda_min_count);
            auto model = topics::LdaModel::train(docs, lda_cfg);
            model.save(lda_out);
        } else if (*cmd_feat) {
            auto dict = lexicon::Dictionary::load(ft_dict);
            auto liwc = lexicon::CategoryLexicon::load(ft_liwc);
            auto gaz = lexicon::CategoryLexicon::load(ft_gaz);
            auto labels = lexicon::load_labels(ft_labels);
            auto tweets = corpus::load_corpus_vec(ft_corpus);
            if (ft_baseline)
                for (auto& tw : tweets) features::apply_baseline_pos_tags(tw, dict);
            auto lda = topics::LdaModel::load(ft_lda);
            auto clarity = features::build_clarity_index(tweets);

            std::set<std::string> observed;
            for (const auto& tw : tweets)
                for (const auto& tok : tw.tokens)
                    if (tok.kind == corpus::TokenKind::word && tok.pos)
                        observed.insert(*tok.pos);
            features::Schema schema;
            schema.pos_tags.assign(observed.begin(), observed.end());
            schema.ne_categories = gaz.category_names();
            schema.liwc_categories = liwc.category_names();
            schema.topics = lda.topic_count();

            features::FeatureContext ctx;
            ctx.dict = &dict;
            ctx.liwc = &liwc;
            ctx.gazetteer = &gaz;
            ctx.lda = &lda;
            ctx.clarity_index = &clarity;
            ctx.fold_in_seed = ft_seed;

            std::vector<std::string> words;
            std::vector<std::optional<lexicon::Category>> opt_labels;
            std::vector<std::vector<double>> rows;
            std::size_t i = 0;
            for (const auto& [w, cat] : labels) {
                if (cat == lexicon::Category::emoticon ||
                    cat == lexicon::Category::lengthening)
                    continue;
                auto prof = profile::sample_profile(w, tweets, ft_cap, ft_seed + i++);
                rows.push_back(features::featurize(prof, schema, ctx));
                words.push_back(w);
                opt_labels.emplace_back(cat);
            }
            features::export_matrix(ft_out, schema, words, opt_labels, rows);
        } else if (*cmd_train) {
            tr_cfg.kind = kind_of(tr_model);
            auto data = features::import_matrix(tr_matrix).to_dataset();
            auto model = learn::train(data, tr_cfg);
            model.save(tr_out);
        } else if (*cmd_eval) {
            ev_cfg.kind = kind_of(ev_model);
            auto data = features::import_matrix(ev_matrix).to_dataset();
            auto report = learn::cross_validate(data, ev_cfg, ev_folds, ev_cfg.seed);
            std::ofstream file;
            open_out(file, ev_out) << report.to_text();
        } else if (*cmd_rank) {
            auto data = features::import_matrix(rk_matrix).to_dataset();
            auto ranking = learn::chi_square_rank(data, rk_bins);
            std::ofstream file;
            auto& os = open_out(file, rk_out);
            char line[160];
            for (const auto& [name, chi2] : ranking.entries) {
                std::snprintf(line, sizeof line, "%s\t%.6g\n", name.c_str(), chi2);
                os << line;
            }
        } else if (*cmd_ablate) {
            ab_cfg.kind = kind_of(ab_model);
            std::set<std::string> fams;
            std::stringstream ss(ab_families);
            std::string f;
            while (std::getline(ss, f, ',')) fams.insert(f);
            auto data = features::import_matrix(ab_matrix).to_dataset();
            auto report = learn::ablate_families(data, fams, ab_cfg, ab_folds, ab_cfg.seed);
            std::ofstream file;
            open_out(file, ab_out) << report.to_text();
        } else if (*cmd_ts) {
            auto dict = lexicon::Dictionary::load(ts_dict);
            auto labels = lexicon::load_labels(ts_labels);
            auto tweets = corpus::load_corpus_vec(ts_corpus);
            auto grid = features::cooccurrence_timeseries(labels, tweets, dict);
            features::export_timeseries(ts_out, grid);
        } else if (*cmd_run) {
            auto config = pipeline::PipelineConfig::load(run_config);
            pipeline::run_pipeline(config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
