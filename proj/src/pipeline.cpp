#include "oovcat/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "oovcat/features.hpp"
#include "oovcat/learn.hpp"
#include "oovcat/lexicon.hpp"
#include "oovcat/profile.hpp"
#include "oovcat/rules.hpp"
#include "oovcat/topics.hpp"

namespace oovcat::pipeline {

namespace fs = std::filesystem;

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pipeline config: " + path);
    auto j = nlohmann::json::parse(in);
    PipelineConfig c;
    c.corpus_path = j.at("corpus").get<std::string>();
    c.dictionary_path = j.at("dictionary").get<std::string>();
    c.liwc_path = j.at("liwc").get<std::string>();
    c.gazetteer_path = j.at("gazetteer").get<std::string>();
    c.label_path = j.at("labels").get<std::string>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.sample_cap = j.value("sample_cap", c.sample_cap);
    if (j.contains("k_list")) c.k_list = j["k_list"].get<std::vector<std::size_t>>();
    c.classifier = j.value("classifier", c.classifier);
    c.folds = j.value("folds", c.folds);
    c.seed = j.value("seed", c.seed);
    c.lda_iterations = j.value("lda_iterations", c.lda_iterations);
    c.lda_burn_in = j.value("lda_burn_in", c.lda_burn_in);
    c.lda_sample_lag = j.value("lda_sample_lag", c.lda_sample_lag);
    c.vocab_min_count = j.value("vocab_min_count", c.vocab_min_count);
    c.baseline_tagger = j.value("baseline_tagger", c.baseline_tagger);
    c.chi2_bins = j.value("chi2_bins", c.chi2_bins);
    c.stable_top_n = j.value("stable_top_n", c.stable_top_n);
    return c;
}

void PipelineConfig::save(const std::string& path) const {
    nlohmann::json j;
    j["corpus"] = corpus_path;
    j["dictionary"] = dictionary_path;
    j["liwc"] = liwc_path;
    j["gazetteer"] = gazetteer_path;
    j["labels"] = label_path;
    j["output_dir"] = output_dir;
    j["sample_cap"] = sample_cap;
    j["k_list"] = k_list;
    j["classifier"] = classifier;
    j["folds"] = folds;
    j["seed"] = seed;
    j["lda_iterations"] = lda_iterations;
    j["lda_burn_in"] = lda_burn_in;
    j["lda_sample_lag"] = lda_sample_lag;
    j["vocab_min_count"] = vocab_min_count;
    j["baseline_tagger"] = baseline_tagger;
    j["chi2_bins"] = chi2_bins;
    j["stable_top_n"] = stable_top_n;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pipeline config: " + path);
    out << j.dump(2) << '\n';
}

void PipelineConfig::validate() const {
    const std::vector<std::pair<std::string, std::string>> required = {
        {"corpus", corpus_path},     {"dictionary", dictionary_path},
        {"liwc lexicon", liwc_path}, {"gazetteer", gazetteer_path},
        {"labels", label_path}};
    for (const auto& [what, p] : required) {
        if (!fs::exists(p))
            throw std::runtime_error("config: missing " + what + " file: " + p);
    }
    for (auto k : k_list)
        if (k < 1) throw std::runtime_error("config: K values must be >= 1");
    if (folds < 2) throw std::runtime_error("config: folds must be >= 2");
    if (classifier != "both" && classifier != "logistic" && classifier != "svm")
        throw std::runtime_error("config: classifier must be logistic, svm, or both");
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot digest file: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= (unsigned char)buf[i];
            h *= 1099511628211ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)h);
    return hex;
}

namespace {

struct Stage {
    nlohmann::json& manifest;
    std::string name;
    Stage(nlohmann::json& m, std::string n) : manifest(m), name(std::move(n)) {
        manifest["stage"] = name;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

void run_pipeline(const PipelineConfig& config) {
    config.validate();
    fs::create_directories(config.output_dir);
    const auto out = [&](const std::string& name) {
        return (fs::path(config.output_dir) / name).string();
    };

    nlohmann::json manifest;
    manifest["seed"] = config.seed;
    manifest["complete"] = false;
    manifest["inputs"] = {
        {"corpus", {{"path", config.corpus_path}, {"digest", file_digest(config.corpus_path)}}},
        {"dictionary",
         {{"path", config.dictionary_path}, {"digest", file_digest(config.dictionary_path)}}},
        {"liwc", {{"path", config.liwc_path}, {"digest", file_digest(config.liwc_path)}}},
        {"gazetteer",
         {{"path", config.gazetteer_path}, {"digest", file_digest(config.gazetteer_path)}}},
        {"labels", {{"path", config.label_path}, {"digest", file_digest(config.label_path)}}},
    };
    manifest["artifacts"] = nlohmann::json::array();
    auto record = [&](const std::string& path) {
        manifest["artifacts"].push_back({{"path", path}, {"digest", file_digest(path)}});
        std::ofstream m(out("manifest.json"));
        m << manifest.dump(2) << '\n';
    };
    config.save(out("config.json"));
    record(out("config.json"));

    try {
        Stage s1(manifest, "ingest");
        auto dict = lexicon::Dictionary::load(config.dictionary_path);
        auto liwc = lexicon::CategoryLexicon::load(config.liwc_path);
        auto gazetteer = lexicon::CategoryLexicon::load(config.gazetteer_path);
        auto labels = lexicon::load_labels(config.label_path);
        corpus::LoadReport load_rep;
        auto tweets = corpus::load_corpus_vec(config.corpus_path, &load_rep);
        if (config.baseline_tagger)
            for (auto& tw : tweets) features::apply_baseline_pos_tags(tw, dict);

        Stage s2(manifest, "oov-inventory");
        auto inventory = lexicon::build_oov_inventory(tweets, dict);
        auto stable = lexicon::select_stable_oov(inventory, config.stable_top_n);
        {
            std::ostringstream txt;
            txt << "loaded " << load_rep.loaded << " tweets, skipped " << load_rep.skipped
                << "\n";
            txt << "oov inventory: " << inventory.entries.size() << " words over "
                << inventory.months.size() << " months\n";
            txt << "stable oov words (top " << config.stable_top_n << "): " << stable.size()
                << "\n";
            for (const auto& w : stable)
                txt << w << '\t' << inventory.entries.at(w).total << '\n';
            write_text(out("oov_inventory.txt"), txt.str());
            record(out("oov_inventory.txt"));
        }

        Stage s3(manifest, "rule-stage");
        std::vector<std::string> labeled_words;
        for (const auto& [w, _] : labels) labeled_words.push_back(w);
        auto rule_result = rules::rule_stage(labeled_words, dict);
        {
            std::ostringstream txt;
            // per-category quality of the two rules against the labels
            for (auto cat : {lexicon::Category::emoticon, lexicon::Category::lengthening}) {
                std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
                for (const auto& [w, verdict] : rule_result.verdicts) {
                    const bool truth = labels.at(w) == cat;
                    const bool pred = verdict.category && *verdict.category == cat;
                    if (truth && pred) ++tp;
                    else if (!truth && pred) ++fp;
                    else if (truth && !pred) ++fn;
                    else ++tn;
                }
                const double acc = double(tp + tn) / double(tp + tn + fp + fn);
                const double prec = tp + fp ? double(tp) / double(tp + fp) : 0.0;
                const double rec = tp + fn ? double(tp) / double(tp + fn) : 0.0;
                char line[160];
                std::snprintf(line, sizeof line,
                              "%s: accuracy %.1f%%  precision %.3f  recall %.3f\n",
                              lexicon::category_name(cat), 100.0 * acc, prec, rec);
                txt << line;
            }
            txt << "\nword\tverdict\tnormalized\n";
            for (const auto& [w, verdict] : rule_result.verdicts) {
                txt << w << '\t'
                    << (verdict.category ? lexicon::category_name(*verdict.category) : "-")
                    << '\t' << (verdict.normalized_form ? *verdict.normalized_form : "-")
                    << '\n';
            }
            if (!rule_result.capped_tokens.empty()) {
                txt << "\nenumeration-capped tokens:\n";
                for (const auto& w : rule_result.capped_tokens) txt << w << '\n';
            }
            write_text(out("rule_report.txt"), txt.str());
            record(out("rule_report.txt"));
        }

        Stage s4(manifest, "profiles");
        // the ML stage handles the four non-rule categories
        std::vector<std::string> ml_words;
        std::vector<lexicon::Category> ml_cats;
        for (const auto& [w, cat] : labels) {
            if (cat == lexicon::Category::emoticon || cat == lexicon::Category::lengthening)
                continue;
            ml_words.push_back(w);
            ml_cats.push_back(cat);
        }
        if (ml_words.empty())
            throw std::runtime_error("profiles: no labeled words for the ML categories");
        std::vector<profile::OovProfile> profiles;
        for (std::size_t i = 0; i < ml_words.size(); ++i)
            profiles.push_back(
                profile::sample_profile(ml_words[i], tweets, config.sample_cap,
                                        config.seed + i));

        Stage s5(manifest, "clarity-index");
        auto clarity = features::build_clarity_index(tweets);

        Stage s6(manifest, "lda-and-features");
        auto documents = topics::build_documents(profiles, config.vocab_min_count);

        // POS tagset: tags observed on word tokens, sorted
        std::set<std::string> observed_tags;
        for (const auto& tw : tweets)
            for (const auto& tok : tw.tokens)
                if (tok.kind == corpus::TokenKind::word && tok.pos)
                    observed_tags.insert(*tok.pos);

        std::ostringstream table2;
        table2 << "K\tclassifier\taccuracy\tprecision\trecall\tf-score\troc-area\n";
        std::vector<std::string> classifiers;
        if (config.classifier == "both") classifiers = {"svm", "logistic"};
        else classifiers = {config.classifier};

        std::string last_matrix_path;
        for (auto K : config.k_list) {
            topics::GibbsConfig gc;
            gc.topics = K;
            gc.iterations = config.lda_iterations;
            gc.burn_in = config.lda_burn_in;
            gc.sample_lag = config.lda_sample_lag;
            gc.seed = config.seed + K;
            auto lda = topics::LdaModel::train(documents, gc);
            const auto model_path = out("lda_k" + std::to_string(K) + ".model");
            lda.save(model_path);
            record(model_path);

            features::Schema schema;
            schema.pos_tags.assign(observed_tags.begin(), observed_tags.end());
            schema.ne_categories = gazetteer.category_names();
            schema.liwc_categories = liwc.category_names();
            schema.topics = K;

            features::FeatureContext ctx;
            ctx.dict = &dict;
            ctx.liwc = &liwc;
            ctx.gazetteer = &gazetteer;
            ctx.lda = &lda;
            ctx.clarity_index = &clarity;
            ctx.fold_in_seed = config.seed;

            std::vector<std::vector<double>> rows;
            std::vector<std::optional<lexicon::Category>> opt_labels;
            for (std::size_t i = 0; i < profiles.size(); ++i) {
                rows.push_back(features::featurize(profiles[i], schema, ctx));
                opt_labels.emplace_back(ml_cats[i]);
            }
            const auto matrix_path = out("features_k" + std::to_string(K) + ".csv");
            features::export_matrix(matrix_path, schema, ml_words, opt_labels, rows);
            record(matrix_path);
            last_matrix_path = matrix_path;

            auto dataset = features::import_matrix(matrix_path).to_dataset();
            for (const auto& clf : classifiers) {
                learn::TrainConfig tc;
                tc.kind = clf == "svm" ? learn::ModelKind::linear_svm
                                       : learn::ModelKind::logistic;
                tc.seed = config.seed;
                auto report = learn::cross_validate(dataset, tc, config.folds, config.seed);
                const auto rep_path =
                    out("eval_k" + std::to_string(K) + "_" + clf + ".txt");
                write_text(rep_path, report.to_text());
                record(rep_path);
                char line[200];
                std::snprintf(line, sizeof line, "%zu\t%s\t%.2f\t%.3f\t%.3f\t%.3f\t%.3f\n",
                              K, clf.c_str(), report.accuracy, report.precision,
                              report.recall, report.f_score, report.roc_area);
                table2 << line;
            }
        }
        write_text(out("eval_summary.tsv"), table2.str());
        record(out("eval_summary.tsv"));

        Stage s7(manifest, "ranking-and-ablation");
        auto dataset = features::import_matrix(last_matrix_path).to_dataset();
        {
            auto ranking = learn::chi_square_rank(dataset, config.chi2_bins);
            std::ostringstream txt;
            char line[160];
            for (const auto& [name, chi2] : ranking.entries) {
                std::snprintf(line, sizeof line, "%s\t%.6g\n", name.c_str(), chi2);
                txt << line;
            }
            write_text(out("chi2_ranking.tsv"), txt.str());
            record(out("chi2_ranking.tsv"));
        }
        {
            learn::TrainConfig tc;
            tc.kind = classifiers.front() == "svm" ? learn::ModelKind::linear_svm
                                                   : learn::ModelKind::logistic;
            tc.seed = config.seed;
            const std::vector<std::set<std::string>> combos = {
                {"lexical", "content", "context"}, {"lexical", "content"},
                {"content", "context"},           {"lexical", "context"},
                {"content"},                      {"lexical"},
                {"context"}};
            std::ostringstream txt;
            txt << "families\taccuracy\n";
            for (const auto& fams : combos) {
                auto rep = learn::ablate_families(dataset, fams, tc, config.folds, config.seed);
                std::string name;
                for (const auto& f : fams) name += (name.empty() ? "" : "+") + f;
                char line[160];
                std::snprintf(line, sizeof line, "%s\t%.2f\n", name.c_str(), rep.accuracy);
                txt << line;
            }
            write_text(out("ablation.tsv"), txt.str());
            record(out("ablation.tsv"));
        }

        Stage s8(manifest, "timeseries");
        auto grid = features::cooccurrence_timeseries(labels, tweets, dict);
        features::export_timeseries(out("timeseries.csv"), grid);
        record(out("timeseries.csv"));

        manifest["stage"] = "done";
        manifest["complete"] = true;
        std::ofstream m(out("manifest.json"));
        m << manifest.dump(2) << '\n';
    } catch (const std::exception& e) {
        manifest["error"] = e.what();
        std::ofstream m(out("manifest.json"));
        m << manifest.dump(2) << '\n';
        throw std::runtime_error("pipeline stage '" +
                                 manifest["stage"].get<std::string>() + "' failed: " + e.what());
    }
}

}  // namespace oovcat::pipeline
