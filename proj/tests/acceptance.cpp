// Acceptance harness: one pass/fail line per criterion, non-zero exit on
// any failure. Criteria 7-9 share two runs of the full synthetic pipeline.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oovcat/corpus.hpp"
#include "oovcat/features.hpp"
#include "oovcat/kernels.hpp"
#include "oovcat/learn.hpp"
#include "oovcat/lexicon.hpp"
#include "oovcat/pipeline.hpp"
#include "oovcat/rules.hpp"
#include "oovcat/synth.hpp"
#include "oovcat/topics.hpp"

using namespace oovcat;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

void criterion(int n, const std::string& title, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    if (error.empty()) {
        std::cout << "criterion " << n << " [" << title << "]: PASS (" << ms << " ms)\n";
    } else {
        ++failures;
        std::cout << "criterion " << n << " [" << title << "]: FAIL (" << ms
                  << " ms) -- " << error << "\n";
    }
    std::cout.flush();
}

std::string data_path(const std::string& name) {
    const char* base = std::getenv("OOVCAT_DATA");
    if (!base) throw std::runtime_error("OOVCAT_DATA is not set");
    return std::string(base) + "/" + name;
}

// ---- criteria 7-9 shared state -------------------------------------------

struct PipelineRun {
    fs::path dir;
    std::map<std::string, std::string> digests;  // artifact name -> fnv digest
};

fs::path scratch_root() {
    auto p = fs::temp_directory_path() / "oovcat_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

PipelineRun run_synthetic_pipeline(const fs::path& root, const std::string& name) {
    PipelineRun run;
    run.dir = root / name;

    pipeline::PipelineConfig cfg;
    cfg.corpus_path = (root / "synth_corpus.jsonl").string();
    cfg.dictionary_path = data_path("dict_en.txt");
    cfg.liwc_path = data_path("liwc_demo.lex");
    cfg.gazetteer_path = data_path("gazetteer.lex");
    cfg.label_path = (root / "synth_labels.tsv").string();
    cfg.output_dir = run.dir.string();
    cfg.k_list = {10};
    cfg.classifier = "both";
    cfg.folds = 10;
    cfg.seed = 7;
    cfg.lda_iterations = 500;
    cfg.lda_burn_in = 150;
    cfg.lda_sample_lag = 10;
    cfg.vocab_min_count = 2;
    cfg.baseline_tagger = true;
    cfg.stable_top_n = 3500;
    pipeline::run_pipeline(cfg);

    for (const auto& e : fs::directory_iterator(run.dir)) {
        if (e.path().filename() == "manifest.json") continue;
        run.digests[e.path().filename().string()] = pipeline::file_digest(e.path().string());
    }
    return run;
}

std::map<std::string, std::map<std::string, double>> read_eval_summary(const fs::path& p) {
    // K \t classifier \t accuracy \t ... ; key: classifier -> column -> value
    std::ifstream in(p);
    check(bool(in), "cannot open " + p.string());
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, std::map<std::string, double>> out;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string k, clf;
        double acc, prec, rec, f, auc;
        ss >> k >> clf >> acc >> prec >> rec >> f >> auc;
        out[clf] = {{"accuracy", acc}, {"precision", prec}, {"recall", rec},
                    {"f", f},          {"auc", auc}};
    }
    return out;
}

std::map<std::string, double> read_ablation(const fs::path& p) {
    std::ifstream in(p);
    check(bool(in), "cannot open " + p.string());
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, double> out;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string fams;
        double acc;
        ss >> fams >> acc;
        out[fams] = acc;
    }
    return out;
}

}  // namespace

int main() {
    // ---- 1: rule-stage goldens -------------------------------------------
    criterion(1, "rule-stage goldens", [] {
        auto dict = lexicon::Dictionary::load(data_path("dict_en.txt"));
        for (const char* e : {":)", ":(", ":D", ":P", ":/"})
            check(rules::classify_emoticon(e), std::string("emoticon rejected: ") + e);
        const std::vector<std::pair<std::string, std::string>> lengthened = {
            {"noooo", "no"}, {"pleaseeee", "please"}, {"okk", "ok"}, {"damnnn", "damn"}};
        for (const auto& [in, expect] : lengthened) {
            auto v = rules::classify_lengthening(in, dict);
            check(v.normalized_form && *v.normalized_form == expect,
                  in + " did not normalize to " + expect);
        }
        for (const char* s : {"lol", "omg", "yolo", "rofl", "oomf"}) {
            check(!rules::classify_emoticon(s), std::string(s) + " matched the emoticon rule");
            auto v = rules::classify_lengthening(s, dict);
            check(!v.category, std::string(s) + " matched the lengthening rule");
        }
    });

    // ---- 2: entropy / KL oracles -----------------------------------------
    criterion(2, "entropy and KL oracles", [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.01, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 2 + trial % 19;
            std::vector<double> p(n), q(n);
            double sp = 0, sq = 0;
            for (std::size_t i = 0; i < n; ++i) {
                sp += (p[i] = u(rng));
                sq += (q[i] = u(rng));
            }
            for (std::size_t i = 0; i < n; ++i) {
                p[i] /= sp;
                q[i] /= sq;
            }
            double direct = 0;
            for (double v : p) direct -= v * std::log2(v);
            const double h = features::entropy(p);
            check(std::abs(h - direct) <= 1e-9, "entropy deviates from the oracle");
            check(h <= std::log2(double(n)) + 1e-9, "entropy exceeds log2(n)");
            check(kernels::kl_bits(p, q) >= -1e-9, "negative KL divergence");
            check(std::abs(kernels::kl_bits(p, p)) <= 1e-9, "KL(p,p) != 0");
        }
        std::vector<double> uniform(8, 0.125);
        check(std::abs(features::entropy(uniform) - 3.0) <= 1e-9, "uniform entropy != 3");
    });

    // ---- 3: LDA topic recovery -------------------------------------------
    criterion(3, "LDA recovery on disjoint vocabularies", [] {
        std::mt19937_64 rng(77);
        std::vector<std::string> va, vb;
        for (int i = 0; i < 50; ++i) {
            va.push_back("alpha" + std::to_string(i));
            vb.push_back("bravo" + std::to_string(i));
        }
        topics::DocumentCollection docs;
        docs.vocab = va;
        docs.vocab.insert(docs.vocab.end(), vb.begin(), vb.end());
        for (std::size_t i = 0; i < docs.vocab.size(); ++i) docs.vocab_index[docs.vocab[i]] = i;
        std::size_t total_tokens = 0;
        for (int d = 0; d < 40; ++d) {
            std::vector<std::size_t> doc;
            const std::size_t base = d < 20 ? 0 : 50;
            for (int t = 0; t < 80; ++t) doc.push_back(base + rng() % 50);
            total_tokens += doc.size();
            docs.docs.push_back(doc);
            docs.doc_names.push_back("doc" + std::to_string(d));
        }
        topics::GibbsConfig gc;
        gc.topics = 2;
        gc.alpha = 0.5;  // 80-token documents: 50/K smoothing would cap theta below 0.9
        gc.iterations = 500;
        gc.burn_in = 150;
        gc.sample_lag = 10;
        gc.seed = 5;
        auto model = topics::LdaModel::train(docs, gc);

        // count conservation over the final sweep state
        std::size_t dt = 0, tw = 0;
        for (std::size_t d = 0; d < docs.docs.size(); ++d) {
            std::size_t row = 0;
            for (auto c : model.doc_topic_counts()[d]) row += c;
            check(row == docs.docs[d].size(), "doc-topic row does not conserve doc length");
            dt += row;
        }
        for (std::size_t k = 0; k < 2; ++k) {
            std::size_t row = 0;
            for (auto c : model.topic_word_counts()[k]) row += c;
            check(row == model.topic_totals()[k], "topic-word row deviates from topic total");
            tw += row;
        }
        check(dt == total_tokens && tw == total_tokens, "token mass not conserved");

        // dominant topic > 0.9 for every document, consistently per block
        auto th0 = model.doc_topic_distribution(0);
        const std::size_t block_a = th0[0] > th0[1] ? 0 : 1;
        for (std::size_t d = 0; d < 40; ++d) {
            auto th = model.doc_topic_distribution(d);
            const std::size_t expect = d < 20 ? block_a : 1 - block_a;
            check(th[expect] > 0.9, "document " + std::to_string(d) +
                                        " dominant topic probability <= 0.9");
        }
    });

    // ---- 4: classifier correctness ---------------------------------------
    criterion(4, "gradient check and separable training", [] {
        std::mt19937_64 rng(4);
        std::normal_distribution<double> g(0.0, 1.0);
        const std::size_t n = 30, f = 10, c = 4;
        std::vector<std::vector<double>> x(n, std::vector<double>(f));
        std::vector<std::size_t> y(n);
        for (auto& row : x)
            for (auto& v : row) v = g(rng);
        for (auto& v : y) v = rng() % c;
        std::vector<std::vector<double>> w(c, std::vector<double>(f + 1));
        for (auto& row : w)
            for (auto& v : row) v = 0.2 * g(rng);
        std::vector<std::vector<double>> grad;
        learn::logistic_loss_and_grad(x, y, c, w, 1e-3, &grad);
        const double h = 1e-4;
        std::uniform_int_distribution<std::size_t> pc(0, c - 1), pf(0, f);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t ci = pc(rng), fi = pf(rng);
            auto wp = w, wm = w;
            wp[ci][fi] += h;
            wm[ci][fi] -= h;
            const double fd = (learn::logistic_loss_and_grad(x, y, c, wp, 1e-3, nullptr) -
                               learn::logistic_loss_and_grad(x, y, c, wm, 1e-3, nullptr)) /
                              (2 * h);
            const double an = grad[ci][fi];
            const double rel = std::abs(fd - an) / std::max({1.0, std::abs(fd), std::abs(an)});
            check(rel < 1e-5, "gradient check failed at relative error " + std::to_string(rel));
        }

        // separable 4-class blobs -> 100% training accuracy, both models
        learn::Dataset data;
        data.class_names = {"a", "b", "c", "d"};
        for (int j = 0; j < 6; ++j) {
            data.feature_names.push_back("f" + std::to_string(j));
            data.feature_families.push_back("content");
        }
        std::normal_distribution<double> noise(0.0, 0.25);
        for (std::size_t cls = 0; cls < 4; ++cls)
            for (int i = 0; i < 25; ++i) {
                std::vector<double> row(6);
                for (std::size_t j = 0; j < 6; ++j)
                    row[j] = (j % 4 == cls ? 4.0 : 0.0) + noise(rng);
                data.x.push_back(row);
                data.y.push_back(cls);
            }
        for (auto kind : {learn::ModelKind::logistic, learn::ModelKind::linear_svm}) {
            learn::TrainConfig tc;
            tc.kind = kind;
            tc.seed = 3;
            auto model = learn::train(data, tc);
            for (std::size_t i = 0; i < data.rows(); ++i)
                check(model.predict(data.x[i]) == data.y[i],
                      "separable training set not fit exactly");
        }
    });

    // ---- 5: metrics goldens ----------------------------------------------
    criterion(5, "metrics goldens", [] {
        std::vector<std::size_t> truth, pred;
        std::vector<std::vector<double>> scores;
        auto push = [&](std::size_t t, std::size_t p, int times) {
            for (int i = 0; i < times; ++i) {
                truth.push_back(t);
                pred.push_back(p);
                scores.push_back(p == 0 ? std::vector<double>{1.0, 0.0}
                                        : std::vector<double>{0.0, 1.0});
            }
        };
        push(0, 0, 8);
        push(0, 1, 2);
        push(1, 0, 3);
        push(1, 1, 7);
        auto rep = learn::metrics(truth, pred, scores, {"neg", "pos"});
        check(std::abs(rep.accuracy - 75.0) < 1e-9, "accuracy != 75%");
        check(std::abs(rep.per_class[0].precision - 8.0 / 11.0) < 1e-12,
              "class-0 precision != 8/11");
        check(std::abs(rep.per_class[0].recall - 0.8) < 1e-12, "class-0 recall != 0.8");

        // perfect predictor
        auto perfect = learn::metrics(truth, truth, [&] {
            std::vector<std::vector<double>> s;
            for (auto t : truth)
                s.push_back(t == 0 ? std::vector<double>{1.0, 0.0}
                                   : std::vector<double>{0.0, 1.0});
            return s;
        }(), {"neg", "pos"});
        check(std::abs(perfect.accuracy - 100.0) < 1e-9, "perfect accuracy != 100%");
        check(std::abs(perfect.precision - 1.0) < 1e-12 &&
                  std::abs(perfect.recall - 1.0) < 1e-12 &&
                  std::abs(perfect.f_score - 1.0) < 1e-12,
              "perfect P/R/F != 1");
        check(std::abs(perfect.roc_area - 1.0) < 1e-12, "perfect AUC != 1");

        // random scores on 1000 balanced instances: AUC within 0.5 +/- 0.05
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> s(1000);
        std::vector<bool> lab(1000);
        for (int i = 0; i < 1000; ++i) {
            s[i] = u(rng);
            lab[i] = i % 2 == 0;
        }
        const double auc = learn::binary_auc(s, lab);
        check(std::abs(auc - 0.5) <= 0.05, "random AUC " + std::to_string(auc));
    });

    // ---- 6: chi-square oracle --------------------------------------------
    criterion(6, "chi-square oracle", [] {
        learn::Dataset d;
        d.class_names = {"a", "b"};
        d.feature_names = {"signal", "constant"};
        d.feature_families = {"content", "content"};
        auto add = [&](std::size_t cls, double v, int times) {
            for (int i = 0; i < times; ++i) {
                d.x.push_back({v, 1.0});
                d.y.push_back(cls);
            }
        };
        add(0, 0.0, 10);
        add(0, 1.0, 20);
        add(1, 0.0, 20);
        add(1, 1.0, 10);
        auto rank = learn::chi_square_rank(d, 2);
        // closed form: N (ad-bc)^2 / ((a+b)(c+d)(a+c)(b+d)) = 60*90000/810000
        const double expect = 60.0 * 90000.0 / 810000.0;
        check(rank.entries.front().first == "signal", "signal feature not ranked first");
        check(std::abs(rank.entries.front().second - expect) <= 1e-3,
              "chi2 deviates from 6.667");
        check(rank.entries.back().first == "constant" && rank.entries.back().second == 0.0,
              "constant feature not last with chi2 = 0");
    });

    // ---- 7-9: shared synthetic pipeline ----------------------------------
    fs::path root;
    PipelineRun run1, run2;
    bool pipeline_ready = false;
    criterion(7, "end-to-end synthetic experiment", [&] {
        root = scratch_root();
        auto spec = synth::GeneratorSpec::demo(55);
        auto synthetic = synth::generate(spec);
        check(synthetic.labels.size() >= 200, "fewer than 200 planted OOV words");
        corpus::write_corpus((root / "synth_corpus.jsonl").string(), synthetic.tweets);
        lexicon::write_labels((root / "synth_labels.tsv").string(), synthetic.labels);

        run1 = run_synthetic_pipeline(root, "run1");
        auto evals = read_eval_summary(run1.dir / "eval_summary.tsv");
        for (const char* clf : {"svm", "logistic"}) {
            check(evals.count(clf), std::string("missing eval row for ") + clf);
            const double acc = evals[clf]["accuracy"];
            check(acc >= 90.0, std::string(clf) + " accuracy " + std::to_string(acc) +
                                   "% below 90%");
        }
        auto ablation = read_ablation(run1.dir / "ablation.tsv");
        check(ablation.count("content") && ablation.count("context"),
              "ablation grid missing single-family rows");
        check(ablation["content"] > ablation["context"],
              "content-only ablation (" + std::to_string(ablation["content"]) +
                  ") does not exceed context-only (" + std::to_string(ablation["context"]) +
                  ")");
        pipeline_ready = true;
    });

    criterion(8, "timeseries co-occurrence ordering", [&] {
        check(pipeline_ready, "pipeline run unavailable (criterion 7 failed)");
        auto dict = lexicon::Dictionary::load(data_path("dict_en.txt"));
        auto tweets = corpus::load_corpus_vec((root / "synth_corpus.jsonl").string());
        auto labels = lexicon::load_labels((root / "synth_labels.tsv").string());
        auto grid = features::cooccurrence_timeseries(labels, tweets, dict);
        const auto& emo = grid.at("emoticon");
        const auto& proper = grid.at("proper_noun");
        std::set<std::string> months;
        for (const auto& [m, _] : emo) months.insert(m);
        check(months.size() == 3, "expected 3 months of emoticon data");
        for (const auto& m : months) {
            check(proper.count(m) > 0, "proper_noun missing month " + m);
            for (const auto& [cat, row] : grid) {
                if (cat == "emoticon" || cat == "proper_noun") continue;
                auto it = row.find(m);
                if (it == row.end()) continue;
                check(emo.at(m) < it->second,
                      "emoticon not lowest in " + m + " (vs " + cat + ")");
                check(proper.at(m) > it->second,
                      "proper_noun not highest in " + m + " (vs " + cat + ")");
            }
            check(emo.at(m) < proper.at(m), "ordering inverted in " + m);
        }
    });

    criterion(9, "manifest-driven determinism", [&] {
        check(pipeline_ready, "pipeline run unavailable (criterion 7 failed)");
        run2 = run_synthetic_pipeline(root, "run2");
        check(run1.digests.size() == run2.digests.size(),
              "artifact sets differ between reruns");
        for (const auto& [name, digest] : run1.digests) {
            // config.json embeds the differing output_dir; every numeric
            // artifact must match bit-exactly
            if (name == "config.json") continue;
            auto it = run2.digests.find(name);
            check(it != run2.digests.end(), "rerun missing artifact " + name);
            check(it->second == digest, "artifact " + name + " differs between reruns");
        }
    });

    if (!root.empty()) fs::remove_all(root);
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << "\n";
    return failures == 0 ? 0 : 1;
}
