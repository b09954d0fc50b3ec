#include "oovcat/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oovcat/kernels.hpp"

namespace oovcat::learn {

void Standardizer::fit(const std::vector<std::vector<double>>& x) {
    const std::size_t n = x.size();
    const std::size_t f = n ? x[0].size() : 0;
    mean.assign(f, 0.0);
    dev.assign(f, 0.0);
    if (n == 0) return;
    for (const auto& row : x) kernels::axpy(1.0, row, mean);
    kernels::scale(1.0 / double(n), mean);
    for (const auto& row : x)
        for (std::size_t j = 0; j < f; ++j) {
            double d = row[j] - mean[j];
            dev[j] += d * d;
        }
    for (std::size_t j = 0; j < f; ++j) {
        dev[j] = std::sqrt(dev[j] / double(n));
        if (dev[j] < 1e-12) dev[j] = 0.0;  // constant column, maps to zero
    }
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        out[j] = dev[j] > 0.0 ? (row[j] - mean[j]) / dev[j] : 0.0;
    return out;
}

namespace {

void softmax_inplace(std::vector<double>& z) {
    double mx = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (auto& v : z) {
        v = std::exp(v - mx);
        total += v;
    }
    for (auto& v : z) v /= total;
}

double score_one(const std::vector<double>& w, const std::vector<double>& row) {
    // w has F weights plus trailing bias
    return kernels::dot(std::span(w).first(row.size()), row) + w.back();
}

void check_trainable(const Dataset& d) {
    if (d.rows() == 0) throw std::runtime_error("train: empty dataset");
    if (d.class_names.size() < 2) throw std::runtime_error("train: need >= 2 classes");
    std::set<std::size_t> present(d.y.begin(), d.y.end());
    if (present.size() < 2) throw std::runtime_error("train: single-class training data");
}

// Platt scaling of margins to probabilities by gradient descent on the
// binary log loss.
std::pair<double, double> fit_platt(const std::vector<double>& margins,
                                    const std::vector<bool>& positive) {
    double a = 1.0, b = 0.0;
    const std::size_t n = margins.size();
    for (int iter = 0; iter < 300; ++iter) {
        double ga = 0.0, gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double p = 1.0 / (1.0 + std::exp(-(a * margins[i] + b)));
            double e = p - (positive[i] ? 1.0 : 0.0);
            ga += e * margins[i];
            gb += e;
        }
        a -= 0.01 * ga / double(n) * 10.0;
        b -= 0.01 * gb / double(n) * 10.0;
    }
    return {a, b};
}

}  // namespace

double logistic_loss_and_grad(const std::vector<std::vector<double>>& x,
                              const std::vector<std::size_t>& y, std::size_t classes,
                              const std::vector<std::vector<double>>& w, double l2,
                              std::vector<std::vector<double>>* grad) {
    const std::size_t n = x.size();
    const std::size_t f = n ? x[0].size() : 0;
    if (grad) grad->assign(classes, std::vector<double>(f + 1, 0.0));
    double loss = 0.0;
    std::vector<double> z(classes);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < classes; ++c) z[c] = score_one(w[c], x[i]);
        softmax_inplace(z);
        loss -= std::log(std::max(z[y[i]], 1e-300));
        if (grad) {
            for (std::size_t c = 0; c < classes; ++c) {
                double e = (z[c] - (c == y[i] ? 1.0 : 0.0)) / double(n);
                kernels::axpy(e, x[i], std::span((*grad)[c]).first(f));
                (*grad)[c][f] += e;
            }
        }
    }
    loss /= double(n);
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t j = 0; j < f; ++j) {  // bias unregularized
            loss += 0.5 * l2 * w[c][j] * w[c][j];
            if (grad) (*grad)[c][j] += l2 * w[c][j];
        }
    }
    return loss;
}

TrainedModel train_logistic(const Dataset& data, const TrainConfig& cfg) {
    check_trainable(data);
    const std::size_t classes = data.class_names.size();
    const std::size_t f = data.cols();

    TrainedModel m;
    m.kind = ModelKind::logistic;
    m.class_names = data.class_names;
    m.standardizer.fit(data.x);
    std::vector<std::vector<double>> xs(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) xs[i] = m.standardizer.apply(data.x[i]);

    m.weights.assign(classes, std::vector<double>(f + 1, 0.0));
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> z(classes);
    double prev_loss = std::numeric_limits<double>::infinity();
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        const double lr = cfg.learning_rate / std::sqrt(double(epoch));
        for (std::size_t i : order) {
            for (std::size_t c = 0; c < classes; ++c) z[c] = score_one(m.weights[c], xs[i]);
            softmax_inplace(z);
            for (std::size_t c = 0; c < classes; ++c) {
                const double e = z[c] - (c == data.y[i] ? 1.0 : 0.0);
                auto wspan = std::span(m.weights[c]).first(f);
                // grad = e*x + l2*w  ->  w -= lr*grad
                kernels::scale(1.0 - lr * cfg.l2, wspan);
                kernels::axpy(-lr * e, xs[i], wspan);
                m.weights[c][f] -= lr * e;
            }
        }
        const double loss = logistic_loss_and_grad(xs, data.y, classes, m.weights, cfg.l2, nullptr);
        if (prev_loss - loss < cfg.tol && loss <= prev_loss) break;
        prev_loss = loss;
    }
    return m;
}

double svm_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                     const std::vector<double>& w, double c) {
    const std::size_t n = x.size();
    const std::size_t f = n ? x[0].size() : 0;
    const double lambda = 1.0 / (c * double(n));
    double obj = 0.0;
    for (std::size_t j = 0; j < f; ++j) obj += 0.5 * lambda * w[j] * w[j];
    for (std::size_t i = 0; i < n; ++i) {
        double margin = double(y[i]) * score_one(w, x[i]);
        obj += std::max(0.0, 1.0 - margin) / double(n);
    }
    return obj;
}

TrainedModel train_svm(const Dataset& data, const TrainConfig& cfg) {
    check_trainable(data);
    if (cfg.c <= 0.0) throw std::runtime_error("train_svm: c must be positive");
    const std::size_t classes = data.class_names.size();
    const std::size_t f = data.cols();
    const std::size_t n = data.rows();

    TrainedModel m;
    m.kind = ModelKind::linear_svm;
    m.class_names = data.class_names;
    m.standardizer.fit(data.x);
    std::vector<std::vector<double>> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = m.standardizer.apply(data.x[i]);

    m.weights.assign(classes, std::vector<double>(f + 1, 0.0));
    const double lambda = 1.0 / (cfg.c * double(n));

    for (std::size_t c = 0; c < classes; ++c) {
        std::mt19937_64 rng(cfg.seed + c);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto& w = m.weights[c];
        std::vector<int> ylab(n);
        for (std::size_t i = 0; i < n; ++i) ylab[i] = data.y[i] == c ? 1 : -1;
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            const double lr = cfg.learning_rate / std::sqrt(double(epoch));
            for (std::size_t i : order) {
                const double margin = double(ylab[i]) * score_one(w, xs[i]);
                auto wspan = std::span(w).first(f);
                kernels::scale(1.0 - lr * lambda, wspan);
                if (margin < 1.0) {
                    kernels::axpy(lr * double(ylab[i]), xs[i], wspan);
                    w[f] += lr * double(ylab[i]);
                }
            }
            std::vector<double> wf(w.begin(), w.end());
            double obj = svm_objective(xs, ylab, wf, cfg.c);
            if (prev - obj < cfg.tol && obj <= prev) break;
            prev = obj;
        }
    }

    // Platt calibration on training margins, per class
    m.calibration.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        std::vector<double> margins(n);
        std::vector<bool> pos(n);
        for (std::size_t i = 0; i < n; ++i) {
            margins[i] = score_one(m.weights[c], xs[i]);
            pos[i] = data.y[i] == c;
        }
        m.calibration[c] = fit_platt(margins, pos);
    }
    return m;
}

TrainedModel train(const Dataset& data, const TrainConfig& cfg) {
    return cfg.kind == ModelKind::logistic ? train_logistic(data, cfg) : train_svm(data, cfg);
}

std::vector<double> TrainedModel::raw_scores(const std::vector<double>& row) const {
    auto xs = standardizer.apply(row);
    std::vector<double> z(weights.size());
    for (std::size_t c = 0; c < weights.size(); ++c) z[c] = score_one(weights[c], xs);
    return z;
}

std::vector<double> TrainedModel::probabilities(const std::vector<double>& row) const {
    auto z = raw_scores(row);
    if (kind == ModelKind::logistic) {
        softmax_inplace(z);
        return z;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        auto [a, b] = calibration[c];
        z[c] = 1.0 / (1.0 + std::exp(-(a * z[c] + b)));
        total += z[c];
    }
    if (total > 0.0)
        for (auto& v : z) v /= total;
    return z;
}

std::size_t TrainedModel::predict(const std::vector<double>& row) const {
    auto z = raw_scores(row);
    return std::size_t(std::max_element(z.begin(), z.end()) - z.begin());
}

void TrainedModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "model " << (kind == ModelKind::logistic ? "logistic" : "linear_svm") << '\n';
    out << class_names.size() << ' ' << (weights.empty() ? 0 : weights[0].size() - 1) << '\n';
    for (const auto& c : class_names) out << c << '\n';
    out << "mean";
    for (double v : standardizer.mean) out << ' ' << num(v);
    out << "\ndev";
    for (double v : standardizer.dev) out << ' ' << num(v);
    out << '\n';
    for (const auto& w : weights) {
        for (std::size_t j = 0; j < w.size(); ++j) out << (j ? " " : "") << num(w[j]);
        out << '\n';
    }
    out << "calibration " << calibration.size() << '\n';
    for (auto [a, b] : calibration) out << num(a) << ' ' << num(b) << '\n';
}

TrainedModel TrainedModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    std::string magic, kind_name;
    in >> magic >> kind_name;
    if (magic != "model") throw std::runtime_error("bad model file: " + path);
    TrainedModel m;
    m.kind = kind_name == "logistic" ? ModelKind::logistic : ModelKind::linear_svm;
    std::size_t classes = 0, f = 0;
    in >> classes >> f;
    m.class_names.resize(classes);
    for (auto& c : m.class_names) in >> c;
    std::string tag;
    in >> tag;  // mean
    m.standardizer.mean.resize(f);
    for (auto& v : m.standardizer.mean) in >> v;
    in >> tag;  // dev
    m.standardizer.dev.resize(f);
    for (auto& v : m.standardizer.dev) in >> v;
    m.weights.assign(classes, std::vector<double>(f + 1, 0.0));
    for (auto& w : m.weights)
        for (auto& v : w) in >> v;
    std::size_t ncal = 0;
    in >> tag >> ncal;  // calibration
    m.calibration.resize(ncal);
    for (auto& [a, b] : m.calibration) in >> a >> b;
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return m;
}

double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // midranks over ties
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid = 0.5 * (double(i) + double(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    double rank_sum = 0.0;
    std::size_t npos = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (positive[k]) {
            rank_sum += rank[k];
            ++npos;
        }
    }
    const std::size_t nneg = n - npos;
    if (npos == 0 || nneg == 0) return 0.5;
    return (rank_sum - double(npos) * double(npos + 1) / 2.0) /
           (double(npos) * double(nneg));
}

EvalReport metrics(const std::vector<std::size_t>& truth,
                   const std::vector<std::size_t>& predicted,
                   const std::vector<std::vector<double>>& scores,
                   const std::vector<std::string>& class_names) {
    if (truth.empty()) throw std::runtime_error("metrics: empty evaluation");
    const std::size_t classes = class_names.size();
    EvalReport rep;
    rep.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) ++rep.confusion[truth[i]][predicted[i]];

    std::size_t correct = 0;
    for (std::size_t c = 0; c < classes; ++c) correct += rep.confusion[c][c];
    rep.accuracy = 100.0 * double(correct) / double(truth.size());

    rep.per_class.resize(classes);
    double total_support = double(truth.size());
    for (std::size_t c = 0; c < classes; ++c) {
        auto& pc = rep.per_class[c];
        pc.name = class_names[c];
        std::size_t tp = rep.confusion[c][c], fp = 0, fn = 0;
        for (std::size_t o = 0; o < classes; ++o) {
            if (o == c) continue;
            fp += rep.confusion[o][c];
            fn += rep.confusion[c][o];
        }
        pc.support = tp + fn;
        pc.precision = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
        pc.recall = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
        pc.f1 = (pc.precision + pc.recall) > 0.0
                    ? 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall)
                    : 0.0;
        if (!scores.empty()) {
            std::vector<double> s(truth.size());
            std::vector<bool> pos(truth.size());
            for (std::size_t i = 0; i < truth.size(); ++i) {
                s[i] = scores[i][c];
                pos[i] = truth[i] == c;
            }
            pc.auc = binary_auc(s, pos);
        }
        const double w = double(pc.support) / total_support;
        rep.precision += w * pc.precision;
        rep.recall += w * pc.recall;
        rep.f_score += w * pc.f1;
        rep.roc_area += w * pc.auc;
    }
    return rep;
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<std::size_t>& y,
                                                       std::size_t folds,
                                                       std::uint64_t seed,
                                                       const std::vector<std::string>& class_names) {
    if (folds < 2) throw std::runtime_error("cross_validate: folds must be >= 2");
    std::vector<std::vector<std::size_t>> by_class(class_names.size());
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (!by_class[c].empty() && by_class[c].size() < folds)
            throw std::runtime_error("cross_validate: class '" + class_names[c] +
                                     "' has fewer members than folds");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> fold_sets(folds);
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i)
            fold_sets[i % folds].push_back(members[i]);
    }
    for (auto& fs : fold_sets) std::sort(fs.begin(), fs.end());
    return fold_sets;
}

EvalReport cross_validate(const Dataset& data, const TrainConfig& cfg, std::size_t folds,
                          std::uint64_t seed) {
    auto fold_sets = stratified_folds(data.y, folds, seed, data.class_names);

    std::vector<std::size_t> truth, predicted;
    std::vector<std::vector<double>> scores;
    std::vector<double> fold_acc;

    for (std::size_t fi = 0; fi < folds; ++fi) {
        const auto& test_idx = fold_sets[fi];
        std::vector<bool> in_test(data.rows(), false);
        for (auto i : test_idx) in_test[i] = true;

        Dataset train_set;
        train_set.feature_names = data.feature_names;
        train_set.feature_families = data.feature_families;
        train_set.class_names = data.class_names;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            if (!in_test[i]) {
                train_set.x.push_back(data.x[i]);
                train_set.y.push_back(data.y[i]);
            }
        }
        TrainConfig fold_cfg = cfg;
        fold_cfg.seed = cfg.seed + fi;
        auto model = train(train_set, fold_cfg);

        std::size_t correct = 0;
        for (auto i : test_idx) {
            auto pred = model.predict(data.x[i]);
            truth.push_back(data.y[i]);
            predicted.push_back(pred);
            scores.push_back(model.probabilities(data.x[i]));
            if (pred == data.y[i]) ++correct;
        }
        fold_acc.push_back(test_idx.empty() ? 0.0
                                            : 100.0 * double(correct) / double(test_idx.size()));
    }
    auto rep = metrics(truth, predicted, scores, data.class_names);
    rep.fold_accuracy = std::move(fold_acc);
    return rep;
}

FeatureRanking chi_square_rank(const Dataset& data, std::size_t bins) {
    if (bins < 2) throw std::runtime_error("chi_square_rank: bins must be >= 2");
    const std::size_t n = data.rows();
    const std::size_t classes = data.class_names.size();
    FeatureRanking ranking;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = data.x[i][j];
        // equal-frequency cut points, duplicates collapsed
        std::vector<double> sorted = col;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> cuts;  // upper edges of all but the last bin
        for (std::size_t b = 1; b < bins; ++b) {
            double q = sorted[b * n / bins];
            if (cuts.empty() || q > cuts.back()) cuts.push_back(q);
        }
        auto bin_of = [&](double v) {
            return std::size_t(std::lower_bound(cuts.begin(), cuts.end(),
                                                v, [](double c, double x) { return c <= x; }) -
                               cuts.begin());
        };
        const std::size_t nbins = cuts.size() + 1;
        std::vector<std::vector<double>> table(nbins, std::vector<double>(classes, 0.0));
        std::vector<double> row_tot(nbins, 0.0), col_tot(classes, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t b = bin_of(col[i]);
            table[b][data.y[i]] += 1.0;
            row_tot[b] += 1.0;
            col_tot[data.y[i]] += 1.0;
        }
        double chi2 = 0.0;
        for (std::size_t b = 0; b < nbins; ++b) {
            for (std::size_t c = 0; c < classes; ++c) {
                double expected = row_tot[b] * col_tot[c] / double(n);
                if (expected > 0.0) {
                    double d = table[b][c] - expected;
                    chi2 += d * d / expected;
                }
            }
        }
        ranking.entries.emplace_back(data.feature_names[j], chi2);
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    return ranking;
}

Dataset filter_families(const Dataset& data, const std::set<std::string>& families) {
    if (families.empty()) throw std::runtime_error("filter_families: empty family set");
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < data.cols(); ++j)
        if (families.count(data.feature_families[j])) keep.push_back(j);
    if (keep.empty()) throw std::runtime_error("filter_families: no features remain");
    Dataset out;
    out.y = data.y;
    out.class_names = data.class_names;
    for (auto j : keep) {
        out.feature_names.push_back(data.feature_names[j]);
        out.feature_families.push_back(data.feature_families[j]);
    }
    out.x.resize(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out.x[i].reserve(keep.size());
        for (auto j : keep) out.x[i].push_back(data.x[i][j]);
    }
    return out;
}

EvalReport ablate_families(const Dataset& data, const std::set<std::string>& families,
                           const TrainConfig& cfg, std::size_t folds, std::uint64_t seed) {
    return cross_validate(filter_families(data, families), cfg, folds, seed);
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "accuracy %.2f%%  precision %.3f  recall %.3f  f-score %.3f  roc-area %.3f\n",
                  accuracy, precision, recall, f_score, roc_area);
    out << buf;
    out << "class\tsupport\tprecision\trecall\tf1\tauc\n";
    for (const auto& pc : per_class) {
        std::snprintf(buf, sizeof buf, "%s\t%zu\t%.3f\t%.3f\t%.3f\t%.3f\n", pc.name.c_str(),
                      pc.support, pc.precision, pc.recall, pc.f1, pc.auc);
        out << buf;
    }
    if (!fold_accuracy.empty()) {
        out << "fold accuracy (%):";
        for (double a : fold_accuracy) {
            std::snprintf(buf, sizeof buf, " %.2f", a);
            out << buf;
        }
        out << '\n';
    }
    out << "confusion (rows = truth):\n";
    for (const auto& row : confusion) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
        out << '\n';
    }
    return out.str();
}

}  // namespace oovcat::learn
