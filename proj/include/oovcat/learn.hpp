#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oovcat::learn {

struct Dataset {
    std::vector<std::vector<double>> x;          // N x F
    std::vector<std::size_t> y;                  // N, class ids
    std::vector<std::string> feature_names;      // F
    std::vector<std::string> feature_families;   // F, lexical/content/context
    std::vector<std::string> class_names;

    std::size_t rows() const { return x.size(); }
    std::size_t cols() const { return feature_names.size(); }
};

struct Standardizer {
    std::vector<double> mean, dev;  // constant columns get dev 0 and map to 0

    void fit(const std::vector<std::vector<double>>& x);
    std::vector<double> apply(const std::vector<double>& row) const;
};

enum class ModelKind { logistic, linear_svm };

struct TrainConfig {
    ModelKind kind = ModelKind::logistic;
    double l2 = 1e-4;        // logistic regularization
    double c = 1.0;          // svm cost
    std::size_t epochs = 200;
    double learning_rate = 0.1;  // decays as 1/sqrt(epoch)
    double tol = 1e-6;           // epoch-loss improvement stop
    std::uint64_t seed = 1;
};

struct TrainedModel {
    ModelKind kind = ModelKind::logistic;
    std::vector<std::vector<double>> weights;  // C x (F+1), bias last
    Standardizer standardizer;
    std::vector<std::string> class_names;
    // svm margin -> probability, per class (platt a, b); unused for logistic
    std::vector<std::pair<double, double>> calibration;

    std::vector<double> raw_scores(const std::vector<double>& row) const;  // margins / logits
    std::vector<double> probabilities(const std::vector<double>& row) const;
    std::size_t predict(const std::vector<double>& row) const;

    void save(const std::string& path) const;
    static TrainedModel load(const std::string& path);
};

TrainedModel train_logistic(const Dataset& train, const TrainConfig& cfg);
TrainedModel train_svm(const Dataset& train, const TrainConfig& cfg);
TrainedModel train(const Dataset& train, const TrainConfig& cfg);

// Full-batch objective and gradient on already-standardized data;
// exercised directly by the finite-difference check.
double logistic_loss_and_grad(const std::vector<std::vector<double>>& x,
                              const std::vector<std::size_t>& y, std::size_t classes,
                              const std::vector<std::vector<double>>& w, double l2,
                              std::vector<std::vector<double>>* grad);
double svm_objective(const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, const std::vector<double>& w, double c);

struct ClassMetrics {
    std::string name;
    std::size_t support = 0;
    double precision = 0, recall = 0, f1 = 0, auc = 0;
};

struct EvalReport {
    double accuracy = 0;  // percent
    double precision = 0, recall = 0, f_score = 0, roc_area = 0;  // weighted
    std::vector<ClassMetrics> per_class;
    std::vector<std::vector<std::size_t>> confusion;  // C x C, rows = truth
    std::vector<double> fold_accuracy;                // percent, per fold

    std::string to_text() const;
};

// scores[i][c]: score of instance i for class c; used for one-vs-rest AUC.
EvalReport metrics(const std::vector<std::size_t>& truth,
                   const std::vector<std::size_t>& predicted,
                   const std::vector<std::vector<double>>& scores,
                   const std::vector<std::string>& class_names);

double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive);

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<std::size_t>& y,
                                                       std::size_t folds,
                                                       std::uint64_t seed,
                                                       const std::vector<std::string>& class_names);

EvalReport cross_validate(const Dataset& data, const TrainConfig& cfg, std::size_t folds,
                          std::uint64_t seed);

struct FeatureRanking {
    std::vector<std::pair<std::string, double>> entries;  // descending chi2
};

FeatureRanking chi_square_rank(const Dataset& data, std::size_t bins = 10);

Dataset filter_families(const Dataset& data, const std::set<std::string>& families);

EvalReport ablate_families(const Dataset& data, const std::set<std::string>& families,
                           const TrainConfig& cfg, std::size_t folds, std::uint64_t seed);

}  // namespace oovcat::learn
