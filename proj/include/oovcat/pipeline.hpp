#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oovcat::pipeline {

struct PipelineConfig {
    std::string corpus_path;
    std::string dictionary_path;
    std::string liwc_path;
    std::string gazetteer_path;
    std::string label_path;
    std::string output_dir;
    std::size_t sample_cap = 5000;
    std::vector<std::size_t> k_list = {10, 20, 30, 40, 50};
    std::string classifier = "both";  // logistic | svm | both
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::size_t lda_iterations = 1000;
    std::size_t lda_burn_in = 200;
    std::size_t lda_sample_lag = 10;
    std::size_t vocab_min_count = 1;
    bool baseline_tagger = false;
    std::size_t chi2_bins = 10;
    std::size_t stable_top_n = 3500;

    static PipelineConfig load(const std::string& path);
    void save(const std::string& path) const;
    void validate() const;  // all referenced paths must exist
};

// hex FNV-1a 64 digest of a file's bytes, used by the run manifest
std::string file_digest(const std::string& path);

// Runs ingest -> inventory -> rule stage -> profiles -> LDA per K ->
// features -> CV per classifier -> chi2 ranking -> ablations ->
// timeseries, writing every artifact plus manifest.json under
// config.output_dir. Throws on stage failure after writing a partial
// manifest marked incomplete.
void run_pipeline(const PipelineConfig& config);

}  // namespace oovcat::pipeline
