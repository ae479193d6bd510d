#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adatg/training.hpp"

namespace adatg {

// Resolved configuration for the nine-variant comparison matrix. The desk
// defaults keep every token class at or below the decoder width (so kept
// tokens are reconstructible for all variants) and pick k0 near the band
// energy balance point of the 32x32 synthetics.
struct ComparePreset {
    std::string name;
    int train_count = 32;
    int test_count = 8;
    int side = 32;
    int k0 = 8;
    int n1 = 3;
    int n2 = 4;
    int epochs = 80;
    int batch = 16;
    double lr = 3e-3;
    double weight_decay = 0.01;
    double mask_ratio = 0.15;
    double ran_tg_p = 0.05;
};

// Known presets: "desk" (the default) and "tiny" (smoke-test sized).
ComparePreset compare_preset(const std::string& name);

struct CompareRow {
    std::string variant;
    double initial_loss = 0.0;  // first logged loss_combined
    double final_loss = 0.0;    // last logged loss_combined
    EvalReport eval;
};

// Trains and evaluates every variant on a shared synthetic dataset. When
// out_dir is nonempty, writes per-variant records.csv under out_dir/<variant>/.
std::vector<CompareRow> run_compare(const ComparePreset& preset, uint64_t seed,
                                    const std::string& out_dir = "");

// Summary CSV: variant plus the five metric columns.
void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows);

// Per-variant mean and standard deviation of every metric.
void write_compare_detail_csv(const std::string& path, const std::vector<CompareRow>& rows);

std::vector<TrainVariant> all_variants();

}  // namespace adatg
