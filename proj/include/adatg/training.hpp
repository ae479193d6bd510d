#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "adatg/data.hpp"
#include "adatg/metrics.hpp"
#include "adatg/model.hpp"
#include "adatg/spectral.hpp"

namespace adatg {

// t -> high-band loss weight over a run of total_steps optimizer steps.
enum class ScheduleKind { Fixed, AdaLowHigh, AdaHighLow };

struct Schedule {
    ScheduleKind kind = ScheduleKind::Fixed;
    double alpha = 1.0;       // in [0, 1]
    long total_steps = 1;     // T
};

// High-band weight at step t:
//   fixed        -> alpha
//   ada_low_high -> alpha * t / T        (low first, shifting to high)
//   ada_high_low -> 1 - alpha * t / T    (the reverse schedule)
double weight_at(const Schedule& schedule, long t);

// One logged optimizer step. alpha_t is the high-band weight actually applied,
// so loss_combined == alpha_t * loss_high + (1 - alpha_t) * loss_low in every
// schedule, including the reverse one.
struct TrainRecord {
    long step = 0;
    double loss_high = 0.0;
    double loss_low = 0.0;
    double loss_combined = 0.0;
    double alpha_t = 0.0;
};

// l2 norm of the pixel difference between a band image and its detokenized
// reconstruction.
double band_loss(const GridImage& band_image, const GridImage& reconstructed);

// The compare matrix of encoding/training variants.
enum class TrainVariant {
    Base,        // raster ViT on the unsplit image
    HeVit,       // Hilbert encoding on the unsplit image
    FixedTg,     // two-grid Hilbert encoding, deterministic refinement
    RanTg,       // two-grid Hilbert encoding, Bernoulli(p) refinement per step
    HighOnly,    // spectral split, high band only (fixed alpha = 1)
    LowOnly,     // spectral split, low band only (fixed alpha = 0)
    AdatgHH,     // split, Hilbert both bands, ada_low_high
    AdatgNH,     // split, Hilbert high band, raster low band, ada_low_high
    AdaHighLow,  // AdatgHH with the reverse schedule
};

const char* variant_name(TrainVariant v);
TrainVariant variant_from_name(const std::string& name);

struct TrainConfig {
    TrainVariant variant = TrainVariant::AdatgHH;
    int side = 32;
    int k0 = 6;
    int n1 = 2;  // coarse Hilbert order
    int n2 = 3;  // fine Hilbert order
    int epochs = 50;
    int batch = 16;
    double lr = 1e-3;
    double weight_decay = 0.01;
    double ran_tg_p = 0.05;
    std::set<int> fixed_tg_mask;  // empty -> central four cells
    uint64_t seed = 0;
    ModelConfig model;  // token dims are filled in from the geometry

    // Schedule; alpha defaults to the variant's convention when negative.
    ScheduleKind schedule_kind = ScheduleKind::AdaLowHigh;
    double alpha = -1.0;

    // Optional periodic reconstruction snapshots under out_dir/snapshots.
    int snapshot_every = 0;
    std::string out_dir;

    bool schedule_explicit = false;  // set when kind/alpha came from the caller
};

// Fills token dims from the geometry and applies the variant's default
// schedule unless one was explicitly provided.
void finalize_train_config(TrainConfig& config);

// Full-scale reference hyperparameters, recorded but not run at desk scale.
TrainConfig reference_train_config();
TrainConfig desk_train_config(TrainVariant variant = TrainVariant::AdatgHH);

struct TrainResult {
    MaeModel model;
    std::vector<TrainRecord> records;
    Schedule schedule;
};

// Per epoch: shuffle, iterate minibatches; per step: spectral split at k0,
// tokenize each stream, masked-autoencoder forward, weighted band losses per
// the schedule, AdamW update, one TrainRecord. Deterministic in config.seed.
// Throws (naming the step) if the loss turns non-finite.
TrainResult train(const Dataset& dataset, TrainConfig config);

struct EvalAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 when n < 2
};

struct EvalReport {
    double mae_loss = 0.0;  // mean per-image l2 reconstruction loss
    EvalAggregate mse, psnr, ssim, ms_ssim;
    size_t count = 0;
};

// Metric aggregation over (original, reconstruction) pairs produced by an
// injectable provider; the model-backed evaluates below build on this.
EvalReport evaluate_reconstructions(
    const std::vector<GridImage>& test_set,
    const std::function<GridImage(const GridImage& original, size_t index)>& reconstruct);

// Two-grid evaluation: split at k0, reconstruct both bands through the model
// with seeded masks, merge, score against the original.
EvalReport evaluate(MaeModel& model, const std::vector<GridImage>& test_set, int k0, int n1, int n2,
                    uint64_t seed);

// Variant-aware evaluation used by the compare matrix.
EvalReport evaluate_variant(MaeModel& model, const TrainConfig& config,
                            const std::vector<GridImage>& test_set, uint64_t seed);

void write_records_csv(const std::string& path, const std::vector<TrainRecord>& records);
std::vector<TrainRecord> read_records_csv(const std::string& path);

}  // namespace adatg
