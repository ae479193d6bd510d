#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adatg {

// f(x) = sin(2*pi*x) + 0.5*sin(20*pi*x): frequency-1 and frequency-10
// components on [0, 1].
double freq1d_target(double x);

struct FreqExperimentConfig {
    int layers = 6;      // number of linear layers (ReLU between)
    int width = 200;
    double lr = 1e-3;
    int epochs = 10001;
    int sample_count = 512;  // periodic grid x_i = i / N
    std::vector<int> snapshot_epochs = {0, 100, 500, 1000, 3000, 10000};
    uint64_t seed = 0;
};

// Per-band residual loss at epoch e (state after e optimizer updates):
// squared projection amplitude, i.e. the band's contribution to the MSE
// objective up to a constant factor.
struct FreqBandRecord {
    int epoch = 0;
    double loss_low = 0.0;   // squared frequency-1 residual amplitude
    double loss_high = 0.0;  // squared frequency-10 residual amplitude
};

// Output spectrum amplitudes for frequency bins 0..N/2.
struct FreqSnapshot {
    int epoch = 0;
    std::vector<double> amplitude;
};

struct FreqExperimentResult {
    std::vector<FreqBandRecord> records;   // one per epoch 0..epochs-1
    std::vector<FreqSnapshot> snapshots;
};

// Complex projection amplitude of a periodic sample vector onto integer
// frequency k: (2/N) * |sum_i v_i exp(-2*pi*i*k*x_i)| (1/N at k = 0), which
// recovers the amplitude of a sin or cos component exactly.
double band_amplitude(const std::vector<double>& values, int k);

// Trains the dense ReLU network full-batch with Adam on the fixed grid and
// logs per-band residual amplitudes each epoch plus DFT snapshots. Throws
// (naming the epoch) on divergence.
FreqExperimentResult run_freq_experiment(const FreqExperimentConfig& config);

void write_freq_results(const std::string& out_dir, const FreqExperimentResult& result);

}  // namespace adatg
