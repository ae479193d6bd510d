#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "adatg/tokenizer.hpp"

namespace adatg {

using Mat = Eigen::MatrixXd;

struct ModelConfig {
    int token_dim = 0;       // flattened patch length, token class 0
    int token_dim_fine = 0;  // optional second class (0 = unused); mixed-size
                             // sequences and two-grid bands select the
                             // projection/head per token by its length
    int embed_dim = 64;
    int encoder_blocks = 2;
    int decoder_blocks = 1;
    int decoder_dim = 32;
    int heads = 4;
    double mlp_ratio = 4.0;
    double mask_ratio = 0.75;
    int max_tokens = 1024;

    void validate() const;
};

// Full-scale reference preset: 12 encoder blocks at 768, 4 decoder
// blocks at 256, patch 16 on 256x256 inputs.
ModelConfig reference_model_config();

// Small configuration used by tests and desk-scale runs.
ModelConfig desk_model_config();

struct MaskPlan {
    std::vector<int> kept_positions;    // sorted
    std::vector<int> masked_positions;  // sorted, |masked| = round(ratio * total)
    uint64_t seed = 0;
};

MaskPlan sample_mask(int num_tokens, double mask_ratio, uint64_t seed);

struct Param {
    std::string name;
    Mat value;
    Mat grad;
};

class MaeModel {
  public:
    MaeModel(const ModelConfig& config, uint64_t seed);
    ~MaeModel();
    MaeModel(MaeModel&&) noexcept;
    MaeModel& operator=(MaeModel&&) noexcept;

    const ModelConfig& config() const { return config_; }

    // Patch embedding + sinusoidal positional encoding (indexed by the given
    // sequence positions) + band embedding. Returns num_tokens x embed_dim.
    Mat embed_tokens(const std::vector<std::vector<double>>& tokens,
                     const std::vector<int>& positions, int band);

    // Full masked-autoencoder pass: encoder over kept positions only, decoder
    // over all positions with a learned mask token at masked ones, per-class
    // linear head. Returns one reconstructed token per position, same length
    // as the input token at that position. Caches activations for backward().
    std::vector<std::vector<double>> forward(const std::vector<std::vector<double>>& tokens,
                                             const std::vector<int>& positions, int band,
                                             const MaskPlan& plan);

    // Convenience overloads using positions 0..n-1.
    std::vector<std::vector<double>> forward(const TokenSequence& seq, int band,
                                             const MaskPlan& plan);

    // Accumulates parameter gradients for the most recent forward().
    void backward(const std::vector<std::vector<double>>& d_reconstruction);

    void zero_grad();
    std::vector<Param*> parameters();

    // Attention probability rows from the most recent forward, encoder blocks
    // first, one matrix per (block, head).
    std::vector<Mat> last_attention() const;

    void save_checkpoint(const std::string& path) const;
    static MaeModel load_checkpoint(const std::string& path);

  private:
    struct Impl;
    ModelConfig config_;
    std::unique_ptr<Impl> impl_;
};

// AdamW with decoupled weight decay; step() consumes accumulated gradients.
class AdamW {
  public:
    AdamW(std::vector<Param*> params, double lr, double weight_decay, double beta1 = 0.9,
          double beta2 = 0.999, double eps = 1e-8);
    void step();
    void set_lr(double lr) { lr_ = lr; }

  private:
    std::vector<Param*> params_;
    std::vector<Mat> m_, v_;
    double lr_, weight_decay_, beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace adatg
