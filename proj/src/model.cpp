#include "adatg/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "adatg/rng.hpp"

namespace adatg {

namespace {

constexpr double kLnEps = 1e-5;
constexpr char kCkptMagic[8] = {'A', 'D', 'T', 'G', 'C', 'K', 'P', '1'};

Mat gelu(const Mat& x) {
    return x.unaryExpr([](double v) { return 0.5 * v * (1.0 + std::erf(v * M_SQRT1_2)); });
}

Mat gelu_grad(const Mat& x) {
    return x.unaryExpr([](double v) {
        const double cdf = 0.5 * (1.0 + std::erf(v * M_SQRT1_2));
        const double pdf = std::exp(-0.5 * v * v) * 0.3989422804014326779399461;
        return cdf + v * pdf;
    });
}

void init_normal(Mat& m, Rng& rng, double stddev) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.normal(0.0, stddev);
}

// pe[pos, 2i] = sin(pos / 10000^(2i/d)), pe[pos, 2i+1] = cos(...).
Mat sinusoidal_positions(int max_tokens, int dim) {
    Mat pe(max_tokens, dim);
    for (int pos = 0; pos < max_tokens; ++pos)
        for (int i = 0; i < dim; ++i) {
            const double angle = pos * std::exp(-std::log(10000.0) * (2.0 * (i / 2)) / dim);
            pe(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    return pe;
}

struct Linear {
    Param weight;  // in x out
    Param bias;    // 1 x out
    Mat x_cache;

    void init(const std::string& name, int in, int out, Rng& rng) {
        weight.name = name + ".weight";
        weight.value.resize(in, out);
        init_normal(weight.value, rng, 0.02);
        weight.grad = Mat::Zero(in, out);
        bias.name = name + ".bias";
        bias.value = Mat::Zero(1, out);
        bias.grad = Mat::Zero(1, out);
    }

    Mat forward(const Mat& x) {
        x_cache = x;
        return (x * weight.value).rowwise() + bias.value.row(0);
    }

    Mat backward(const Mat& dy) {
        weight.grad.noalias() += x_cache.transpose() * dy;
        bias.grad.row(0) += dy.colwise().sum();
        return dy * weight.value.transpose();
    }

    void collect(std::vector<Param*>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }
};

struct LayerNorm {
    Param gamma, beta;  // 1 x dim
    Mat xhat_cache;
    Eigen::VectorXd inv_std_cache;

    void init(const std::string& name, int dim) {
        gamma.name = name + ".gamma";
        gamma.value = Mat::Ones(1, dim);
        gamma.grad = Mat::Zero(1, dim);
        beta.name = name + ".beta";
        beta.value = Mat::Zero(1, dim);
        beta.grad = Mat::Zero(1, dim);
    }

    Mat forward(const Mat& x) {
        const Eigen::Index n = x.rows(), d = x.cols();
        xhat_cache.resize(n, d);
        inv_std_cache.resize(n);
        Mat out(n, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = x.row(i).mean();
            const double var = (x.row(i).array() - mu).square().mean();
            const double inv = 1.0 / std::sqrt(var + kLnEps);
            inv_std_cache(i) = inv;
            xhat_cache.row(i) = (x.row(i).array() - mu) * inv;
            out.row(i) = xhat_cache.row(i).cwiseProduct(gamma.value.row(0)) + beta.value.row(0);
        }
        return out;
    }

    Mat backward(const Mat& dy) {
        const Eigen::Index n = dy.rows(), d = dy.cols();
        Mat dx(n, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            gamma.grad.row(0) += dy.row(i).cwiseProduct(xhat_cache.row(i));
            beta.grad.row(0) += dy.row(i);
            const Eigen::RowVectorXd dxhat = dy.row(i).cwiseProduct(gamma.value.row(0));
            const double m1 = dxhat.mean();
            const double m2 = dxhat.cwiseProduct(xhat_cache.row(i)).mean();
            dx.row(i) =
                inv_std_cache(i) * (dxhat.array() - m1 - xhat_cache.row(i).array() * m2).matrix();
        }
        return dx;
    }

    void collect(std::vector<Param*>& out) {
        out.push_back(&gamma);
        out.push_back(&beta);
    }
};

struct MultiHeadAttention {
    Linear qkv;   // dim -> 3*dim
    Linear proj;  // dim -> dim
    int heads = 1;
    int dim = 0;
    std::vector<Mat> q_cache, k_cache, v_cache, attn_cache;

    void init(const std::string& name, int d, int h, Rng& rng) {
        dim = d;
        heads = h;
        qkv.init(name + ".qkv", d, 3 * d, rng);
        proj.init(name + ".proj", d, d, rng);
    }

    Mat forward(const Mat& x) {
        const Eigen::Index t = x.rows();
        const int dh = dim / heads;
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        const Mat qkv_out = qkv.forward(x);
        q_cache.assign(heads, Mat());
        k_cache.assign(heads, Mat());
        v_cache.assign(heads, Mat());
        attn_cache.assign(heads, Mat());
        Mat context(t, dim);
        for (int h = 0; h < heads; ++h) {
            q_cache[h] = qkv_out.middleCols(h * dh, dh);
            k_cache[h] = qkv_out.middleCols(dim + h * dh, dh);
            v_cache[h] = qkv_out.middleCols(2 * dim + h * dh, dh);
            Mat scores = q_cache[h] * k_cache[h].transpose() * scale;
            // row-wise softmax with max subtraction
            Mat& probs = attn_cache[h];
            probs.resize(t, t);
            for (Eigen::Index i = 0; i < t; ++i) {
                const double mx = scores.row(i).maxCoeff();
                Eigen::RowVectorXd e = (scores.row(i).array() - mx).exp();
                probs.row(i) = e / e.sum();
            }
            context.middleCols(h * dh, dh) = probs * v_cache[h];
        }
        return proj.forward(context);
    }

    Mat backward(const Mat& dy) {
        const Mat dcontext = proj.backward(dy);
        const Eigen::Index t = dcontext.rows();
        const int dh = dim / heads;
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        Mat dqkv(t, 3 * dim);
        for (int h = 0; h < heads; ++h) {
            const Mat dctx_h = dcontext.middleCols(h * dh, dh);
            const Mat& probs = attn_cache[h];
            Mat dprobs = dctx_h * v_cache[h].transpose();
            Mat dv = probs.transpose() * dctx_h;
            Mat dscores(t, t);
            for (Eigen::Index i = 0; i < t; ++i) {
                const double dot = dprobs.row(i).dot(probs.row(i));
                dscores.row(i) =
                    probs.row(i).cwiseProduct((dprobs.row(i).array() - dot).matrix());
            }
            dscores *= scale;
            dqkv.middleCols(h * dh, dh) = dscores * k_cache[h];
            dqkv.middleCols(dim + h * dh, dh) = dscores.transpose() * q_cache[h];
            dqkv.middleCols(2 * dim + h * dh, dh) = dv;
        }
        return qkv.backward(dqkv);
    }

    void collect(std::vector<Param*>& out) {
        qkv.collect(out);
        proj.collect(out);
    }
};

// Pre-norm transformer block: x + attn(ln1(x)), then h + mlp(ln2(h)).
struct TransformerBlock {
    LayerNorm ln1, ln2;
    MultiHeadAttention attn;
    Linear fc1, fc2;
    Mat fc1_out_cache;

    void init(const std::string& name, int dim, int heads, double mlp_ratio, Rng& rng) {
        ln1.init(name + ".ln1", dim);
        ln2.init(name + ".ln2", dim);
        attn.init(name + ".attn", dim, heads, rng);
        const int hidden = std::max(1, static_cast<int>(std::lround(dim * mlp_ratio)));
        fc1.init(name + ".mlp.fc1", dim, hidden, rng);
        fc2.init(name + ".mlp.fc2", hidden, dim, rng);
    }

    Mat forward(const Mat& x) {
        const Mat h = x + attn.forward(ln1.forward(x));
        fc1_out_cache = fc1.forward(ln2.forward(h));
        return h + fc2.forward(gelu(fc1_out_cache));
    }

    Mat backward(const Mat& dout) {
        const Mat dgelu_out = fc2.backward(dout);
        const Mat dfc1_out = dgelu_out.cwiseProduct(gelu_grad(fc1_out_cache));
        const Mat dh = dout + ln2.backward(fc1.backward(dfc1_out));
        return dh + ln1.backward(attn.backward(dh));
    }

    void collect(std::vector<Param*>& out) {
        ln1.collect(out);
        attn.collect(out);
        ln2.collect(out);
        fc1.collect(out);
        fc2.collect(out);
    }
};

}  // namespace

void ModelConfig::validate() const {
    if (token_dim < 1) throw std::invalid_argument("ModelConfig: token_dim must be >= 1");
    if (token_dim_fine < 0 || token_dim_fine == token_dim)
        throw std::invalid_argument("ModelConfig: token_dim_fine must be 0 or differ from token_dim");
    if (embed_dim < 1 || decoder_dim < 1 || encoder_blocks < 1 || decoder_blocks < 1)
        throw std::invalid_argument("ModelConfig: all dimensions and depths must be >= 1");
    if (heads < 1 || embed_dim % heads != 0 || decoder_dim % heads != 0)
        throw std::invalid_argument("ModelConfig: embed_dim and decoder_dim must be divisible by heads");
    if (!(mask_ratio > 0.0 && mask_ratio < 1.0))
        throw std::invalid_argument("ModelConfig: mask_ratio must be in (0, 1)");
    if (max_tokens < 1) throw std::invalid_argument("ModelConfig: max_tokens must be >= 1");
}

ModelConfig reference_model_config() {
    ModelConfig c;
    c.token_dim = 1024;  // 32x32 coarse patches on 256x256, order 3
    c.token_dim_fine = 256;  // 16x16 fine patches, order 4
    c.embed_dim = 768;
    c.encoder_blocks = 12;
    c.decoder_blocks = 4;
    c.decoder_dim = 256;
    c.heads = 8;
    c.mlp_ratio = 4.0;
    c.mask_ratio = 0.75;
    c.max_tokens = 1024;
    return c;
}

ModelConfig desk_model_config() {
    ModelConfig c;
    c.token_dim = 256;      // coarse patches; callers override per geometry
    c.token_dim_fine = 64;  // fine patches
    c.embed_dim = 64;
    c.encoder_blocks = 2;
    c.decoder_blocks = 1;
    c.decoder_dim = 32;
    c.heads = 4;
    c.mlp_ratio = 4.0;
    c.mask_ratio = 0.25;
    c.max_tokens = 512;
    return c;
}

MaskPlan sample_mask(int num_tokens, double mask_ratio, uint64_t seed) {
    if (!(mask_ratio > 0.0 && mask_ratio < 1.0))
        throw std::invalid_argument("sample_mask: mask_ratio must be in (0, 1), got " +
                                    std::to_string(mask_ratio));
    if (num_tokens < 1) throw std::invalid_argument("sample_mask: num_tokens must be >= 1");
    const int masked = static_cast<int>(std::lround(mask_ratio * num_tokens));
    std::vector<int> order(static_cast<size_t>(num_tokens));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    MaskPlan plan;
    plan.seed = seed;
    plan.masked_positions.assign(order.begin(), order.begin() + masked);
    plan.kept_positions.assign(order.begin() + masked, order.end());
    std::sort(plan.masked_positions.begin(), plan.masked_positions.end());
    std::sort(plan.kept_positions.begin(), plan.kept_positions.end());
    return plan;
}

struct MaeModel::Impl {
    // Token classes: class 0 = token_dim, class 1 = token_dim_fine.
    std::vector<int> class_dims;
    std::vector<Linear> embed;  // token_dim_k -> embed_dim
    Param band_embed;           // 2 x embed_dim
    Mat enc_positions;          // max_tokens x embed_dim, fixed
    Mat dec_positions;          // max_tokens x decoder_dim, fixed
    std::vector<TransformerBlock> enc_blocks;
    LayerNorm enc_norm;
    Linear dec_embed;  // embed_dim -> decoder_dim
    Param mask_token;  // 1 x decoder_dim
    std::vector<TransformerBlock> dec_blocks;
    LayerNorm dec_norm;
    std::vector<Linear> head;  // decoder_dim -> token_dim_k

    // forward context
    struct Ctx {
        std::vector<int> classes;     // per position
        std::vector<int> positions;   // per position
        std::vector<int> kept, masked;
        int band = 0;
        std::vector<Eigen::RowVectorXd> kept_tokens;  // inputs of kept rows
        Mat dec_final;                                // input rows of the heads
        bool valid = false;
    } ctx;

    int class_of(size_t token_len) const {
        for (size_t k = 0; k < class_dims.size(); ++k)
            if (static_cast<size_t>(class_dims[k]) == token_len) return static_cast<int>(k);
        throw std::invalid_argument("MaeModel: token length " + std::to_string(token_len) +
                                    " matches no configured token class");
    }
};

MaeModel::MaeModel(const ModelConfig& config, uint64_t seed)
    : config_(config), impl_(std::make_unique<Impl>()) {
    config_.validate();
    Rng rng(seed);
    impl_->class_dims.push_back(config_.token_dim);
    if (config_.token_dim_fine > 0) impl_->class_dims.push_back(config_.token_dim_fine);

    impl_->embed.resize(impl_->class_dims.size());
    for (size_t k = 0; k < impl_->class_dims.size(); ++k)
        impl_->embed[k].init("embed." + std::to_string(k), impl_->class_dims[k], config_.embed_dim,
                             rng);
    impl_->band_embed.name = "band_embed";
    impl_->band_embed.value.resize(2, config_.embed_dim);
    init_normal(impl_->band_embed.value, rng, 0.02);
    impl_->band_embed.grad = Mat::Zero(2, config_.embed_dim);

    impl_->enc_positions = sinusoidal_positions(config_.max_tokens, config_.embed_dim);
    impl_->dec_positions = sinusoidal_positions(config_.max_tokens, config_.decoder_dim);

    impl_->enc_blocks.resize(static_cast<size_t>(config_.encoder_blocks));
    for (int b = 0; b < config_.encoder_blocks; ++b)
        impl_->enc_blocks[b].init("encoder." + std::to_string(b), config_.embed_dim, config_.heads,
                                  config_.mlp_ratio, rng);
    impl_->enc_norm.init("encoder.norm", config_.embed_dim);

    impl_->dec_embed.init("decoder.embed", config_.embed_dim, config_.decoder_dim, rng);
    impl_->mask_token.name = "decoder.mask_token";
    impl_->mask_token.value.resize(1, config_.decoder_dim);
    init_normal(impl_->mask_token.value, rng, 0.02);
    impl_->mask_token.grad = Mat::Zero(1, config_.decoder_dim);

    impl_->dec_blocks.resize(static_cast<size_t>(config_.decoder_blocks));
    for (int b = 0; b < config_.decoder_blocks; ++b)
        impl_->dec_blocks[b].init("decoder." + std::to_string(b), config_.decoder_dim,
                                  config_.heads, config_.mlp_ratio, rng);
    impl_->dec_norm.init("decoder.norm", config_.decoder_dim);

    impl_->head.resize(impl_->class_dims.size());
    for (size_t k = 0; k < impl_->class_dims.size(); ++k)
        impl_->head[k].init("head." + std::to_string(k), config_.decoder_dim, impl_->class_dims[k],
                            rng);
}

MaeModel::~MaeModel() = default;
MaeModel::MaeModel(MaeModel&&) noexcept = default;
MaeModel& MaeModel::operator=(MaeModel&&) noexcept = default;

Mat MaeModel::embed_tokens(const std::vector<std::vector<double>>& tokens,
                           const std::vector<int>& positions, int band) {
    if (tokens.size() != positions.size())
        throw std::invalid_argument("embed_tokens: positions size mismatch");
    if (band < 0 || band > 1) throw std::invalid_argument("embed_tokens: band must be 0 or 1");
    Mat out(static_cast<Eigen::Index>(tokens.size()), config_.embed_dim);
    for (size_t i = 0; i < tokens.size(); ++i) {
        const int k = impl_->class_of(tokens[i].size());
        if (positions[i] < 0 || positions[i] >= config_.max_tokens)
            throw std::invalid_argument("embed_tokens: position " + std::to_string(positions[i]) +
                                        " outside max_tokens " + std::to_string(config_.max_tokens));
        const Eigen::Map<const Eigen::RowVectorXd> tok(tokens[i].data(),
                                                       static_cast<Eigen::Index>(tokens[i].size()));
        out.row(i) = tok * impl_->embed[k].weight.value + impl_->embed[k].bias.value.row(0) +
                     impl_->enc_positions.row(positions[i]) + impl_->band_embed.value.row(band);
    }
    return out;
}

std::vector<std::vector<double>> MaeModel::forward(const std::vector<std::vector<double>>& tokens,
                                                   const std::vector<int>& positions, int band,
                                                   const MaskPlan& plan) {
    const size_t n = tokens.size();
    if (positions.size() != n) throw std::invalid_argument("forward: positions size mismatch");
    if (plan.kept_positions.size() + plan.masked_positions.size() != n)
        throw std::invalid_argument("forward: mask plan does not cover the sequence (" +
                                    std::to_string(plan.kept_positions.size() +
                                                   plan.masked_positions.size()) +
                                    " vs " + std::to_string(n) + ")");
    if (band < 0 || band > 1) throw std::invalid_argument("forward: band must be 0 or 1");

    auto& ctx = impl_->ctx;
    ctx = Impl::Ctx{};
    ctx.band = band;
    ctx.positions = positions;
    ctx.kept = plan.kept_positions;
    ctx.masked = plan.masked_positions;
    ctx.classes.resize(n);
    for (size_t i = 0; i < n; ++i) ctx.classes[i] = impl_->class_of(tokens[i].size());

    // Encoder sees only kept rows.
    const size_t kc = ctx.kept.size();
    Mat x(static_cast<Eigen::Index>(kc), config_.embed_dim);
    ctx.kept_tokens.resize(kc);
    for (size_t r = 0; r < kc; ++r) {
        const int i = ctx.kept[r];
        const int k = ctx.classes[i];
        if (positions[i] < 0 || positions[i] >= config_.max_tokens)
            throw std::invalid_argument("forward: position outside max_tokens");
        ctx.kept_tokens[r] = Eigen::Map<const Eigen::RowVectorXd>(
            tokens[i].data(), static_cast<Eigen::Index>(tokens[i].size()));
        x.row(r) = ctx.kept_tokens[r] * impl_->embed[k].weight.value +
                   impl_->embed[k].bias.value.row(0) + impl_->enc_positions.row(positions[i]) +
                   impl_->band_embed.value.row(band);
    }
    for (auto& block : impl_->enc_blocks) x = block.forward(x);
    x = impl_->enc_norm.forward(x);

    // Decoder: projected kept embeddings scattered back, mask token elsewhere.
    const Mat kept_dec = impl_->dec_embed.forward(x);
    Mat d(static_cast<Eigen::Index>(n), config_.decoder_dim);
    for (size_t i = 0; i < n; ++i) d.row(i) = impl_->mask_token.value.row(0);
    for (size_t r = 0; r < kc; ++r) d.row(ctx.kept[r]) = kept_dec.row(r);
    for (size_t i = 0; i < n; ++i) d.row(i) += impl_->dec_positions.row(positions[i]);

    for (auto& block : impl_->dec_blocks) d = block.forward(d);
    ctx.dec_final = impl_->dec_norm.forward(d);

    std::vector<std::vector<double>> recon(n);
    for (size_t i = 0; i < n; ++i) {
        const int k = ctx.classes[i];
        const Eigen::RowVectorXd y =
            ctx.dec_final.row(i) * impl_->head[k].weight.value + impl_->head[k].bias.value.row(0);
        recon[i].assign(y.data(), y.data() + y.size());
        for (double v : recon[i])
            if (!std::isfinite(v))
                throw std::runtime_error("forward: non-finite reconstruction (diverged parameters)");
    }
    ctx.valid = true;
    return recon;
}

std::vector<std::vector<double>> MaeModel::forward(const TokenSequence& seq, int band,
                                                   const MaskPlan& plan) {
    std::vector<int> positions(seq.size());
    std::iota(positions.begin(), positions.end(), 0);
    return forward(seq.tokens, positions, band, plan);
}

void MaeModel::backward(const std::vector<std::vector<double>>& d_recon) {
    auto& ctx = impl_->ctx;
    if (!ctx.valid) throw std::logic_error("backward: no cached forward pass");
    const size_t n = ctx.classes.size();
    if (d_recon.size() != n) throw std::invalid_argument("backward: gradient size mismatch");

    // Heads (per class) back to the decoder output.
    Mat d_dec_final = Mat::Zero(static_cast<Eigen::Index>(n), config_.decoder_dim);
    for (size_t i = 0; i < n; ++i) {
        const int k = ctx.classes[i];
        const Eigen::Map<const Eigen::RowVectorXd> dy(
            d_recon[i].data(), static_cast<Eigen::Index>(d_recon[i].size()));
        impl_->head[k].weight.grad.noalias() += ctx.dec_final.row(i).transpose() * dy;
        impl_->head[k].bias.grad.row(0) += dy;
        d_dec_final.row(i) = dy * impl_->head[k].weight.value.transpose();
    }

    Mat dd = impl_->dec_norm.backward(d_dec_final);
    for (auto it = impl_->dec_blocks.rbegin(); it != impl_->dec_blocks.rend(); ++it)
        dd = it->backward(dd);

    // Scatter gradients: masked rows feed the mask token, kept rows feed the
    // decoder embedding and then the encoder stack.
    for (int i : ctx.masked) impl_->mask_token.grad.row(0) += dd.row(i);
    const size_t kc = ctx.kept.size();
    Mat d_kept_dec(static_cast<Eigen::Index>(kc), config_.decoder_dim);
    for (size_t r = 0; r < kc; ++r) d_kept_dec.row(r) = dd.row(ctx.kept[r]);

    Mat dx = impl_->dec_embed.backward(d_kept_dec);
    dx = impl_->enc_norm.backward(dx);
    for (auto it = impl_->enc_blocks.rbegin(); it != impl_->enc_blocks.rend(); ++it)
        dx = it->backward(dx);

    for (size_t r = 0; r < kc; ++r) {
        const int i = ctx.kept[r];
        const int k = ctx.classes[i];
        impl_->embed[k].weight.grad.noalias() += ctx.kept_tokens[r].transpose() * dx.row(r);
        impl_->embed[k].bias.grad.row(0) += dx.row(r);
        impl_->band_embed.grad.row(ctx.band) += dx.row(r);
    }
    ctx.valid = false;
}

void MaeModel::zero_grad() {
    for (Param* p : parameters()) p->grad.setZero();
}

std::vector<Param*> MaeModel::parameters() {
    std::vector<Param*> out;
    for (auto& e : impl_->embed) e.collect(out);
    out.push_back(&impl_->band_embed);
    for (auto& b : impl_->enc_blocks) b.collect(out);
    impl_->enc_norm.collect(out);
    impl_->dec_embed.collect(out);
    out.push_back(&impl_->mask_token);
    for (auto& b : impl_->dec_blocks) b.collect(out);
    impl_->dec_norm.collect(out);
    for (auto& h : impl_->head) h.collect(out);
    return out;
}

std::vector<Mat> MaeModel::last_attention() const {
    std::vector<Mat> out;
    for (const auto& b : impl_->enc_blocks)
        for (const auto& a : b.attn.attn_cache) out.push_back(a);
    for (const auto& b : impl_->dec_blocks)
        for (const auto& a : b.attn.attn_cache) out.push_back(a);
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoint: 8-byte magic, u32 config block length + key=value text, u32
// tensor count, then per tensor u32 name length + name, u32 rows, u32 cols,
// rows*cols little-endian float32 (column-major to match Eigen storage).

namespace {

void write_u32(std::ofstream& out, uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

uint32_t read_u32(std::ifstream& in, const std::string& path) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw std::runtime_error("load_checkpoint: " + path + ": truncated file");
    return v;
}

}  // namespace

void MaeModel::save_checkpoint(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out.write(kCkptMagic, 8);

    std::ostringstream cfg;
    cfg << "token_dim=" << config_.token_dim << "\n"
        << "token_dim_fine=" << config_.token_dim_fine << "\n"
        << "embed_dim=" << config_.embed_dim << "\n"
        << "encoder_blocks=" << config_.encoder_blocks << "\n"
        << "decoder_blocks=" << config_.decoder_blocks << "\n"
        << "decoder_dim=" << config_.decoder_dim << "\n"
        << "heads=" << config_.heads << "\n"
        << "mlp_ratio=" << config_.mlp_ratio << "\n"
        << "mask_ratio=" << config_.mask_ratio << "\n"
        << "max_tokens=" << config_.max_tokens << "\n";
    const std::string cfg_text = cfg.str();
    write_u32(out, static_cast<uint32_t>(cfg_text.size()));
    out.write(cfg_text.data(), static_cast<std::streamsize>(cfg_text.size()));

    auto params = const_cast<MaeModel*>(this)->parameters();
    write_u32(out, static_cast<uint32_t>(params.size()));
    for (const Param* p : params) {
        write_u32(out, static_cast<uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        write_u32(out, static_cast<uint32_t>(p->value.rows()));
        write_u32(out, static_cast<uint32_t>(p->value.cols()));
        std::vector<float> buf(static_cast<size_t>(p->value.size()));
        for (Eigen::Index i = 0; i < p->value.size(); ++i)
            buf[static_cast<size_t>(i)] = static_cast<float>(p->value.data()[i]);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("save_checkpoint: short write to " + path);
}

MaeModel MaeModel::load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::memcmp(magic, kCkptMagic, 8) != 0)
        throw std::runtime_error("load_checkpoint: " + path + ": bad magic at byte offset 0");

    const uint32_t cfg_len = read_u32(in, path);
    std::string cfg_text(cfg_len, '\0');
    in.read(cfg_text.data(), cfg_len);
    if (!in) throw std::runtime_error("load_checkpoint: " + path + ": truncated config block");

    ModelConfig cfg;
    std::istringstream lines(cfg_text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "token_dim") cfg.token_dim = std::stoi(val);
        else if (key == "token_dim_fine") cfg.token_dim_fine = std::stoi(val);
        else if (key == "embed_dim") cfg.embed_dim = std::stoi(val);
        else if (key == "encoder_blocks") cfg.encoder_blocks = std::stoi(val);
        else if (key == "decoder_blocks") cfg.decoder_blocks = std::stoi(val);
        else if (key == "decoder_dim") cfg.decoder_dim = std::stoi(val);
        else if (key == "heads") cfg.heads = std::stoi(val);
        else if (key == "mlp_ratio") cfg.mlp_ratio = std::stod(val);
        else if (key == "mask_ratio") cfg.mask_ratio = std::stod(val);
        else if (key == "max_tokens") cfg.max_tokens = std::stoi(val);
    }

    MaeModel model(cfg, 0);
    auto params = model.parameters();
    const uint32_t count = read_u32(in, path);
    if (count != params.size())
        throw std::runtime_error("load_checkpoint: " + path + ": expected " +
                                 std::to_string(params.size()) + " tensors, found " +
                                 std::to_string(count));
    for (Param* p : params) {
        const uint32_t name_len = read_u32(in, path);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in || name != p->name)
            throw std::runtime_error("load_checkpoint: " + path + ": tensor name mismatch, expected " +
                                     p->name);
        const uint32_t rows = read_u32(in, path);
        const uint32_t cols = read_u32(in, path);
        if (rows != static_cast<uint32_t>(p->value.rows()) ||
            cols != static_cast<uint32_t>(p->value.cols()))
            throw std::runtime_error("load_checkpoint: " + path + ": shape mismatch for " + p->name);
        std::vector<float> buf(static_cast<size_t>(rows) * cols);
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
            throw std::runtime_error("load_checkpoint: " + path + ": truncated tensor data for " +
                                     p->name);
        for (Eigen::Index i = 0; i < p->value.size(); ++i)
            p->value.data()[i] = static_cast<double>(buf[static_cast<size_t>(i)]);
    }
    return model;
}

AdamW::AdamW(std::vector<Param*> params, double lr, double weight_decay, double beta1, double beta2,
             double eps)
    : params_(std::move(params)), lr_(lr), weight_decay_(weight_decay), beta1_(beta1),
      beta2_(beta2), eps_(eps) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Param* p : params_) {
        m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    }
}

void AdamW::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t i = 0; i < params_.size(); ++i) {
        Param& p = *params_[i];
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
        const Mat mhat = m_[i] / bc1;
        const Mat vhat = v_[i] / bc2;
        p.value -= lr_ * weight_decay_ * p.value;
        p.value -= lr_ * (mhat.array() / (vhat.array().sqrt() + eps_)).matrix();
    }
}

}  // namespace adatg
