#include "adatg/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "adatg/rng.hpp"
#include "adatg/tokenizer.hpp"

namespace adatg {

namespace {

// Seed stream tags.
constexpr uint64_t kSeedModel = 1;
constexpr uint64_t kSeedShuffle = 2;
constexpr uint64_t kSeedMask = 3;   // +s, occupies 3..4 mod 16
constexpr uint64_t kSeedEval = 5;   // +s, occupies 5..6 mod 16
constexpr uint64_t kSeedRanTg = 7;

struct StreamSpec {
    enum class Source { Full, Low, High };
    enum class Encode { Raster, Hilbert, FixedTg, RanTg };
    Source source = Source::Full;
    Encode encode = Encode::Hilbert;
    int order = 0;        // grid order of the encoding
    bool role_high = false;
    int band_id = 0;      // band embedding: 0 low/full, 1 high
};

bool is_two_stream(TrainVariant v) {
    switch (v) {
        case TrainVariant::HighOnly:
        case TrainVariant::LowOnly:
        case TrainVariant::AdatgHH:
        case TrainVariant::AdatgNH:
        case TrainVariant::AdaHighLow:
            return true;
        default:
            return false;
    }
}

std::vector<StreamSpec> make_streams(const TrainConfig& cfg) {
    using Src = StreamSpec::Source;
    using Enc = StreamSpec::Encode;
    switch (cfg.variant) {
        case TrainVariant::Base:
            return {{Src::Full, Enc::Raster, cfg.n2, true, 0}};
        case TrainVariant::HeVit:
            return {{Src::Full, Enc::Hilbert, cfg.n2, true, 0}};
        case TrainVariant::FixedTg:
            return {{Src::Full, Enc::FixedTg, cfg.n1, true, 0}};
        case TrainVariant::RanTg:
            return {{Src::Full, Enc::RanTg, cfg.n1, true, 0}};
        case TrainVariant::HighOnly:
        case TrainVariant::LowOnly:
        case TrainVariant::AdatgHH:
        case TrainVariant::AdaHighLow:
            return {{Src::Low, Enc::Hilbert, cfg.n1, false, 0},
                    {Src::High, Enc::Hilbert, cfg.n2, true, 1}};
        case TrainVariant::AdatgNH:
            return {{Src::Low, Enc::Raster, cfg.n1, false, 0},
                    {Src::High, Enc::Hilbert, cfg.n2, true, 1}};
    }
    throw std::logic_error("make_streams: unknown variant");
}

TokenSequence encode_stream(const StreamSpec& s, const TrainConfig& cfg, const GridImage& image,
                            long step) {
    const int patch = cfg.side >> s.order;
    switch (s.encode) {
        case StreamSpec::Encode::Raster:
            return tokenize_raster(image, patch);
        case StreamSpec::Encode::Hilbert:
            return tokenize_hilbert(image, patch);
        case StreamSpec::Encode::FixedTg:
            return tokenize_fixed_tg(
                image, s.order, cfg.fixed_tg_mask.empty() ? central_refine_mask(s.order)
                                                          : cfg.fixed_tg_mask);
        case StreamSpec::Encode::RanTg:
            return tokenize_ran_tg(image, s.order, cfg.ran_tg_p,
                                   derive_seed(cfg.seed, kSeedRanTg + 16 * static_cast<uint64_t>(step)));
    }
    throw std::logic_error("encode_stream: unknown encoding");
}

const GridImage& stream_source(const StreamSpec& s, const GridImage& full, const BandPair& bands) {
    switch (s.source) {
        case StreamSpec::Source::Full:
            return full;
        case StreamSpec::Source::Low:
            return bands.low;
        case StreamSpec::Source::High:
            return bands.high;
    }
    throw std::logic_error("stream_source: unknown source");
}

// l2 loss over all positions in token space (equals the pixel-space band loss
// up to summation order) and its gradient.
double token_loss_and_grad(const std::vector<std::vector<double>>& recon,
                           const std::vector<std::vector<double>>& target,
                           std::vector<std::vector<double>>* grad) {
    double sq = 0.0;
    for (size_t i = 0; i < recon.size(); ++i)
        for (size_t j = 0; j < recon[i].size(); ++j) {
            const double d = recon[i][j] - target[i][j];
            sq += d * d;
        }
    const double loss = std::sqrt(sq);
    if (grad) {
        grad->resize(recon.size());
        const double inv = loss > 0.0 ? 1.0 / loss : 0.0;
        for (size_t i = 0; i < recon.size(); ++i) {
            (*grad)[i].resize(recon[i].size());
            for (size_t j = 0; j < recon[i].size(); ++j)
                (*grad)[i][j] = (recon[i][j] - target[i][j]) * inv;
        }
    }
    return loss;
}

void scale_grad(std::vector<std::vector<double>>& grad, double s) {
    for (auto& row : grad)
        for (double& v : row) v *= s;
}

double sample_stddev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

double weight_at(const Schedule& schedule, long t) {
    if (t < 0 || t > schedule.total_steps)
        throw std::out_of_range("weight_at: step " + std::to_string(t) + " outside [0, " +
                                std::to_string(schedule.total_steps) + "]");
    const double ratio = static_cast<double>(t) / static_cast<double>(schedule.total_steps);
    switch (schedule.kind) {
        case ScheduleKind::Fixed:
            return schedule.alpha;
        case ScheduleKind::AdaLowHigh:
            return schedule.alpha * ratio;
        case ScheduleKind::AdaHighLow:
            return 1.0 - schedule.alpha * ratio;
    }
    throw std::logic_error("weight_at: unknown schedule kind");
}

double band_loss(const GridImage& band_image, const GridImage& reconstructed) {
    require_same_shape(band_image, reconstructed, "band_loss");
    double sq = 0.0;
    for (size_t i = 0; i < band_image.size(); ++i) {
        const double d = band_image.pixels[i] - reconstructed.pixels[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

const char* variant_name(TrainVariant v) {
    switch (v) {
        case TrainVariant::Base: return "base";
        case TrainVariant::HeVit: return "he_vit";
        case TrainVariant::FixedTg: return "fixed_tg";
        case TrainVariant::RanTg: return "ran_tg";
        case TrainVariant::HighOnly: return "high_only";
        case TrainVariant::LowOnly: return "low_only";
        case TrainVariant::AdatgHH: return "adatg_hh";
        case TrainVariant::AdatgNH: return "adatg_nh";
        case TrainVariant::AdaHighLow: return "ada_high_low";
    }
    return "?";
}

TrainVariant variant_from_name(const std::string& name) {
    static const std::vector<TrainVariant> all = {
        TrainVariant::Base,     TrainVariant::HeVit,   TrainVariant::FixedTg,
        TrainVariant::RanTg,    TrainVariant::HighOnly, TrainVariant::LowOnly,
        TrainVariant::AdatgHH,  TrainVariant::AdatgNH, TrainVariant::AdaHighLow};
    for (TrainVariant v : all)
        if (name == variant_name(v)) return v;
    throw std::invalid_argument("unknown variant: " + name);
}

void finalize_train_config(TrainConfig& cfg) {
    if (cfg.n1 >= cfg.n2)
        throw std::invalid_argument("TrainConfig: n1 must be < n2");
    if (cfg.side % (1 << cfg.n2) != 0 || cfg.side % (1 << (cfg.n1 + 1)) != 0)
        throw std::invalid_argument("TrainConfig: side must be divisible by 2^n2 and 2^(n1+1)");
    if (cfg.epochs < 1 || cfg.batch < 1)
        throw std::invalid_argument("TrainConfig: epochs and batch must be >= 1");

    const int coarse_patch = cfg.side >> cfg.n1;
    const int fine_patch = cfg.side >> cfg.n2;
    cfg.model.token_dim = coarse_patch * coarse_patch;
    cfg.model.token_dim_fine = fine_patch * fine_patch;
    const int sub_patch = coarse_patch / 2;  // TG refinement level
    if ((cfg.variant == TrainVariant::FixedTg || cfg.variant == TrainVariant::RanTg) &&
        sub_patch * sub_patch != cfg.model.token_dim_fine)
        throw std::invalid_argument(
            "TrainConfig: TG variants require n2 = n1 + 1 so refined subcells match the fine patch");
    const int max_seq = 1 << (2 * cfg.n2);
    cfg.model.max_tokens = std::max(cfg.model.max_tokens, max_seq);

    if (!cfg.schedule_explicit) {
        switch (cfg.variant) {
            case TrainVariant::HighOnly:
                cfg.schedule_kind = ScheduleKind::Fixed;
                cfg.alpha = 1.0;
                break;
            case TrainVariant::LowOnly:
                cfg.schedule_kind = ScheduleKind::Fixed;
                cfg.alpha = 0.0;
                break;
            case TrainVariant::AdaHighLow:
                cfg.schedule_kind = ScheduleKind::AdaHighLow;
                cfg.alpha = 1.0;
                break;
            case TrainVariant::AdatgHH:
            case TrainVariant::AdatgNH:
                cfg.schedule_kind = ScheduleKind::AdaLowHigh;
                cfg.alpha = 1.0;
                break;
            default:
                cfg.schedule_kind = ScheduleKind::Fixed;
                cfg.alpha = 0.5;
                break;
        }
    }
    if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
        throw std::invalid_argument("TrainConfig: alpha must be in [0, 1]");
}

TrainConfig reference_train_config() {
    TrainConfig cfg;
    cfg.variant = TrainVariant::AdatgHH;
    cfg.side = 256;
    cfg.k0 = 16;
    cfg.n1 = 3;
    cfg.n2 = 4;
    cfg.epochs = 1600;
    cfg.batch = 336;
    cfg.lr = 1.5e-5;
    cfg.weight_decay = 0.05;
    cfg.model = reference_model_config();
    return cfg;
}

TrainConfig desk_train_config(TrainVariant variant) {
    TrainConfig cfg;
    cfg.variant = variant;
    cfg.side = 32;
    cfg.k0 = 8;  // band-energy balance point of the 32x32 synthetics
    cfg.n1 = 3;
    cfg.n2 = 4;
    cfg.epochs = 50;
    cfg.batch = 16;
    cfg.lr = 3e-3;
    cfg.weight_decay = 0.01;
    cfg.model = desk_model_config();
    return cfg;
}

TrainResult train(const Dataset& dataset, TrainConfig cfg) {
    if (dataset.images.empty()) throw std::invalid_argument("train: dataset is empty");
    for (const auto& img : dataset.images)
        if (img.height != cfg.side || img.width != cfg.side)
            throw std::invalid_argument("train: dataset images must be " + std::to_string(cfg.side) +
                                        "x" + std::to_string(cfg.side));
    finalize_train_config(cfg);

    const auto streams = make_streams(cfg);
    const bool two_stream = is_two_stream(cfg.variant);
    const long n = static_cast<long>(dataset.images.size());
    const long steps_per_epoch = (n + cfg.batch - 1) / cfg.batch;
    Schedule schedule{cfg.schedule_kind, cfg.alpha,
                      std::max<long>(1, cfg.epochs * steps_per_epoch)};

    // Bands depend only on k0; precompute once.
    static const BandPair kNoBands{};
    std::vector<BandPair> bands;
    if (two_stream) {
        bands.reserve(dataset.images.size());
        for (const auto& img : dataset.images) bands.push_back(split_bands(img, cfg.k0));
    }

    MaeModel model(cfg.model, derive_seed(cfg.seed, kSeedModel));
    AdamW opt(model.parameters(), cfg.lr, cfg.weight_decay);

    const bool snapshots = cfg.snapshot_every > 0 && !cfg.out_dir.empty();
    if (snapshots) std::filesystem::create_directories(cfg.out_dir + "/snapshots");

    std::vector<TrainRecord> records;
    records.reserve(static_cast<size_t>(schedule.total_steps));
    std::vector<long> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    long step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, kSeedShuffle + 16 * static_cast<uint64_t>(epoch)));
        shuffle_rng.shuffle(order);
        for (long b0 = 0; b0 < n; b0 += cfg.batch, ++step) {
            const long bsz = std::min<long>(cfg.batch, n - b0);
            const double w_high = weight_at(schedule, step);
            model.zero_grad();

            double sum_high = 0.0, sum_low = 0.0;
            // One mask per stream per step, shared across the batch.
            std::vector<MaskPlan> plans(streams.size());
            std::vector<TokenSequence> first_seq(streams.size());
            for (size_t s = 0; s < streams.size(); ++s) {
                const long idx0 = order[b0];
                first_seq[s] = encode_stream(
                    streams[s], cfg,
                    stream_source(streams[s], dataset.images[idx0],
                                  two_stream ? bands[idx0] : kNoBands),
                    step);
                plans[s] = sample_mask(static_cast<int>(first_seq[s].size()), cfg.model.mask_ratio,
                                       derive_seed(cfg.seed, kSeedMask + 16 * static_cast<uint64_t>(step) + s));
            }

            for (long bi = 0; bi < bsz; ++bi) {
                const long idx = order[b0 + bi];
                for (size_t s = 0; s < streams.size(); ++s) {
                    const StreamSpec& spec = streams[s];
                    const TokenSequence seq =
                        (bi == 0) ? first_seq[s]
                                  : encode_stream(spec, cfg,
                                                  stream_source(spec, dataset.images[idx],
                                                                two_stream ? bands[idx] : kNoBands),
                                                  step);
                    std::vector<std::vector<double>> recon;
                    try {
                        recon = model.forward(seq, spec.band_id, plans[s]);
                    } catch (const std::runtime_error& e) {
                        throw std::runtime_error("train: diverged at step " + std::to_string(step) +
                                                 " (" + e.what() + ")");
                    }
                    const double weight = two_stream ? (spec.role_high ? w_high : 1.0 - w_high) : 1.0;
                    std::vector<std::vector<double>> grad;
                    const double loss =
                        token_loss_and_grad(recon, seq.tokens, weight > 0.0 ? &grad : nullptr);
                    if (!std::isfinite(loss))
                        throw std::runtime_error("train: non-finite loss at step " +
                                                 std::to_string(step));
                    if (spec.role_high)
                        sum_high += loss;
                    else
                        sum_low += loss;
                    if (weight > 0.0) {
                        scale_grad(grad, weight / static_cast<double>(bsz));
                        model.backward(grad);
                    }
                }
            }
            opt.step();

            TrainRecord rec;
            rec.step = step;
            rec.alpha_t = w_high;
            if (two_stream) {
                rec.loss_high = sum_high / static_cast<double>(bsz);
                rec.loss_low = sum_low / static_cast<double>(bsz);
            } else {
                // Single-stream variants log the same loss under both bands.
                rec.loss_high = sum_high / static_cast<double>(bsz);
                rec.loss_low = rec.loss_high;
            }
            rec.loss_combined = rec.alpha_t * rec.loss_high + (1.0 - rec.alpha_t) * rec.loss_low;
            records.push_back(rec);
        }

        if (snapshots && ((epoch + 1) % cfg.snapshot_every == 0 || epoch + 1 == cfg.epochs)) {
            // Snapshot: reconstruct image 0 with the current parameters.
            const GridImage& original = dataset.images[0];
            GridImage merged(cfg.side, cfg.side);
            for (size_t s = 0; s < streams.size(); ++s) {
                const StreamSpec& spec = streams[s];
                const GridImage& src =
                    stream_source(spec, original, two_stream ? bands[0] : kNoBands);
                TokenSequence seq = encode_stream(spec, cfg, src, step > 0 ? step - 1 : 0);
                const MaskPlan plan =
                    sample_mask(static_cast<int>(seq.size()), cfg.model.mask_ratio,
                                derive_seed(cfg.seed, kSeedEval + 16 * static_cast<uint64_t>(epoch) + s));
                const auto recon = model.forward(seq, spec.band_id, plan);
                TokenSequence out = seq;
                out.tokens = recon;
                const GridImage img = detokenize(out);
                for (size_t i = 0; i < merged.size(); ++i) merged.pixels[i] += img.pixels[i];
            }
            char name[64];
            std::snprintf(name, sizeof(name), "/snapshots/epoch_%05d.pgm", epoch + 1);
            write_pgm(cfg.out_dir + name, normalize_to_unit(merged));
        }
    }

    return TrainResult{std::move(model), std::move(records), schedule};
}

EvalReport evaluate_reconstructions(
    const std::vector<GridImage>& test_set,
    const std::function<GridImage(const GridImage&, size_t)>& reconstruct) {
    if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
    std::vector<double> losses, mses, psnrs, ssims, msssims;
    for (size_t i = 0; i < test_set.size(); ++i) {
        const GridImage& orig = test_set[i];
        const GridImage rec = reconstruct(orig, i);
        require_same_shape(orig, rec, "evaluate");
        losses.push_back(band_loss(orig, rec));
        const double peak = infer_peak(orig, rec);
        const MetricReport r = compute_report(orig, rec, peak);
        mses.push_back(r.mse);
        psnrs.push_back(r.psnr);
        ssims.push_back(r.ssim);
        msssims.push_back(r.ms_ssim);
    }
    auto aggregate = [](const std::vector<double>& xs) {
        EvalAggregate a;
        a.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        a.stddev = sample_stddev(xs, a.mean);
        return a;
    };
    EvalReport report;
    report.count = test_set.size();
    report.mae_loss =
        std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
    report.mse = aggregate(mses);
    report.psnr = aggregate(psnrs);
    report.ssim = aggregate(ssims);
    report.ms_ssim = aggregate(msssims);
    return report;
}

namespace {

GridImage reconstruct_streams(MaeModel& model, const std::vector<StreamSpec>& streams,
                              const TrainConfig& cfg, const GridImage& original, bool two_stream,
                              uint64_t seed, size_t index) {
    BandPair bands;
    if (two_stream) bands = split_bands(original, cfg.k0);
    GridImage merged(original.height, original.width);
    for (size_t s = 0; s < streams.size(); ++s) {
        const StreamSpec& spec = streams[s];
        // High-/Low-only models are scored on the band they trained on.
        const bool untrained_band = (cfg.variant == TrainVariant::HighOnly && !spec.role_high) ||
                                    (cfg.variant == TrainVariant::LowOnly && spec.role_high);
        if (untrained_band) continue;
        const GridImage& src = stream_source(spec, original, bands);
        TokenSequence seq = encode_stream(spec, cfg, src, 0);
        const MaskPlan plan =
            sample_mask(static_cast<int>(seq.size()), cfg.model.mask_ratio,
                        derive_seed(seed, kSeedEval + 16 * static_cast<uint64_t>(index) + s));
        const auto recon = model.forward(seq, spec.band_id, plan);
        TokenSequence out = seq;
        out.tokens = recon;
        const GridImage img = detokenize(out);
        for (size_t i = 0; i < merged.size(); ++i) merged.pixels[i] += img.pixels[i];
    }
    return merged;
}

}  // namespace

EvalReport evaluate(MaeModel& model, const std::vector<GridImage>& test_set, int k0, int n1, int n2,
                    uint64_t seed) {
    TrainConfig cfg;
    cfg.variant = TrainVariant::AdatgHH;
    cfg.side = test_set.empty() ? 0 : test_set[0].width;
    cfg.k0 = k0;
    cfg.n1 = n1;
    cfg.n2 = n2;
    cfg.model = model.config();
    return evaluate_variant(model, cfg, test_set, seed);
}

EvalReport evaluate_variant(MaeModel& model, const TrainConfig& config,
                            const std::vector<GridImage>& test_set, uint64_t seed) {
    if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
    const auto streams = make_streams(config);
    const bool two_stream = is_two_stream(config.variant);
    return evaluate_reconstructions(test_set, [&](const GridImage& orig, size_t i) {
        return reconstruct_streams(model, streams, config, orig, two_stream, seed, i);
    });
}

void write_records_csv(const std::string& path, const std::vector<TrainRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << "step,loss_high,loss_low,loss_combined,alpha_t\n";
    char line[256];
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%ld,%.12g,%.12g,%.12g,%.12g\n", r.step, r.loss_high,
                      r.loss_low, r.loss_combined, r.alpha_t);
        out << line;
    }
    if (!out) throw std::runtime_error("write_records_csv: short write to " + path);
}

std::vector<TrainRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<TrainRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TrainRecord r;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf", &r.step, &r.loss_high, &r.loss_low,
                        &r.loss_combined, &r.alpha_t) != 5)
            throw std::runtime_error("read_records_csv: malformed line in " + path);
        records.push_back(r);
    }
    return records;
}

}  // namespace adatg
