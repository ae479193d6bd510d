#include "adatg/compare.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "adatg/rng.hpp"

namespace adatg {

namespace {

uint64_t variant_seed_tag(TrainVariant v) { return 0x100 + static_cast<uint64_t>(v); }

}  // namespace

std::vector<TrainVariant> all_variants() {
    return {TrainVariant::Base,     TrainVariant::HeVit,    TrainVariant::FixedTg,
            TrainVariant::RanTg,    TrainVariant::HighOnly, TrainVariant::LowOnly,
            TrainVariant::AdatgHH,  TrainVariant::AdatgNH,  TrainVariant::AdaHighLow};
}

ComparePreset compare_preset(const std::string& name) {
    ComparePreset p;
    p.name = name;
    if (name == "desk") return p;
    if (name == "tiny") {
        p.train_count = 8;
        p.test_count = 2;
        p.epochs = 3;
        p.batch = 4;
        return p;
    }
    throw std::invalid_argument("compare: unknown preset " + name + " (expected desk or tiny)");
}

std::vector<CompareRow> run_compare(const ComparePreset& preset, uint64_t seed,
                                    const std::string& out_dir) {
    const Dataset train_set =
        generate_synthetic(preset.train_count, preset.side, derive_seed(seed, 0xda7a));
    Dataset test_set =
        generate_synthetic(preset.test_count, preset.side, derive_seed(seed, 0x7e57));
    test_set.split_tag = SplitTag::Test;

    std::vector<CompareRow> rows;
    for (TrainVariant variant : all_variants()) {
        TrainConfig cfg;
        cfg.variant = variant;
        cfg.side = preset.side;
        cfg.k0 = preset.k0;
        cfg.n1 = preset.n1;
        cfg.n2 = preset.n2;
        cfg.epochs = preset.epochs;
        cfg.batch = preset.batch;
        cfg.lr = preset.lr;
        cfg.weight_decay = preset.weight_decay;
        cfg.ran_tg_p = preset.ran_tg_p;
        cfg.seed = derive_seed(seed, variant_seed_tag(variant));
        cfg.model = desk_model_config();
        cfg.model.mask_ratio = preset.mask_ratio;

        TrainResult result = train(train_set, cfg);

        CompareRow row;
        row.variant = variant_name(variant);
        row.initial_loss = result.records.front().loss_combined;
        row.final_loss = result.records.back().loss_combined;
        finalize_train_config(cfg);
        row.eval = evaluate_variant(result.model, cfg, test_set.images, derive_seed(seed, 0xe7a1));
        rows.push_back(row);

        if (!out_dir.empty()) {
            const std::string vdir = out_dir + "/" + row.variant;
            std::filesystem::create_directories(vdir);
            write_records_csv(vdir + "/records.csv", result.records);
        }
    }
    return rows;
}

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_compare_csv: cannot open " + path);
    out << "variant,mae_loss,mse,psnr,ssim,ms_ssim\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%s,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.variant.c_str(),
                      r.eval.mae_loss, r.eval.mse.mean, r.eval.psnr.mean, r.eval.ssim.mean,
                      r.eval.ms_ssim.mean);
        out << line;
    }
    if (!out) throw std::runtime_error("write_compare_csv: short write to " + path);
}

void write_compare_detail_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_compare_detail_csv: cannot open " + path);
    out << "variant,initial_loss,final_loss,mae_loss,mse_mean,mse_std,psnr_mean,psnr_std,"
           "ssim_mean,ssim_std,ms_ssim_mean,ms_ssim_std\n";
    char line[512];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line),
                      "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      r.variant.c_str(), r.initial_loss, r.final_loss, r.eval.mae_loss,
                      r.eval.mse.mean, r.eval.mse.stddev, r.eval.psnr.mean, r.eval.psnr.stddev,
                      r.eval.ssim.mean, r.eval.ssim.stddev, r.eval.ms_ssim.mean,
                      r.eval.ms_ssim.stddev);
        out << line;
    }
    if (!out) throw std::runtime_error("write_compare_detail_csv: short write to " + path);
}

}  // namespace adatg
