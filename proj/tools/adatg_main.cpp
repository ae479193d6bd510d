// adatg: spectral band decomposition, Hilbert tokenization, and adaptive
// two-grid masked-autoencoder training on seismogram-like images.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adatg/compare.hpp"
#include "adatg/config.hpp"
#include "adatg/data.hpp"
#include "adatg/freq1d.hpp"
#include "adatg/hilbert.hpp"
#include "adatg/manifest.hpp"
#include "adatg/metrics.hpp"
#include "adatg/model.hpp"
#include "adatg/rng.hpp"
#include "adatg/spectral.hpp"
#include "adatg/tokenizer.hpp"
#include "adatg/training.hpp"

namespace {

using namespace adatg;

std::string default_out_dir(const std::string& leaf) {
    const char* root = std::getenv("ADATG_OUT_ROOT");
    return std::string(root ? root : "runs") + "/" + leaf;
}

std::string join_argv(int argc, char** argv) {
    std::ostringstream out;
    for (int i = 0; i < argc; ++i) {
        if (i) out << " ";
        out << argv[i];
    }
    return out.str();
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated integer list");
    return out;
}

std::set<int> read_mask_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mask file " + path);
    std::set<int> mask;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        mask.insert(std::stoi(line));
    }
    return mask;
}

void write_token_csv(const std::string& path, const TokenSequence& seq) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "position,row0,col0,side,values...\n";
    char buf[32];
    for (size_t i = 0; i < seq.size(); ++i) {
        out << i << "," << seq.cells[i].row0 << "," << seq.cells[i].col0 << ","
            << seq.cells[i].side;
        for (double v : seq.tokens[i]) {
            std::snprintf(buf, sizeof(buf), ",%.9g", v);
            out << buf;
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------

struct DataGenArgs {
    int count = 16;
    int side = 64;
    uint64_t seed = 0;
    std::string out;
    double noise = SyntheticParams{}.noise_level;
    bool force = false;
};

int cmd_data_gen(const DataGenArgs& a, const std::string& cmdline) {
    SyntheticParams params;
    params.noise_level = a.noise;
    KvConfig cfg;
    cfg.set("count", std::to_string(a.count));
    cfg.set("side", std::to_string(a.side));
    cfg.set("seed", std::to_string(a.seed));
    cfg.set("noise", std::to_string(a.noise));
    write_manifest(a.out, make_manifest(cmdline, cfg.serialize(), a.seed), a.force);

    const Dataset ds = generate_synthetic(a.count, a.side, a.seed, params);
    char name[64];
    for (size_t i = 0; i < ds.images.size(); ++i) {
        std::snprintf(name, sizeof(name), "/img_%05zu.img", i);
        write_image(a.out + name, ds.images[i]);
    }
    for (size_t i : ds.degenerate_images)
        std::cerr << "warning: image " << i << " is identically zero (normalization skipped)\n";
    std::cout << "wrote " << ds.images.size() << " images to " << a.out << "\n";
    return 0;
}

struct TrainArgs {
    std::string config_file;
    std::string out;
    long seed = -1;
    long epochs = -1;
    bool force = false;
};

int cmd_train(const TrainArgs& a, const std::string& cmdline) {
    KvConfig kv = a.config_file.empty() ? KvConfig{} : KvConfig::parse_file(a.config_file);
    if (a.seed >= 0) kv.set("seed", std::to_string(a.seed));
    if (a.epochs >= 0) kv.set("epochs", std::to_string(a.epochs));

    TrainConfig cfg = desk_train_config(variant_from_name(kv.get_string("variant", "adatg_hh")));
    cfg.side = static_cast<int>(kv.get_long("side", cfg.side));
    cfg.k0 = static_cast<int>(kv.get_long("k0", cfg.k0));
    cfg.n1 = static_cast<int>(kv.get_long("n1", cfg.n1));
    cfg.n2 = static_cast<int>(kv.get_long("n2", cfg.n2));
    cfg.epochs = static_cast<int>(kv.get_long("epochs", cfg.epochs));
    cfg.batch = static_cast<int>(kv.get_long("batch", cfg.batch));
    cfg.lr = kv.get_double("lr", cfg.lr);
    cfg.weight_decay = kv.get_double("weight_decay", cfg.weight_decay);
    cfg.ran_tg_p = kv.get_double("ran_tg_p", cfg.ran_tg_p);
    cfg.seed = kv.get_u64("seed", 0);
    cfg.model.embed_dim = static_cast<int>(kv.get_long("embed_dim", cfg.model.embed_dim));
    cfg.model.decoder_dim = static_cast<int>(kv.get_long("decoder_dim", cfg.model.decoder_dim));
    cfg.model.encoder_blocks =
        static_cast<int>(kv.get_long("encoder_blocks", cfg.model.encoder_blocks));
    cfg.model.decoder_blocks =
        static_cast<int>(kv.get_long("decoder_blocks", cfg.model.decoder_blocks));
    cfg.model.heads = static_cast<int>(kv.get_long("heads", cfg.model.heads));
    cfg.model.mask_ratio = kv.get_double("mask_ratio", cfg.model.mask_ratio);
    cfg.snapshot_every = static_cast<int>(kv.get_long("snapshot_every", 0));
    if (kv.has("schedule")) {
        const std::string s = kv.require_string("schedule");
        cfg.schedule_explicit = true;
        if (s == "fixed") cfg.schedule_kind = ScheduleKind::Fixed;
        else if (s == "ada_low_high") cfg.schedule_kind = ScheduleKind::AdaLowHigh;
        else if (s == "ada_high_low") cfg.schedule_kind = ScheduleKind::AdaHighLow;
        else throw std::invalid_argument("unknown schedule: " + s);
        cfg.alpha = kv.get_double("alpha", 1.0);
    }

    cfg.out_dir = a.out;
    write_manifest(a.out, make_manifest(cmdline, kv.serialize(), cfg.seed), a.force);
    {
        std::ofstream cfg_out(a.out + "/config.txt");
        cfg_out << kv.serialize();
    }

    Dataset dataset;
    if (kv.has("data_dir")) {
        dataset = load_image_dir(kv.require_string("data_dir"));
    } else {
        dataset = generate_synthetic(static_cast<int>(kv.get_long("count", 64)), cfg.side,
                                     derive_seed(cfg.seed, 0xda7a));
    }

    const TrainResult result = train(dataset, cfg);
    write_records_csv(a.out + "/records.csv", result.records);
    result.model.save_checkpoint(a.out + "/checkpoint.ckpt");
    std::cout << "trained " << variant_name(cfg.variant) << ": initial loss "
              << result.records.front().loss_combined << ", final loss "
              << result.records.back().loss_combined << "\n"
              << "records: " << a.out << "/records.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adatg: adaptive two-grid masked-autoencoder toolkit"};
    app.require_subcommand(1);
    const std::string cmdline = join_argv(argc, argv);

    // ---- data gen ----
    auto* data = app.add_subcommand("data", "dataset utilities");
    data->require_subcommand(1);
    DataGenArgs gen_args;
    auto* gen = data->add_subcommand("gen", "generate synthetic seismograms");
    gen->add_option("--count", gen_args.count, "number of images");
    gen->add_option("--side", gen_args.side, "image side in pixels (>= 32)");
    gen->add_option("--seed", gen_args.seed, "generator seed");
    gen->add_option("--out", gen_args.out, "output directory");
    gen->add_option("--noise", gen_args.noise, "Gaussian noise level");
    gen->add_flag("--force", gen_args.force, "allow reusing an output directory");

    // ---- spectral ----
    auto* spectral = app.add_subcommand("spectral", "frequency-band decomposition");
    spectral->require_subcommand(1);
    struct {
        std::string input, out_low, out_high, geometry = "square";
        int k0 = 16;
    } split_args;
    auto* split = spectral->add_subcommand("split", "split an image into low/high bands");
    split->add_option("--input", split_args.input, "input .img file")->required();
    split->add_option("--k0", split_args.k0, "frequency threshold")->required();
    split->add_option("--out-low", split_args.out_low, "low-band output")->required();
    split->add_option("--out-high", split_args.out_high, "high-band output")->required();
    split->add_option("--geometry", split_args.geometry, "square|radial");

    struct {
        std::string input, csv, sweep = "4,8,16,32,64";
    } energy_args;
    auto* energy = spectral->add_subcommand("energy", "band-energy sweep over k0");
    energy->add_option("--input", energy_args.input, "input .img file")->required();
    energy->add_option("--k0-sweep", energy_args.sweep, "comma-separated thresholds");
    energy->add_option("--csv", energy_args.csv, "output CSV (default stdout)");

    // ---- hilbert ----
    auto* hilbert = app.add_subcommand("hilbert", "Hilbert curve tables");
    hilbert->require_subcommand(1);
    struct {
        int order = 1;
        std::string csv;
    } dump_args;
    auto* dump = hilbert->add_subcommand("dump", "emit (index,row,col) triples");
    dump->add_option("--order", dump_args.order, "curve order (1..12)")->required();
    dump->add_option("--csv", dump_args.csv, "output CSV (default stdout)");

    // ---- tokenize ----
    struct {
        std::string variant, input, out, mask_file;
        int patch = 0, order = 0, order2 = 0, k0 = -1;
        double p = 0.05;
        uint64_t seed = 0;
    } tok_args;
    auto* tok = app.add_subcommand("tokenize", "turn an image into an ordered token sequence");
    tok->add_option("--variant", tok_args.variant, "raster|hilbert|fixed-tg|ran-tg|twogrid")
        ->required();
    tok->add_option("--input", tok_args.input, "input .img file")->required();
    tok->add_option("--out", tok_args.out, "output CSV (twogrid writes .low/.high)")->required();
    tok->add_option("--patch", tok_args.patch, "patch side for raster/hilbert");
    tok->add_option("--order", tok_args.order, "coarse grid order");
    tok->add_option("--order2", tok_args.order2, "fine grid order (twogrid)");
    tok->add_option("--k0", tok_args.k0, "spectral threshold (twogrid)");
    tok->add_option("--p", tok_args.p, "refinement probability (ran-tg)");
    tok->add_option("--seed", tok_args.seed, "refinement seed (ran-tg)");
    tok->add_option("--mask", tok_args.mask_file, "newline-separated cell indices (fixed-tg)");

    // ---- train ----
    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "run the adaptive two-grid training loop");
    train_cmd->add_option("--config", train_args.config_file, "key=value config file");
    train_cmd->add_option("--out", train_args.out, "output directory");
    train_cmd->add_option("--seed", train_args.seed, "override config seed");
    train_cmd->add_option("--epochs", train_args.epochs, "override config epochs");
    train_cmd->add_flag("--force", train_args.force, "allow reusing an output directory");

    // ---- evaluate ----
    struct {
        std::string checkpoint, data_dir;
        int k0 = 8, n1 = 3, n2 = 4, gen_count = 8, side = 32;
        uint64_t seed = 0, gen_seed = 1;
    } eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "reconstruction metrics for a checkpoint");
    eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "model checkpoint")->required();
    eval_cmd->add_option("--data", eval_args.data_dir, "directory of .img files");
    eval_cmd->add_option("--k0", eval_args.k0, "spectral threshold");
    eval_cmd->add_option("--n1", eval_args.n1, "coarse order");
    eval_cmd->add_option("--n2", eval_args.n2, "fine order");
    eval_cmd->add_option("--seed", eval_args.seed, "evaluation mask seed");
    eval_cmd->add_option("--gen-count", eval_args.gen_count, "synthetic test count if no --data");
    eval_cmd->add_option("--gen-seed", eval_args.gen_seed, "synthetic test seed");
    eval_cmd->add_option("--side", eval_args.side, "synthetic test image side");

    // ---- metrics ----
    struct {
        std::string a, b;
        double peak = 0.0;
    } met_args;
    auto* met = app.add_subcommand("metrics", "image-quality metrics for an image pair");
    met->add_option("--a", met_args.a, "first image")->required();
    met->add_option("--b", met_args.b, "second image")->required();
    met->add_option("--peak", met_args.peak, "peak value (default: inferred from data range)");

    // ---- freq1d ----
    struct {
        int epochs = 10001, layers = 6, width = 200, samples = 512;
        double lr = 1e-3;
        uint64_t seed = 0;
        std::string out;
        bool force = false;
    } f1_args;
    auto* freq = app.add_subcommand("freq1d", "1-D frequency-principle experiment");
    freq->require_subcommand(1);
    auto* frun = freq->add_subcommand("run", "train the dense net and log band residuals");
    frun->add_option("--epochs", f1_args.epochs, "training epochs");
    frun->add_option("--seed", f1_args.seed, "init seed");
    frun->add_option("--out", f1_args.out, "output directory");
    frun->add_option("--layers", f1_args.layers, "linear layers");
    frun->add_option("--width", f1_args.width, "hidden width");
    frun->add_option("--lr", f1_args.lr, "learning rate");
    frun->add_option("--samples", f1_args.samples, "grid sample count");
    frun->add_flag("--force", f1_args.force, "allow reusing an output directory");

    // ---- compare ----
    struct {
        std::string preset = "desk", out;
        uint64_t seed = 0;
        bool force = false;
    } cmp_args;
    auto* cmp = app.add_subcommand("compare", "run the nine-variant comparison matrix");
    cmp->add_option("--preset", cmp_args.preset, "desk|tiny");
    cmp->add_option("--seed", cmp_args.seed, "run seed");
    cmp->add_option("--out", cmp_args.out, "output directory");
    cmp->add_flag("--force", cmp_args.force, "allow reusing an output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            if (gen_args.out.empty()) gen_args.out = default_out_dir("data");
            return cmd_data_gen(gen_args, cmdline);
        }
        if (split->parsed()) {
            const GridImage img = read_image(split_args.input);
            const BandGeometry geom = split_args.geometry == "radial" ? BandGeometry::Radial
                                                                      : BandGeometry::Square;
            const BandPair bands = split_bands(img, split_args.k0, geom);
            write_image(split_args.out_low, bands.low);
            write_image(split_args.out_high, bands.high);
            const auto [lo, hi] = band_energy(bands);
            std::printf("k0=%d low_norm=%.6g high_norm=%.6g\n", split_args.k0, lo, hi);
            return 0;
        }
        if (energy->parsed()) {
            const GridImage img = read_image(energy_args.input);
            std::ostringstream csv;
            csv << "k0,low_norm,high_norm,original_norm\n";
            char line[160];
            for (int k0 : parse_int_list(energy_args.sweep)) {
                const auto [lo, hi] = band_energy(split_bands(img, k0));
                std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g\n", k0, lo, hi,
                              l2_norm(img));
                csv << line;
            }
            if (energy_args.csv.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(energy_args.csv);
                out << csv.str();
                if (!out) throw std::runtime_error("cannot write " + energy_args.csv);
            }
            return 0;
        }
        if (dump->parsed()) {
            const HilbertMap map = build_hilbert(dump_args.order);
            std::ostringstream csv;
            csv << "index,row,col\n";
            for (size_t i = 0; i < map.index_to_coord.size(); ++i)
                csv << i << "," << map.index_to_coord[i].first << ","
                    << map.index_to_coord[i].second << "\n";
            if (dump_args.csv.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(dump_args.csv);
                out << csv.str();
                if (!out) throw std::runtime_error("cannot write " + dump_args.csv);
            }
            return 0;
        }
        if (tok->parsed()) {
            const GridImage img = read_image(tok_args.input);
            if (tok_args.variant == "twogrid") {
                if (tok_args.k0 < 0) throw std::invalid_argument("twogrid requires --k0");
                if (tok_args.order2 <= tok_args.order)
                    throw std::invalid_argument("twogrid requires --order < --order2");
                const BandPair bands = split_bands(img, tok_args.k0);
                const auto [low, high] = tokenize_twogrid(bands, tok_args.order, tok_args.order2);
                write_token_csv(tok_args.out + ".low.csv", low);
                write_token_csv(tok_args.out + ".high.csv", high);
            } else if (tok_args.variant == "raster") {
                write_token_csv(tok_args.out, tokenize_raster(img, tok_args.patch));
            } else if (tok_args.variant == "hilbert") {
                write_token_csv(tok_args.out, tokenize_hilbert(img, tok_args.patch));
            } else if (tok_args.variant == "fixed-tg") {
                const std::set<int> mask = tok_args.mask_file.empty()
                                               ? central_refine_mask(tok_args.order)
                                               : read_mask_file(tok_args.mask_file);
                write_token_csv(tok_args.out, tokenize_fixed_tg(img, tok_args.order, mask));
            } else if (tok_args.variant == "ran-tg") {
                write_token_csv(tok_args.out, tokenize_ran_tg(img, tok_args.order, tok_args.p,
                                                              tok_args.seed));
            } else {
                throw std::invalid_argument("unknown tokenize variant: " + tok_args.variant);
            }
            return 0;
        }
        if (train_cmd->parsed()) {
            if (train_args.out.empty()) train_args.out = default_out_dir("train");
            return cmd_train(train_args, cmdline);
        }
        if (eval_cmd->parsed()) {
            MaeModel model = MaeModel::load_checkpoint(eval_args.checkpoint);
            std::vector<GridImage> test;
            if (!eval_args.data_dir.empty()) {
                test = load_image_dir(eval_args.data_dir).images;
            } else {
                test = generate_synthetic(eval_args.gen_count, eval_args.side, eval_args.gen_seed)
                           .images;
            }
            const EvalReport r = evaluate(model, test, eval_args.k0, eval_args.n1, eval_args.n2,
                                          eval_args.seed);
            std::printf("count,mae_loss,mse_mean,mse_std,psnr_mean,psnr_std,ssim_mean,ssim_std,"
                        "ms_ssim_mean,ms_ssim_std\n");
            std::printf("%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.count,
                        r.mae_loss, r.mse.mean, r.mse.stddev, r.psnr.mean, r.psnr.stddev,
                        r.ssim.mean, r.ssim.stddev, r.ms_ssim.mean, r.ms_ssim.stddev);
            return 0;
        }
        if (met->parsed()) {
            const GridImage a = read_image(met_args.a);
            const GridImage b = read_image(met_args.b);
            const double peak = met_args.peak > 0.0 ? met_args.peak : infer_peak(a, b);
            const MetricReport r = compute_report(a, b, peak);
            std::printf("mse,psnr,ssim,ms_ssim\n%.12g,%.12g,%.12g,%.12g\n", r.mse, r.psnr, r.ssim,
                        r.ms_ssim);
            return 0;
        }
        if (frun->parsed()) {
            if (f1_args.out.empty()) f1_args.out = default_out_dir("freq1d");
            FreqExperimentConfig cfg;
            cfg.epochs = f1_args.epochs;
            cfg.layers = f1_args.layers;
            cfg.width = f1_args.width;
            cfg.lr = f1_args.lr;
            cfg.sample_count = f1_args.samples;
            cfg.seed = f1_args.seed;
            // Keep the default snapshot epochs that fit inside a shorter run.
            std::erase_if(cfg.snapshot_epochs, [&](int e) { return e > cfg.epochs; });
            std::ostringstream cfg_text;
            cfg_text << "epochs=" << cfg.epochs << "\nlayers=" << cfg.layers
                     << "\nwidth=" << cfg.width << "\nlr=" << cfg.lr
                     << "\nsamples=" << cfg.sample_count << "\nseed=" << cfg.seed << "\n";
            write_manifest(f1_args.out, make_manifest(cmdline, cfg_text.str(), cfg.seed),
                           f1_args.force);
            const FreqExperimentResult result = run_freq_experiment(cfg);
            write_freq_results(f1_args.out, result);
            std::cout << "bands: " << f1_args.out << "/bands.csv (" << result.records.size()
                      << " epochs, " << result.snapshots.size() << " spectra)\n";
            return 0;
        }
        if (cmp->parsed()) {
            if (cmp_args.out.empty()) cmp_args.out = default_out_dir("compare");
            const ComparePreset preset = compare_preset(cmp_args.preset);
            std::ostringstream cfg_text;
            cfg_text << "preset=" << preset.name << "\nseed=" << cmp_args.seed << "\n";
            write_manifest(cmp_args.out, make_manifest(cmdline, cfg_text.str(), cmp_args.seed),
                           cmp_args.force);
            const auto rows = run_compare(preset, cmp_args.seed, cmp_args.out);
            write_compare_csv(cmp_args.out + "/compare.csv", rows);
            write_compare_detail_csv(cmp_args.out + "/metrics_detail.csv", rows);
            for (const auto& row : rows)
                std::printf("%-12s initial %.4g -> final %.4g\n", row.variant.c_str(),
                            row.initial_loss, row.final_loss);
            std::cout << "matrix: " << cmp_args.out << "/compare.csv\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
