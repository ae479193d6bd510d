// End-to-end checks of the adatg binary: exit codes, output formats, and
// manifest-based reproducibility. The binary path arrives in ADATG_BIN.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string binary() {
    const char* env = std::getenv("ADATG_BIN");
    REQUIRE(env != nullptr);
    return env;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string scratch_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / ("adatg_cli_" + leaf);
    fs::remove_all(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("--help lists the subcommands and exits 0") {
    const RunResult r = run("--help");
    CHECK(r.exit_code == 0);
    for (const char* sub : {"data", "spectral", "hilbert", "tokenize", "train", "evaluate",
                            "metrics", "freq1d", "compare"})
        CHECK(r.output.find(sub) != std::string::npos);
}

TEST_CASE("unknown flags exit 2 with a diagnostic") {
    CHECK(run("hilbert dump --no-such-flag 3").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("hilbert dump emits the order-1 table") {
    const RunResult r = run("hilbert dump --order 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "index,row,col\n0,0,0\n1,0,1\n2,1,1\n3,1,0\n");
}

TEST_CASE("data gen writes a manifest plus images, and is seed-reproducible") {
    const std::string d1 = scratch_dir("gen1");
    const std::string d2 = scratch_dir("gen2");
    CHECK(run("data gen --count 3 --side 32 --seed 5 --out " + d1).exit_code == 0);
    CHECK(run("data gen --count 3 --side 32 --seed 5 --out " + d2).exit_code == 0);
    CHECK(fs::exists(d1 + "/manifest.txt"));
    CHECK(fs::exists(d1 + "/img_00000.img"));
    CHECK(slurp(d1 + "/img_00002.img") == slurp(d2 + "/img_00002.img"));

    // A directory holds exactly one manifest.
    CHECK(run("data gen --count 3 --side 32 --seed 5 --out " + d1).exit_code != 0);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("spectral split validates k0 and writes both bands") {
    const std::string dir = scratch_dir("split");
    REQUIRE(run("data gen --count 1 --side 32 --seed 9 --out " + dir).exit_code == 0);
    const std::string img = dir + "/img_00000.img";

    const RunResult bad = run("spectral split --input " + img + " --k0 99 --out-low " + dir +
                              "/lo.img --out-high " + dir + "/hi.img");
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("k0") != std::string::npos);

    const RunResult ok = run("spectral split --input " + img + " --k0 8 --out-low " + dir +
                             "/lo.img --out-high " + dir + "/hi.img");
    CHECK(ok.exit_code == 0);
    CHECK(fs::exists(dir + "/lo.img"));
    CHECK(fs::exists(dir + "/hi.img"));
    fs::remove_all(dir);
}

TEST_CASE("spectral energy emits one CSV row per threshold") {
    const std::string dir = scratch_dir("energy");
    REQUIRE(run("data gen --count 1 --side 64 --seed 2 --out " + dir).exit_code == 0);
    const RunResult r =
        run("spectral energy --input " + dir + "/img_00000.img --k0-sweep 4,8,16");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("k0,low_norm,high_norm,original_norm") != std::string::npos);
    int lines = 0;
    for (char ch : r.output)
        if (ch == '\n') ++lines;
    CHECK(lines == 4);  // header + 3 rows
    fs::remove_all(dir);
}

TEST_CASE("tokenize writes a token CSV with cell geometry") {
    const std::string dir = scratch_dir("tok");
    REQUIRE(run("data gen --count 1 --side 32 --seed 3 --out " + dir).exit_code == 0);
    const RunResult r = run("tokenize --variant hilbert --patch 8 --input " + dir +
                            "/img_00000.img --out " + dir + "/tokens.csv");
    CHECK(r.exit_code == 0);
    std::ifstream in(dir + "/tokens.csv");
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header.find("position,row0,col0,side") == 0);
    CHECK(first.substr(0, 8) == "0,0,0,8,");
    fs::remove_all(dir);
}

TEST_CASE("metrics prints a single CSV row") {
    const std::string dir = scratch_dir("met");
    REQUIRE(run("data gen --count 2 --side 32 --seed 4 --out " + dir).exit_code == 0);
    const RunResult r = run("metrics --a " + dir + "/img_00000.img --b " + dir + "/img_00000.img");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("mse,psnr,ssim,ms_ssim") != std::string::npos);
    CHECK(r.output.find("0,99,1,1") != std::string::npos);  // identical pair
    fs::remove_all(dir);
}

TEST_CASE("train writes records, checkpoint, and config; evaluate consumes the checkpoint") {
    const std::string dir = scratch_dir("train");
    const std::string cfg_path = dir + "_config.txt";
    {
        std::ofstream cfg(cfg_path);
        cfg << "# desk smoke configuration\n"
            << "variant=adatg_hh\n"
            << "count=6\nside=32\nk0=8\nn1=3\nn2=4\n"
            << "epochs=2\nbatch=3\nlr=1e-3\nseed=21\n";
    }
    const RunResult r = run("train --config " + cfg_path + " --out " + dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir + "/manifest.txt"));
    CHECK(fs::exists(dir + "/records.csv"));
    CHECK(fs::exists(dir + "/checkpoint.ckpt"));
    CHECK(fs::exists(dir + "/config.txt"));

    std::ifstream in(dir + "/records.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,loss_high,loss_low,loss_combined,alpha_t");

    const RunResult ev = run("evaluate --checkpoint " + dir +
                             "/checkpoint.ckpt --k0 8 --n1 3 --n2 4 --gen-count 2 --side 32");
    CHECK(ev.exit_code == 0);
    CHECK(ev.output.find("mae_loss") != std::string::npos);

    fs::remove(cfg_path);
    fs::remove_all(dir);
}

TEST_CASE("train runs are byte-reproducible from the recorded seed") {
    const std::string d1 = scratch_dir("rep1");
    const std::string d2 = scratch_dir("rep2");
    const std::string args = "train --seed 31 --epochs 2 --out ";
    CHECK(run(args + d1).exit_code == 0);
    CHECK(run(args + d2).exit_code == 0);
    CHECK(slurp(d1 + "/records.csv") == slurp(d2 + "/records.csv"));
    CHECK(slurp(d1 + "/checkpoint.ckpt") == slurp(d2 + "/checkpoint.ckpt"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("freq1d run emits bands.csv and spectrum files") {
    const std::string dir = scratch_dir("freq");
    const RunResult r = run("freq1d run --epochs 30 --seed 2 --layers 3 --width 16 --samples 64 "
                            "--out " + dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir + "/manifest.txt"));
    CHECK(fs::exists(dir + "/bands.csv"));
    CHECK(fs::exists(dir + "/spectrum_0.csv"));
    fs::remove_all(dir);
}

TEST_CASE("compare tiny preset emits the nine-variant matrix") {
    const std::string dir = scratch_dir("cmp");
    const RunResult r = run("compare --preset tiny --seed 3 --out " + dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir + "/compare.csv");
    CHECK(csv.find("variant,mae_loss,mse,psnr,ssim,ms_ssim") == 0);
    int rows = -1;  // discount header
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 9);
    for (const char* v : {"base", "he_vit", "fixed_tg", "ran_tg", "high_only", "low_only",
                          "adatg_hh", "adatg_nh", "ada_high_low"})
        CHECK(csv.find(v) != std::string::npos);
    CHECK(fs::exists(dir + "/adatg_hh/records.csv"));
    fs::remove_all(dir);
}
