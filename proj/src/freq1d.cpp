#include "adatg/freq1d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "adatg/rng.hpp"

namespace adatg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Mat = Eigen::MatrixXd;

struct DenseNet {
    std::vector<Mat> weights;  // in x out
    std::vector<Eigen::RowVectorXd> biases;
    // caches
    std::vector<Mat> pre;   // pre-activation per layer
    std::vector<Mat> post;  // post-activation (input of next layer)

    // Fan-in-scaled uniform init, U(-sqrt(6/fan_in), +sqrt(6/fan_in)).
    void init(int layers, int width, Rng& rng) {
        if (layers < 2) throw std::invalid_argument("freq1d: layers must be >= 2");
        std::vector<int> dims(static_cast<size_t>(layers) + 1, width);
        dims.front() = 1;
        dims.back() = 1;
        for (int l = 0; l < layers; ++l) {
            const int in = dims[l], out = dims[l + 1];
            const double limit = std::sqrt(6.0 / in);
            Mat w(in, out);
            for (int j = 0; j < out; ++j)
                for (int i = 0; i < in; ++i) w(i, j) = rng.uniform(-limit, limit);
            weights.push_back(std::move(w));
            biases.push_back(Eigen::RowVectorXd::Zero(out));
        }
    }

    Mat forward(const Mat& x) {
        const size_t nl = weights.size();
        pre.assign(nl, Mat());
        post.assign(nl + 1, Mat());
        post[0] = x;
        for (size_t l = 0; l < nl; ++l) {
            pre[l] = (post[l] * weights[l]).rowwise() + biases[l];
            post[l + 1] = (l + 1 < nl) ? pre[l].cwiseMax(0.0) : pre[l];
        }
        return post[nl];
    }

    void backward(const Mat& dout, std::vector<Mat>* dw, std::vector<Eigen::RowVectorXd>* db) {
        const size_t nl = weights.size();
        dw->assign(nl, Mat());
        db->assign(nl, Eigen::RowVectorXd());
        Mat d = dout;
        for (size_t l = nl; l-- > 0;) {
            (*dw)[l] = post[l].transpose() * d;
            (*db)[l] = d.colwise().sum();
            if (l > 0) {
                d = d * weights[l].transpose();
                d = d.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
            }
        }
    }
};

}  // namespace

double freq1d_target(double x) {
    return std::sin(kTwoPi * x) + 0.5 * std::sin(10.0 * kTwoPi * x);
}

double band_amplitude(const std::vector<double>& values, int k) {
    const size_t n = values.size();
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double ang = kTwoPi * k * static_cast<double>(i) / static_cast<double>(n);
        re += values[i] * std::cos(ang);
        im -= values[i] * std::sin(ang);
    }
    const double scale = (k == 0) ? 1.0 : 2.0;
    return scale * std::sqrt(re * re + im * im) / static_cast<double>(n);
}

FreqExperimentResult run_freq_experiment(const FreqExperimentConfig& cfg) {
    if (cfg.epochs < 1 || cfg.sample_count < 4 || cfg.width < 1 || cfg.lr <= 0.0)
        throw std::invalid_argument("run_freq_experiment: invalid configuration");
    for (int e : cfg.snapshot_epochs)
        if (e < 0 || e > cfg.epochs)
            throw std::invalid_argument("run_freq_experiment: snapshot epoch " + std::to_string(e) +
                                        " outside [0, " + std::to_string(cfg.epochs) + "]");

    const int n = cfg.sample_count;
    Mat x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = static_cast<double>(i) / n;
        y(i, 0) = freq1d_target(x(i, 0));
    }

    Rng rng(derive_seed(cfg.seed, 0x1d));
    DenseNet net;
    net.init(cfg.layers, cfg.width, rng);

    // Adam moments per tensor.
    std::vector<Mat> mw(net.weights.size()), vw(net.weights.size());
    std::vector<Eigen::RowVectorXd> mb(net.biases.size()), vb(net.biases.size());
    for (size_t l = 0; l < net.weights.size(); ++l) {
        mw[l] = Mat::Zero(net.weights[l].rows(), net.weights[l].cols());
        vw[l] = Mat::Zero(net.weights[l].rows(), net.weights[l].cols());
        mb[l] = Eigen::RowVectorXd::Zero(net.biases[l].size());
        vb[l] = Eigen::RowVectorXd::Zero(net.biases[l].size());
    }
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    FreqExperimentResult result;
    result.records.reserve(static_cast<size_t>(cfg.epochs));
    std::vector<double> residual(static_cast<size_t>(n));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const Mat out = net.forward(x);
        for (int i = 0; i < n; ++i) residual[static_cast<size_t>(i)] = out(i, 0) - y(i, 0);

        FreqBandRecord rec;
        rec.epoch = epoch;
        const double a_low = band_amplitude(residual, 1);
        const double a_high = band_amplitude(residual, 10);
        rec.loss_low = a_low * a_low;
        rec.loss_high = a_high * a_high;
        if (!std::isfinite(rec.loss_low) || !std::isfinite(rec.loss_high))
            throw std::runtime_error("run_freq_experiment: diverged at epoch " +
                                     std::to_string(epoch));
        result.records.push_back(rec);

        if (std::find(cfg.snapshot_epochs.begin(), cfg.snapshot_epochs.end(), epoch) !=
            cfg.snapshot_epochs.end()) {
            FreqSnapshot snap;
            snap.epoch = epoch;
            std::vector<double> values(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) values[static_cast<size_t>(i)] = out(i, 0);
            for (int k = 0; k <= n / 2; ++k) snap.amplitude.push_back(band_amplitude(values, k));
            result.snapshots.push_back(std::move(snap));
        }

        // MSE loss gradient, full batch.
        const Mat dout = 2.0 * (out - y) / static_cast<double>(n);
        std::vector<Mat> dw;
        std::vector<Eigen::RowVectorXd> db;
        net.backward(dout, &dw, &db);

        const double bc1 = 1.0 - std::pow(beta1, epoch + 1);
        const double bc2 = 1.0 - std::pow(beta2, epoch + 1);
        for (size_t l = 0; l < net.weights.size(); ++l) {
            mw[l] = beta1 * mw[l] + (1.0 - beta1) * dw[l];
            vw[l] = beta2 * vw[l] + (1.0 - beta2) * dw[l].cwiseProduct(dw[l]);
            net.weights[l] -=
                cfg.lr * ((mw[l] / bc1).array() / ((vw[l] / bc2).array().sqrt() + eps)).matrix();
            mb[l] = beta1 * mb[l] + (1.0 - beta1) * db[l];
            vb[l] = beta2 * vb[l] + (1.0 - beta2) * db[l].cwiseProduct(db[l]);
            net.biases[l] -=
                cfg.lr * ((mb[l] / bc1).array() / ((vb[l] / bc2).array().sqrt() + eps)).matrix();
        }
    }
    return result;
}

void write_freq_results(const std::string& out_dir, const FreqExperimentResult& result) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/bands.csv");
        if (!out) throw std::runtime_error("write_freq_results: cannot open bands.csv");
        out << "epoch,loss_low,loss_high\n";
        char line[128];
        for (const auto& r : result.records) {
            std::snprintf(line, sizeof(line), "%d,%.12g,%.12g\n", r.epoch, r.loss_low, r.loss_high);
            out << line;
        }
    }
    for (const auto& snap : result.snapshots) {
        std::ofstream out(out_dir + "/spectrum_" + std::to_string(snap.epoch) + ".csv");
        if (!out) throw std::runtime_error("write_freq_results: cannot open spectrum csv");
        out << "frequency,amplitude\n";
        char line[64];
        for (size_t k = 0; k < snap.amplitude.size(); ++k) {
            std::snprintf(line, sizeof(line), "%zu,%.12g\n", k, snap.amplitude[k]);
            out << line;
        }
    }
}

}  // namespace adatg
