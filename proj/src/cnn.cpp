#include "ramankit/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ramankit {

double softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus_prime(double x) { return sigmoid(x); }

double bce_from_logit(double logit, double y) {
    // BCE(sigmoid(z), y) = y*softplus(-z) + (1-y)*softplus(z)
    return y * softplus(-logit) + (1.0 - y) * softplus(logit);
}

namespace {

struct Shapes {
    std::vector<std::size_t> conv_in_len, conv_out_len, pool_out_len;
    std::size_t flat = 0;
};

Shapes compute_shapes(const CNNArch& arch, std::size_t input_length) {
    Shapes s;
    std::size_t len = input_length;
    for (int b = 0; b < arch.blocks; ++b) {
        if (len < static_cast<std::size_t>(arch.kernel))
            throw std::invalid_argument(
                "cnn: input length " + std::to_string(input_length) +
                " below minimum " + std::to_string(min_input_length(arch)) +
                " for this architecture");
        s.conv_in_len.push_back(len);
        len = len - static_cast<std::size_t>(arch.kernel) + 1;
        s.conv_out_len.push_back(len);
        len /= static_cast<std::size_t>(arch.pool);  // trailing element truncated
        if (len == 0)
            throw std::invalid_argument(
                "cnn: input length " + std::to_string(input_length) +
                " below minimum " + std::to_string(min_input_length(arch)) +
                " for this architecture");
        s.pool_out_len.push_back(len);
    }
    s.flat = len * static_cast<std::size_t>(arch.filters);
    return s;
}

}  // namespace

std::size_t min_input_length(const CNNArch& arch) {
    std::size_t need = 1;
    for (int b = 0; b < arch.blocks; ++b) {
        need *= static_cast<std::size_t>(arch.pool);
        need += static_cast<std::size_t>(arch.kernel) - 1;
    }
    return need;
}

CNNModel CNNModel::init(const CNNArch& arch, std::size_t input_length, std::uint64_t seed) {
    if (arch.blocks < 1 || arch.filters < 1 || arch.kernel < 1 || arch.pool < 1 ||
        arch.dense_width < 1 || arch.dropout < 0.0 || arch.dropout >= 1.0)
        throw std::invalid_argument("cnn: invalid architecture");
    const Shapes shapes = compute_shapes(arch, input_length);

    CNNModel m;
    m.arch = arch;
    m.input_length = input_length;
    m.seed = seed;
    Rng rng(mix_seed(seed, 0x636e6e));

    auto glorot = [&rng](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& v : w) v = (2.0 * rng.uniform() - 1.0) * limit;
    };

    for (int b = 0; b < arch.blocks; ++b) {
        ConvLayer c;
        c.in_ch = b == 0 ? 1 : static_cast<std::size_t>(arch.filters);
        c.out_ch = static_cast<std::size_t>(arch.filters);
        c.kernel = static_cast<std::size_t>(arch.kernel);
        c.w.assign(c.out_ch * c.in_ch * c.kernel, 0.0);
        c.b.assign(c.out_ch, 0.0);
        glorot(c.w, c.in_ch * c.kernel, c.out_ch * c.kernel);
        m.convs.push_back(std::move(c));
    }
    m.dense_hidden.in = shapes.flat;
    m.dense_hidden.out = static_cast<std::size_t>(arch.dense_width);
    m.dense_hidden.w.assign(m.dense_hidden.out * m.dense_hidden.in, 0.0);
    m.dense_hidden.b.assign(m.dense_hidden.out, 0.0);
    glorot(m.dense_hidden.w, m.dense_hidden.in, m.dense_hidden.out);

    m.dense_out.in = m.dense_hidden.out;
    m.dense_out.out = 1;
    m.dense_out.w.assign(m.dense_out.in, 0.0);
    m.dense_out.b.assign(1, 0.0);
    glorot(m.dense_out.w, m.dense_out.in, 1);
    return m;
}

CNNGrads CNNGrads::zeros_like(const CNNModel& m) {
    CNNGrads g;
    for (const auto& c : m.convs) {
        g.conv_w.emplace_back(c.w.size(), 0.0);
        g.conv_b.emplace_back(c.b.size(), 0.0);
    }
    g.hidden_w.assign(m.dense_hidden.w.size(), 0.0);
    g.hidden_b.assign(m.dense_hidden.b.size(), 0.0);
    g.out_w.assign(m.dense_out.w.size(), 0.0);
    g.out_b.assign(m.dense_out.b.size(), 0.0);
    g.input.assign(m.input_length, 0.0);
    return g;
}

struct ForwardCache {
    struct Block {
        std::vector<double> conv_in;    // [in_ch][len_in]
        std::vector<double> conv_z;     // [out_ch][len_out]
        std::vector<double> conv_a;     // softplus(conv_z)
        std::vector<std::size_t> pool_arg;  // [out_ch][len_pool], index into conv row
        std::vector<double> drop_mask;  // scale per pooled element; empty in eval
        std::vector<double> out;        // [out_ch][len_pool] after dropout
    };
    std::vector<Block> blocks;
    std::vector<double> hidden_z, hidden_a;
    double out_z = 0.0;
    double out_o = 0.0;
};

namespace {

void conv_forward(const ConvLayer& c, const std::vector<double>& x, std::size_t len_in,
                  std::vector<double>& z) {
    const std::size_t len_out = len_in - c.kernel + 1;
    z.assign(c.out_ch * len_out, 0.0);
    for (std::size_t o = 0; o < c.out_ch; ++o) {
        double* zo = z.data() + o * len_out;
        const double bias = c.b[o];
        for (std::size_t pos = 0; pos < len_out; ++pos) zo[pos] = bias;
        for (std::size_t in = 0; in < c.in_ch; ++in) {
            const double* xi = x.data() + in * len_in;
            const double* w = c.w.data() + (o * c.in_ch + in) * c.kernel;
            for (std::size_t t = 0; t < c.kernel; ++t) {
                const double wt = w[t];
                const double* xs = xi + t;
                for (std::size_t pos = 0; pos < len_out; ++pos) zo[pos] += wt * xs[pos];
            }
        }
    }
}

}  // namespace

std::vector<double> maxpool_forward(std::span<const double> x, std::size_t size,
                                    std::vector<std::size_t>* argmax) {
    const std::size_t n_out = x.size() / size;
    std::vector<double> out(n_out);
    if (argmax) argmax->assign(n_out, 0);
    for (std::size_t i = 0; i < n_out; ++i) {
        std::size_t best = i * size;
        for (std::size_t t = 1; t < size; ++t)
            if (x[i * size + t] > x[best]) best = i * size + t;
        out[i] = x[best];
        if (argmax) (*argmax)[i] = best;
    }
    return out;
}

double forward(const CNNModel& m, std::span<const double> x, bool train_mode, Rng* rng,
               ForwardCache* cache) {
    if (x.size() != m.input_length)
        throw std::invalid_argument("cnn forward: expected length " +
                                    std::to_string(m.input_length) + ", got " +
                                    std::to_string(x.size()));
    if (train_mode && m.arch.dropout > 0.0 && rng == nullptr)
        throw std::invalid_argument("cnn forward: train mode needs an rng for dropout");

    const Shapes shapes = compute_shapes(m.arch, m.input_length);
    const std::size_t pool = static_cast<std::size_t>(m.arch.pool);
    const double keep = 1.0 - m.arch.dropout;

    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;
    cc.blocks.assign(static_cast<std::size_t>(m.arch.blocks), {});

    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t b = 0; b < m.convs.size(); ++b) {
        auto& blk = cc.blocks[b];
        const ConvLayer& c = m.convs[b];
        const std::size_t len_in = shapes.conv_in_len[b];
        const std::size_t len_out = shapes.conv_out_len[b];
        const std::size_t len_pool = shapes.pool_out_len[b];

        blk.conv_in = std::move(cur);
        conv_forward(c, blk.conv_in, len_in, blk.conv_z);
        blk.conv_a.resize(blk.conv_z.size());
        for (std::size_t i = 0; i < blk.conv_z.size(); ++i)
            blk.conv_a[i] = softplus(blk.conv_z[i]);

        blk.pool_arg.assign(c.out_ch * len_pool, 0);
        blk.out.assign(c.out_ch * len_pool, 0.0);
        for (std::size_t o = 0; o < c.out_ch; ++o) {
            const double* a = blk.conv_a.data() + o * len_out;
            for (std::size_t i = 0; i < len_pool; ++i) {
                std::size_t best = i * pool;
                for (std::size_t t = 1; t < pool; ++t)
                    if (a[i * pool + t] > a[best]) best = i * pool + t;
                blk.pool_arg[o * len_pool + i] = best;
                blk.out[o * len_pool + i] = a[best];
            }
        }

        if (train_mode && m.arch.dropout > 0.0) {
            blk.drop_mask.resize(blk.out.size());
            for (std::size_t i = 0; i < blk.out.size(); ++i) {
                const bool kept = rng->uniform() >= m.arch.dropout;
                blk.drop_mask[i] = kept ? 1.0 / keep : 0.0;
                blk.out[i] *= blk.drop_mask[i];
            }
        }
        cur = blk.out;
    }

    // flatten is the identity on the channel-major layout
    const std::vector<double>& flat = cur;
    cc.hidden_z.assign(m.dense_hidden.out, 0.0);
    cc.hidden_a.assign(m.dense_hidden.out, 0.0);
    for (std::size_t o = 0; o < m.dense_hidden.out; ++o) {
        const double* w = m.dense_hidden.w.data() + o * m.dense_hidden.in;
        double z = m.dense_hidden.b[o];
        for (std::size_t i = 0; i < m.dense_hidden.in; ++i) z += w[i] * flat[i];
        cc.hidden_z[o] = z;
        cc.hidden_a[o] = softplus(z);
    }
    double z2 = m.dense_out.b[0];
    for (std::size_t i = 0; i < m.dense_out.in; ++i) z2 += m.dense_out.w[i] * cc.hidden_a[i];
    cc.out_z = z2;
    cc.out_o = sigmoid(z2);
    return cc.out_o;
}

double forward_eval(const CNNModel& m, std::span<const double> x) {
    return forward(m, x, false, nullptr, nullptr);
}

double forward_logit(const CNNModel& m, std::span<const double> x) {
    ForwardCache cc;
    forward(m, x, false, nullptr, &cc);
    return cc.out_z;
}

namespace {

// Backpropagates d(loss)/d(out_z) = out_grad through the cached activations.
CNNGrads backward(const CNNModel& m, const ForwardCache& cc, double out_grad) {
    const Shapes shapes = compute_shapes(m.arch, m.input_length);
    CNNGrads g = CNNGrads::zeros_like(m);

    g.out_b[0] = out_grad;
    std::vector<double> d_hidden_a(m.dense_out.in);
    for (std::size_t i = 0; i < m.dense_out.in; ++i) {
        g.out_w[i] = out_grad * cc.hidden_a[i];
        d_hidden_a[i] = out_grad * m.dense_out.w[i];
    }

    std::vector<double> d_flat(m.dense_hidden.in, 0.0);
    for (std::size_t o = 0; o < m.dense_hidden.out; ++o) {
        const double dz = d_hidden_a[o] * softplus_prime(cc.hidden_z[o]);
        g.hidden_b[o] = dz;
        double* gw = g.hidden_w.data() + o * m.dense_hidden.in;
        const double* w = m.dense_hidden.w.data() + o * m.dense_hidden.in;
        const std::vector<double>& flat = cc.blocks.back().out;
        for (std::size_t i = 0; i < m.dense_hidden.in; ++i) {
            gw[i] = dz * flat[i];
            d_flat[i] += dz * w[i];
        }
    }

    std::vector<double> d_out = std::move(d_flat);
    for (std::size_t b = m.convs.size(); b-- > 0;) {
        const auto& blk = cc.blocks[b];
        const ConvLayer& c = m.convs[b];
        const std::size_t len_in = shapes.conv_in_len[b];
        const std::size_t len_out = shapes.conv_out_len[b];
        const std::size_t len_pool = shapes.pool_out_len[b];

        if (!blk.drop_mask.empty())
            for (std::size_t i = 0; i < d_out.size(); ++i) d_out[i] *= blk.drop_mask[i];

        // Pool: gradient flows to the argmax only; then softplus.
        std::vector<double> d_z(c.out_ch * len_out, 0.0);
        for (std::size_t o = 0; o < c.out_ch; ++o)
            for (std::size_t i = 0; i < len_pool; ++i) {
                const std::size_t arg = blk.pool_arg[o * len_pool + i];
                d_z[o * len_out + arg] +=
                    d_out[o * len_pool + i] * softplus_prime(blk.conv_z[o * len_out + arg]);
            }

        std::vector<double> d_in(c.in_ch * len_in, 0.0);
        for (std::size_t o = 0; o < c.out_ch; ++o) {
            const double* dz = d_z.data() + o * len_out;
            double db = 0.0;
            for (std::size_t pos = 0; pos < len_out; ++pos) db += dz[pos];
            g.conv_b[b][o] = db;
            for (std::size_t in = 0; in < c.in_ch; ++in) {
                const double* xi = blk.conv_in.data() + in * len_in;
                double* gw = g.conv_w[b].data() + (o * c.in_ch + in) * c.kernel;
                const double* w = c.w.data() + (o * c.in_ch + in) * c.kernel;
                double* di = d_in.data() + in * len_in;
                for (std::size_t t = 0; t < c.kernel; ++t) {
                    double acc = 0.0;
                    const double* xs = xi + t;
                    double* ds = di + t;
                    const double wt = w[t];
                    for (std::size_t pos = 0; pos < len_out; ++pos) {
                        acc += dz[pos] * xs[pos];
                        ds[pos] += dz[pos] * wt;
                    }
                    gw[t] = acc;
                }
            }
        }
        d_out = std::move(d_in);
    }
    g.input = std::move(d_out);
    return g;
}

}  // namespace

CNNGrads gradient(const CNNModel& m, std::span<const double> x, double y) {
    ForwardCache cc;
    const double o = forward(m, x, false, nullptr, &cc);
    // d(BCE)/d(out_z) for a sigmoid output
    return backward(m, cc, o - y);
}

std::vector<double> output_input_gradient(const CNNModel& m, std::span<const double> x) {
    ForwardCache cc;
    const double o = forward(m, x, false, nullptr, &cc);
    CNNGrads g = backward(m, cc, o * (1.0 - o));
    return std::move(g.input);
}

namespace {

struct AdamState {
    CNNGrads m, v;
    double beta1_t = 1.0, beta2_t = 1.0;
};

void adam_array(std::vector<double>& w, const std::vector<double>& g, std::vector<double>& m,
                std::vector<double>& v, const TrainConfig& cfg, double bc1, double bc2,
                double scale) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double gi = g[i] * scale;
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * gi;
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * gi * gi;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        w[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

void accumulate(CNNGrads& acc, const CNNGrads& g) {
    for (std::size_t b = 0; b < acc.conv_w.size(); ++b) {
        for (std::size_t i = 0; i < acc.conv_w[b].size(); ++i) acc.conv_w[b][i] += g.conv_w[b][i];
        for (std::size_t i = 0; i < acc.conv_b[b].size(); ++i) acc.conv_b[b][i] += g.conv_b[b][i];
    }
    for (std::size_t i = 0; i < acc.hidden_w.size(); ++i) acc.hidden_w[i] += g.hidden_w[i];
    for (std::size_t i = 0; i < acc.hidden_b.size(); ++i) acc.hidden_b[i] += g.hidden_b[i];
    for (std::size_t i = 0; i < acc.out_w.size(); ++i) acc.out_w[i] += g.out_w[i];
    for (std::size_t i = 0; i < acc.out_b.size(); ++i) acc.out_b[i] += g.out_b[i];
}

double mean_eval_loss(const CNNModel& m, const SpectraSet& data,
                      const std::vector<std::size_t>& idx) {
    double loss = 0.0;
    for (std::size_t i : idx) {
        ForwardCache cc;
        forward(m, data.row(i), false, nullptr, &cc);
        loss += bce_from_logit(cc.out_z, static_cast<double>(data.labels()[i]));
    }
    return idx.empty() ? 0.0 : loss / static_cast<double>(idx.size());
}

std::string find_nonfinite_layer(const CNNModel& m) {
    auto bad = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return true;
        return false;
    };
    for (std::size_t b = 0; b < m.convs.size(); ++b)
        if (bad(m.convs[b].w) || bad(m.convs[b].b)) return "conv" + std::to_string(b + 1);
    if (bad(m.dense_hidden.w) || bad(m.dense_hidden.b)) return "dense_hidden";
    if (bad(m.dense_out.w) || bad(m.dense_out.b)) return "dense_out";
    return "loss";
}

}  // namespace

TrainedCNN train_cnn(const CNNArch& arch, const SpectraSet& data, const TrainConfig& cfg) {
    if (cfg.batch_size < 1) throw std::invalid_argument("cnn train: batch_size must be >= 1");
    if (cfg.learning_rate < 0) throw std::invalid_argument("cnn train: negative learning rate");
    bool has0 = false, has1 = false;
    for (int y : data.labels()) (y ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::invalid_argument("cnn train: both classes must be present");

    const Rng root(cfg.seed);

    // Validation split for early stopping.
    std::vector<std::size_t> all(data.n_rows());
    std::iota(all.begin(), all.end(), 0);
    std::size_t n_val = 0;
    if (cfg.val_fraction > 0.0) {
        Rng split_rng = root.split(1);
        split_rng.shuffle(all);
        n_val = static_cast<std::size_t>(
            std::llround(cfg.val_fraction * static_cast<double>(data.n_rows())));
        if (n_val >= data.n_rows()) n_val = 0;
    }
    std::vector<std::size_t> val_idx(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> fit_idx(all.begin() + static_cast<std::ptrdiff_t>(n_val), all.end());

    TrainedCNN result;
    result.model = CNNModel::init(arch, data.n_cols(), mix_seed(cfg.seed, 2));
    CNNModel& model = result.model;

    AdamState adam;
    adam.m = CNNGrads::zeros_like(model);
    adam.v = CNNGrads::zeros_like(model);

    Rng shuffle_rng = root.split(3);
    Rng dropout_rng = root.split(4);

    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(fit_idx);
        const std::size_t n_fit = fit_idx.size();
        for (std::size_t start = 0, batch_no = 0; start < n_fit;
             start += static_cast<std::size_t>(cfg.batch_size), ++batch_no) {
            const std::size_t stop = std::min(n_fit, start + static_cast<std::size_t>(cfg.batch_size));
            const double batch_n = static_cast<double>(stop - start);

            CNNGrads acc = CNNGrads::zeros_like(model);
            double batch_loss = 0.0;
            for (std::size_t s = start; s < stop; ++s) {
                const std::size_t i = fit_idx[s];
                ForwardCache cc;
                const double o = forward(model, data.row(i), true, &dropout_rng, &cc);
                const double y = static_cast<double>(data.labels()[i]);
                batch_loss += bce_from_logit(cc.out_z, y);
                accumulate(acc, backward(model, cc, o - y));
            }
            batch_loss /= batch_n;
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("cnn train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batch_no) + ", layer " +
                                         find_nonfinite_layer(model));

            adam.beta1_t *= cfg.adam_beta1;
            adam.beta2_t *= cfg.adam_beta2;
            const double bc1 = 1.0 - adam.beta1_t;
            const double bc2 = 1.0 - adam.beta2_t;
            const double scale = 1.0 / batch_n;
            for (std::size_t b = 0; b < model.convs.size(); ++b) {
                adam_array(model.convs[b].w, acc.conv_w[b], adam.m.conv_w[b], adam.v.conv_w[b],
                           cfg, bc1, bc2, scale);
                adam_array(model.convs[b].b, acc.conv_b[b], adam.m.conv_b[b], adam.v.conv_b[b],
                           cfg, bc1, bc2, scale);
            }
            adam_array(model.dense_hidden.w, acc.hidden_w, adam.m.hidden_w, adam.v.hidden_w, cfg,
                       bc1, bc2, scale);
            adam_array(model.dense_hidden.b, acc.hidden_b, adam.m.hidden_b, adam.v.hidden_b, cfg,
                       bc1, bc2, scale);
            adam_array(model.dense_out.w, acc.out_w, adam.m.out_w, adam.v.out_w, cfg, bc1, bc2,
                       scale);
            adam_array(model.dense_out.b, acc.out_b, adam.m.out_b, adam.v.out_b, cfg, bc1, bc2,
                       scale);
        }

        EpochStats stats;
        stats.train_loss = mean_eval_loss(model, data, fit_idx);
        stats.val_loss = val_idx.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : mean_eval_loss(model, data, val_idx);
        result.trace.push_back(stats);

        if (cfg.target_train_loss > 0.0 && stats.train_loss < cfg.target_train_loss) {
            result.stopped_early = true;
            break;
        }
        if (!val_idx.empty()) {
            if (stats.val_loss < best_val) {
                best_val = stats.val_loss;
                since_best = 0;
            } else if (++since_best > cfg.patience) {
                result.stopped_early = true;
                break;
            }
        }
    }
    return result;
}

}  // namespace ramankit
