#pragma once

// Distributional adversarial network over a population's (normalized)
// decision vectors. Four small fully-connected nets: a generator mapping
// Gaussian noise into (0,1)^D, a pointwise discriminator, a deep mean
// encoder whose set embedding is the empirical mean of a learned pointwise
// map, and a two-sample head classifying whether two set embeddings
// belong to the same distribution. Training alternates discriminator
// ascent, periodic two-sample ascent and generator descent on the combined
// adversarial value; all gradients come from explicit backpropagation.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace moeacsod {

enum class Activation { Linear, Tanh, Sigmoid };

/// Probabilities are kept inside [eps, 1-eps] before any logarithm.
constexpr double kProbEps = 1e-7;

inline double clamp_prob(double p) {
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

struct Layer {
    int in_dim = 0;
    int out_dim = 0;
    Activation activation = Activation::Linear;
    std::vector<double> w;  // out_dim x in_dim, row-major
    std::vector<double> b;  // out_dim
};

struct MlpParams {
    std::vector<Layer> layers;

    int input_dim() const { return layers.front().in_dim; }
    int output_dim() const { return layers.back().out_dim; }
};

/// Per-layer post-activations; acts[0] is the input, acts.back() the output.
struct ForwardTrace {
    std::vector<std::vector<double>> acts;
    const std::vector<double>& output() const { return acts.back(); }
};

/// Gradient buffers mirroring an MlpParams' weight/bias shapes.
struct MlpGrads {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    static MlpGrads zeros_like(const MlpParams& mlp) {
        MlpGrads g;
        g.w.reserve(mlp.layers.size());
        g.b.reserve(mlp.layers.size());
        for (const auto& layer : mlp.layers) {
            g.w.emplace_back(layer.w.size(), 0.0);
            g.b.emplace_back(layer.b.size(), 0.0);
        }
        return g;
    }

    void add_scaled(const MlpGrads& other, double scale) {
        for (std::size_t l = 0; l < w.size(); ++l) {
            for (std::size_t i = 0; i < w[l].size(); ++i) w[l][i] += scale * other.w[l][i];
            for (std::size_t i = 0; i < b[l].size(); ++i) b[l][i] += scale * other.b[l][i];
        }
    }

    bool all_finite() const {
        for (const auto& block : w)
            for (double v : block)
                if (!std::isfinite(v)) return false;
        for (const auto& block : b)
            for (double v : block)
                if (!std::isfinite(v)) return false;
        return true;
    }
};

namespace detail {

inline double activate(Activation act, double z) {
    switch (act) {
        case Activation::Linear: return z;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    }
    return z;
}

/// Derivative expressed through the post-activation value.
inline double activation_slope(Activation act, double a) {
    switch (act) {
        case Activation::Linear: return 1.0;
        case Activation::Tanh: return 1.0 - a * a;
        case Activation::Sigmoid: return a * (1.0 - a);
    }
    return 1.0;
}

}  // namespace detail

inline ForwardTrace mlp_forward(const MlpParams& mlp, const std::vector<double>& x) {
    ForwardTrace trace;
    trace.acts.reserve(mlp.layers.size() + 1);
    trace.acts.push_back(x);
    for (const auto& layer : mlp.layers) {
        std::vector<double> out(static_cast<std::size_t>(layer.out_dim));
        const std::vector<double>& in = trace.acts.back();
        for (int o = 0; o < layer.out_dim; ++o) {
            double z = layer.b[static_cast<std::size_t>(o)];
            const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in_dim;
            for (int i = 0; i < layer.in_dim; ++i) z += row[i] * in[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(o)] = detail::activate(layer.activation, z);
        }
        trace.acts.push_back(std::move(out));
    }
    return trace;
}

inline std::vector<double> mlp_output(const MlpParams& mlp, const std::vector<double>& x) {
    return mlp_forward(mlp, x).output();
}

/// Backpropagates dL/d(output) through a recorded trace, accumulating
/// parameter gradients; returns dL/d(input).
inline std::vector<double> mlp_backward(const MlpParams& mlp, const ForwardTrace& trace,
                                        std::vector<double> grad, MlpGrads& grads) {
    for (int l = static_cast<int>(mlp.layers.size()) - 1; l >= 0; --l) {
        const Layer& layer = mlp.layers[static_cast<std::size_t>(l)];
        const std::vector<double>& a_out = trace.acts[static_cast<std::size_t>(l) + 1];
        const std::vector<double>& a_in = trace.acts[static_cast<std::size_t>(l)];
        std::vector<double> din(static_cast<std::size_t>(layer.in_dim), 0.0);
        auto& gw = grads.w[static_cast<std::size_t>(l)];
        auto& gb = grads.b[static_cast<std::size_t>(l)];
        for (int o = 0; o < layer.out_dim; ++o) {
            const double dz = grad[static_cast<std::size_t>(o)] *
                              detail::activation_slope(layer.activation, a_out[static_cast<std::size_t>(o)]);
            gb[static_cast<std::size_t>(o)] += dz;
            const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in_dim;
            double* grow = gw.data() + static_cast<std::size_t>(o) * layer.in_dim;
            for (int i = 0; i < layer.in_dim; ++i) {
                grow[i] += dz * a_in[static_cast<std::size_t>(i)];
                din[static_cast<std::size_t>(i)] += dz * row[i];
            }
        }
        grad = std::move(din);
    }
    return grad;
}

/// In-place parameter update p += step * grad (positive step = ascent).
inline void apply_gradient(MlpParams& mlp, const MlpGrads& grads, double step) {
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        auto& layer = mlp.layers[l];
        for (std::size_t i = 0; i < layer.w.size(); ++i) layer.w[i] += step * grads.w[l][i];
        for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b[i] += step * grads.b[l][i];
    }
}

struct DanConfig {
    int hidden_width = 64;
    int embed_dim = 32;
    int noise_dim = 30;
    double learning_rate = 1e-3;
    int steps_per_generation = 20;
    int two_sample_period = 5;  // the two-sample pair updates every k-th step
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

struct DanModel {
    MlpParams generator;        // noise_dim -> D, output sigmoid
    MlpParams discriminator;    // D -> 1, output sigmoid
    MlpParams encoder;          // D -> embed_dim, output linear (the DME map)
    MlpParams two_sample_head;  // embed_dim -> 1, output sigmoid
    int noise_dim = 0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    long step_count = 0;
};

namespace detail {

inline Layer make_layer(int in_dim, int out_dim, Activation act, RngStream& rng) {
    Layer layer;
    layer.in_dim = in_dim;
    layer.out_dim = out_dim;
    layer.activation = act;
    layer.w.resize(static_cast<std::size_t>(in_dim) * out_dim);
    layer.b.assign(static_cast<std::size_t>(out_dim), 0.0);
    const double limit = std::sqrt(6.0 / (in_dim + out_dim));
    for (double& v : layer.w) v = rng.uniform(-limit, limit);
    return layer;
}

}  // namespace detail

inline DanModel make_dan_model(int data_dim, const DanConfig& config, RngStream& rng) {
    if (data_dim < 1) throw std::invalid_argument("make_dan_model: data dimension must be positive");
    DanModel model;
    model.noise_dim = config.noise_dim;
    model.lambda1 = config.lambda1;
    model.lambda2 = config.lambda2;
    model.generator.layers = {
        detail::make_layer(config.noise_dim, config.hidden_width, Activation::Tanh, rng),
        detail::make_layer(config.hidden_width, data_dim, Activation::Sigmoid, rng)};
    model.discriminator.layers = {
        detail::make_layer(data_dim, config.hidden_width, Activation::Tanh, rng),
        detail::make_layer(config.hidden_width, 1, Activation::Sigmoid, rng)};
    model.encoder.layers = {
        detail::make_layer(data_dim, config.hidden_width, Activation::Tanh, rng),
        detail::make_layer(config.hidden_width, config.embed_dim, Activation::Linear, rng)};
    model.two_sample_head.layers = {
        detail::make_layer(config.embed_dim, 1, Activation::Sigmoid, rng)};
    return model;
}

/// Deep mean embedding of a sample set: the encoder applied pointwise,
/// then averaged.
inline std::vector<double> dme_encode(const MlpParams& encoder,
                                      const std::vector<std::vector<double>>& sample_set) {
    if (sample_set.empty()) throw std::invalid_argument("dme_encode: empty sample set");
    std::vector<double> mean(static_cast<std::size_t>(encoder.output_dim()), 0.0);
    for (const auto& x : sample_set) {
        const std::vector<double> e = mlp_output(encoder, x);
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += e[k];
    }
    const double inv = 1.0 / static_cast<double>(sample_set.size());
    for (double& v : mean) v *= inv;
    return mean;
}

/// Same-distribution confidence of two sample sets: the two-sample head
/// applied to the absolute difference of the mean embeddings.
inline double two_sample_confidence(const DanModel& model,
                                    const std::vector<std::vector<double>>& set_a,
                                    const std::vector<std::vector<double>>& set_b) {
    if (set_a.empty() || set_b.empty()) {
        throw std::invalid_argument("two_sample_confidence: empty sample set");
    }
    const std::vector<double> ea = dme_encode(model.encoder, set_a);
    const std::vector<double> eb = dme_encode(model.encoder, set_b);
    std::vector<double> diff(ea.size());
    for (std::size_t k = 0; k < ea.size(); ++k) diff[k] = std::fabs(ea[k] - eb[k]);
    return clamp_prob(mlp_output(model.two_sample_head, diff)[0]);
}

/// Random permutation of 0..n-1 cut into two equal halves (an odd leftover
/// is dropped).
struct HalfSplit {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};

inline HalfSplit half_split(std::size_t n, RngStream& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    const std::size_t half = n / 2;
    HalfSplit split;
    split.first.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
    split.second.assign(perm.begin() + static_cast<std::ptrdiff_t>(half),
                        perm.begin() + static_cast<std::ptrdiff_t>(2 * half));
    return split;
}

namespace detail {

inline std::vector<std::vector<double>> take(const std::vector<std::vector<double>>& base,
                                             const std::vector<std::size_t>& indices) {
    std::vector<std::vector<double>> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(base[i]);
    return out;
}

}  // namespace detail

/// Four-term two-sample objective on explicit halves:
///   log M(X1,X2) + log M(Y1,Y2) + log(1-M(X1,Y2)) + log(1-M(Y1,X2)).
inline double two_sample_loss_split(const DanModel& model,
                                    const std::vector<std::vector<double>>& x1,
                                    const std::vector<std::vector<double>>& x2,
                                    const std::vector<std::vector<double>>& y1,
                                    const std::vector<std::vector<double>>& y2) {
    return std::log(two_sample_confidence(model, x1, x2)) +
           std::log(two_sample_confidence(model, y1, y2)) +
           std::log(1.0 - two_sample_confidence(model, x1, y2)) +
           std::log(1.0 - two_sample_confidence(model, y1, x2));
}

/// rng variant: permutes and halves both sets first (odd sets lose their
/// last permuted element). Draw order: real split, then fake split.
inline double two_sample_loss(const DanModel& model, const std::vector<std::vector<double>>& real_x,
                              const std::vector<std::vector<double>>& fake_y, RngStream& rng) {
    if (real_x.size() < 2 || fake_y.size() < 2) {
        throw std::invalid_argument("two_sample_loss: both sets need at least 2 samples");
    }
    const HalfSplit rs = half_split(real_x.size(), rng);
    const HalfSplit fs = half_split(fake_y.size(), rng);
    return two_sample_loss_split(model, detail::take(real_x, rs.first), detail::take(real_x, rs.second),
                                 detail::take(fake_y, fs.first), detail::take(fake_y, fs.second));
}

struct TwoSampleGradients {
    double loss = 0.0;
    MlpGrads encoder;
    MlpGrads head;
    std::vector<std::vector<double>> fake_grads_first;   // dL/dy for each member of Y1
    std::vector<std::vector<double>> fake_grads_second;  // dL/dy for each member of Y2
};

namespace detail {

struct SetEmbedding {
    std::vector<ForwardTrace> traces;
    std::vector<double> mean;
};

inline SetEmbedding embed_set(const MlpParams& encoder,
                              const std::vector<std::vector<double>>& set) {
    SetEmbedding emb;
    emb.traces.reserve(set.size());
    emb.mean.assign(static_cast<std::size_t>(encoder.output_dim()), 0.0);
    for (const auto& x : set) {
        emb.traces.push_back(mlp_forward(encoder, x));
        const auto& out = emb.traces.back().output();
        for (std::size_t k = 0; k < emb.mean.size(); ++k) emb.mean[k] += out[k];
    }
    const double inv = 1.0 / static_cast<double>(set.size());
    for (double& v : emb.mean) v *= inv;
    return emb;
}

/// Raw head probability on |ea - eb|.
inline double head_term(const DanModel& model, const std::vector<double>& ea,
                        const std::vector<double>& eb) {
    std::vector<double> diff(ea.size());
    for (std::size_t k = 0; k < ea.size(); ++k) diff[k] = std::fabs(ea[k] - eb[k]);
    return mlp_output(model.two_sample_head, diff)[0];
}

inline void head_term_backward(const DanModel& model, const std::vector<double>& ea,
                               const std::vector<double>& eb, double dprob, MlpGrads& head_grads,
                               std::vector<double>& dea, std::vector<double>& deb) {
    std::vector<double> diff(ea.size());
    for (std::size_t k = 0; k < ea.size(); ++k) diff[k] = std::fabs(ea[k] - eb[k]);
    const ForwardTrace trace = mlp_forward(model.two_sample_head, diff);
    const std::vector<double> ddiff =
        mlp_backward(model.two_sample_head, trace, std::vector<double>{dprob}, head_grads);
    for (std::size_t k = 0; k < ea.size(); ++k) {
        const double s = ea[k] > eb[k] ? 1.0 : (ea[k] < eb[k] ? -1.0 : 0.0);
        dea[k] += ddiff[k] * s;
        deb[k] -= ddiff[k] * s;
    }
}

}  // namespace detail

/// Loss plus gradients with respect to the encoder, the head and (when
/// requested) the fake samples themselves, for routing into the generator.
inline TwoSampleGradients two_sample_loss_backward(const DanModel& model,
                                                   const std::vector<std::vector<double>>& x1,
                                                   const std::vector<std::vector<double>>& x2,
                                                   const std::vector<std::vector<double>>& y1,
                                                   const std::vector<std::vector<double>>& y2,
                                                   bool want_fake_grads) {
    TwoSampleGradients out;
    out.encoder = MlpGrads::zeros_like(model.encoder);
    out.head = MlpGrads::zeros_like(model.two_sample_head);

    const detail::SetEmbedding ex1 = detail::embed_set(model.encoder, x1);
    const detail::SetEmbedding ex2 = detail::embed_set(model.encoder, x2);
    const detail::SetEmbedding ey1 = detail::embed_set(model.encoder, y1);
    const detail::SetEmbedding ey2 = detail::embed_set(model.encoder, y2);

    const std::size_t embed = ex1.mean.size();
    std::vector<double> dx1(embed, 0.0), dx2(embed, 0.0), dy1(embed, 0.0), dy2(embed, 0.0);

    // Term 1: log M(X1, X2). Clamped probabilities carry zero gradient.
    double p = detail::head_term(model, ex1.mean, ex2.mean);
    out.loss += std::log(clamp_prob(p));
    if (p > kProbEps && p < 1.0 - kProbEps) {
        detail::head_term_backward(model, ex1.mean, ex2.mean, 1.0 / p, out.head, dx1, dx2);
    }
    // Term 2: log M(Y1, Y2).
    p = detail::head_term(model, ey1.mean, ey2.mean);
    out.loss += std::log(clamp_prob(p));
    if (p > kProbEps && p < 1.0 - kProbEps) {
        detail::head_term_backward(model, ey1.mean, ey2.mean, 1.0 / p, out.head, dy1, dy2);
    }
    // Term 3: log(1 - M(X1, Y2)).
    p = detail::head_term(model, ex1.mean, ey2.mean);
    out.loss += std::log(1.0 - clamp_prob(p));
    if (p > kProbEps && p < 1.0 - kProbEps) {
        detail::head_term_backward(model, ex1.mean, ey2.mean, -1.0 / (1.0 - p), out.head, dx1, dy2);
    }
    // Term 4: log(1 - M(Y1, X2)).
    p = detail::head_term(model, ey1.mean, ex2.mean);
    out.loss += std::log(1.0 - clamp_prob(p));
    if (p > kProbEps && p < 1.0 - kProbEps) {
        detail::head_term_backward(model, ey1.mean, ex2.mean, -1.0 / (1.0 - p), out.head, dy1, dx2);
    }

    // Mean embeddings distribute their gradient uniformly over the set.
    auto backprop_set = [&](const detail::SetEmbedding& emb, const std::vector<double>& dmean,
                            std::vector<std::vector<double>>* input_grads) {
        const double inv = 1.0 / static_cast<double>(emb.traces.size());
        std::vector<double> scaled(dmean.size());
        for (std::size_t k = 0; k < dmean.size(); ++k) scaled[k] = dmean[k] * inv;
        for (const auto& trace : emb.traces) {
            std::vector<double> din = mlp_backward(model.encoder, trace, scaled, out.encoder);
            if (input_grads) input_grads->push_back(std::move(din));
        }
    };
    backprop_set(ex1, dx1, nullptr);
    backprop_set(ex2, dx2, nullptr);
    backprop_set(ey1, dy1, want_fake_grads ? &out.fake_grads_first : nullptr);
    backprop_set(ey2, dy2, want_fake_grads ? &out.fake_grads_second : nullptr);
    return out;
}

/// The lambda1 bracket of the adversarial value on explicit batches:
/// mean log D(x) + mean log(1 - D(g)). Accumulates discriminator gradients
/// (of the bracket itself, unweighted) and optionally dV/dg per fake.
inline double discriminator_bracket_backward(const DanModel& model,
                                             const std::vector<std::vector<double>>& real_x,
                                             const std::vector<std::vector<double>>& fakes,
                                             MlpGrads* disc_grads,
                                             std::vector<std::vector<double>>* fake_grads) {
    double value = 0.0;
    const double inv_real = 1.0 / static_cast<double>(real_x.size());
    const double inv_fake = 1.0 / static_cast<double>(fakes.size());
    MlpGrads scratch = MlpGrads::zeros_like(model.discriminator);
    MlpGrads& sink = disc_grads ? *disc_grads : scratch;
    for (const auto& x : real_x) {
        const ForwardTrace trace = mlp_forward(model.discriminator, x);
        const double raw = trace.output()[0];
        const double p = clamp_prob(raw);
        value += std::log(p) * inv_real;
        if (disc_grads) {
            const double d = (raw > kProbEps && raw < 1.0 - kProbEps) ? inv_real / p : 0.0;
            mlp_backward(model.discriminator, trace, std::vector<double>{d}, sink);
        }
    }
    for (const auto& g : fakes) {
        const ForwardTrace trace = mlp_forward(model.discriminator, g);
        const double raw = trace.output()[0];
        const double p = clamp_prob(raw);
        value += std::log(1.0 - p) * inv_fake;
        if (disc_grads || fake_grads) {
            const double d = (raw > kProbEps && raw < 1.0 - kProbEps) ? -inv_fake / (1.0 - p) : 0.0;
            std::vector<double> din =
                mlp_backward(model.discriminator, trace, std::vector<double>{d}, sink);
            if (fake_grads) fake_grads->push_back(std::move(din));
        }
    }
    return value;
}

/// Combined adversarial value on explicit noise and splits:
///   lambda1 * [mean log D(x) + mean log(1 - D(G(z)))]
/// + lambda2 * two_sample_loss(X, G(Z)).
inline double adversarial_value_split(const DanModel& model,
                                      const std::vector<std::vector<double>>& real_x,
                                      const std::vector<std::vector<double>>& noise,
                                      const HalfSplit& real_split, const HalfSplit& fake_split) {
    std::vector<std::vector<double>> fakes;
    fakes.reserve(noise.size());
    for (const auto& z : noise) fakes.push_back(mlp_output(model.generator, z));
    const double bracket = discriminator_bracket_backward(model, real_x, fakes, nullptr, nullptr);
    const double d2s = two_sample_loss_split(
        model, detail::take(real_x, real_split.first), detail::take(real_x, real_split.second),
        detail::take(fakes, fake_split.first), detail::take(fakes, fake_split.second));
    return model.lambda1 * bracket + model.lambda2 * d2s;
}

/// rng variant; draw order: real split then fake split.
inline double adversarial_value(const DanModel& model,
                                const std::vector<std::vector<double>>& real_x,
                                const std::vector<std::vector<double>>& noise, RngStream& rng) {
    if (real_x.empty() || noise.empty()) {
        throw std::invalid_argument("adversarial_value: empty batch");
    }
    const HalfSplit rs = half_split(real_x.size(), rng);
    const HalfSplit fs = half_split(noise.size(), rng);
    return adversarial_value_split(model, real_x, noise, rs, fs);
}

struct AdversarialGradients {
    double value = 0.0;
    MlpGrads generator;
    MlpGrads discriminator;
    MlpGrads encoder;
    MlpGrads head;
};

/// Value plus full-graph gradients for every parameter block.
inline AdversarialGradients adversarial_value_backward(
    const DanModel& model, const std::vector<std::vector<double>>& real_x,
    const std::vector<std::vector<double>>& noise, const HalfSplit& real_split,
    const HalfSplit& fake_split) {
    AdversarialGradients out;
    out.generator = MlpGrads::zeros_like(model.generator);
    out.discriminator = MlpGrads::zeros_like(model.discriminator);

    std::vector<ForwardTrace> gen_traces;
    std::vector<std::vector<double>> fakes;
    gen_traces.reserve(noise.size());
    fakes.reserve(noise.size());
    for (const auto& z : noise) {
        gen_traces.push_back(mlp_forward(model.generator, z));
        fakes.push_back(gen_traces.back().output());
    }

    // lambda1 bracket: discriminator parameter grads and dV/dg per fake.
    MlpGrads disc_unweighted = MlpGrads::zeros_like(model.discriminator);
    std::vector<std::vector<double>> fake_grads_disc;
    const double bracket =
        discriminator_bracket_backward(model, real_x, fakes, &disc_unweighted, &fake_grads_disc);
    out.discriminator.add_scaled(disc_unweighted, model.lambda1);

    // lambda2 two-sample term with gradients flowing back into the fakes.
    TwoSampleGradients ts = two_sample_loss_backward(
        model, detail::take(real_x, real_split.first), detail::take(real_x, real_split.second),
        detail::take(fakes, fake_split.first), detail::take(fakes, fake_split.second), true);
    out.encoder = std::move(ts.encoder);
    out.head = std::move(ts.head);
    for (auto& block : out.encoder.w)
        for (double& v : block) v *= model.lambda2;
    for (auto& block : out.encoder.b)
        for (double& v : block) v *= model.lambda2;
    for (auto& block : out.head.w)
        for (double& v : block) v *= model.lambda2;
    for (auto& block : out.head.b)
        for (double& v : block) v *= model.lambda2;

    out.value = model.lambda1 * bracket + model.lambda2 * ts.loss;

    // Total per-fake gradient, then through the generator.
    std::vector<std::vector<double>> fake_total(fakes.size());
    for (std::size_t i = 0; i < fakes.size(); ++i) {
        fake_total[i].assign(fakes[i].size(), 0.0);
        for (std::size_t k = 0; k < fakes[i].size(); ++k) {
            fake_total[i][k] = model.lambda1 * fake_grads_disc[i][k];
        }
    }
    for (std::size_t j = 0; j < fake_split.first.size(); ++j) {
        const std::size_t i = fake_split.first[j];
        for (std::size_t k = 0; k < fake_total[i].size(); ++k) {
            fake_total[i][k] += model.lambda2 * ts.fake_grads_first[j][k];
        }
    }
    for (std::size_t j = 0; j < fake_split.second.size(); ++j) {
        const std::size_t i = fake_split.second[j];
        for (std::size_t k = 0; k < fake_total[i].size(); ++k) {
            fake_total[i][k] += model.lambda2 * ts.fake_grads_second[j][k];
        }
    }
    for (std::size_t i = 0; i < fakes.size(); ++i) {
        mlp_backward(model.generator, gen_traces[i], std::move(fake_total[i]), out.generator);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<double>> draw_noise(std::size_t count, int dim, RngStream& rng) {
    std::vector<std::vector<double>> noise(count);
    for (auto& z : noise) {
        z.resize(static_cast<std::size_t>(dim));
        for (double& v : z) v = rng.gaussian();
    }
    return noise;
}

inline void require_finite(const MlpGrads& grads, const char* block) {
    if (!grads.all_finite()) {
        throw TrainingError(std::string("train_step: non-finite gradient in ") + block, block);
    }
}

}  // namespace detail

/// One adversarial training round: discriminator ascent on the lambda1
/// bracket, periodic (every two_sample_period-th step) ascent of the
/// encoder/head pair on the two-sample objective, generator descent on the
/// full value. Each phase draws a fresh noise batch of |real_x| vectors;
/// phases (b) and (c) additionally draw a real split and a fake split.
inline DanModel train_step(const DanModel& model, const std::vector<std::vector<double>>& real_x,
                           const DanConfig& config, RngStream& rng) {
    if (real_x.size() < 4) throw std::invalid_argument("train_step: need at least 4 real samples");
    DanModel out = model;
    const std::size_t n = real_x.size();

    {  // (a) discriminator ascent
        const auto noise = detail::draw_noise(n, out.noise_dim, rng);
        std::vector<std::vector<double>> fakes;
        fakes.reserve(n);
        for (const auto& z : noise) fakes.push_back(mlp_output(out.generator, z));
        MlpGrads dgrads = MlpGrads::zeros_like(out.discriminator);
        discriminator_bracket_backward(out, real_x, fakes, &dgrads, nullptr);
        detail::require_finite(dgrads, "discriminator");
        apply_gradient(out.discriminator, dgrads, config.learning_rate);
    }

    if (out.step_count % config.two_sample_period == 0) {  // (b) two-sample ascent
        const auto noise = detail::draw_noise(n, out.noise_dim, rng);
        std::vector<std::vector<double>> fakes;
        fakes.reserve(n);
        for (const auto& z : noise) fakes.push_back(mlp_output(out.generator, z));
        const HalfSplit rs = half_split(n, rng);
        const HalfSplit fs = half_split(fakes.size(), rng);
        TwoSampleGradients ts = two_sample_loss_backward(
            out, detail::take(real_x, rs.first), detail::take(real_x, rs.second),
            detail::take(fakes, fs.first), detail::take(fakes, fs.second), false);
        detail::require_finite(ts.encoder, "encoder");
        detail::require_finite(ts.head, "two_sample_head");
        apply_gradient(out.encoder, ts.encoder, config.learning_rate);
        apply_gradient(out.two_sample_head, ts.head, config.learning_rate);
    }

    {  // (c) generator descent on the full adversarial value
        const auto noise = detail::draw_noise(n, out.noise_dim, rng);
        const HalfSplit rs = half_split(n, rng);
        const HalfSplit fs = half_split(noise.size(), rng);
        const AdversarialGradients adv = adversarial_value_backward(out, real_x, noise, rs, fs);
        detail::require_finite(adv.generator, "generator");
        apply_gradient(out.generator, adv.generator, -config.learning_rate);
    }

    out.step_count += 1;
    return out;
}

/// Maps n Gaussian noise vectors through the generator into fresh
/// individuals: positions rescaled from (0,1) to the bounds, zero velocity,
/// objectives left unevaluated.
inline std::vector<Individual> sample_offspring(const DanModel& model, int count,
                                                const Bounds& bounds, RngStream& rng) {
    if (count < 0) throw std::invalid_argument("sample_offspring: count must be nonnegative");
    std::vector<Individual> offspring;
    offspring.reserve(static_cast<std::size_t>(count));
    std::vector<double> z(static_cast<std::size_t>(model.noise_dim));
    for (int i = 0; i < count; ++i) {
        for (double& v : z) v = rng.gaussian();
        const std::vector<double> g = mlp_output(model.generator, z);
        Individual ind;
        ind.x.resize(bounds.size());
        for (std::size_t k = 0; k < bounds.size(); ++k) {
            ind.x[k] = bounds.lower[k] + g[k] * (bounds.upper[k] - bounds.lower[k]);
        }
        clip_to_bounds(ind.x, bounds);
        ind.v.assign(bounds.size(), 0.0);
        offspring.push_back(std::move(ind));
    }
    return offspring;
}

// --- checkpointing ---------------------------------------------------------

namespace detail {

inline const char* activation_name(Activation act) {
    switch (act) {
        case Activation::Linear: return "linear";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "linear";
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    throw std::invalid_argument("load_dan_model: unknown activation tag '" + name + "'");
}

inline void write_values(std::ofstream& out, const std::vector<double>& values) {
    char buffer[64];
    for (double v : values) {
        std::snprintf(buffer, sizeof(buffer), "%a", v);
        out << buffer << '\n';
    }
}

inline void write_net(std::ofstream& out, const char* name, const MlpParams& mlp) {
    out << "net " << name << ' ' << mlp.layers.size() << '\n';
    for (const auto& layer : mlp.layers) {
        out << "layer " << layer.out_dim << ' ' << layer.in_dim << ' '
            << activation_name(layer.activation) << '\n';
        write_values(out, layer.w);
        write_values(out, layer.b);
    }
}

inline double read_value(std::ifstream& in) {
    std::string token;
    if (!(in >> token)) throw std::runtime_error("load_dan_model: truncated file");
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str()) throw std::runtime_error("load_dan_model: bad value '" + token + "'");
    return v;
}

inline MlpParams read_net(std::ifstream& in, const std::string& expected_name) {
    std::string keyword, name;
    std::size_t layer_count = 0;
    if (!(in >> keyword >> name >> layer_count) || keyword != "net" || name != expected_name) {
        throw std::runtime_error("load_dan_model: expected net '" + expected_name + "'");
    }
    MlpParams mlp;
    for (std::size_t l = 0; l < layer_count; ++l) {
        std::string tag, act;
        Layer layer;
        if (!(in >> tag >> layer.out_dim >> layer.in_dim >> act) || tag != "layer") {
            throw std::runtime_error("load_dan_model: malformed layer header");
        }
        layer.activation = activation_from_name(act);
        layer.w.resize(static_cast<std::size_t>(layer.out_dim) * layer.in_dim);
        layer.b.resize(static_cast<std::size_t>(layer.out_dim));
        for (double& v : layer.w) v = read_value(in);
        for (double& v : layer.b) v = read_value(in);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

}  // namespace detail

/// Text checkpoint; values are hexfloats, so the round trip is lossless at
/// 64-bit precision.
inline void save_dan_model(const DanModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dan_model: cannot open " + path);
    out << "danmodel-v1\n";
    out << "noise_dim " << model.noise_dim << '\n';
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%a", model.lambda1);
    out << "lambda1 " << buffer << '\n';
    std::snprintf(buffer, sizeof(buffer), "%a", model.lambda2);
    out << "lambda2 " << buffer << '\n';
    out << "step_count " << model.step_count << '\n';
    detail::write_net(out, "generator", model.generator);
    detail::write_net(out, "discriminator", model.discriminator);
    detail::write_net(out, "encoder", model.encoder);
    detail::write_net(out, "two_sample_head", model.two_sample_head);
    if (!out) throw std::runtime_error("save_dan_model: write failed for " + path);
}

inline DanModel load_dan_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dan_model: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "danmodel-v1") throw std::runtime_error("load_dan_model: bad header in " + path);
    DanModel model;
    std::string key;
    in >> key >> model.noise_dim;
    model.lambda1 = detail::read_value((in >> key, in));
    model.lambda2 = detail::read_value((in >> key, in));
    in >> key >> model.step_count;
    model.generator = detail::read_net(in, "generator");
    model.discriminator = detail::read_net(in, "discriminator");
    model.encoder = detail::read_net(in, "encoder");
    model.two_sample_head = detail::read_net(in, "two_sample_head");
    return model;
}

}  // namespace moeacsod
