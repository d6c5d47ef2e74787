#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdc/ops.hpp"
#include "rdc/parallel.hpp"
#include "rdc/rng.hpp"
#include "rdc/tensor.hpp"

// The random depthwise network. Each of the m features is an independent
// chain over the input image:
//
//   block 1:      full-depth conv -> sign -> 2x2 avg pool
//   blocks 2..b:  single-channel conv -> sign -> 2x2 avg pool
//   finally:      global average pool -> one scalar in [-1, 1]
//
// The depthwise rule (channel i only sees kernel i) means the chains never
// mix, so a width-m network is exactly m independent chains; extraction
// parallelizes over (image, chain) pairs with no shared mutable state.

namespace rdc {

enum class Normalization { none, unit, symmetric };

inline std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::none: return "none";
        case Normalization::unit: return "unit";
        case Normalization::symmetric: return "symmetric";
    }
    return "?";
}

struct NetworkConfig {
    int kernel_size = 3;       // k, odd
    int blocks = 1;            // b
    int num_kernels = 1;       // m
    std::uint64_t seed = 0;
    int input_channels = 1;
    Normalization normalization = Normalization::unit;
    bool bias_enabled = false;
    unsigned threads = 0;      // 0 = resolve_threads default

    void validate() const {
        if (kernel_size < 1 || kernel_size % 2 == 0)
            throw ValueError("NetworkConfig: kernel_size must be a positive odd "
                             "integer, got " + std::to_string(kernel_size));
        if (blocks < 1)
            throw ValueError("NetworkConfig: blocks must be >= 1, got " +
                             std::to_string(blocks));
        if (num_kernels < 1)
            throw ValueError("NetworkConfig: num_kernels must be >= 1, got " +
                             std::to_string(num_kernels));
        if (input_channels < 1)
            throw ValueError("NetworkConfig: input_channels must be >= 1, got " +
                             std::to_string(input_channels));
    }
};

/// Per-feature weights: one full-depth input kernel plus b-1 depthwise
/// kernels, all k x k, i.i.d. Normal(0, 1). `biases` has one value per block
/// when the config enables biases, else stays empty; biases are drawn after
/// all weights so enabling them never changes the weights.
struct KernelStack {
    Kernel input_kernel;
    std::vector<Kernel> depthwise_kernels;
    std::vector<float> biases;
};

/// Row-major n_samples x n_features matrix, the network's final layer.
struct FeatureMatrix {
    std::int64_t n_samples = 0;
    std::int64_t n_features = 0;
    std::vector<float> values;       // n_samples * n_features
    std::vector<std::int32_t> labels;  // empty = absent, else n_samples

    FeatureMatrix() = default;
    FeatureMatrix(std::int64_t n, std::int64_t d)
        : n_samples(n), n_features(d) {
        if (d <= 0)
            throw DimensionError("FeatureMatrix: n_features must be positive");
        if (n < 0)
            throw DimensionError("FeatureMatrix: n_samples must be >= 0");
        values.assign(static_cast<std::size_t>(n) * d, 0.0f);
    }

    bool has_labels() const { return !labels.empty(); }

    float* row(std::int64_t i) {
        return values.data() + static_cast<std::size_t>(i) * n_features;
    }
    const float* row(std::int64_t i) const {
        return values.data() + static_cast<std::size_t>(i) * n_features;
    }

    void validate() const {
        if (values.size() !=
            static_cast<std::size_t>(n_samples) * n_features)
            throw DimensionError("FeatureMatrix: value count does not match " +
                                 std::to_string(n_samples) + "x" +
                                 std::to_string(n_features));
        if (!labels.empty() &&
            labels.size() != static_cast<std::size_t>(n_samples))
            throw DimensionError("FeatureMatrix: label count " +
                                 std::to_string(labels.size()) +
                                 " does not match n_samples " +
                                 std::to_string(n_samples));
    }
};

/// Largest block count an h x w input survives (each block needs a valid
/// k-convolution and a 2x2 pool).
inline int max_feasible_blocks(int height, int width, int kernel_size) {
    int b = 0;
    int h = height, w = width;
    while (true) {
        const int ch = h - kernel_size + 1;
        const int cw = w - kernel_size + 1;
        if (ch < 2 || cw < 2) break;  // conv impossible or pool would fail
        h = ch / 2;
        w = cw / 2;
        ++b;
        if (h < 1 || w < 1) break;
    }
    return b;
}

inline void check_feasible(int height, int width, const NetworkConfig& cfg) {
    const int max_b = max_feasible_blocks(height, width, cfg.kernel_size);
    if (cfg.blocks > max_b)
        throw DimensionError(
            "input " + std::to_string(height) + "x" + std::to_string(width) +
            " is too small for " + std::to_string(cfg.blocks) +
            " blocks at kernel size " + std::to_string(cfg.kernel_size) +
            "; maximum feasible blocks = " + std::to_string(max_b));
}

/// Generates the m kernel stacks for a config. Stack j is drawn from a
/// NormalSampler seeded with sub_seed(cfg.seed, j), so the result does not
/// depend on generation order, thread count, or m (stack j is the same in a
/// wider run with the same seed).
inline std::vector<KernelStack> generate_kernel_stacks(
    const NetworkConfig& cfg) {
    cfg.validate();
    const int k = cfg.kernel_size;
    std::vector<KernelStack> stacks(cfg.num_kernels);
    parallel_chunks(0, cfg.num_kernels, cfg.threads,
                    [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t j = lo; j < hi; ++j) {
            NormalSampler sampler(sub_seed(cfg.seed, static_cast<std::uint64_t>(j)));
            KernelStack& s = stacks[j];
            s.input_kernel = Kernel(cfg.input_channels, k);
            for (auto& w : s.input_kernel.weights)
                w = static_cast<float>(sampler.next());
            s.depthwise_kernels.resize(cfg.blocks - 1);
            for (int bIdx = 0; bIdx + 1 < cfg.blocks; ++bIdx) {
                s.depthwise_kernels[bIdx] = Kernel(1, k);
                for (auto& w : s.depthwise_kernels[bIdx].weights)
                    w = static_cast<float>(sampler.next());
            }
            if (cfg.bias_enabled) {
                s.biases.resize(cfg.blocks);
                for (auto& bv : s.biases)
                    bv = static_cast<float>(sampler.next());
            }
        }
    });
    return stacks;
}

namespace detail {

// Reusable buffers so batch extraction does not allocate per feature.
struct PipelineScratch {
    std::vector<double> acc;
    std::vector<float> a;
    std::vector<float> b;
};

// One feature chain. Values match the composition of the public ops
// exactly: every conv result is rounded to float before the sign, every
// pooled value is rounded to float before the next conv.
inline float extract_feature_impl(const ImageTensor& img,
                                  const KernelStack& stack,
                                  const NetworkConfig& cfg,
                                  PipelineScratch& scratch) {
    const int k = cfg.kernel_size;
    const float* cur = nullptr;
    int h = img.height, w = img.width;

    for (int block = 0; block < cfg.blocks; ++block) {
        const int oh = h - k + 1;
        const int ow = w - k + 1;
        const std::size_t out_size = static_cast<std::size_t>(oh) * ow;
        scratch.acc.assign(out_size, 0.0);
        if (block == 0) {
            for (int c = 0; c < img.channels; ++c)
                conv_plane_accumulate(
                    img.plane(c), w,
                    stack.input_kernel.weights.data() +
                        static_cast<std::size_t>(c) * k * k,
                    k, oh, ow, scratch.acc.data());
        } else {
            conv_plane_accumulate(cur, w,
                                  stack.depthwise_kernels[block - 1].weights.data(),
                                  k, oh, ow, scratch.acc.data());
        }
        const double bias =
            stack.biases.empty() ? 0.0
                                 : static_cast<double>(stack.biases[block]);

        // conv -> float, then sign on the float value
        scratch.a.resize(out_size);
        for (std::size_t i = 0; i < out_size; ++i) {
            const float v = static_cast<float>(scratch.acc[i] + bias);
            if (v >= 0.0f)
                scratch.a[i] = 1.0f;
            else if (v < 0.0f)
                scratch.a[i] = -1.0f;
            else
                throw ValueError("extraction produced NaN; input or weights "
                                 "must be non-finite");
        }

        // 2x2/stride-2 average pool
        const int ph = oh / 2;
        const int pw = ow / 2;
        scratch.b.resize(static_cast<std::size_t>(ph) * pw);
        for (int oy = 0; oy < ph; ++oy) {
            const float* r0 = scratch.a.data() + static_cast<std::size_t>(2 * oy) * ow;
            const float* r1 = r0 + ow;
            for (int ox = 0; ox < pw; ++ox)
                scratch.b[static_cast<std::size_t>(oy) * pw + ox] =
                    static_cast<float>((static_cast<double>(r0[2 * ox]) +
                                        r0[2 * ox + 1] + r1[2 * ox] +
                                        r1[2 * ox + 1]) *
                                       0.25);
        }
        std::swap(scratch.a, scratch.b);
        cur = scratch.a.data();
        h = ph;
        w = pw;
    }

    double sum = 0.0;
    const std::size_t n = static_cast<std::size_t>(h) * w;
    for (std::size_t i = 0; i < n; ++i) sum += cur[i];
    return static_cast<float>(sum / static_cast<double>(n));
}

}  // namespace detail

/// Runs one image through one feature chain; returns the scalar in [-1, 1].
inline float extract_feature(const ImageTensor& img, const KernelStack& stack,
                             const NetworkConfig& cfg) {
    cfg.validate();
    if (img.channels != cfg.input_channels)
        throw DimensionError("extract_feature: image has " +
                             std::to_string(img.channels) +
                             " channels, config expects " +
                             std::to_string(cfg.input_channels));
    check_feasible(img.height, img.width, cfg);
    detail::PipelineScratch scratch;
    return detail::extract_feature_impl(img, stack, cfg, scratch);
}

/// Batch extraction against explicit stacks. Row i, column j is
/// extract_feature(images[i], stacks[j]); output is bit-identical for any
/// thread count. Labels, when given, are copied through.
inline FeatureMatrix extract_features_with_stacks(
    const std::vector<ImageTensor>& images,
    const std::vector<KernelStack>& stacks, const NetworkConfig& cfg,
    const std::vector<std::int32_t>& labels = {}) {
    cfg.validate();
    if (stacks.empty()) throw ValueError("extract_features: no kernel stacks");
    if (!labels.empty() && labels.size() != images.size())
        throw DimensionError("extract_features: " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(images.size()) +
                             " images");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].channels != cfg.input_channels)
            throw DimensionError("extract_features: image " + std::to_string(i) +
                                 " has " + std::to_string(images[i].channels) +
                                 " channels, config expects " +
                                 std::to_string(cfg.input_channels));
        if (!images[i].same_shape(images[0]))
            throw DimensionError("extract_features: image " + std::to_string(i) +
                                 " shape " + images[i].shape_string() +
                                 " differs from image 0 shape " +
                                 images[0].shape_string());
    }
    if (!images.empty())
        check_feasible(images[0].height, images[0].width, cfg);

    const std::int64_t n = static_cast<std::int64_t>(images.size());
    const std::int64_t m = static_cast<std::int64_t>(stacks.size());
    FeatureMatrix out(n, m);
    out.labels = labels;

    // Flatten (image, stack) into one index space so both few-large-image
    // and many-small-image workloads spread across workers.
    parallel_chunks(0, n * m, cfg.threads,
                    [&](std::int64_t lo, std::int64_t hi) {
        detail::PipelineScratch scratch;
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            const std::int64_t i = idx / m;
            const std::int64_t j = idx % m;
            out.values[static_cast<std::size_t>(idx)] =
                detail::extract_feature_impl(images[i], stacks[j], cfg, scratch);
        }
    });
    return out;
}

/// Batch extraction: generates the config's stacks, then runs every image
/// through every chain.
inline FeatureMatrix extract_features(
    const std::vector<ImageTensor>& images, const NetworkConfig& cfg,
    const std::vector<std::int32_t>& labels = {}) {
    return extract_features_with_stacks(images, generate_kernel_stacks(cfg),
                                        cfg, labels);
}

}  // namespace rdc
