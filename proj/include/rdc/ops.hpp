#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rdc/tensor.hpp"

// Numeric primitives of the network: valid convolution (full-depth and
// depthwise), sign activation, 2x2 average pooling, global average pooling.
//
// Conventions, fixed so independent reimplementations agree:
//  - Convolution is cross-correlation (no kernel flip) and has no bias term.
//  - sign(0) = +1.
//  - 2x2/stride-2 pooling floors odd spatial dims (last row/column dropped).
//  - Accumulation is double precision, storage single precision.
//
// Each convolution ships a `_ref` naive loop transcription next to the
// optimized path; the two must agree within rounding on all inputs.

namespace rdc {

namespace detail {

inline void check_conv_dims(const ImageTensor& in, const Kernel& k) {
    if (k.in_channels != in.channels)
        throw DimensionError("conv_valid: kernel expects " +
                             std::to_string(k.in_channels) +
                             " channels but input has " +
                             std::to_string(in.channels));
    if (k.size > in.height)
        throw DimensionError("conv_valid: kernel size " +
                             std::to_string(k.size) + " exceeds input height " +
                             std::to_string(in.height));
    if (k.size > in.width)
        throw DimensionError("conv_valid: kernel size " +
                             std::to_string(k.size) + " exceeds input width " +
                             std::to_string(in.width));
}

// Accumulates one single-channel valid cross-correlation into `acc`
// (size oh*ow, caller-zeroed). Inner loop runs along output columns so the
// compiler can vectorize the float loads against a broadcast tap.
inline void conv_plane_accumulate(const float* in, int w, const float* kw,
                                  int k, int oh, int ow, double* acc) {
    for (int oy = 0; oy < oh; ++oy) {
        double* acc_row = acc + static_cast<std::size_t>(oy) * ow;
        for (int ky = 0; ky < k; ++ky) {
            const float* in_row = in + static_cast<std::size_t>(oy + ky) * w;
            const float* k_row = kw + static_cast<std::size_t>(ky) * k;
            for (int kx = 0; kx < k; ++kx) {
                const double tap = k_row[kx];
                const float* src = in_row + kx;
                for (int ox = 0; ox < ow; ++ox)
                    acc_row[ox] += tap * static_cast<double>(src[ox]);
            }
        }
    }
}

}  // namespace detail

/// Valid (unpadded) cross-correlation of a C-channel kernel against a
/// C-channel image; output is 1 x (H-k+1) x (W-k+1).
inline ImageTensor conv_valid(const ImageTensor& in, const Kernel& kernel) {
    detail::check_conv_dims(in, kernel);
    const int k = kernel.size;
    const int oh = in.height - k + 1;
    const int ow = in.width - k + 1;
    std::vector<double> acc(static_cast<std::size_t>(oh) * ow, 0.0);
    for (int c = 0; c < in.channels; ++c)
        detail::conv_plane_accumulate(in.plane(c), in.width,
                                      kernel.weights.data() +
                                          static_cast<std::size_t>(c) * k * k,
                                      k, oh, ow, acc.data());
    ImageTensor out(1, oh, ow);
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.data[i] = static_cast<float>(acc[i]);
    return out;
}

/// Naive reference: direct transcription of the definition, one output
/// value at a time.
inline ImageTensor conv_valid_ref(const ImageTensor& in, const Kernel& kernel) {
    detail::check_conv_dims(in, kernel);
    const int k = kernel.size;
    const int oh = in.height - k + 1;
    const int ow = in.width - k + 1;
    ImageTensor out(1, oh, ow);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            double sum = 0.0;
            for (int c = 0; c < in.channels; ++c)
                for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx)
                        sum += static_cast<double>(in.at(c, oy + ky, ox + kx)) *
                               static_cast<double>(kernel.at(c, ky, kx));
            out.at(0, oy, ox) = static_cast<float>(sum);
        }
    }
    return out;
}

namespace detail {

inline void check_depthwise_dims(const ImageTensor& in,
                                 const std::vector<Kernel>& kernels) {
    if (static_cast<int>(kernels.size()) != in.channels)
        throw DimensionError("conv_depthwise: " +
                             std::to_string(kernels.size()) +
                             " kernels for " + std::to_string(in.channels) +
                             " input channels");
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        if (kernels[i].in_channels != 1)
            throw DimensionError("conv_depthwise: kernel " + std::to_string(i) +
                                 " has " + std::to_string(kernels[i].in_channels) +
                                 " channels, expected 1");
        if (kernels[i].size != kernels[0].size)
            throw DimensionError("conv_depthwise: kernel " + std::to_string(i) +
                                 " size " + std::to_string(kernels[i].size) +
                                 " differs from kernel 0 size " +
                                 std::to_string(kernels[0].size));
    }
    if (kernels[0].size > in.height || kernels[0].size > in.width)
        throw DimensionError("conv_depthwise: kernel size " +
                             std::to_string(kernels[0].size) +
                             " exceeds input " + in.shape_string());
}

}  // namespace detail

/// Depthwise valid convolution: output channel i depends only on input
/// channel i and kernel i. All kernels are single-channel and share one size.
inline ImageTensor conv_depthwise(const ImageTensor& in,
                                  const std::vector<Kernel>& kernels) {
    detail::check_depthwise_dims(in, kernels);
    const int k = kernels[0].size;
    const int oh = in.height - k + 1;
    const int ow = in.width - k + 1;
    ImageTensor out(in.channels, oh, ow);
    std::vector<double> acc(static_cast<std::size_t>(oh) * ow);
    for (int c = 0; c < in.channels; ++c) {
        std::fill(acc.begin(), acc.end(), 0.0);
        detail::conv_plane_accumulate(in.plane(c), in.width,
                                      kernels[c].weights.data(), k, oh, ow,
                                      acc.data());
        float* dst = out.plane(c);
        for (std::size_t i = 0; i < acc.size(); ++i)
            dst[i] = static_cast<float>(acc[i]);
    }
    return out;
}

inline ImageTensor conv_depthwise_ref(const ImageTensor& in,
                                      const std::vector<Kernel>& kernels) {
    detail::check_depthwise_dims(in, kernels);
    const int k = kernels[0].size;
    const int oh = in.height - k + 1;
    const int ow = in.width - k + 1;
    ImageTensor out(in.channels, oh, ow);
    for (int c = 0; c < in.channels; ++c)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double sum = 0.0;
                for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx)
                        sum += static_cast<double>(in.at(c, oy + ky, ox + kx)) *
                               static_cast<double>(kernels[c].at(0, ky, kx));
                out.at(c, oy, ox) = static_cast<float>(sum);
            }
    return out;
}

/// Elementwise sign: +1 for x >= 0, -1 for x < 0. NaN is rejected.
inline ImageTensor sign_activate(const ImageTensor& in) {
    ImageTensor out(in.channels, in.height, in.width);
    for (std::size_t i = 0; i < in.data.size(); ++i) {
        const float v = in.data[i];
        if (v >= 0.0f)
            out.data[i] = 1.0f;
        else if (v < 0.0f)
            out.data[i] = -1.0f;
        else
            throw ValueError("sign_activate: NaN at index " + std::to_string(i));
    }
    return out;
}

/// 2x2 average pooling with stride 2. Odd trailing row/column is dropped;
/// both spatial dims must be at least 2.
inline ImageTensor avg_pool_2x2(const ImageTensor& in) {
    if (in.height < 2 || in.width < 2)
        throw DimensionError(
            "avg_pool_2x2: input " + in.shape_string() +
            " is smaller than 2x2; the network cannot take another block at "
            "this resolution");
    const int oh = in.height / 2;
    const int ow = in.width / 2;
    ImageTensor out(in.channels, oh, ow);
    for (int c = 0; c < in.channels; ++c) {
        const float* src = in.plane(c);
        float* dst = out.plane(c);
        for (int oy = 0; oy < oh; ++oy) {
            const float* r0 = src + static_cast<std::size_t>(2 * oy) * in.width;
            const float* r1 = r0 + in.width;
            for (int ox = 0; ox < ow; ++ox) {
                const double s = static_cast<double>(r0[2 * ox]) +
                                 static_cast<double>(r0[2 * ox + 1]) +
                                 static_cast<double>(r1[2 * ox]) +
                                 static_cast<double>(r1[2 * ox + 1]);
                dst[static_cast<std::size_t>(oy) * ow + ox] =
                    static_cast<float>(s * 0.25);
            }
        }
    }
    return out;
}

/// Mean over all spatial positions, one value per channel.
inline std::vector<double> global_avg_pool(const ImageTensor& in) {
    const std::size_t plane_size =
        static_cast<std::size_t>(in.height) * in.width;
    std::vector<double> out(in.channels);
    for (int c = 0; c < in.channels; ++c) {
        const float* src = in.plane(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < plane_size; ++i) sum += src[i];
        out[c] = sum / static_cast<double>(plane_size);
    }
    return out;
}

}  // namespace rdc
