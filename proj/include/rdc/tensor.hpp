#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rdc/error.hpp"

namespace rdc {

/// Dense image tensor, channel-major then row-major: data[(c*H + y)*W + x].
/// Values are stored in single precision; arithmetic on them accumulates in
/// double (see ops.hpp).
struct ImageTensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> data;

    ImageTensor() = default;

    ImageTensor(int c, int h, int w, float fill = 0.0f)
        : channels(c), height(h), width(w) {
        if (c <= 0 || h <= 0 || w <= 0)
            throw DimensionError("ImageTensor dims must be positive, got " +
                                 shape_string(c, h, w));
        data.assign(static_cast<std::size_t>(c) * h * w, fill);
    }

    std::size_t size() const { return data.size(); }

    float& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    float* plane(int c) {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
    const float* plane(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }

    bool same_shape(const ImageTensor& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }

    std::string shape_string() const {
        return shape_string(channels, height, width);
    }

    static std::string shape_string(int c, int h, int w) {
        return std::to_string(c) + "x" + std::to_string(h) + "x" +
               std::to_string(w);
    }

    // Invariant check: data length matches dims and every value is finite.
    void validate() const {
        if (data.size() != static_cast<std::size_t>(channels) * height * width)
            throw DimensionError("ImageTensor data length " +
                                 std::to_string(data.size()) +
                                 " does not match shape " + shape_string());
        for (std::size_t i = 0; i < data.size(); ++i)
            if (!std::isfinite(data[i]))
                throw ValueError("ImageTensor has non-finite value at index " +
                                 std::to_string(i));
    }
};

/// Square convolution kernel over `in_channels` input channels.
/// Weight layout matches ImageTensor: weights[(c*size + ky)*size + kx].
struct Kernel {
    int in_channels = 0;
    int size = 0;
    std::vector<float> weights;

    Kernel() = default;

    Kernel(int c, int k) : in_channels(c), size(k) {
        if (c <= 0 || k <= 0)
            throw DimensionError("Kernel dims must be positive, got channels=" +
                                 std::to_string(c) + " size=" + std::to_string(k));
        weights.assign(static_cast<std::size_t>(c) * k * k, 0.0f);
    }

    float& at(int c, int ky, int kx) {
        return weights[(static_cast<std::size_t>(c) * size + ky) * size + kx];
    }
    float at(int c, int ky, int kx) const {
        return weights[(static_cast<std::size_t>(c) * size + ky) * size + kx];
    }

    void validate() const {
        if (weights.size() !=
            static_cast<std::size_t>(in_channels) * size * size)
            throw DimensionError("Kernel weight count " +
                                 std::to_string(weights.size()) +
                                 " does not match channels=" +
                                 std::to_string(in_channels) + " size=" +
                                 std::to_string(size));
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (!std::isfinite(weights[i]))
                throw ValueError("Kernel has non-finite weight at index " +
                                 std::to_string(i));
    }
};

}  // namespace rdc
