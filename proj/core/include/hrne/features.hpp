#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hrne/tensor.hpp"

namespace hrne {

// A length-T list of D-dimensional frame vectors.
struct FeatureSequence {
    std::size_t dim = 0;
    std::vector<Tensor> frames;

    std::size_t length() const { return frames.size(); }

    static FeatureSequence zeros(std::size_t t, std::size_t d) {
        FeatureSequence fs;
        fs.dim = d;
        fs.frames.assign(t, Tensor::vector(d));
        return fs;
    }
};

// HRNF feature file: magic "HRNF", version u32=1, T u32, D u32,
// then T*D float32 values row-major, all little-endian.
FeatureSequence load_features(const std::string& path);
void save_features(const std::string& path, const FeatureSequence& fs);

// Keep the first L frames; append zero frames when shorter.
FeatureSequence pad_truncate(const FeatureSequence& xs, std::size_t target_len = 160);

}  // namespace hrne
