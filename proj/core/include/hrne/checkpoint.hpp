#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hrne/model.hpp"
#include "hrne/vocab.hpp"

namespace hrne {

// Portable serialized model: config + vocabulary + named tensor table.
// Binary little-endian layout:
//   magic "HRNE" | version u32 | config block (u32 byte length, UTF-8
//   key=value lines) | vocabulary (u32 count, per token u32 length +
//   bytes, id = position) | tensors (u32 count; per tensor u32 name
//   length + name, u32 rank, rank x u64 dims, float32 values row-major).
struct Checkpoint {
    std::uint32_t version = 1;
    std::map<std::string, std::string> config;
    std::vector<std::string> vocab_tokens;
    std::vector<std::pair<std::string, Tensor>> tensors;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

std::map<std::string, std::string> model_config_to_map(const ModelConfig& cfg);
ModelConfig model_config_from_map(const std::map<std::string, std::string>& map);

Checkpoint make_checkpoint(CaptionModel& model, const Vocabulary& vocab,
                           const std::map<std::string, std::string>& extra_config = {});

struct RestoredModel {
    ModelConfig cfg;
    Vocabulary vocab;
    std::unique_ptr<CaptionModel> model;
    std::map<std::string, std::string> config_map;
};

// Rebuilds the model from the embedded config and validates every tensor
// name and shape against it.
RestoredModel restore_model(const Checkpoint& ckpt);
RestoredModel load_model(const std::string& path);

}  // namespace hrne
