#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hrne/features.hpp"
#include "hrne/rng.hpp"

namespace hrne {

// One manifest line: id<TAB>caption. Several lines may share an id
// (multiple reference captions for the same clip).
struct ManifestRecord {
    std::string id;
    std::string caption;
};

std::vector<ManifestRecord> load_manifest(const std::string& path);
void save_manifest(const std::string& path, const std::vector<ManifestRecord>& records);

// Manifest plus the feature sequences it references. Feature files are
// located at <dir>/<id>.feat and must exist for every id.
struct CaptionDataset {
    std::vector<ManifestRecord> records;
    std::vector<std::string> ids;  // unique, in first-appearance order
    std::unordered_map<std::string, FeatureSequence> features;

    const FeatureSequence& features_of(const std::string& id) const;
    // references grouped per unique id, first-appearance order
    std::vector<std::pair<std::string, std::vector<std::string>>> grouped_captions() const;
};

// pad_len > 0 applies pad_truncate to every sequence after loading.
CaptionDataset load_caption_dataset(const std::string& dir, const std::string& manifest_path,
                                    std::size_t pad_len = 0);

// ---- synthetic order-sensitive captioning task ----
//
// Each clip is a concatenation of `segments` segments; a segment is one of
// `prototypes` fixed random vectors repeated `segment_len` times with
// i.i.d. Gaussian noise. The caption names the chosen prototypes in
// segment order, so permuting segments permutes the caption: any encoder
// blind to order cannot solve the task.
struct SynthConfig {
    std::size_t num_clips = 512;
    std::size_t segments = 4;
    std::size_t segment_len = 8;
    std::size_t dim = 16;
    std::size_t prototypes = 8;
    double noise = 0.1;
};

struct SynthClip {
    std::string id;
    FeatureSequence features;
    std::string caption;
};

std::vector<SynthClip> synth_generate(Rng& rng, const SynthConfig& cfg);

// In-memory clips -> dataset (no files involved).
CaptionDataset dataset_from_clips(const std::vector<SynthClip>& clips);

// Writes <id>.feat files plus a manifest.tsv under dir.
void write_synth_dataset(const std::string& dir, const std::vector<SynthClip>& clips,
                         const std::string& manifest_name = "manifest.tsv");

}  // namespace hrne
