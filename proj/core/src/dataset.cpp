#include "hrne/dataset.hpp"

#include <filesystem>
#include <fstream>

#include "hrne/error.hpp"

namespace hrne {

std::vector<ManifestRecord> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("manifest not readable: " + path);
    std::vector<ManifestRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw IoError("manifest line " + std::to_string(lineno) +
                          " is not id<TAB>caption: " + path);
        }
        records.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    if (records.empty()) throw IoError("manifest has no records: " + path);
    return records;
}

void save_manifest(const std::string& path, const std::vector<ManifestRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("manifest not writable: " + path);
    for (const auto& r : records) out << r.id << '\t' << r.caption << '\n';
}

const FeatureSequence& CaptionDataset::features_of(const std::string& id) const {
    const auto it = features.find(id);
    if (it == features.end()) throw IoError("no features loaded for clip id " + id);
    return it->second;
}

std::vector<std::pair<std::string, std::vector<std::string>>> CaptionDataset::grouped_captions()
    const {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto& r : records) {
        const auto it = slot.find(r.id);
        if (it == slot.end()) {
            slot[r.id] = groups.size();
            groups.push_back({r.id, {r.caption}});
        } else {
            groups[it->second].second.push_back(r.caption);
        }
    }
    return groups;
}

CaptionDataset load_caption_dataset(const std::string& dir, const std::string& manifest_path,
                                    std::size_t pad_len) {
    CaptionDataset ds;
    ds.records = load_manifest(manifest_path);
    for (const auto& r : ds.records) {
        if (ds.features.count(r.id)) continue;
        const std::string path = (std::filesystem::path(dir) / (r.id + ".feat")).string();
        if (!std::filesystem::exists(path)) {
            throw IoError("feature file missing for clip " + r.id + ": " + path);
        }
        FeatureSequence fs = load_features(path);
        if (pad_len > 0) fs = pad_truncate(fs, pad_len);
        ds.features.emplace(r.id, std::move(fs));
        ds.ids.push_back(r.id);
    }
    return ds;
}

std::vector<SynthClip> synth_generate(Rng& rng, const SynthConfig& cfg) {
    if (cfg.prototypes < 2) throw ConfigError("synth: need at least 2 prototypes");
    if (cfg.segments < 1 || cfg.segment_len < 1 || cfg.dim < 1 || cfg.num_clips < 1) {
        throw ConfigError("synth: sizes must be positive");
    }

    std::vector<Tensor> protos;
    protos.reserve(cfg.prototypes);
    for (std::size_t p = 0; p < cfg.prototypes; ++p) {
        Tensor v = Tensor::vector(cfg.dim);
        for (std::size_t j = 0; j < cfg.dim; ++j) v[j] = rng.uniform(-1.0, 1.0);
        protos.push_back(std::move(v));
    }

    std::vector<SynthClip> clips;
    clips.reserve(cfg.num_clips);
    for (std::size_t i = 0; i < cfg.num_clips; ++i) {
        SynthClip clip;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "clip%05zu", i);
        clip.id = buf;
        clip.features.dim = cfg.dim;
        std::string caption;
        for (std::size_t s = 0; s < cfg.segments; ++s) {
            const std::size_t p = static_cast<std::size_t>(rng.below(cfg.prototypes));
            if (s) caption += ' ';
            caption += 'p';
            caption += std::to_string(p);
            for (std::size_t f = 0; f < cfg.segment_len; ++f) {
                Tensor frame = protos[p];
                for (std::size_t j = 0; j < cfg.dim; ++j) frame[j] += rng.gaussian(0.0, cfg.noise);
                clip.features.frames.push_back(std::move(frame));
            }
        }
        clip.caption = std::move(caption);
        clips.push_back(std::move(clip));
    }
    return clips;
}

CaptionDataset dataset_from_clips(const std::vector<SynthClip>& clips) {
    CaptionDataset ds;
    for (const auto& c : clips) {
        ds.records.push_back({c.id, c.caption});
        ds.ids.push_back(c.id);
        ds.features.emplace(c.id, c.features);
    }
    return ds;
}

void write_synth_dataset(const std::string& dir, const std::vector<SynthClip>& clips,
                         const std::string& manifest_name) {
    std::filesystem::create_directories(dir);
    std::vector<ManifestRecord> records;
    records.reserve(clips.size());
    for (const auto& c : clips) {
        save_features((std::filesystem::path(dir) / (c.id + ".feat")).string(), c.features);
        records.push_back({c.id, c.caption});
    }
    save_manifest((std::filesystem::path(dir) / manifest_name).string(), records);
}

}  // namespace hrne
