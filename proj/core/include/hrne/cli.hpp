#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hrne {

// Every tunable the toolkit accepts, as `key = value` entries. A config
// file seeds the values; command-line flags of the same name win.
struct RunConfig {
    // model structure
    std::string variant = "hrne";
    std::size_t hidden = 1024;    // every LSTM
    std::size_t embed = 512;      // frame and word embedding
    std::size_t maxout = 0;       // deep-output width, 0 means embed
    std::size_t chunk = 8;        // n
    std::size_t stride = 8;       // s
    std::size_t levels = 2;
    bool attn1 = false, attn2 = false, attn3 = false;
    std::size_t max_len = 30;
    std::size_t frames = 160;     // pad/truncate length, 0 keeps native lengths
    // training
    std::size_t batch = 128;
    std::size_t epochs = 200;
    std::size_t patience = 10;
    std::size_t threads = 1;
    std::size_t min_count = 1;
    double lr = 2e-4;
    double dropout = 0.5;
    double clip = 5.0;
    std::uint64_t seed = 1;
    // synthetic task
    std::size_t num = 512;
    std::size_t val_num = 0;
    std::size_t segments = 4;
    std::size_t seglen = 8;
    std::size_t dim = 16;
    std::size_t prototypes = 8;
    double noise = 0.1;
    // paths
    std::string data_dir, manifest, val_manifest, ckpt, out_path, features_path, report;
};

// `key = value` lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig build_run_config(const std::map<std::string, std::string>& file_values,
                           const std::vector<std::pair<std::string, std::string>>& flag_values);

// Entry point behind the `hrne` binary. args excludes argv[0].
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrne
