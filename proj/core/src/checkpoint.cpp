#include "hrne/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hrne/error.hpp"

namespace hrne {

namespace {

constexpr char kMagic[4] = {'H', 'R', 'N', 'E'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffu));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw IoError(std::string("checkpoint truncated while reading ") + what);
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in, const char* what) {
    const std::uint64_t lo = get_u32(in, what);
    const std::uint64_t hi = get_u32(in, what);
    return lo | (hi << 32);
}

std::string get_bytes(std::istream& in, std::size_t len, const char* what) {
    std::string s(len, '\0');
    if (!in.read(s.data(), static_cast<std::streamsize>(len))) {
        throw IoError(std::string("checkpoint truncated while reading ") + what);
    }
    return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint not writable: " + path);
    out.write(kMagic, 4);
    put_u32(out, ckpt.version);

    std::string config_block;
    for (const auto& [k, v] : ckpt.config) {
        config_block += k;
        config_block += '=';
        config_block += v;
        config_block += '\n';
    }
    put_u32(out, static_cast<std::uint32_t>(config_block.size()));
    out.write(config_block.data(), static_cast<std::streamsize>(config_block.size()));

    put_u32(out, static_cast<std::uint32_t>(ckpt.vocab_tokens.size()));
    for (const auto& tok : ckpt.vocab_tokens) {
        put_u32(out, static_cast<std::uint32_t>(tok.size()));
        out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
    }

    put_u32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const auto& [name, tensor] : ckpt.tensors) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(out, static_cast<std::uint32_t>(tensor.rank()));
        for (std::size_t d : tensor.shape()) put_u64(out, d);
        for (std::size_t i = 0; i < tensor.size(); ++i) {
            put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(tensor[i])));
        }
    }
    if (!out) throw IoError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint not readable: " + path);

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("checkpoint has bad magic: " + path);
    }
    Checkpoint ckpt;
    ckpt.version = get_u32(in, "version");
    if (ckpt.version != kVersion) {
        throw IoError("checkpoint has unsupported version " + std::to_string(ckpt.version) +
                      ": " + path);
    }

    const std::uint32_t config_len = get_u32(in, "config length");
    const std::string config_block = get_bytes(in, config_len, "config block");
    std::istringstream lines(config_block);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("checkpoint config line without '=': " + line);
        ckpt.config[line.substr(0, eq)] = line.substr(eq + 1);
    }

    const std::uint32_t vocab_count = get_u32(in, "vocabulary count");
    ckpt.vocab_tokens.reserve(vocab_count);
    for (std::uint32_t i = 0; i < vocab_count; ++i) {
        const std::uint32_t len = get_u32(in, "token length");
        ckpt.vocab_tokens.push_back(get_bytes(in, len, "token"));
    }

    const std::uint32_t tensor_count = get_u32(in, "tensor count");
    ckpt.tensors.reserve(tensor_count);
    for (std::uint32_t i = 0; i < tensor_count; ++i) {
        const std::uint32_t name_len = get_u32(in, "tensor name length");
        std::string name = get_bytes(in, name_len, "tensor name");
        const std::uint32_t rank = get_u32(in, "tensor rank");
        if (rank < 1 || rank > 2) {
            throw IoError("checkpoint tensor " + name + " has unsupported rank " +
                          std::to_string(rank));
        }
        std::vector<std::uint64_t> dims(rank);
        for (auto& d : dims) d = get_u64(in, "tensor dims");
        Tensor t = rank == 1 ? Tensor::vector(dims[0]) : Tensor::matrix(dims[0], dims[1]);
        for (std::size_t j = 0; j < t.size(); ++j) {
            const std::uint32_t bits = get_u32(in, "tensor values");
            t[j] = static_cast<double>(std::bit_cast<float>(bits));
        }
        ckpt.tensors.emplace_back(std::move(name), std::move(t));
    }
    return ckpt;
}

std::map<std::string, std::string> model_config_to_map(const ModelConfig& cfg) {
    std::map<std::string, std::string> m;
    const auto put = [&](const char* k, std::size_t v) { m[k] = std::to_string(v); };
    m["variant"] = variant_name(cfg.enc.variant);
    put("input_dim", cfg.enc.input_dim);
    put("embed_dim", cfg.enc.embed_dim);
    put("hidden1", cfg.enc.hidden1);
    put("hidden2", cfg.enc.hidden2);
    put("chunk_len", cfg.enc.chunk_len);
    put("stride", cfg.enc.stride);
    put("levels", cfg.enc.levels);
    m["attn1"] = cfg.enc.attn_input ? "1" : "0";
    m["attn2"] = cfg.enc.attn_chunk ? "1" : "0";
    m["attn3"] = cfg.enc.attn_decode ? "1" : "0";
    put("vocab_size", cfg.vocab_size);
    put("word_embed", cfg.word_embed);
    put("maxout_dim", cfg.maxout_dim);
    put("max_len", cfg.max_len);
    return m;
}

ModelConfig model_config_from_map(const std::map<std::string, std::string>& map) {
    const auto get = [&](const char* k) -> const std::string& {
        const auto it = map.find(k);
        if (it == map.end()) throw IoError(std::string("checkpoint config missing key ") + k);
        return it->second;
    };
    const auto get_size = [&](const char* k) -> std::size_t {
        return static_cast<std::size_t>(std::stoull(get(k)));
    };
    ModelConfig cfg;
    cfg.enc.variant = variant_from_name(get("variant"));
    cfg.enc.input_dim = get_size("input_dim");
    cfg.enc.embed_dim = get_size("embed_dim");
    cfg.enc.hidden1 = get_size("hidden1");
    cfg.enc.hidden2 = get_size("hidden2");
    cfg.enc.chunk_len = get_size("chunk_len");
    cfg.enc.stride = get_size("stride");
    cfg.enc.levels = get_size("levels");
    cfg.enc.attn_input = get("attn1") == "1";
    cfg.enc.attn_chunk = get("attn2") == "1";
    cfg.enc.attn_decode = get("attn3") == "1";
    cfg.vocab_size = get_size("vocab_size");
    cfg.word_embed = get_size("word_embed");
    cfg.maxout_dim = get_size("maxout_dim");
    cfg.max_len = get_size("max_len");
    return cfg;
}

Checkpoint make_checkpoint(CaptionModel& model, const Vocabulary& vocab,
                           const std::map<std::string, std::string>& extra_config) {
    Checkpoint ckpt;
    ckpt.config = model_config_to_map(model.config());
    for (const auto& [k, v] : extra_config) ckpt.config[k] = v;
    ckpt.vocab_tokens = vocab.tokens();
    for (ParamTensor* p : model.tensors()) ckpt.tensors.emplace_back(p->name, p->value);
    return ckpt;
}

RestoredModel restore_model(const Checkpoint& ckpt) {
    RestoredModel out;
    out.config_map = ckpt.config;
    out.cfg = model_config_from_map(ckpt.config);
    out.vocab = Vocabulary::from_tokens(ckpt.vocab_tokens);
    if (out.vocab.size() != out.cfg.vocab_size) {
        throw IoError("checkpoint vocabulary count " + std::to_string(out.vocab.size()) +
                      " disagrees with config vocab_size " +
                      std::to_string(out.cfg.vocab_size));
    }
    Rng rng(0);
    out.model = std::make_unique<CaptionModel>(rng, out.cfg);

    std::map<std::string, Tensor> table;
    for (const auto& [name, tensor] : ckpt.tensors) {
        if (!table.emplace(name, tensor).second) {
            throw IoError("checkpoint has duplicate tensor " + name);
        }
    }
    for (ParamTensor* p : out.model->tensors()) {
        const auto it = table.find(p->name);
        if (it == table.end()) throw IoError("checkpoint missing tensor " + p->name);
        if (!it->second.same_shape(p->value)) {
            throw IoError("checkpoint tensor " + p->name + " has shape " +
                          it->second.shape_str() + ", expected " + p->value.shape_str());
        }
        p->value = it->second;
        table.erase(it);
    }
    if (!table.empty()) {
        throw IoError("checkpoint has unexpected tensor " + table.begin()->first);
    }
    return out;
}

RestoredModel load_model(const std::string& path) { return restore_model(load_checkpoint(path)); }

}  // namespace hrne
