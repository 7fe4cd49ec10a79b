#include "hrne/encoder.hpp"

#include "hrne/error.hpp"
#include "hrne/ops.hpp"

namespace hrne {

const char* variant_name(EncoderVariant v) {
    switch (v) {
        case EncoderVariant::hrne: return "hrne";
        case EncoderVariant::stacked: return "stacked";
        case EncoderVariant::meanpool: return "meanpool";
    }
    return "?";
}

EncoderVariant variant_from_name(const std::string& name) {
    if (name == "hrne") return EncoderVariant::hrne;
    if (name == "stacked") return EncoderVariant::stacked;
    if (name == "meanpool") return EncoderVariant::meanpool;
    throw ConfigError("unknown encoder variant: " + name);
}

void EncoderConfig::validate() const {
    if (input_dim == 0) throw ConfigError("encoder: input_dim must be positive");
    if (embed_dim == 0) throw ConfigError("encoder: embed_dim must be positive");
    if (chunk_len == 0) throw ConfigError("encoder: chunk length n must be positive");
    if (stride == 0) throw ConfigError("encoder: stride s must be positive");
    if (levels != 2) {
        throw ConfigError("encoder: only the two-level hierarchy is supported, got levels=" +
                          std::to_string(levels));
    }
    if (variant != EncoderVariant::meanpool && (hidden1 == 0 || hidden2 == 0)) {
        throw ConfigError("encoder: hidden sizes must be positive");
    }
}

std::size_t encoder_output_dim(const EncoderConfig& cfg) {
    return cfg.variant == EncoderVariant::meanpool ? cfg.embed_dim : cfg.hidden2;
}

std::size_t Chunk::real_len() const {
    std::size_t n = 0;
    for (bool p : pad_mask) n += p ? 0 : 1;
    return n;
}

std::vector<ChunkWindow> chunk_windows(std::size_t total, std::size_t n, std::size_t s) {
    if (total == 0) throw ShapeError("chunk_windows: empty sequence");
    if (n == 0 || s == 0) throw ConfigError("chunk_windows: n and s must be positive");
    std::vector<ChunkWindow> windows;
    for (std::size_t start = 0; start < total; start += s) {
        windows.push_back({start, std::min(n, total - start)});
    }
    return windows;
}

ChunkSet chunk_sequence(const FeatureSequence& xs, std::size_t n, std::size_t s) {
    const auto windows = chunk_windows(xs.length(), n, s);
    ChunkSet set;
    set.chunk_len = n;
    set.chunks.reserve(windows.size());
    for (const auto& w : windows) {
        Chunk chunk;
        chunk.frames.reserve(n);
        chunk.pad_mask.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i < w.real_len) {
                chunk.frames.push_back(xs.frames[w.start + i]);
                chunk.pad_mask.push_back(false);
            } else {
                chunk.frames.push_back(Tensor::vector(xs.dim));
                chunk.pad_mask.push_back(true);
            }
        }
        set.chunks.push_back(std::move(chunk));
    }
    return set;
}

Tensor lstm_filter_chunk(LstmParams& params, const std::vector<Tensor>& chunk,
                         const std::vector<bool>& pad_mask) {
    require_shape(chunk.size() == pad_mask.size(), "lstm_filter_chunk: mask length mismatch");
    std::size_t real = 0;
    for (bool p : pad_mask) real += p ? 0 : 1;
    if (real == 0) throw ShapeError("lstm_filter_chunk: chunk is entirely padding");

    const auto states = lstm_forward(params, chunk, LstmState::zero(params.hidden()));
    Tensor mean = Tensor::vector(params.hidden());
    for (std::size_t t = 0; t < states.size(); ++t) {
        if (pad_mask[t]) continue;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += states[t].h[j];
    }
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] /= static_cast<double>(real);
    return mean;
}

PathLength path_length(std::size_t total, std::size_t n) {
    if (n < 1 || total < 1) throw ConfigError("path_length: T and n must be positive");
    if (n > total) {
        throw ConfigError("path_length: n=" + std::to_string(n) + " exceeds T=" +
                          std::to_string(total));
    }
    const std::size_t chunks = (total + n - 1) / n;
    return {n + chunks, total + 1};
}

EncoderParams::EncoderParams(Rng& rng, const EncoderConfig& cfg, double scale) {
    cfg.validate();
    embed = ParamTensor("enc.embed", param_init(rng, cfg.embed_dim, cfg.input_dim, scale));
    if (cfg.variant != EncoderVariant::meanpool) {
        filter = LstmParams(rng, "enc1", cfg.embed_dim, cfg.hidden1, scale);
        layer2 = LstmParams(rng, "enc2", cfg.hidden1, cfg.hidden2, scale);
    }
    if (cfg.variant == EncoderVariant::hrne && cfg.attn_input) {
        attn_input = AttentionParams(rng, "attn1", cfg.embed_dim, cfg.hidden1, cfg.embed_dim,
                                     scale);
    }
    if (cfg.variant == EncoderVariant::hrne && cfg.attn_chunk) {
        attn_chunk = AttentionParams(rng, "attn2", cfg.hidden1, cfg.hidden2, cfg.hidden1, scale);
    }
}

std::vector<ParamTensor*> EncoderParams::tensors(const EncoderConfig& cfg) {
    std::vector<ParamTensor*> out = {&embed};
    if (cfg.variant != EncoderVariant::meanpool) {
        for (auto* t : filter.tensors()) out.push_back(t);
        for (auto* t : layer2.tensors()) out.push_back(t);
    }
    if (cfg.variant == EncoderVariant::hrne && cfg.attn_input) {
        for (auto* t : attn_input.tensors()) out.push_back(t);
    }
    if (cfg.variant == EncoderVariant::hrne && cfg.attn_chunk) {
        for (auto* t : attn_chunk.tensors()) out.push_back(t);
    }
    return out;
}

namespace {

std::vector<Tape::NodeId> embed_frames(Tape& tape, EncoderParams& params,
                                       const FeatureSequence& xs) {
    std::vector<Tape::NodeId> nodes;
    nodes.reserve(xs.length());
    for (const Tensor& frame : xs.frames) {
        nodes.push_back(tape.affine(params.embed, tape.input(frame.span()), nullptr));
    }
    return nodes;
}

VideoNodes encode_hrne_nodes(Tape& tape, EncoderParams& params, const EncoderConfig& cfg,
                             const FeatureSequence& xs, DropoutCtx* drop, EncodeStats* stats) {
    const auto embedded = embed_frames(tape, params, xs);
    const auto windows = chunk_windows(xs.length(), cfg.chunk_len, cfg.stride);

    const std::size_t cells_before = tape.cell_evals;
    std::vector<Tape::NodeId> chunk_vectors;
    chunk_vectors.reserve(windows.size());
    Tape::NodeId pad_frame = -1;  // shared zero input for padded slots

    for (const auto& w : windows) {
        // materialize the fixed-length chunk, zero frames where padded
        std::vector<Tape::NodeId> chunk;
        chunk.reserve(cfg.chunk_len);
        for (std::size_t i = 0; i < cfg.chunk_len; ++i) {
            if (i < w.real_len) {
                chunk.push_back(embedded[w.start + i]);
            } else {
                if (pad_frame < 0) pad_frame = tape.zeros(cfg.embed_dim);
                chunk.push_back(pad_frame);
            }
        }
        LstmNodes state{tape.zeros(cfg.hidden1), tape.zeros(cfg.hidden1)};
        std::vector<Tape::NodeId> hs;
        hs.reserve(w.real_len);
        for (std::size_t t = 0; t < cfg.chunk_len; ++t) {
            Tape::NodeId x = chunk[t];
            if (cfg.attn_input) x = attend(tape, params.attn_input, chunk, state.h);
            x = maybe_dropout(tape, drop, x);
            state = lstm_step(tape, params.filter, x, state);
            if (t < w.real_len) hs.push_back(state.h);  // mean skips padded steps
        }
        chunk_vectors.push_back(tape.average(hs));
    }
    const std::size_t layer1_cells = tape.cell_evals - cells_before;

    VideoNodes out;
    LstmNodes state2{tape.zeros(cfg.hidden2), tape.zeros(cfg.hidden2)};
    for (std::size_t j = 0; j < chunk_vectors.size(); ++j) {
        Tape::NodeId in = cfg.attn_chunk ? attend(tape, params.attn_chunk, chunk_vectors, state2.h)
                                         : chunk_vectors[j];
        in = maybe_dropout(tape, drop, in);
        state2 = lstm_step(tape, params.layer2, in, state2);
        out.layer2_states.push_back(state2.h);
    }
    out.v = out.layer2_states.back();
    if (stats) {
        stats->layer1_cells = layer1_cells;
        stats->layer2_cells = tape.cell_evals - cells_before - layer1_cells;
    }
    return out;
}

VideoNodes encode_stacked_nodes(Tape& tape, EncoderParams& params, const EncoderConfig& cfg,
                                const FeatureSequence& xs, DropoutCtx* drop, EncodeStats* stats) {
    const auto embedded = embed_frames(tape, params, xs);
    const std::size_t cells_before = tape.cell_evals;
    VideoNodes out;
    LstmNodes s1{tape.zeros(cfg.hidden1), tape.zeros(cfg.hidden1)};
    LstmNodes s2{tape.zeros(cfg.hidden2), tape.zeros(cfg.hidden2)};
    for (const Tape::NodeId x : embedded) {
        s1 = lstm_step(tape, params.filter, maybe_dropout(tape, drop, x), s1);
        s2 = lstm_step(tape, params.layer2, maybe_dropout(tape, drop, s1.h), s2);
        out.layer2_states.push_back(s2.h);
    }
    out.v = out.layer2_states.back();
    if (stats) {
        stats->layer1_cells = (tape.cell_evals - cells_before) / 2;
        stats->layer2_cells = stats->layer1_cells;
    }
    return out;
}

VideoNodes encode_meanpool_nodes(Tape& tape, EncoderParams& params, const FeatureSequence& xs,
                                 EncodeStats* stats) {
    const auto embedded = embed_frames(tape, params, xs);
    VideoNodes out;
    out.v = tape.average(embedded);
    out.layer2_states = embedded;
    if (stats) *stats = {};
    return out;
}

VideoVector extract(const Tape& tape, const VideoNodes& nodes) {
    VideoVector out;
    out.v = Tensor::vector(tape.len(nodes.v));
    auto vv = tape.value(nodes.v);
    std::copy(vv.begin(), vv.end(), out.v.data());
    out.layer2_states.reserve(nodes.layer2_states.size());
    for (const auto n : nodes.layer2_states) {
        Tensor s = Tensor::vector(tape.len(n));
        auto sv = tape.value(n);
        std::copy(sv.begin(), sv.end(), s.data());
        out.layer2_states.push_back(std::move(s));
    }
    return out;
}

}  // namespace

VideoNodes encode_on_tape(Tape& tape, EncoderParams& params, const EncoderConfig& cfg,
                          const FeatureSequence& xs, DropoutCtx* drop, EncodeStats* stats) {
    cfg.validate();
    if (xs.length() == 0) throw ShapeError("encode: empty feature sequence");
    if (xs.dim != cfg.input_dim) {
        throw ShapeError("encode: feature dim " + std::to_string(xs.dim) + " vs configured " +
                         std::to_string(cfg.input_dim));
    }
    switch (cfg.variant) {
        case EncoderVariant::hrne: return encode_hrne_nodes(tape, params, cfg, xs, drop, stats);
        case EncoderVariant::stacked:
            return encode_stacked_nodes(tape, params, cfg, xs, drop, stats);
        case EncoderVariant::meanpool: return encode_meanpool_nodes(tape, params, xs, stats);
    }
    throw ConfigError("encode: unknown variant");
}

VideoVector encode_hrne(EncoderParams& params, const EncoderConfig& cfg, const FeatureSequence& xs,
                        EncodeStats* stats) {
    if (cfg.variant != EncoderVariant::hrne) throw ConfigError("encode_hrne: wrong variant");
    Tape tape;
    return extract(tape, encode_on_tape(tape, params, cfg, xs, nullptr, stats));
}

VideoVector encode_stacked(EncoderParams& params, const EncoderConfig& cfg,
                           const FeatureSequence& xs, EncodeStats* stats) {
    if (cfg.variant != EncoderVariant::stacked) throw ConfigError("encode_stacked: wrong variant");
    Tape tape;
    return extract(tape, encode_on_tape(tape, params, cfg, xs, nullptr, stats));
}

VideoVector encode_meanpool(EncoderParams& params, const EncoderConfig& cfg,
                            const FeatureSequence& xs, EncodeStats* stats) {
    if (cfg.variant != EncoderVariant::meanpool) {
        throw ConfigError("encode_meanpool: wrong variant");
    }
    Tape tape;
    return extract(tape, encode_on_tape(tape, params, cfg, xs, nullptr, stats));
}

}  // namespace hrne
