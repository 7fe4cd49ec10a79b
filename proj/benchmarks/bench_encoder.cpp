#include <benchmark/benchmark.h>

#include "hrne/encoder.hpp"
#include "hrne/rng.hpp"

using namespace hrne;

namespace {

FeatureSequence random_features(Rng& rng, std::size_t t, std::size_t d) {
    FeatureSequence fs = FeatureSequence::zeros(t, d);
    for (auto& frame : fs.frames) {
        for (std::size_t j = 0; j < d; ++j) frame[j] = rng.uniform(-1.0, 1.0);
    }
    return fs;
}

EncoderConfig config(EncoderVariant variant, std::size_t hidden) {
    EncoderConfig cfg;
    cfg.variant = variant;
    cfg.input_dim = 128;
    cfg.embed_dim = hidden / 2;
    cfg.hidden1 = hidden;
    cfg.hidden2 = hidden;
    cfg.chunk_len = 8;
    cfg.stride = 8;
    return cfg;
}

}  // namespace

static void BM_LstmStep(benchmark::State& state) {
    const std::size_t hidden = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    LstmParams params(rng, "cell", hidden / 2, hidden);
    Tensor x = Tensor::vector(hidden / 2);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(-1.0, 1.0);
    LstmState st = LstmState::zero(hidden);
    for (auto _ : state) {
        st = lstm_step(params, x, st);
        benchmark::DoNotOptimize(st.h.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_LstmStep)->Arg(64)->Arg(256)->Arg(1024);

static void BM_EncodeHrne(benchmark::State& state) {
    const std::size_t hidden = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    EncoderConfig cfg = config(EncoderVariant::hrne, hidden);
    EncoderParams params(rng, cfg);
    const FeatureSequence fs = random_features(rng, 160, cfg.input_dim);
    for (auto _ : state) {
        const VideoVector v = encode_hrne(params, cfg, fs);
        benchmark::DoNotOptimize(v.v.data());
    }
}
BENCHMARK(BM_EncodeHrne)->Arg(64)->Arg(256);

static void BM_EncodeHrneAttention(benchmark::State& state) {
    const std::size_t hidden = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    EncoderConfig cfg = config(EncoderVariant::hrne, hidden);
    cfg.attn_input = true;
    cfg.attn_chunk = true;
    EncoderParams params(rng, cfg);
    const FeatureSequence fs = random_features(rng, 160, cfg.input_dim);
    for (auto _ : state) {
        const VideoVector v = encode_hrne(params, cfg, fs);
        benchmark::DoNotOptimize(v.v.data());
    }
}
BENCHMARK(BM_EncodeHrneAttention)->Arg(64)->Arg(256);

static void BM_EncodeStacked(benchmark::State& state) {
    const std::size_t hidden = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    EncoderConfig cfg = config(EncoderVariant::stacked, hidden);
    EncoderParams params(rng, cfg);
    const FeatureSequence fs = random_features(rng, 160, cfg.input_dim);
    for (auto _ : state) {
        const VideoVector v = encode_stacked(params, cfg, fs);
        benchmark::DoNotOptimize(v.v.data());
    }
}
BENCHMARK(BM_EncodeStacked)->Arg(64)->Arg(256);

static void BM_EncodeMeanpool(benchmark::State& state) {
    Rng rng(4);
    EncoderConfig cfg = config(EncoderVariant::meanpool, 256);
    EncoderParams params(rng, cfg);
    const FeatureSequence fs = random_features(rng, 160, cfg.input_dim);
    for (auto _ : state) {
        const VideoVector v = encode_meanpool(params, cfg, fs);
        benchmark::DoNotOptimize(v.v.data());
    }
}
BENCHMARK(BM_EncodeMeanpool);
