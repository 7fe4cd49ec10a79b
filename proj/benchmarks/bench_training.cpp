#include <benchmark/benchmark.h>

#include "hrne/trainer.hpp"

using namespace hrne;

namespace {

struct TrainSetup {
    CaptionDataset ds;
    Vocabulary vocab;
    ModelConfig mc;

    explicit TrainSetup(std::size_t clips) {
        SynthConfig sc;
        sc.num_clips = clips;
        Rng rng(5);
        ds = dataset_from_clips(synth_generate(rng, sc));
        std::vector<std::vector<std::string>> corpus;
        for (const auto& r : ds.records) corpus.push_back(tokenize(r.caption));
        vocab = Vocabulary::build(corpus);
        mc.enc.input_dim = 16;
        mc.enc.embed_dim = 32;
        mc.enc.hidden1 = 64;
        mc.enc.hidden2 = 64;
        mc.enc.chunk_len = 8;
        mc.enc.stride = 8;
        mc.vocab_size = vocab.size();
        mc.word_embed = 32;
        mc.maxout_dim = 32;
    }
};

}  // namespace

static void BM_CaptionLossForward(benchmark::State& state) {
    TrainSetup setup(4);
    Rng rng(6);
    CaptionModel model(rng, setup.mc);
    const auto examples = make_examples(setup.ds, setup.vocab);
    Tape tape;
    for (auto _ : state) {
        tape.reset();
        const auto loss =
            model.caption_loss(tape, *examples[0].features, examples[0].reference);
        benchmark::DoNotOptimize(tape.scalar(loss));
    }
}
BENCHMARK(BM_CaptionLossForward);

static void BM_CaptionLossBackward(benchmark::State& state) {
    TrainSetup setup(4);
    Rng rng(7);
    CaptionModel model(rng, setup.mc);
    const auto examples = make_examples(setup.ds, setup.vocab);
    Tape tape;
    for (auto _ : state) {
        tape.reset();
        model.zero_grads();
        const auto loss =
            model.caption_loss(tape, *examples[0].features, examples[0].reference);
        tape.backward(loss);
        benchmark::DoNotOptimize(model.decoder().W_y.grad.data());
    }
}
BENCHMARK(BM_CaptionLossBackward);

static void BM_TrainBatch(benchmark::State& state) {
    const std::size_t threads = static_cast<std::size_t>(state.range(0));
    TrainSetup setup(16);
    Rng rng(8);
    CaptionModel model(rng, setup.mc);
    const auto examples = make_examples(setup.ds, setup.vocab);
    const auto params = model.tensors();
    TrainConfig tc;
    tc.batch_size = 16;
    tc.threads = threads;
    tc.dropout = 0.0;
    AdamState adam(params, tc.adam);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_batch(model, adam, examples, tc, 0));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * examples.size()));
}
BENCHMARK(BM_TrainBatch)->Arg(1)->Arg(2);

static void BM_GreedyDecode(benchmark::State& state) {
    TrainSetup setup(4);
    Rng rng(9);
    CaptionModel model(rng, setup.mc);
    const auto& fs = setup.ds.features_of(setup.ds.ids[0]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.greedy_ids(fs));
    }
}
BENCHMARK(BM_GreedyDecode);

BENCHMARK_MAIN();
