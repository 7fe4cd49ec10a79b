#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hrne/adam.hpp"
#include "hrne/bleu.hpp"
#include "hrne/dataset.hpp"
#include "hrne/model.hpp"

namespace hrne {

struct TrainConfig {
    std::size_t batch_size = 128;
    std::size_t max_epochs = 200;
    double dropout = 0.5;
    std::size_t patience = 10;    // epochs without validation improvement, 0 disables
    std::uint64_t seed = 1;
    std::size_t threads = 1;      // per-batch gradient workers
    double clip_norm = 5.0;       // global gradient norm, 0 disables
    AdamConfig adam;

    void validate() const;
};

struct TrainExample {
    const FeatureSequence* features = nullptr;
    std::vector<int> reference;  // BOS ... EOS
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;   // mean per-example loss (sum over time steps)
    double val_metric = 0.0;   // smoothed corpus BLEU@4
    bool has_val = false;
};

struct TrainResult {
    std::vector<EpochStats> history;
    std::size_t epochs_run = 0;
    std::size_t updates = 0;  // optimizer steps taken
    std::size_t best_epoch = 0;
    double best_val = 0.0;
    bool early_stopped = false;
    double final_loss = 0.0;
};

// Sum of per-example caption-loss gradients over a batch, written into
// each ParamTensor::grad (previous contents are discarded). Worker
// threads own contiguous slices and the reduction order is fixed, so the
// result is deterministic for a given thread count. Returns the summed
// loss. mask_seed != 0 enables per-example dropout mask streams.
double accumulate_batch_gradients(CaptionModel& model, std::span<const TrainExample> batch,
                                  std::size_t threads = 1, double dropout_rate = 0.0,
                                  std::uint64_t mask_seed = 0);

// Scales grads to the batch mean, applies optional norm clipping, then one
// Adam update. Returns the mean per-example loss.
double train_batch(CaptionModel& model, AdamState& adam, std::span<const TrainExample> batch,
                   const TrainConfig& cfg, std::uint64_t mask_seed);

std::vector<TrainExample> make_examples(const CaptionDataset& ds, const Vocabulary& vocab);

// Full loop: seeded shuffling each epoch, mini-batches, Adam, optional
// validation after every epoch (smoothed corpus BLEU@4 over greedy
// captions) with best-checkpoint retention and patience-based stopping.
// The model holds the best-validation parameters on return.
TrainResult train(CaptionModel& model, const CaptionDataset& train_set, const Vocabulary& vocab,
                  const TrainConfig& cfg, const CaptionDataset* val_set = nullptr,
                  std::ostream* log = nullptr);

// Greedy-caption quality over a dataset: corpus BLEU plus mean token
// accuracy (best reference per clip).
struct EvalResult {
    double token_acc = 0.0;
    BleuReport bleu;
};
EvalResult evaluate_dataset(CaptionModel& model, const CaptionDataset& ds,
                            const Vocabulary& vocab, bool smooth_bleu = false);

}  // namespace hrne
