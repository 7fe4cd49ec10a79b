#include "hrne/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "hrne/bleu.hpp"
#include "hrne/error.hpp"
#include "hrne/vocab.hpp"

namespace hrne {

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be at least 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("train: dropout must be in [0, 1)");
    if (max_epochs < 1) throw ConfigError("train: max_epochs must be at least 1");
    if (threads < 1) throw ConfigError("train: threads must be at least 1");
    if (clip_norm < 0.0) throw ConfigError("train: clip_norm must be non-negative");
}

namespace {

std::vector<Tensor> zero_like(std::span<ParamTensor* const> params) {
    std::vector<Tensor> out;
    out.reserve(params.size());
    for (const ParamTensor* p : params) {
        Tensor t = p->value;
        t.fill(0.0);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

double accumulate_batch_gradients(CaptionModel& model, std::span<const TrainExample> batch,
                                  std::size_t threads, double dropout_rate,
                                  std::uint64_t mask_seed) {
    const auto params = model.tensors();
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, batch.size()));

    std::vector<std::vector<Tensor>> sinks(workers);
    std::vector<double> losses(batch.size(), 0.0);
    std::vector<std::exception_ptr> errors(workers);

    const auto run_slice = [&](std::size_t w, std::size_t lo, std::size_t hi) {
        try {
            sinks[w] = zero_like(params);
            Tape tape;
            for (std::size_t i = lo; i < hi; ++i) {
                tape.reset();
                Rng mask_rng = Rng(mask_seed).derive(i);
                DropoutCtx drop{dropout_rate, &mask_rng, nullptr};
                DropoutCtx* ctx =
                    (dropout_rate > 0.0 && mask_seed != 0) ? &drop : nullptr;
                const auto loss =
                    model.caption_loss(tape, *batch[i].features, batch[i].reference, ctx);
                losses[i] = tape.scalar(loss);
                if (!std::isfinite(losses[i])) {
                    throw NumericError("train: non-finite loss on example " + std::to_string(i));
                }
                tape.backward(loss, sinks[w]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        run_slice(0, 0, batch.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t per = (batch.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * per;
            const std::size_t hi = std::min(batch.size(), lo + per);
            pool.emplace_back(run_slice, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    // deterministic reduction: slice order, then tensor order
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& g = params[k]->grad;
        g = std::move(sinks[0][k]);
        for (std::size_t w = 1; w < workers; ++w) {
            const Tensor& s = sinks[w][k];
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += s[i];
        }
    }

    double total = 0.0;
    for (double l : losses) total += l;
    return total;
}

double train_batch(CaptionModel& model, AdamState& adam, std::span<const TrainExample> batch,
                   const TrainConfig& cfg, std::uint64_t mask_seed) {
    const double total =
        accumulate_batch_gradients(model, batch, cfg.threads, cfg.dropout, mask_seed);
    const auto params = model.tensors();
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (ParamTensor* p : params) {
        for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] *= inv;
    }
    if (cfg.clip_norm > 0.0) {
        double sq = 0.0;
        for (ParamTensor* p : params) {
            for (std::size_t i = 0; i < p->grad.size(); ++i) sq += p->grad[i] * p->grad[i];
        }
        const double norm = std::sqrt(sq);
        if (norm > cfg.clip_norm) {
            const double scale = cfg.clip_norm / norm;
            for (ParamTensor* p : params) {
                for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] *= scale;
            }
        }
    }
    adam.step(params);
    return total / static_cast<double>(batch.size());
}

std::vector<TrainExample> make_examples(const CaptionDataset& ds, const Vocabulary& vocab) {
    std::vector<TrainExample> examples;
    examples.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        TrainExample ex;
        ex.features = &ds.features_of(r.id);
        ex.reference = vocab.encode_wrapped(tokenize(r.caption));
        examples.push_back(std::move(ex));
    }
    return examples;
}

EvalResult evaluate_dataset(CaptionModel& model, const CaptionDataset& ds,
                            const Vocabulary& vocab, bool smooth_bleu) {
    EvalResult out;
    std::vector<BleuPair> pairs;
    double acc = 0.0;
    const auto groups = ds.grouped_captions();
    for (const auto& [id, captions] : groups) {
        BleuPair pair;
        pair.candidate = model.greedy_tokens(ds.features_of(id), vocab);
        double best = 0.0;
        for (const auto& caption : captions) {
            pair.references.push_back(tokenize(caption));
            best = std::max(best, token_accuracy(pair.candidate, pair.references.back()));
        }
        acc += best;
        pairs.push_back(std::move(pair));
    }
    out.token_acc = acc / static_cast<double>(groups.size());
    out.bleu = corpus_bleu(pairs, 4, smooth_bleu);
    return out;
}

TrainResult train(CaptionModel& model, const CaptionDataset& train_set, const Vocabulary& vocab,
                  const TrainConfig& cfg, const CaptionDataset* val_set, std::ostream* log) {
    cfg.validate();
    if (train_set.records.empty()) throw ConfigError("train: empty training set");

    auto examples = make_examples(train_set, vocab);
    const auto params = model.tensors();
    AdamState adam(params, cfg.adam);
    Rng shuffle_rng = Rng(cfg.seed).derive(0xdeca1);

    TrainResult result;
    std::vector<Tensor> best_values;
    std::size_t since_best = 0;

    std::vector<std::size_t> order(examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        // seeded Fisher-Yates shuffle each epoch
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng.below(i))]);
        }

        double epoch_loss = 0.0;
        std::size_t done = 0;
        while (done < order.size()) {
            const std::size_t take = std::min(cfg.batch_size, order.size() - done);
            std::vector<TrainExample> batch;
            batch.reserve(take);
            for (std::size_t i = 0; i < take; ++i) batch.push_back(examples[order[done + i]]);
            const std::uint64_t mask_seed =
                cfg.dropout > 0.0 ? (cfg.seed ^ (epoch * 0x9e3779b97f4a7c15ull) ^ done) | 1 : 0;
            const double mean_loss = train_batch(model, adam, batch, cfg, mask_seed);
            ++result.updates;
            epoch_loss += mean_loss * static_cast<double>(take);
            done += take;
        }
        epoch_loss /= static_cast<double>(order.size());

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss;
        result.final_loss = epoch_loss;
        result.epochs_run = epoch;

        if (val_set) {
            stats.has_val = true;
            stats.val_metric =
                evaluate_dataset(model, *val_set, vocab, /*smooth_bleu=*/true).bleu.at(4);
            if (result.history.empty() || stats.val_metric > result.best_val) {
                result.best_val = stats.val_metric;
                result.best_epoch = epoch;
                since_best = 0;
                best_values.clear();
                for (ParamTensor* p : params) best_values.push_back(p->value);
            } else {
                ++since_best;
            }
        }

        result.history.push_back(stats);
        if (log) {
            (*log) << "epoch=" << epoch << " loss=" << epoch_loss;
            if (stats.has_val) (*log) << " val_bleu4=" << stats.val_metric;
            (*log) << '\n';
        }

        if (val_set && cfg.patience > 0 && since_best >= cfg.patience) {
            result.early_stopped = true;
            break;
        }
    }

    if (val_set && !best_values.empty()) {
        for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = best_values[k];
    }
    return result;
}

}  // namespace hrne
