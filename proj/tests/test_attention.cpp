#include <cmath>

#include <doctest.h>

#include "hrne/attention.hpp"
#include "hrne/error.hpp"
#include "hrne/gradcheck.hpp"
#include "test_util.hpp"

using namespace hrne;
using testutil::random_vector;

namespace {

std::vector<Tensor> random_items(Rng& rng, std::size_t count, std::size_t dim) {
    std::vector<Tensor> items;
    for (std::size_t i = 0; i < count; ++i) items.push_back(random_vector(rng, dim));
    return items;
}

// direct transcription of the score formula, independent of the tape path
double direct_score(const AttentionParams& p, const Tensor& item, const Tensor& h) {
    double s = 0.0;
    for (std::size_t r = 0; r < p.w.value.size(); ++r) {
        double pre = p.b_a.value[r];
        for (std::size_t c = 0; c < item.size(); ++c) pre += p.W_a.value.at(r, c) * item[c];
        for (std::size_t c = 0; c < h.size(); ++c) pre += p.U_a.value.at(r, c) * h[c];
        s += p.w.value[r] * std::tanh(pre);
    }
    return s;
}

}  // namespace

TEST_CASE("attention scores vanish when w or the transforms are zero") {
    Rng rng(1);
    AttentionParams p(rng, "attn", 3, 4, 5);
    const auto items = random_items(rng, 6, 3);
    const Tensor h = random_vector(rng, 4);

    SUBCASE("w = 0") {
        p.w.value.fill(0.0);
        const Tensor scores = attention_scores(p, items, h);
        for (std::size_t i = 0; i < scores.size(); ++i) CHECK(scores[i] == 0.0);
    }
    SUBCASE("W_a = U_a = 0, b_a = 0") {
        p.W_a.value.fill(0.0);
        p.U_a.value.fill(0.0);
        p.b_a.value.fill(0.0);
        const Tensor scores = attention_scores(p, items, h);
        for (std::size_t i = 0; i < scores.size(); ++i) CHECK(scores[i] == 0.0);
    }
}

TEST_CASE("attention scores match the direct formula") {
    Rng rng(2);
    AttentionParams p(rng, "attn", 3, 4, 5, 0.6);
    const auto items = random_items(rng, 7, 3);
    const Tensor h = random_vector(rng, 4);
    const Tensor scores = attention_scores(p, items, h);
    REQUIRE(scores.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(std::fabs(scores[i] - direct_score(p, items[i], h)) < 1e-9);
    }
}

TEST_CASE("attention rejects an empty item sequence") {
    Rng rng(3);
    AttentionParams p(rng, "attn", 3, 4, 3);
    CHECK_THROWS_AS(attention_scores(p, {}, random_vector(rng, 4)), ShapeError);
    CHECK_THROWS_AS(attention_weights(Tensor::vector(0)), ShapeError);
}

TEST_CASE("attention weights: uniform, singleton, normalized") {
    Tensor equal = Tensor::vector(5);
    equal.fill(1.7);
    const Tensor w = attention_weights(equal);
    for (std::size_t i = 0; i < 5; ++i) CHECK(w[i] == doctest::Approx(0.2).epsilon(1e-12));

    Tensor one = Tensor::vector(1);
    one[0] = -3.4;
    CHECK(attention_weights(one)[0] == doctest::Approx(1.0));

    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Tensor weights = attention_weights(random_vector(rng, 1 + trial % 9, -8.0, 8.0));
        double total = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            CHECK(weights[i] > 0.0);
            total += weights[i];
        }
        CHECK(std::fabs(total - 1.0) < 1e-6);
    }
}

TEST_CASE("attention context blends items") {
    Rng rng(5);
    const auto items = random_items(rng, 4, 3);

    SUBCASE("uniform weights give the arithmetic mean") {
        Tensor w = Tensor::vector(4);
        w.fill(0.25);
        const Tensor ctx = attention_context(w, items);
        for (std::size_t j = 0; j < 3; ++j) {
            double mean = 0.0;
            for (const auto& item : items) mean += item[j] / 4.0;
            CHECK(ctx[j] == doctest::Approx(mean).epsilon(1e-12));
        }
    }
    SUBCASE("one-hot weights select an item exactly") {
        Tensor w = Tensor::vector(4);
        w[2] = 1.0;
        const Tensor ctx = attention_context(w, items);
        for (std::size_t j = 0; j < 3; ++j) CHECK(ctx[j] == items[2][j]);
    }
    SUBCASE("identical items are a fixed point") {
        std::vector<Tensor> same(5, items[0]);
        const Tensor w = attention_weights(random_vector(rng, 5));
        const Tensor ctx = attention_context(w, same);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(ctx[j] == doctest::Approx(items[0][j]).epsilon(1e-9));
        }
    }
    SUBCASE("length mismatch is rejected") {
        Tensor w = Tensor::vector(3);
        w.fill(1.0 / 3.0);
        CHECK_THROWS_AS(attention_context(w, items), ShapeError);
    }
}

TEST_CASE("shifting every score leaves the weights unchanged") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Tensor scores = random_vector(rng, 2 + trial % 6, -5.0, 5.0);
        const double c = rng.uniform(-50.0, 50.0);
        Tensor shifted = scores;
        for (std::size_t i = 0; i < scores.size(); ++i) shifted[i] += c;
        const Tensor a = attention_weights(scores);
        const Tensor b = attention_weights(shifted);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-9);
    }
}

TEST_CASE("context stays inside the coordinate-wise convex hull") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        AttentionParams p(rng, "attn", 4, 3, 4, 0.5);
        const auto items = random_items(rng, 2 + trial % 7, 4);
        const Tensor h = random_vector(rng, 3);
        const Tensor ctx =
            attention_context(attention_weights(attention_scores(p, items, h)), items);
        for (std::size_t j = 0; j < 4; ++j) {
            double lo = items[0][j], hi = items[0][j];
            for (const auto& item : items) {
                lo = std::min(lo, item[j]);
                hi = std::max(hi, item[j]);
            }
            CHECK(ctx[j] >= lo - 1e-12);
            CHECK(ctx[j] <= hi + 1e-12);
        }
    }
}

TEST_CASE("gradients through scores -> weights -> context pass the oracle") {
    Rng rng(8);
    AttentionParams p(rng, "attn", 3, 4, 3, 0.5);
    // wrap items and the query as parameters so the oracle covers them too
    ParamTensor items_mat("items", testutil::random_matrix(rng, 5, 3));
    ParamTensor query_mat("query", testutil::random_matrix(rng, 1, 4));
    ParamTensor readout("r", random_vector(rng, 3));

    auto build2 = [&](Tape& tape) {
        std::vector<Tape::NodeId> items;
        for (std::size_t i = 0; i < 5; ++i) items.push_back(tape.embed_row(items_mat, i));
        const auto h = tape.embed_row(query_mat, 0);
        return tape.dot_param(readout, attend(tape, p, items, h));
    };

    std::vector<ParamTensor*> params = p.tensors();
    params.push_back(&items_mat);
    params.push_back(&query_mat);
    params.push_back(&readout);
    for (auto* t : params) t->zero_grad();
    Tape tape;
    tape.backward(build2(tape));
    const auto report = compare_gradients(
        [&] {
            Tape t;
            return t.scalar(build2(t));
        },
        params, 1e-4);
    CHECK(report.max_rel_err < 1e-4);
}
