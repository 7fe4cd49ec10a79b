#include "hrne/gradcheck.hpp"

#include <cmath>

#include "hrne/error.hpp"

namespace hrne {

std::vector<Tensor> finite_diff_grad(const std::function<double()>& f,
                                     std::span<ParamTensor* const> params, double eps) {
    if (eps <= 0.0) throw ConfigError("finite_diff_grad: eps must be positive");
    std::vector<Tensor> out;
    out.reserve(params.size());
    for (ParamTensor* p : params) {
        Tensor est = p->value;
        est.fill(0.0);
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            const double saved = p->value[i];
            p->value[i] = saved + eps;
            const double fp = f();
            p->value[i] = saved - eps;
            const double fm = f();
            p->value[i] = saved;
            if (!std::isfinite(fp) || !std::isfinite(fm)) {
                throw NumericError("finite_diff_grad: non-finite objective at " + p->name);
            }
            est[i] = (fp - fm) / (2.0 * eps);
        }
        out.push_back(std::move(est));
    }
    return out;
}

double max_rel_error(const Tensor& a, const Tensor& b) {
    require_shape(a.same_shape(b), "max_rel_error: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-8});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

GradCheckReport compare_gradients(const std::function<double()>& f,
                                  std::span<ParamTensor* const> params, double eps) {
    const std::vector<Tensor> est = finite_diff_grad(f, params, eps);
    GradCheckReport report;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double err = max_rel_error(params[k]->grad, est[k]);
        if (err > report.max_rel_err) {
            report.max_rel_err = err;
            report.worst_tensor = params[k]->name;
        }
    }
    return report;
}

}  // namespace hrne
