#include "tryon/warp/loss.hpp"

#include "tryon/core/errors.hpp"

namespace tryon::warp {

using core::Var;

WarpLossTerms warp_training_loss(const Var& warped, const Var& target_region,
                                 const std::vector<AppearanceFlow>& flows, double lambda1,
                                 double lambda2, double lambda3,
                                 const core::FeatureExtractor* perceptual) {
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0)
        throw ArgumentError("warp_training_loss: loss weights must be non-negative");
    if (!warped.value().same_shape(target_region.value()))
        throw DimensionError("warp_training_loss: warped/target shapes differ");

    WarpLossTerms terms;
    Var total = core::l1_loss(warped, target_region);
    terms.l1 = total.value()[0];

    if (lambda1 > 0 && perceptual) {
        auto f_warp = perceptual->features_var(warped);
        auto f_target = perceptual->features_var(target_region);
        Var perc;
        for (size_t l = 0; l < f_warp.size(); ++l) {
            Var term = core::mse_loss(f_warp[l], f_target[l]);
            perc = perc.defined() ? core::add(perc, term) : term;
        }
        perc = core::mul_scalar(perc, 1.0 / static_cast<double>(f_warp.size()));
        terms.perceptual = perc.value()[0];
        total = core::add(total, core::mul_scalar(perc, lambda1));
    }

    if (!flows.empty()) {
        Var s1, s2;
        for (const auto& f : flows) {
            Var t1 = core::flow_smoothness(f.data, 1);
            Var t2 = core::flow_smoothness(f.data, 2);
            s1 = s1.defined() ? core::add(s1, t1) : t1;
            s2 = s2.defined() ? core::add(s2, t2) : t2;
        }
        double inv = 1.0 / static_cast<double>(flows.size());
        s1 = core::mul_scalar(s1, inv);
        s2 = core::mul_scalar(s2, inv);
        terms.smooth_first = s1.value()[0];
        terms.smooth_second = s2.value()[0];
        if (lambda2 > 0) total = core::add(total, core::mul_scalar(s1, lambda2));
        if (lambda3 > 0) total = core::add(total, core::mul_scalar(s2, lambda3));
    }

    terms.total = total;
    return terms;
}

}  // namespace tryon::warp
