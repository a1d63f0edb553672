#pragma once

#include <vector>

namespace cvs {

/// First components of the four Elsasser traces on the interface, and the normal pressure gradients
/// N.grad p (lower) and N.grad p_hat (upper), all sampled on the surface grid.
struct TraceBundle {
    std::vector<double> lam_plus1;
    std::vector<double> lam_minus1;
    std::vector<double> hat_plus1;
    std::vector<double> hat_minus1;
    std::vector<double> grad_p_n;
    std::vector<double> grad_phat_n;

    static TraceBundle zeros(int n) {
        std::vector<double> z(n, 0.0);
        return {z, z, z, z, z, z};
    }
};

}  // namespace cvs
