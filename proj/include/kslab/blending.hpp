#pragma once

#include <optional>

#include "kslab/ks_operator.hpp"
#include "kslab/series.hpp"

namespace kslab {

/// ξ : C((1/ζ)) -> C((1/z))^h with ζ an h'th root of z.
struct BlendContext {
    int h;

    explicit BlendContext(int h_) : h(h_) {
        if (h < 2) throw contract_error("BlendContext: h >= 2 required");
    }
};

/// ζ^{h-i} f_i(ζ^h) ↦ e_i f_i(z), components indexed i = 1..h.
VectorSeries blend(const ScalarSeries& f_zeta, const BlendContext& ctx);
ScalarSeries unblend(const VectorSeries& v, const BlendContext& ctx);

/// Image of c·ζ^{-h} under the operator correspondence, times hz:
/// diag(h-1+hc, ..., h-i+hc, ..., hc).
RatMatrix m_matrix(const Rational& c, const BlendContext& ctx);

/*
 * Matrix form of a scalar h-reduced Kac-Schwarz operator: the unique
 * O = ∂_z + Q with blend(op·f) = O·blend(f). Q is computed structurally by
 * pushing ∂_ζ and the potential through ξ on the monomial basis; the
 * intertwining identity is then verified on monomials ζ^j, |j| <= 3h, and
 * a failure raises an internal consistency error.
 */
KSOperator blend_operator(const KSOperator& scalar_op, const BlendContext& ctx,
                          std::optional<int> work_floor = std::nullopt);

}  // namespace kslab
