#include "kslab/blending.hpp"

namespace kslab {

namespace {
int floordiv(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
int ceildiv(int a, int b) { return -floordiv(-a, b); }

// component index i in 1..h for a ζ-exponent m: m ≡ h - i (mod h)
int comp_of_exp(int m, int h) {
    const int rem = ((m % h) + h) % h;
    return h - rem;
}
}  // namespace

VectorSeries blend(const ScalarSeries& f_zeta, const BlendContext& ctx) {
    const int h = ctx.h;
    VectorSeries out = VectorSeries::zero(h);
    if (f_zeta.floor()) {
        const int fz = *f_zeta.floor();
        for (int i = 1; i <= h; ++i)
            out.comps[i - 1] = ScalarSeries(ceildiv(fz - (h - i), h));
    }
    for (const auto& [m, c] : f_zeta.terms()) {
        const int i = comp_of_exp(m, h);
        const int q = (m - (h - i)) / h;
        out.comps[i - 1].set_coeff(q, c);
    }
    return out;
}

ScalarSeries unblend(const VectorSeries& v, const BlendContext& ctx) {
    const int h = ctx.h;
    if (v.dim() != h) throw contract_error("unblend: vector dimension must equal h");
    ScalarSeries out;
    std::optional<int> fz;
    for (int i = 1; i <= h; ++i) {
        const auto& comp = v.comps[i - 1];
        if (comp.floor()) {
            const int cand = h * (*comp.floor()) + (h - i);
            fz = fz ? std::max(*fz, cand) : cand;
        }
    }
    if (fz) out = ScalarSeries(*fz);
    for (int i = 1; i <= h; ++i)
        for (const auto& [q, c] : v.comps[i - 1].terms()) out.set_coeff(h * q + (h - i), c);
    return out;
}

RatMatrix m_matrix(const Rational& c, const BlendContext& ctx) {
    const int h = ctx.h;
    RatMatrix m(h, h);
    for (int i = 1; i <= h; ++i) m.at(i - 1, i - 1) = Rational(h - i) + Rational(h) * c;
    return m;
}

KSOperator blend_operator(const KSOperator& scalar_op, const BlendContext& ctx,
                          std::optional<int> work_floor) {
    const int h = ctx.h;
    if (!scalar_op.is_scalar()) throw contract_error("blend_operator: scalar operator required");
    const ScalarSeries expected = ScalarSeries::monomial(Rational(1, h), -(h - 1));
    if (!(scalar_op.deriv_coeff == expected))
        throw contract_error("blend_operator: deriv_coeff must be exactly 1/(h zeta^{h-1})");

    // Column i of Q is blend(op(ζ^{h-i})): the ∂_z part of O annihilates
    // constant columns, so O e_i = Q e_i.
    MatrixSeries Q(h);
    std::optional<int> qfloor;
    std::vector<VectorSeries> cols;
    for (int i = 1; i <= h; ++i) {
        ScalarSeries fi = ScalarSeries::monomial(Rational(1), h - i);
        VectorSeries col = blend(apply(scalar_op, fi), ctx);
        for (const auto& comp : col.comps)
            if (comp.floor()) qfloor = qfloor ? std::max(*qfloor, *comp.floor()) : *comp.floor();
        cols.push_back(std::move(col));
    }
    if (qfloor) Q = MatrixSeries(h, *qfloor);
    for (int i = 1; i <= h; ++i)
        for (int row = 0; row < h; ++row)
            for (const auto& [e, v] : cols[i - 1].comps[row].terms()) {
                if (qfloor && e < *qfloor) continue;
                RatMatrix m = Q.coeff(e);
                m.at(row, i - 1) = v;
                Q.set_coeff(e, m);
            }

    KSOperator out = KSOperator::matrix_op(Q);

    // intertwining check: blend(op ζ^j) = O blend(ζ^j) for |j| <= 3h
    for (int j = -3 * h; j <= 3 * h; ++j) {
        ScalarSeries zj = ScalarSeries::monomial(Rational(1), j);
        if (work_floor) zj = zj.truncated_to(*work_floor);
        VectorSeries lhs = blend(apply(scalar_op, zj), ctx);
        VectorSeries rhs = apply(out, blend(zj, ctx));
        if (!(lhs - rhs).is_zero_trusted())
            throw contract_error(
                "blend_operator: intertwining identity failed on zeta^" + std::to_string(j) +
                " (internal consistency error)");
    }
    return out;
}

}  // namespace kslab
