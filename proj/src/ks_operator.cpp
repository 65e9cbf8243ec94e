#include "kslab/ks_operator.hpp"

#include <random>
#include <sstream>

namespace kslab {

KSOperator KSOperator::scalar_op(ScalarSeries a, ScalarSeries p) {
    if (a.is_zero_trusted()) throw contract_error("KSOperator: zero derivative coefficient");
    return KSOperator{std::move(a), std::move(p)};
}

KSOperator KSOperator::matrix_op(ScalarSeries a, MatrixSeries p) {
    if (a.is_zero_trusted()) throw contract_error("KSOperator: zero derivative coefficient");
    return KSOperator{std::move(a), std::move(p)};
}

KSOperator KSOperator::matrix_op(MatrixSeries p) {
    return KSOperator{ScalarSeries::one(), std::move(p)};
}

std::string KSOperator::str(const std::string& var) const {
    std::ostringstream os;
    os << "(" << deriv_coeff.str(var) << ") D";
    if (is_scalar()) {
        if (!scalar_potential().is_zero_trusted()) os << " + " << scalar_potential().str(var);
    } else {
        if (!matrix_potential().is_zero_trusted()) os << " + " << matrix_potential().str();
    }
    return os.str();
}

ScalarSeries apply(const KSOperator& op, const ScalarSeries& f) {
    if (!op.is_scalar()) throw contract_error("apply: matrix operator applied to scalar series");
    return mul(op.deriv_coeff, f.d_dz()) + mul(op.scalar_potential(), f);
}

VectorSeries apply(const KSOperator& op, const VectorSeries& f) {
    if (op.is_scalar()) throw contract_error("apply: scalar operator applied to vector");
    const MatrixSeries& P = op.matrix_potential();
    if (P.dim() != f.dim()) throw contract_error("apply: dimension mismatch");
    VectorSeries r = matvec(P, f);
    for (int i = 0; i < f.dim(); ++i)
        r.comps[i] = r.comps[i] + mul(op.deriv_coeff, f.comps[i].d_dz());
    return r;
}

KSOperator conjugate(const KSOperator& op, const ScalarSeries& gamma,
                     std::optional<int> work_floor) {
    if (!op.is_scalar()) throw contract_error("conjugate: scalar gauge on matrix operator");
    ScalarSeries ginv = invert(gamma, work_floor);
    // scalar potentials commute; only the gauge term moves
    ScalarSeries pot = op.scalar_potential() + mul(op.deriv_coeff, mul(ginv, gamma.d_dz()));
    return KSOperator{op.deriv_coeff, std::move(pot)};
}

KSOperator conjugate(const KSOperator& op, const MatrixSeries& gamma,
                     std::optional<int> work_floor) {
    if (op.is_scalar()) throw contract_error("conjugate: matrix gauge on scalar operator");
    MatrixSeries ginv = invert(gamma, work_floor);
    return conjugate_with_inverse(op, gamma, ginv);
}

KSOperator conjugate_with_inverse(const KSOperator& op, const MatrixSeries& gamma,
                                  const MatrixSeries& gamma_inv) {
    if (op.is_scalar()) throw contract_error("conjugate: matrix gauge on scalar operator");
    MatrixSeries pot = mul(mul(gamma_inv, op.matrix_potential()), gamma);
    MatrixSeries gauge = mul_scalar(mul(gamma_inv, gamma.d_dz()), op.deriv_coeff);
    return KSOperator{op.deriv_coeff, pot + gauge};
}

GaugeFixResult gauge_fix(const KSOperator& op, int h, int work_floor) {
    if (!op.is_scalar()) throw contract_error("gauge_fix: scalar mode required");
    if (h < 2) throw contract_error("gauge_fix: h >= 2 required");
    const ScalarSeries expected = ScalarSeries::monomial(Rational(1, h), -(h - 1));
    if (!(op.deriv_coeff == expected))
        throw contract_error("gauge_fix: deriv_coeff must be exactly 1/(h z^{h-1})");

    GaugeFixResult out;
    out.gamma = ScalarSeries::one();
    KSOperator base{op.deriv_coeff, op.scalar_potential().truncated_to(work_floor)};
    out.fixed = base;

    while (true) {
        SplitParts parts = split_at(out.fixed.scalar_potential(), -h);
        if (parts.below.is_zero_trusted()) break;
        const int j = parts.below.maxdeg();
        const Rational c = parts.below.coeff(j);
        const int i = j + h;  // <= -1, and i != 0 since j != -h
        // gauge term of (1 + d z^i) starts at (d·i/h) z^{i-h}
        const Rational d = -c * Rational(h) / Rational(i);
        out.gamma = mul(out.gamma, ScalarSeries::one() + ScalarSeries::monomial(d, i));
        out.steps.push_back({j, i, d});
        // re-conjugate the original operator by the accumulated exact gamma
        out.fixed = conjugate(base, out.gamma, work_floor);
    }
    return out;
}

FlowTimes& FlowTimes::set(int i, const Rational& v) {
    if (i < 1) throw contract_error("FlowTimes: index must be >= 1");
    if (v.is_zero())
        t.erase(i);
    else
        t[i] = v;
    return *this;
}

FlowTimes FlowTimes::negated() const {
    FlowTimes r;
    for (const auto& [i, v] : t) r.t[i] = -v;
    return r;
}

FlowTimes FlowTimes::operator+(const FlowTimes& o) const {
    FlowTimes r = *this;
    for (const auto& [i, v] : o.t) {
        auto it = r.t.find(i);
        if (it == r.t.end())
            r.t[i] = v;
        else {
            it->second += v;
            if (it->second.is_zero()) r.t.erase(it);
        }
    }
    return r;
}

KSOperator kp_flow_apply(const KSOperator& op, const FlowTimes& t, int h) {
    if (!op.is_scalar()) throw contract_error("kp_flow_apply: scalar mode required");
    ScalarSeries delta;
    for (const auto& [i, ti] : t.t)
        delta = delta + ScalarSeries::monomial(Rational(i, h) * ti, i - h);
    return KSOperator{op.deriv_coeff, op.scalar_potential() - delta};
}

DerivationOp derivation(int i, Gradation s, const AlgebraData& alg) {
    if (s == Gradation::hom) {
        // h_s = k·a0 for s_hom = (1,0,...,0)
        const long hs = static_cast<long>(alg.twist_k) * alg.kac_a0;
        KSOperator op =
            KSOperator::scalar_op(ScalarSeries::monomial(Rational(1), i + 1), ScalarSeries());
        return DerivationOp{std::move(op), Rational(-1, hs), false, hs};
    }
    if (i != -1)
        throw contract_error("derivation: principal gradation realized for i = -1 only");
    const long hs = alg.coxeter_h;  // k Σ a_i = h in the untwisted case
    MatrixSeries pot =
        MatrixSeries::monomial(alg.rho_vee.scaled(Rational(1, alg.coxeter_h)), -1);
    return DerivationOp{KSOperator::matrix_op(std::move(pot)), Rational(1), true, hs};
}

GaugeTermReport gauge_term_degree_check(const MatrixSeries& A, const AlgebraData& alg,
                                        int work_floor) {
    if (!A.terms().empty() && A.maxdeg() >= 0)
        throw contract_error("gauge_term_degree_check: A must be supported in exponents <= -1");
    if (!series_in_span(alg, A))
        throw contract_error("gauge_term_degree_check: A outside the catalog span");

    GaugeTermReport rep;
    MatrixSeries gamma = exp_neg(A, work_floor);
    MatrixSeries ginv = invert(gamma, work_floor);
    // untwisted: (k a0 z^{k a0 - 1})^{-1} = 1
    rep.gauge_term = mul(ginv, gamma.d_dz());

    const int bound = -1 - alg.twist_k * alg.kac_a0;
    rep.support_ok = true;
    rep.span_ok = true;
    if (!rep.gauge_term.terms().empty()) rep.max_exponent = rep.gauge_term.maxdeg();
    for (const auto& [k, m] : rep.gauge_term.terms()) {
        if (k > bound && rep.support_ok) {
            rep.support_ok = false;
            rep.offending_exponent = k;
            rep.offending_coefficient = m.str();
        }
        if (!in_span(alg, m) && rep.span_ok) {
            rep.span_ok = false;
            if (!rep.offending_exponent) {
                rep.offending_exponent = k;
                rep.offending_coefficient = m.str();
            }
        }
    }
    return rep;
}

WittCheckReport witt_check(int max_index, int trials, std::uint64_t seed, int work_floor) {
    WittCheckReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);

    auto random_series = [&]() {
        ScalarSeries f(work_floor / 2);
        for (int e = work_floor / 2; e <= 3; ++e)
            f.set_coeff(e, Rational(coef(rng), den(rng)));
        return f;
    };

    for (int i = -max_index; i <= max_index; ++i) {
        for (int j = -max_index; j <= max_index; ++j) {
            ++rep.pairs_checked;
            KSOperator di =
                KSOperator::scalar_op(ScalarSeries::monomial(Rational(1), i + 1), ScalarSeries());
            KSOperator dj =
                KSOperator::scalar_op(ScalarSeries::monomial(Rational(1), j + 1), ScalarSeries());
            KSOperator dij = KSOperator::scalar_op(
                ScalarSeries::monomial(Rational(j - i), i + j + 1), ScalarSeries());
            for (int t = 0; t < trials; ++t) {
                ScalarSeries f = random_series();
                ScalarSeries lhs = apply(di, apply(dj, f)) - apply(dj, apply(di, f));
                ScalarSeries rhs = (j == i) ? ScalarSeries() : apply(dij, f);
                if (!(lhs - rhs).is_zero_trusted()) {
                    rep.ok = false;
                    if (rep.first_failure.empty()) {
                        std::ostringstream os;
                        os << "witt failure at (i,j)=(" << i << "," << j << ")";
                        rep.first_failure = os.str();
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace kslab
