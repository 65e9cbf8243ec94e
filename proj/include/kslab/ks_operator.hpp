#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kslab/algebra.hpp"
#include "kslab/series.hpp"

namespace kslab {

/*
 * First-order operator a(z)·∂_z + P(z), scalar- or matrix-valued. The only
 * things ever done to one are conjugation by an invertible series, gauge
 * fixing, KP flows, and application to series.
 */
struct KSOperator {
    ScalarSeries deriv_coeff;  // a(z), nonzero
    std::variant<ScalarSeries, MatrixSeries> potential;

    bool is_scalar() const { return std::holds_alternative<ScalarSeries>(potential); }
    int dim() const { return is_scalar() ? 1 : std::get<MatrixSeries>(potential).dim(); }
    const ScalarSeries& scalar_potential() const { return std::get<ScalarSeries>(potential); }
    const MatrixSeries& matrix_potential() const { return std::get<MatrixSeries>(potential); }

    static KSOperator scalar_op(ScalarSeries a, ScalarSeries p);
    static KSOperator matrix_op(ScalarSeries a, MatrixSeries p);
    /// ∂_z + P
    static KSOperator matrix_op(MatrixSeries p);

    std::string str(const std::string& var = "z") const;
};

ScalarSeries apply(const KSOperator& op, const ScalarSeries& f);
VectorSeries apply(const KSOperator& op, const VectorSeries& f);

/// γ⁻¹ P γ + a(z) γ⁻¹ ∂_z(γ); the derivative coefficient is unchanged.
KSOperator conjugate(const KSOperator& op, const ScalarSeries& gamma,
                     std::optional<int> work_floor = std::nullopt);
KSOperator conjugate(const KSOperator& op, const MatrixSeries& gamma,
                     std::optional<int> work_floor = std::nullopt);
/// Variant for callers that already hold γ⁻¹.
KSOperator conjugate_with_inverse(const KSOperator& op, const MatrixSeries& gamma,
                                  const MatrixSeries& gamma_inv);

struct GaugeFixStep {
    int exponent;    // offending exponent that was eliminated
    int gauge_exp;   // exponent of the gauge coefficient d
    Rational d;      // the unique coefficient killing it
};

struct GaugeFixResult {
    ScalarSeries gamma;  // 1 + strictly negative tail
    KSOperator fixed;    // conjugate(op, gamma); no trusted exponents < -h
    std::vector<GaugeFixStep> steps;
};

/// Eliminates the f_{<-h} part of a scalar h-reduced operator by the degree
/// recursion; each step's coefficient is uniquely determined.
GaugeFixResult gauge_fix(const KSOperator& op, int h, int work_floor);

/// KP times: finitely many rationals t_i, i >= 1.
struct FlowTimes {
    std::map<int, Rational> t;

    static FlowTimes empty() { return {}; }
    FlowTimes& set(int i, const Rational& v);
    FlowTimes negated() const;
    FlowTimes operator+(const FlowTimes& o) const;
};

/// f(z) -> f(z) - Σ (i/h) t_i z^{i-h}
KSOperator kp_flow_apply(const KSOperator& op, const FlowTimes& t, int h);

enum class Gradation { hom, pri };

/*
 * Concrete derivation operators. For the homogeneous gradation the raw
 * operator z^{i+1}∂_z is returned together with the normalization factor
 * -1/h_s that would produce the Witt-normalized derivation; the factor is
 * kept as metadata, not baked in. For the principal gradation only i = -1
 * is realized: ∂_z + ρ∨/(hz) (untwisted, a0 = 1), already normalized.
 */
struct DerivationOp {
    KSOperator op;
    Rational normalization;  // script-d = normalization · op
    bool already_normalized;
    long h_s;  // k Σ a_i s_i for the gradation used
};

DerivationOp derivation(int i, Gradation s, const AlgebraData& alg);

struct GaugeTermReport {
    bool support_ok = false;   // all trusted exponents <= -1 - k a0
    bool span_ok = false;      // every coefficient inside the catalog span
    std::optional<int> max_exponent;  // highest trusted exponent of the gauge term
    std::optional<int> offending_exponent;
    std::string offending_coefficient;
    MatrixSeries gauge_term;
};

/// For γ = exp(A) with A in the loop algebra: checks that the gauge term
/// (k a0 z^{k a0 - 1})^{-1} γ⁻¹ ∂_z γ has exponents <= -1 - k a0 and
/// coefficients in the catalog span.
GaugeTermReport gauge_term_degree_check(const MatrixSeries& A, const AlgebraData& alg,
                                        int work_floor);

struct WittCheckReport {
    bool ok = true;
    int pairs_checked = 0;
    std::string first_failure;
};

/// Verifies [z^{i+1}∂_z, z^{j+1}∂_z] = (j-i) z^{i+j+1}∂_z as operators on
/// random truncated series, for |i|, |j| <= max_index.
WittCheckReport witt_check(int max_index, int trials, std::uint64_t seed, int work_floor = -24);

}  // namespace kslab
