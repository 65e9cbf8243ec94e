#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kslab/blending.hpp"
#include "kslab/grassmann.hpp"

namespace kslab {

enum class Verdict { rigid_consistent, obstructed };

/*
 * Certificate-level record of one rigidity run: the operator
 * d_{-1}^pri + *·id/z + g is dressed toward ∂_z + (its non-negative part);
 * either the dressing exists (then * must have been 0) or the graded
 * recursion obstructs at principal degree -h with an exact residue whose
 * z^{-1}-coefficient has trace n·*.
 */
struct RigidityReport {
    std::string algebra;
    Rational star;
    std::string g_descriptor;
    int order = 0;
    Verdict verdict = Verdict::obstructed;
    Rational obstruction_trace;
    std::vector<std::string> proof_trace;
    std::optional<ObstructionCertificate> certificate;
    std::optional<MatrixSeries> dressing_exponent;  // A with γ = exp(A), on success
};

RigidityReport rigidity_certificate(const AlgebraData& alg, const Rational& star,
                                    const MatrixSeries& g, int order,
                                    std::optional<int> work_floor = std::nullopt,
                                    const std::string& g_descriptor = "");

struct TraceLawSummary {
    int trials = 0;
    bool all_pass = true;
    std::string first_failure;
};

/// Property behind the theorem's final display: for random dressing
/// exponents A and loop elements g, the z^{-1} coefficient of
/// γ⁻¹(ρ∨/(hz) + g)γ has trace exactly 0, and the gauge term has no
/// z^{-1} coefficient at all.
TraceLawSummary trace_law_property(const AlgebraData& alg, int trials, int order,
                                   std::uint64_t seed);

struct ScalarRigidityReport {
    int h = 0;
    Rational c;
    Rational m_trace;   // h(h-1)/2 + h^2 c
    Rational star;      // c - (1-h)/2h
    Verdict verdict = Verdict::obstructed;
    Rational obstruction_trace;
    bool q_coprime_to_h = true;  // informational: f_{>-h} = z here, q = 1
};

/// Scalar Version-I pipeline: blend (1/(hζ^{h-1}))∂_ζ + c·ζ^{-h} + ζ to its
/// matrix form and run the matrix certificate; rigid-consistent iff
/// c = (1-h)/2h.
ScalarRigidityReport scalar_rigidity(int h, const Rational& c, int order,
                                     std::optional<int> work_floor = std::nullopt);

/*
 * Loop perturbations used in the randomized rigidity trials: a nonzero
 * multiple of Λ plus span elements of principal degree <= -h. This is the
 * family for which stabilized big-cell points exist at * = 0 (deeper
 * centralizer components are absorbed by the kernel coefficients of the
 * dressing; shallow ones would make the theorem's premise vacuous).
 */
MatrixSeries sample_loop_perturbation(const AlgebraData& alg, std::mt19937_64& rng);

/// Random dressing exponent: span elements at exponents in [-4, -1].
MatrixSeries sample_dressing_exponent(const AlgebraData& alg, std::mt19937_64& rng);

/// Random loop element without any safety restriction (for the trace law,
/// which needs none).
MatrixSeries sample_loop_element(const AlgebraData& alg, std::mt19937_64& rng);

Rational random_rational(std::mt19937_64& rng, int num_range = 5, int den_range = 4);

}  // namespace kslab
