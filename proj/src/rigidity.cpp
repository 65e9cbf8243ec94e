#include "kslab/rigidity.hpp"

#include <sstream>

namespace kslab {

Rational random_rational(std::mt19937_64& rng, int num_range, int den_range) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, den_range);
    return Rational(num(rng), den(rng));
}

MatrixSeries sample_loop_perturbation(const AlgebraData& alg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> alpha_pick(-2, 2);
    int alpha = alpha_pick(rng);
    if (alpha == -1) alpha = 1;  // keep the leading cyclic term nonzero
    MatrixSeries g = alg.lambda_cyclic.scaled(Rational(alpha));

    const int h = alg.coxeter_h;
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> pdeg_pick(-2 * h, -h);
    const int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        GradedPiece piece = graded_piece(alg, pdeg_pick(rng));
        if (piece.basis.empty()) continue;
        std::uniform_int_distribution<std::size_t> el(0, piece.basis.size() - 1);
        g = g + piece.basis[el(rng)].scaled(random_rational(rng));
    }
    return g;
}

MatrixSeries sample_dressing_exponent(const AlgebraData& alg, std::mt19937_64& rng) {
    MatrixSeries A(alg.rep_dim);
    std::uniform_int_distribution<int> exp_pick(-4, -1);
    std::uniform_int_distribution<std::size_t> el(0, alg.span_basis.size() - 1);
    std::uniform_int_distribution<int> nterms(2, 5);
    const int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        const auto& b = alg.span_basis[el(rng)];
        A = A + MatrixSeries::monomial(b.mat, 0).shifted(exp_pick(rng)).scaled(random_rational(rng));
    }
    return A;
}

MatrixSeries sample_loop_element(const AlgebraData& alg, std::mt19937_64& rng) {
    MatrixSeries g(alg.rep_dim);
    std::uniform_int_distribution<int> exp_pick(-3, 2);
    std::uniform_int_distribution<std::size_t> el(0, alg.span_basis.size() - 1);
    std::uniform_int_distribution<int> nterms(1, 4);
    const int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        const auto& b = alg.span_basis[el(rng)];
        g = g + MatrixSeries::monomial(b.mat, 0).shifted(exp_pick(rng)).scaled(random_rational(rng));
    }
    return g;
}

RigidityReport rigidity_certificate(const AlgebraData& alg, const Rational& star,
                                    const MatrixSeries& g, int order,
                                    std::optional<int> work_floor,
                                    const std::string& g_descriptor) {
    if (order < 2) throw contract_error("rigidity_certificate: order >= 2 required");
    if (!series_in_span(alg, g))
        throw contract_error("rigidity_certificate: g outside the catalog loop span");

    RigidityReport rep;
    rep.algebra = alg.label();
    rep.star = star;
    rep.g_descriptor = g_descriptor.empty() ? g.str() : g_descriptor;
    rep.order = order;

    const int h = alg.coxeter_h;
    const int n = alg.rep_dim;
    const int W = work_floor ? *work_floor : default_work_floor(order);

    MatrixSeries potential = MatrixSeries::monomial(alg.rho_vee.scaled(Rational(1, h)), -1) +
                             MatrixSeries::diag_embed(ScalarSeries::monomial(star, -1), n) + g;
    KSOperator source = KSOperator::matrix_op(potential);

    // dress toward ∂_z + (non-negative principal degree part)
    MatrixSeries target_pot(n);
    for (const auto& [p, comp] : principal_degree_split_gl(potential, alg))
        if (p >= 0) target_pot = target_pot + comp;
    KSOperator target = KSOperator::matrix_op(target_pot);

    DressOutcome d = conjugation_dress(source, target, alg, order, W);

    {
        // proof step 1: gauge-term degree bound for the dressing built so far
        std::ostringstream os;
        if (d.success) {
            GaugeTermReport gt = gauge_term_degree_check(d.dressing.A, alg, W);
            os << "gauge term support <= " << (-1 - alg.twist_k * alg.kac_a0)
               << " and inside the span: " << (gt.support_ok && gt.span_ok ? "ok" : "VIOLATED");
        } else {
            os << "gauge term bound: certificate path (partial dressing)";
        }
        rep.proof_trace.push_back(os.str());
    }
    {
        // proof step 2: homogeneous gradation = z-degree gradation on the
        // loop part (untwisted agreement); checked as span membership of
        // every z-coefficient of the inputs
        const bool ok = series_in_span(alg, g) && in_span(alg, alg.rho_vee);
        rep.proof_trace.push_back(std::string("homogeneous/z-degree agreement on the loop part: ") +
                                  (ok ? "ok" : "VIOLATED"));
    }

    if (d.success) {
        rep.verdict = Verdict::rigid_consistent;
        rep.obstruction_trace = Rational(0);
        rep.dressing_exponent = d.dressing.A;
        rep.proof_trace.push_back("dressing found; re-conjugation reproduces the target to order " +
                                  std::to_string(order));
    } else {
        rep.verdict = Verdict::obstructed;
        rep.certificate = d.certificate;
        rep.obstruction_trace = d.certificate.trace_value;
        std::ostringstream os;
        os << "trace extraction at z^-1 (pdeg " << d.certificate.pdeg
           << "): tr = " << d.certificate.trace_value.str() << " = " << n << " * "
           << star.str();
        rep.proof_trace.push_back(os.str());
    }
    return rep;
}

TraceLawSummary trace_law_property(const AlgebraData& alg, int trials, int order,
                                   std::uint64_t seed) {
    TraceLawSummary sum;
    sum.trials = trials;
    const int W = default_work_floor(order);
    const int h = alg.coxeter_h;

    #pragma omp parallel for schedule(dynamic) if (parallel_enabled())
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL);
        MatrixSeries A = sample_dressing_exponent(alg, rng);
        MatrixSeries g = sample_loop_element(alg, rng);
        MatrixSeries gamma = exp_neg(A, W);
        MatrixSeries ginv = invert(gamma, W);

        MatrixSeries X = MatrixSeries::monomial(alg.rho_vee.scaled(Rational(1, h)), -1) + g;
        MatrixSeries conj = mul(mul(ginv, X), gamma);
        MatrixSeries gauge = mul(ginv, gamma.d_dz());

        const Rational tr = conj.coeff(-1).trace();
        const bool gauge_clean = gauge.coeff(-1).is_zero();
        if (!tr.is_zero() || !gauge_clean) {
            #pragma omp critical
            {
                sum.all_pass = false;
                if (sum.first_failure.empty()) {
                    std::ostringstream os;
                    os << "trial " << t << ": tr(conj[-1]) = " << tr.str()
                       << ", gauge[-1] zero = " << gauge_clean;
                    sum.first_failure = os.str();
                }
            }
        }
    }
    return sum;
}

ScalarRigidityReport scalar_rigidity(int h, const Rational& c, int order,
                                     std::optional<int> work_floor) {
    if (h < 2) throw contract_error("scalar_rigidity: h >= 2 required");
    ScalarRigidityReport rep;
    rep.h = h;
    rep.c = c;
    rep.m_trace = Rational(h * (h - 1), 2) + Rational(h) * Rational(h) * c;
    rep.star = c - Rational(1 - h, 2 * h);
    rep.q_coprime_to_h = true;  // f_{>-h} = ζ here, i.e. q = 1

    BlendContext ctx(h);
    ScalarSeries pot = ScalarSeries::monomial(c, -h) + ScalarSeries::monomial(Rational(1), 1);
    KSOperator scalar_op =
        KSOperator::scalar_op(ScalarSeries::monomial(Rational(1, h), -(h - 1)), pot);
    KSOperator matrix_form = blend_operator(scalar_op, ctx);

    AlgebraData alg = build_algebra(LieType::A, h - 1);

    // cross-check the blend against the M-matrix decomposition:
    // Q = M/(hz) + Λ = ρ∨/(hz) + star·id/z + Λ
    MatrixSeries expected =
        MatrixSeries::monomial(m_matrix(c, ctx).scaled(Rational(1, h)), -1) + alg.lambda_cyclic;
    if (!((matrix_form.matrix_potential() - expected).is_zero_trusted()))
        throw contract_error("scalar_rigidity: blended operator disagrees with the M-matrix form");

    RigidityReport mrep =
        rigidity_certificate(alg, rep.star, alg.lambda_cyclic, order, work_floor, "Lambda");
    rep.verdict = mrep.verdict;
    rep.obstruction_trace = mrep.obstruction_trace;
    return rep;
}

}  // namespace kslab
