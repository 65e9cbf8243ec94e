#include "kslab/grassmann.hpp"

#include <algorithm>
#include <sstream>

namespace kslab {

namespace {

class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& w) : std::logic_error("internal error: " + w) {}
};

std::string pdeg_str(int p) { return "pdeg " + std::to_string(p); }

}  // namespace

int default_work_floor(int order) { return -(order + 8); }

// ---------------------------------------------------------------------------
// BasisRep

void BasisRep::add(VectorSeries v) {
    int lead = 0, comp = -1;
    bool found = false;
    for (int i = 0; i < v.dim(); ++i) {
        if (v.comps[i].is_zero_trusted()) continue;
        const int m = v.comps[i].maxdeg();
        if (!found || m > lead) {
            lead = m;
            comp = i;
            found = true;
        } else if (m == lead) {
            throw contract_error("BasisRep: leading coefficient is not a unit direction");
        }
    }
    if (!found) throw contract_error("BasisRep: zero vector");
    if (!v.comps[comp].coeff(lead).is_one())
        throw contract_error("BasisRep: leading coefficient must be 1");
    auto key = std::make_pair(lead, comp);
    if (pivots.count(key)) throw contract_error("BasisRep: duplicate leading monomial");
    pivots[key] = vectors.size();
    vectors.push_back(std::move(v));
}

VectorSeries BasisRep::reduce(VectorSeries w) const {
    while (true) {
        int lead = 0;
        bool found = false;
        for (int i = 0; i < w.dim(); ++i) {
            if (w.comps[i].is_zero_trusted()) continue;
            const int m = w.comps[i].maxdeg();
            if (!found || m > lead) {
                lead = m;
                found = true;
            }
        }
        if (!found || lead < 0) return w;
        for (int i = 0; i < w.dim(); ++i) {
            if (w.comps[i].is_zero_trusted()) continue;
            if (w.comps[i].maxdeg() != lead) continue;
            const Rational c = w.comps[i].coeff(lead);
            auto it = pivots.find(std::make_pair(lead, i));
            if (it == pivots.end())
                throw contract_error("BasisRep::reduce: no pivot for z^" + std::to_string(lead) +
                                     " e_" + std::to_string(i + 1) + " (basis too shallow)");
            w = w - vectors[it->second].scaled(c);
        }
    }
}

// ---------------------------------------------------------------------------
// stabilization_residual

StabilizationResidual stabilization_residual(const GrassmannPoint& V, const KSOperator& op,
                                             int order) {
    StabilizationResidual out;
    out.order = order;
    if (V.is_dressing()) {
        if (op.is_scalar() || op.dim() != V.dim)
            throw contract_error("stabilization_residual: operator mode does not match point");
        const DressingRep& d = V.dressing();
        KSOperator conj = conjugate_with_inverse(op, d.gamma, d.gamma_inv);
        MatrixSeries neg = split_at(conj.matrix_potential(), 0).below;
        out.floor = neg.floor();
        if (out.floor && *out.floor > -order)
            throw truncation_error("stabilization_residual: requested order " +
                                   std::to_string(order) + " lies below the trusted floor " +
                                   std::to_string(*out.floor));
        out.dressing_residual = neg;
        out.zero_up_to_order = true;
        for (const auto& [e, m] : neg.terms()) {
            if (e >= -order && !m.is_zero()) {
                out.zero_up_to_order = false;
                out.detail = "nonzero residual coefficient at z^" + std::to_string(e);
                break;
            }
        }
        return out;
    }

    // basis representation: reduce op·v against the basis
    const BasisRep& b = V.basis();
    int raise = 1;
    if (op.is_scalar()) {
        if (!op.scalar_potential().is_zero_trusted())
            raise = std::max(raise, op.scalar_potential().maxdeg());
        raise = std::max(raise, op.deriv_coeff.maxdeg() - 1);
    } else {
        if (!op.matrix_potential().is_zero_trusted())
            raise = std::max(raise, op.matrix_potential().maxdeg());
        raise = std::max(raise, op.deriv_coeff.maxdeg() - 1);
    }
    int max_lead = 0;
    for (const auto& [key, idx] : b.pivots) {
        (void)idx;
        max_lead = std::max(max_lead, key.first);
    }
    out.zero_up_to_order = true;
    for (const auto& v : b.vectors) {
        int lead = std::numeric_limits<int>::min();
        for (const auto& c : v.comps)
            if (!c.is_zero_trusted()) lead = std::max(lead, c.maxdeg());
        if (lead + raise > max_lead) continue;  // image would outrun the basis
        VectorSeries w;
        if (op.is_scalar()) {
            w = VectorSeries::zero(1);
            w.comps[0] = apply(op, v.comps[0]);
        } else {
            w = apply(op, v);
        }
        VectorSeries rem = b.reduce(std::move(w));
        for (const auto& c : rem.comps)
            if (c.floor()) out.floor = out.floor ? std::max(*out.floor, *c.floor()) : *c.floor();
        bool nonzero = false;
        for (const auto& c : rem.comps)
            for (const auto& [e, val] : c.terms())
                if (e >= -order && !val.is_zero()) nonzero = true;
        if (nonzero && out.zero_up_to_order) {
            out.zero_up_to_order = false;
            out.detail = "basis vector with lead z^" + std::to_string(lead) + " has a remainder";
        }
        out.basis_residuals.push_back(std::move(rem));
    }
    if (out.floor && *out.floor > -order)
        throw truncation_error("stabilization_residual: requested order " + std::to_string(order) +
                               " lies below the trusted floor " + std::to_string(*out.floor));
    return out;
}

// ---------------------------------------------------------------------------
// conjugation_dress

namespace {

struct PieceSystem {
    std::vector<GlSlot> slots;
    GradedPiece domain;                 // g-piece at p-1
    std::vector<MatrixSeries> cent;     // ker(ad Λ) in the g-piece at p
    bool has_id = false;
    int id_zpow = 0;
    RatMatrix M;      // [ad_L1(domain) | cent | id]
    RatMatrix M_im;   // ad_L1(domain) alone, for Fredholm witnesses
    int nd = 0, nc = 0;
};

struct Factor {
    int pdeg;  // degree of U
    MatrixSeries U;
    MatrixSeries E, Einv;
};

struct Engine {
    const AlgebraData& alg;
    const KSOperator& source;
    const KSOperator& target;
    int W;
    int order;
    MatrixSeries Ps, Pt, L1;
    bool shallow = false;  // any diff component with pdeg in (-h, 0)

    std::vector<Factor> factors;
    std::vector<MatrixSeries> prefix, prefix_inv;  // prefix[k] = E_0 ... E_{k-1}
    std::vector<std::string> log;

    Engine(const AlgebraData& a, const KSOperator& s, const KSOperator& t, int order_, int W_)
        : alg(a), source(s), target(t), W(W_), order(order_) {
        prefix.push_back(MatrixSeries::identity(alg.rep_dim));
        prefix_inv.push_back(MatrixSeries::identity(alg.rep_dim));
    }

    const MatrixSeries& gamma() const { return prefix.back(); }
    const MatrixSeries& gamma_inv() const { return prefix_inv.back(); }

    MatrixSeries residual_for(const MatrixSeries& g, const MatrixSeries& ginv) const {
        MatrixSeries q = mul(mul(ginv, Ps), g) + mul(ginv, g.d_dz());
        return (q - Pt).truncated_to(W);
    }
    MatrixSeries residual() const { return residual_for(gamma(), gamma_inv()); }

    void push_factor(Factor f) {
        prefix.push_back(mul(prefix.back(), f.E));
        prefix_inv.push_back(mul(f.Einv, prefix_inv.back()));
        factors.push_back(std::move(f));
    }

    void rebuild_prefixes(std::size_t from) {
        prefix.resize(from + 1);
        prefix_inv.resize(from + 1);
        for (std::size_t k = from; k < factors.size(); ++k) {
            prefix.push_back(mul(prefix.back(), factors[k].E));
            prefix_inv.push_back(mul(factors[k].Einv, prefix_inv.back()));
        }
    }

    Factor make_factor(int pdeg, MatrixSeries U) const {
        MatrixSeries E = exp_neg(U, W);
        MatrixSeries Einv = exp_neg(-U, W);
        return Factor{pdeg, std::move(U), std::move(E), std::move(Einv)};
    }

    PieceSystem build_system(int p) const {
        PieceSystem sys;
        sys.slots = gl_piece_slots(alg, p);
        sys.domain = graded_piece(alg, p - 1);
        sys.cent = lambda_centralizer_basis(alg, p);
        sys.has_id = (p % alg.coxeter_h == 0);
        if (sys.has_id) sys.id_zpow = p / alg.coxeter_h;
        sys.nd = static_cast<int>(sys.domain.basis.size());
        sys.nc = static_cast<int>(sys.cent.size());
        const int rows = static_cast<int>(sys.slots.size());
        const int cols = sys.nd + sys.nc + (sys.has_id ? 1 : 0);
        sys.M = RatMatrix(rows, cols);
        sys.M_im = RatMatrix(rows, sys.nd);
        for (int c = 0; c < sys.nd; ++c) {
            auto img = slot_coords(series_commutator(sys.domain.basis[c], L1), sys.slots);
            for (int r = 0; r < rows; ++r) {
                sys.M.at(r, c) = img[r];
                sys.M_im.at(r, c) = img[r];
            }
        }
        for (int c = 0; c < sys.nc; ++c) {
            auto v = slot_coords(sys.cent[c], sys.slots);
            for (int r = 0; r < rows; ++r) sys.M.at(r, sys.nd + c) = v[r];
        }
        if (sys.has_id) {
            auto v = slot_coords(
                MatrixSeries::monomial(RatMatrix::identity(alg.rep_dim), sys.id_zpow), sys.slots);
            for (int r = 0; r < rows; ++r) sys.M.at(r, sys.nd + sys.nc) = v[r];
        }
        return sys;
    }

    struct StepSolution {
        MatrixSeries U;                 // kernel-free solution in the domain piece
        std::vector<Rational> kappa_g;  // obstruction along ker(ad Λ)
        Rational kappa_id;
    };

    StepSolution solve_step(const PieceSystem& sys, const MatrixSeries& R_p) const {
        auto bc = slot_coords(R_p, sys.slots);
        SolveResult s = mat_solve(sys.M, RatMatrix::column(bc));
        if (!s.solvable)
            throw internal_error(
                "dressing residual escaped span(ad Λ) ⊕ ker(ad Λ) ⊕ C·id at " +
                pdeg_str(sys.domain.pdeg + 1));
        RatMatrix x = s.x;
        if (!s.kernel.empty()) {
            // augmented kernel vectors live in the domain block; strip their
            // contribution so U carries no ker(ad Λ) component
            const int kd = static_cast<int>(s.kernel.size());
            RatMatrix G(kd, kd), rhs(kd, 1);
            for (int i = 0; i < kd; ++i) {
                for (int j = 0; j < kd; ++j) {
                    Rational dot;
                    for (int t = 0; t < sys.nd; ++t)
                        dot += s.kernel[i].at(t, 0) * s.kernel[j].at(t, 0);
                    G.at(i, j) = dot;
                }
                Rational dot;
                for (int t = 0; t < sys.nd; ++t) dot += s.kernel[i].at(t, 0) * x.at(t, 0);
                rhs.at(i, 0) = dot;
            }
            SolveResult gs = mat_solve(G, rhs);
            for (int i = 0; i < kd; ++i) x -= s.kernel[i].scaled(gs.x.at(i, 0));
        }
        StepSolution sol;
        sol.U = MatrixSeries(alg.rep_dim);
        for (int c = 0; c < sys.nd; ++c)
            if (!x.at(c, 0).is_zero()) sol.U = sol.U + sys.domain.basis[c].scaled(x.at(c, 0));
        for (int c = 0; c < sys.nc; ++c) sol.kappa_g.push_back(x.at(sys.nd + c, 0));
        if (sys.has_id) sol.kappa_id = x.at(sys.nd + sys.nc, 0);
        return sol;
    }

    ObstructionCertificate make_certificate(const PieceSystem& sys, const MatrixSeries& R_p,
                                            int p) const {
        ObstructionCertificate cert;
        cert.pdeg = p;
        cert.residue = R_p;
        auto bc = slot_coords(R_p, sys.slots);
        SolveResult s = mat_solve(sys.M_im, RatMatrix::column(bc));
        if (s.solvable)
            throw internal_error("certificate requested for a solvable graded equation");
        Rational pairing;
        cert.null_covector.resize(bc.size());
        for (std::size_t k = 0; k < bc.size(); ++k) {
            cert.null_covector[k] = s.null_covector.at(static_cast<int>(k), 0);
            pairing += cert.null_covector[k] * bc[k];
        }
        cert.pairing = pairing;
        if (p % alg.coxeter_h == 0) cert.trace_value = R_p.coeff(p / alg.coxeter_h).trace();
        cert.context = "conjugation_dress: unsolvable graded step at " + pdeg_str(p) + " after " +
                       std::to_string(factors.size()) + " dressing factors";
        return cert;
    }
};

// component of the residual along ker(ad Λ) at degree p, after optionally
// re-solving the degrees between the adjusted factor and p
struct ProbeResult {
    Rational kappa;
    std::vector<Factor> factors;  // candidate factor list (probe may extend it)
    bool ok = true;
};

}  // namespace

DressOutcome conjugation_dress(const KSOperator& source, const KSOperator& target,
                               const AlgebraData& alg, int order,
                               std::optional<int> work_floor) {
    DressOutcome out;
    const int W = work_floor ? *work_floor : default_work_floor(order);
    out.work_floor = W;

    if (source.is_scalar() || target.is_scalar())
        throw contract_error("conjugation_dress: matrix operators required");
    if (!(source.deriv_coeff == ScalarSeries::one()) ||
        !(target.deriv_coeff == ScalarSeries::one()))
        throw contract_error("conjugation_dress: operators must have derivative coefficient 1");
    if (source.dim() != alg.rep_dim || target.dim() != alg.rep_dim)
        throw contract_error("conjugation_dress: dimension mismatch with algebra");

    Engine eng(alg, source, target, order, W);
    eng.Ps = source.matrix_potential().truncated_to(W);
    eng.Pt = target.matrix_potential().truncated_to(W);

    // target potential: a nonzero rational multiple of the cyclic element
    {
        auto tsplit = principal_degree_split_gl(eng.Pt, alg);
        if (tsplit.size() != 1 || tsplit.begin()->first != 1)
            throw contract_error(
                "conjugation_dress: target potential must be concentrated at principal degree 1");
        const MatrixSeries& t1 = tsplit.begin()->second;
        Rational c;
        for (const auto& [k, m] : alg.lambda_cyclic.terms()) {
            for (int i = 0; i < alg.rep_dim && c.is_zero(); ++i)
                for (int j = 0; j < alg.rep_dim && c.is_zero(); ++j)
                    if (!m.at(i, j).is_zero()) c = t1.coeff(k).at(i, j) / m.at(i, j);
            break;
        }
        if (c.is_zero() || !((alg.lambda_cyclic.scaled(c) - t1).is_zero_trusted()))
            throw contract_error(
                "conjugation_dress: target potential must be a nonzero multiple of Λ");
        eng.L1 = t1;
    }

    {
        auto dsplit = principal_degree_split_gl(eng.Ps - eng.Pt, alg);
        for (const auto& [p, comp] : dsplit) {
            (void)comp;
            if (p >= 0)
                throw contract_error(
                    "conjugation_dress: source - target must have negative principal degrees "
                    "(found " +
                    pdeg_str(p) + ")");
            if (p > -alg.coxeter_h) eng.shallow = true;
        }
    }

    MatrixSeries R = eng.residual();
    int last_p = 1;
    int iterations = 0;

    while (!R.is_zero_trusted()) {
        if (++iterations > 10000) throw internal_error("conjugation_dress: no convergence");
        auto split = principal_degree_split_gl(R, alg);
        const int p = split.rbegin()->first;
        if (p >= last_p && iterations > 1)
            throw internal_error("conjugation_dress: residual degree failed to descend at " +
                                 pdeg_str(p));
        const MatrixSeries& R_p = split.rbegin()->second;
        PieceSystem sys = eng.build_system(p);
        Engine::StepSolution sol = eng.solve_step(sys, R_p);

        bool kg_nonzero = false;
        for (const auto& k : sol.kappa_g)
            if (!k.is_zero()) kg_nonzero = true;

        if (!sol.kappa_id.is_zero() ||
            (kg_nonzero && (p + alg.coxeter_h > -1 ||
                            lambda_centralizer_basis(alg, p + alg.coxeter_h).empty()))) {
            out.success = false;
            out.certificate = eng.make_certificate(sys, R_p, p);
            out.log = eng.log;
            out.log.push_back("obstruction at " + pdeg_str(p));
            return out;
        }

        if (kg_nonzero) {
            // the kernel coefficient of the factor h degrees up couples to
            // this degree through the derivative term; fix it now
            const int mu = p + alg.coxeter_h;
            auto cent_mu = lambda_centralizer_basis(alg, mu);
            if (cent_mu.size() != 1 || sol.kappa_g.size() != 1)
                throw internal_error("conjugation_dress: unexpected kernel dimension at " +
                                     pdeg_str(mu));
            const MatrixSeries& K = cent_mu[0];

            std::size_t idx = 0;
            while (idx < eng.factors.size() && eng.factors[idx].pdeg >= mu) ++idx;

            auto probe = [&](const Rational& c) -> Rational {
                std::vector<Factor> saved = eng.factors;
                auto saved_n = eng.factors.size();
                eng.factors.insert(eng.factors.begin() + static_cast<long>(idx),
                                   eng.make_factor(mu, K.scaled(c)));
                eng.rebuild_prefixes(idx);
                if (eng.shallow) {
                    // re-solve the degrees between mu and p under this c
                    MatrixSeries r = eng.residual();
                    while (true) {
                        auto sp = principal_degree_split_gl(r, alg);
                        if (sp.empty()) break;
                        const int q = sp.rbegin()->first;
                        if (q <= p) break;
                        PieceSystem qsys = eng.build_system(q);
                        Engine::StepSolution qsol = eng.solve_step(qsys, sp.rbegin()->second);
                        if (qsol.U.is_zero_trusted()) break;
                        eng.push_factor(eng.make_factor(q - 1, qsol.U));
                        r = eng.residual();
                    }
                }
                MatrixSeries r = eng.residual();
                auto sp = principal_degree_split_gl(r, alg);
                Rational kappa;
                auto it = sp.find(p);
                if (it != sp.end()) {
                    PieceSystem psys = eng.build_system(p);
                    kappa = eng.solve_step(psys, it->second).kappa_g[0];
                }
                eng.factors = std::move(saved);
                eng.factors.resize(saved_n);
                eng.rebuild_prefixes(idx > 0 ? idx - 1 : 0);
                return kappa;
            };

            const Rational k0 = sol.kappa_g[0];
            const Rational k1 = probe(Rational(1));
            Rational cstar;
            bool solved = false;
            if (k1 != k0) {
                cstar = -k0 / (k1 - k0);
                if (probe(cstar).is_zero()) solved = true;
            }
            if (!solved) {
                // quadratic dependence from c^2 cross terms; fit exactly
                const Rational k2 = probe(Rational(2));
                const Rational a2 = (k2 - k1 * Rational(2) + k0) / Rational(2);
                const Rational b1 = k1 - k0 - a2;
                if (!a2.is_zero()) {
                    const Rational disc = b1 * b1 - a2 * k0 * Rational(4);
                    mpz_class dn = disc.numerator(), dd = disc.denominator();
                    if (disc.sign() >= 0 && mpz_perfect_square_p(dn.get_mpz_t()) &&
                        mpz_perfect_square_p(dd.get_mpz_t())) {
                        mpz_class sn, sd;
                        mpz_sqrt(sn.get_mpz_t(), dn.get_mpz_t());
                        mpz_sqrt(sd.get_mpz_t(), dd.get_mpz_t());
                        const Rational root(mpq_class(sn) / mpq_class(sd));
                        for (int pick = 0; pick < 2 && !solved; ++pick) {
                            const Rational cand =
                                (-b1 + (pick == 0 ? root : -root)) / (a2 * Rational(2));
                            if (probe(cand).is_zero()) {
                                cstar = cand;
                                solved = true;
                            }
                        }
                    }
                }
            }
            if (!solved)
                throw internal_error(
                    "conjugation_dress: kernel coefficient equation has no rational root at " +
                    pdeg_str(mu));

            eng.factors.insert(eng.factors.begin() + static_cast<long>(idx),
                               eng.make_factor(mu, K.scaled(cstar)));
            eng.rebuild_prefixes(idx);
            eng.log.push_back("kernel coefficient at " + pdeg_str(mu) + " fixed to " +
                              cstar.str() + " by the equation at " + pdeg_str(p));
            R = eng.residual();
            if (!eng.shallow) {
                // degrees strictly between p and mu must be untouched
                auto chk = principal_degree_split_gl(R, alg);
                for (auto it = chk.upper_bound(p); it != chk.end(); ++it)
                    if (it->first < mu && !it->second.is_zero_trusted())
                        throw internal_error(
                            "conjugation_dress: kernel fix disturbed a cleared degree");
            }
            continue;  // same degree p is re-examined, now with kappa_g = 0
        }

        if (sol.U.is_zero_trusted())
            throw internal_error("conjugation_dress: empty step solution at " + pdeg_str(p));
        if (!sys.cent.empty())
            eng.log.push_back("kernel freedom of dim " + std::to_string(sys.nc) + " at " +
                              pdeg_str(p - 1) + ": component set to zero pending the equation at " +
                              pdeg_str(p - alg.coxeter_h));
        eng.push_factor(eng.make_factor(p - 1, sol.U));
        last_p = p;
        R = eng.residual();
    }

    // assemble the single-exponential dressing and assert it lies in the span
    MatrixSeries gamma = eng.gamma();
    MatrixSeries gamma_inv = eng.gamma_inv();
    MatrixSeries A = log_neg(gamma, W);
    for (const auto& [k, m] : A.terms()) {
        auto [proj, res] = span_project(alg, m);
        (void)proj;
        if (!res.is_zero())
            throw internal_error("conjugation_dress: dressing exponent leaked out of the span at z^" +
                                 std::to_string(k));
    }
    if (!A.terms().empty() && A.maxdeg() > -1)
        throw internal_error("conjugation_dress: dressing exponent has non-negative support");

    // independent re-conjugation check
    KSOperator verify = conjugate_with_inverse(source, gamma, gamma_inv);
    MatrixSeries final_residual =
        (verify.matrix_potential() - target.matrix_potential()).truncated_to(W);
    if (!final_residual.is_zero_trusted())
        throw internal_error("conjugation_dress: re-conjugation does not reproduce the target");
    if (final_residual.floor() && *final_residual.floor() > -order)
        throw truncation_error("conjugation_dress: work floor too shallow for order " +
                               std::to_string(order));

    out.success = true;
    out.dressing = DressingRep{std::move(A), std::move(gamma), std::move(gamma_inv)};
    out.log = eng.log;
    return out;
}

// ---------------------------------------------------------------------------
// named points

GrassmannPoint cartan_point(const RatMatrix& H, const AlgebraData& alg, int order,
                            std::optional<int> work_floor) {
    // H must be an exact combination of the Cartan basis
    const int n = alg.rep_dim;
    if (H.rows() != n || H.cols() != n) throw contract_error("cartan_point: dimension mismatch");
    {
        const int nb = static_cast<int>(alg.cartan_basis.size());
        RatMatrix M(n * n, nb), b(n * n, 1);
        for (int c = 0; c < nb; ++c)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) M.at(i * n + j, c) = alg.cartan_basis[c].at(i, j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b.at(i * n + j, 0) = H.at(i, j);
        if (!mat_solve(M, b).solvable)
            throw contract_error("cartan_point: H outside the Cartan span");
    }

    KSOperator source = KSOperator::matrix_op(MatrixSeries::monomial(H, -1) + alg.lambda_cyclic);
    KSOperator target = KSOperator::matrix_op(alg.lambda_cyclic);
    DressOutcome d = conjugation_dress(source, target, alg, order, work_floor);
    if (!d.success)
        throw std::logic_error(
            "internal error: cartan_point obstructed (this cannot happen: -h is not an exponent "
            "class); certificate at " +
            pdeg_str(d.certificate.pdeg) + " with trace " + d.certificate.trace_value.str());

    GrassmannPoint pt;
    pt.dim = n;
    pt.alg = &alg;
    pt.floor = d.work_floor;
    pt.rep = std::move(d.dressing);

    StabilizationResidual r = stabilization_residual(pt, source, order);
    if (!r.zero_up_to_order)
        throw std::logic_error("internal error: cartan_point residual nonzero: " + r.detail);
    return pt;
}

GrassmannPoint wk_point(const AlgebraData& alg, int sign, int order,
                        std::optional<int> work_floor) {
    if (sign != 1 && sign != -1) throw contract_error("wk_point: sign must be +1 or -1");
    MatrixSeries rho_term =
        MatrixSeries::monomial(alg.rho_vee.scaled(Rational(1, alg.coxeter_h)), -1);
    KSOperator source =
        KSOperator::matrix_op(rho_term + alg.lambda_cyclic.scaled(Rational(sign)));
    KSOperator target = KSOperator::matrix_op(alg.lambda_cyclic.scaled(Rational(sign)));
    DressOutcome d = conjugation_dress(source, target, alg, order, work_floor);
    if (!d.success)
        throw std::logic_error("internal error: wk_point obstructed; certificate at " +
                               pdeg_str(d.certificate.pdeg) + " with trace " +
                               d.certificate.trace_value.str());

    GrassmannPoint pt;
    pt.dim = alg.rep_dim;
    pt.alg = &alg;
    pt.floor = d.work_floor;
    pt.rep = std::move(d.dressing);

    if (!z_stability_check(pt, std::max(2, order / 2)))
        throw std::logic_error("internal error: wk_point fails z-stability");
    StabilizationResidual r = stabilization_residual(pt, source, order);
    if (!r.zero_up_to_order)
        throw std::logic_error("internal error: wk_point residual nonzero: " + r.detail);
    return pt;
}

BasisRep basis_from_dressing(const GrassmannPoint& pt, int max_lead) {
    if (!pt.is_dressing()) throw contract_error("basis_from_dressing: dressing point required");
    const MatrixSeries& gamma = pt.dressing().gamma;
    BasisRep b;
    for (int q = 0; q <= max_lead; ++q)
        for (int i = 0; i < pt.dim; ++i) {
            VectorSeries col = VectorSeries::zero(pt.dim);
            for (int row = 0; row < pt.dim; ++row) col.comps[row] = gamma.entry(row, i).shifted(q);
            b.add(std::move(col));
        }
    return b;
}

bool z_stability_check(const GrassmannPoint& pt, int max_lead) {
    BasisRep b = basis_from_dressing(pt, max_lead + 1);
    for (int q = 0; q <= max_lead; ++q)
        for (int i = 0; i < pt.dim; ++i) {
            auto it = b.pivots.find(std::make_pair(q, i));
            VectorSeries shifted = b.vectors[it->second].shifted(1);
            VectorSeries rem = b.reduce(std::move(shifted));
            if (!rem.is_zero_trusted()) return false;
        }
    return true;
}

}  // namespace kslab
