#include "kslab/algebra.hpp"

#include <sstream>

namespace kslab {

namespace {

class construction_error : public contract_error {
public:
    using contract_error::contract_error;
};

void check(bool ok, const std::string& what) {
    if (!ok) throw construction_error("algebra construction self-check failed: " + what);
}

// [B, e] must be a scalar multiple of e; returns that scalar.
Rational commutator_eigenvalue(const RatMatrix& B, const RatMatrix& e) {
    RatMatrix c = RatMatrix::commutator(B, e);
    Rational lambda;
    bool found = false;
    for (int i = 0; i < e.rows() && !found; ++i)
        for (int j = 0; j < e.cols() && !found; ++j)
            if (!e.at(i, j).is_zero()) {
                lambda = c.at(i, j) / e.at(i, j);
                found = true;
            }
    check(found, "zero generator");
    check(c == e.scaled(lambda), "generator is not an ad-eigenvector");
    return lambda;
}

RatMatrix solve_rho_vee(const std::vector<RatMatrix>& cartan_basis,
                        const std::vector<RatMatrix>& e_gens, int n) {
    const int r = static_cast<int>(cartan_basis.size());
    RatMatrix M(r, r), ones(r, 1);
    for (int i = 0; i < r; ++i) {
        ones.at(i, 0) = Rational(1);
        for (int k = 0; k < r; ++k)
            M.at(i, k) = commutator_eigenvalue(cartan_basis[k], e_gens[i]);
    }
    SolveResult s = mat_solve(M, ones);
    check(s.solvable && s.kernel.empty(), "rho_vee system is not uniquely solvable");
    RatMatrix rho(n, n);
    for (int k = 0; k < r; ++k) rho += cartan_basis[k].scaled(s.x.at(k, 0));
    return rho;
}

int height_of(const std::vector<Rational>& rho_diag, const RatMatrix& m) {
    bool found = false;
    Rational h;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            Rational d = rho_diag[i] - rho_diag[j];
            if (!found) {
                h = d;
                found = true;
            } else {
                check(d == h, "span basis element mixes heights");
            }
        }
    check(found, "zero span basis element");
    check(h.denominator() == 1, "non-integral height");
    return static_cast<int>(h.numerator().get_si());
}

}  // namespace

std::string AlgebraData::label() const {
    return std::string(type == LieType::A ? "A" : "C") + std::to_string(rank);
}

int AlgebraData::entry_height(int i, int j) const {
    Rational d = rho_diag[i] - rho_diag[j];
    if (d.denominator() != 1)
        throw contract_error("entry_height: non-integral height at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
    return static_cast<int>(d.numerator().get_si());
}

bool AlgebraData::is_exponent_class(int pdeg) const {
    const int m = ((pdeg % coxeter_h) + coxeter_h) % coxeter_h;
    for (int e : exponents)
        if (e % coxeter_h == m) return true;
    return false;
}

AlgebraData build_algebra(LieType type, int rank, int twist_k, int kac_a0) {
    if (twist_k != 1 || kac_a0 != 1)
        throw contract_error("build_algebra: untwisted only (twist_k = kac_a0 = 1)");
    AlgebraData a;
    a.type = type;
    a.rank = rank;
    a.twist_k = 1;
    a.kac_a0 = 1;

    if (type == LieType::A) {
        if (rank < 1) throw contract_error("build_algebra: type A needs rank >= 1");
        const int n = rank + 1;
        a.rep_dim = n;
        a.coxeter_h = n;
        for (int i = 0; i < rank; ++i) {
            a.chevalley_e.push_back(RatMatrix::unit(n, i, i + 1));
            a.chevalley_f.push_back(RatMatrix::unit(n, i + 1, i));
            a.chevalley_h.push_back(RatMatrix::commutator(a.chevalley_e[i], a.chevalley_f[i]));
        }
        a.lowest_root_gen = RatMatrix::unit(n, n - 1, 0);
        for (int i = 1; i <= rank; ++i) a.exponents.push_back(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) a.span_basis.push_back({RatMatrix::unit(n, i, j), 0});
        for (int i = 0; i < rank; ++i) {
            a.cartan_basis.push_back(a.chevalley_h[i]);
            a.span_basis.push_back({a.chevalley_h[i], 0});
        }
    } else {
        if (rank < 2) throw contract_error("build_algebra: type C needs rank >= 2");
        const int r = rank, n = 2 * r;
        a.rep_dim = n;
        a.coxeter_h = 2 * r;
        for (int i = 0; i < r - 1; ++i) {
            RatMatrix e = RatMatrix::unit(n, i, i + 1);
            e -= RatMatrix::unit(n, r + i + 1, r + i);
            RatMatrix f = RatMatrix::unit(n, i + 1, i);
            f -= RatMatrix::unit(n, r + i, r + i + 1);
            a.chevalley_e.push_back(e);
            a.chevalley_f.push_back(f);
            a.chevalley_h.push_back(RatMatrix::commutator(e, f));
        }
        a.chevalley_e.push_back(RatMatrix::unit(n, r - 1, 2 * r - 1));
        a.chevalley_f.push_back(RatMatrix::unit(n, 2 * r - 1, r - 1));
        a.chevalley_h.push_back(
            RatMatrix::commutator(a.chevalley_e[r - 1], a.chevalley_f[r - 1]));
        a.lowest_root_gen = RatMatrix::unit(n, r, 0);
        for (int i = 1; i <= r; ++i) a.exponents.push_back(2 * i - 1);
        // sp_{2r}: blocks [[A, B], [C, -A^T]] with B, C symmetric
        for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) {
                RatMatrix x = RatMatrix::unit(n, p, q);
                x -= RatMatrix::unit(n, r + q, r + p);
                a.span_basis.push_back({x, 0});
                if (p == q) a.cartan_basis.push_back(x);
            }
        for (int p = 0; p < r; ++p)
            for (int q = p; q < r; ++q) {
                RatMatrix b = RatMatrix::unit(n, p, r + q);
                if (p != q) b += RatMatrix::unit(n, q, r + p);
                a.span_basis.push_back({b, 0});
                RatMatrix c = RatMatrix::unit(n, r + p, q);
                if (p != q) c += RatMatrix::unit(n, r + q, p);
                a.span_basis.push_back({c, 0});
            }
    }

    a.rho_vee = solve_rho_vee(a.cartan_basis, a.chevalley_e, a.rep_dim);
    a.rho_diag.resize(a.rep_dim);
    for (int i = 0; i < a.rep_dim; ++i) {
        a.rho_diag[i] = a.rho_vee.at(i, i);
        for (int j = 0; j < a.rep_dim; ++j)
            check(i == j || a.rho_vee.at(i, j).is_zero(), "rho_vee not diagonal");
    }
    for (auto& el : a.span_basis) el.height = height_of(a.rho_diag, el.mat);

    // Cartan matrix from the realization itself: [h_i, e_j] = a_ij e_j.
    const int r = rank;
    a.cartan_matrix.assign(r, std::vector<long>(r, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Rational v = commutator_eigenvalue(a.chevalley_h[i], a.chevalley_e[j]);
            check(v.denominator() == 1, "non-integral Cartan entry");
            a.cartan_matrix[i][j] = v.numerator().get_si();
        }

    // Chevalley relations and the rho_vee normalization.
    for (int i = 0; i < r; ++i) {
        check(a.chevalley_h[i].trace().is_zero(), "h_i not traceless");
        check(RatMatrix::commutator(a.rho_vee, a.chevalley_e[i]) == a.chevalley_e[i],
              "[rho, e_i] != e_i");
        check(RatMatrix::commutator(a.rho_vee, a.chevalley_f[i]) == -a.chevalley_f[i],
              "[rho, f_i] != -f_i");
        for (int j = 0; j < r; ++j) {
            RatMatrix ef = RatMatrix::commutator(a.chevalley_e[i], a.chevalley_f[j]);
            if (i == j)
                check(ef == a.chevalley_h[i], "[e_i, f_i] != h_i");
            else
                check(ef.is_zero(), "[e_i, f_j] != 0 for i != j");
            RatMatrix he = RatMatrix::commutator(a.chevalley_h[i], a.chevalley_e[j]);
            check(he == a.chevalley_e[j].scaled(Rational(a.cartan_matrix[i][j])),
                  "[h_i, e_j] inconsistent with Cartan matrix");
            RatMatrix hf = RatMatrix::commutator(a.chevalley_h[i], a.chevalley_f[j]);
            check(hf == a.chevalley_f[j].scaled(Rational(-a.cartan_matrix[i][j])),
                  "[h_i, f_j] inconsistent with Cartan matrix");
        }
    }
    for (const auto& el : a.span_basis) check(el.mat.trace().is_zero(), "span element with trace");
    check(a.rho_vee.trace().is_zero(), "rho_vee has trace");

    // Lambda = e_1 + ... + e_r + E_0 z, of pure principal degree 1.
    RatMatrix lam0(a.rep_dim, a.rep_dim);
    for (const auto& e : a.chevalley_e) lam0 += e;
    a.lambda_cyclic = MatrixSeries::monomial(lam0, 0) + MatrixSeries::monomial(a.lowest_root_gen, 1);
    for (const auto& [k, m] : a.lambda_cyclic.terms())
        for (int i = 0; i < a.rep_dim; ++i)
            for (int j = 0; j < a.rep_dim; ++j)
                if (!m.at(i, j).is_zero())
                    check(a.entry_height(i, j) + k * a.coxeter_h == 1,
                          "Lambda not of pure principal degree 1");

    if (type == LieType::A) {
        MatrixSeries p = MatrixSeries::identity(a.rep_dim);
        for (int i = 0; i < a.coxeter_h; ++i) p = mul_serial(p, a.lambda_cyclic);
        check(p == MatrixSeries::identity(a.rep_dim).shifted(1), "Lambda^h != z id");
    }
    return a;
}

std::pair<RatMatrix, RatMatrix> span_project(const AlgebraData& alg, const RatMatrix& m) {
    const int n = alg.rep_dim;
    if (m.rows() != n || m.cols() != n) throw contract_error("span_project: dimension mismatch");
    if (alg.type == LieType::A) {
        Rational t = m.trace() / Rational(n);
        RatMatrix res = RatMatrix::identity(n).scaled(t);
        return {m - res, res};
    }
    // sp_{2r} is the +1 eigenspace of sigma(m) = J m^T J with J the standard
    // antisymmetric form (J^{-1} = -J).
    const int r = n / 2;
    RatMatrix J(n, n);
    for (int i = 0; i < r; ++i) {
        J.at(i, r + i) = Rational(1);
        J.at(r + i, i) = Rational(-1);
    }
    RatMatrix sigma = J * m.transpose() * J;
    RatMatrix proj = (m + sigma).scaled(Rational(1, 2));
    return {proj, m - proj};
}

bool in_span(const AlgebraData& alg, const RatMatrix& m) {
    return span_project(alg, m).second.is_zero();
}

bool series_in_span(const AlgebraData& alg, const MatrixSeries& x) {
    for (const auto& [k, m] : x.terms()) {
        (void)k;
        if (!in_span(alg, m)) return false;
    }
    return true;
}

MatrixSeries series_commutator(const MatrixSeries& a, const MatrixSeries& b) {
    return mul(a, b) - mul(b, a);
}

GradedPiece graded_piece(const AlgebraData& alg, int pdeg) {
    GradedPiece p{&alg, pdeg, {}};
    const int h = alg.coxeter_h;
    // heights of the catalog span lie in [-(h-1), h-1]
    for (int k = (pdeg - (h - 1) - (h - 1)) / h - 1; k * h <= pdeg + (h - 1); ++k) {
        const int m = pdeg - k * h;
        if (m < -(h - 1) || m > (h - 1)) continue;
        for (const auto& el : alg.span_basis)
            if (el.height == m) p.basis.push_back(MatrixSeries::monomial(el.mat, k));
    }
    return p;
}

std::vector<GlSlot> gl_piece_slots(const AlgebraData& alg, int pdeg) {
    std::vector<GlSlot> slots;
    const int h = alg.coxeter_h;
    const int n = alg.rep_dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ht = alg.entry_height(i, j);
            const int rem = pdeg - ht;
            if (rem % h != 0) continue;
            slots.push_back({i, j, rem / h});
        }
    return slots;
}

std::vector<Rational> slot_coords(const MatrixSeries& x, const std::vector<GlSlot>& slots) {
    std::vector<Rational> c(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
        auto it = x.terms().find(slots[k].zpow);
        if (it != x.terms().end()) c[k] = it->second.at(slots[k].row, slots[k].col);
    }
    return c;
}

MatrixSeries from_slot_coords(const AlgebraData& alg, const std::vector<GlSlot>& slots,
                              const std::vector<Rational>& coords) {
    if (slots.size() != coords.size()) throw contract_error("from_slot_coords: size mismatch");
    MatrixSeries x(alg.rep_dim);
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (coords[k].is_zero()) continue;
        RatMatrix m = x.coeff(slots[k].zpow);
        m.at(slots[k].row, slots[k].col) = coords[k];
        x.set_coeff(slots[k].zpow, m);
    }
    return x;
}

std::map<int, MatrixSeries> principal_degree_split_gl(const MatrixSeries& x,
                                                      const AlgebraData& alg) {
    if (x.dim() != alg.rep_dim) throw contract_error("principal_degree_split: dim mismatch");
    std::map<int, MatrixSeries> out;
    const int n = alg.rep_dim;
    for (const auto& [k, m] : x.terms()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (m.at(i, j).is_zero()) continue;
                const int p = alg.entry_height(i, j) + k * alg.coxeter_h;
                auto it = out.find(p);
                if (it == out.end())
                    it = out.emplace(p, MatrixSeries(n, x.floor())).first;
                RatMatrix c = it->second.coeff(k);
                c.at(i, j) = m.at(i, j);
                it->second.set_coeff(k, c);
            }
    }
    return out;
}

std::map<int, MatrixSeries> principal_degree_split(const MatrixSeries& x, const AlgebraData& alg) {
    auto out = principal_degree_split_gl(x, alg);
    for (const auto& [p, comp] : out) {
        for (const auto& [k, m] : comp.terms()) {
            auto [proj, res] = span_project(alg, m);
            (void)proj;
            if (!res.is_zero()) {
                std::ostringstream os;
                os << "principal_degree_split: component at pdeg " << p
                   << " lies outside the loop algebra; residual at z^" << k << " = " << res.str();
                throw contract_error(os.str());
            }
        }
    }
    return out;
}

std::vector<MatrixSeries> lambda_centralizer_basis(const AlgebraData& alg, int pdeg) {
    GradedPiece dom = graded_piece(alg, pdeg);
    if (dom.basis.empty()) return {};
    auto slots = gl_piece_slots(alg, pdeg + 1);
    RatMatrix M(static_cast<int>(slots.size()), static_cast<int>(dom.basis.size()));
    for (std::size_t c = 0; c < dom.basis.size(); ++c) {
        auto img = slot_coords(series_commutator(dom.basis[c], alg.lambda_cyclic), slots);
        for (std::size_t rw = 0; rw < slots.size(); ++rw) M.at(static_cast<int>(rw), static_cast<int>(c)) = img[rw];
    }
    std::vector<MatrixSeries> out;
    for (const auto& kv : mat_kernel(M)) {
        MatrixSeries z(alg.rep_dim);
        for (std::size_t c = 0; c < dom.basis.size(); ++c) {
            const Rational& w = kv.at(static_cast<int>(c), 0);
            if (!w.is_zero()) z = z + dom.basis[c].scaled(w);
        }
        out.push_back(z);
    }
    return out;
}

AdSolveResult ad_lambda_solve(const MatrixSeries& x, const AlgebraData& alg) {
    AdSolveResult res;
    auto split = principal_degree_split_gl(x, alg);
    if (split.empty()) {
        res.solvable = true;
        res.solution = MatrixSeries(alg.rep_dim);
        return res;
    }
    if (split.size() != 1)
        throw contract_error("ad_lambda_solve: input is not homogeneous in principal degree");
    const int m = split.begin()->first;

    auto slots = gl_piece_slots(alg, m);
    auto b_coords = slot_coords(x, slots);
    RatMatrix b = RatMatrix::column(b_coords);

    GradedPiece dom = graded_piece(alg, m - 1);
    RatMatrix M(static_cast<int>(slots.size()), static_cast<int>(dom.basis.size()));
    for (std::size_t c = 0; c < dom.basis.size(); ++c) {
        auto img = slot_coords(series_commutator(dom.basis[c], alg.lambda_cyclic), slots);
        for (std::size_t rw = 0; rw < slots.size(); ++rw) M.at(static_cast<int>(rw), static_cast<int>(c)) = img[rw];
    }

    SolveResult s = mat_solve(M, b);
    const int dn = static_cast<int>(dom.basis.size());
    if (s.solvable) {
        // pick the unique solution with zero component along ker(ad Lambda)
        RatMatrix xvec = s.x;
        if (!s.kernel.empty()) {
            const int kd = static_cast<int>(s.kernel.size());
            RatMatrix G(kd, kd), rhs(kd, 1);
            for (int i = 0; i < kd; ++i) {
                for (int j = 0; j < kd; ++j) {
                    Rational dot;
                    for (int t = 0; t < dn; ++t) dot += s.kernel[i].at(t, 0) * s.kernel[j].at(t, 0);
                    G.at(i, j) = dot;
                }
                Rational dot;
                for (int t = 0; t < dn; ++t) dot += s.kernel[i].at(t, 0) * xvec.at(t, 0);
                rhs.at(i, 0) = dot;
            }
            SolveResult gs = mat_solve(G, rhs);
            for (int i = 0; i < kd; ++i)
                xvec -= s.kernel[i].scaled(gs.x.at(i, 0));
        }
        res.solvable = true;
        res.solution = MatrixSeries(alg.rep_dim);
        for (int c = 0; c < dn; ++c)
            if (!xvec.at(c, 0).is_zero()) res.solution = res.solution + dom.basis[c].scaled(xvec.at(c, 0));
        for (const auto& kv : s.kernel) {
            MatrixSeries z(alg.rep_dim);
            for (int c = 0; c < dn; ++c)
                if (!kv.at(c, 0).is_zero()) z = z + dom.basis[c].scaled(kv.at(c, 0));
            res.kernel.push_back(z);
        }
        return res;
    }

    ObstructionCertificate cert;
    cert.pdeg = m;
    cert.residue = x;
    cert.null_covector.assign(b_coords.size(), Rational());
    Rational pairing;
    for (std::size_t k = 0; k < b_coords.size(); ++k) {
        cert.null_covector[k] = s.null_covector.at(static_cast<int>(k), 0);
        pairing += cert.null_covector[k] * b_coords[k];
    }
    cert.pairing = pairing;
    if (m % alg.coxeter_h == 0) cert.trace_value = x.coeff(m / alg.coxeter_h).trace();
    cert.context = "ad_lambda_solve at pdeg " + std::to_string(m);
    res.solvable = false;
    res.certificate = std::move(cert);
    return res;
}

}  // namespace kslab
