#pragma once

#include <map>
#include <string>
#include <vector>

#include "kslab/linalg.hpp"
#include "kslab/series.hpp"

namespace kslab {

enum class LieType { A, C };

/// Basis element of the algebra in its defining representation, tagged with
/// its root height (the ad-eigenvalue of the Weyl co-vector).
struct SpanElement {
    RatMatrix mat;
    int height;
};

/*
 * A simple Lie algebra in a faithful trace-zero defining representation,
 * together with the affine data used throughout: Chevalley generators,
 * the Weyl co-vector, the cyclic element, Coxeter number, exponents and
 * both gradations. Every structural identity is re-verified at
 * construction time instead of trusted from tables.
 */
struct AlgebraData {
    LieType type;
    int rank;
    int rep_dim;  // n
    std::vector<RatMatrix> chevalley_e, chevalley_f, chevalley_h;
    std::vector<std::vector<long>> cartan_matrix;
    RatMatrix rho_vee;
    std::vector<Rational> rho_diag;
    int coxeter_h;
    std::vector<int> exponents;
    MatrixSeries lambda_cyclic;  // e_1 + ... + e_r + E_0 z
    RatMatrix lowest_root_gen;   // E_0
    int twist_k;                 // fixed 1 (untwisted); kept for the data model
    int kac_a0;                  // fixed 1

    std::vector<SpanElement> span_basis;   // height-pure basis of g
    std::vector<RatMatrix> cartan_basis;

    std::string label() const;

    /// rho_i - rho_j; integral for all entry positions of the catalog reps.
    int entry_height(int i, int j) const;
    bool is_exponent_class(int pdeg) const;  // pdeg ≡ some exponent (mod h)
};

AlgebraData build_algebra(LieType type, int rank, int twist_k = 1, int kac_a0 = 1);

/// Projection of a matrix onto the span of g inside gl_n; returns
/// (projection, residual) with m = projection + residual.
std::pair<RatMatrix, RatMatrix> span_project(const AlgebraData& alg, const RatMatrix& m);
bool in_span(const AlgebraData& alg, const RatMatrix& m);
bool series_in_span(const AlgebraData& alg, const MatrixSeries& x);

/// Commutator of matrix series, [a, b] = ab - ba.
MatrixSeries series_commutator(const MatrixSeries& a, const MatrixSeries& b);

struct GradedPiece {
    const AlgebraData* algebra;
    int pdeg;
    std::vector<MatrixSeries> basis;  // monomials, height-pure matrix ⊗ z^k
};

/// Basis of the principal-degree-pdeg piece of the loop algebra of g.
GradedPiece graded_piece(const AlgebraData& alg, int pdeg);

/// Ambient slots: the gl_n loop positions of the given principal degree.
struct GlSlot {
    int row, col, zpow;
};
std::vector<GlSlot> gl_piece_slots(const AlgebraData& alg, int pdeg);
std::vector<Rational> slot_coords(const MatrixSeries& x, const std::vector<GlSlot>& slots);
MatrixSeries from_slot_coords(const AlgebraData& alg, const std::vector<GlSlot>& slots,
                              const std::vector<Rational>& coords);

/// Entrywise split by principal degree over the ambient gl_n loop algebra
/// (no span requirement; identity components are legal here).
std::map<int, MatrixSeries> principal_degree_split_gl(const MatrixSeries& x, const AlgebraData& alg);

/// Split restricted to the loop algebra of g: every homogeneous component
/// must project exactly into the catalog span, otherwise a contract_error
/// listing the residual is raised.
std::map<int, MatrixSeries> principal_degree_split(const MatrixSeries& x, const AlgebraData& alg);

/// Basis of ker(ad Λ) inside the g-piece of the given principal degree.
std::vector<MatrixSeries> lambda_centralizer_basis(const AlgebraData& alg, int pdeg);

/*
 * Machine-checkable witness that a graded equation [Y, Λ] = X has no
 * solution: a covector annihilating the image of ad Λ but pairing
 * nontrivially with the residue. For the rigidity theorem the trace of the
 * residue's z-coefficient is the quantity of interest (it equals n·*).
 */
struct ObstructionCertificate {
    int pdeg = 0;
    MatrixSeries residue;
    std::vector<Rational> null_covector;  // coordinates in the gl slot basis
    Rational pairing;                     // <covector, residue> != 0
    Rational trace_value;                 // trace of the residue's z-coefficient
    std::string context;
};

struct AdSolveResult {
    bool solvable = false;
    MatrixSeries solution;                // Y with [Y, Λ] = X, no kernel component
    std::vector<MatrixSeries> kernel;     // ker(ad Λ) in the domain piece
    ObstructionCertificate certificate;   // valid when !solvable
};

/// Solve [Y, Λ] = X for homogeneous X of principal degree m, with Y of
/// degree m-1; on failure returns the obstruction certificate.
AdSolveResult ad_lambda_solve(const MatrixSeries& x, const AlgebraData& alg);

}  // namespace kslab
