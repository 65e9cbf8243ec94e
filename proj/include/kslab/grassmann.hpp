#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kslab/algebra.hpp"
#include "kslab/ks_operator.hpp"

namespace kslab {

/// Big-cell point V = exp(A)·H+ given by its dressing exponent A in the
/// negative loop algebra.
struct DressingRep {
    MatrixSeries A;
    MatrixSeries gamma;
    MatrixSeries gamma_inv;
};

/// Big-cell point given by an admissible basis: vectors z^k·e_i + strictly
/// lower terms, one per leading monomial (k, i).
struct BasisRep {
    std::vector<VectorSeries> vectors;
    std::map<std::pair<int, int>, std::size_t> pivots;  // (lead exp, comp) -> index

    void add(VectorSeries v);
    /// Leading-term elimination against the basis; the remainder is
    /// supported in negative exponents. Throws if a needed pivot is missing.
    VectorSeries reduce(VectorSeries w) const;
};

struct GrassmannPoint {
    int dim = 1;
    std::optional<int> floor;
    const AlgebraData* alg = nullptr;  // null for scalar-side points
    std::variant<DressingRep, BasisRep> rep;

    bool is_dressing() const { return std::holds_alternative<DressingRep>(rep); }
    const DressingRep& dressing() const { return std::get<DressingRep>(rep); }
    const BasisRep& basis() const { return std::get<BasisRep>(rep); }
};

struct StabilizationResidual {
    bool zero_up_to_order = false;
    int order = 0;
    std::optional<int> floor;                    // trust boundary of the residual data
    MatrixSeries dressing_residual;              // dressing case
    std::vector<VectorSeries> basis_residuals;   // basis case, one per checked vector
    std::string detail;
};

/// Residual of (op)V ⊆ V, which should be zero: for a dressing point the
/// negative part of the conjugated potential, for a basis point whatever
/// survives leading-term elimination of op·v_k.
StabilizationResidual stabilization_residual(const GrassmannPoint& V, const KSOperator& op,
                                             int order);

struct DressOutcome {
    bool success = false;
    DressingRep dressing;
    ObstructionCertificate certificate;
    std::vector<std::string> log;
    int work_floor = 0;
};

int default_work_floor(int order);

/*
 * Graded dressing: find γ = exp(Σ_{i<0} U_i), U_i homogeneous of principal
 * degree i in the loop algebra, with γ⁻¹·source·γ = target up to the given
 * order, or report the obstruction certificate of the first unsolvable
 * degree. Both operators must be ∂_z + potential; the target potential must
 * be a nonzero multiple of the cyclic element, and source − target must be
 * of negative principal degree. Degrees whose equation is only solvable
 * modulo ker(ad Λ) are handled by fixing the kernel coefficient of the
 * degree h steps earlier, which the derivative term couples to them.
 */
DressOutcome conjugation_dress(const KSOperator& source, const KSOperator& target,
                               const AlgebraData& alg, int order,
                               std::optional<int> work_floor = std::nullopt);

/// Point stabilized by ∂_z + H/z + Λ for H in the Cartan subalgebra; raises
/// an internal error carrying the certificate if the construction obstructs
/// (it cannot, since -h is not an exponent class).
GrassmannPoint cartan_point(const RatMatrix& H, const AlgebraData& alg, int order,
                            std::optional<int> work_floor = std::nullopt);

/// Witten-Kontsevich-type point: z V ⊆ V and (d_{-1}^pri + sign·Λ) V ⊆ V.
GrassmannPoint wk_point(const AlgebraData& alg, int sign, int order,
                        std::optional<int> work_floor = std::nullopt);

/// Admissible basis of a dressing point: columns γ·z^q·e_i for q = 0..max_lead.
BasisRep basis_from_dressing(const GrassmannPoint& pt, int max_lead);

/// Explicit z·V ⊆ V check on basis columns (structurally automatic for a
/// dressing point; verified rather than assumed).
bool z_stability_check(const GrassmannPoint& pt, int max_lead);

}  // namespace kslab
