#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kslab/rat_matrix.hpp"
#include "kslab/rational.hpp"

namespace kslab {

/*
 * Truncated formal Laurent series in 1/z.
 *
 * A series carries an optional floor: exponents below the floor are UNKNOWN
 * (lost to truncation), not zero. A series without a floor is exact: every
 * absent exponent is exactly zero. Operations compute a floor that never
 * claims knowledge of a coefficient that depends on unknown data. Stored
 * coefficients are always at or above the floor and never zero.
 */
using FloorBound = std::optional<int>;

namespace detail {
// Floor of a sum: the shallowest truncation wins; exact operands impose none.
FloorBound add_floor(const FloorBound& a, const FloorBound& b);
}  // namespace detail

struct SplitParts;

class ScalarSeries {
public:
    ScalarSeries() = default;
    explicit ScalarSeries(FloorBound floor) : floor_(floor) {}

    static ScalarSeries zero() { return ScalarSeries(); }
    static ScalarSeries constant(const Rational& c) { return monomial(c, 0); }
    static ScalarSeries one() { return constant(Rational(1)); }
    static ScalarSeries monomial(const Rational& c, int exp);

    const std::map<int, Rational>& terms() const { return c_; }
    FloorBound floor() const { return floor_; }
    bool exact() const { return !floor_.has_value(); }

    void set_coeff(int exp, const Rational& v);

    /// Exact coefficient; throws truncation_error below the floor.
    Rational coeff(int exp) const;

    bool is_zero_trusted() const { return c_.empty(); }
    bool is_exact_zero() const { return c_.empty() && exact(); }
    /// Largest stored exponent; meaningless for empty series.
    int maxdeg() const;
    int mindeg() const;

    ScalarSeries operator-() const;
    friend ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b);
    friend bool operator==(const ScalarSeries& a, const ScalarSeries& b) {
        return a.floor_ == b.floor_ && a.c_ == b.c_;
    }

    ScalarSeries scaled(const Rational& c) const;
    /// Multiplication by the exact monomial z^k (floor shifts by exactly k).
    ScalarSeries shifted(int k) const;
    ScalarSeries truncated_to(int floor) const;

    ScalarSeries d_dz() const;

    std::string str(const std::string& var = "z") const;

private:
    void prune();
    friend class MatrixSeries;
    friend ScalarSeries mul(const ScalarSeries&, const ScalarSeries&);
    friend ScalarSeries invert(const ScalarSeries&, std::optional<int>);

    std::map<int, Rational> c_;
    FloorBound floor_;
};

ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b);

/// Inverse of c·z^K·(1 + lower). work_floor bounds the expansion when the
/// input is exact (mandatory then, unless the tail is nilpotent).
ScalarSeries invert(const ScalarSeries& a, std::optional<int> work_floor = std::nullopt);

class MatrixSeries {
public:
    MatrixSeries() : dim_(0) {}
    explicit MatrixSeries(int dim, FloorBound floor = std::nullopt) : dim_(dim), floor_(floor) {}

    static MatrixSeries zero(int dim) { return MatrixSeries(dim); }
    static MatrixSeries identity(int dim);
    static MatrixSeries monomial(const RatMatrix& m, int exp);
    /// c(z) · id
    static MatrixSeries diag_embed(const ScalarSeries& s, int dim);

    int dim() const { return dim_; }
    const std::map<int, RatMatrix>& terms() const { return c_; }
    FloorBound floor() const { return floor_; }
    bool exact() const { return !floor_.has_value(); }

    void set_coeff(int exp, const RatMatrix& m);
    RatMatrix coeff(int exp) const;

    bool is_zero_trusted() const { return c_.empty(); }
    int maxdeg() const;
    int mindeg() const;

    MatrixSeries operator-() const;
    friend MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b);
    friend MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b);
    friend bool operator==(const MatrixSeries& a, const MatrixSeries& b) {
        return a.dim_ == b.dim_ && a.floor_ == b.floor_ && a.c_ == b.c_;
    }

    MatrixSeries scaled(const Rational& c) const;
    MatrixSeries shifted(int k) const;
    MatrixSeries truncated_to(int floor) const;

    MatrixSeries d_dz() const;
    ScalarSeries trace() const;
    ScalarSeries entry(int i, int j) const;

    std::string str() const;

private:
    void prune();
    friend MatrixSeries mul_impl(const MatrixSeries&, const MatrixSeries&, bool);
    friend MatrixSeries mul_scalar(const MatrixSeries&, const ScalarSeries&);
    friend MatrixSeries invert(const MatrixSeries&, std::optional<int>);

    int dim_;
    std::map<int, RatMatrix> c_;
    FloorBound floor_;
};

/// OpenMP-parallel product (dispatches to the serial path for small inputs
/// or when parallel execution is disabled globally).
MatrixSeries mul(const MatrixSeries& a, const MatrixSeries& b);
/// Serial reference implementation, kept for testing and benchmarks.
MatrixSeries mul_serial(const MatrixSeries& a, const MatrixSeries& b);

MatrixSeries mul_scalar(const MatrixSeries& a, const ScalarSeries& s);

/// Inverse of id + (strictly negative support tail).
MatrixSeries invert(const MatrixSeries& a, std::optional<int> work_floor = std::nullopt);

/// exp(A) = Σ A^k/k! for A supported in exponents <= -1.
MatrixSeries exp_neg(const MatrixSeries& a, std::optional<int> work_floor = std::nullopt);
/// Inverse of exp_neg on id + (strictly negative tail).
MatrixSeries log_neg(const MatrixSeries& g, std::optional<int> work_floor = std::nullopt);

struct SplitParts {
    ScalarSeries below, at, above;
};
struct MatrixSplitParts {
    MatrixSeries below, at, above;
};

/// f = f_below + f_at + f_above with supports (<a), {a}, (>a).
SplitParts split_at(const ScalarSeries& f, int a);
MatrixSplitParts split_at(const MatrixSeries& f, int a);

/// Column vector in C((1/z))^n: one scalar series per component.
struct VectorSeries {
    std::vector<ScalarSeries> comps;

    int dim() const { return static_cast<int>(comps.size()); }
    static VectorSeries zero(int n) { return VectorSeries{std::vector<ScalarSeries>(static_cast<std::size_t>(n))}; }
    static VectorSeries unit(int n, int i, int exp = 0);
    bool is_zero_trusted() const;
    VectorSeries operator-() const;
    friend VectorSeries operator+(const VectorSeries& a, const VectorSeries& b);
    friend VectorSeries operator-(const VectorSeries& a, const VectorSeries& b);
    VectorSeries scaled(const Rational& c) const;
    VectorSeries shifted(int k) const;
    VectorSeries d_dz() const;
};

VectorSeries matvec(const MatrixSeries& m, const VectorSeries& v);

/// Process-wide switch for the OpenMP kernels (scan loops consult it too).
bool parallel_enabled();
void set_parallel_enabled(bool on);

}  // namespace kslab
