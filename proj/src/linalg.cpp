#include "kslab/linalg.hpp"

#include <utility>

namespace kslab {

namespace {

/*
 * Reduced row echelon form of A, tracking the row transform T (R = T·A)
 * so that zero rows of R yield exact left null covectors of A.
 */
struct Echelon {
    RatMatrix R;               // rref of A
    RatMatrix T;               // rows(A) x rows(A), R = T * A
    std::vector<int> pivot_col;  // one per pivot row
};

Echelon rref(const RatMatrix& A) {
    const int m = A.rows(), n = A.cols();
    Echelon e{A, RatMatrix::identity(m), {}};
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int piv = -1;
        for (int i = row; i < m; ++i) {
            if (!e.R.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != row) {
            for (int j = 0; j < n; ++j) std::swap(e.R.at(piv, j), e.R.at(row, j));
            for (int j = 0; j < m; ++j) std::swap(e.T.at(piv, j), e.T.at(row, j));
        }
        const Rational inv = e.R.at(row, col).inverse();
        for (int j = 0; j < n; ++j) e.R.at(row, j) *= inv;
        for (int j = 0; j < m; ++j) e.T.at(row, j) *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            const Rational f = e.R.at(i, col);
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) e.R.at(i, j) -= f * e.R.at(row, j);
            for (int j = 0; j < m; ++j) e.T.at(i, j) -= f * e.T.at(row, j);
        }
        e.pivot_col.push_back(col);
        ++row;
    }
    return e;
}

std::vector<RatMatrix> kernel_from_rref(const Echelon& e, int n) {
    std::vector<bool> is_pivot(n, false);
    for (int c : e.pivot_col) is_pivot[c] = true;
    std::vector<RatMatrix> basis;
    for (int free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatMatrix v(n, 1);
        v.at(free_col, 0) = Rational(1);
        for (std::size_t r = 0; r < e.pivot_col.size(); ++r)
            v.at(e.pivot_col[r], 0) = -e.R.at(static_cast<int>(r), free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

SolveResult mat_solve(const RatMatrix& A, const RatMatrix& b) {
    if (b.cols() != 1 || b.rows() != A.rows())
        throw contract_error("mat_solve: b must be a column with rows(A) entries");
    const int m = A.rows(), n = A.cols();
    Echelon e = rref(A);
    const int rank = static_cast<int>(e.pivot_col.size());

    // Tb holds the transformed right-hand side; rows past the rank must vanish.
    RatMatrix Tb(m, 1);
    for (int i = 0; i < m; ++i) {
        Rational s;
        for (int j = 0; j < m; ++j) {
            if (!e.T.at(i, j).is_zero()) s += e.T.at(i, j) * b.at(j, 0);
        }
        Tb.at(i, 0) = s;
    }

    SolveResult out;
    out.rank = rank;
    for (int i = rank; i < m; ++i) {
        if (!Tb.at(i, 0).is_zero()) {
            out.solvable = false;
            RatMatrix y(m, 1);
            for (int j = 0; j < m; ++j) y.at(j, 0) = e.T.at(i, j);
            out.null_covector = std::move(y);
            return out;
        }
    }
    out.solvable = true;
    RatMatrix x(n, 1);
    for (int r = 0; r < rank; ++r) x.at(e.pivot_col[r], 0) = Tb.at(r, 0);
    out.x = std::move(x);
    out.kernel = kernel_from_rref(e, n);
    return out;
}

std::vector<RatMatrix> mat_kernel(const RatMatrix& A) {
    Echelon e = rref(A);
    return kernel_from_rref(e, A.cols());
}

std::optional<RatMatrix> mat_inverse(const RatMatrix& A) {
    if (!A.is_square()) throw contract_error("mat_inverse: matrix not square");
    const int n = A.rows();
    Echelon e = rref(A);
    if (static_cast<int>(e.pivot_col.size()) != n) return std::nullopt;
    return e.T;
}

int mat_rank(const RatMatrix& A) { return static_cast<int>(rref(A).pivot_col.size()); }

}  // namespace kslab
