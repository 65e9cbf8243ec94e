#pragma once

#include <optional>
#include <vector>

#include "kslab/rat_matrix.hpp"

namespace kslab {

/*
 * Outcome of an exact linear solve A x = b, as a Fredholm certificate:
 * either one solution together with a basis of ker A, or a left null
 * covector y with yᵀA = 0 and yᵀb != 0 witnessing unsolvability.
 */
struct SolveResult {
    bool solvable = false;
    RatMatrix x;                     // cols(A) x 1, valid when solvable
    std::vector<RatMatrix> kernel;   // basis of ker A, each cols(A) x 1
    RatMatrix null_covector;         // rows(A) x 1, valid when !solvable
    int rank = 0;
};

/// Gaussian elimination with exact pivoting on the first nonzero entry.
SolveResult mat_solve(const RatMatrix& A, const RatMatrix& b);

std::vector<RatMatrix> mat_kernel(const RatMatrix& A);

std::optional<RatMatrix> mat_inverse(const RatMatrix& A);

int mat_rank(const RatMatrix& A);

}  // namespace kslab
