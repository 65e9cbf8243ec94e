#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "kslab/rational.hpp"

namespace kslab {

/// Dense matrix of rationals, row-major. Rectangular shapes are allowed;
/// column vectors are n x 1 matrices.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw contract_error("RatMatrix: negative shape");
    }
    RatMatrix(int rows, int cols, std::initializer_list<Rational> entries)
        : RatMatrix(rows, cols) {
        if (entries.size() != e_.size()) throw contract_error("RatMatrix: entry count mismatch");
        std::size_t k = 0;
        for (const auto& v : entries) e_[k++] = v;
    }

    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }
    static RatMatrix zero(int rows, int cols) { return RatMatrix(rows, cols); }
    /// e_{ij} scaled: single nonzero entry.
    static RatMatrix unit(int n, int i, int j, const Rational& v = Rational(1)) {
        RatMatrix m(n, n);
        m.at(i, j) = v;
        return m;
    }
    static RatMatrix column(const std::vector<Rational>& v) {
        RatMatrix m(static_cast<int>(v.size()), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m.e_[i] = v[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rational& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }

    RatMatrix operator-() const;
    RatMatrix& operator+=(const RatMatrix& o);
    RatMatrix& operator-=(const RatMatrix& o);
    friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
    friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    RatMatrix scaled(const Rational& c) const;
    RatMatrix transpose() const;
    Rational trace() const;

    /// [a, b] = ab - ba
    static RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

    /// Row-major bracketed rational list, e.g. "[1, 0, -1/2, 1]".
    std::string str() const;

private:
    int rows_, cols_;
    std::vector<Rational> e_;
};

}  // namespace kslab
