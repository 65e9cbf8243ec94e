#include "kslab/rat_matrix.hpp"

namespace kslab {

bool RatMatrix::is_zero() const {
    for (const auto& v : e_)
        if (!v.is_zero()) return false;
    return true;
}

RatMatrix RatMatrix::operator-() const {
    RatMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
    return r;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw contract_error("RatMatrix: shape mismatch in +");
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw contract_error("RatMatrix: shape mismatch in -");
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw contract_error("RatMatrix: shape mismatch in *");
    RatMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int k = 0; k < a.cols_; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.cols_; ++j) {
                const Rational& bkj = b.at(k, j);
                if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
            }
        }
    }
    return r;
}

RatMatrix RatMatrix::scaled(const Rational& c) const {
    RatMatrix r(rows_, cols_);
    if (c.is_zero()) return r;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * c;
    return r;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Rational RatMatrix::trace() const {
    if (!is_square()) throw contract_error("RatMatrix: trace of non-square matrix");
    Rational t;
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

std::string RatMatrix::str() const {
    std::string s = "[";
    for (std::size_t k = 0; k < e_.size(); ++k) {
        if (k) s += ", ";
        s += e_[k].str();
    }
    s += "]";
    return s;
}

}  // namespace kslab
