#include "kslab/series.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <sstream>

namespace kslab {

namespace {
std::atomic<bool> g_parallel{true};

// Highest exponent that could carry a nonzero or unknown coefficient.
template <typename S>
int maxdeg_eff(const S& s) {
    return s.terms().empty() ? *s.floor() - 1 : s.maxdeg();
}

// Floor of a product. Caller has excluded exact zeros; an absent result
// means both operands were exact. Matches the rule: a product coefficient
// counts as known only when every contributing pair is known.
template <typename SA, typename SB>
FloorBound mul_floor(const SA& a, const SB& b) {
    if (a.exact() && b.exact()) return std::nullopt;
    int f = std::numeric_limits<int>::min();
    if (a.floor()) f = std::max(f, *a.floor() + maxdeg_eff(b));
    if (b.floor()) f = std::max(f, *b.floor() + maxdeg_eff(a));
    return f + 1;
}
}  // namespace

namespace detail {
FloorBound add_floor(const FloorBound& a, const FloorBound& b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}
}  // namespace detail

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// ScalarSeries

ScalarSeries ScalarSeries::monomial(const Rational& c, int exp) {
    ScalarSeries s;
    if (!c.is_zero()) s.c_[exp] = c;
    return s;
}

void ScalarSeries::set_coeff(int exp, const Rational& v) {
    if (floor_ && exp < *floor_) throw contract_error("ScalarSeries: coefficient below floor");
    if (v.is_zero())
        c_.erase(exp);
    else
        c_[exp] = v;
}

Rational ScalarSeries::coeff(int exp) const {
    if (floor_ && exp < *floor_)
        throw truncation_error("ScalarSeries::coeff: exponent " + std::to_string(exp) +
                               " is below floor " + std::to_string(*floor_) +
                               " (value unknown, not zero)");
    auto it = c_.find(exp);
    return it == c_.end() ? Rational() : it->second;
}

int ScalarSeries::maxdeg() const {
    if (c_.empty()) throw contract_error("ScalarSeries::maxdeg: empty series");
    return c_.rbegin()->first;
}

int ScalarSeries::mindeg() const {
    if (c_.empty()) throw contract_error("ScalarSeries::mindeg: empty series");
    return c_.begin()->first;
}

void ScalarSeries::prune() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second.is_zero() || (floor_ && it->first < *floor_))
            it = c_.erase(it);
        else
            ++it;
    }
}

ScalarSeries ScalarSeries::operator-() const {
    ScalarSeries r(floor_);
    for (const auto& [e, v] : c_) r.c_[e] = -v;
    return r;
}

ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b) {
    ScalarSeries r(detail::add_floor(a.floor_, b.floor_));
    r.c_ = a.c_;
    for (const auto& [e, v] : b.c_) {
        auto it = r.c_.find(e);
        if (it == r.c_.end())
            r.c_[e] = v;
        else
            it->second += v;
    }
    r.prune();
    return r;
}

ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b) { return a + (-b); }

ScalarSeries ScalarSeries::scaled(const Rational& c) const {
    if (c.is_zero()) return ScalarSeries();  // exact zero: 0 * unknown = 0
    ScalarSeries r(floor_);
    for (const auto& [e, v] : c_) r.c_[e] = v * c;
    return r;
}

ScalarSeries ScalarSeries::shifted(int k) const {
    ScalarSeries r(floor_ ? FloorBound(*floor_ + k) : std::nullopt);
    for (const auto& [e, v] : c_) r.c_[e + k] = v;
    return r;
}

ScalarSeries ScalarSeries::truncated_to(int floor) const {
    ScalarSeries r(floor_ ? std::max(*floor_, floor) : floor);
    r.c_ = c_;
    r.prune();
    return r;
}

ScalarSeries ScalarSeries::d_dz() const {
    ScalarSeries r(floor_ ? FloorBound(*floor_ - 1) : std::nullopt);
    for (const auto& [e, v] : c_) {
        if (e != 0) r.c_[e - 1] = v * Rational(e);
    }
    return r;
}

ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return ScalarSeries();
    ScalarSeries r;
    r.floor_ = mul_floor(a, b);
    for (const auto& [i, av] : a.c_) {
        for (const auto& [j, bv] : b.c_) {
            const int e = i + j;
            if (r.floor_ && e < *r.floor_) continue;
            auto it = r.c_.find(e);
            if (it == r.c_.end())
                r.c_[e] = av * bv;
            else
                it->second += av * bv;
        }
    }
    r.prune();
    return r;
}

ScalarSeries invert(const ScalarSeries& a, std::optional<int> work_floor) {
    if (a.c_.empty()) throw contract_error("invert: series has no invertible leading term");
    const int K = a.maxdeg();
    const Rational lead = a.c_.rbegin()->second;
    ScalarSeries t = a.shifted(-K).scaled(lead.inverse());
    t.c_.erase(0);  // t = a/(lead z^K) - 1, supported strictly below 0

    std::optional<int> target = t.floor();
    if (work_floor) target = target ? std::max(*target, *work_floor) : *work_floor;

    ScalarSeries sum = ScalarSeries::one();
    ScalarSeries p = ScalarSeries::one();
    const ScalarSeries neg_t = -t;
    int guard = 0;
    while (true) {
        p = mul(p, neg_t);
        if (target) p = p.truncated_to(*target);
        if (p.is_zero_trusted()) break;
        sum = sum + p;
        if (++guard > 100000)
            throw contract_error("invert: non-terminating expansion; supply work_floor");
    }
    if (target) sum = sum.truncated_to(*target);
    return sum.shifted(-K).scaled(lead.inverse());
}

std::string ScalarSeries::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        const int e = it->first;
        Rational v = it->second;
        if (first) {
            if (v.sign() < 0) {
                os << "-";
                v = -v;
            }
        } else {
            os << (v.sign() < 0 ? " - " : " + ");
            if (v.sign() < 0) v = -v;
        }
        if (e == 0) {
            os << v.str();
        } else {
            if (!v.is_one()) os << v.str() << " ";
            os << var;
            if (e != 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// MatrixSeries

MatrixSeries MatrixSeries::identity(int dim) {
    MatrixSeries m(dim);
    m.c_[0] = RatMatrix::identity(dim);
    return m;
}

MatrixSeries MatrixSeries::monomial(const RatMatrix& m, int exp) {
    if (!m.is_square()) throw contract_error("MatrixSeries: coefficients must be square");
    MatrixSeries r(m.rows());
    if (!m.is_zero()) r.c_[exp] = m;
    return r;
}

MatrixSeries MatrixSeries::diag_embed(const ScalarSeries& s, int dim) {
    MatrixSeries r(dim, s.floor());
    for (const auto& [e, v] : s.terms()) r.c_[e] = RatMatrix::identity(dim).scaled(v);
    return r;
}

void MatrixSeries::set_coeff(int exp, const RatMatrix& m) {
    if (m.rows() != dim_ || m.cols() != dim_) throw contract_error("MatrixSeries: dim mismatch");
    if (floor_ && exp < *floor_) throw contract_error("MatrixSeries: coefficient below floor");
    if (m.is_zero())
        c_.erase(exp);
    else
        c_[exp] = m;
}

RatMatrix MatrixSeries::coeff(int exp) const {
    if (floor_ && exp < *floor_)
        throw truncation_error("MatrixSeries::coeff: exponent " + std::to_string(exp) +
                               " is below floor " + std::to_string(*floor_));
    auto it = c_.find(exp);
    return it == c_.end() ? RatMatrix::zero(dim_, dim_) : it->second;
}

int MatrixSeries::maxdeg() const {
    if (c_.empty()) throw contract_error("MatrixSeries::maxdeg: empty series");
    return c_.rbegin()->first;
}

int MatrixSeries::mindeg() const {
    if (c_.empty()) throw contract_error("MatrixSeries::mindeg: empty series");
    return c_.begin()->first;
}

void MatrixSeries::prune() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second.is_zero() || (floor_ && it->first < *floor_))
            it = c_.erase(it);
        else
            ++it;
    }
}

MatrixSeries MatrixSeries::operator-() const {
    MatrixSeries r(dim_, floor_);
    for (const auto& [e, v] : c_) r.c_[e] = -v;
    return r;
}

MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) {
    if (a.dim_ != b.dim_) throw contract_error("MatrixSeries: dim mismatch in +");
    MatrixSeries r(a.dim_, detail::add_floor(a.floor_, b.floor_));
    r.c_ = a.c_;
    for (const auto& [e, v] : b.c_) {
        auto it = r.c_.find(e);
        if (it == r.c_.end())
            r.c_[e] = v;
        else
            it->second += v;
    }
    r.prune();
    return r;
}

MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) { return a + (-b); }

MatrixSeries MatrixSeries::scaled(const Rational& c) const {
    if (c.is_zero()) return MatrixSeries(dim_);
    MatrixSeries r(dim_, floor_);
    for (const auto& [e, v] : c_) r.c_[e] = v.scaled(c);
    return r;
}

MatrixSeries MatrixSeries::shifted(int k) const {
    MatrixSeries r(dim_, floor_ ? FloorBound(*floor_ + k) : std::nullopt);
    for (const auto& [e, v] : c_) r.c_[e + k] = v;
    return r;
}

MatrixSeries MatrixSeries::truncated_to(int floor) const {
    MatrixSeries r(dim_, floor_ ? std::max(*floor_, floor) : floor);
    r.c_ = c_;
    r.prune();
    return r;
}

MatrixSeries MatrixSeries::d_dz() const {
    MatrixSeries r(dim_, floor_ ? FloorBound(*floor_ - 1) : std::nullopt);
    for (const auto& [e, v] : c_) {
        if (e != 0) r.c_[e - 1] = v.scaled(Rational(e));
    }
    return r;
}

ScalarSeries MatrixSeries::trace() const {
    ScalarSeries r(floor_);
    for (const auto& [e, v] : c_) r.set_coeff(e, v.trace());
    return r;
}

ScalarSeries MatrixSeries::entry(int i, int j) const {
    ScalarSeries r(floor_);
    for (const auto& [e, v] : c_) r.set_coeff(e, v.at(i, j));
    return r;
}

MatrixSeries mul_impl(const MatrixSeries& a, const MatrixSeries& b, bool parallel) {
    if (a.dim_ != b.dim_) throw contract_error("MatrixSeries: dim mismatch in *");
    const bool a_zero = a.c_.empty() && a.exact();
    const bool b_zero = b.c_.empty() && b.exact();
    if (a_zero || b_zero) return MatrixSeries(a.dim_);

    MatrixSeries r(a.dim_);
    r.floor_ = mul_floor(a, b);

    std::vector<int> out_exps;
    {
        std::map<int, bool> seen;
        for (const auto& [i, av] : a.c_)
            for (const auto& [j, bv] : b.c_) {
                const int e = i + j;
                if (r.floor_ && e < *r.floor_) continue;
                seen[e] = true;
            }
        out_exps.reserve(seen.size());
        for (const auto& [e, _] : seen) out_exps.push_back(e);
    }

    std::vector<RatMatrix> out(out_exps.size());
    const std::size_t work =
        a.c_.size() * b.c_.size() * static_cast<std::size_t>(a.dim_) * a.dim_ * a.dim_;
    const bool go_parallel = parallel && work >= 4096 && out_exps.size() > 1;

#pragma omp parallel for schedule(dynamic) if (go_parallel)
    for (std::size_t k = 0; k < out_exps.size(); ++k) {
        const int e = out_exps[k];
        RatMatrix acc(a.dim_, a.dim_);
        for (const auto& [i, av] : a.c_) {
            auto it = b.c_.find(e - i);
            if (it != b.c_.end()) acc += av * it->second;
        }
        out[k] = std::move(acc);
    }

    for (std::size_t k = 0; k < out_exps.size(); ++k)
        if (!out[k].is_zero()) r.c_[out_exps[k]] = std::move(out[k]);
    return r;
}

MatrixSeries mul(const MatrixSeries& a, const MatrixSeries& b) {
    return mul_impl(a, b, parallel_enabled() && !omp_in_parallel());
}

MatrixSeries mul_serial(const MatrixSeries& a, const MatrixSeries& b) {
    return mul_impl(a, b, false);
}

MatrixSeries mul_scalar(const MatrixSeries& a, const ScalarSeries& s) {
    if (a.c_.empty() && a.exact()) return MatrixSeries(a.dim_);
    if (s.is_exact_zero()) return MatrixSeries(a.dim_);
    MatrixSeries r(a.dim_);
    r.floor_ = mul_floor(a, s);
    for (const auto& [i, av] : a.c_) {
        for (const auto& [j, sv] : s.terms()) {
            const int e = i + j;
            if (r.floor_ && e < *r.floor_) continue;
            auto it = r.c_.find(e);
            if (it == r.c_.end())
                r.c_[e] = av.scaled(sv);
            else
                it->second += av.scaled(sv);
        }
    }
    r.prune();
    return r;
}

MatrixSeries invert(const MatrixSeries& a, std::optional<int> work_floor) {
    const RatMatrix id = RatMatrix::identity(a.dim());
    if (a.coeff(0) != id || (!a.terms().empty() && a.maxdeg() > 0))
        throw contract_error("invert: matrix series must be id + strictly negative tail");
    MatrixSeries t = a;
    t.set_coeff(0, RatMatrix::zero(a.dim(), a.dim()));

    std::optional<int> target = t.floor();
    if (work_floor) target = target ? std::max(*target, *work_floor) : *work_floor;

    MatrixSeries sum = MatrixSeries::identity(a.dim());
    MatrixSeries p = MatrixSeries::identity(a.dim());
    const MatrixSeries neg_t = -t;
    int guard = 0;
    while (true) {
        p = mul(p, neg_t);
        if (target) p = p.truncated_to(*target);
        if (p.is_zero_trusted()) break;
        sum = sum + p;
        if (++guard > 100000)
            throw contract_error("invert: non-terminating expansion; supply work_floor");
    }
    if (target) sum = sum.truncated_to(*target);
    return sum;
}

MatrixSeries exp_neg(const MatrixSeries& a, std::optional<int> work_floor) {
    if (!a.terms().empty() && a.maxdeg() >= 0)
        throw contract_error("exp_neg: argument must be supported in exponents <= -1");

    std::optional<int> target = a.floor();
    if (work_floor) target = target ? std::max(*target, *work_floor) : *work_floor;

    MatrixSeries sum = MatrixSeries::identity(a.dim());
    MatrixSeries p = MatrixSeries::identity(a.dim());
    long k = 0;
    while (true) {
        ++k;
        p = mul(p, a).scaled(Rational(1, k));
        if (target) p = p.truncated_to(*target);
        if (p.is_zero_trusted()) break;
        sum = sum + p;
        if (k > 100000) throw contract_error("exp_neg: non-terminating expansion; supply work_floor");
    }
    if (target) sum = sum.truncated_to(*target);
    return sum;
}

MatrixSeries log_neg(const MatrixSeries& g, std::optional<int> work_floor) {
    const RatMatrix id = RatMatrix::identity(g.dim());
    if (g.coeff(0) != id || (!g.terms().empty() && g.maxdeg() > 0))
        throw contract_error("log_neg: argument must be id + strictly negative tail");
    MatrixSeries t = g;
    t.set_coeff(0, RatMatrix::zero(g.dim(), g.dim()));

    std::optional<int> target = t.floor();
    if (work_floor) target = target ? std::max(*target, *work_floor) : *work_floor;

    MatrixSeries sum(g.dim(), target);
    MatrixSeries p = MatrixSeries::identity(g.dim());
    long k = 0;
    while (true) {
        ++k;
        p = mul(p, t);
        if (target) p = p.truncated_to(*target);
        if (p.is_zero_trusted()) break;
        // (-1)^{k+1} t^k / k
        sum = sum + p.scaled(Rational(k % 2 == 1 ? 1 : -1, k));
        if (k > 100000) throw contract_error("log_neg: non-terminating expansion; supply work_floor");
    }
    return sum;
}

std::string MatrixSeries::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!first) os << " + ";
        os << it->second.str();
        if (it->first != 0) {
            os << " z";
            if (it->first != 1) os << "^" << it->first;
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// split_at

SplitParts split_at(const ScalarSeries& f, int a) {
    SplitParts out;
    const FloorBound fl = f.floor();
    if (!fl || a >= *fl) {
        out.at = ScalarSeries::monomial(f.coeff(a), a);
        out.below = ScalarSeries(fl);
        out.above = ScalarSeries();
        for (const auto& [e, v] : f.terms()) {
            if (e < a)
                out.below.set_coeff(e, v);
            else if (e > a)
                out.above.set_coeff(e, v);
        }
    } else {
        // a is below the floor: both the a-coefficient and everything under
        // it are unknown, and the parts' floors say so.
        out.at = ScalarSeries(a + 1);
        out.below = ScalarSeries(a);
        out.above = ScalarSeries(fl);
        for (const auto& [e, v] : f.terms()) out.above.set_coeff(e, v);
    }
    return out;
}

MatrixSplitParts split_at(const MatrixSeries& f, int a) {
    MatrixSplitParts out;
    const FloorBound fl = f.floor();
    const int n = f.dim();
    if (!fl || a >= *fl) {
        out.at = MatrixSeries::monomial(f.coeff(a), a);
        out.below = MatrixSeries(n, fl);
        out.above = MatrixSeries(n);
        for (const auto& [e, v] : f.terms()) {
            if (e < a)
                out.below.set_coeff(e, v);
            else if (e > a)
                out.above.set_coeff(e, v);
        }
    } else {
        out.at = MatrixSeries(n, a + 1);
        out.below = MatrixSeries(n, a);
        out.above = MatrixSeries(n, fl);
        for (const auto& [e, v] : f.terms()) out.above.set_coeff(e, v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// VectorSeries

VectorSeries VectorSeries::unit(int n, int i, int exp) {
    VectorSeries v = zero(n);
    v.comps[static_cast<std::size_t>(i)] = ScalarSeries::monomial(Rational(1), exp);
    return v;
}

bool VectorSeries::is_zero_trusted() const {
    for (const auto& c : comps)
        if (!c.is_zero_trusted()) return false;
    return true;
}

VectorSeries VectorSeries::operator-() const {
    VectorSeries r = *this;
    for (auto& c : r.comps) c = -c;
    return r;
}

VectorSeries operator+(const VectorSeries& a, const VectorSeries& b) {
    if (a.dim() != b.dim()) throw contract_error("VectorSeries: dim mismatch");
    VectorSeries r = a;
    for (int i = 0; i < a.dim(); ++i) r.comps[i] = r.comps[i] + b.comps[i];
    return r;
}

VectorSeries operator-(const VectorSeries& a, const VectorSeries& b) { return a + (-b); }

VectorSeries VectorSeries::scaled(const Rational& c) const {
    VectorSeries r = *this;
    for (auto& x : r.comps) x = x.scaled(c);
    return r;
}

VectorSeries VectorSeries::shifted(int k) const {
    VectorSeries r = *this;
    for (auto& x : r.comps) x = x.shifted(k);
    return r;
}

VectorSeries VectorSeries::d_dz() const {
    VectorSeries r = *this;
    for (auto& x : r.comps) x = x.d_dz();
    return r;
}

VectorSeries matvec(const MatrixSeries& m, const VectorSeries& v) {
    if (m.dim() != v.dim()) throw contract_error("matvec: dim mismatch");
    VectorSeries r = VectorSeries::zero(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        ScalarSeries acc;
        for (int j = 0; j < m.dim(); ++j) {
            ScalarSeries mij = m.entry(i, j);
            if (mij.is_zero_trusted() && mij.exact()) continue;
            acc = acc + mul(mij, v.comps[j]);
        }
        r.comps[i] = acc;
    }
    return r;
}

}  // namespace kslab
