#include "csrr/matform.hpp"

namespace csrr {

MatForm MatForm::identity(GenUniversePtr g, std::size_t n) {
    MatForm m(g, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = Form::from_rat(g, Rat(1));
    return m;
}

MatForm MatForm::from_scalars(GenUniversePtr g,
                              const std::vector<std::vector<RatFun>>& rows) {
    if (rows.empty()) throw ShapeError("empty matrix");
    std::size_t c = rows.front().size();
    MatForm m(g, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw ShapeError("ragged matrix");
        for (std::size_t j = 0; j < c; ++j)
            m.at(i, j) = Form::scalar(g, rows[i][j]);
    }
    return m;
}

bool MatForm::is_zero() const {
    for (const auto& e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

bool MatForm::entries_homogeneous(int degree) const {
    for (const auto& e : entries_)
        if (!e.is_homogeneous(degree)) return false;
    return true;
}

MatForm MatForm::operator-() const {
    MatForm r = *this;
    for (auto& e : r.entries_) e = -e;
    return r;
}

MatForm MatForm::operator+(const MatForm& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ShapeError("matrix shape mismatch in addition");
    MatForm r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] += o.entries_[k];
    return r;
}

MatForm MatForm::operator-(const MatForm& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ShapeError("matrix shape mismatch in subtraction");
    MatForm r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] -= o.entries_[k];
    return r;
}

MatForm MatForm::operator*(const MatForm& o) const {
    check_same_universe(guni_, o.guni_);
    if (cols_ != o.rows_) throw ShapeError("inner dimensions disagree");
    MatForm r(guni_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero()) continue;
            for (std::size_t k = 0; k < o.cols_; ++k) {
                if (o.at(j, k).is_zero()) continue;
                r.at(i, k) += at(i, j).wedge(o.at(j, k));
            }
        }
    return r;
}

MatForm MatForm::scaled(const RatFun& c) const {
    MatForm r = *this;
    for (auto& e : r.entries_) e = e.scaled(c);
    return r;
}

MatForm MatForm::scaled(const Rat& c) const {
    MatForm r = *this;
    for (auto& e : r.entries_) e = e.scaled(c);
    return r;
}

MatForm MatForm::wedge_scalar(const Form& w) const {
    check_same_universe(guni_, w.universe());
    MatForm r = *this;
    for (auto& e : r.entries_) e = e.wedge(w);
    return r;
}

MatForm MatForm::transpose() const {
    MatForm r(guni_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

MatForm MatForm::d() const {
    MatForm r = *this;
    for (auto& e : r.entries_) e = e.d();
    return r;
}

bool MatForm::operator==(const MatForm& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

Form MatForm::trace() const {
    if (!is_square()) throw ShapeError("trace of a non-square matrix");
    Form t = Form::zero(guni_);
    for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

RatFun MatForm::scalar_at(std::size_t i, std::size_t j) const {
    const Form& e = at(i, j);
    if (!e.is_homogeneous(0)) throw DegreeError("entry is not a 0-form");
    if (e.is_zero()) return RatFun::zero(guni_->vars());
    return e.terms().begin()->second;
}

RatFun MatForm::scalar_det() const {
    if (!is_square()) throw ShapeError("determinant of a non-square matrix");
    std::size_t n = rows_;
    std::vector<std::vector<RatFun>> m(n, std::vector<RatFun>(n, RatFun::zero(guni_->vars())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = scalar_at(i, j);
    RatFun det = RatFun::one(guni_->vars());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return RatFun::zero(guni_->vars());
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            RatFun f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

MatForm MatForm::scalar_inverse() const {
    if (!is_square()) throw ShapeError("inverse of a non-square matrix");
    std::size_t n = rows_;
    std::vector<std::vector<RatFun>> m(n, std::vector<RatFun>(n, RatFun::zero(guni_->vars())));
    std::vector<std::vector<RatFun>> inv(n, std::vector<RatFun>(n, RatFun::zero(guni_->vars())));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = scalar_at(i, j);
        inv[i][i] = RatFun::one(guni_->vars());
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw Error("matrix is singular");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
        }
        RatFun p = m[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            m[col][c] = m[col][c] / p;
            inv[col][c] = inv[col][c] / p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            RatFun f = m[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return from_scalars(guni_, inv);
}

MatForm MatForm::with_universe(GenUniversePtr target) const {
    MatForm r(target, rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k)
        r.entries_[k] = entries_[k].with_universe(target);
    return r;
}

Form trace_prod(const MatForm& x, const MatForm& y) {
    check_same_universe(x.universe(), y.universe());
    if (x.cols() != y.rows() || x.rows() != y.cols())
        throw ShapeError("trace of a non-square product");
    Form t = Form::zero(x.universe());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (x.at(i, j).is_zero() || y.at(j, i).is_zero()) continue;
            t += x.at(i, j).wedge(y.at(j, i));
        }
    return t;
}

MatForm curvature(const MatForm& a) {
    if (!a.is_square()) throw ShapeError("curvature of a non-square matrix");
    if (!a.entries_homogeneous(1))
        throw DegreeError("connection matrix entries must be 1-forms");
    return a.d() - a * a;
}

std::vector<MatForm> curvature_t(const MatForm& a) {
    if (!a.is_square()) throw ShapeError("curvature of a non-square matrix");
    if (!a.entries_homogeneous(1))
        throw DegreeError("connection matrix entries must be 1-forms");
    std::vector<MatForm> c;
    c.push_back(MatForm(a.universe(), a.rows(), a.cols()));
    c.push_back(a.d());
    c.push_back(-(a * a));
    return c;
}

MatForm gauge(const MatForm& a, const MatForm& g) {
    check_same_universe(a.universe(), g.universe());
    if (!g.is_square() || g.rows() != a.rows() || !a.is_square())
        throw ShapeError("gauge matrix shape mismatch");
    if (!g.entries_homogeneous(0))
        throw DegreeError("gauge matrix entries must be 0-forms");
    MatForm ginv = g.scalar_inverse();
    return g * a * ginv + g.d() * ginv;
}

} // namespace csrr
