#ifndef CSRR_MATFORM_HPP
#define CSRR_MATFORM_HPP

#include <vector>

#include "csrr/exterior.hpp"

namespace csrr {

// Rectangular matrix with Form entries over one shared generator universe.
// Matrices act on column vectors: entry (i, j) sits in row i, column j, and
// a connection matrix A stores the expansion of the j-th basis image in
// column j.  Products wedge the entries.
class MatForm {
  public:
    MatForm(GenUniversePtr g, std::size_t rows, std::size_t cols)
        : guni_(std::move(g)), rows_(rows), cols_(cols),
          entries_(rows * cols, Form::zero(guni_)) {}

    static MatForm identity(GenUniversePtr g, std::size_t n);
    static MatForm from_scalars(GenUniversePtr g,
                                const std::vector<std::vector<RatFun>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const GenUniversePtr& universe() const { return guni_; }

    Form& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Form& at(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }
    // Every entry homogeneous of the given degree (zero entries allowed).
    bool entries_homogeneous(int degree) const;

    MatForm operator-() const;
    MatForm operator+(const MatForm& o) const;
    MatForm operator-(const MatForm& o) const;
    MatForm operator*(const MatForm& o) const; // wedge-entry product
    MatForm scaled(const RatFun& c) const;
    MatForm scaled(const Rat& c) const;
    // Every entry wedged with the given form on the right.
    MatForm wedge_scalar(const Form& w) const;
    MatForm transpose() const;
    MatForm d() const;

    bool operator==(const MatForm& o) const;
    bool operator!=(const MatForm& o) const { return !(*this == o); }

    Form trace() const;

    // For matrices of 0-forms only.
    RatFun scalar_at(std::size_t i, std::size_t j) const;
    RatFun scalar_det() const;
    MatForm scalar_inverse() const;

    MatForm with_universe(GenUniversePtr target) const;

  private:
    GenUniversePtr guni_;
    std::size_t rows_, cols_;
    std::vector<Form> entries_;
};

// Tr(X * Y) without materializing the product.
Form trace_prod(const MatForm& x, const MatForm& y);

// Curvature F(A) = dA - A^A of a square matrix of 1-forms.
MatForm curvature(const MatForm& a);

// Coefficients of F(tA) = t dA - t^2 A^A as a polynomial in t, indexed by
// the power of t: {0, dA, -A^A}.
std::vector<MatForm> curvature_t(const MatForm& a);

// Gauge transform g A g^{-1} + dg g^{-1} by an invertible 0-form matrix.
MatForm gauge(const MatForm& a, const MatForm& g);

} // namespace csrr

#endif
