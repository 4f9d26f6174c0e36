#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "reqclass/error.hpp"

namespace reqclass {

/// dot(u, v) / (|u| |v|). Throws on dimension mismatch or a zero-norm operand.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
    using Scalar = typename DerivedA::Scalar;
    if (u.size() != v.size()) throw DomainError("cosine: dimension mismatch");
    const Scalar nu = u.norm();
    const Scalar nv = v.norm();
    if (nu == Scalar(0) || nv == Scalar(0)) throw DomainError("cosine: zero-norm vector");
    return u.dot(v.template cast<Scalar>()) / (nu * nv);
}

/// Sparse cosine; 0 when either operand is empty or all-zero.
template <typename Scalar>
Scalar sparse_cosine(const Eigen::SparseVector<Scalar>& a, const Eigen::SparseVector<Scalar>& b) {
    const Scalar na = a.norm();
    const Scalar nb = b.norm();
    if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
    return a.dot(b) / (na * nb);
}

}  // namespace reqclass
