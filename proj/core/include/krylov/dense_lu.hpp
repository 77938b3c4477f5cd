#pragma once

#include <stdexcept>

#include "krylov/la.hpp"

namespace krylov::reference {

/// Direct solve of A x = b by Gaussian elimination with partial pivoting.
/// Self-contained: it reads the operands but uses none of the library
/// kernels, so it can serve as an independent check on the iterative solver.
/// Throws std::domain_error if a pivot is exactly zero.
Vector lu_solve(const DenseMatrix& a, const Vector& b);

}  // namespace krylov::reference
