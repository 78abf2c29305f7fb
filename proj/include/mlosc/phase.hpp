#ifndef MLOSC_PHASE_HPP
#define MLOSC_PHASE_HPP

#include <string>

#include "mlosc/errors.hpp"

namespace mlosc {

/// Homogeneous binary cubic c30*x1^3 + c21*x1^2 x2 + c12*x1 x2^2 + c03*x2^3.
struct CubicForm {
    double c30 = 0, c21 = 0, c12 = 0, c03 = 0;
};

/// The five GL(2,R) orbits of binary cubics:
///   DInf    <-> x1^2 x2
///   D4Plus  <-> x1^2 x2 + x2^3
///   D4Minus <-> x1^2 x2 - x2^3
///   A2      <-> x1^3
///   Zero    <-> 0
enum class PhaseClass { DInf, D4Plus, D4Minus, A2, Zero };

const char* to_string(PhaseClass c);
PhaseClass phase_class_from_string(const std::string& s); // throws DomainError

CubicForm canonical_form(PhaseClass c);

/// Invertible change of variables x -> T x plus a positive overall factor.
struct LinearChange {
    double t11 = 1, t12 = 0, t21 = 0, t22 = 1;
    double scale = 1.0;
};

/// Coefficients of scale * f(t11 x1 + t12 x2, t21 x1 + t22 x2).
/// Throws SingularTransformError when |det T| < 1e-12 * ||T||_F^2.
CubicForm apply_linear_change(const CubicForm& form, const LinearChange& T);

/// Orbit classification by the root structure of the associated projective
/// cubic: discriminant sign separates D4+/D4- from the multiple-root classes,
/// the Hessian covariant separates A2 (perfect cube) from DInf.
PhaseClass classify(const CubicForm& form, double tol = 1e-9);

struct NormalizeResult {
    PhaseClass cls;
    LinearChange change;   // apply_linear_change(form, change) ~ canonical_form(cls)
    double residual;       // max-coefficient distance to the canonical form
};

/// Constructs the reducing transformation from the projective roots (the
/// multiple root, or the lone real root, is sent to a canonical axis).
/// Throws IllConditionedError when distinct roots are closer than tol in the
/// chordal metric (the class boundary).
NormalizeResult normalize(const CubicForm& form, double tol = 1e-9);

} // namespace mlosc

#endif
