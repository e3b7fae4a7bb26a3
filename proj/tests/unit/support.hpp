#pragma once

#include "numeric.hpp"

// gmpxx's two-argument mpq_class constructor does not canonicalize, and
// comparisons assume canonical form.
inline fhl::Rational Q(long p, long q) {
  fhl::Rational r(p, q);
  r.canonicalize();
  return r;
}
