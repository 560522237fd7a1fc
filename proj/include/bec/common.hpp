#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bec {

using Complex = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<Complex>;

/// Spatial frequency, momentum or position. Unused trailing axes are zero.
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }

/// Raised when two fields or a field and a symbol live on different lattices.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for non-integrable weight configurations (e.g. unregularized 1-D weight).
class IntegrabilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// N_c must stay strictly positive for the collision operators to be well posed.
class CouplingPositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The kinetic density went negative beyond the tracking threshold.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace bec
