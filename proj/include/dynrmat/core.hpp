// core.hpp
// Scalar types, error kinds and numeric guards shared by every module.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynrmat {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Function of the dynamical vector lambda.
using LambdaFn = std::function<cplx(const CVec&)>;

/// Unit dynamical shift lambda_k -> lambda_k + 1.
inline constexpr double kShift = 1.0;

/// Denominators with magnitude below this are treated as poles.
inline constexpr double kPoleGuard = 1e-13;

enum class ErrorKind {
    InvalidInput,   ///< malformed or inconsistent data
    Pole,           ///< evaluation hit a singular point
    NotInFamily,    ///< input is not a member of the classified family
    NotASolution,   ///< structural relations of a solution are violated
    Ambiguous,      ///< numerical detection cannot decide; add samples
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Outcome of a total validation function.
struct ValidationResult {
    bool ok = true;
    std::string message;
    std::vector<int> indices;  ///< offending indices, 1-based

    explicit operator bool() const noexcept { return ok; }
    static ValidationResult success() { return {}; }
    static ValidationResult failure(std::string msg, std::vector<int> idx = {}) {
        return {false, std::move(msg), std::move(idx)};
    }
};

/// When set, guarded_div yields NaN instead of throwing; see DynamicalRMatrix::partial_coefficients.
inline thread_local bool tl_lenient_poles = false;

/// Returns num/den, throwing a pole error when |den| < kPoleGuard.
inline cplx guarded_div(cplx num, cplx den, const char* where) {
    if (std::abs(den) < kPoleGuard) {
        if (tl_lenient_poles) return {std::nan(""), std::nan("")};
        throw Error(ErrorKind::Pole, std::string("pole in ") + where);
    }
    return num / den;
}

/// lambda + kShift e_k for a 1-based index k.
inline CVec shifted(const CVec& lambda, int k) {
    CVec out = lambda;
    out[static_cast<size_t>(k - 1)] += kShift;
    return out;
}

/// Principal square root: nonnegative real part, nonnegative imaginary part on the cut.
inline cplx principal_sqrt(cplx z) {
    cplx r = std::sqrt(z);
    if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
    return r;
}

}  // namespace dynrmat
