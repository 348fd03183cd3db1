#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "trustnet/errors.hpp"

namespace trustnet {

// The value spaces trust ratings live in: commutative monoids (+, 0) and
// (*, 1) with distributivity and an annihilating zero. All carriers are
// embedded in double; the kind decides which doubles are valid elements
// and what the two operations mean.
enum class RigKind {
    Naturals,           // (N, +, *, 0, 1)
    NonnegReals,        // (R+, +, *, 0, 1)
    UnitIntervalMaxMul, // ([0,1], max, *, 0, 1)
    Boolean,            // ({0,1}, or, and, 0, 1)
    MinMaxLattice,      // ([0,1], max, min, 0, 1) - distributive lattice
};

inline const char* rig_name(RigKind kind) {
    switch (kind) {
    case RigKind::Naturals: return "naturals";
    case RigKind::NonnegReals: return "nonneg-reals";
    case RigKind::UnitIntervalMaxMul: return "unit-interval-max-mul";
    case RigKind::Boolean: return "boolean";
    case RigKind::MinMaxLattice: return "min-max-lattice";
    }
    return "?";
}

inline bool rig_contains(RigKind kind, double v) {
    if (!std::isfinite(v)) return false;
    switch (kind) {
    case RigKind::Naturals:
        return v >= 0.0 && v == std::floor(v);
    case RigKind::NonnegReals:
        return v >= 0.0;
    case RigKind::UnitIntervalMaxMul:
    case RigKind::MinMaxLattice:
        return v >= 0.0 && v <= 1.0;
    case RigKind::Boolean:
        return v == 0.0 || v == 1.0;
    }
    return false;
}

inline double rig_zero(RigKind) { return 0.0; }

inline double rig_one(RigKind) { return 1.0; }

namespace detail {
inline void require_element(RigKind kind, double v) {
    if (!rig_contains(kind, v)) {
        throw std::domain_error(std::string(rig_name(kind)) + ": value " +
                                std::to_string(v) + " outside carrier");
    }
}
} // namespace detail

inline double rig_add(RigKind kind, double a, double b) {
    detail::require_element(kind, a);
    detail::require_element(kind, b);
    switch (kind) {
    case RigKind::Naturals:
    case RigKind::NonnegReals:
        return a + b;
    case RigKind::UnitIntervalMaxMul:
    case RigKind::MinMaxLattice:
        return a > b ? a : b;
    case RigKind::Boolean:
        return (a != 0.0 || b != 0.0) ? 1.0 : 0.0;
    }
    return 0.0;
}

inline double rig_mul(RigKind kind, double a, double b) {
    detail::require_element(kind, a);
    detail::require_element(kind, b);
    switch (kind) {
    case RigKind::Naturals:
    case RigKind::NonnegReals:
    case RigKind::UnitIntervalMaxMul:
        return a * b;
    case RigKind::MinMaxLattice:
        return a < b ? a : b;
    case RigKind::Boolean:
        return (a != 0.0 && b != 0.0) ? 1.0 : 0.0;
    }
    return 0.0;
}

// A trust rating on one of the two equivalent scales. Unbounded ratings
// live in R+, bounded ones in [0,1); the scales are linked by
//
//     beta = 1 - 2^(-b)        b = -log2(1 - beta)
//
// A bounded rating additionally carries its complement 1 - beta. For
// ratings produced by to_bounded, the complement holds 2^(-b) directly,
// which keeps the inverse transform well conditioned near beta = 1 (the
// naive 1 - beta loses ~7 digits of b around b = 30).
class Rating {
public:
    enum class Scale { Unbounded, Bounded };

    static Rating unbounded(double b) {
        if (!(b >= 0.0) || !std::isfinite(b))
            throw std::domain_error("unbounded rating must be a finite nonnegative real");
        Rating r;
        r.scale_ = Scale::Unbounded;
        r.value_ = b;
        r.complement_ = 0.0;
        return r;
    }

    static Rating bounded(double beta) {
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::domain_error("bounded rating must lie in [0,1]");
        Rating r;
        r.scale_ = Scale::Bounded;
        r.value_ = beta;
        r.complement_ = 1.0 - beta;
        return r;
    }

    Scale scale() const { return scale_; }

    // The rating on its own scale.
    double value() const { return value_; }

    // 1 - value for bounded ratings; exact where it matters.
    double complement() const { return complement_; }

private:
    friend Rating to_bounded(const Rating&);

    static Rating bounded_from_complement(double beta, double complement) {
        Rating r;
        r.scale_ = Scale::Bounded;
        r.value_ = beta;
        r.complement_ = complement;
        return r;
    }

    Rating() = default;
    Scale scale_ = Scale::Unbounded;
    double value_ = 0.0;
    double complement_ = 1.0;
};

// beta(b) = 1 - 2^(-b), mapping R+ onto [0,1). Strictly increasing,
// to_bounded(0) = 0. Bounded input passes through unchanged.
inline Rating to_bounded(const Rating& r) {
    if (r.scale() == Rating::Scale::Bounded) return r;
    const double b = r.value();
    const double beta = -std::expm1(-b * M_LN2); // accurate for small b
    const double complement = std::exp2(-b);     // accurate for large b
    return Rating::bounded_from_complement(beta, complement);
}

// b(beta) = -log2(1 - beta). Defined on [0,1); beta = 1 would be infinite
// trust. Unbounded input passes through unchanged.
inline Rating to_unbounded(const Rating& r) {
    if (r.scale() == Rating::Scale::Unbounded) return r;
    if (!(r.value() < 1.0))
        throw std::domain_error("bounded rating 1 has no finite unbounded image");
    const double b = -std::log2(r.complement());
    return Rating::unbounded(b == 0.0 ? 0.0 : b); // normalize -0

}

inline Rating to_bounded(double unbounded_value) {
    return to_bounded(Rating::unbounded(unbounded_value));
}

inline Rating to_unbounded_from(double bounded_value) {
    return to_unbounded(Rating::bounded(bounded_value));
}

} // namespace trustnet
