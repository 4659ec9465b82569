#pragma once

#include <stdexcept>
#include <string>

namespace quadevo {

// Base of every error raised by the library. Callers that only care about
// "the computation failed" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

// A commutator or a transformed generator failed to expand in the basis.
class ClosureViolation : public Error {
public:
    ClosureViolation(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class GramSingular : public Error {
public:
    using Error::Error;
};

// The product-of-exponentials coordinates hit a (numerical) singularity.
class DecompositionSingular : public Error {
public:
    DecompositionSingular(double t, double condition);
    double time() const noexcept { return t_; }
    double condition() const noexcept { return condition_; }

private:
    double t_;
    double condition_;
};

class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(double t, double step);
    double time() const noexcept { return t_; }
    double step() const noexcept { return step_; }

private:
    double t_;
    double step_;
};

class SingularA : public Error {
public:
    using Error::Error;
};

class NotBogoliubov : public Error {
public:
    NotBogoliubov(const std::string& what, double defect)
        : Error(what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

class ZeroMomentum : public Error {
public:
    using Error::Error;
};

class UnresolvedGrid : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace quadevo
