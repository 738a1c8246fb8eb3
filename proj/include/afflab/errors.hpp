#pragma once

#include <stdexcept>
#include <string>

namespace afflab {

// Base class for all afflab errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Text that does not parse under the expression grammar. Carries the byte
// offset of the first offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Parameter outside the domain stated for a catalogue family.
class ParamDomainError : public Error {
public:
    using Error::Error;
};

// Solution space came out with the wrong dimension; signals a solver bug,
// the theory guarantees dimension 3 for every constant-coefficient model.
class DimensionError : public Error {
public:
    using Error::Error;
};

// No catalogue pattern matched within tolerance.
class ClassifyError : public Error {
public:
    using Error::Error;
};

// Span does not factor as exp(g) * {1, f1, f2}.
class FactorError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class SingularJacobianError : public Error {
public:
    using Error::Error;
};

class UnknownMapError : public Error {
public:
    using Error::Error;
};

// exp() argument out of double range during evaluation.
class EvalOverflowError : public Error {
public:
    using Error::Error;
};

}  // namespace afflab
