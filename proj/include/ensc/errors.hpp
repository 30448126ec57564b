#ifndef ENSC_ERRORS_HPP
#define ENSC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ensc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated.
class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

/// Operands live on incompatible grids or have mismatched dimensions.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

/// Requested basis order exceeds what the grid can resolve.
class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what) : Error(what) {}
};

/// The steering Gramian of one subsystem is numerically singular,
/// i.e. that subsystem is uncontrollable on the horizon.
class SingularGramianError : public Error {
public:
    SingularGramianError(std::size_t sample_index, const std::string& what)
        : Error(what), sample_index_(sample_index) {}
    std::size_t sample_index() const { return sample_index_; }

private:
    std::size_t sample_index_;
};

/// A simulated state left the finite range.
class NumericalBlowupError : public Error {
public:
    explicit NumericalBlowupError(const std::string& what) : Error(what) {}
};

/// An eigenvalue of the discretized projection operator fell outside the
/// admissible interval, signalling an inconsistent discretization.
class SpectrumViolationError : public Error {
public:
    explicit SpectrumViolationError(const std::string& what) : Error(what) {}
};

/// Scenario file could not be parsed or failed validation. Collects every
/// violation found so the user can fix them in one pass.
class ScenarioError : public Error {
public:
    explicit ScenarioError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "scenario invalid:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

/// A run artifact required for plot emission does not exist.
class MissingArtifactError : public Error {
public:
    explicit MissingArtifactError(const std::string& what) : Error(what) {}
};

}  // namespace ensc

#endif
